use std::collections::BTreeMap;

use crate::model::{
    digest_inputs, ObservationSet, QoSReport, ReportEntry, ServerKind, Unit, Verdict,
};

use super::*;

/// A metric failure tagged with the observation group that produced it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("observations.{group}: {source}")]
pub struct EvaluateError {
    pub group: &'static str,
    #[source]
    pub source: MetricError,
}

fn in_unit_range(v: f64) -> Verdict {
    if (0.0..=1.0).contains(&v) {
        Verdict::Pass
    } else {
        Verdict::Anomalous
    }
}

fn in_percent_range(v: f64) -> Verdict {
    if (0.0..=100.0).contains(&v) {
        Verdict::Pass
    } else {
        Verdict::Anomalous
    }
}

struct Builder {
    report: QoSReport,
}

impl Builder {
    fn add(&mut self, name: &str, value: MetricValue, verdict: Option<Verdict>, inputs: &str) {
        self.report
            .push(ReportEntry {
                metric_name: name.to_string(),
                value: value.value,
                unit: value.unit,
                verdict,
                inputs_digest: digest_inputs(inputs),
            })
            .expect("metric names are distinct");
    }
}

fn at<T>(group: &'static str, r: Result<T>) -> std::result::Result<T, EvaluateError> {
    r.map_err(|source| EvaluateError { group, source })
}

/// Computes every metric whose inputs are present.
///
/// Bounded ratios get a `pass` verdict when they land in their range and
/// `anomalous` otherwise; the load ratio passes at or below 1; computing
/// capacity above 1 is `over-utilized`. Unbounded quantities carry no verdict.
pub fn evaluate(obs: &ObservationSet) -> std::result::Result<QoSReport, EvaluateError> {
    let mut b = Builder { report: QoSReport::new() };

    if let Some(s) = &obs.bandwidth {
        let v = at("bandwidth", bandwidth(s.bits, s.seconds))?;
        b.add("bandwidth", v, None, &format!("{s:?}"));
    }
    if let Some(pairs) = &obs.integrity {
        let v = at("integrity", integrity(pairs))?;
        b.add("integrity", v, None, &format!("{pairs:?}"));
    }
    if let Some(s) = &obs.usability {
        let u = at("usability", usability(s.learn_time, s.successful_ops, s.total_ops))?;
        let inputs = format!("{s:?}");
        b.add("learnability", MetricValue::ratio(u.learnability), None, &inputs);
        b.add(
            "success_ratio",
            MetricValue::ratio(u.success_ratio),
            Some(in_unit_range(u.success_ratio)),
            &inputs,
        );
    }
    if let Some(s) = &obs.failures {
        let r = at("failures", reliability_availability(s.mttf, s.mttr))?;
        let inputs = format!("{s:?}");
        b.add("mtbf", MetricValue::new(r.mtbf, Unit::Millis), None, &inputs);
        b.add(
            "availability",
            MetricValue::ratio(r.availability),
            Some(in_unit_range(r.availability)),
            &inputs,
        );
    }
    if let Some(changes) = &obs.changes {
        let v = at("changes", changeability(changes))?;
        b.add("mttc", v, None, &format!("{changes:?}"));
    }
    if let Some(s) = &obs.latency {
        let v = at("latency", latency(s.input_time, s.output_time))?;
        b.add("latency", v, None, &format!("{s:?}"));
    }
    if let Some(level) = obs.fulfillment {
        b.add("confidence", confidence_lookup(level), Some(Verdict::Pass), &format!("{level:?}"));
    }
    if let Some(s) = &obs.customization {
        let v = at("customization", customizability(s.dynamic_changes, s.static_changes))?;
        b.add("customizability", v, Some(in_unit_range(v.value)), &format!("{s:?}"));
    }
    if let Some(s) = &obs.testing {
        let v = at("testing", testing_time(s.prep, s.exec))?;
        b.add("testing_time", v, None, &format!("{s:?}"));
    }
    if let Some(s) = &obs.load {
        let r = at("load", variable_load(s.actual, s.expected))?;
        let verdict = if r.efficient { Verdict::Pass } else { Verdict::Fail };
        b.add("delta_lb", MetricValue::ratio(r.delta_lb), Some(verdict), &format!("{s:?}"));
    }
    if let Some(s) = &obs.support {
        let v = at("support", self_service_rate(s.inquiries, s.visits))?;
        b.add("self_service_rate", v, Some(in_percent_range(v.value)), &format!("{s:?}"));
    }
    if let Some(s) = &obs.correctness {
        let c = at(
            "correctness",
            correctness(s.expected_cs, s.observed_cs, s.existing_cs, s.requested_cs, s.defect_count),
        )?;
        let inputs = format!("{s:?}");
        b.add("accuracy", MetricValue::ratio(c.accuracy), Some(in_unit_range(c.accuracy)), &inputs);
        b.add(
            "completeness",
            MetricValue::ratio(c.completeness),
            Some(in_unit_range(c.completeness)),
            &inputs,
        );
        b.add("defects_per_cs", MetricValue::ratio(c.defects_per_cs), None, &inputs);
    }
    if let Some(s) = &obs.uptime {
        let v = at("uptime", serviceability(s.uptime, s.downtime))?;
        b.add("serviceability", v, Some(in_unit_range(v.value)), &format!("{s:?}"));
    }
    if let Some(s) = &obs.usage {
        let v = at("usage", computing_capacity(s.actual_usage, s.expected_usage))?;
        let verdict = if v.value > 1.0 { Verdict::OverUtilized } else { Verdict::Pass };
        b.add("computing_capacity", v, Some(verdict), &format!("{s:?}"));
    }
    if let Some(s) = &obs.timeouts {
        let v = at("timeouts", internet_accessibility(s.timeout_count, s.request_count))?;
        b.add("internet_accessibility", v, Some(in_percent_range(v.value)), &format!("{s:?}"));
    }
    if let Some(s) = &obs.platforms {
        let v = at("platforms", portability(s.compatible_platforms, s.total_platforms))?;
        b.add("portability", v, Some(in_unit_range(v.value)), &format!("{s:?}"));
    }
    if let Some(s) = &obs.uncertainty {
        let periods = at("uncertainty", persistence(&s.amounts, s.proportion))?;
        b.add("persistence", MetricValue::ratio(periods as f64), None, &format!("{s:?}"));
    }
    if let Some(m) = &obs.security {
        let cov = at("security", security_coverage(m))?;
        let inputs = format!("{m:?}");
        b.add(
            "security_coverage",
            MetricValue::ratio(cov.coverage_ratio),
            Some(in_unit_range(cov.coverage_ratio)),
            &inputs,
        );
        for (driver, n) in &cov.per_driver {
            b.add(&format!("security_coverage.{driver}"), MetricValue::ratio(*n as f64), None, &inputs);
        }
    }
    if let Some(events) = &obs.server_events {
        // Several samples of one kind are pooled: total quantity over total time.
        let mut pooled: BTreeMap<ServerKind, (f64, f64)> = BTreeMap::new();
        for e in events {
            let slot = pooled.entry(e.server_kind).or_insert((0.0, 0.0));
            slot.0 += e.quantity;
            slot.1 += e.seconds;
        }
        for (kind, (quantity, seconds)) in pooled {
            let v = at("server_events", performance_throughput(kind, quantity, seconds))?;
            b.add(
                &format!("throughput.{}", kind.name()),
                v,
                None,
                &format!("{kind:?} {quantity:?} {seconds:?}"),
            );
        }
    }
    if let Some(points) = &obs.flexible_points {
        let f = at("flexible_points", flexibility(points))?;
        b.add("flexible_capacity", MetricValue::ratio(f.capacity), None, &format!("{points:?}"));
    }
    let inputs = format!("{:?} {:?} {:?}", obs.backup_gb, obs.visibility_score, obs.storage_checklist);
    for (name, v) in at("assessments", qualitative_assessments(obs))? {
        let verdict = (v.unit == Unit::Ratio).then(|| in_unit_range(v.value));
        b.add(name, v, verdict, &inputs);
    }

    Ok(b.report)
}
