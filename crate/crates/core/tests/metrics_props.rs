mod common;

use common::{oracle, rel_close};
use proptest::prelude::*;
use qoswb::metrics::*;
use qoswb::model::*;

fn unit_interval() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn positive() -> impl Strategy<Value = f64> {
    1e-6..1e9f64
}

fn non_negative() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 0.0..1e9f64]
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bandwidth_matches_oracle(bits in any::<u32>(), seconds in positive()) {
        let v = bandwidth(bits as u64, seconds).unwrap();
        prop_assert!(rel_close(v.value, oracle::bandwidth(bits as u64, seconds)));
        prop_assert_eq!(v.unit, Unit::BitsPerSecond);
    }

    #[test]
    fn bandwidth_rejects_non_positive_time(bits in any::<u64>(), seconds in -1e6..=0.0f64) {
        prop_assert_eq!(bandwidth(bits, seconds), Err(MetricError::UndefinedBandwidth));
    }

    #[test]
    fn integrity_in_range_per_pair(pairs in prop::collection::vec((unit_interval(), unit_interval()), 0..8)) {
        let input: Vec<ThreatPair> = pairs.iter().map(|&(threat, security)| ThreatPair { threat, security }).collect();
        let v = integrity(&input).unwrap().value;
        prop_assert!(rel_close(v, oracle::integrity(&pairs)));
        prop_assert!(v >= 0.0 && v <= pairs.len() as f64);
    }

    #[test]
    fn integrity_decreases_with_threat(t in unit_interval(), s in 0.0..1.0f64, dt in 0.0..1.0f64) {
        let t2 = (t + dt).min(1.0);
        let a = integrity(&[ThreatPair { threat: t, security: s }]).unwrap().value;
        let b = integrity(&[ThreatPair { threat: t2, security: s }]).unwrap().value;
        prop_assert!(b <= a);
    }

    #[test]
    fn integrity_rejects_non_probability(t in 1.0001..10.0f64) {
        let is_probability_error = matches!(
            integrity(&[ThreatPair { threat: t, security: 0.5 }]),
            Err(MetricError::Probability { .. })
        );
        prop_assert!(is_probability_error);
    }

    #[test]
    fn availability_is_a_ratio(mttf in non_negative(), mttr in non_negative()) {
        prop_assume!(mttf + mttr > 0.0);
        let r = reliability_availability(mttf, mttr).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.availability));
        prop_assert!(rel_close(r.mtbf, oracle::mtbf(mttf, mttr)));
        prop_assert!(rel_close(r.availability, oracle::availability(mttf, mttr)));
    }

    #[test]
    fn availability_falls_as_repair_time_grows(mttf in positive(), mttr in non_negative(), extra in positive()) {
        let a = reliability_availability(mttf, mttr).unwrap().availability;
        let b = reliability_availability(mttf, mttr + extra).unwrap().availability;
        prop_assert!(b <= a);
    }

    #[test]
    fn usability_ratios(learn in positive(), total in 1u64..1_000_000, frac in unit_interval()) {
        let ok = ((total as f64) * frac) as u64;
        let u = usability(learn, ok, total).unwrap();
        prop_assert!((0.0..=1.0).contains(&u.success_ratio));
        prop_assert!(rel_close(u.success_ratio, oracle::success_ratio(ok, total)));
        prop_assert!(rel_close(u.learnability, oracle::learnability(learn)));
    }

    #[test]
    fn success_count_above_total_is_rejected(total in 1u64..1000, over in 1u64..1000) {
        let is_count_error = matches!(usability(1.0, total + over, total), Err(MetricError::CountExceedsTotal { .. }));
        prop_assert!(is_count_error);
    }

    #[test]
    fn mttc_is_mean_of_stage_sums(changes in prop::collection::vec(prop::array::uniform4(non_negative()), 1..6)) {
        let input: Vec<ChangeRequest> = changes
            .iter()
            .map(|c| ChangeRequest { analyze: c[0], modify: c[1], test: c[2], distribute: c[3] })
            .collect();
        prop_assert!(rel_close(changeability(&input).unwrap().value, oracle::mttc(&changes)));
    }

    #[test]
    fn latency_is_causal(a in 0u64..1u64 << 40, b in 0u64..1u64 << 40) {
        let r = latency(Ticks(a), Ticks(b));
        if b >= a {
            prop_assert_eq!(r.unwrap().value, oracle::latency(a, b));
        } else {
            let is_causality_error = matches!(r, Err(MetricError::CausalityViolation { .. }));
            prop_assert!(is_causality_error);
        }
    }

    #[test]
    fn customizability_is_a_ratio(nd in 0u64..1_000_000, ns in 0u64..1_000_000) {
        prop_assume!(nd + ns > 0);
        let v = customizability(nd, ns).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(rel_close(v, oracle::customizability(nd, ns)));
    }

    #[test]
    fn testing_time_adds(prep in non_negative(), exec in non_negative()) {
        prop_assert!(rel_close(testing_time(prep, exec).unwrap().value, oracle::testing_time(prep, exec)));
    }

    #[test]
    fn delta_lb_efficiency_flag(actual in non_negative(), expected in positive()) {
        let r = variable_load(actual, expected).unwrap();
        prop_assert!(rel_close(r.delta_lb, oracle::delta_lb(actual, expected)));
        prop_assert_eq!(r.efficient, r.delta_lb <= 1.0);
    }

    #[test]
    fn self_service_bounded_when_visits_dominate(visits in 1u64..1_000_000, frac in unit_interval()) {
        let inquiries = ((visits as f64) * frac) as u64;
        let v = self_service_rate(inquiries, visits).unwrap().value;
        prop_assert!((0.0..=100.0).contains(&v));
        prop_assert!(rel_close(v, oracle::self_service(inquiries, visits)));
    }

    #[test]
    fn accuracy_peaks_at_expected(expected in positive(), observed in non_negative()) {
        let a = accuracy(expected, observed).unwrap();
        prop_assert!(a <= 1.0);
        prop_assert!(rel_close(a, oracle::accuracy(expected, observed)));
        prop_assert_eq!(accuracy(expected, expected).unwrap(), 1.0);
    }

    #[test]
    fn completeness_and_defects(existing in 1u64..10_000, requested in 1u64..10_000, defects in 0u64..10_000) {
        let c = correctness(1.0, 1.0, existing, requested, defects).unwrap();
        prop_assert!(rel_close(c.completeness, oracle::completeness(existing, requested)));
        prop_assert!(rel_close(c.defects_per_cs, oracle::defects_per_cs(defects, existing)));
    }

    #[test]
    fn serviceability_is_a_ratio(up in non_negative(), down in non_negative()) {
        prop_assume!(up + down > 0.0);
        let v = serviceability(up, down).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(rel_close(v, oracle::serviceability(up, down)));
    }

    #[test]
    fn computing_capacity_unclamped(actual in non_negative(), expected in positive()) {
        let v = computing_capacity(actual, expected).unwrap().value;
        prop_assert!(rel_close(v, oracle::computing_capacity(actual, expected)));
    }

    #[test]
    fn accessibility_is_a_percentage(total in 1u64..1_000_000, frac in unit_interval()) {
        let timeouts = ((total as f64) * frac) as u64;
        let v = internet_accessibility(timeouts, total).unwrap().value;
        prop_assert!((0.0..=100.0).contains(&v));
        prop_assert!(rel_close(v, oracle::internet_accessibility(timeouts, total)));
    }

    #[test]
    fn portability_is_a_ratio(total in 1u64..1000, frac in unit_interval()) {
        let compatible = ((total as f64) * frac) as u64;
        let v = portability(compatible, total).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(rel_close(v, oracle::portability(compatible, total)));
    }

    #[test]
    fn persistence_matches_brute_force(
        series in prop::collection::vec(0.0..100.0f64, 1..12),
        p in 0.001..=1.0f64,
    ) {
        prop_assume!(series.iter().sum::<f64>() > 0.0);
        let k = persistence(&series, p).unwrap();
        prop_assert!(k >= 1 && k <= series.len());
        prop_assert_eq!(k, oracle::persistence(&series, p));
    }

    #[test]
    fn persistence_monotone_in_proportion(
        series in prop::collection::vec(0.1..100.0f64, 1..12),
        p in 0.001..=1.0f64,
        q in 0.001..=1.0f64,
    ) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        prop_assert!(persistence(&series, lo).unwrap() <= persistence(&series, hi).unwrap());
    }

    #[test]
    fn throughput_per_kind(quantity in non_negative(), seconds in positive(), k in 0usize..5) {
        let kind = ServerKind::ALL[k];
        let v = performance_throughput(kind, quantity, seconds).unwrap();
        prop_assert!(rel_close(v.value, oracle::throughput(kind == ServerKind::Mail, quantity, seconds)));
        prop_assert_eq!(v.unit, throughput_unit(kind));
    }

    #[test]
    fn flexible_capacity_is_sum_of_degrees(points in prop::collection::vec((non_negative(), non_negative(), non_negative()), 0..10)) {
        let input: Vec<FlexiblePoint> = points
            .iter()
            .enumerate()
            .map(|(i, &(f, s, fe))| FlexiblePoint::new(format!("p{i}"), f, s, fe))
            .collect();
        let pairs: Vec<(f64, f64)> = points.iter().map(|&(f, s, _)| (f, s)).collect();
        let flex = flexibility(&input).unwrap();
        prop_assert!(rel_close(flex.capacity, oracle::flexible_capacity(&pairs)));
        for (i, &(f, s, fe)) in points.iter().enumerate() {
            prop_assert!(rel_close(flex.degrees[i], oracle::flexible_degree(f, s)));
            prop_assert_eq!(flex.usable[i], fe >= f);
        }
    }

    #[test]
    fn security_coverage_counts(cells in prop::collection::vec(prop::collection::vec(any::<bool>(), 7), 5)) {
        let mut m = SecurityMatrix::standard();
        m.cells = cells.clone();
        let cov = security_coverage(&m).unwrap();
        for (j, code) in SECURITY_DRIVERS.iter().enumerate() {
            let expected = cells.iter().filter(|row| row[j]).count();
            prop_assert_eq!(cov.driver(code), Some(expected));
        }
        let marked = cells.iter().flatten().filter(|&&c| c).count();
        prop_assert!(rel_close(cov.coverage_ratio, marked as f64 / 35.0));
    }

    #[test]
    fn evaluate_never_panics_on_valid_observations(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let obs = common::random_observations(&mut r);
        let report = evaluate(&obs);
        if let Ok(report) = report {
            for e in report.entries() {
                prop_assert!(e.value.is_finite(), "{} = {}", e.metric_name, e.value);
                prop_assert_eq!(e.inputs_digest.len(), 16);
            }
        }
    }
}

#[test]
fn confidence_levels_are_fixed() {
    let got: Vec<f64> = FulfillmentLevel::ALL.iter().map(|&l| confidence_lookup(l).value).collect();
    assert_eq!(got, [100.0, 75.0, 50.0, 25.0, 0.0]);
}

#[test]
fn mttc_rejects_empty() {
    assert_eq!(changeability(&[]), Err(MetricError::NoChangeRequests));
}
