//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use qoswb::io::WorkloadFile;
use qoswb::model::*;
use qoswb::simulator::Resource;

pub const REL_TOL: f64 = 1e-12;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rel_close(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

/// Straight-line restatements of each formula, kept apart from the library code.
pub mod oracle {
    pub fn bandwidth(bits: u64, seconds: f64) -> f64 {
        bits as f64 / seconds
    }

    pub fn integrity(pairs: &[(f64, f64)]) -> f64 {
        let mut s = 0.0;
        for &(t, sec) in pairs {
            s += (1.0 - t) * (1.0 - sec);
        }
        s
    }

    pub fn learnability(learn_time: f64) -> f64 {
        1.0 / learn_time
    }

    pub fn success_ratio(ok: u64, total: u64) -> f64 {
        ok as f64 / total as f64
    }

    pub fn mtbf(mttf: f64, mttr: f64) -> f64 {
        mttf + mttr
    }

    pub fn availability(mttf: f64, mttr: f64) -> f64 {
        mttf / (mttf + mttr)
    }

    pub fn mttc(changes: &[[f64; 4]]) -> f64 {
        let total: f64 = changes.iter().map(|c| c[0] + c[1] + c[2] + c[3]).sum();
        total / changes.len() as f64
    }

    pub fn latency(input: u64, output: u64) -> f64 {
        (output - input) as f64
    }

    pub fn customizability(nd: u64, ns: u64) -> f64 {
        nd as f64 / (nd + ns) as f64
    }

    pub fn testing_time(prep: f64, exec: f64) -> f64 {
        prep + exec
    }

    pub fn delta_lb(actual: f64, expected: f64) -> f64 {
        actual / expected
    }

    pub fn self_service(inquiries: u64, visits: u64) -> f64 {
        100.0 - 100.0 * inquiries as f64 / visits as f64
    }

    pub fn accuracy(expected: f64, observed: f64) -> f64 {
        (expected - (expected - observed).abs()) / expected
    }

    pub fn completeness(existing: u64, requested: u64) -> f64 {
        existing as f64 / requested as f64
    }

    pub fn defects_per_cs(defects: u64, existing: u64) -> f64 {
        defects as f64 / existing as f64
    }

    pub fn serviceability(up: f64, down: f64) -> f64 {
        up / (up + down)
    }

    pub fn computing_capacity(actual: f64, expected: f64) -> f64 {
        actual / expected
    }

    pub fn internet_accessibility(timeouts: u64, total: u64) -> f64 {
        timeouts as f64 * 100.0 / total as f64
    }

    pub fn portability(compatible: u64, total: u64) -> f64 {
        compatible as f64 / total as f64
    }

    /// Brute force over every prefix length.
    pub fn persistence(series: &[f64], p: f64) -> usize {
        let total: f64 = series.iter().sum();
        (1..=series.len())
            .find(|&k| series[..k].iter().sum::<f64>() >= p * total)
            .unwrap_or(series.len())
    }

    /// Per-unit rate; mail servers report per minute.
    pub fn throughput(per_minute: bool, quantity: f64, seconds: f64) -> f64 {
        if per_minute {
            quantity * 60.0 / seconds
        } else {
            quantity / seconds
        }
    }

    pub fn flexible_degree(f: f64, s: f64) -> f64 {
        s / (f + 1.0)
    }

    pub fn flexible_capacity(points: &[(f64, f64)]) -> f64 {
        let mut c = 0.0;
        for &(f, s) in points {
            c += s / (f + 1.0);
        }
        c
    }
}

pub fn random_ticks(r: &mut StdRng, hi: u64) -> Ticks {
    Ticks(r.gen_range(0..=hi))
}

fn id(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}

fn maybe<T>(r: &mut StdRng, f: impl FnOnce(&mut StdRng) -> T) -> Option<T> {
    if r.gen_bool(0.5) {
        Some(f(r))
    } else {
        None
    }
}

fn weight(r: &mut StdRng) -> f64 {
    if r.gen_bool(0.2) {
        0.0
    } else {
        r.gen::<f64>()
    }
}

pub fn random_spec(r: &mut StdRng, workload_id: String) -> WorkloadSpec {
    let wtype = *WorkloadType::ALL.choose(r).unwrap();
    let mut demand = DemandProfile::new(weight(r), weight(r), weight(r), weight(r));
    if demand.weights().iter().all(|&w| w == 0.0) {
        demand.cpu_weight = 1.0;
    }
    if r.gen_bool(0.3) {
        let n = r.gen_range(0..4);
        demand.load_series = Some(
            (0..n)
                .map(|i| LoadSample { at: Ticks(i * 1000), load: r.gen::<f64>() * 500.0 })
                .collect(),
        );
    }
    let begin = if r.gen_bool(0.3) {
        BeginTime::Fixed { at: random_ticks(r, 200) }
    } else {
        let earliest = random_ticks(r, 100);
        let latest = maybe(r, |r| Ticks(earliest.0 + r.gen_range(0..300)));
        BeginTime::Elastic { earliest, latest }
    };
    let time_bound = maybe(r, |r| Ticks(r.gen_range(1..200)));
    let hard_stop = match (begin, time_bound) {
        // Keep fixed-begin specs consistent so they validate.
        (BeginTime::Fixed { at }, Some(tb)) => maybe(r, |r| Ticks(at.0 + tb.0 + r.gen_range(0..100))),
        _ => maybe(r, |r| Ticks(r.gen_range(1..600))),
    };
    let mut spec = WorkloadSpec::new(workload_id, wtype, demand);
    spec.name = format!("workload {}", r.gen::<u16>());
    spec.constraints = WorkloadConstraints {
        time_bound,
        begin,
        hard_stop,
        interruptible: r.gen_bool(0.5),
        min_resource: maybe(r, |r| r.gen::<f64>() * 50.0),
        urgency: r.gen_range(0..=3),
        budget: maybe(r, |r| r.gen::<f64>() * 1e4),
    };
    spec.cost = maybe(r, |r| CostRecord {
        hardware: r.gen::<f64>() * 100.0,
        software: r.gen::<f64>() * 100.0,
        maintenance: r.gen::<f64>() * 100.0,
        provision: r.gen::<f64>() * 100.0,
    });
    spec.rate = if r.gen_bool(0.5) {
        Rate::OneShot
    } else {
        Rate::Periodic { period: Ticks(r.gen_range(1..10_000_000)) }
    };
    spec.characteristics = Characteristics {
        unstable_demand: r.gen(),
        standard: r.gen(),
        self_governing: r.gen(),
        not_critical: r.gen(),
    };
    spec
}

fn prob(r: &mut StdRng) -> f64 {
    r.gen::<f64>()
}

pub fn random_observations(r: &mut StdRng) -> ObservationSet {
    let count = |r: &mut StdRng| r.gen_range(0..10_000u64);
    ObservationSet {
        bandwidth: maybe(r, |r| BandwidthSample { bits: count(r), seconds: 0.5 + r.gen::<f64>() * 10.0 }),
        integrity: maybe(r, |r| {
            (0..r.gen_range(0..4)).map(|_| ThreatPair { threat: prob(r), security: prob(r) }).collect()
        }),
        usability: maybe(r, |r| {
            let total = r.gen_range(1..1000);
            UsabilitySample {
                learn_time: 1.0 + r.gen::<f64>() * 1000.0,
                successful_ops: r.gen_range(0..=total),
                total_ops: total,
            }
        }),
        failures: maybe(r, |r| FailureSample { mttf: 1.0 + r.gen::<f64>() * 1e6, mttr: r.gen::<f64>() * 1e3 }),
        changes: maybe(r, |r| {
            (0..r.gen_range(1..4))
                .map(|_| ChangeRequest {
                    analyze: r.gen::<f64>() * 10.0,
                    modify: r.gen::<f64>() * 10.0,
                    test: r.gen::<f64>() * 10.0,
                    distribute: r.gen::<f64>() * 10.0,
                })
                .collect()
        }),
        latency: maybe(r, |r| {
            let input = r.gen_range(0..1000);
            LatencySample { input_time: Ticks(input), output_time: Ticks(input + r.gen_range(0..1000)) }
        }),
        fulfillment: maybe(r, |r| *FulfillmentLevel::ALL.choose(r).unwrap()),
        customization: maybe(r, |r| ChangeCounts {
            dynamic_changes: r.gen_range(1..50),
            static_changes: r.gen_range(0..50),
        }),
        testing: maybe(r, |r| TestingSample { prep: r.gen::<f64>() * 60.0, exec: r.gen::<f64>() * 60.0 }),
        load: maybe(r, |r| LoadSnapshot { actual: r.gen::<f64>() * 200.0, expected: 1.0 + r.gen::<f64>() * 100.0 }),
        support: maybe(r, |r| SupportCounts { inquiries: r.gen_range(0..100), visits: r.gen_range(1..500) }),
        correctness: maybe(r, |r| CorrectnessSample {
            expected_cs: 1.0 + r.gen::<f64>() * 20.0,
            observed_cs: r.gen::<f64>() * 20.0,
            existing_cs: r.gen_range(1..20),
            requested_cs: r.gen_range(1..20),
            defect_count: r.gen_range(0..20),
        }),
        uptime: maybe(r, |r| UptimeSample { uptime: 1.0 + r.gen::<f64>() * 1e4, downtime: r.gen::<f64>() * 10.0 }),
        usage: maybe(r, |r| UsageSample { actual_usage: r.gen::<f64>() * 10.0, expected_usage: 1.0 + r.gen::<f64>() * 8.0 }),
        timeouts: maybe(r, |r| {
            let total = r.gen_range(1..1000);
            TimeoutCounts { timeout_count: r.gen_range(0..=total), request_count: total }
        }),
        platforms: maybe(r, |r| {
            let total = r.gen_range(1..10);
            PlatformCounts { compatible_platforms: r.gen_range(0..=total), total_platforms: total }
        }),
        uncertainty: maybe(r, |r| UncertaintySeries {
            amounts: (0..r.gen_range(1..6)).map(|_| 0.5 + r.gen::<f64>() * 10.0).collect(),
            proportion: 0.01 + r.gen::<f64>() * 0.99,
        }),
        security: maybe(r, |r| {
            let mut m = SecurityMatrix::standard();
            for row in &mut m.cells {
                for c in row.iter_mut() {
                    *c = r.gen();
                }
            }
            m
        }),
        server_events: maybe(r, |r| {
            (0..r.gen_range(1..4))
                .map(|_| ServerEvents {
                    server_kind: *ServerKind::ALL.choose(r).unwrap(),
                    quantity: r.gen::<f64>() * 1000.0,
                    seconds: 1.0 + r.gen::<f64>() * 60.0,
                })
                .collect()
        }),
        flexible_points: maybe(r, |r| {
            (0..r.gen_range(0..4))
                .map(|i| FlexiblePoint::new(id("fxp", i), r.gen::<f64>() * 5.0, r.gen::<f64>() * 10.0, r.gen::<f64>() * 5.0))
                .collect()
        }),
        backup_gb: maybe(r, |r| r.gen::<f64>() * 1000.0),
        visibility_score: maybe(r, prob),
        storage_checklist: maybe(r, |r| StorageChecklist {
            location_documented: r.gen(),
            retention_documented: r.gen(),
            volume_documented: r.gen(),
            mining_protected: r.gen(),
        }),
    }
}

/// A valid workload file with consistent cross references.
pub fn random_workload_file(r: &mut StdRng) -> WorkloadFile {
    let n_workloads = r.gen_range(0..5);
    let n_servers = r.gen_range(if n_workloads > 0 { 1 } else { 0 }..4);
    let workloads: Vec<WorkloadSpec> = (0..n_workloads).map(|i| random_spec(r, id("W", i))).collect();
    let servers: Vec<ServerState> = (0..n_servers)
        .map(|i| {
            let mut s = ServerState::new(id("S", i), 1.0 + r.gen::<f64>() * 500.0);
            for k in 0..r.gen_range(0..3) {
                s.hosted_services.insert(format!("svc{i}_{k}"));
            }
            if !s.hosted_services.is_empty() {
                s.assigned_load = r.gen::<f64>() * 600.0;
            }
            s
        })
        .collect();
    let mut records = Vec::new();
    if n_servers > 0 {
        for w in &workloads {
            for p in 0..r.gen_range(0..3) {
                let k = r.gen_range(1..=n_servers);
                let mut list: Vec<String> = servers.iter().map(|s| s.resource_id.clone()).collect();
                list.shuffle(r);
                list.truncate(k);
                records.push(NonScheduledRecord::new(
                    w.workload_id.clone(),
                    id("P", p),
                    Ticks(r.gen_range(1..100)),
                    list,
                ));
            }
        }
    }
    let observations: BTreeMap<String, ObservationSet> = workloads
        .iter()
        .filter(|_| r.gen_bool(0.6))
        .map(|w| w.workload_id.clone())
        .collect::<Vec<_>>()
        .into_iter()
        .map(|id| (id, random_observations(r)))
        .collect();
    WorkloadFile { version: 1, workloads, records, observations, servers }
}

/// Servers with fluid demands whose total never exceeds total capacity.
pub fn random_pool(r: &mut StdRng) -> Vec<ServerState> {
    let n = r.gen_range(1..7);
    let mut servers: Vec<ServerState> = (0..n)
        .map(|i| ServerState::new(id("S", i), 1.0 + (r.gen::<f64>() * 1000.0).round() / 4.0))
        .collect();
    let capacity: f64 = servers.iter().map(|s| s.expected_load_capacity).sum();
    let budget = capacity * r.gen::<f64>();
    let n_services = r.gen_range(1..6);
    let shares: Vec<f64> = (0..n_services).map(|_| r.gen::<f64>()).collect();
    let share_sum: f64 = shares.iter().sum::<f64>().max(f64::MIN_POSITIVE);
    for (k, share) in shares.iter().enumerate() {
        let host = r.gen_range(0..n);
        let load = (budget * share / share_sum * 1000.0).floor() / 1000.0;
        servers[host].hosted_services.insert(format!("svc{k}"));
        servers[host].assigned_load += load;
    }
    servers
}

pub struct ScheduleCase {
    pub records: Vec<NonScheduledRecord>,
    pub specs: BTreeMap<String, WorkloadSpec>,
    pub resources: Vec<Resource>,
}

/// Records with random constraints over a small resource pool.
pub fn random_schedule_case(r: &mut StdRng) -> ScheduleCase {
    let n_res = r.gen_range(1..5);
    let resources: Vec<Resource> = (0..n_res)
        .map(|i| {
            Resource::new(id("R", i))
                .with_capacity(r.gen_range(1..40) as f64)
                .available_from(random_ticks(r, 30))
        })
        .collect();
    let n_workloads = r.gen_range(1..6);
    let specs: BTreeMap<String, WorkloadSpec> = (0..n_workloads)
        .map(|i| {
            let mut s = random_spec(r, id("W", i));
            // Looser hard stops so a fair share of records is placed.
            if let Some(stop) = s.constraints.hard_stop.as_mut() {
                stop.0 += r.gen_range(0..200);
            }
            (s.workload_id.clone(), s)
        })
        .collect();
    let mut records = Vec::new();
    for w in specs.keys() {
        for p in 0..r.gen_range(1..4) {
            let mut list: Vec<String> = resources.iter().map(|x| x.resource_id.clone()).collect();
            list.shuffle(r);
            list.truncate(r.gen_range(1..=n_res));
            records.push(NonScheduledRecord::new(w.clone(), id("P", p), Ticks(r.gen_range(1..80)), list));
        }
    }
    ScheduleCase { records, specs, resources }
}

/// Small unconstrained instance for comparison with exhaustive search.
pub fn random_small_case(r: &mut StdRng) -> ScheduleCase {
    let n_res = r.gen_range(1..=2);
    let resources: Vec<Resource> = (0..n_res).map(|i| Resource::new(id("R", i))).collect();
    let n = r.gen_range(1..=5);
    let mut specs = BTreeMap::new();
    let mut records = Vec::new();
    for i in 0..n {
        let w = id("W", i);
        specs.insert(w.clone(), WorkloadSpec::new(w.clone(), WorkloadType::GraphicsOriented, DemandProfile::new(0.0, 0.0, 1.0, 0.0)));
        let mut list: Vec<String> = resources.iter().map(|x| x.resource_id.clone()).collect();
        list.shuffle(r);
        list.truncate(r.gen_range(1..=n_res));
        records.push(NonScheduledRecord::new(w, "P0", Ticks(r.gen_range(1..50)), list));
    }
    ScheduleCase { records, specs, resources }
}

/// Best makespan over every assignment of records to listed resources,
/// running each resource's records back to back from time zero.
pub fn optimal_makespan(records: &[NonScheduledRecord]) -> u64 {
    fn go(records: &[NonScheduledRecord], i: usize, loads: &mut BTreeMap<String, u64>) -> u64 {
        if i == records.len() {
            return loads.values().copied().max().unwrap_or(0);
        }
        let mut best = u64::MAX;
        for res in &records[i].resource_list {
            *loads.entry(res.clone()).or_default() += records[i].execution_time.0;
            best = best.min(go(records, i + 1, loads));
            *loads.get_mut(res).unwrap() -= records[i].execution_time.0;
        }
        best
    }
    go(records, 0, &mut BTreeMap::new())
}

/// Constraint predicates restated one by one, independent of the classifier.
pub fn constraints_hold(
    record: &NonScheduledRecord,
    spec: &WorkloadSpec,
    placed: &ScheduledRecord,
    capacity: Option<f64>,
) -> bool {
    let c = &spec.constraints;
    let span = placed.end_time.0 - placed.begin_time.0;
    let time_bound_ok = match c.time_bound {
        Some(tb) => span <= tb.0,
        None => true,
    };
    let begin_ok = match c.begin {
        BeginTime::Fixed { at } => placed.begin_time == at,
        BeginTime::Elastic { earliest, latest } => {
            placed.begin_time >= earliest && latest.is_none_or(|l| placed.begin_time <= l)
        }
    };
    let stop_ok = match c.hard_stop {
        Some(stop) => placed.end_time <= stop,
        None => true,
    };
    let whole = span == record.execution_time.0 || (c.interruptible && span > record.execution_time.0);
    let resource_ok = match (c.min_resource, capacity) {
        (Some(min), Some(cap)) => cap >= min,
        _ => true,
    };
    let listed = record.resource_list.contains(&placed.resource_id);
    time_bound_ok && begin_ok && stop_ok && whole && resource_ok && listed
}
