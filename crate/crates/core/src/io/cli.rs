//! `qoswb` command line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::classifier::classify;
use crate::metrics::evaluate;
use crate::model::{digest_inputs, QoSReport, ReportEntry, Ticks, Unit, Verdict};
use crate::simulator::{balance, schedule, simulate_report, Resource, Schedule, SimReport};

use super::format::{parse_workload_file, WorkloadFile};
use super::report::{emit_report, render_table, ReportFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Disables bold table headers when set.
pub const NO_COLOR_ENV: &str = "QOSWB_NO_COLOR";

#[derive(Debug, Parser)]
#[command(name = "qoswb", version, about = "Workload classification, QoS metrics and capacity simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the taxonomy classification of every workload.
    Classify { file: PathBuf },
    /// Compute QoS metrics from the recorded observations.
    Metrics {
        file: PathBuf,
        /// Only report this workload.
        #[arg(long)]
        workload: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
    },
    /// Balance the server pool by load ratio and print the actions taken.
    Balance { file: PathBuf },
    /// Place the non-scheduled records onto servers.
    Schedule { file: PathBuf },
    /// Run metrics, balancing and scheduling and write one machine report.
    Report {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    styled: bool,
}

/// Reported to the user as-is, with the exit code to use.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

type CmdResult = Result<i32, Failure>;

impl Io<'_> {
    fn table<S: AsRef<str>>(&mut self, headers: &[&str], rows: &[Vec<S>]) {
        let text = render_table(headers, rows);
        self.print_table(&text);
    }

    fn print_table(&mut self, text: &str) {
        let mut lines = text.lines();
        if let Some(header) = lines.next() {
            if self.styled {
                let _ = writeln!(self.out, "\x1b[1m{header}\x1b[0m");
            } else {
                let _ = writeln!(self.out, "{header}");
            }
        }
        for l in lines {
            let _ = writeln!(self.out, "{l}");
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }
}

fn load(path: &Path) -> Result<WorkloadFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_workload_file(&text).map_err(|e| {
        let lines: Vec<String> =
            e.errors.iter().map(|fe| format!("{}: {fe}", path.display())).collect();
        Failure::input(lines.join("\n"))
    })
}

/// Runs the CLI with explicit streams. `styled` turns on bold table headers.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write, styled: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };

    let mut io = Io { out, err, styled };
    let result = match &cli.command {
        Command::Classify { file } => cmd_classify(&mut io, file),
        Command::Metrics { file, workload, format } => {
            cmd_metrics(&mut io, file, workload.as_deref(), *format)
        }
        Command::Balance { file } => cmd_balance(&mut io, file),
        Command::Schedule { file } => cmd_schedule(&mut io, file),
        Command::Report { file, out } => cmd_report(&mut io, file, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_classify(io: &mut Io, path: &Path) -> CmdResult {
    let file = load(path)?;
    let mut rows = Vec::new();
    for w in &file.workloads {
        let c = classify(w).map_err(|e| Failure::input(format!("{}: {e}", w.workload_id)))?;
        rows.push(vec![
            w.workload_id.clone(),
            w.wtype.to_string(),
            c.group.to_string(),
            c.orientation.to_string(),
            c.mode.to_string(),
            c.quality_attributes.join(", "),
            c.rationale,
        ]);
    }
    io.table(
        &["WorkloadId", "Type", "Group", "Orientation", "Mode", "Quality Attributes", "Rationale"],
        &rows,
    );
    Ok(EXIT_OK)
}

fn workload_report(file: &WorkloadFile, id: &str) -> Result<QoSReport, Failure> {
    match file.observations.get(id) {
        None => Ok(QoSReport::new()),
        Some(obs) => evaluate(obs).map_err(|e| Failure::input(format!("{id}: {e}"))),
    }
}

fn cmd_metrics(io: &mut Io, path: &Path, only: Option<&str>, format: ReportFormat) -> CmdResult {
    let file = load(path)?;
    let ids: Vec<&str> = match only {
        Some(id) => {
            if file.workload(id).is_none() {
                return Err(Failure::input(format!("no workload `{id}` in {}", path.display())));
            }
            vec![id]
        }
        None => file.workloads.iter().map(|w| w.workload_id.as_str()).collect(),
    };
    if format == ReportFormat::Machine {
        // One parseable report; names carry the workload id unless a single one was asked for.
        let report = match only {
            Some(id) => workload_report(&file, id)?,
            None => {
                let mut all = QoSReport::new();
                for id in &ids {
                    all.extend_prefixed(id, workload_report(&file, id)?)
                        .map_err(|e| Failure::input(e.to_string()))?;
                }
                all
            }
        };
        let _ = io.out.write_all(emit_report(&report, format).as_bytes());
        return Ok(EXIT_OK);
    }
    for (i, id) in ids.iter().enumerate() {
        let report = workload_report(&file, id)?;
        if i > 0 {
            io.line("");
        }
        io.line(format!("== {id} =="));
        io.print_table(&emit_report(&report, format));
    }
    Ok(EXIT_OK)
}

fn cmd_balance(io: &mut Io, path: &Path) -> CmdResult {
    let file = load(path)?;
    let outcome = balance(&file.servers, &[]).map_err(|e| Failure::input(e.to_string()))?;

    io.line("Actions");
    let rows: Vec<Vec<String>> = outcome
        .actions
        .iter()
        .map(|a| {
            vec![
                a.kind.to_string(),
                a.service_id.clone(),
                a.from_server.clone(),
                a.to_server.clone(),
                a.diverted_amount.to_string(),
            ]
        })
        .collect();
    io.table(&["Action", "Service", "From", "To", "Amount"], &rows);
    io.line("");
    io.line("Load ratio");
    let rows: Vec<Vec<String>> = outcome
        .final_servers
        .iter()
        .zip(&outcome.per_server_delta_lb)
        .map(|(s, (_, d))| {
            vec![
                s.resource_id.clone(),
                s.expected_load_capacity.to_string(),
                s.assigned_load.to_string(),
                d.to_string(),
                if *d <= 1.0 { "efficient" } else { "over-utilized" }.to_string(),
            ]
        })
        .collect();
    io.table(&["ResourceId", "Expected Load", "Actual Load", "ΔLB", "Status"], &rows);

    if outcome.feasible {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(io.err, "infeasible: total load exceeds the pool's expected capacity");
        Ok(EXIT_INFEASIBLE)
    }
}

fn resources(file: &WorkloadFile) -> Vec<Resource> {
    file.servers
        .iter()
        .map(|s| Resource::new(s.resource_id.clone()).with_capacity(s.expected_load_capacity))
        .collect()
}

fn submit_times(file: &WorkloadFile) -> BTreeMap<String, Ticks> {
    file.workloads
        .iter()
        .map(|w| (w.workload_id.clone(), w.constraints.begin.lower_bound()))
        .collect()
}

fn run_schedule(file: &WorkloadFile) -> Result<(Schedule, SimReport), Failure> {
    let res = resources(file);
    let sched = schedule(&file.records, &file.specs_by_id(), &res)
        .map_err(|e| Failure::input(e.to_string()))?;
    let stats = simulate_report(&sched, &res, &submit_times(file))
        .map_err(|e| Failure::input(e.to_string()))?;
    Ok((sched, stats))
}

fn cmd_schedule(io: &mut Io, path: &Path) -> CmdResult {
    let file = load(path)?;
    let (sched, stats) = run_schedule(&file)?;

    let rows: Vec<Vec<String>> = sched
        .records
        .iter()
        .map(|r| {
            vec![
                r.workload_id.clone(),
                r.process_id.clone(),
                r.begin_time.to_string(),
                r.end_time.to_string(),
                r.resource_id.clone(),
            ]
        })
        .collect();
    io.table(&["WorkloadId", "ProcessId", "Begin Time", "End Time", "ResourceId"], &rows);

    if !sched.rejected.is_empty() {
        io.line("");
        io.line("Rejected");
        let rows: Vec<Vec<String>> = sched
            .rejected
            .iter()
            .map(|r| vec![r.record.workload_id.clone(), r.record.process_id.clone(), r.reason.clone()])
            .collect();
        io.table(&["WorkloadId", "ProcessId", "Reason"], &rows);
    }

    io.line("");
    match stats.makespan {
        Some(m) => io.line(format!("makespan: {m} ms")),
        None => io.line("makespan: n/a"),
    }
    if let Some(util) = &stats.utilization {
        let rows: Vec<Vec<String>> =
            util.iter().map(|(r, u)| vec![r.clone(), u.to_string()]).collect();
        io.table(&["ResourceId", "Utilization"], &rows);
    }
    if let Some(lat) = &stats.latency {
        let rows: Vec<Vec<String>> =
            lat.iter().map(|(w, l)| vec![w.clone(), l.to_string()]).collect();
        io.table(&["WorkloadId", "Latency (ms)"], &rows);
    }

    if sched.rejected.is_empty() {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_INFEASIBLE)
    }
}

fn push(report: &mut QoSReport, name: String, value: f64, unit: Unit, verdict: Option<Verdict>, inputs: &str) {
    report
        .push(ReportEntry { metric_name: name, value, unit, verdict, inputs_digest: digest_inputs(inputs) })
        .expect("simulation metric names are distinct");
}

/// Everything the pipeline measures, flattened into one named report.
pub fn full_report(file: &WorkloadFile) -> Result<(QoSReport, bool), String> {
    let mut report = QoSReport::new();
    let mut feasible = true;

    for w in &file.workloads {
        if let Some(obs) = file.observations.get(&w.workload_id) {
            let r = evaluate(obs).map_err(|e| format!("{}: {e}", w.workload_id))?;
            report.extend_prefixed(&w.workload_id, r).map_err(|e| e.to_string())?;
        }
    }

    if !file.servers.is_empty() {
        let outcome = balance(&file.servers, &[]).map_err(|e| e.to_string())?;
        let inputs = format!("{:?}", file.servers);
        for (id, d) in &outcome.per_server_delta_lb {
            let verdict = if *d <= 1.0 { Verdict::Pass } else { Verdict::Fail };
            push(&mut report, format!("balance.{id}.delta_lb"), *d, Unit::Ratio, Some(verdict), &inputs);
        }
        feasible &= outcome.feasible;
    }

    if !file.records.is_empty() {
        let (sched, stats) = run_schedule(file).map_err(|f| f.message)?;
        let inputs = format!("{:?}", file.records);
        let rejected = sched.rejected.len() as f64;
        let verdict = if rejected == 0.0 { Verdict::Pass } else { Verdict::Fail };
        push(&mut report, "schedule.rejected".into(), rejected, Unit::Ratio, Some(verdict), &inputs);
        if let Some(m) = stats.makespan {
            push(&mut report, "schedule.makespan".into(), m.as_millis() as f64, Unit::Millis, None, &inputs);
        }
        for (r, u) in stats.utilization.iter().flatten() {
            push(&mut report, format!("schedule.utilization.{r}"), *u, Unit::Ratio, None, &inputs);
        }
        for (w, l) in stats.latency.iter().flatten() {
            push(&mut report, format!("schedule.latency.{w}"), *l, Unit::Millis, None, &inputs);
        }
        feasible &= sched.rejected.is_empty();
    }

    Ok((report, feasible))
}

fn cmd_report(io: &mut Io, path: &Path, out_path: &Path) -> CmdResult {
    let file = load(path)?;
    let (report, feasible) = full_report(&file).map_err(Failure::input)?;
    let text = emit_report(&report, ReportFormat::Machine);
    fs::write(out_path, text)
        .map_err(|e| Failure::input(format!("{}: {e}", out_path.display())))?;
    io.line(format!("wrote {} metrics to {}", report.len(), out_path.display()));
    if feasible {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(io.err, "infeasible: balancing or scheduling left work unplaced");
        Ok(EXIT_INFEASIBLE)
    }
}
