use crate::model::{QoSReport, ReportEntry};

pub const MACHINE_HEADER: &str = "# qoswb report v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Table,
    Machine,
}

/// Plain-text table with columns padded to their widest cell.
pub fn render_table<S: AsRef<str>>(headers: &[&str], rows: &[Vec<S>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.as_ref().chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut headers.iter().copied());
    for row in rows {
        line(&mut row.iter().map(|c| c.as_ref()));
    }
    out
}

fn sorted(report: &QoSReport) -> Vec<&ReportEntry> {
    let mut entries: Vec<&ReportEntry> = report.entries().iter().collect();
    entries.sort_by(|a, b| a.metric_name.cmp(&b.metric_name));
    entries
}

fn verdict_text(e: &ReportEntry) -> &'static str {
    e.verdict.map_or("none", |v| v.as_str())
}

/// Renders a report. Both formats list metrics in lexical name order.
///
/// The machine format is a header line followed by one
/// `name=value unit=U verdict=V` line per metric.
pub fn emit_report(report: &QoSReport, format: ReportFormat) -> String {
    let entries = sorted(report);
    match format {
        ReportFormat::Machine => {
            let mut out = String::from(MACHINE_HEADER);
            out.push('\n');
            for e in entries {
                out.push_str(&format!(
                    "{}={} unit={} verdict={}\n",
                    e.metric_name,
                    e.value,
                    e.unit,
                    verdict_text(e)
                ));
            }
            out
        }
        ReportFormat::Table => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    vec![
                        e.metric_name.clone(),
                        e.value.to_string(),
                        e.unit.to_string(),
                        e.verdict.map_or("-", |v| v.as_str()).to_string(),
                        e.inputs_digest.clone(),
                    ]
                })
                .collect();
            render_table(&["metric", "value", "unit", "verdict", "inputs"], &rows)
        }
    }
}

/// Parses machine-format lines back into `(name, value, unit, verdict)` tuples.
pub fn parse_machine_report(text: &str) -> Result<Vec<(String, f64, String, String)>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(MACHINE_HEADER) {
        return Err("missing report header".into());
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || format!("line {}: malformed entry `{line}`", i + 2);
            let mut parts = line.split(' ');
            let (name, value) = parts.next().and_then(|p| p.split_once('=')).ok_or_else(bad)?;
            let unit = parts.next().and_then(|p| p.strip_prefix("unit=")).ok_or_else(bad)?;
            let verdict = parts.next().and_then(|p| p.strip_prefix("verdict=")).ok_or_else(bad)?;
            if parts.next().is_some() {
                return Err(bad());
            }
            let value: f64 = value.parse().map_err(|_| bad())?;
            Ok((name.to_string(), value, unit.to_string(), verdict.to_string()))
        })
        .collect()
}
