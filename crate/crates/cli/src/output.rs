//! Report files: JSON envelope, CSV table and plot columns.

use std::fmt::Write as _;
use std::path::Path;

use loopgamma::report::to_csv;
use loopgamma::CheckReport;
use serde::Serialize;
use serde_json::Value;

use crate::commands::{CliError, Outcome};
use crate::config::RunConfig;

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    config: &'a RunConfig,
    pass: bool,
    reports: &'a [CheckReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<&'a Value>,
}

pub fn to_json(command: &str, config: &RunConfig, out: &Outcome) -> Result<String, CliError> {
    let env = Envelope {
        command,
        config,
        pass: out.pass(),
        reports: &out.reports,
        data: out.data.as_ref(),
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Whitespace-separated `param value stderr` rows; `param` is the report's
/// `key` field when present, else the row index. Empty input gives an
/// empty string.
pub fn report_plot(reports: &[CheckReport], key: Option<&str>) -> String {
    if reports.is_empty() {
        return String::new();
    }
    let mut s = format!("# {} value stderr\n", key.unwrap_or("index"));
    for (i, r) in reports.iter().enumerate() {
        let x = key.and_then(|k| r.get(k)).unwrap_or(i as f64);
        let _ = writeln!(s, "{x:.15e} {:.15e} {:.15e}", r.lhs[0], r.stderr.abs());
    }
    s
}

pub fn write_all(dir: &Path, command: &str, config: &RunConfig, out: &Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join(format!("{command}.json")), to_json(command, config, out)?).map_err(io)?;
    std::fs::write(dir.join(format!("{command}.csv")), to_csv(&out.reports)?).map_err(io)?;
    std::fs::write(
        dir.join(format!("{command}.dat")),
        report_plot(&out.reports, out.plot_key),
    )
    .map_err(io)?;
    Ok(())
}
