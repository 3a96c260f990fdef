use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, ValueEnum};
use ncint::verify::{run_suite, SuiteConfig, SuiteReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::files::{write_atomic, write_json};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite configuration (JSON, tagged by `suite`).
    #[arg(long, conflicts_with = "suite")]
    pub config: Option<PathBuf>,
    /// Run a suite with its default configuration.
    #[arg(long)]
    pub suite: Option<String>,
    /// Overrides the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A suite report as written to disk.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportFile {
    #[serde(flatten)]
    pub report: SuiteReport,
    /// Seconds since the epoch; the only field that varies between runs.
    pub generated_unix: u64,
}

pub fn load_config(args: &VerifyArgs) -> Result<SuiteConfig> {
    let mut config = match (&args.config, &args.suite) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => SuiteConfig::default_for(name)?,
        (None, None) => return Err(CliError::Usage("verify needs --config or --suite".into())),
    };
    if let Some(seed) = args.seed {
        config.set_seed(seed);
    }
    config.validate()?;
    Ok(config)
}

pub fn run(args: &VerifyArgs) -> Result<SuiteReport> {
    let config = load_config(args)?;
    let report = run_suite(&config).map_err(|e| match CliError::from(e) {
        CliError::Numeric(msg) => CliError::Numeric(format!("suite {}: {msg}", config.name())),
        other => other,
    })?;
    let generated_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let file = ReportFile {
        report,
        generated_unix,
    };
    match &args.out {
        Some(path) => write_json(path, &file)?,
        None => println!(
            "{}",
            serde_json::to_string_pretty(&file).map_err(|e| CliError::Numeric(e.to_string()))?
        ),
    }
    for check in &file.report.checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        eprintln!(
            "{status} {} {}/{} worst {:.3e}",
            check.id, check.passes, check.instances, check.worst_margin
        );
        for w in &check.warnings {
            eprintln!("  warning: {w}");
        }
    }
    Ok(file.report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report written by `verify`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    suite: String,
    check: String,
    kind: String,
    instances: usize,
    passes: usize,
    worst_margin: f64,
    warnings: usize,
    pass: bool,
}

fn summary(report: &SuiteReport) -> Vec<SummaryRow> {
    report
        .checks
        .iter()
        .map(|c| SummaryRow {
            suite: report.suite.clone(),
            check: c.id.clone(),
            kind: serde_json::to_value(c.kind)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            instances: c.instances,
            passes: c.passes,
            worst_margin: c.worst_margin,
            warnings: c.warnings.len(),
            pass: c.passed(),
        })
        .collect()
}

/// Summarizes a report; returns the rendered text.
pub fn report(args: &ReportArgs) -> Result<String> {
    let text = fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let file: ReportFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.input.display())))?;
    let rows = summary(&file.report);
    let rendered = match args.format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)
                    .map_err(|e| CliError::Numeric(e.to_string()))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Numeric(e.to_string()))?
        }
        ReportFormat::Text => {
            let mut s = format!(
                "suite {} seed {}: {}\n",
                file.report.suite,
                file.report.seed,
                if file.report.pass { "PASS" } else { "FAIL" }
            );
            for r in &rows {
                s.push_str(&format!(
                    "  {:<4} {:<40} {:>5}/{:<5} {:<9} worst {:.3e}{}\n",
                    if r.pass { "ok" } else { "FAIL" },
                    r.check,
                    r.passes,
                    r.instances,
                    r.kind,
                    r.worst_margin,
                    if r.warnings > 0 {
                        format!(" ({} warnings)", r.warnings)
                    } else {
                        String::new()
                    }
                ));
            }
            s
        }
    };
    match &args.out {
        Some(path) => write_atomic(path, rendered.as_bytes())?,
        None => print!("{rendered}"),
    }
    Ok(rendered)
}
