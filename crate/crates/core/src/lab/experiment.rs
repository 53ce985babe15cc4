//! Batch experiments driven by a flat `key = value` config file.
//!
//! ```text
//! # √(16^m + 1)
//! alpha = 4^n + 1
//! r = 0
//! m_lo = 1
//! m_hi = 8
//! window = 2
//! scan_csv = scan.csv
//! findings = findings.txt
//! ```
//!
//! Output paths are relative to the config file. Both outputs depend only
//! on the config, so repeated runs are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{
    decimal_digits, detect_stabilization, fit_from_scan, period_scan, trace_failures, FunctionalOptions, LabError,
    PeriodScan, RowStatus, ScanOptions, DEFAULT_KEEP_LIMIT,
};
use crate::cf::DEFAULT_MAX_STEPS;
use crate::hypothesis::{forecast_period, HypothesisReport};
use crate::powersum::parse_power_sum;
use crate::recurrence::FitOptions;
use crate::{IndexUnit, PowerSumQ};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_FIT: i32 = 4;

/// Config problem at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub alpha: PowerSumQ,
    pub r: u32,
    pub m_lo: u32,
    pub m_hi: u32,
    pub window: usize,
    pub step_budget: usize,
    pub integrality_required: bool,
    pub holdout: usize,
    pub scan_csv: PathBuf,
    pub findings: PathBuf,
    /// Adds the full period as an extra CSV column.
    pub verbose: bool,
}

impl ExperimentConfig {
    /// Reads a config file; relative output paths resolve against its
    /// directory.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError {
            line: 0,
            column: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        let mut cfg = parse_config(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.scan_csv = base.join(&cfg.scan_csv);
        cfg.findings = base.join(&cfg.findings);
        Ok(cfg)
    }

    fn functional_options(&self) -> FunctionalOptions {
        FunctionalOptions {
            window: self.window,
            scan: self.scan_options(),
            fit: FitOptions {
                integrality_required: self.integrality_required,
                holdout: self.holdout,
            },
            ..FunctionalOptions::default()
        }
    }

    fn scan_options(&self) -> ScanOptions {
        ScanOptions {
            step_budget: self.step_budget,
            keep_limit: DEFAULT_KEEP_LIMIT,
        }
    }
}

const KEYS: &[&str] = &[
    "alpha",
    "r",
    "m_lo",
    "m_hi",
    "window",
    "step_budget",
    "integrality_required",
    "holdout",
    "scan_csv",
    "findings",
    "verbose",
];

struct Entry<'a> {
    line: usize,
    column: usize,
    value: &'a str,
}

impl Entry<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ConfigError> {
        Err(ConfigError {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.value
            .parse()
            .or_else(|_| self.err(format!("{key} must be a nonnegative integer, got '{}'", self.value)))
    }

    fn boolean(&self, key: &str) -> Result<bool, ConfigError> {
        match self.value {
            "true" => Ok(true),
            "false" => Ok(false),
            other => self.err(format!("{key} must be true or false, got '{other}'")),
        }
    }
}

/// Parses config text. Blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries: Vec<(&str, Entry<'_>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(ConfigError {
                line,
                column: content.len() - content.trim_start().len() + 1,
                message: "expected key = value".into(),
            });
        };
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        if !KEYS.contains(&key) {
            return Err(ConfigError {
                line,
                column: key_col,
                message: format!("unknown key '{key}'"),
            });
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError {
                line,
                column: key_col,
                message: format!("duplicate key '{key}'"),
            });
        }
        let after = &content[eq + 1..];
        let value = after.trim();
        let column = eq + 2 + (after.len() - after.trim_start().len());
        entries.push((key, Entry { line, column, value }));
    }
    let get = |key: &str| entries.iter().find(|(k, _)| *k == key).map(|(_, e)| e);
    let missing = |key: &str| ConfigError {
        line: 0,
        column: 0,
        message: format!("missing required key '{key}'"),
    };

    let a = get("alpha").ok_or_else(|| missing("alpha"))?;
    let alpha = parse_power_sum(a.value).map_err(|e| ConfigError {
        line: a.line,
        column: a.column + e.column - 1,
        message: e.message,
    })?;
    if alpha.unit() != IndexUnit::N {
        return a.err("alpha must be written in n");
    }
    let r = match get("r") {
        Some(e) => {
            let r: u32 = e.number("r")?;
            if r > 1 {
                return e.err("r must be 0 or 1");
            }
            r
        }
        None => 0,
    };
    let lo = get("m_lo").ok_or_else(|| missing("m_lo"))?;
    let hi = get("m_hi").ok_or_else(|| missing("m_hi"))?;
    let m_lo: u32 = lo.number("m_lo")?;
    let m_hi: u32 = hi.number("m_hi")?;
    if m_hi < m_lo {
        return hi.err("m_hi must be at least m_lo");
    }
    let window = match get("window") {
        Some(e) => {
            let w: usize = e.number("window")?;
            if w == 0 {
                return e.err("window must be positive");
            }
            w
        }
        None => 5,
    };
    if ((m_hi - m_lo + 1) as usize) < window + 6 {
        return hi.err(format!(
            "range {m_lo}..{m_hi} is shorter than window + 6 = {}",
            window + 6
        ));
    }
    let step_budget = get("step_budget").map_or(Ok(DEFAULT_MAX_STEPS), |e| e.number("step_budget"))?;
    let integrality_required = get("integrality_required").map_or(Ok(true), |e| e.boolean("integrality_required"))?;
    let holdout = match get("holdout") {
        Some(e) => {
            let h: usize = e.number("holdout")?;
            if h < 2 {
                return e.err("holdout must be at least 2");
            }
            h
        }
        None => 2,
    };
    let path = |key: &str, default: &str| -> Result<PathBuf, ConfigError> {
        match get(key) {
            Some(e) if e.value.is_empty() => e.err(format!("{key} is empty")),
            Some(e) => Ok(PathBuf::from(e.value)),
            None => Ok(PathBuf::from(default)),
        }
    };
    Ok(ExperimentConfig {
        alpha,
        r,
        m_lo,
        m_hi,
        window,
        step_budget,
        integrality_required,
        holdout,
        scan_csv: path("scan_csv", "scan.csv")?,
        findings: path("findings", "findings.txt")?,
        verbose: get("verbose").map_or(Ok(false), |e| e.boolean("verbose"))?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentOutcome {
    pub exit_code: i32,
    pub scan: Option<PeriodScan>,
    pub csv: String,
    pub findings: String,
}

/// The scan table, one row per `m`.
pub fn scan_csv(scan: &PeriodScan, verbose: bool) -> String {
    let mut out = String::from("m,value_digits,is_square,a0_digits,R,period_digest");
    if verbose {
        out.push_str(",period");
    }
    out.push('\n');
    for row in &scan.rows {
        let a0 = row
            .a0
            .as_ref()
            .map(|a| decimal_digits(a).to_string())
            .unwrap_or_default();
        let len = row.period_len.map(|r| r.to_string()).unwrap_or_default();
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            row.m,
            decimal_digits(&row.value),
            row.status == RowStatus::Square,
            a0,
            len,
            row.digest()
        );
        if verbose {
            let full = row
                .period
                .as_ref()
                .map(|p| p.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            let _ = write!(out, ",{full}");
        }
        out.push('\n');
    }
    out
}

fn describe(rep: &HypothesisReport) -> String {
    let mut s = rep.verdict.to_string();
    if let Some(xi) = &rep.witness {
        let _ = write!(s, "; witness {xi}");
    }
    if let Some(root) = &rep.residual_root {
        let _ = write!(s, "; residual_root {root}");
    }
    let _ = write!(s, "; threshold {}", rep.threshold);
    if let Some(o) = &rep.obstruction {
        let _ = write!(s, "; obstruction {o}");
    }
    s
}

/// Runs the pipeline and returns the outputs without touching the disk.
pub fn evaluate_experiment(cfg: &ExperimentConfig) -> ExperimentOutcome {
    let mut f = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(f, "{k} = {v}");
    };
    kv("alpha", &cfg.alpha);
    kv("r", &cfg.r);
    kv("m_range", &format!("{}..{}", cfg.m_lo, cfg.m_hi));
    kv("window", &cfg.window);
    kv("step_budget", &cfg.step_budget);

    let scan = match period_scan(&cfg.alpha, cfg.r, cfg.m_lo..=cfg.m_hi, cfg.scan_options()) {
        Ok(s) => s,
        Err(e) => {
            kv("status", &format!("scan_error: {e}"));
            kv("exit_code", &EXIT_PARSE);
            return ExperimentOutcome {
                exit_code: EXIT_PARSE,
                scan: None,
                csv: String::new(),
                findings: f,
            };
        }
    };
    let count = |pred: &dyn Fn(&RowStatus) -> bool| scan.rows.iter().filter(|r| pred(&r.status)).count();
    kv("rows", &scan.rows.len());
    kv("rows_usable", &count(&|s| *s == RowStatus::Periodic));
    kv("rows_square", &count(&|s| *s == RowStatus::Square));
    kv("rows_nonpositive", &count(&|s| *s == RowStatus::NonPositive));
    kv("rows_noninteger", &count(&|s| *s == RowStatus::NonInteger));
    kv("rows_budget_exceeded", &scan.budget_exceeded());
    let checked = scan.rows.iter().filter(|r| r.trace_ok.is_some()).count();
    let failures = trace_failures(&scan);
    if failures.is_empty() {
        kv("trace_identity", &format!("ok ({checked} checked)"));
    } else {
        kv("trace_identity", &format!("failed at m = {failures:?}"));
    }

    match forecast_period(&cfg.alpha) {
        Ok(fc) => {
            kv("forecast", &fc.overall);
            for rep in &fc.reports {
                kv(&format!("forecast.r{}", rep.parity), &describe(rep));
            }
        }
        Err(e) => kv("forecast", &format!("unavailable: {e}")),
    }

    let mut exit_code = EXIT_OK;
    match detect_stabilization(&scan, cfg.window) {
        Some(r_len) => {
            kv("stabilized_R", &r_len);
            kv(
                "note",
                &format!(
                    "stabilization means {} consecutive equal periods at the top of the range; fits are validated on held-out m, which is evidence, not proof",
                    cfg.window
                ),
            );
            match fit_from_scan(&cfg.alpha, &scan, r_len, cfg.functional_options()) {
                Ok(fcf) => {
                    for (i, b) in fcf.betas.iter().enumerate() {
                        kv(&format!("beta_{i}"), b);
                    }
                    kv("beta_R_is_2beta_0", &true);
                    kv("fit_valid_from", &fcf.valid_from);
                    kv("fit_train", &format!("{}..{}", fcf.train_window.0, fcf.train_window.1));
                    let v: Vec<String> = fcf.validated.iter().map(ToString::to_string).collect();
                    kv("fit_validated_m", &v.join(" "));
                    kv("quality_checks", &fcf.quality_checks);
                    kv("status", &"fit_ok");
                }
                Err(e) => {
                    let index = match &e {
                        LabError::FitFailed { index, .. } => index.to_string(),
                        _ => "-".into(),
                    };
                    kv("fit_failed_index", &index);
                    kv("fit_error", &e);
                    kv("status", &"fit_failed");
                    exit_code = EXIT_FIT;
                }
            }
        }
        None => {
            kv("stabilized_R", &"none");
            for row in scan.usable() {
                kv(&format!("growth.m{}", row.m), &row.period_len.unwrap());
            }
            kv("status", &"no_stabilization");
        }
    }
    if exit_code == EXIT_OK && scan.budget_exceeded() > 0 {
        exit_code = EXIT_BUDGET;
    }
    kv("exit_code", &exit_code);
    ExperimentOutcome {
        exit_code,
        csv: scan_csv(&scan, cfg.verbose),
        scan: Some(scan),
        findings: f,
    }
}

/// Runs the experiment and writes the scan table and findings record.
pub fn run_experiment(cfg: &ExperimentConfig) -> io::Result<ExperimentOutcome> {
    let out = evaluate_experiment(cfg);
    fs::write(&cfg.findings, &out.findings)?;
    if out.scan.is_some() {
        fs::write(&cfg.scan_csv, &out.csv)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "# unit family\nalpha = 4^n + 1\nr = 0\nm_lo = 1\nm_hi = 8\nwindow = 2\n";

    #[test]
    fn parses_defaults() {
        let c = parse_config(BASIC).unwrap();
        assert_eq!(c.alpha.to_string(), "1*4^n + 1*1^n");
        assert_eq!((c.m_lo, c.m_hi, c.window, c.holdout), (1, 8, 2, 2));
        assert_eq!(c.scan_csv, PathBuf::from("scan.csv"));
        assert!(c.integrality_required);
        assert!(!c.verbose);
    }

    #[test]
    fn reports_positions() {
        let e = parse_config("m_lo = 1\nm_hi = 9\nalpha = 4^n + * 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 15));
        let e = parse_config("alpha = 4^n\nm_lo = 1\nm_hi = 9\nbogus = 3\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 1));
        assert!(e.message.contains("unknown"));
        let e = parse_config("alpha = 4^n\nm_lo = 1\nm_hi = 9\nr = 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 5));
        let e = parse_config("alpha = 4^n\nm_lo = 1\nm_hi = 5\n").unwrap_err();
        assert!(e.message.contains("window"));
        assert!(parse_config("alpha = 4^n\nm_lo = 1\nm_lo = 2\n").is_err());
        assert!(parse_config("alpha = 4^m\nm_lo = 1\nm_hi = 20\n").is_err());
        assert!(parse_config("m_lo = 1\nm_hi = 20\n").is_err());
        assert!(parse_config("alpha 4^n\n").is_err());
    }

    #[test]
    fn unit_family_findings() {
        let out = evaluate_experiment(&parse_config(BASIC).unwrap());
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.findings.contains("stabilized_R = 1\n"));
        assert!(out.findings.contains("beta_0 = 1*4^m\n"));
        assert!(out.findings.contains("beta_1 = 2*4^m\n"));
        assert!(out.findings.contains("forecast = NoConclusion\n"));
        assert!(out
            .csv
            .starts_with("m,value_digits,is_square,a0_digits,R,period_digest\n1,2,false,1,1,8\n"));
    }

    #[test]
    fn growth_family_findings() {
        let cfg = parse_config("alpha = 2*4^n + 1\nm_lo = 1\nm_hi = 9\nwindow = 3\n").unwrap();
        let out = evaluate_experiment(&cfg);
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.findings.contains("forecast = UnboundedPeriod\n"));
        assert!(out.findings.contains("stabilized_R = none\n"));
        assert!(out.findings.contains("growth.m9 = "));
    }

    #[test]
    fn budget_exit_code() {
        let cfg = parse_config("alpha = 2*4^n + 1\nm_lo = 1\nm_hi = 9\nwindow = 3\nstep_budget = 20\n").unwrap();
        assert_eq!(evaluate_experiment(&cfg).exit_code, EXIT_BUDGET);
    }
}
