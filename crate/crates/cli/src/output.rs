//! Report rendering: JSON documents, a flat CSV projection, and the
//! per-suite file layout used with `--out`.

use crate::config::{ConfigError, OutputFormat, SuiteConfig};
use serde::Serialize;
use std::path::{Path, PathBuf};
use thetatrace_core::report::{AuditReport, CheckStatus, Timing};

#[derive(Clone, Debug, Serialize)]
pub struct SummaryLine {
    pub name: String,
    pub status: CheckStatus,
    pub checks: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub name: String,
    pub status: CheckStatus,
    pub seed: u64,
    pub length: String,
    pub diffusion: String,
    pub suites: Vec<SummaryLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Stdout document for runs without `--out`: summary first, full reports
/// after it.
#[derive(Serialize)]
struct StdoutDoc<'a> {
    schema: u32,
    summary: &'a Summary,
    reports: &'a [AuditReport],
}

pub fn build_summary(
    cfg: &SuiteConfig,
    reports: &[AuditReport],
    timing: Option<Timing>,
) -> Summary {
    let suites: Vec<SummaryLine> = reports
        .iter()
        .map(|r| SummaryLine {
            name: r.name.clone(),
            status: r.status,
            checks: r.checks.len(),
            failed: r
                .checks
                .iter()
                .filter(|c| c.status == CheckStatus::Fail)
                .count(),
        })
        .collect();
    let status = if reports.iter().any(|r| r.failed()) {
        CheckStatus::Fail
    } else if !reports.is_empty() && reports.iter().all(|r| r.status == CheckStatus::Audit) {
        CheckStatus::Audit
    } else {
        CheckStatus::Pass
    };
    Summary {
        schema: 1,
        name: "summary".into(),
        status,
        seed: cfg.seed,
        length: format!("{}", cfg.params.length()),
        diffusion: format!("{}", cfg.params.diffusion()),
        suites,
        timing,
    }
}

pub fn status_str(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Audit => "audit",
    }
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

const CSV_HEADER: &str = "suite,check,input,expected,actual,residual,tolerance,provenance,status";

fn csv_body(out: &mut String, report: &AuditReport) {
    for row in &report.checks {
        let provenance = serde_json::to_value(row.provenance)
            .ok()
            .and_then(|v| v.as_str().map(|s| s.to_string()))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            csv_field(&report.name),
            csv_field(&row.name),
            csv_field(&row.input),
            csv_field(&row.expected),
            csv_field(&row.actual),
            row.residual,
            row.tolerance,
            provenance,
            status_str(row.status),
        ));
    }
}

pub fn csv_report(report: &AuditReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    csv_body(&mut out, report);
    out
}

pub fn csv_reports(reports: &[AuditReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        csv_body(&mut out, r);
    }
    out
}

pub fn csv_summary(summary: &Summary) -> String {
    let mut out = String::from("suite,status,checks,failed\n");
    for line in &summary.suites {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(&line.name),
            status_str(line.status),
            line.checks,
            line.failed
        ));
    }
    let total_checks: usize = summary.suites.iter().map(|l| l.checks).sum();
    let total_failed: usize = summary.suites.iter().map(|l| l.failed).sum();
    out.push_str(&format!(
        "summary,{},{},{}\n",
        status_str(summary.status),
        total_checks,
        total_failed
    ));
    out
}

fn json_pretty<T: Serialize>(value: &T) -> Result<String, ConfigError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| ConfigError::new(format!("serialization failed: {}", e)))
}

/// Sibling path for one suite's report: `out.json` plus suite `theta`
/// becomes `out.theta.json`.
pub fn suite_path(base: &Path, suite: &str, ext: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("report");
    base.with_file_name(format!("{}.{}.{}", stem, suite, ext))
}

fn write_file(path: &Path, content: &str) -> Result<(), ConfigError> {
    std::fs::write(path, content)
        .map_err(|e| ConfigError::new(format!("cannot write {}: {}", path.display(), e)))
}

fn human_line(line: &SummaryLine) -> String {
    format!(
        "suite {}: {} ({} checks, {} failed)",
        line.name,
        status_str(line.status),
        line.checks,
        line.failed
    )
}

/// Emit every report plus the summary, honoring `--out` and `--format`.
pub fn emit(
    cfg: &SuiteConfig,
    reports: &[AuditReport],
    summary: &Summary,
) -> Result<(), ConfigError> {
    match (&cfg.out, cfg.format) {
        (None, OutputFormat::Json) => {
            let doc = StdoutDoc {
                schema: 1,
                summary,
                reports,
            };
            print!("{}", json_pretty(&doc)?);
        }
        (None, OutputFormat::Csv) => {
            print!("{}", csv_reports(reports));
            for line in &summary.suites {
                eprintln!("{}", human_line(line));
            }
            eprintln!("summary: {}", status_str(summary.status));
        }
        (Some(path), fmt) => {
            let ext = fmt.extension();
            let mut written = Vec::new();
            for report in reports {
                let target = suite_path(path, &report.name, ext);
                let rendered = match fmt {
                    OutputFormat::Json => json_pretty(report)?,
                    OutputFormat::Csv => csv_report(report),
                };
                write_file(&target, &rendered)?;
                written.push(target);
            }
            let rendered_summary = match fmt {
                OutputFormat::Json => json_pretty(summary)?,
                OutputFormat::Csv => csv_summary(summary),
            };
            write_file(path, &rendered_summary)?;
            written.push(path.clone());
            for line in &summary.suites {
                println!("{}", human_line(line));
            }
            println!("summary: {}", status_str(summary.status));
            for path in &written {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use thetatrace_core::report::{CheckRow, Provenance};

    fn demo_report(name: &str, fail: bool) -> AuditReport {
        let mut r = AuditReport::new(name);
        r.push(CheckRow::comparison(
            "row",
            "x, with comma",
            1.0,
            if fail { 2.0 } else { 1.0 },
            1e-12,
            Provenance::Derived,
        ));
        r
    }

    fn demo_cfg() -> SuiteConfig {
        crate::config::resolve(&[]).expect("defaults resolve")
    }

    #[test]
    fn summary_aggregates_failures() {
        let cfg = demo_cfg();
        let ok = demo_report("a", false);
        let bad = demo_report("b", true);
        let s = build_summary(&cfg, &[ok.clone(), bad], None);
        assert_eq!(s.status, CheckStatus::Fail);
        assert_eq!(s.suites[1].failed, 1);
        let s2 = build_summary(&cfg, &[ok.clone()], None);
        assert_eq!(s2.status, CheckStatus::Pass);
        let s3 = build_summary(&cfg, &[ok.into_audit_only()], None);
        assert_eq!(s3.status, CheckStatus::Audit);
    }

    #[test]
    fn csv_escapes_commas_and_quotes() {
        let mut r = AuditReport::new("demo");
        r.push(CheckRow::residual_check(
            "naughty",
            "a,b and \"q\"",
            "0",
            "0",
            0.0,
            1.0,
            Provenance::Trivial,
        ));
        let text = csv_report(&r);
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.contains("\"a,b and \"\"q\"\"\""));
        assert!(text.ends_with("trivial,pass\n"));
    }

    #[test]
    fn audit_rows_render_infinite_tolerance() {
        let mut r = AuditReport::new("demo");
        r.push(CheckRow::audit("m", "", "1", 1.0, Provenance::Derived));
        let text = csv_report(&r);
        assert!(text.contains(",inf,derived,audit"));
    }

    #[test]
    fn suite_paths_branch_off_the_stem() {
        let p = suite_path(Path::new("/tmp/run/report.json"), "theta", "json");
        assert_eq!(p, PathBuf::from("/tmp/run/report.theta.json"));
        let q = suite_path(Path::new("out.csv"), "tp", "csv");
        assert_eq!(q, PathBuf::from("out.tp.csv"));
    }

    #[test]
    fn summary_csv_has_totals() {
        let cfg = demo_cfg();
        let s = build_summary(
            &cfg,
            &[demo_report("a", false), demo_report("b", true)],
            None,
        );
        let text = csv_summary(&s);
        assert!(text.starts_with("suite,status,checks,failed\n"));
        assert!(text.contains("a,pass,1,0\n"));
        assert!(text.contains("b,fail,1,1\n"));
        assert!(text.ends_with("summary,fail,2,1\n"));
    }
}
