//! Defect counts and densities per 10,000 lines of code, and their
//! rendering as text, JSON and CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::detectors::{DefectKind, Finding};
use crate::frontend::{ParseFailure, ParseStats};
use crate::pipeline::Analysis;

pub const TOOL_NAME: &str = "pysniff";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Findings per 10,000 lines. Zero lines give a density of zero.
pub fn compute_density(found: u64, loc: u64) -> f64 {
    if loc == 0 {
        if found > 0 {
            log::warn!("density requested for {found} findings over zero lines of code");
        }
        return 0.0;
    }
    found as f64 / loc as f64 * 10_000.0
}

/// The density in hundredths, rounded half-up with exact integer arithmetic.
pub fn density_hundredths(found: u64, loc: u64) -> u64 {
    if loc == 0 {
        return 0;
    }
    let scaled = u128::from(found) * 1_000_000;
    let loc = u128::from(loc);
    ((2 * scaled + loc) / (2 * loc)) as u64
}

pub fn format_density(found: u64, loc: u64) -> String {
    let h = density_hundredths(found, loc);
    format!("{}.{:02}", h / 100, h % 100)
}

/// Two-decimal display of an aggregate, rounding halves up.
pub fn format_mean(value: f64) -> String {
    let h = (value * 100.0 + 0.5).floor() as u64;
    format!("{}.{:02}", h / 100, h % 100)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindRow {
    pub kind: DefectKind,
    pub found: u64,
    pub loc: u64,
    /// Unrounded density per 10,000 lines.
    pub density: f64,
}

impl KindRow {
    pub fn new(kind: DefectKind, found: u64, loc: u64) -> Self {
        Self {
            kind,
            found,
            loc,
            density: compute_density(found, loc),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    /// Unweighted mean density of the code smells.
    pub smell_mean: f64,
    /// Unweighted mean density of the antipatterns.
    pub antipattern_mean: f64,
    /// Unweighted mean over all nine kinds.
    pub mean_all_kinds: f64,
    /// Unweighted mean over every kind except Functional Decomposition.
    pub mean_detectable_kinds: f64,
    /// All findings over the shared line count.
    pub pooled: f64,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

pub fn aggregates(rows: &[KindRow]) -> Aggregates {
    let found: u64 = rows.iter().map(|r| r.found).sum();
    let loc = rows.iter().map(|r| r.loc).max().unwrap_or(0);
    Aggregates {
        smell_mean: mean(rows.iter().filter(|r| r.kind.is_smell()).map(|r| r.density)),
        antipattern_mean: mean(rows.iter().filter(|r| !r.kind.is_smell()).map(|r| r.density)),
        mean_all_kinds: mean(rows.iter().map(|r| r.density)),
        mean_detectable_kinds: mean(
            rows.iter()
                .filter(|r| r.kind != DefectKind::FunctionalDecomposition)
                .map(|r| r.density),
        ),
        pooled: compute_density(found, loc),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionTotals {
    pub loc: u64,
    pub counts: BTreeMap<DefectKind, u64>,
}

impl PartitionTotals {
    fn new(loc: u64, findings: &[&Finding]) -> Self {
        let mut counts: BTreeMap<DefectKind, u64> = DefectKind::ALL.iter().map(|k| (*k, 0)).collect();
        for f in findings {
            *counts.entry(f.kind).or_default() += 1;
        }
        Self { loc, counts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partitions {
    pub production: PartitionTotals,
    pub test: PartitionTotals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectRow {
    pub name: String,
    pub root: String,
    pub files: usize,
    pub parsed: usize,
    pub parse_ratio: f64,
    pub classes: usize,
    pub subroutines: usize,
    pub partitions: Partitions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedFile {
    pub project: String,
    pub path: String,
    pub error: ParseFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParseSummary {
    pub parsed: usize,
    pub total: usize,
    pub ratio: f64,
}

impl From<ParseStats> for ParseSummary {
    fn from(s: ParseStats) -> Self {
        Self {
            parsed: s.parsed,
            total: s.total,
            ratio: s.ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub include_tests: bool,
    /// Lines of code the densities are computed over.
    pub loc: u64,
    pub rows: Vec<KindRow>,
    pub aggregates: Aggregates,
    pub partitions: Partitions,
    pub projects: Vec<ProjectRow>,
    pub parse: ParseSummary,
    pub failed_files: Vec<FailedFile>,
    pub warnings: Vec<String>,
    pub config: Config,
    /// Every finding, production and test.
    pub findings: Vec<Finding>,
}

pub fn build_report(analysis: &Analysis, config: &Config, include_tests: bool) -> Report {
    let mut findings: Vec<Finding> = analysis.findings().cloned().collect();
    crate::detectors::sort_findings(&mut findings);
    let production: Vec<&Finding> = findings.iter().filter(|f| !f.is_test).collect();
    let test: Vec<&Finding> = findings.iter().filter(|f| f.is_test).collect();
    let production_loc: u64 = analysis.projects.iter().map(|p| p.loc(false)).sum();
    let test_loc: u64 = analysis.projects.iter().map(|p| p.loc(true)).sum();
    let partitions = Partitions {
        production: PartitionTotals::new(production_loc, &production),
        test: PartitionTotals::new(test_loc, &test),
    };
    let loc = if include_tests {
        production_loc + test_loc
    } else {
        production_loc
    };
    let rows: Vec<KindRow> = DefectKind::ALL
        .iter()
        .map(|&kind| {
            let mut found = partitions.production.counts[&kind];
            if include_tests {
                found += partitions.test.counts[&kind];
            }
            KindRow::new(kind, found, loc)
        })
        .collect();

    let projects = analysis
        .projects
        .iter()
        .map(|p| {
            let own: Vec<&Finding> = p.findings.iter().collect();
            let (prod, test): (Vec<&Finding>, Vec<&Finding>) = own.into_iter().partition(|f| !f.is_test);
            ProjectRow {
                name: p.project.name.clone(),
                root: p.root.display().to_string(),
                files: p.parse.total,
                parsed: p.parse.parsed,
                parse_ratio: p.parse.ratio,
                classes: p.project.classes.len(),
                subroutines: p.project.subroutines.len(),
                partitions: Partitions {
                    production: PartitionTotals::new(p.loc(false), &prod),
                    test: PartitionTotals::new(p.loc(true), &test),
                },
            }
        })
        .collect();
    let failed_files = analysis
        .projects
        .iter()
        .flat_map(|p| {
            p.files.iter().filter_map(move |f| {
                f.error.clone().map(|error| FailedFile {
                    project: p.project.name.clone(),
                    path: f.path.clone(),
                    error,
                })
            })
        })
        .collect();

    let mut warnings = Vec::new();
    if analysis.projects.iter().all(|p| p.parse.total == 0) {
        warnings.push("empty corpus: no Python files were found".to_string());
    } else if loc == 0 {
        warnings.push("zero lines of code in scope; densities reported as 0".to_string());
    }

    Report {
        tool: TOOL_NAME.to_string(),
        version: VERSION.to_string(),
        include_tests,
        loc,
        aggregates: aggregates(&rows),
        rows,
        partitions,
        projects,
        parse: analysis.parse_stats().into(),
        failed_files,
        warnings,
        config: config.clone(),
        findings,
    }
}

fn thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

pub fn render_table(report: &Report) -> String {
    let mut out = String::new();
    for warning in &report.warnings {
        let _ = writeln!(out, "WARNING: {warning}");
    }
    let _ = writeln!(out, "{:<26} {:>10} {:>14} {:>9}", "Design defect", "Found", "LOC", "Density");
    let _ = writeln!(out, "{}", "-".repeat(62));
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{:<26} {:>10} {:>14} {:>9}",
            row.kind.name(),
            thousands(row.found),
            thousands(row.loc),
            format_density(row.found, row.loc)
        );
    }
    let _ = writeln!(out, "{}", "-".repeat(62));
    let a = &report.aggregates;
    for (label, value) in [
        ("Smells (mean)", a.smell_mean),
        ("Antipatterns (mean)", a.antipattern_mean),
        ("All kinds (mean)", a.mean_all_kinds),
        ("Detectable kinds (mean)", a.mean_detectable_kinds),
        ("Pooled", a.pooled),
    ] {
        let _ = writeln!(out, "{label:<26} {:>35}", format_mean(value));
    }
    let scope = if report.include_tests {
        "production and test code"
    } else {
        "production code"
    };
    let _ = writeln!(
        out,
        "\n{} project(s), {} of {} files parsed ({:.2}%), scope: {scope}",
        report.projects.len(),
        report.parse.parsed,
        report.parse.total,
        report.parse.ratio * 100.0
    );
    out
}

pub fn render_json(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

/// One row per project and defect kind, for the configured scope.
pub fn render_csv(report: &Report) -> String {
    let mut out = String::from("project,kind,found,loc,density\n");
    for project in &report.projects {
        let p = &project.partitions;
        let loc = p.production.loc + if report.include_tests { p.test.loc } else { 0 };
        for kind in DefectKind::ALL {
            let found = p.production.counts[&kind] + if report.include_tests { p.test.counts[&kind] } else { 0 };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&project.name),
                kind.name(),
                found,
                loc,
                compute_density(found, loc)
            );
        }
    }
    out
}

pub fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FindingsDocument {
    Report { findings: Vec<Finding> },
    Bare(Vec<Finding>),
}

/// Renders every finding on `entity` (a full `path::Qualified.name`, or just
/// the qualified name) from a JSON report or finding list.
pub fn explain(document: &str, entity: &str) -> Result<String, String> {
    let findings = match serde_json::from_str(document).map_err(|e| format!("invalid findings document: {e}"))? {
        FindingsDocument::Report { findings } | FindingsDocument::Bare(findings) => findings,
    };
    let matches: Vec<&Finding> = findings
        .iter()
        .filter(|f| {
            f.entity_path == entity
                || f.entity_path.rsplit_once("::").is_some_and(|(_, q)| q == entity)
        })
        .collect();
    if matches.is_empty() {
        return Err(format!("no finding for `{entity}`"));
    }
    let mut out = String::new();
    for f in matches {
        let _ = writeln!(out, "{} {} in project {}", f.kind.name(), f.entity_path, f.project);
        let _ = writeln!(
            out,
            "  entity: {:?}{}",
            f.entity_kind,
            if f.is_test { " (test code)" } else { "" }
        );
        let _ = writeln!(out, "  evidence:");
        for (name, value) in &f.evidence {
            let _ = writeln!(out, "    {name} = {value}");
        }
        let _ = writeln!(out, "  thresholds:");
        for (name, value) in &f.thresholds {
            let _ = writeln!(out, "    {name} = {value}");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(format_density(79_367, 32_058_823), "24.76");
        assert_eq!(format_density(30_011, 32_058_823), "9.36");
        assert_eq!(format_density(0, 1000), "0.00");
        assert_eq!(compute_density(5, 0), 0.0);
        assert_eq!(format_density(1, 80_000), "0.13");
        assert_eq!(format_density(1, 8_000_000), "0.00");
    }

    #[test]
    fn half_up_rounding() {
        // 1/16 * 10000 = 625 / 1 → 0.125 per line scale check: 5 / 400_000 = 0.125
        assert_eq!(format_density(5, 400_000), "0.13");
        assert_eq!(format_mean(2.345), "2.35");
        assert_eq!(format_mean(7.798), "7.80");
    }

    #[test]
    fn grouping() {
        assert_eq!(thousands(32_058_823), "32,058,823");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(1000), "1,000");
    }
}
