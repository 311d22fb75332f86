//! Post-hoc re-evaluation of findings from their recorded evidence.
//!
//! The audit never consults the model or the metrics: it recomputes each
//! conjunct of a finding's formula from the values and cutoffs stored in the
//! finding itself, against the thresholds of the given configuration.

use super::{AldPolarity, DefectKind, DetectorConfig, Finding};
use crate::metrics::FenceBase;

struct Check<'f> {
    finding: &'f Finding,
    violations: Vec<String>,
}

impl Check<'_> {
    fn value(&mut self, name: &str) -> Option<u64> {
        let v = self.finding.evidence.get(name).copied();
        if v.is_none() {
            self.violations.push(format!("missing evidence `{name}`"));
        }
        v
    }

    fn cutoff(&mut self, name: &str) -> Option<f64> {
        let v = self.finding.thresholds.get(name).copied();
        if v.is_none() {
            self.violations.push(format!("missing threshold `{name}`"));
        }
        v
    }

    fn require(&mut self, holds: bool, what: impl FnOnce() -> String) -> bool {
        if !holds {
            self.violations.push(what());
        }
        holds
    }

    fn flag(&mut self, name: &str) -> bool {
        let v = self.value(name);
        v.is_some() && self.require(v == Some(1), || format!("{name} is not set"))
    }

    fn outlier_holds(&mut self, name: &str, factor: f64, fence_base: FenceBase) -> Option<bool> {
        let v = self.value(name)? as f64;
        let median = self.cutoff(&format!("{name}.median"))?;
        let base = self.cutoff(&format!("{name}.base"))?;
        let iqr = self.cutoff(&format!("{name}.iqr"))?;
        let recorded = self.cutoff(&format!("{name}.factor"))?;
        self.require(recorded == factor, || {
            format!("{name}: recorded factor {recorded} differs from configured {factor}")
        });
        self.require(iqr >= 0.0, || format!("{name}: negative IQR {iqr}"));
        match fence_base {
            FenceBase::Median => self.require(base == median, || {
                format!("{name}: fence base {base} is not the median {median}")
            }),
            FenceBase::Q3 => self.require(base >= median, || {
                format!("{name}: fence base {base} lies below the median {median}")
            }),
        };
        Some(v > median && v - base >= factor * iqr)
    }

    fn outlier(&mut self, name: &str, factor: f64, fence_base: FenceBase) {
        if let Some(holds) = self.outlier_holds(name, factor, fence_base) {
            self.require(holds, || format!("{name} is not a {factor}-IQR outlier"));
        }
    }

    fn top(&mut self, name: &str, percent: f64) {
        let (Some(v), Some(threshold), Some(recorded)) = (
            self.value(name),
            self.cutoff(&format!("{name}.threshold")),
            self.cutoff(&format!("{name}.top_pct")),
        ) else {
            return;
        };
        self.require(recorded == percent, || {
            format!("{name}: recorded top {recorded}% differs from configured {percent}%")
        });
        self.require(v as f64 >= threshold, || {
            format!("{name} = {v} is below the top-{percent}% threshold {threshold}")
        });
    }

    fn compare(&mut self, name: &str, holds: impl FnOnce(u64) -> bool, rule: &str) {
        if let Some(v) = self.value(name) {
            self.require(holds(v), || format!("{name} = {v} violates {rule}"));
        }
    }
}

/// Every conjunct of the finding's formula that its evidence fails to
/// satisfy. An empty list means the finding is sound.
pub fn recheck(finding: &Finding, config: &DetectorConfig) -> Vec<String> {
    let th = &config.thresholds;
    let filters = &config.filters;
    let (mild, extreme, base) = (filters.mild_factor, filters.extreme_factor, filters.fence_base);
    let mut c = Check {
        finding,
        violations: Vec::new(),
    };
    match finding.kind {
        DefectKind::FeatureEnvy => {
            c.compare("AID", |v| v > th.aid_min, &format!("AID > {}", th.aid_min));
            match th.ald_polarity {
                AldPolarity::Above => c.compare("ALD", |v| v > th.ald_min, &format!("ALD > {}", th.ald_min)),
                AldPolarity::Below => c.compare("ALD", |v| v < th.ald_min, &format!("ALD < {}", th.ald_min)),
            }
            c.compare("NRC", |v| v < th.nrc_max, &format!("NRC < {}", th.nrc_max));
            c.top("AID", th.envy_top_pct);
        }
        DefectKind::DataClass => {
            let public = c.outlier_holds("AOPuF", extreme, base);
            let accessors = c.outlier_holds("AOA", extreme, base);
            if let (Some(public), Some(accessors)) = (public, accessors) {
                c.require(public || accessors, || {
                    "neither AOPuF nor AOA is an extreme outlier".to_string()
                });
            }
        }
        DefectKind::LongMethod => c.outlier("LOC_method", extreme, base),
        DefectKind::LongParameterList => c.outlier("NOP", extreme, base),
        DefectKind::SwissArmyKnife => c.outlier("SUP", extreme, base),
        DefectKind::LargeClass => {
            if let (Some(nmd), Some(nad), Some(sum)) = (c.value("NMD"), c.value("NAD"), c.value("NMD+NAD")) {
                c.require(nmd + nad == sum, || format!("NMD + NAD = {} but recorded {sum}", nmd + nad));
            }
            c.outlier("NMD+NAD", extreme, base);
        }
        DefectKind::GodClass => {
            c.flag("IsController");
            c.outlier("LOC_class", mild, base);
            c.outlier("LCOM", mild, base);
            c.compare("RDC", |v| v > th.rdc_min, &format!("RDC > {}", th.rdc_min));
        }
        DefectKind::FunctionalDecomposition => {
            c.flag("HasProceduralName");
            c.compare("SUP", |v| v == 0, "SUP = 0");
            c.compare("RCOMPF", |v| v > th.rcompf_min, &format!("RCOMPF > {}", th.rcompf_min));
        }
        DefectKind::SpaghettiCode => {
            c.flag("HasProceduralName");
            c.compare("SUP", |v| v == 0, "SUP = 0");
            c.flag("UsesGlobals");
            c.flag("HasLongMethod");
            c.top("LOC_method_max", th.long_top_pct);
            c.top("MNP", th.long_top_pct);
        }
    }
    c.violations
}

/// `(finding index, violation)` for every unsound finding.
pub fn audit(findings: &[Finding], config: &DetectorConfig) -> Vec<(usize, String)> {
    findings
        .iter()
        .enumerate()
        .flat_map(|(i, f)| recheck(f, config).into_iter().map(move |v| (i, v)))
        .collect()
}
