//! The nine design-defect detectors.
//!
//! Detection runs in two phases. Each detector first marks candidates using
//! only observable properties (names, base counts, fixed thresholds). Once
//! every per-project distribution is final, it confirms or rejects each
//! candidate with the statistical filters. Every confirmed [`Finding`]
//! carries the metric values and cutoffs that confirmed it, so it can be
//! re-checked later by [`audit`].

pub mod audit;
mod names;
mod rules;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::{FilterConfig, MetricDistribution, ProjectMetrics};
use crate::model::{EntityRef, Project};

pub use names::{is_accessor, NameLexicon};
pub use rules::default_detectors;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DefectKind {
    FeatureEnvy,
    DataClass,
    LongMethod,
    LongParameterList,
    LargeClass,
    GodClass,
    SwissArmyKnife,
    FunctionalDecomposition,
    SpaghettiCode,
}

impl DefectKind {
    pub const ALL: [DefectKind; 9] = [
        DefectKind::FeatureEnvy,
        DefectKind::DataClass,
        DefectKind::LongMethod,
        DefectKind::LongParameterList,
        DefectKind::LargeClass,
        DefectKind::GodClass,
        DefectKind::SwissArmyKnife,
        DefectKind::FunctionalDecomposition,
        DefectKind::SpaghettiCode,
    ];

    /// The first five kinds are code smells, the rest antipatterns.
    pub fn is_smell(self) -> bool {
        matches!(
            self,
            DefectKind::FeatureEnvy
                | DefectKind::DataClass
                | DefectKind::LongMethod
                | DefectKind::LongParameterList
                | DefectKind::LargeClass
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            DefectKind::FeatureEnvy => "FeatureEnvy",
            DefectKind::DataClass => "DataClass",
            DefectKind::LongMethod => "LongMethod",
            DefectKind::LongParameterList => "LongParameterList",
            DefectKind::LargeClass => "LargeClass",
            DefectKind::GodClass => "GodClass",
            DefectKind::SwissArmyKnife => "SwissArmyKnife",
            DefectKind::FunctionalDecomposition => "FunctionalDecomposition",
            DefectKind::SpaghettiCode => "SpaghettiCode",
        }
    }

    pub fn level(self) -> Level {
        match self {
            DefectKind::FeatureEnvy | DefectKind::LongMethod | DefectKind::LongParameterList => {
                Level::Subroutine
            }
            _ => Level::Class,
        }
    }
}

impl fmt::Display for DefectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DefectKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DefectKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown defect kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Class,
    Subroutine,
}

/// Direction of the local-access conjunct of Feature Envy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AldPolarity {
    /// `ALD > ALD_min`
    #[default]
    Above,
    /// `ALD < ALD_min`
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorThresholds {
    #[serde(rename = "AID_min", alias = "aid_min")]
    pub aid_min: u64,
    #[serde(rename = "ALD_min", alias = "ald_min")]
    pub ald_min: u64,
    #[serde(rename = "NRC_max", alias = "nrc_max")]
    pub nrc_max: u64,
    pub envy_top_pct: f64,
    #[serde(rename = "RDC_min", alias = "rdc_min")]
    pub rdc_min: u64,
    #[serde(rename = "RCOMPF_min", alias = "rcompf_min")]
    pub rcompf_min: u64,
    pub data_top_pct: f64,
    pub long_top_pct: f64,
    pub ald_polarity: AldPolarity,
}

impl Default for DetectorThresholds {
    fn default() -> Self {
        Self {
            aid_min: 4,
            ald_min: 3,
            nrc_max: 3,
            envy_top_pct: 10.0,
            rdc_min: 2,
            rcompf_min: 2,
            data_top_pct: 15.0,
            long_top_pct: 15.0,
            ald_polarity: AldPolarity::Above,
        }
    }
}

impl DetectorThresholds {
    pub fn validate(&self) -> Result<(), String> {
        let counts = [
            ("AID_min", self.aid_min),
            ("ALD_min", self.ald_min),
            ("NRC_max", self.nrc_max),
            ("RDC_min", self.rdc_min),
            ("RCOMPF_min", self.rcompf_min),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(format!("threshold `{name}` must be positive"));
        }
        for (name, pct) in [
            ("envy_top_pct", self.envy_top_pct),
            ("data_top_pct", self.data_top_pct),
            ("long_top_pct", self.long_top_pct),
        ] {
            if !(pct > 0.0 && pct <= 100.0) {
                return Err(format!("threshold `{name}` must lie in (0, 100]"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DetectorConfig {
    pub thresholds: DetectorThresholds,
    pub lexicons: NameLexicon,
    pub filters: FilterConfig,
}

/// Metric values and cutoffs behind one verdict. Boolean predicates are
/// recorded as 0 or 1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub values: BTreeMap<String, u64>,
    pub thresholds: BTreeMap<String, f64>,
}

impl Evidence {
    pub fn value(&mut self, name: &str, v: u64) -> u64 {
        self.values.insert(name.to_string(), v);
        v
    }

    pub fn flag(&mut self, name: &str, v: bool) -> bool {
        self.values.insert(name.to_string(), u64::from(v));
        v
    }

    pub fn threshold(&mut self, name: &str, v: f64) {
        self.thresholds.insert(name.to_string(), v);
    }

    /// Records an outlier test of `name = v` and returns its verdict.
    pub fn outlier(
        &mut self,
        name: &str,
        v: u64,
        d: &MetricDistribution,
        filters: &FilterConfig,
        factor: f64,
    ) -> bool {
        self.value(name, v);
        self.threshold(&format!("{name}.median"), d.median);
        self.threshold(&format!("{name}.base"), filters.base(d));
        self.threshold(&format!("{name}.iqr"), d.iqr());
        self.threshold(&format!("{name}.factor"), factor);
        filters.is_outlier(v, d, factor)
    }

    /// Records a top-X% test of `name = v` and returns its verdict.
    pub fn top(&mut self, name: &str, v: u64, d: &MetricDistribution, percent: f64) -> bool {
        self.value(name, v);
        let threshold = d.top_threshold(percent);
        self.threshold(&format!("{name}.top_pct"), percent);
        self.threshold(&format!("{name}.threshold"), threshold as f64);
        v >= threshold
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub project: String,
    /// `module/path.py::Qualified.name`
    pub entity_path: String,
    pub entity_kind: Level,
    pub kind: DefectKind,
    pub is_test: bool,
    pub evidence: BTreeMap<String, u64>,
    pub thresholds: BTreeMap<String, f64>,
}

/// Shared read-only inputs of phase 2.
pub struct Context<'a> {
    pub project: &'a Project,
    pub metrics: &'a ProjectMetrics,
    pub config: &'a DetectorConfig,
    /// Per-class `NMD + NAD` population.
    pub size_distribution: Option<MetricDistribution>,
}

impl<'a> Context<'a> {
    pub fn new(project: &'a Project, metrics: &'a ProjectMetrics, config: &'a DetectorConfig) -> Self {
        let sizes = metrics.classes.iter().map(|c| c.nmd + c.nad).collect();
        Self {
            project,
            metrics,
            config,
            size_distribution: MetricDistribution::new(sizes).ok(),
        }
    }
}

pub trait Detector: Send + Sync {
    fn kind(&self) -> DefectKind;

    /// Phase 1: the observable predicate. Purely statistical detectors mark
    /// every entity.
    fn mark(&self, _ctx: &Context<'_>, _entity: EntityRef) -> bool {
        true
    }

    /// Phase 2: statistical confirmation. Returns the evidence when every
    /// conjunct of the formula holds.
    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence>;
}

/// Coordinates the two detection phases over a set of detectors.
pub struct Registry {
    detectors: Vec<Box<dyn Detector>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new(default_detectors())
    }
}

impl Registry {
    pub fn new(detectors: Vec<Box<dyn Detector>>) -> Self {
        Self { detectors }
    }

    pub fn kinds(&self) -> Vec<DefectKind> {
        self.detectors.iter().map(|d| d.kind()).collect()
    }

    /// Runs both phases on one project; findings are sorted by path and kind.
    pub fn run(&self, project: &Project, metrics: &ProjectMetrics, config: &DetectorConfig) -> Vec<Finding> {
        let ctx = Context::new(project, metrics, config);
        let candidates: Vec<(&dyn Detector, EntityRef)> = self
            .detectors
            .iter()
            .flat_map(|detector| {
                let entities: Vec<EntityRef> = match detector.kind().level() {
                    Level::Class => project.class_ids().map(EntityRef::Class).collect(),
                    Level::Subroutine => project.subroutine_ids().map(EntityRef::Subroutine).collect(),
                };
                let ctx = &ctx;
                entities
                    .into_iter()
                    .filter(move |&e| detector.mark(ctx, e))
                    .map(move |e| (detector.as_ref(), e))
            })
            .collect();
        let mut findings: Vec<Finding> = candidates
            .par_iter()
            .filter_map(|&(detector, entity)| {
                let evidence = detector.confirm(&ctx, entity)?;
                Some(Finding {
                    project: project.name.clone(),
                    entity_path: project.entity_path(entity),
                    entity_kind: detector.kind().level(),
                    kind: detector.kind(),
                    is_test: project.entity_module(entity).is_test,
                    evidence: evidence.values,
                    thresholds: evidence.thresholds,
                })
            })
            .collect();
        sort_findings(&mut findings);
        findings
    }
}

pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| {
        (&a.project, &a.entity_path, a.kind).cmp(&(&b.project, &b.entity_path, b.kind))
    });
}

/// Runs the default registry over several projects.
pub fn run_detection(
    projects: &[(&Project, &ProjectMetrics)],
    config: &DetectorConfig,
) -> Vec<Finding> {
    let registry = Registry::default();
    let mut findings: Vec<Finding> = projects
        .iter()
        .flat_map(|(project, metrics)| registry.run(project, metrics, config))
        .collect();
    sort_findings(&mut findings);
    findings
}

#[cfg(test)]
mod tests;
