//! Integer metrics per entity and their per-project distributions.

mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::detectors::is_accessor;
use crate::model::{ClassEntity, ClassId, EntityRef, Project, Resolution, SubroutineEntity};

pub use stats::{
    quartiles, top_x_percent, EmptyPopulation, FenceBase, FilterConfig, FilterSpec,
    MetricDistribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MetricId {
    #[serde(rename = "LOC_method")]
    LocMethod,
    #[serde(rename = "LOC_class")]
    LocClass,
    #[serde(rename = "NOP")]
    Nop,
    #[serde(rename = "AID")]
    Aid,
    #[serde(rename = "ALD")]
    Ald,
    #[serde(rename = "NRC")]
    Nrc,
    #[serde(rename = "AOPuF")]
    AoPuF,
    #[serde(rename = "AOPrF")]
    AoPrF,
    #[serde(rename = "AOA")]
    Aoa,
    #[serde(rename = "NMD")]
    Nmd,
    #[serde(rename = "NAD")]
    Nad,
    #[serde(rename = "LCOM")]
    Lcom,
    #[serde(rename = "SUP")]
    Sup,
    #[serde(rename = "MNP")]
    Mnp,
}

impl MetricId {
    pub const SUBROUTINE: [MetricId; 5] = [
        MetricId::LocMethod,
        MetricId::Nop,
        MetricId::Aid,
        MetricId::Ald,
        MetricId::Nrc,
    ];
    pub const CLASS: [MetricId; 9] = [
        MetricId::LocClass,
        MetricId::Nmd,
        MetricId::Nad,
        MetricId::AoPuF,
        MetricId::AoPrF,
        MetricId::Aoa,
        MetricId::Lcom,
        MetricId::Sup,
        MetricId::Mnp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::LocMethod => "LOC_method",
            MetricId::LocClass => "LOC_class",
            MetricId::Nop => "NOP",
            MetricId::Aid => "AID",
            MetricId::Ald => "ALD",
            MetricId::Nrc => "NRC",
            MetricId::AoPuF => "AOPuF",
            MetricId::AoPrF => "AOPrF",
            MetricId::Aoa => "AOA",
            MetricId::Nmd => "NMD",
            MetricId::Nad => "NAD",
            MetricId::Lcom => "LCOM",
            MetricId::Sup => "SUP",
            MetricId::Mnp => "MNP",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricSample {
    pub entity: EntityRef,
    pub metric: MetricId,
    pub value: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SubroutineMetrics {
    pub loc: u64,
    pub nop: u64,
    pub aid: u64,
    pub ald: u64,
    pub nrc: u64,
}

impl SubroutineMetrics {
    pub fn get(&self, metric: MetricId) -> Option<u64> {
        Some(match metric {
            MetricId::LocMethod => self.loc,
            MetricId::Nop => self.nop,
            MetricId::Aid => self.aid,
            MetricId::Ald => self.ald,
            MetricId::Nrc => self.nrc,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassMetrics {
    pub loc: u64,
    pub nmd: u64,
    pub nad: u64,
    pub aopuf: u64,
    pub aoprf: u64,
    pub aoa: u64,
    pub lcom: u64,
    pub sup: u64,
    pub mnp: u64,
}

impl ClassMetrics {
    pub fn get(&self, metric: MetricId) -> Option<u64> {
        Some(match metric {
            MetricId::LocClass => self.loc,
            MetricId::Nmd => self.nmd,
            MetricId::Nad => self.nad,
            MetricId::AoPuF => self.aopuf,
            MetricId::AoPrF => self.aoprf,
            MetricId::Aoa => self.aoa,
            MetricId::Lcom => self.lcom,
            MetricId::Sup => self.sup,
            MetricId::Mnp => self.mnp,
            _ => return None,
        })
    }
}

/// Caller-visible parameter count: the receiver is excluded and `*args` and
/// `**kwargs` count once each.
pub fn nop(sub: &SubroutineEntity) -> u64 {
    sub.caller_parameters().count() as u64
}

pub fn compute_subroutine_metrics(sub: &SubroutineEntity) -> SubroutineMetrics {
    let mut aid = 0;
    let mut ald = 0;
    let mut owners = BTreeSet::new();
    for reference in &sub.referenced_variables {
        match reference.resolution {
            Resolution::OwnField => ald += 1,
            Resolution::ForeignField { owner } => {
                aid += 1;
                owners.insert(owner);
            }
            _ => {}
        }
    }
    SubroutineMetrics {
        loc: u64::from(sub.loc),
        nop: nop(sub),
        aid,
        ald,
        nrc: owners.len() as u64,
    }
}

fn own_fields(sub: &SubroutineEntity) -> BTreeSet<&str> {
    sub.referenced_variables
        .iter()
        .filter(|r| r.resolution == Resolution::OwnField)
        .map(|r| r.name.as_str())
        .collect()
}

/// Chidamber–Kemerer lack of cohesion over a class's method field sets:
/// pairs sharing no field minus pairs sharing at least one, floored at zero.
pub fn lcom_of<T: Ord>(field_sets: &[BTreeSet<T>]) -> u64 {
    let (mut p, mut q) = (0u64, 0u64);
    for (i, a) in field_sets.iter().enumerate() {
        for b in &field_sets[i + 1..] {
            if a.is_disjoint(b) {
                p += 1;
            } else {
                q += 1;
            }
        }
    }
    p.saturating_sub(q)
}

pub fn lcom(project: &Project, class: &ClassEntity) -> u64 {
    let sets: Vec<BTreeSet<&str>> = class
        .methods
        .iter()
        .map(|&m| own_fields(project.subroutine(m)))
        .collect();
    lcom_of(&sets)
}

fn is_object(base: &str) -> bool {
    base == "object" || base == "builtins.object"
}

pub fn compute_class_metrics(project: &Project, class: &ClassEntity) -> ClassMetrics {
    let methods: Vec<&SubroutineEntity> =
        class.methods.iter().map(|&m| project.subroutine(m)).collect();
    let mut attributes: BTreeSet<&str> = class.fields.keys().map(String::as_str).collect();
    attributes.extend(
        methods
            .iter()
            .filter(|m| m.has_decorator("property") || m.has_decorator("cached_property"))
            .map(|m| m.name.as_str()),
    );
    ClassMetrics {
        loc: u64::from(class.loc),
        nmd: methods.iter().filter(|m| m.is_concrete).count() as u64,
        nad: attributes.len() as u64,
        aopuf: class.public_fields() as u64,
        aoprf: class.private_fields() as u64,
        aoa: methods.iter().filter(|m| is_accessor(m)).count() as u64,
        lcom: lcom(project, class),
        sup: class.base_names.iter().filter(|b| !is_object(b)).count() as u64,
        mnp: methods.iter().filter(|m| nop(m) == 0).count() as u64,
    }
}

/// Every metric of one project, indexed by entity id, plus the finalized
/// per-project distributions.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectMetrics {
    pub subroutines: Vec<SubroutineMetrics>,
    pub classes: Vec<ClassMetrics>,
    pub distributions: BTreeMap<MetricId, MetricDistribution>,
}

impl ProjectMetrics {
    pub fn compute(project: &Project) -> Self {
        let subroutines: Vec<SubroutineMetrics> = project
            .subroutines
            .par_iter()
            .map(compute_subroutine_metrics)
            .collect();
        let classes: Vec<ClassMetrics> = project
            .classes
            .par_iter()
            .map(|c| compute_class_metrics(project, c))
            .collect();
        let mut distributions = BTreeMap::new();
        for metric in MetricId::SUBROUTINE {
            let values = subroutines.iter().filter_map(|m| m.get(metric)).collect();
            if let Ok(d) = MetricDistribution::new(values) {
                distributions.insert(metric, d);
            }
        }
        for metric in MetricId::CLASS {
            let values = classes.iter().filter_map(|m| m.get(metric)).collect();
            if let Ok(d) = MetricDistribution::new(values) {
                distributions.insert(metric, d);
            }
        }
        Self {
            subroutines,
            classes,
            distributions,
        }
    }

    pub fn class(&self, id: ClassId) -> &ClassMetrics {
        &self.classes[id.index()]
    }

    pub fn subroutine(&self, id: crate::model::SubroutineId) -> &SubroutineMetrics {
        &self.subroutines[id.index()]
    }

    pub fn distribution(&self, metric: MetricId) -> Option<&MetricDistribution> {
        self.distributions.get(&metric)
    }

    pub fn value(&self, entity: EntityRef, metric: MetricId) -> Option<u64> {
        match entity {
            EntityRef::Class(id) => self.class(id).get(metric),
            EntityRef::Subroutine(id) => self.subroutine(id).get(metric),
        }
    }

    /// Every sample of the project, in entity then metric order.
    pub fn samples(&self) -> Vec<MetricSample> {
        let subs = self.subroutines.iter().enumerate().flat_map(|(i, m)| {
            let entity = EntityRef::Subroutine(crate::model::SubroutineId(i as u32));
            MetricId::SUBROUTINE.into_iter().map(move |metric| MetricSample {
                entity,
                metric,
                value: m.get(metric).unwrap_or_default(),
            })
        });
        let classes = self.classes.iter().enumerate().flat_map(|(i, m)| {
            let entity = EntityRef::Class(ClassId(i as u32));
            MetricId::CLASS.into_iter().map(move |metric| MetricSample {
                entity,
                metric,
                value: m.get(metric).unwrap_or_default(),
            })
        });
        subs.chain(classes).collect()
    }
}

/// `project,entity_kind,entity_path,metric,value` rows, sorted.
pub fn metrics_csv_rows(project: &Project, metrics: &ProjectMetrics) -> Vec<[String; 5]> {
    let mut rows: Vec<[String; 5]> = metrics
        .samples()
        .into_iter()
        .map(|s| {
            let kind = match s.entity {
                EntityRef::Class(_) => "class",
                EntityRef::Subroutine(_) => "subroutine",
            };
            [
                project.name.clone(),
                kind.to_string(),
                project.entity_path(s.entity),
                s.metric.name().to_string(),
                s.value.to_string(),
            ]
        })
        .collect();
    rows.sort();
    rows
}
