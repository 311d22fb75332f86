//! One detector per defect kind.

use crate::metrics::{MetricDistribution, MetricId};
use crate::model::{ClassEntity, ClassId, EntityRef};

use super::{AldPolarity, Context, DefectKind, Detector, Evidence};

pub fn default_detectors() -> Vec<Box<dyn Detector>> {
    vec![
        Box::new(FeatureEnvy),
        Box::new(DataClass),
        Box::new(LongMethod),
        Box::new(LongParameterList),
        Box::new(LargeClass),
        Box::new(GodClass),
        Box::new(SwissArmyKnife),
        Box::new(FunctionalDecomposition),
        Box::new(SpaghettiCode),
    ]
}

fn class_of(entity: EntityRef) -> ClassId {
    match entity {
        EntityRef::Class(id) => id,
        EntityRef::Subroutine(_) => unreachable!("class detector given a subroutine"),
    }
}

fn dist<'c>(ctx: &'c Context<'_>, metric: MetricId) -> Option<&'c MetricDistribution> {
    ctx.metrics.distribution(metric)
}

/// Records the single extreme-outlier test of a one-metric detector.
fn extreme(ctx: &Context<'_>, entity: EntityRef, metric: MetricId) -> Option<Evidence> {
    let d = dist(ctx, metric)?;
    let v = ctx.metrics.value(entity, metric)?;
    let filters = &ctx.config.filters;
    let mut evidence = Evidence::default();
    evidence
        .outlier(metric.name(), v, d, filters, filters.extreme_factor)
        .then_some(evidence)
}

pub struct FeatureEnvy;

impl FeatureEnvy {
    fn gates(ctx: &Context<'_>, entity: EntityRef, evidence: &mut Evidence) -> bool {
        let th = &ctx.config.thresholds;
        let EntityRef::Subroutine(id) = entity else { return false };
        let m = ctx.metrics.subroutine(id);
        let aid = evidence.value("AID", m.aid) > th.aid_min;
        let ald = evidence.value("ALD", m.ald);
        let ald = match th.ald_polarity {
            AldPolarity::Above => ald > th.ald_min,
            AldPolarity::Below => ald < th.ald_min,
        };
        let nrc = evidence.value("NRC", m.nrc) < th.nrc_max;
        aid && ald && nrc
    }
}

impl Detector for FeatureEnvy {
    fn kind(&self) -> DefectKind {
        DefectKind::FeatureEnvy
    }

    fn mark(&self, ctx: &Context<'_>, entity: EntityRef) -> bool {
        Self::gates(ctx, entity, &mut Evidence::default())
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        let th = &ctx.config.thresholds;
        let mut evidence = Evidence::default();
        let gates = Self::gates(ctx, entity, &mut evidence);
        evidence.threshold("AID_min", th.aid_min as f64);
        evidence.threshold("ALD_min", th.ald_min as f64);
        evidence.threshold("NRC_max", th.nrc_max as f64);
        evidence.threshold(
            "ALD_below",
            if th.ald_polarity == AldPolarity::Below { 1.0 } else { 0.0 },
        );
        let aid = evidence.values["AID"];
        let top = evidence.top("AID", aid, dist(ctx, MetricId::Aid)?, th.envy_top_pct);
        (gates && top).then_some(evidence)
    }
}

pub struct DataClass;

impl Detector for DataClass {
    fn kind(&self) -> DefectKind {
        DefectKind::DataClass
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        let m = ctx.metrics.class(class_of(entity));
        let filters = &ctx.config.filters;
        let factor = filters.extreme_factor;
        let mut evidence = Evidence::default();
        let public = evidence.outlier("AOPuF", m.aopuf, dist(ctx, MetricId::AoPuF)?, filters, factor);
        let accessors = evidence.outlier("AOA", m.aoa, dist(ctx, MetricId::Aoa)?, filters, factor);
        (public || accessors).then_some(evidence)
    }
}

pub struct LongMethod;

impl Detector for LongMethod {
    fn kind(&self) -> DefectKind {
        DefectKind::LongMethod
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        extreme(ctx, entity, MetricId::LocMethod)
    }
}

pub struct LongParameterList;

impl Detector for LongParameterList {
    fn kind(&self) -> DefectKind {
        DefectKind::LongParameterList
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        extreme(ctx, entity, MetricId::Nop)
    }
}

pub struct LargeClass;

impl Detector for LargeClass {
    fn kind(&self) -> DefectKind {
        DefectKind::LargeClass
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        let m = ctx.metrics.class(class_of(entity));
        let filters = &ctx.config.filters;
        let mut evidence = Evidence::default();
        evidence.value("NMD", m.nmd);
        evidence.value("NAD", m.nad);
        evidence
            .outlier(
                "NMD+NAD",
                m.nmd + m.nad,
                ctx.size_distribution.as_ref()?,
                filters,
                filters.extreme_factor,
            )
            .then_some(evidence)
    }
}

fn is_controller(ctx: &Context<'_>, class: &ClassEntity) -> bool {
    let lexicon = &ctx.config.lexicons;
    lexicon.is_controller_name(&class.name)
        || class
            .methods
            .iter()
            .any(|&m| lexicon.is_controller_name(&ctx.project.subroutine(m).name))
}

/// Referenced classes whose accessor count is in the project's top X%.
pub fn related_data_classes(ctx: &Context<'_>, class: &ClassEntity) -> Option<(u64, u64)> {
    let d = dist(ctx, MetricId::Aoa)?;
    let threshold = d.top_threshold(ctx.config.thresholds.data_top_pct);
    let count = class
        .referenced_classes
        .iter()
        .filter(|&&r| ctx.metrics.class(r).aoa >= threshold)
        .count() as u64;
    Some((count, threshold))
}

/// Referenced classes with exactly one method and an outlying number of
/// private fields.
pub fn related_single_method_classes(ctx: &Context<'_>, class: &ClassEntity) -> Option<u64> {
    let d = dist(ctx, MetricId::AoPrF)?;
    let filters = &ctx.config.filters;
    Some(
        class
            .referenced_classes
            .iter()
            .filter(|&&r| {
                ctx.project.class(r).methods.len() == 1
                    && filters.is_mild_outlier(ctx.metrics.class(r).aoprf, d)
            })
            .count() as u64,
    )
}

pub struct GodClass;

impl Detector for GodClass {
    fn kind(&self) -> DefectKind {
        DefectKind::GodClass
    }

    fn mark(&self, ctx: &Context<'_>, entity: EntityRef) -> bool {
        is_controller(ctx, ctx.project.class(class_of(entity)))
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        let id = class_of(entity);
        let class = ctx.project.class(id);
        let m = ctx.metrics.class(id);
        let filters = &ctx.config.filters;
        let th = &ctx.config.thresholds;
        let mut evidence = Evidence::default();
        let controller = evidence.flag("IsController", is_controller(ctx, class));
        let loc = evidence.outlier("LOC_class", m.loc, dist(ctx, MetricId::LocClass)?, filters, filters.mild_factor);
        let lcom = evidence.outlier("LCOM", m.lcom, dist(ctx, MetricId::Lcom)?, filters, filters.mild_factor);
        let (rdc, aoa_threshold) = related_data_classes(ctx, class)?;
        evidence.value("RDC", rdc);
        evidence.threshold("RDC_min", th.rdc_min as f64);
        evidence.threshold("AOA.top_pct", th.data_top_pct);
        evidence.threshold("AOA.threshold", aoa_threshold as f64);
        (controller && loc && lcom && rdc > th.rdc_min).then_some(evidence)
    }
}

pub struct SwissArmyKnife;

impl Detector for SwissArmyKnife {
    fn kind(&self) -> DefectKind {
        DefectKind::SwissArmyKnife
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        extreme(ctx, entity, MetricId::Sup)
    }
}

fn procedural_without_bases(ctx: &Context<'_>, id: ClassId) -> bool {
    ctx.config.lexicons.is_procedural_name(&ctx.project.class(id).name) && ctx.metrics.class(id).sup == 0
}

pub struct FunctionalDecomposition;

impl Detector for FunctionalDecomposition {
    fn kind(&self) -> DefectKind {
        DefectKind::FunctionalDecomposition
    }

    fn mark(&self, ctx: &Context<'_>, entity: EntityRef) -> bool {
        procedural_without_bases(ctx, class_of(entity))
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        let id = class_of(entity);
        let class = ctx.project.class(id);
        let th = &ctx.config.thresholds;
        let mut evidence = Evidence::default();
        let named = evidence.flag(
            "HasProceduralName",
            ctx.config.lexicons.is_procedural_name(&class.name),
        );
        let sup = evidence.value("SUP", ctx.metrics.class(id).sup);
        let rcompf = evidence.value("RCOMPF", related_single_method_classes(ctx, class)?);
        evidence.threshold("RCOMPF_min", th.rcompf_min as f64);
        (named && sup == 0 && rcompf > th.rcompf_min).then_some(evidence)
    }
}

pub struct SpaghettiCode;

impl Detector for SpaghettiCode {
    fn kind(&self) -> DefectKind {
        DefectKind::SpaghettiCode
    }

    fn mark(&self, ctx: &Context<'_>, entity: EntityRef) -> bool {
        let id = class_of(entity);
        procedural_without_bases(ctx, id) && ctx.project.class(id).uses_global
    }

    fn confirm(&self, ctx: &Context<'_>, entity: EntityRef) -> Option<Evidence> {
        let id = class_of(entity);
        let class = ctx.project.class(id);
        let th = &ctx.config.thresholds;
        let mut evidence = Evidence::default();
        let named = evidence.flag(
            "HasProceduralName",
            ctx.config.lexicons.is_procedural_name(&class.name),
        );
        let sup = evidence.value("SUP", ctx.metrics.class(id).sup);
        let globals = evidence.flag("UsesGlobals", class.uses_global);
        let longest = class
            .methods
            .iter()
            .map(|&m| ctx.metrics.subroutine(m).loc)
            .max();
        let long_method = match longest {
            Some(loc) => evidence.top("LOC_method_max", loc, dist(ctx, MetricId::LocMethod)?, th.long_top_pct),
            None => false,
        };
        evidence.flag("HasLongMethod", long_method);
        let mnp = evidence.top("MNP", ctx.metrics.class(id).mnp, dist(ctx, MetricId::Mnp)?, th.long_top_pct);
        (named && sup == 0 && globals && long_method && mnp).then_some(evidence)
    }
}
