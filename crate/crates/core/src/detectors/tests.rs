use super::audit::recheck;
use super::*;
use crate::model::project_from_sources;

/// Small, uniform classes that keep every distribution tight.
fn filler(count: usize) -> String {
    (0..count)
        .map(|i| {
            let params: String = (0..i % 3).map(|k| format!(", a{k}")).collect();
            format!(
                "class Filler{i}:\n    def __init__(self):\n        self.value = {i}\n\n    def total(self{params}):\n        return self.value + 1\n\n"
            )
        })
        .collect()
}

fn detect(source: &str) -> Vec<Finding> {
    detect_with(source, &DetectorConfig::default())
}

fn detect_with(source: &str, config: &DetectorConfig) -> Vec<Finding> {
    let project = project_from_sources("p", &[("m.py", source)]).unwrap();
    let metrics = ProjectMetrics::compute(&project);
    let findings = Registry::default().run(&project, &metrics, config);
    for finding in &findings {
        assert_eq!(recheck(finding, config), Vec::<String>::new(), "{finding:?}");
    }
    findings
}

fn kinds_at(findings: &[Finding], path: &str) -> Vec<DefectKind> {
    findings
        .iter()
        .filter(|f| f.entity_path == path)
        .map(|f| f.kind)
        .collect()
}

const ENVY: &str = "class Point:\n    def __init__(self):\n        self.a = 1\n        self.b = 2\n        self.c = 3\n\n\
class Box:\n    def __init__(self):\n        self.d = 1\n        self.e = 2\n\n\
class Host:\n    def __init__(self):\n        self.w = 0\n        self.x = 0\n        self.y = 0\n        self.z = 0\n\n    \
    def envy(self, p: Point, q: Box):\n        return p.a + p.b + p.c + q.d + q.e + self.w + self.x + self.y + self.z\n\n";

#[test]
fn feature_envy_fires_on_planted_method() {
    let findings = detect(&format!("{ENVY}{}", filler(20)));
    assert_eq!(kinds_at(&findings, "m.py::Host.envy"), [DefectKind::FeatureEnvy]);
    let f = findings.iter().find(|f| f.kind == DefectKind::FeatureEnvy).unwrap();
    assert_eq!((f.evidence["AID"], f.evidence["ALD"], f.evidence["NRC"]), (5, 4, 2));
}

#[test]
fn feature_envy_respects_nrc_bound() {
    let source = ENVY.replace(
        "def envy(self, p: Point, q: Box):\n        return p.a + p.b + p.c + q.d + q.e",
        "def envy(self, p: Point, q: Box, h: Cup):\n        return p.a + p.b + p.c + q.d + q.e + h.f",
    );
    let cup = "class Cup:\n    def __init__(self):\n        self.f = 1\n\n";
    let findings = detect(&format!("{cup}{source}{}", filler(20)));
    assert!(!kinds_at(&findings, "m.py::Host.envy").contains(&DefectKind::FeatureEnvy));
}

#[test]
fn ald_polarity_flag_flips_local_access() {
    let mut config = DetectorConfig::default();
    config.thresholds.ald_polarity = AldPolarity::Below;
    let findings = detect_with(&format!("{ENVY}{}", filler(20)), &config);
    assert!(kinds_at(&findings, "m.py::Host.envy").is_empty());
}

#[test]
fn long_method_and_parameter_list() {
    let body: String = (0..40).map(|i| format!("    v{i} = {i}\n")).collect();
    let params: Vec<String> = (0..14).map(|i| format!("p{i}")).collect();
    let source = format!(
        "def long_one():\n{body}    return v0\n\ndef wide({}):\n    return p0\n\n{}",
        params.join(", "),
        filler(20)
    );
    let findings = detect(&source);
    assert_eq!(kinds_at(&findings, "m.py::long_one"), [DefectKind::LongMethod]);
    assert_eq!(kinds_at(&findings, "m.py::wide"), [DefectKind::LongParameterList]);
}

#[test]
fn uniform_project_has_no_statistical_findings() {
    assert!(detect(&filler(25)).is_empty());
}

#[test]
fn swiss_army_knife_and_sup_gates() {
    let bases: Vec<String> = (0..6).map(|i| format!("Filler{i}")).collect();
    let source = format!(
        "{}class MakeEverything({}):\n    def go(self):\n        return 1\n",
        filler(20),
        bases.join(", ")
    );
    let findings = detect(&source);
    assert_eq!(kinds_at(&findings, "m.py::MakeEverything"), [DefectKind::SwissArmyKnife]);
    assert!(findings
        .iter()
        .all(|f| !matches!(f.kind, DefectKind::FunctionalDecomposition | DefectKind::SpaghettiCode)));
}

#[test]
fn empty_project_yields_nothing() {
    assert!(detect("").is_empty());
    assert!(detect("x = 1\n").is_empty());
}

#[test]
fn tampered_evidence_is_reported() {
    let findings = detect(&format!("{ENVY}{}", filler(20)));
    let mut finding = findings
        .into_iter()
        .find(|f| f.kind == DefectKind::FeatureEnvy)
        .unwrap();
    finding.evidence.insert("NRC".into(), 3);
    assert!(!recheck(&finding, &DetectorConfig::default()).is_empty());
    finding.evidence.remove("AID");
    assert!(recheck(&finding, &DetectorConfig::default())
        .iter()
        .any(|v| v.contains("missing evidence")));
}

#[test]
fn kind_names_round_trip() {
    for kind in DefectKind::ALL {
        assert_eq!(kind.name().parse::<DefectKind>().unwrap(), kind);
    }
    assert_eq!(DefectKind::ALL.iter().filter(|k| k.is_smell()).count(), 5);
}

#[test]
fn thresholds_validation() {
    assert!(DetectorThresholds::default().validate().is_ok());
    let bad = DetectorThresholds {
        envy_top_pct: 0.0,
        ..DetectorThresholds::default()
    };
    assert!(bad.validate().is_err());
    let parsed: DetectorThresholds = serde_json::from_str(r#"{"AID_min": 6, "ald_polarity": "below"}"#).unwrap();
    assert_eq!(parsed.aid_min, 6);
    assert_eq!(parsed.ald_polarity, AldPolarity::Below);
}
