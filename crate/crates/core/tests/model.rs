mod common;

use std::collections::BTreeSet;

use common::GeneratedProject;
use proptest::prelude::*;
use pysniff::config::Config;
use pysniff::model::{link_references, project_from_sources, BaseLink, Container, Project};
use pysniff::pipeline::analyze_sources;

fn summary(p: &Project) -> BTreeSet<String> {
    let classes = p.classes.iter().map(|c| format!("class {}", p.class_path(c.id)));
    let subs = p.subroutines.iter().map(|s| {
        let module = &p.module(s.module).path;
        format!("def {module}::{} nop={} loc={}", s.qualified_name, s.parameters.len(), s.loc)
    });
    classes.chain(subs).collect()
}

fn check_containment(p: &Project) {
    for c in &p.classes {
        let owners = match c.parent {
            Container::Module(m) => p.module(m).defined_classes.iter().filter(|&&x| x == c.id).count(),
            Container::Class(k) => p.class(k).nested_classes.iter().filter(|&&x| x == c.id).count(),
        };
        assert_eq!(owners, 1, "class {} has {owners} owners", c.qualified_name);
        let mut seen = BTreeSet::new();
        let mut cursor = c.parent;
        while let Container::Class(k) = cursor {
            assert!(seen.insert(k), "containment cycle at {}", c.qualified_name);
            cursor = p.class(k).parent;
        }
    }
    for s in &p.subroutines {
        let owners = match s.parent {
            Container::Module(m) => p.module(m).defined_subroutines.iter().filter(|&&x| x == s.id).count(),
            Container::Class(k) => p.class(k).methods.iter().filter(|&&x| x == s.id).count(),
        };
        assert_eq!(owners, 1, "subroutine {} has {owners} owners", s.qualified_name);
    }
    for c in &p.classes {
        for base in &c.resolved_bases {
            if let BaseLink::Class(b) = base {
                assert_ne!(*b, c.id, "{} inherits from itself", c.qualified_name);
                assert!(b.index() < p.classes.len());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn entity_counts_ignore_file_order(seed in 0u64..10_000, rotation in 0usize..50, reverse in any::<bool>()) {
        let generated = GeneratedProject::new(seed, 12, true);
        let sources = generated.as_sources();
        let mut shuffled = sources.clone();
        let n = shuffled.len();
        shuffled.rotate_left(rotation % n);
        if reverse {
            shuffled.reverse();
        }
        let a = project_from_sources("p", &sources).unwrap();
        let b = project_from_sources("p", &shuffled).unwrap();
        prop_assert_eq!(a.classes.len(), b.classes.len());
        prop_assert_eq!(a.subroutines.len(), b.subroutines.len());
        prop_assert_eq!(summary(&a), summary(&b));

        let config = Config::default();
        let fa = analyze_sources("p", &sources, &config).unwrap().findings;
        let fb = analyze_sources("p", &shuffled, &config).unwrap().findings;
        prop_assert_eq!(fa, fb);
    }

    #[test]
    fn linking_is_idempotent(seed in 0u64..10_000) {
        let generated = GeneratedProject::new(seed, 10, true);
        let mut project = project_from_sources("p", &generated.as_sources()).unwrap();
        let before = serde_json::to_string(&project).unwrap();
        link_references(&mut project);
        link_references(&mut project);
        prop_assert_eq!(before, serde_json::to_string(&project).unwrap());
    }

    #[test]
    fn containment_is_a_tree(seed in 0u64..10_000) {
        let generated = GeneratedProject::new(seed, 10, true);
        check_containment(&project_from_sources("p", &generated.as_sources()).unwrap());
    }
}

#[test]
fn nested_and_cross_module_structure() {
    let sources = [
        ("pkg/__init__.py", "from .base import Base\n"),
        ("pkg/base.py", "class Base:\n    class Meta:\n        ordering = 1\n\n    def f(self):\n        def g():\n            return 1\n        return g()\n"),
        ("pkg/child.py", "from pkg import Base\n\nclass Child(Base):\n    pass\n\nclass Loop(Loop):\n    pass\n"),
    ];
    let project = project_from_sources("p", &sources).unwrap();
    check_containment(&project);
    let child = project.find_class("Child").unwrap();
    let base = project.find_class("Base").unwrap();
    assert_eq!(child.resolved_bases, [BaseLink::Class(base.id)]);
    let looped = project.find_class("Loop").unwrap();
    assert_eq!(looped.resolved_bases, [BaseLink::External]);
    assert!(project.find_class("Base.Meta").is_some());
    // Nested functions fold into their enclosing subroutine.
    assert!(project.find_subroutine("Base.f").is_some());
    assert_eq!(project.subroutines.len(), 1);
}
