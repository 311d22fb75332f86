use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use proptest::prelude::*;
use pysniff::corpus::{
    enumerate_sources, filter_project, language_shares, split_test_production, CorpusStats, CorpusThresholds,
};

fn touch(root: &Path, relative: &str, text: &str) {
    let path = root.join(relative);
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

#[test]
fn enumeration_skips_dot_directories_and_sorts() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    touch(root, "b.py", "x = 1\n");
    touch(root, "a/z.py", "x = 1\n");
    touch(root, "a/notes.txt", "not python\n");
    touch(root, ".venv/lib/site.py", "x = 1\n");
    touch(root, "pkg/.hidden/m.py", "x = 1\n");
    touch(root, ".hidden_file.py", "x = 1\n");
    let found: Vec<String> = enumerate_sources(root).into_iter().map(|s| s.relative).collect();
    assert_eq!(found, [".hidden_file.py", "a/z.py", "b.py"]);
    for path in &found {
        let dirs: Vec<&str> = path.split('/').collect();
        assert!(dirs[..dirs.len() - 1].iter().all(|d| !d.starts_with('.')));
    }
}

#[cfg(unix)]
#[test]
fn symlink_cycles_terminate() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    touch(root, "pkg/m.py", "x = 1\n");
    std::os::unix::fs::symlink(root.join("pkg"), root.join("pkg/loop")).unwrap();
    std::os::unix::fs::symlink(root, root.join("pkg/up")).unwrap();
    let found: Vec<String> = enumerate_sources(root).into_iter().map(|s| s.relative).collect();
    assert_eq!(found, ["pkg/m.py"]);
}

#[test]
fn missing_root_yields_nothing() {
    assert!(enumerate_sources(Path::new("/definitely/not/here")).is_empty());
}

#[test]
fn language_shares_count_bytes_per_language() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    touch(root, "a.py", &"x".repeat(300));
    touch(root, "b.c", &"x".repeat(100));
    touch(root, "c.h", &"x".repeat(100));
    touch(root, "README.md", &"x".repeat(10_000));
    touch(root, ".git/objects/big.py", &"x".repeat(10_000));
    let shares = language_shares(root);
    assert_eq!(shares.len(), 2);
    assert!((shares["py"] - 0.6).abs() < 1e-9);
    assert!((shares["c"] - 0.4).abs() < 1e-9);
}

fn stats() -> impl Strategy<Value = CorpusStats> {
    (0u64..60, 0.9f64..=1.0, prop::option::of(0u64..300)).prop_map(|(classes, parse_ratio, commit_count)| CorpusStats {
        files: 10,
        classes,
        parse_ratio,
        python_share: 0.0,
        commit_count,
    })
}

proptest! {
    #[test]
    fn split_is_a_partition(paths in prop::collection::vec("[a-zA-Z_/]{1,20}\\.py", 0..40)) {
        let (prod, test) = split_test_production(&paths);
        prop_assert_eq!(prod.len() + test.len(), paths.len());
        for p in &paths {
            prop_assert!(prod.contains(p) != test.contains(p) || paths.iter().filter(|q| *q == p).count() > 1);
        }
        for p in &test {
            prop_assert!(p.contains("test") || p.contains("Test"));
        }
    }

    #[test]
    fn improving_a_stat_never_rejects(s in stats(), py in 0.0f64..=1.0, more_classes in 0u64..20, more_commits in 0u64..100, better_ratio in 0.0f64..=0.1) {
        let th = CorpusThresholds::default();
        let path = Path::new("p");
        let shares: BTreeMap<String, f64> = [("py".to_string(), py), ("js".to_string(), 1.0 - py)].into();
        let before = filter_project(path, &shares, s.clone(), &th);
        let improved = [
            CorpusStats { classes: s.classes + more_classes, ..s.clone() },
            CorpusStats { commit_count: s.commit_count.map(|c| c + more_commits), ..s.clone() },
            CorpusStats { parse_ratio: (s.parse_ratio + better_ratio).min(1.0), ..s.clone() },
        ];
        for better in improved {
            let after = filter_project(path, &shares, better, &th);
            prop_assert!(!before.accepted || after.accepted);
        }
        let more_python: BTreeMap<String, f64> = [("py".to_string(), (py + 0.1).min(1.0)), ("js".to_string(), 1.0 - (py + 0.1).min(1.0))].into();
        prop_assert!(!before.accepted || filter_project(path, &more_python, s, &th).accepted);
    }
}
