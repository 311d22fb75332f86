//! Source discovery, project inclusion rules and the test/production split.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde::{Deserialize, Serialize};

use crate::model::is_test_path;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourcePath {
    /// Path relative to the root, `/`-separated.
    pub relative: String,
    pub absolute: PathBuf,
}

fn is_hidden(name: &std::ffi::OsStr) -> bool {
    name.to_string_lossy().starts_with('.')
}

/// Visits every file under `root`, skipping dot-directories. Symbolic links
/// are followed, but each real directory is entered once.
fn walk(root: &Path, mut visit: impl FnMut(&Path, &str)) {
    let mut visited = BTreeSet::new();
    let mut stack = vec![(root.to_path_buf(), String::new())];
    while let Some((dir, prefix)) = stack.pop() {
        match fs::canonicalize(&dir) {
            Ok(real) => {
                if !visited.insert(real) {
                    continue;
                }
            }
            Err(err) => {
                log::warn!("skipping {}: {err}", dir.display());
                continue;
            }
        }
        let entries = match fs::read_dir(&dir) {
            Ok(entries) => entries,
            Err(err) => {
                log::warn!("cannot read directory {}: {err}", dir.display());
                continue;
            }
        };
        let mut names: Vec<_> = entries.filter_map(Result::ok).map(|e| e.file_name()).collect();
        names.sort();
        for name in names.into_iter().rev() {
            let path = dir.join(&name);
            let relative = format!("{prefix}{}", name.to_string_lossy());
            let Ok(meta) = fs::metadata(&path) else {
                log::warn!("skipping unreadable entry {}", path.display());
                continue;
            };
            if meta.is_dir() {
                if !is_hidden(&name) {
                    stack.push((path, format!("{relative}/")));
                }
            } else if meta.is_file() {
                visit(&path, &relative);
            }
        }
    }
}

/// All `*.py` files under `root` outside dot-directories, sorted by relative
/// path.
pub fn enumerate_sources(root: &Path) -> Vec<SourcePath> {
    let mut sources = Vec::new();
    walk(root, |path, relative| {
        if relative.ends_with(".py") {
            sources.push(SourcePath {
                relative: relative.to_string(),
                absolute: path.to_path_buf(),
            });
        }
    });
    sources.sort();
    sources
}

/// Splits paths into `(production, test)`, keeping the input order.
pub fn split_test_production<P: AsRef<Path> + Clone>(paths: &[P]) -> (Vec<P>, Vec<P>) {
    paths.iter().cloned().partition(|p| !is_test_path(p.as_ref()))
}

/// Language class of a file extension; files of other types are ignored
/// when computing language shares.
fn language_of(extension: &str) -> Option<&'static str> {
    Some(match extension.to_ascii_lowercase().as_str() {
        "py" | "pyw" | "pyx" | "pxd" | "pyi" => "py",
        "c" | "h" => "c",
        "cc" | "cpp" | "cxx" | "hh" | "hpp" | "hxx" => "cpp",
        "js" | "jsx" | "mjs" | "cjs" => "js",
        "ts" | "tsx" => "ts",
        "java" => "java",
        "kt" | "kts" => "kotlin",
        "scala" => "scala",
        "go" => "go",
        "rs" => "rust",
        "rb" => "ruby",
        "php" => "php",
        "cs" => "csharp",
        "swift" => "swift",
        "m" | "mm" => "objc",
        "f" | "f90" | "f95" | "for" => "fortran",
        "r" => "r",
        "jl" => "julia",
        "lua" => "lua",
        "pl" | "pm" => "perl",
        "sh" | "bash" | "zsh" => "shell",
        "html" | "htm" => "html",
        "css" | "scss" | "sass" | "less" => "css",
        "vue" => "vue",
        _ => return None,
    })
}

/// Fraction of source bytes per language class, outside dot-directories.
pub fn language_shares(root: &Path) -> BTreeMap<String, f64> {
    let mut bytes: BTreeMap<&'static str, u64> = BTreeMap::new();
    walk(root, |path, _| {
        let Some(language) = path.extension().and_then(|e| language_of(&e.to_string_lossy())) else {
            return;
        };
        let size = fs::metadata(path).map(|m| m.len()).unwrap_or(0);
        *bytes.entry(language).or_default() += size;
    });
    let total: u64 = bytes.values().sum();
    if total == 0 {
        return BTreeMap::new();
    }
    bytes
        .into_iter()
        .map(|(language, b)| (language.to_string(), b as f64 / total as f64))
        .collect()
}

/// Commit count of the checked-out branch, if `root` is a git work tree and
/// `git` is available.
pub fn query_commit_count(root: &Path) -> Option<u64> {
    let output = Command::new("git")
        .arg("-C")
        .arg(root)
        .args(["rev-list", "--count", "HEAD"])
        .output()
        .ok()?;
    if !output.status.success() {
        return None;
    }
    String::from_utf8_lossy(&output.stdout).trim().parse().ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepoManifest {
    pub path: PathBuf,
    #[serde(default)]
    pub commit_count: Option<u64>,
    #[serde(default)]
    pub language_shares: Option<BTreeMap<String, f64>>,
}

impl RepoManifest {
    pub fn validate(&self) -> Result<(), String> {
        if let Some(shares) = &self.language_shares {
            let sum: f64 = shares.values().sum();
            if !shares.is_empty() && (sum - 1.0).abs() > 0.001 {
                return Err(format!(
                    "language shares of {} sum to {sum:.4}, not 1",
                    self.path.display()
                ));
            }
        }
        Ok(())
    }
}

pub fn load_manifest(text: &str) -> Result<Vec<RepoManifest>, String> {
    let entries: Vec<RepoManifest> =
        serde_json::from_str(text).map_err(|e| format!("invalid manifest: {e}"))?;
    for entry in &entries {
        entry.validate()?;
    }
    Ok(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusThresholds {
    pub min_commits: u64,
    pub min_classes: u64,
    pub min_parse_ratio: f64,
    pub min_python_share: f64,
}

impl Default for CorpusThresholds {
    fn default() -> Self {
        Self {
            min_commits: 100,
            min_classes: 20,
            min_parse_ratio: 0.99,
            min_python_share: 0.40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub files: usize,
    /// Production and test classes together.
    pub classes: u64,
    pub parse_ratio: f64,
    pub python_share: f64,
    pub commit_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusDecision {
    pub path: PathBuf,
    pub accepted: bool,
    pub reasons: Vec<String>,
    pub warnings: Vec<String>,
    pub stats: CorpusStats,
}

/// Python's share under either a `py` or `python` key.
fn python_share(shares: &BTreeMap<String, f64>) -> f64 {
    ["py", "python"]
        .iter()
        .filter_map(|k| shares.get(*k))
        .sum()
}

/// Applies the four inclusion rules. The language rule passes when Python
/// reaches the minimum share or exceeds every other single language.
pub fn filter_project(
    path: &Path,
    shares: &BTreeMap<String, f64>,
    stats: CorpusStats,
    thresholds: &CorpusThresholds,
) -> CorpusDecision {
    let mut reasons = Vec::new();
    let mut warnings = Vec::new();
    let python = python_share(shares);
    let dominant = shares
        .iter()
        .filter(|(k, _)| k.as_str() != "py" && k.as_str() != "python")
        .all(|(_, &share)| python > share);
    if !(python >= thresholds.min_python_share || (python > 0.0 && dominant)) {
        reasons.push("min_python_share".to_string());
    }
    match stats.commit_count {
        Some(commits) if commits < thresholds.min_commits => reasons.push("min_commits".to_string()),
        Some(_) => {}
        None => warnings.push("commit_count unavailable; min_commits rule skipped".to_string()),
    }
    if stats.classes < thresholds.min_classes {
        reasons.push("min_classes".to_string());
    }
    if stats.parse_ratio < thresholds.min_parse_ratio {
        reasons.push("min_parse_ratio".to_string());
    }
    CorpusDecision {
        path: path.to_path_buf(),
        accepted: reasons.is_empty(),
        reasons,
        warnings,
        stats: CorpusStats {
            python_share: python,
            ..stats
        },
    }
}
