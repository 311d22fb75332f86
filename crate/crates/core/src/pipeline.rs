//! End-to-end analysis of project roots: discovery, parsing, modelling,
//! metrics and detection.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::corpus::{enumerate_sources, SourcePath};
use crate::detectors::{Finding, Registry};
use crate::frontend::{
    parse_file, parse_stats, read_source, ParseFailure, ParseOutcome, ParseStats, ParseStatus,
    SourceFile,
};
use crate::metrics::ProjectMetrics;
use crate::model::{build_skeleton, link_references, ModelError, ModuleInput, Project};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileStatus {
    pub path: String,
    pub status: ParseStatus,
    pub error: Option<ParseFailure>,
}

#[derive(Debug, Clone)]
pub struct ProjectAnalysis {
    pub root: PathBuf,
    pub project: Project,
    pub metrics: ProjectMetrics,
    pub files: Vec<FileStatus>,
    pub parse: ParseStats,
    pub findings: Vec<Finding>,
}

impl ProjectAnalysis {
    pub fn loc(&self, test: bool) -> u64 {
        self.project
            .modules
            .iter()
            .filter(|m| m.is_test == test)
            .map(|m| u64::from(m.loc))
            .sum()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub projects: Vec<ProjectAnalysis>,
}

impl Analysis {
    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.projects.iter().flat_map(|p| &p.findings)
    }

    pub fn parse_stats(&self) -> ParseStats {
        let (parsed, total) = self
            .projects
            .iter()
            .fold((0, 0), |(p, t), a| (p + a.parse.parsed, t + a.parse.total));
        ParseStats::from_counts(parsed, total)
    }
}

/// Parses, models and analyses one project from already decoded sources.
/// Sources that failed to read carry their error message instead.
pub fn analyze_project(
    name: &str,
    root: &Path,
    sources: Vec<(String, Result<SourceFile, String>)>,
    config: &Config,
) -> Result<ProjectAnalysis, AnalysisError> {
    let outcomes: Vec<ParseOutcome> = sources
        .into_par_iter()
        .map(|(relative, source)| match source {
            Ok(file) => parse_file(&file),
            Err(message) => ParseOutcome::undecodable(relative, message),
        })
        .collect();
    let files: Vec<FileStatus> = outcomes
        .iter()
        .map(|o| FileStatus {
            path: o.path.to_string_lossy().replace('\\', "/"),
            status: o.status(),
            error: o.error().cloned(),
        })
        .collect();
    for file in files.iter().filter(|f| f.error.is_some()) {
        let err = file.error.as_ref().expect("failed file");
        log::warn!(
            "{}: {}:{}: excluded: {}",
            name,
            file.path,
            err.line.map_or("?".to_string(), |l| l.to_string()),
            err.message
        );
    }
    let paths: Vec<String> = outcomes
        .iter()
        .map(|o| o.path.to_string_lossy().replace('\\', "/"))
        .collect();
    let inputs: Vec<ModuleInput<'_>> = outcomes
        .iter()
        .zip(&paths)
        .filter_map(|(o, path)| {
            o.tree().map(|tree| ModuleInput {
                path,
                tree,
                physical_lines: o.physical_lines,
            })
        })
        .collect();
    let mut project = build_skeleton(name, root.to_path_buf(), &inputs)?;
    link_references(&mut project);
    let metrics = ProjectMetrics::compute(&project);
    let findings = Registry::default().run(&project, &metrics, &config.detector_config());
    Ok(ProjectAnalysis {
        root: root.to_path_buf(),
        parse: parse_stats(&outcomes),
        project,
        metrics,
        files,
        findings,
    })
}

fn read_all(sources: &[SourcePath]) -> Vec<(String, Result<SourceFile, String>)> {
    sources
        .par_iter()
        .map(|s| (s.relative.clone(), read_source(&s.absolute, &s.relative)))
        .collect()
}

/// Project names: the root's final path component, or the root as written
/// when two roots share a final component.
pub fn project_names(roots: &[PathBuf]) -> Vec<String> {
    let base = |root: &PathBuf| -> String {
        root.canonicalize()
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| root.display().to_string())
    };
    let bases: Vec<String> = roots.iter().map(base).collect();
    let mut seen = BTreeSet::new();
    let duplicated: BTreeSet<&String> = bases.iter().filter(|b| !seen.insert(*b)).collect();
    roots
        .iter()
        .zip(&bases)
        .map(|(root, b)| {
            if duplicated.contains(b) {
                root.display().to_string()
            } else {
                b.clone()
            }
        })
        .collect()
}

/// Analyses every root on a pool of `jobs` worker threads.
pub fn analyze_roots(roots: &[PathBuf], config: &Config, jobs: usize) -> Result<Analysis, AnalysisError> {
    for root in roots {
        if !root.is_dir() {
            return Err(AnalysisError::Io {
                path: root.clone(),
                message: "not a readable directory".into(),
            });
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| AnalysisError::Pool(e.to_string()))?;
    let names = project_names(roots);
    pool.install(|| {
        let projects = roots
            .iter()
            .zip(&names)
            .map(|(root, name)| {
                let sources = enumerate_sources(root);
                log::info!("{name}: {} python files", sources.len());
                analyze_project(name, root, read_all(&sources), config)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Analysis { projects })
    })
}

/// Analyses in-memory sources as one project; convenient for tests.
pub fn analyze_sources(name: &str, sources: &[(&str, &str)], config: &Config) -> Result<ProjectAnalysis, AnalysisError> {
    let sources = sources
        .iter()
        .map(|(path, text)| (path.to_string(), Ok(SourceFile::new(*path, *text))))
        .collect();
    analyze_project(name, Path::new(name), sources, config)
}
