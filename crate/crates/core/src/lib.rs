//! Metric-based detection of code smells and antipatterns in Python projects.

pub mod frontend;
pub mod model;
pub mod metrics;
pub mod detectors;
pub mod corpus;
pub mod config;
pub mod pipeline;
pub mod report;
