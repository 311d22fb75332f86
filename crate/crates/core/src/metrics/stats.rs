//! Per-project metric populations and the boxplot and rank filters.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("filter queried on an empty population")]
pub struct EmptyPopulation;

/// Median of a sorted non-empty slice; the mean of the two middle values for
/// even lengths.
fn median_of(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

/// `(Q1, median, Q3)` using Tukey hinges: the quartiles are the medians of
/// the lower and upper halves, and for odd lengths the overall median belongs
/// to neither half.
pub fn quartiles(sorted: &[u64]) -> Result<(f64, f64, f64), EmptyPopulation> {
    let n = sorted.len();
    if n == 0 {
        return Err(EmptyPopulation);
    }
    if n == 1 {
        let v = sorted[0] as f64;
        return Ok((v, v, v));
    }
    let half = n / 2;
    let lower = &sorted[..half];
    let upper = &sorted[n - half..];
    Ok((median_of(lower), median_of(sorted), median_of(upper)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricDistribution {
    values: Vec<u64>,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

impl MetricDistribution {
    pub fn new(mut values: Vec<u64>) -> Result<Self, EmptyPopulation> {
        values.sort_unstable();
        let (q1, median, q3) = quartiles(&values)?;
        Ok(Self {
            values,
            q1,
            median,
            q3,
        })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }

    /// The k-th largest value with `k = ceil(n·X/100)`.
    pub fn top_threshold(&self, percent: f64) -> u64 {
        let n = self.values.len();
        let k = ((n as f64 * percent) / 100.0).ceil() as usize;
        self.values[n - k.clamp(1, n)]
    }
}

/// Which point the outlier distance is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FenceBase {
    #[default]
    Median,
    Q3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub fence_base: FenceBase,
    pub mild_factor: f64,
    pub extreme_factor: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            fence_base: FenceBase::Median,
            mild_factor: 1.5,
            extreme_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterSpec {
    MildOutlier,
    ExtremeOutlier,
    TopXPercent { x: f64 },
}

impl FilterConfig {
    pub fn base(&self, d: &MetricDistribution) -> f64 {
        match self.fence_base {
            FenceBase::Median => d.median,
            FenceBase::Q3 => d.q3,
        }
    }

    /// Upper-side outlier test: `v` must exceed the median and lie at least
    /// `factor` interquartile ranges above the fence base.
    pub fn is_outlier(&self, v: u64, d: &MetricDistribution, factor: f64) -> bool {
        let v = v as f64;
        v > d.median && v - self.base(d) >= factor * d.iqr()
    }

    pub fn is_mild_outlier(&self, v: u64, d: &MetricDistribution) -> bool {
        self.is_outlier(v, d, self.mild_factor)
    }

    pub fn is_extreme_outlier(&self, v: u64, d: &MetricDistribution) -> bool {
        self.is_outlier(v, d, self.extreme_factor)
    }

    pub fn passes(&self, spec: FilterSpec, v: u64, d: &MetricDistribution) -> bool {
        match spec {
            FilterSpec::MildOutlier => self.is_mild_outlier(v, d),
            FilterSpec::ExtremeOutlier => self.is_extreme_outlier(v, d),
            FilterSpec::TopXPercent { x } => top_x_percent(v, d, x),
        }
    }
}

pub fn top_x_percent(v: u64, d: &MetricDistribution, percent: f64) -> bool {
    v >= d.top_threshold(percent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(values: &[u64]) -> MetricDistribution {
        MetricDistribution::new(values.to_vec()).unwrap()
    }

    #[test]
    fn hinges() {
        let d = dist(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100]);
        assert_eq!((d.q1, d.median, d.q3), (3.0, 6.0, 9.0));
        assert_eq!(quartiles(&[5]).unwrap(), (5.0, 5.0, 5.0));
        assert_eq!(quartiles(&[1, 2, 3, 4]).unwrap(), (1.5, 2.5, 3.5));
        assert_eq!(quartiles(&[]), Err(EmptyPopulation));
    }

    #[test]
    fn outliers() {
        let f = FilterConfig::default();
        let d = dist(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100]);
        assert!(f.is_mild_outlier(100, &d));
        assert!(f.is_extreme_outlier(100, &d));
        assert!(!f.is_extreme_outlier(20, &d));
        assert!(f.is_extreme_outlier(24, &d));
        assert!(!f.is_mild_outlier(6, &d));
        let flat = dist(&[4, 4, 4, 4]);
        assert!(!f.is_mild_outlier(4, &flat));
        assert!(f.is_mild_outlier(5, &flat));
    }

    #[test]
    fn q3_fence_base() {
        let f = FilterConfig {
            fence_base: FenceBase::Q3,
            ..FilterConfig::default()
        };
        let d = dist(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100]);
        assert!(!f.is_mild_outlier(17, &d));
        assert!(f.is_mild_outlier(18, &d));
    }

    #[test]
    fn ranks() {
        let d = dist(&[1, 2, 2, 2, 9]);
        assert!(!top_x_percent(2, &d, 20.0));
        assert!(top_x_percent(9, &d, 20.0));
        let ten = dist(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert_eq!(ten.top_threshold(10.0), 10);
        assert!(ten.values().iter().all(|&v| top_x_percent(v, &ten, 100.0)));
    }
}
