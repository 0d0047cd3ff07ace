//! Exhaustive solver for the optimal gap ratio.

use serde::Serialize;

use crate::error::Result;
use crate::gap::{gap_ratio, GapReport, Sample};
use crate::metric::FiniteMetric;
use crate::subsets::best_subset;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub best_sample: Sample,
    pub report: GapReport,
    #[serde(rename = "GR_OPT")]
    pub gap_ratio: f64,
    /// Smallest covering radius over all k-subsets.
    #[serde(rename = "R_OPT")]
    pub min_cover: f64,
    /// Largest packing radius over all k-subsets.
    #[serde(rename = "r_OPT")]
    pub max_packing: f64,
    pub subsets_examined: u64,
}

/// Minimum gap ratio over all k-subsets, first in lexicographic order on
/// ties; refuses when `C(n, k)` exceeds `guard`.
pub fn optimal_gap_ratio(m: &FiniteMetric, k: usize, guard: u128) -> Result<OracleResult> {
    let scan = best_subset(m, k, guard)?;
    let best_sample = Sample::new(scan.best, m.n())?;
    let report = gap_ratio(m, &best_sample)?;
    Ok(OracleResult {
        gap_ratio: report.gap_ratio,
        best_sample,
        report,
        min_cover: scan.min_cover,
        max_packing: scan.max_closest / 2.0,
        subsets_examined: scan.examined,
    })
}
