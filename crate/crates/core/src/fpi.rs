//! Farthest-point insertion seeded with a diameter pair.
//!
//! After the diameter pair, every new site is an argmax of the distance to
//! the current sample (smallest index on ties). The distance of every site
//! to the sample is kept in one row and updated per insertion, `O(nk)`.

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::gap::{diameter, gap_ratio, GapReport, Sample};
use crate::metric::FiniteMetric;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpiStep {
    /// Sample size after this step.
    pub size: usize,
    pub chosen: usize,
    /// Distance from the chosen site to the previous sample; for the
    /// diameter step the previous sample is the first endpoint alone.
    pub r_before: f64,
    pub r_after: f64,
    #[serde(rename = "R_after")]
    pub big_r_after: f64,
    pub gap_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpiTrace {
    pub steps: Vec<FpiStep>,
    #[serde(rename = "final")]
    pub final_report: GapReport,
}

pub fn farthest_point_insertion(m: &FiniteMetric, k: usize) -> Result<(Sample, FpiTrace)> {
    let n = m.n();
    if k < 2 || k > n {
        return Err(GapError::InvalidK { k, n });
    }
    let (q1, q2, diam) = diameter(m)?;
    let mut chosen = vec![q1, q2];
    let mut to_sample: Vec<f64> = m
        .row(q1)
        .iter()
        .zip(m.row(q2))
        .map(|(&a, &b)| a.min(b))
        .collect();
    let mut r = diam / 2.0;
    let (mut big_r, mut far) = argmax(&to_sample);
    let mut steps = vec![FpiStep {
        size: 2,
        chosen: q2,
        r_before: diam,
        r_after: r,
        big_r_after: big_r,
        gap_ratio: big_r / r,
    }];
    while chosen.len() < k {
        let q = far;
        let before = big_r;
        chosen.push(q);
        for (d, &e) in to_sample.iter_mut().zip(m.row(q)) {
            if e < *d {
                *d = e;
            }
        }
        r = r.min(before / 2.0);
        (big_r, far) = argmax(&to_sample);
        steps.push(FpiStep {
            size: chosen.len(),
            chosen: q,
            r_before: before,
            r_after: r,
            big_r_after: big_r,
            gap_ratio: big_r / r,
        });
    }
    let sample = Sample::new(chosen, n)?;
    let final_report = gap_ratio(m, &sample)?;
    Ok((
        sample,
        FpiTrace {
            steps,
            final_report,
        },
    ))
}

/// Largest value and its smallest index.
fn argmax(values: &[f64]) -> (f64, usize) {
    let mut best = (values[0], 0);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best.0 {
            best = (v, i);
        }
    }
    best
}

/// Approximation factor guaranteed when the optimal gap ratio is `alpha`.
pub fn fpi_ratio_bound(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(GapError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be positive and finite",
        });
    }
    Ok(if alpha < 2.0 / 3.0 {
        4.0 / (2.0 - alpha)
    } else {
        2.0 / alpha
    })
}

/// Which regime of the approximation guarantee `alpha` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioCase {
    /// `alpha >= 1`: ratio `2/alpha <= 2`.
    AtLeastOne,
    /// `2/3 <= alpha < 1`: ratio `2/alpha <= 3`.
    BetweenTwoThirdsAndOne,
    /// `alpha < 2/3`: ratio `4/(2-alpha) < 3`.
    BelowTwoThirds,
}

pub fn ratio_case(alpha: f64) -> RatioCase {
    if alpha >= 1.0 {
        RatioCase::AtLeastOne
    } else if alpha >= 2.0 / 3.0 {
        RatioCase::BetweenTwoThirdsAndOne
    } else {
        RatioCase::BelowTwoThirds
    }
}

/// Approximation factor of farthest-point insertion on the unit square,
/// `27^(1/4) sqrt(k) / (3^(1/4) sqrt(k) - sqrt(2))`.
pub fn rho(k: usize) -> Result<f64> {
    if k < 2 {
        return Err(GapError::InvalidParameter {
            name: "k",
            value: k as f64,
            reason: "must be at least 2",
        });
    }
    let sk = (k as f64).sqrt();
    Ok(27f64.powf(0.25) * sk / (3f64.powf(0.25) * sk - 2f64.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{Graph, PointCloud};
    use approx::assert_relative_eq;

    fn line10() -> FiniteMetric {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        FiniteMetric::from_cloud(&PointCloud::from_line(&xs).unwrap()).unwrap()
    }

    #[test]
    fn line_k3_breaks_tie_low() {
        let (s, trace) = farthest_point_insertion(&line10(), 3).unwrap();
        assert_eq!(s.indices(), &[0, 4, 9]);
        assert_eq!(trace.steps[1].chosen, 4);
        let rep = &trace.final_report;
        assert_eq!((rep.r, rep.big_r, rep.gap_ratio), (2.0, 2.0, 1.0));
    }

    #[test]
    fn k_equals_n_samples_everything() {
        let (s, trace) = farthest_point_insertion(&line10(), 10).unwrap();
        assert_eq!(s.len(), 10);
        assert_eq!(trace.final_report.big_r, 0.0);
        assert_eq!(trace.final_report.gap_ratio, 0.0);
    }

    #[test]
    fn trace_invariants_on_a_graph() {
        let m = FiniteMetric::from_graph(&Graph::cycle(11).unwrap()).unwrap();
        let (_, trace) = farthest_point_insertion(&m, 11).unwrap();
        for w in trace.steps.windows(2) {
            assert!(w[1].big_r_after <= w[0].big_r_after);
            assert_eq!(w[1].r_after, w[0].big_r_after / 2.0);
        }
        assert!(trace.steps.iter().all(|s| s.gap_ratio <= 2.0));
    }

    #[test]
    fn trace_matches_direct_evaluation() {
        let m = line10();
        let (s, trace) = farthest_point_insertion(&m, 6).unwrap();
        let order: Vec<usize> = std::iter::once(0)
            .chain(trace.steps.iter().map(|s| s.chosen))
            .collect();
        assert_eq!(order.len(), 6);
        for (step, size) in trace.steps.iter().zip(2..) {
            let prefix = Sample::new(order[..size].to_vec(), 10).unwrap();
            let rep = gap_ratio(&m, &prefix).unwrap();
            assert_eq!(rep.r, step.r_after);
            assert_eq!(rep.big_r, step.big_r_after);
        }
        assert_eq!(trace.final_report, gap_ratio(&m, &s).unwrap());
    }

    #[test]
    fn rejects_bad_k() {
        assert_eq!(
            farthest_point_insertion(&line10(), 1).unwrap_err(),
            GapError::InvalidK { k: 1, n: 10 }
        );
        assert!(farthest_point_insertion(&line10(), 11).is_err());
    }

    #[test]
    fn ratio_bound_values() {
        assert_eq!(fpi_ratio_bound(1.0).unwrap(), 2.0);
        assert_relative_eq!(fpi_ratio_bound(2.0 / 3.0).unwrap(), 3.0, epsilon = 1e-15);
        assert_relative_eq!(fpi_ratio_bound(0.5).unwrap(), 8.0 / 3.0, epsilon = 1e-15);
        assert!(fpi_ratio_bound(0.0).is_err());
        assert_eq!(ratio_case(0.7), RatioCase::BetweenTwoThirdsAndOne);
    }

    #[test]
    fn rho_values() {
        // 27^(1/4) * 10 / (3^(1/4) * 10 - sqrt 2), evaluated by hand
        assert_relative_eq!(rho(100).unwrap(), 1.940_579_663, epsilon = 1e-8);
        assert!((rho(100_000_000).unwrap() - 3f64.sqrt()).abs() < 1e-3);
        assert!(rho(1).is_err());
    }

    #[test]
    fn rho_is_decreasing() {
        let mut prev = rho(2).unwrap();
        for k in 3..=10_000 {
            let cur = rho(k).unwrap();
            assert!(cur < prev, "rho({k}) = {cur} >= {prev}");
            prev = cur;
        }
    }
}
