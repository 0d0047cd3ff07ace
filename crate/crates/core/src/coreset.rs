//! Grid coresets and (1+eps)-optimal sampling over them.

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::fpi::farthest_point_insertion;
use crate::gap::{gap_ratio, GapReport, Sample};
use crate::grid::{build_grid_coreset, GridCoreset};
use crate::metric::{FiniteMetric, PointCloud};
use crate::subsets::best_subset;

/// Default cap on the number of coreset subsets enumerated.
pub const CORESET_GUARD: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsParams {
    pub eps: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub d: usize,
    #[serde(rename = "R_P1")]
    pub fpi_radius: f64,
}

pub fn static_params(eps: f64, fpi_radius: f64, d: usize) -> Result<EpsParams> {
    check_eps(eps)?;
    if !(fpi_radius > 0.0 && fpi_radius.is_finite()) {
        return Err(GapError::InvalidParameter {
            name: "R_P1",
            value: fpi_radius,
            reason: "must be positive and finite",
        });
    }
    if d == 0 {
        return Err(GapError::InvalidParameter {
            name: "d",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let eps1 = eps / (3.0 + 2.0 * eps);
    Ok(EpsParams {
        eps,
        eps1,
        eps2: eps1 * fpi_radius / (2.0 * (d as f64).sqrt()),
        d,
        fpi_radius,
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(GapError::InvalidParameter {
            name: "epsilon",
            value: eps,
            reason: "must lie in (0, 1/2)",
        })
    }
}

/// Constant `c` with `cells <= c * k * ceil(1/eps1)^d` for the static grid:
/// a ball of radius `R_OPT <= R_P1` meets at most
/// `(ceil(4 sqrt(d) / eps1) + 1)^d` cells of side `eps2`.
pub fn static_cell_constant(d: usize) -> f64 {
    (4.0 * (d as f64).sqrt() + 2.0).powi(d as i32)
}

/// `c * k * ceil(1/eps1)^d`.
pub fn cell_bound(c: f64, k: usize, eps1: f64, d: usize) -> f64 {
    c * k as f64 * (1.0 / eps1).ceil().powi(d as i32)
}

/// Exhaustive search for the first k-subset of minimum gap ratio, with both
/// gaps measured inside `coreset`.
pub fn best_k_subset(coreset: &FiniteMetric, k: usize, guard: u128) -> Result<(Sample, GapReport)> {
    let n = coreset.n();
    if n < k {
        return Err(GapError::CoresetTooSmall { size: n, k });
    }
    let scan = best_subset(coreset, k, guard)?;
    let sample = Sample::new(scan.best, n)?;
    let report = gap_ratio(coreset, &sample)?;
    Ok((sample, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxSample {
    pub sample: Sample,
    /// Gap report of `sample` over the full cloud.
    pub report: GapReport,
    /// Gap report of `sample` inside the coreset, in cloud indices.
    pub coreset_report: GapReport,
    pub params: EpsParams,
    pub coreset: GridCoreset,
}

pub fn approx_sample(
    cloud: &PointCloud,
    k: usize,
    eps: f64,
    seed: Option<u64>,
    guard: u128,
) -> Result<ApproxSample> {
    check_eps(eps)?;
    let m = FiniteMetric::from_cloud(cloud)?;
    approx_sample_on(cloud, &m, k, eps, seed, guard)
}

/// As [`approx_sample`], reusing a metric already built from `cloud`.
pub fn approx_sample_on(
    cloud: &PointCloud,
    m: &FiniteMetric,
    k: usize,
    eps: f64,
    seed: Option<u64>,
    guard: u128,
) -> Result<ApproxSample> {
    check_eps(eps)?;
    let n = m.n();
    if k < 2 || k > n {
        return Err(GapError::InvalidK { k, n });
    }
    let (_, trace) = farthest_point_insertion(m, k)?;
    let mut radius = trace.final_report.big_r;
    if radius == 0.0 {
        radius = closest_distance(m);
    }
    let params = static_params(eps, radius, cloud.dim())?;
    let coreset = build_grid_coreset(cloud, params.eps2, seed)?;
    let reps = coreset.representatives();
    if reps.len() < k {
        return Err(GapError::CoresetTooSmall {
            size: reps.len(),
            k,
        });
    }
    let sub = m.restrict(&reps);
    let (local, coreset_report) = best_k_subset(&sub, k, guard)?;
    let chosen: Vec<usize> = local.indices().iter().map(|&i| reps[i]).collect();
    let sample = Sample::new(chosen, n)?;
    let report = gap_ratio(m, &sample)?;
    Ok(ApproxSample {
        sample,
        report,
        coreset_report: coreset_report.remap(&reps),
        params,
        coreset,
    })
}

fn closest_distance(m: &FiniteMetric) -> f64 {
    let n = m.n();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(m.dist(i, j));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::for_each_k_subset;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize) -> PointCloud {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        PointCloud::from_line(&xs).unwrap()
    }

    #[test]
    fn params_examples() {
        let p = static_params(0.3, 4.0, 2).unwrap();
        assert_relative_eq!(p.eps1, 1.0 / 12.0, epsilon = 1e-15);
        assert_relative_eq!(p.eps2, 0.117_851_130_197_757_92, epsilon = 1e-12);
        let p = static_params(0.49, 1.0, 1).unwrap();
        assert_relative_eq!(p.eps1, 0.49 / 3.98, epsilon = 1e-15);
        assert!(static_params(0.5, 1.0, 2).is_err());
        assert!(static_params(0.0, 1.0, 2).is_err());
        assert!(static_params(0.3, 0.0, 2).is_err());
    }

    #[test]
    fn best_pair_on_four_sites() {
        let m = FiniteMetric::from_cloud(&line(4)).unwrap();
        let (s, rep) = best_k_subset(&m, 2, CORESET_GUARD).unwrap();
        assert_eq!(s.indices(), &[0, 3]);
        assert_eq!((rep.r, rep.big_r, rep.gap_ratio), (1.5, 1.0, 2.0 / 3.0));
        let (s, rep) = best_k_subset(&m, 4, CORESET_GUARD).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(rep.gap_ratio, 0.0);
        assert_eq!(
            best_k_subset(&m, 5, CORESET_GUARD).unwrap_err(),
            GapError::CoresetTooSmall { size: 4, k: 5 }
        );
    }

    #[test]
    fn best_subset_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let pts: Vec<(f64, f64)> = (0..10).map(|_| (rng.gen(), rng.gen())).collect();
            let m = FiniteMetric::from_cloud(&PointCloud::from_xy(&pts).unwrap()).unwrap();
            let (s, rep) = best_k_subset(&m, 3, CORESET_GUARD).unwrap();
            let mut best: Option<(f64, Vec<usize>)> = None;
            for a in 0..10 {
                for b in a + 1..10 {
                    for c in b + 1..10 {
                        let r = m.dist(a, b).min(m.dist(a, c)).min(m.dist(b, c)) / 2.0;
                        let big_r = (0..10)
                            .map(|q| m.dist(q, a).min(m.dist(q, b)).min(m.dist(q, c)))
                            .fold(0.0, f64::max);
                        let g = big_r / r;
                        if best.as_ref().map_or(true, |(bg, _)| g < *bg) {
                            best = Some((g, vec![a, b, c]));
                        }
                    }
                }
            }
            let (g, v) = best.unwrap();
            assert_eq!(s.indices(), &v[..]);
            assert_eq!(rep.gap_ratio, g);
        }
    }

    #[test]
    fn line_pair_within_factor() {
        let res = approx_sample(&line(10), 2, 0.45, None, CORESET_GUARD).unwrap();
        assert!(res.report.gap_ratio <= 1.45 * 2.0 / 3.0 + 1e-12);
    }

    #[test]
    fn whole_cloud_coreset_is_optimal() {
        let cloud = line(8);
        let res = approx_sample(&cloud, 3, 0.1, None, CORESET_GUARD).unwrap();
        assert_eq!(res.coreset.size(), 8);
        let m = FiniteMetric::from_cloud(&cloud).unwrap();
        let (s, rep) = best_k_subset(&m, 3, CORESET_GUARD).unwrap();
        assert_eq!(res.sample, s);
        assert_eq!(res.report, rep);
    }

    #[test]
    fn k_equal_n_keeps_every_site() {
        let res = approx_sample(&line(5), 5, 0.3, None, CORESET_GUARD).unwrap();
        assert_eq!(res.sample.len(), 5);
        assert_eq!(res.report.gap_ratio, 0.0);
    }

    #[test]
    fn random_instances_within_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let pts: Vec<(f64, f64)> = (0..20).map(|_| (rng.gen(), rng.gen())).collect();
            let cloud = PointCloud::from_xy(&pts).unwrap();
            let m = FiniteMetric::from_cloud(&cloud).unwrap();
            let mut opt = f64::INFINITY;
            for_each_k_subset(20, 3, m.matrix(), |_, c, r| opt = opt.min(r / (c / 2.0)));
            let res = approx_sample(&cloud, 3, 0.4, Some(3), CORESET_GUARD).unwrap();
            assert!(res.report.gap_ratio <= 1.4 * opt + 1e-9);
            let bound = cell_bound(static_cell_constant(2), 3, res.params.eps1, 2);
            assert!(res.coreset.size() as f64 <= bound);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<(f64, f64)> = (0..30).map(|_| (rng.gen(), rng.gen())).collect();
        let cloud = PointCloud::from_xy(&pts).unwrap();
        let a = approx_sample(&cloud, 3, 0.45, Some(42), CORESET_GUARD).unwrap();
        let b = approx_sample(&cloud, 3, 0.45, Some(42), CORESET_GUARD).unwrap();
        assert_eq!(a, b);
    }
}
