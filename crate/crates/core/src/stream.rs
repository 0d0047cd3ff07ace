//! One-pass streaming coreset: doubling k-center plus a coarsening grid.
//!
//! The center set `T` keeps at most `k` points that are pairwise farther
//! than the threshold `R` apart, and every seen point stays within `2R` of
//! `T`. Whenever a `(k+1)`-th center arrives, `R` doubles, `T` is filtered
//! greedily, and the grid cell side doubles with neighbouring cells merged.

use serde::Serialize;

use crate::coreset::best_k_subset;
use crate::error::{GapError, Result};
use crate::gap::{GapReport, Sample};
use crate::grid::{GridCoreset, GridStats};
use crate::metric::{euclidean, FiniteMetric, PointCloud};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StreamParams {
    pub eps: f64,
    pub eps1: f64,
    pub eps3: f64,
    pub d: usize,
}

pub fn stream_params(eps: f64, d: usize) -> Result<StreamParams> {
    if !(eps > 0.0 && eps < 0.125) {
        return Err(GapError::InvalidParameter {
            name: "epsilon",
            value: eps,
            reason: "must lie in (0, 1/8)",
        });
    }
    if d == 0 {
        return Err(GapError::InvalidParameter {
            name: "d",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let eps1 = eps / (2.0 + eps);
    Ok(StreamParams {
        eps,
        eps1,
        eps3: eps1 / (4.0 * (3.0 + 2.0 * eps1)),
        d,
    })
}

/// Constant `c` with `cells <= c * k * ceil(1/eps1)^d` at every moment of
/// the stream: seen points lie within `2R` of at most `k+1` centers and a
/// ball of radius `2R` meets at most `(ceil(8 sqrt(d) / eps3) + 1)^d` cells,
/// where `8 / eps3 <= 32 (3 + 2/17) / eps1` for `eps < 1/8`.
pub fn stream_cell_constant(d: usize) -> f64 {
    let per_axis = 32.0 * (3.0 + 2.0 / 17.0) * (d as f64).sqrt() + 2.0;
    1.5 * per_axis.powi(d as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Center {
    pub index: usize,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamState {
    pub params: StreamParams,
    pub k: usize,
    pub centers: Vec<Center>,
    #[serde(rename = "R_thresh")]
    pub threshold: f64,
    #[serde(skip)]
    pub grid: GridCoreset,
    pub points_seen: usize,
    pub phase: usize,
    pub peak_cells: usize,
}

pub fn stream_init(first_points: &[Vec<f64>], k: usize, eps: f64) -> Result<StreamState> {
    let Some(first) = first_points.first() else {
        return Err(GapError::StreamTooShort { k });
    };
    let dim = first.len();
    let params = stream_params(eps, dim)?;
    if k < 2 {
        return Err(GapError::SampleTooSmall { k, min: 2 });
    }
    let mut centers: Vec<Center> = Vec::with_capacity(k + 1);
    let mut consumed = 0;
    for (i, p) in first_points.iter().enumerate() {
        check_point(p, dim, i)?;
        consumed = i + 1;
        if !centers.iter().any(|c| c.point == *p) {
            centers.push(Center {
                index: i,
                point: p.clone(),
            });
            if centers.len() == k {
                break;
            }
        }
    }
    if centers.len() < k {
        return Err(GapError::StreamTooShort { k });
    }
    let mut threshold = f64::INFINITY;
    for (a, ca) in centers.iter().enumerate() {
        for cb in &centers[a + 1..] {
            threshold = threshold.min(euclidean(&ca.point, &cb.point));
        }
    }
    let side = params.eps3 * threshold / (2.0 * (dim as f64).sqrt());
    let mut grid = GridCoreset::empty(first.clone(), side)?;
    for (i, p) in first_points[..consumed].iter().enumerate() {
        grid.offer(i, p);
    }
    let mut state = StreamState {
        params,
        k,
        centers,
        threshold,
        peak_cells: grid.size(),
        grid,
        points_seen: consumed,
        phase: 0,
    };
    for p in &first_points[consumed..] {
        stream_ingest(&mut state, p)?;
    }
    Ok(state)
}

fn check_point(p: &[f64], dim: usize, index: usize) -> Result<()> {
    if p.len() != dim {
        return Err(GapError::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    if p.iter().any(|x| !x.is_finite()) {
        return Err(GapError::NonFinite { index });
    }
    Ok(())
}

pub fn stream_ingest(state: &mut StreamState, x: &[f64]) -> Result<()> {
    let index = state.points_seen;
    check_point(x, state.params.d, index)?;
    state.points_seen += 1;
    state.grid.offer(index, x);
    state.peak_cells = state.peak_cells.max(state.grid.size());
    let gap = state
        .centers
        .iter()
        .map(|c| euclidean(&c.point, x))
        .fold(f64::INFINITY, f64::min);
    if gap > 2.0 * state.threshold {
        state.centers.push(Center {
            index,
            point: x.to_vec(),
        });
    }
    while state.centers.len() > state.k {
        state.threshold *= 2.0;
        state.phase += 1;
        state.grid.coarsen();
        let mut kept: Vec<Center> = Vec::with_capacity(state.k + 1);
        for c in std::mem::take(&mut state.centers) {
            if kept
                .iter()
                .all(|q| euclidean(&q.point, &c.point) > state.threshold)
            {
                kept.push(c);
            }
        }
        state.centers = kept;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StreamResult {
    /// Chosen sites as stream positions.
    pub sample: Sample,
    /// Gap report inside the final coreset, in stream positions.
    pub coreset_report: GapReport,
    pub grid: GridStats,
    pub peak_cells: usize,
    pub phase: usize,
    #[serde(rename = "R_thresh")]
    pub threshold: f64,
    pub centers: Vec<usize>,
}

pub fn stream_finalize(state: &StreamState, k: usize, guard: u128) -> Result<StreamResult> {
    let mut reps: Vec<(usize, Vec<f64>)> = state
        .grid
        .cells
        .values()
        .map(|r| (r.index, r.point.clone()))
        .collect();
    reps.sort_by_key(|r| r.0);
    if reps.len() < k {
        return Err(GapError::CoresetTooSmall {
            size: reps.len(),
            k,
        });
    }
    let positions: Vec<usize> = reps.iter().map(|r| r.0).collect();
    let cloud = PointCloud::new(state.params.d, reps.into_iter().map(|r| r.1).collect())?;
    let m = FiniteMetric::from_cloud(&cloud)?;
    let (local, report) = best_k_subset(&m, k, guard)?;
    let chosen: Vec<usize> = local.indices().iter().map(|&i| positions[i]).collect();
    Ok(StreamResult {
        sample: Sample::new(chosen, state.points_seen)?,
        coreset_report: report.remap(&positions),
        grid: state.grid.stats(),
        peak_cells: state.peak_cells,
        phase: state.phase,
        threshold: state.threshold,
        centers: state.centers.iter().map(|c| c.index).collect(),
    })
}

/// Runs a whole finite stream: initialization, ingestion and finalization.
pub fn run_stream(points: &[Vec<f64>], k: usize, eps: f64, guard: u128) -> Result<StreamResult> {
    let state = stream_init(points, k, eps)?;
    stream_finalize(&state, k, guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coreset::CORESET_GUARD;
    use proptest::prelude::*;

    fn pts(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn params() {
        let p = stream_params(0.1, 2).unwrap();
        assert_eq!(p.eps1, 0.1 / 2.1);
        assert!(p.eps3 < p.eps1 / 12.0);
        assert!(stream_params(0.125, 2).is_err());
        assert!(stream_params(0.0, 2).is_err());
    }

    #[test]
    fn init_skips_duplicates() {
        let s = stream_init(&pts(&[0.0, 10.0, 0.0, 3.0]), 2, 0.1).unwrap();
        assert_eq!(s.threshold, 10.0);
        assert_eq!(s.points_seen, 4);
        let s = stream_init(&pts(&[0.0, 0.0, 10.0]), 2, 0.1).unwrap();
        let t: Vec<usize> = s.centers.iter().map(|c| c.index).collect();
        assert_eq!(t, vec![0, 2]);
    }

    #[test]
    fn init_needs_k_distinct() {
        assert_eq!(
            stream_init(&pts(&[1.0, 1.0, 1.0]), 2, 0.1).unwrap_err(),
            GapError::StreamTooShort { k: 2 }
        );
    }

    #[test]
    fn doubling_phase_filters_centers() {
        let mut s = stream_init(&pts(&[0.0, 1.0]), 2, 0.1).unwrap();
        let side = s.grid.cell_side;
        stream_ingest(&mut s, &[10.0]).unwrap();
        assert_eq!(s.threshold, 2.0);
        assert_eq!(s.phase, 1);
        assert_eq!(s.grid.cell_side, 2.0 * side);
        let t: Vec<f64> = s.centers.iter().map(|c| c.point[0]).collect();
        assert_eq!(t, vec![0.0, 10.0]);
    }

    #[test]
    fn quiet_point_changes_only_counter() {
        let mut s = stream_init(&pts(&[0.0, 1.0]), 2, 0.1).unwrap();
        let before = s.clone();
        stream_ingest(&mut s, &[1e-9]).unwrap();
        assert_eq!(s.points_seen, before.points_seen + 1);
        assert_eq!(s.centers, before.centers);
        assert_eq!(s.grid, before.grid);
    }

    #[test]
    fn rejects_dimension_change() {
        let mut s = stream_init(&pts(&[0.0, 1.0]), 2, 0.1).unwrap();
        assert!(matches!(
            stream_ingest(&mut s, &[0.0, 0.0]),
            Err(GapError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn replay_is_deterministic() {
        let xs: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.618).fract(), (i as f64 * 0.414).fract()])
            .collect();
        let a = run_stream(&xs, 3, 0.1, CORESET_GUARD).unwrap();
        let b = run_stream(&xs, 3, 0.1, CORESET_GUARD).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn centers_stay_separated_and_cover(
            xs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..60),
            k in 2usize..5,
        ) {
            let stream: Vec<Vec<f64>> = xs.iter().map(|&(x, y)| vec![x, y]).collect();
            let Ok(mut s) = stream_init(&stream[..k.min(stream.len())], k, 0.1) else {
                return Ok(());
            };
            let start = s.points_seen;
            for (i, p) in stream[start..].iter().enumerate() {
                stream_ingest(&mut s, p).unwrap();
                prop_assert!(s.centers.len() <= k);
                for (a, ca) in s.centers.iter().enumerate() {
                    for cb in &s.centers[a + 1..] {
                        let d = euclidean(&ca.point, &cb.point);
                        if s.phase == 0 {
                            prop_assert!(d >= s.threshold);
                        } else {
                            prop_assert!(d > s.threshold);
                        }
                    }
                }
                for q in &stream[..start + i + 1] {
                    let d = s.centers.iter().map(|c| euclidean(&c.point, q)).fold(f64::INFINITY, f64::min);
                    prop_assert!(d <= 2.0 * s.threshold);
                }
                let side = s.params.eps3 * s.threshold / (2.0 * 2f64.sqrt());
                prop_assert!((s.grid.cell_side - side).abs() <= 1e-12 * side);
            }
        }
    }
}
