//! Star discrepancy in the unit square, its gap-based upper bound, and the
//! closed-form lower bounds on the gap ratio.

use serde::Serialize;

use crate::error::{GapError, Result};
use crate::geometry::Point;
use crate::metric::PointCloud;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Corner {
    /// Rectangle `[0,x] x [0,y]`, points counted with `<=`.
    Closed,
    /// Limit from below, points counted with `<`.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub d_star: f64,
    pub witness: (f64, f64, Corner),
    pub n: usize,
}

struct Candidate {
    x: f64,
    y: f64,
    closed: usize,
    open: usize,
}

fn unit_points(cloud: &PointCloud) -> Result<Vec<Point>> {
    if cloud.dim() != 2 {
        return Err(GapError::DimensionMismatch {
            expected: 2,
            found: cloud.dim(),
        });
    }
    let pts: Vec<Point> = cloud.points().map(|p| [p[0], p[1]]).collect();
    if let Some(index) = pts
        .iter()
        .position(|p| !(0.0..=1.0).contains(&p[0]) || !(0.0..=1.0).contains(&p[1]))
    {
        return Err(GapError::OutsideUnitSquare { index });
    }
    Ok(pts)
}

fn axis(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.chain(std::iter::once(1.0)).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Calls `f` on every corner of the candidate grid, x-major, with the
/// closed and open counts of the anchored rectangle.
fn for_each_candidate(pts: &[Point], mut f: impl FnMut(Candidate)) {
    let xs = axis(pts.iter().map(|p| p[0]));
    let ys = axis(pts.iter().map(|p| p[1]));
    let mut by_x: Vec<Point> = pts.to_vec();
    by_x.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let mut open_ys: Vec<f64> = Vec::with_capacity(pts.len());
    let mut closed_ys: Vec<f64> = Vec::with_capacity(pts.len());
    let (mut open_end, mut closed_end) = (0, 0);
    let insert = |v: &mut Vec<f64>, y: f64| {
        let at = v.partition_point(|&t| t < y);
        v.insert(at, y);
    };
    for &x in &xs {
        while open_end < by_x.len() && by_x[open_end][0] < x {
            insert(&mut open_ys, by_x[open_end][1]);
            open_end += 1;
        }
        while closed_end < by_x.len() && by_x[closed_end][0] <= x {
            insert(&mut closed_ys, by_x[closed_end][1]);
            closed_end += 1;
        }
        for &y in &ys {
            f(Candidate {
                x,
                y,
                closed: closed_ys.partition_point(|&t| t <= y),
                open: open_ys.partition_point(|&t| t < y),
            });
        }
    }
}

/// Exact star discrepancy of a planar point set in `[0,1]^2`.
pub fn star_discrepancy(cloud: &PointCloud) -> Result<DiscrepancyReport> {
    let pts = unit_points(cloud)?;
    let n = pts.len() as f64;
    let mut best = DiscrepancyReport {
        d_star: -1.0,
        witness: (0.0, 0.0, Corner::Closed),
        n: pts.len(),
    };
    for_each_candidate(&pts, |c| {
        let area = c.x * c.y;
        for (dev, corner) in [
            (c.closed as f64 / n - area, Corner::Closed),
            (area - c.open as f64 / n, Corner::Open),
        ] {
            if dev > best.d_star {
                best.d_star = dev;
                best.witness = (c.x, c.y, corner);
            }
        }
    });
    Ok(best)
}

/// Local discrepancy of the anchored rectangle at `(x, y)`.
pub fn local_discrepancy(cloud: &PointCloud, x: f64, y: f64, corner: Corner) -> Result<f64> {
    let pts = unit_points(cloud)?;
    let n = pts.len() as f64;
    Ok(match corner {
        Corner::Closed => pts.iter().filter(|p| p[0] <= x && p[1] <= y).count() as f64 / n - x * y,
        Corner::Open => x * y - pts.iter().filter(|p| p[0] < x && p[1] < y).count() as f64 / n,
    })
}

/// Upper bound on the star discrepancy from the packing radius `r` and the
/// covering radius `big_r`: the larger of
/// `sup (x^2+y^2)/(r^2 n) - xy` over rectangles holding at least their
/// share of points and `sup xy - (x^2+y^2)/(4 R^2 n)` over those holding at
/// most their share, evaluated on the candidate corners and clamped at 0.
pub fn gap_based_discrepancy_bound(cloud: &PointCloud, r: f64, big_r: f64) -> Result<f64> {
    for (name, value) in [("r", r), ("R", big_r)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(GapError::InvalidParameter {
                name,
                value,
                reason: "must be positive and finite",
            });
        }
    }
    let pts = unit_points(cloud)?;
    let n = pts.len() as f64;
    let mut best: f64 = 0.0;
    for_each_candidate(&pts, |c| {
        let area = c.x * c.y;
        let sq = c.x * c.x + c.y * c.y;
        for count in [c.closed, c.open] {
            let share = count as f64 / n;
            if share >= area {
                best = best.max(sq / (r * r * n) - area);
            }
            if share <= area {
                best = best.max(area - sq / (4.0 * big_r * big_r * n));
            }
        }
    });
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    Graph,
    UnitSquare,
    PathConnected,
}

/// `2^(3/2) / 3^(3/4)`.
pub fn unit_square_constant() -> f64 {
    2f64.powf(1.5) / 3f64.powf(0.75)
}

/// Lower bound on the gap ratio of any k-sample of the given kind of space.
pub fn analytic_bounds(kind: SpaceKind, k: Option<usize>) -> Result<f64> {
    match kind {
        SpaceKind::Graph => Ok(2.0 / 3.0),
        SpaceKind::PathConnected => Ok(1.0),
        SpaceKind::UnitSquare => match k {
            Some(k) if k >= 2 => Ok(2.0 / 3f64.sqrt() - unit_square_constant() / (k as f64).sqrt()),
            other => Err(GapError::InvalidParameter {
                name: "k",
                value: other.map_or(f64::NAN, |k| k as f64),
                reason: "unit-square bound needs k >= 2",
            }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cloud(pts: &[(f64, f64)]) -> PointCloud {
        PointCloud::from_xy(pts).unwrap()
    }

    /// Dense-grid lower estimate, both count conventions.
    fn grid_estimate(pts: &[(f64, f64)], steps: usize) -> f64 {
        let n = pts.len() as f64;
        let mut best: f64 = 0.0;
        for i in 0..=steps {
            for j in 0..=steps {
                let (x, y) = (i as f64 / steps as f64, j as f64 / steps as f64);
                let closed = pts.iter().filter(|p| p.0 <= x && p.1 <= y).count() as f64;
                let open = pts.iter().filter(|p| p.0 < x && p.1 < y).count() as f64;
                best = best.max(closed / n - x * y).max(x * y - open / n);
            }
        }
        best
    }

    #[test]
    fn singleton_examples() {
        let d = star_discrepancy(&cloud(&[(0.5, 0.5)])).unwrap();
        assert_eq!(d.d_star, 0.75);
        assert_eq!(d.witness, (0.5, 0.5, Corner::Closed));
        let d = star_discrepancy(&cloud(&[(1.0, 1.0)])).unwrap();
        assert_eq!(d.d_star, 1.0);
        assert_eq!(d.witness, (1.0, 1.0, Corner::Open));
    }

    #[test]
    fn rejects_points_outside() {
        assert_eq!(
            star_discrepancy(&cloud(&[(0.5, 0.5), (0.2, -0.1)])).unwrap_err(),
            GapError::OutsideUnitSquare { index: 1 }
        );
    }

    #[test]
    fn bound_spot_values() {
        let one = cloud(&[(1.0, 1.0)]);
        assert_eq!(gap_based_discrepancy_bound(&one, 1.0, 10.0).unwrap(), 1.0);
        let four = cloud(&[(0.2, 0.2), (0.8, 0.2), (0.2, 0.8), (0.8, 0.8)]);
        // corner (1,1) with B = 1 - 2/(4 * 1/4 * 4) = 0.5 among the candidates
        assert!(gap_based_discrepancy_bound(&four, 0.3, 0.5).unwrap() >= 0.5);
        assert!(gap_based_discrepancy_bound(&four, 0.0, 0.5).is_err());
    }

    #[test]
    fn analytic_values() {
        assert_eq!(analytic_bounds(SpaceKind::Graph, None).unwrap(), 2.0 / 3.0);
        assert_eq!(
            analytic_bounds(SpaceKind::PathConnected, None).unwrap(),
            1.0
        );
        assert_relative_eq!(
            analytic_bounds(SpaceKind::UnitSquare, Some(100)).unwrap(),
            1.030_619_8,
            epsilon = 1e-7
        );
        assert_relative_eq!(unit_square_constant(), 1.240_806_5, epsilon = 1e-7);
        assert!(analytic_bounds(SpaceKind::UnitSquare, None).is_err());
        assert!(analytic_bounds(SpaceKind::UnitSquare, Some(1)).is_err());
    }

    proptest! {
        #[test]
        fn witness_reproduces_value(
            pts in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..25),
        ) {
            let c = cloud(&pts);
            let d = star_discrepancy(&c).unwrap();
            let (x, y, corner) = d.witness;
            prop_assert_eq!(local_discrepancy(&c, x, y, corner).unwrap(), d.d_star);
            prop_assert!((0.0..=1.0).contains(&d.d_star));
        }

        #[test]
        fn exceeds_grid_estimate_slightly(
            pts in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 1..12),
        ) {
            let c = cloud(&pts);
            let d = star_discrepancy(&c).unwrap().d_star;
            let g = grid_estimate(&pts, 100);
            prop_assert!(g <= d + 1e-12);
            prop_assert!(d - g <= 2.0 / 100.0 + 1e-12);
        }
    }

    #[test]
    fn matches_cubic_brute_force() {
        let pts: Vec<(f64, f64)> = (0..17)
            .map(|i| {
                (
                    (i as f64 * 0.618_034).fract(),
                    (i as f64 * 0.414_214).fract(),
                )
            })
            .collect();
        let c = cloud(&pts);
        let n = pts.len() as f64;
        let mut xs: Vec<f64> = pts.iter().map(|p| p.0).chain([1.0]).collect();
        let mut ys: Vec<f64> = pts.iter().map(|p| p.1).chain([1.0]).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let mut best: f64 = 0.0;
        for &x in &xs {
            for &y in &ys {
                let closed = pts.iter().filter(|p| p.0 <= x && p.1 <= y).count() as f64;
                let open = pts.iter().filter(|p| p.0 < x && p.1 < y).count() as f64;
                best = best.max(closed / n - x * y).max(x * y - open / n);
            }
        }
        assert_eq!(star_discrepancy(&c).unwrap().d_star, best);
    }
}
