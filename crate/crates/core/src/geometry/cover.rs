//! Covering radius of a planar sample over the unit square.
//!
//! The farthest point of `[0,1]^2` from `P` is a vertex of some Voronoi
//! cell clipped to the square: a Voronoi vertex, a Voronoi edge meeting the
//! boundary, or a corner. Each cell is the square cut by the bisectors with
//! the site's Delaunay neighbours.

use serde::Serialize;

use super::delaunay::triangulate;
use super::{dist, in_unit_square, orient, planar, Point, PREDICATE_TOLERANCE};
use crate::error::{GapError, Result};
use crate::metric::PointCloud;

const ON_BOUNDARY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateKind {
    VoronoiVertex,
    BoundaryIntersection,
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverWitness {
    #[serde(rename = "R")]
    pub radius: f64,
    pub point: Point,
    pub kind: CandidateKind,
    /// Nearest sample site to the witness point.
    pub nearest_site: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareGapReport {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub gap_ratio: f64,
    pub closest_pair: (usize, usize),
    pub farthest_point: Point,
    pub candidate_kind: CandidateKind,
}

fn classify(p: Point) -> CandidateKind {
    let on = |x: f64| x.abs() <= ON_BOUNDARY || (1.0 - x).abs() <= ON_BOUNDARY;
    match (on(p[0]), on(p[1])) {
        (true, true) => CandidateKind::Corner,
        (false, false) => CandidateKind::VoronoiVertex,
        _ => CandidateKind::BoundaryIntersection,
    }
}

/// Keeps the part of `poly` where `a . x <= b`.
fn clip(poly: &[Point], a: Point, b: f64) -> Vec<Point> {
    let side = |p: Point| a[0] * p[0] + a[1] * p[1] - b;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (i, &p) in poly.iter().enumerate() {
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(p), side(q));
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn voronoi_cell(pts: &[Point], i: usize, others: impl Iterator<Item = usize>) -> Vec<Point> {
    let mut poly = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let p = pts[i];
    for j in others {
        let q = pts[j];
        let a = [q[0] - p[0], q[1] - p[1]];
        let b = (q[0] * q[0] + q[1] * q[1] - p[0] * p[0] - p[1] * p[1]) / 2.0;
        poly = clip(&poly, a, b);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

fn nearest(pts: &[Point], x: Point) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (i, &p) in pts.iter().enumerate() {
        let d = dist(p, x);
        if d < best.0 {
            best = (d, i);
        }
    }
    best
}

fn all_collinear(pts: &[Point]) -> bool {
    pts.len() < 3
        || (2..pts.len()).all(|c| orient(pts[0], pts[1], pts[c]).abs() <= PREDICATE_TOLERANCE)
}

pub(crate) fn cover_points(pts: &[Point]) -> Result<CoverWitness> {
    if pts.is_empty() {
        return Err(GapError::EmptyInput);
    }
    in_unit_square(pts)?;
    let neighbours: Vec<Vec<usize>> = if all_collinear(pts) {
        (0..pts.len())
            .map(|i| (0..pts.len()).filter(|&j| j != i).collect())
            .collect()
    } else {
        triangulate(pts)?.site_neighbours()
    };
    let mut best: Option<CoverWitness> = None;
    for (i, nb) in neighbours.iter().enumerate() {
        for v in voronoi_cell(pts, i, nb.iter().copied()) {
            let v = [v[0].clamp(0.0, 1.0), v[1].clamp(0.0, 1.0)];
            let (d, site) = nearest(pts, v);
            if best.map_or(true, |b| d > b.radius) {
                best = Some(CoverWitness {
                    radius: d,
                    point: v,
                    kind: classify(v),
                    nearest_site: site,
                });
            }
        }
    }
    Ok(best.expect("every cell keeps its own site"))
}

/// Largest distance from a point of the unit square to the sample.
pub fn covering_radius_unit_square(cloud: &PointCloud) -> Result<CoverWitness> {
    cover_points(&planar(cloud)?)
}

pub fn gap_report_unit_square(cloud: &PointCloud) -> Result<SquareGapReport> {
    let pts = planar(cloud)?;
    if pts.len() < 2 {
        return Err(GapError::SampleTooSmall {
            k: pts.len(),
            min: 2,
        });
    }
    in_unit_square(&pts)?;
    let mut pair = (0, 1, dist(pts[0], pts[1]));
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = dist(pts[i], pts[j]);
            if d < pair.2 {
                pair = (i, j, d);
            }
        }
    }
    let cover = cover_points(&pts)?;
    let r = pair.2 / 2.0;
    Ok(SquareGapReport {
        r,
        big_r: cover.radius,
        gap_ratio: cover.radius / r,
        closest_pair: (pair.0, pair.1),
        farthest_point: cover.point,
        candidate_kind: cover.kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(pts: &[(f64, f64)]) -> PointCloud {
        PointCloud::from_xy(pts).unwrap()
    }

    fn grid_estimate(pts: &[(f64, f64)], steps: usize) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..=steps {
            for j in 0..=steps {
                let x = (i as f64 / steps as f64, j as f64 / steps as f64);
                let d = pts
                    .iter()
                    .map(|p| (p.0 - x.0).hypot(p.1 - x.1))
                    .fold(f64::INFINITY, f64::min);
                best = best.max(d);
            }
        }
        best
    }

    #[test]
    fn single_centre_point() {
        let w = covering_radius_unit_square(&cloud(&[(0.5, 0.5)])).unwrap();
        assert_relative_eq!(w.radius, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(w.kind, CandidateKind::Corner);
        assert_eq!(w.point, [0.0, 0.0]);
    }

    #[test]
    fn diagonal_pair() {
        let w = covering_radius_unit_square(&cloud(&[(0.0, 0.0), (1.0, 1.0)])).unwrap();
        assert_relative_eq!(w.radius, 1.0, epsilon = 1e-15);
        assert!(w.point == [1.0, 0.0] || w.point == [0.0, 1.0]);
        let rep = gap_report_unit_square(&cloud(&[(0.0, 0.0), (1.0, 1.0)])).unwrap();
        assert_relative_eq!(rep.r, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(rep.gap_ratio, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn corners_have_centre_witness() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let w = covering_radius_unit_square(&cloud(&pts)).unwrap();
        assert_relative_eq!(w.radius, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(w.point[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(w.point[1], 0.5, epsilon = 1e-12);
        assert_eq!(w.kind, CandidateKind::VoronoiVertex);
        let rep = gap_report_unit_square(&cloud(&pts)).unwrap();
        assert_eq!(rep.r, 0.5);
        assert_relative_eq!(rep.gap_ratio, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn collinear_sites() {
        let pts = [(0.1, 0.5), (0.5, 0.5), (0.9, 0.5)];
        let w = covering_radius_unit_square(&cloud(&pts)).unwrap();
        assert_relative_eq!(w.radius, 0.2f64.hypot(0.5), epsilon = 1e-12);
        assert_eq!(w.kind, CandidateKind::BoundaryIntersection);
    }

    #[test]
    fn rejects_outside_points() {
        assert_eq!(
            covering_radius_unit_square(&cloud(&[(0.5, 0.5), (1.5, 0.5)])).unwrap_err(),
            GapError::OutsideUnitSquare { index: 1 }
        );
    }

    #[test]
    fn matches_dense_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [1usize, 2, 3, 5, 12, 30] {
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
            let w = covering_radius_unit_square(&cloud(&pts)).unwrap();
            let g = grid_estimate(&pts, 400);
            assert!(g <= w.radius + 1e-12, "grid {g} above exact {}", w.radius);
            assert!(w.radius - g < 2.0 / 400.0, "n = {n}: {} vs {g}", w.radius);
            let nearest = pts
                .iter()
                .map(|p| (p.0 - w.point[0]).hypot(p.1 - w.point[1]))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(nearest, w.radius);
        }
    }
}
