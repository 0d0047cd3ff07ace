//! Angle bounds for Delaunay triangles away from the square boundary.
//!
//! Every edge is at least `2r` long and an interior Delaunay triangle has a
//! circumradius of at most `R`, so each angle `a` satisfies
//! `sin a >= r / R = 1 / g`: all angles lie in `[theta, pi - 2 theta]` with
//! `theta = arcsin(1/g)`.

use std::f64::consts::PI;

use serde::Serialize;

use super::cover::{cover_points, gap_report_unit_square};
use super::delaunay::triangulate;
use super::{dist, in_unit_square, planar, Point};
use crate::error::Result;
use crate::metric::PointCloud;

const ANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleViolation {
    pub triangle: [usize; 3],
    pub min_angle: f64,
    pub max_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleAuditReport {
    pub g: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub theta_bound: f64,
    pub triangles: usize,
    pub interior_triangles: Vec<[usize; 3]>,
    pub min_interior_angle: Option<f64>,
    pub max_interior_angle: Option<f64>,
    pub violations: Vec<AngleViolation>,
}

/// Interior angles at the three vertices.
pub fn angles(a: Point, b: Point, c: Point) -> [f64; 3] {
    let (ab, bc, ca) = (dist(a, b), dist(b, c), dist(c, a));
    let at = |opp: f64, s1: f64, s2: f64| {
        ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2))
            .clamp(-1.0, 1.0)
            .acos()
    };
    [at(bc, ab, ca), at(ca, ab, bc), at(ab, bc, ca)]
}

fn boundary_distance(p: Point) -> f64 {
    p[0].min(1.0 - p[0]).min(p[1]).min(1.0 - p[1])
}

pub fn delaunay_angle_audit(cloud: &PointCloud) -> Result<AngleAuditReport> {
    let pts = planar(cloud)?;
    in_unit_square(&pts)?;
    let tri = triangulate(&pts)?;
    let gap = gap_report_unit_square(cloud)?;
    debug_assert_eq!(gap.big_r, cover_points(&pts)?.radius);
    let g = gap.gap_ratio;
    let theta = (1.0 / g).min(1.0).asin();
    let mut report = AngleAuditReport {
        g,
        r: gap.r,
        big_r: gap.big_r,
        theta_bound: theta,
        triangles: tri.triangles.len(),
        interior_triangles: Vec::new(),
        min_interior_angle: None,
        max_interior_angle: None,
        violations: Vec::new(),
    };
    for t in &tri.triangles {
        let v = t.vertices;
        if v.iter().any(|&i| boundary_distance(pts[i]) < gap.big_r) {
            continue;
        }
        let a = angles(pts[v[0]], pts[v[1]], pts[v[2]]);
        let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = a.iter().copied().fold(0.0, f64::max);
        report.interior_triangles.push(v);
        report.min_interior_angle = Some(report.min_interior_angle.map_or(lo, |m| m.min(lo)));
        report.max_interior_angle = Some(report.max_interior_angle.map_or(hi, |m| m.max(hi)));
        if lo < theta - ANGLE_TOLERANCE || hi > PI - 2.0 * theta + ANGLE_TOLERANCE {
            report.violations.push(AngleViolation {
                triangle: v,
                min_angle: lo,
                max_angle: hi,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn angles_of_a_right_triangle() {
        let a = angles([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert_relative_eq!(a[0], PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(a[1], PI / 4.0, epsilon = 1e-12);
        assert_relative_eq!(a.iter().sum::<f64>(), PI, epsilon = 1e-12);
    }

    #[test]
    fn theta_matches_gap_ratio() {
        let cloud = PointCloud::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let rep = delaunay_angle_audit(&cloud).unwrap();
        assert_relative_eq!(rep.theta_bound, (1.0 / 2f64.sqrt()).asin(), epsilon = 1e-12);
        assert!(rep.interior_triangles.is_empty());
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn hexagonal_patch_has_wide_angles() {
        let mut pts = Vec::new();
        let h = 3f64.sqrt() / 2.0;
        for j in 0..9 {
            for i in 0..9 {
                let x = 0.06 + 0.11 * (i as f64 + if j % 2 == 1 { 0.5 } else { 0.0 });
                let y = 0.06 + 0.11 * h * j as f64;
                if x <= 1.0 && y <= 1.0 {
                    pts.push((x, y));
                }
            }
        }
        let rep = delaunay_angle_audit(&PointCloud::from_xy(&pts).unwrap()).unwrap();
        assert!(rep.violations.is_empty());
        if let Some(lo) = rep.min_interior_angle {
            assert!(lo >= rep.theta_bound - 1e-9);
        }
    }

    #[test]
    fn random_clouds_have_no_violations() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let pts: Vec<(f64, f64)> = (0..100).map(|_| (rng.gen(), rng.gen())).collect();
            let rep = delaunay_angle_audit(&PointCloud::from_xy(&pts).unwrap()).unwrap();
            assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        }
    }
}
