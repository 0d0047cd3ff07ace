//! Planar geometry on the unit square: Delaunay triangulation, largest
//! empty circle and the Delaunay angle audit.

mod audit;
mod cover;
mod delaunay;

pub use audit::{delaunay_angle_audit, AngleAuditReport, AngleViolation};
pub use cover::{
    covering_radius_unit_square, gap_report_unit_square, CandidateKind, CoverWitness,
    SquareGapReport,
};
pub use delaunay::{delaunay, Triangle, Triangulation};

use crate::error::{GapError, Result};
use crate::metric::PointCloud;

/// Tolerance of the orientation and in-circle predicates.
pub const PREDICATE_TOLERANCE: f64 = 1e-12;

pub type Point = [f64; 2];

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Positive when `d` lies inside the circle through counterclockwise
/// `(a, b, c)`.
#[inline]
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

pub fn circumcircle(a: Point, b: Point, c: Point) -> (Point, f64) {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    ([a[0] + ux, a[1] + uy], (ux * ux + uy * uy).sqrt())
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn planar(cloud: &PointCloud) -> Result<Vec<Point>> {
    if cloud.dim() != 2 {
        return Err(GapError::DimensionMismatch {
            expected: 2,
            found: cloud.dim(),
        });
    }
    Ok(cloud.points().map(|p| [p[0], p[1]]).collect())
}

fn in_unit_square(pts: &[Point]) -> Result<()> {
    match pts
        .iter()
        .position(|p| !(0.0..=1.0).contains(&p[0]) || !(0.0..=1.0).contains(&p[1]))
    {
        Some(index) => Err(GapError::OutsideUnitSquare { index }),
        None => Ok(()),
    }
}
