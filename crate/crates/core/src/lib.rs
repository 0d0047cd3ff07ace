//! Uniform point sampling by gap-ratio minimization.
//!
//! The gap ratio of a sample `P` drawn from a metric space `M` is the
//! covering radius of `P` over `M` divided by its packing radius; small
//! values mean evenly spread samples. The crate evaluates gap ratios exactly
//! on finite metrics, approximates the optimum with farthest-point
//! insertion and grid coresets (static and streaming), solves small
//! instances exhaustively, and audits planar samples in the unit square.

pub mod coreset;
pub mod error;
pub mod fpi;
pub mod gap;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod measures;
pub mod metric;
pub mod oracle;
pub mod reductions;
pub mod report;
pub mod stream;
pub mod subsets;

pub use error::{GapError, Result};
pub use gap::{gap_ratio, GapReport, Sample};
pub use metric::{FiniteMetric, Graph, PointCloud};
