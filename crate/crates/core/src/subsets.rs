//! Exhaustive k-subset scanning over a finite metric.
//!
//! Subsets are visited in lexicographic order by depth-first search. Each
//! level carries the distance from every site to the chosen prefix, so a
//! leaf costs `O(n)`: its closest pair distance and covering radius fall out
//! of one pass over the parent's cover row.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{GapError, Result};
use crate::metric::FiniteMetric;

/// Default cap on `C(n, k)` for exhaustive searches.
pub const DEFAULT_GUARD: u128 = 10_000_000;

/// Distance representation scanned by the enumerator.
pub trait Distance: Copy + PartialOrd + Send + Sync {
    const INFINITY: Self;
    const ZERO: Self;
    type Ratio: PartialOrd + Copy + Send;

    /// `R / r` for a subset with closest pair distance `closest` and
    /// covering radius `cover`.
    fn gap_ratio(closest: Self, cover: Self) -> Self::Ratio;
    /// Converts back to a metric distance.
    fn to_f64(self) -> f64;

    #[inline]
    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Distance for f64 {
    const INFINITY: Self = f64::INFINITY;
    const ZERO: Self = 0.0;
    type Ratio = f64;

    #[inline]
    fn gap_ratio(closest: f64, cover: f64) -> f64 {
        cover / (closest / 2.0)
    }

    fn to_f64(self) -> f64 {
        self
    }
}

/// Doubled-integer distances.
impl Distance for u64 {
    const INFINITY: Self = u64::MAX;
    const ZERO: Self = 0;
    type Ratio = Ratio<u64>;

    #[inline]
    fn gap_ratio(closest: u64, cover: u64) -> Ratio<u64> {
        Ratio::new(2 * cover, closest)
    }

    fn to_f64(self) -> f64 {
        self as f64 / 2.0
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn check_guard(n: usize, k: usize, guard: u128) -> Result<u128> {
    let count = binomial(n, k);
    if count > guard {
        return Err(GapError::GuardExceeded { count, guard });
    }
    Ok(count)
}

/// Visits every k-subset whose smallest element is `first`.
///
/// The callback receives the subset, its closest pairwise distance and its
/// covering radius over all `n` sites.
pub fn scan_from<T: Distance>(
    n: usize,
    k: usize,
    dist: &[T],
    first: usize,
    mut visit: impl FnMut(&[usize], T, T),
) {
    assert!(k >= 2 && k <= n && dist.len() == n * n);
    if first + k > n {
        return;
    }
    let mut chosen = vec![first];
    let mut covers: Vec<Vec<T>> = vec![dist[first * n..(first + 1) * n].to_vec()];
    let mut closest = vec![T::INFINITY];
    descend(
        n,
        k,
        dist,
        &mut chosen,
        &mut covers,
        &mut closest,
        &mut visit,
    );
}

fn descend<T: Distance>(
    n: usize,
    k: usize,
    dist: &[T],
    chosen: &mut Vec<usize>,
    covers: &mut Vec<Vec<T>>,
    closest: &mut Vec<T>,
    visit: &mut impl FnMut(&[usize], T, T),
) {
    let depth = chosen.len();
    let last = *chosen.last().unwrap();
    let close = closest[depth - 1];
    if depth + 1 == k {
        let cover = &covers[depth - 1];
        for c in last + 1..n {
            let row = &dist[c * n..(c + 1) * n];
            let mut radius = T::ZERO;
            for (&a, &b) in cover.iter().zip(row) {
                let d = a.min(b);
                if d > radius {
                    radius = d;
                }
            }
            chosen.push(c);
            visit(chosen, close.min(cover[c]), radius);
            chosen.pop();
        }
        return;
    }
    for c in last + 1..=n - (k - depth) {
        let row = &dist[c * n..(c + 1) * n];
        let cover = &covers[depth - 1];
        let next: Vec<T> = cover.iter().zip(row).map(|(&a, &b)| a.min(b)).collect();
        closest.push(close.min(cover[c]));
        covers.push(next);
        chosen.push(c);
        descend(n, k, dist, chosen, covers, closest, visit);
        chosen.pop();
        covers.pop();
        closest.pop();
    }
}

/// Visits every k-subset in lexicographic order.
pub fn for_each_k_subset<T: Distance>(
    n: usize,
    k: usize,
    dist: &[T],
    mut visit: impl FnMut(&[usize], T, T),
) {
    for first in 0..=n - k {
        scan_from(n, k, dist, first, &mut visit);
    }
}

/// Outcome of an exhaustive scan, in metric units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSummary {
    /// Lexicographically first subset of minimum gap ratio.
    pub best: Vec<usize>,
    /// Smallest covering radius over all subsets.
    pub min_cover: f64,
    /// Largest closest-pair distance over all subsets.
    pub max_closest: f64,
    pub examined: u64,
}

struct Fold<T: Distance> {
    best: Option<(T::Ratio, Vec<usize>)>,
    min_cover: T,
    max_closest: T,
    examined: u64,
}

impl<T: Distance> Fold<T> {
    fn new() -> Self {
        Fold {
            best: None,
            min_cover: T::INFINITY,
            max_closest: T::ZERO,
            examined: 0,
        }
    }

    fn visit(&mut self, subset: &[usize], closest: T, cover: T) {
        self.examined += 1;
        if cover < self.min_cover {
            self.min_cover = cover;
        }
        if closest > self.max_closest {
            self.max_closest = closest;
        }
        let gr = T::gap_ratio(closest, cover);
        match &self.best {
            Some((b, _)) if !(gr < *b) => {}
            _ => self.best = Some((gr, subset.to_vec())),
        }
    }

    /// `later` covers lexicographically later subsets, so it wins only on
    /// a strictly smaller ratio.
    fn merge(mut self, later: Self) -> Self {
        self.examined += later.examined;
        if later.min_cover < self.min_cover {
            self.min_cover = later.min_cover;
        }
        if later.max_closest > self.max_closest {
            self.max_closest = later.max_closest;
        }
        match (&self.best, later.best) {
            (None, b) => self.best = b,
            (Some((a, _)), Some((b, s))) if b < *a => self.best = Some((b, s)),
            _ => {}
        }
        self
    }
}

fn scan_best<T: Distance>(n: usize, k: usize, dist: &[T]) -> ScanSummary {
    let chunks: Vec<Fold<T>> = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut fold = Fold::new();
            scan_from(n, k, dist, first, |s, c, r| fold.visit(s, c, r));
            fold
        })
        .collect();
    let fold = chunks.into_iter().fold(Fold::new(), Fold::merge);
    ScanSummary {
        best: fold.best.map(|(_, s)| s).unwrap_or_default(),
        min_cover: fold.min_cover.to_f64(),
        max_closest: fold.max_closest.to_f64(),
        examined: fold.examined,
    }
}

/// Exhaustive search for the k-subset of minimum gap ratio, on the exact
/// mirror when the metric has one.
pub fn best_subset(m: &FiniteMetric, k: usize, guard: u128) -> Result<ScanSummary> {
    let n = m.n();
    if k < 2 || k > n {
        return Err(GapError::InvalidK { k, n });
    }
    check_guard(n, k, guard)?;
    Ok(match m.exact2x() {
        Some(e) => scan_best(n, k, e),
        None => scan_best(n, k, m.matrix()),
    })
}
