//! Minimum gap, maximum gap and gap ratio of a sample in a finite metric.
//!
//! For a sample `P` of a metric space `M`:
//!
//! * the minimum gap `r` is half the closest pairwise distance inside `P`
//!   (the packing radius),
//! * the maximum gap `R` is the largest distance from a site of `M` to its
//!   nearest sampled site (the covering radius),
//! * the gap ratio is `R / r`.
//!
//! All argmin/argmax ties break toward the smallest index, pairs
//! lexicographically, so witnesses are reproducible.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{GapError, Result};
use crate::metric::FiniteMetric;

/// A set of at least two distinct site indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Sample(Vec<usize>);

impl Sample {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GapError::DuplicateIndex(w[0]));
        }
        if let Some(&index) = indices.last().filter(|&&i| i >= n) {
            return Err(GapError::IndexOutOfRange { index, n });
        }
        if indices.len() < 2 {
            return Err(GapError::SampleTooSmall {
                k: indices.len(),
                min: 2,
            });
        }
        Ok(Sample(indices))
    }

    /// Every site of the metric.
    pub fn all(n: usize) -> Result<Self> {
        Self::new((0..n).collect(), n)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// Exact gap data in doubled-integer units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactGap {
    /// Twice the closest pairwise distance, i.e. `4 r`.
    pub closest_2x: u64,
    /// Twice the covering radius, i.e. `2 R`.
    pub cover_2x: u64,
}

impl ExactGap {
    /// `R / r = 2 * cover_2x / closest_2x` as a reduced fraction.
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(2 * self.cover_2x, self.closest_2x)
    }

    pub fn r(&self) -> Ratio<u64> {
        Ratio::new(self.closest_2x, 4)
    }

    pub fn big_r(&self) -> Ratio<u64> {
        Ratio::new(self.cover_2x, 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub gap_ratio: f64,
    pub closest_pair: (usize, usize),
    pub farthest_site: usize,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_ratio: Option<String>,
    #[serde(skip)]
    pub exact_gap: Option<ExactGap>,
}

impl GapReport {
    /// Relabels witnesses through `map` (sample-local to global indices).
    pub fn remap(mut self, map: &[usize]) -> Self {
        self.closest_pair = (map[self.closest_pair.0], map[self.closest_pair.1]);
        self.farthest_site = map[self.farthest_site];
        self
    }
}

/// Half the smallest pairwise distance inside `p`, with its witness pair.
pub fn min_gap(m: &FiniteMetric, p: &Sample) -> Result<(f64, (usize, usize))> {
    check_sites(m, p.indices())?;
    let ((i, j), _) = closest_pair(m, p.indices());
    Ok((m.dist(i, j) / 2.0, (i, j)))
}

fn closest_pair(m: &FiniteMetric, sites: &[usize]) -> ((usize, usize), Option<u64>) {
    let mut best = (sites[0], sites[1]);
    match m.exact2x() {
        Some(e) => {
            let n = m.n();
            let mut best_d = u64::MAX;
            for (a, &i) in sites.iter().enumerate() {
                for &j in &sites[a + 1..] {
                    let d = e[i * n + j];
                    if d < best_d {
                        best_d = d;
                        best = (i, j);
                    }
                }
            }
            (best, Some(best_d))
        }
        None => {
            let mut best_d = f64::INFINITY;
            for (a, &i) in sites.iter().enumerate() {
                for &j in &sites[a + 1..] {
                    let d = m.dist(i, j);
                    if d < best_d {
                        best_d = d;
                        best = (i, j);
                    }
                }
            }
            (best, None)
        }
    }
}

/// Covering radius of `sites` over every site of `m`, with the farthest site.
pub fn max_gap(m: &FiniteMetric, sites: &[usize]) -> Result<(f64, usize)> {
    if sites.is_empty() {
        return Err(GapError::SampleTooSmall { k: 0, min: 1 });
    }
    check_sites(m, sites)?;
    let (q, p, _) = farthest(m, sites);
    Ok((m.dist(q, p), q))
}

/// Returns (farthest site, its nearest sampled site, exact doubled distance).
fn farthest(m: &FiniteMetric, sites: &[usize]) -> (usize, usize, Option<u64>) {
    let n = m.n();
    match m.exact2x() {
        Some(e) => {
            let mut best = (0, sites[0], 0u64);
            for q in 0..n {
                let row = &e[q * n..(q + 1) * n];
                let (p, d) =
                    sites
                        .iter()
                        .map(|&p| (p, row[p]))
                        .fold(
                            (sites[0], u64::MAX),
                            |acc, x| if x.1 < acc.1 { x } else { acc },
                        );
                if d > best.2 {
                    best = (q, p, d);
                }
            }
            (best.0, best.1, Some(best.2))
        }
        None => {
            let mut best = (0, sites[0], 0.0);
            for q in 0..n {
                let row = m.row(q);
                let (p, d) =
                    sites
                        .iter()
                        .map(|&p| (p, row[p]))
                        .fold(
                            (sites[0], f64::INFINITY),
                            |acc, x| if x.1 < acc.1 { x } else { acc },
                        );
                if d > best.2 {
                    best = (q, p, d);
                }
            }
            (best.0, best.1, None)
        }
    }
}

pub fn gap_ratio(m: &FiniteMetric, p: &Sample) -> Result<GapReport> {
    check_sites(m, p.indices())?;
    let sites = p.indices();
    let ((i, j), closest_2x) = closest_pair(m, sites);
    let (q, nearest, cover_2x) = farthest(m, sites);
    let r = m.dist(i, j) / 2.0;
    let big_r = m.dist(q, nearest);
    let exact_gap = closest_2x
        .zip(cover_2x)
        .map(|(closest_2x, cover_2x)| ExactGap {
            closest_2x,
            cover_2x,
        });
    Ok(GapReport {
        r,
        big_r,
        gap_ratio: big_r / r,
        closest_pair: (i, j),
        farthest_site: q,
        exact: exact_gap.is_some(),
        exact_ratio: exact_gap.map(|e| e.ratio().to_string()),
        exact_gap,
    })
}

/// Lexicographically first pair realizing the largest distance.
pub fn diameter(m: &FiniteMetric) -> Result<(usize, usize, f64)> {
    let n = m.n();
    if n < 2 {
        return Err(GapError::SampleTooSmall { k: n, min: 2 });
    }
    let mut best = (0, 1, m.dist(0, 1));
    for i in 0..n {
        for j in i + 1..n {
            let d = m.dist(i, j);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    Ok(best)
}

fn check_sites(m: &FiniteMetric, sites: &[usize]) -> Result<()> {
    match sites.iter().find(|&&i| i >= m.n()) {
        Some(&index) => Err(GapError::IndexOutOfRange { index, n: m.n() }),
        None => Ok(()),
    }
}
