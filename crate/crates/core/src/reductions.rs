//! Domination checks and executable certificates linking them to gap ratio.
//!
//! * A graph has an independent dominating set of size `k` exactly when the
//!   `{1, 2}`-metric built from it (1 on edges, 2 elsewhere) has a k-subset
//!   of gap ratio 1.
//! * On a connected graph's shortest-path metric, a vertex set is an
//!   efficient dominating set exactly when it has `r = 3/2` and `R = 1`.
//!
//! Both are checked by exhaustion on the doubled-integer distances.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{GapError, Result};
use crate::metric::{FiniteMetric, Graph};
use crate::subsets::{check_guard, for_each_k_subset};

fn check_vertices(g: &Graph, d: &[usize]) -> Result<()> {
    match d.iter().find(|&&v| v >= g.n()) {
        Some(&index) => Err(GapError::IndexOutOfRange { index, n: g.n() }),
        None => Ok(()),
    }
}

/// `|N[v] ∩ D|` for every vertex `v`, and whether `D` spans an edge.
fn closed_hits(g: &Graph, d: &[usize]) -> (Vec<usize>, bool) {
    let mut in_d = vec![false; g.n()];
    let mut hits = vec![0usize; g.n()];
    for &v in d {
        if !in_d[v] {
            in_d[v] = true;
            hits[v] += 1;
        }
    }
    let mut internal_edge = false;
    for &(u, v, _) in g.edges() {
        if in_d[u] {
            hits[v] += 1;
        }
        if in_d[v] {
            hits[u] += 1;
        }
        internal_edge |= in_d[u] && in_d[v];
    }
    (hits, internal_edge)
}

/// No edge inside `d` and every vertex in `d` or adjacent to it.
pub fn is_independent_dominating(g: &Graph, d: &[usize]) -> Result<bool> {
    check_vertices(g, d)?;
    let (hits, internal_edge) = closed_hits(g, d);
    Ok(!internal_edge && hits.iter().all(|&h| h >= 1))
}

/// Every closed neighbourhood meets `d` exactly once.
pub fn is_efficient_dominating(g: &Graph, d: &[usize]) -> Result<bool> {
    check_vertices(g, d)?;
    let (hits, _) = closed_hits(g, d);
    Ok(hits.iter().all(|&h| h == 1))
}

/// Complete metric on the vertices: 1 between adjacent vertices, 2 otherwise.
pub fn genmet_reduce(g: &Graph) -> Result<FiniteMetric> {
    let n = g.n();
    if n < 2 {
        return Err(GapError::InvalidGraph("need at least 2 vertices".into()));
    }
    let mut rows = vec![vec![2.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(u, v, _) in g.edges() {
        rows[u][v] = 1.0;
        rows[v][u] = 1.0;
    }
    FiniteMetric::from_matrix(rows)
}

fn certifier_input(g: &Graph, k: usize, guard: u128) -> Result<Vec<u64>> {
    let n = g.n();
    if n > 64 {
        return Err(GapError::InvalidGraph(
            "certificates support at most 64 vertices".into(),
        ));
    }
    if k < 2 || k >= n {
        return Err(GapError::InvalidK { k, n });
    }
    check_guard(n, k, guard)?;
    Ok(g.closed_neighbourhoods())
}

fn subset_mask(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | 1 << v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenmetCertificate {
    pub k: usize,
    pub independent_dominating_exists: bool,
    pub gap_ratio_one_exists: bool,
    /// First independent dominating set of size `k`, if any.
    pub independent_dominating_witness: Option<Vec<usize>>,
    /// First k-subset of the reduced metric with gap ratio exactly 1.
    pub gap_ratio_one_witness: Option<Vec<usize>>,
    pub subsets_examined: u64,
}

/// Evaluates both sides of the independent-domination equivalence for size
/// `k` and returns whether they agree, with witnesses.
pub fn check_genmet_equivalence(
    g: &Graph,
    k: usize,
    guard: u128,
) -> Result<(bool, GenmetCertificate)> {
    let nb = certifier_input(g, k, guard)?;
    let n = g.n();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let m = genmet_reduce(g)?;
    let exact = m.exact2x().ok_or(GapError::ExactUnavailable)?;
    let one = Ratio::from_integer(1u64);
    let mut cert = GenmetCertificate {
        k,
        independent_dominating_exists: false,
        gap_ratio_one_exists: false,
        independent_dominating_witness: None,
        gap_ratio_one_witness: None,
        subsets_examined: 0,
    };
    for_each_k_subset(n, k, exact, |s, closest, cover| {
        cert.subsets_examined += 1;
        let mask = subset_mask(s);
        let dominated = s.iter().fold(0, |acc, &v| acc | nb[v]);
        let independent = s.iter().all(|&v| nb[v] & mask == 1 << v);
        if independent && dominated == full && cert.independent_dominating_witness.is_none() {
            cert.independent_dominating_exists = true;
            cert.independent_dominating_witness = Some(s.to_vec());
        }
        if Ratio::new(2 * cover, closest) == one && cert.gap_ratio_one_witness.is_none() {
            cert.gap_ratio_one_exists = true;
            cert.gap_ratio_one_witness = Some(s.to_vec());
        }
    });
    Ok((
        cert.independent_dominating_exists == cert.gap_ratio_one_exists,
        cert,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdsCertificate {
    pub k: usize,
    /// Number of efficient dominating sets of size `k`.
    pub efficient_dominating: u64,
    /// Number of k-subsets with `r = 3/2` and `R = 1`.
    pub extremal_profile: u64,
    /// First efficient dominating set of size `k`, if any.
    pub witness: Option<Vec<usize>>,
    /// Subsets on which the two sides disagree (at most 16 kept).
    pub mismatches: Vec<Vec<usize>>,
    pub mismatch_count: u64,
    pub subsets_examined: u64,
}

/// Checks, for every k-subset of a connected graph, that it is an efficient
/// dominating set exactly when its packing radius is 3/2 and its covering
/// radius 1 in the shortest-path metric.
pub fn check_eds_equivalence(g: &Graph, k: usize, guard: u128) -> Result<(bool, EdsCertificate)> {
    let nb = certifier_input(g, k, guard)?;
    let m = FiniteMetric::from_graph(g)?;
    let exact = m.exact2x().ok_or(GapError::ExactUnavailable)?;
    let mut cert = EdsCertificate {
        k,
        efficient_dominating: 0,
        extremal_profile: 0,
        witness: None,
        mismatches: Vec::new(),
        mismatch_count: 0,
        subsets_examined: 0,
    };
    for_each_k_subset(g.n(), k, exact, |s, closest, cover| {
        cert.subsets_examined += 1;
        let eds = efficient_by_mask(&nb, s);
        let profile = closest == 6 && cover == 2;
        if eds {
            cert.efficient_dominating += 1;
            if cert.witness.is_none() {
                cert.witness = Some(s.to_vec());
            }
        }
        if profile {
            cert.extremal_profile += 1;
        }
        if eds != profile {
            cert.mismatch_count += 1;
            if cert.mismatches.len() < 16 {
                cert.mismatches.push(s.to_vec());
            }
        }
    });
    Ok((cert.mismatch_count == 0, cert))
}

fn efficient_by_mask(nb: &[u64], s: &[usize]) -> bool {
    let mut seen = 0u64;
    for &v in s {
        if seen & nb[v] != 0 {
            return false;
        }
        seen |= nb[v];
    }
    seen.count_ones() as usize == nb.len()
}
