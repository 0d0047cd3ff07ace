//! Metric-space representations: point clouds, graphs and the dense
//! finite metric every algorithm in this crate operates on.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{GapError, Result};

/// Slack allowed when auditing the triangle inequality of explicit matrices.
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;

/// Doubled distances above this bound are not stored exactly.
const EXACT_LIMIT: f64 = (1u64 << 52) as f64;

/// A deduplicated set of points in `dim`-dimensional Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<String>>,
    duplicates_removed: usize,
}

impl PointCloud {
    /// Builds a cloud, dropping exact duplicates (first occurrence wins).
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_labels(dim, points, None)
    }

    pub fn with_labels(
        dim: usize,
        points: Vec<Vec<f64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(GapError::EmptyInput);
        }
        if dim == 0 {
            return Err(GapError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(GapError::DimensionMismatch {
                    expected: points.len(),
                    found: l.len(),
                });
            }
        }
        let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(points.len());
        let mut coords = Vec::with_capacity(points.len() * dim);
        let mut kept_labels = labels.as_ref().map(|_| Vec::new());
        let mut duplicates_removed = 0;
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(GapError::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(GapError::NonFinite { index });
            }
            // -0.0 and 0.0 are the same location
            let key: Vec<u64> = p.iter().map(|&c| (c + 0.0).to_bits()).collect();
            if !seen.insert(key) {
                duplicates_removed += 1;
                continue;
            }
            coords.extend(p.iter().map(|&c| c + 0.0));
            if let (Some(out), Some(l)) = (kept_labels.as_mut(), labels.as_ref()) {
                out.push(l[index].clone());
            }
        }
        Ok(PointCloud {
            dim,
            coords,
            labels: kept_labels,
            duplicates_removed,
        })
    }

    /// Convenience constructor for 2-D points.
    pub fn from_xy(points: &[(f64, f64)]) -> Result<Self> {
        Self::new(2, points.iter().map(|&(x, y)| vec![x, y]).collect())
    }

    /// Convenience constructor for points on a line.
    pub fn from_line(points: &[f64]) -> Result<Self> {
        Self::new(1, points.iter().map(|&x| vec![x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn duplicates_removed(&self) -> usize {
        self.duplicates_removed
    }

    /// Sub-cloud made of the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
            duplicates_removed: 0,
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Simple undirected graph with positive edge weights.
///
/// Connectivity is not required here; [`FiniteMetric::from_graph`] checks it.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    weighted: bool,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, weighted: bool) -> Result<Self> {
        if n == 0 {
            return Err(GapError::InvalidGraph("graph has no vertices".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(GapError::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(GapError::InvalidGraph(format!("self-loop at {u}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(GapError::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            if !weighted && w != 1.0 {
                return Err(GapError::InvalidGraph(format!(
                    "unweighted graph has edge ({u}, {v}) of weight {w}"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GapError::InvalidGraph(format!("parallel edge ({u}, {v})")));
            }
        }
        Ok(Graph { n, edges, weighted })
    }

    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(), false)
    }

    pub fn weighted(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::new(n, edges.to_vec(), true)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::unweighted(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::unweighted(n, &edges)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::unweighted(n, &edges)
    }

    /// Graph on `n <= 11` vertices whose edge set is the bit pattern `mask`
    /// over pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        Self::unweighted(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    /// Closed-neighbourhood bitmasks; only meaningful for `n <= 64`.
    pub(crate) fn closed_neighbourhoods(&self) -> Vec<u64> {
        let mut nb: Vec<u64> = (0..self.n).map(|v| 1u64 << v).collect();
        for &(u, v, _) in &self.edges {
            nb[u] |= 1 << v;
            nb[v] |= 1 << u;
        }
        nb
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b, _)| (a == u && b == v) || (a == v && b == u))
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricSource {
    Euclidean,
    Graph,
    Explicit,
}

/// Dense symmetric distance matrix over `n` sites.
///
/// When every distance is a half-integer the matrix is mirrored as doubled
/// integers (`exact2x`), which the gap evaluation uses for exact comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    dist: Vec<f64>,
    exact2x: Option<Vec<u64>>,
    source: MetricSource,
}

impl FiniteMetric {
    pub fn from_cloud(cloud: &PointCloud) -> Result<Self> {
        if cloud.is_empty() {
            return Err(GapError::EmptyInput);
        }
        let n = cloud.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = euclidean(cloud.point(i), cloud.point(j));
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self::assemble(n, dist, MetricSource::Euclidean))
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.n();
        let adj = g.adjacency();
        let mut dist = vec![f64::INFINITY; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            if g.is_weighted() {
                dijkstra(&adj, s, row);
            } else {
                bfs(&adj, s, row);
            }
        }
        if let Some(pos) = dist.iter().position(|d| d.is_infinite()) {
            return Err(GapError::Disconnected {
                u: pos / n,
                v: pos % n,
            });
        }
        // Dijkstra sums may differ in the last bit between directions
        for i in 0..n {
            for j in i + 1..n {
                let d = dist[i * n + j].min(dist[j * n + i]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self::assemble(n, dist, MetricSource::Graph))
    }

    /// Validates an explicit matrix: symmetric, zero exactly on the
    /// diagonal, finite, and satisfying the triangle inequality.
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(GapError::EmptyInput);
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GapError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(GapError::NotAMetric(format!(
                        "entry ({i}, {j}) = {d} is not a finite non-negative distance"
                    )));
                }
                if (i == j) != (d == 0.0) {
                    return Err(GapError::NotAMetric(format!(
                        "entry ({i}, {j}) = {d} violates identity of indiscernibles"
                    )));
                }
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(GapError::NotAMetric(format!(
                        "asymmetric entries at ({i}, {j})"
                    )));
                }
            }
        }
        let m = Self::assemble(n, dist, MetricSource::Explicit);
        if let Some((i, j, k)) = m.triangle_violation(TRIANGLE_TOLERANCE) {
            return Err(GapError::NotAMetric(format!(
                "triangle inequality fails for ({i}, {j}, {k})"
            )));
        }
        Ok(m)
    }

    fn assemble(n: usize, dist: Vec<f64>, source: MetricSource) -> Self {
        let exact2x = dist
            .iter()
            .map(|&d| {
                let twice = 2.0 * d;
                (twice.fract() == 0.0 && twice < EXACT_LIMIT).then_some(twice as u64)
            })
            .collect::<Option<Vec<u64>>>();
        FiniteMetric {
            n,
            dist,
            exact2x,
            source,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> MetricSource {
        self.source
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn matrix(&self) -> &[f64] {
        &self.dist
    }

    pub fn exact2x(&self) -> Option<&[u64]> {
        self.exact2x.as_deref()
    }

    pub fn has_exact(&self) -> bool {
        self.exact2x.is_some()
    }

    /// Same metric with the integer mirror dropped, forcing float evaluation.
    pub fn without_exact(mut self) -> Self {
        self.exact2x = None;
        self
    }

    /// Restriction of the metric to `sites`, re-indexed `0..sites.len()`.
    pub fn restrict(&self, sites: &[usize]) -> FiniteMetric {
        let m = sites.len();
        let mut dist = Vec::with_capacity(m * m);
        for &i in sites {
            for &j in sites {
                dist.push(self.dist(i, j));
            }
        }
        FiniteMetric {
            n: m,
            exact2x: self.exact2x.as_ref().map(|e| {
                let mut out = Vec::with_capacity(m * m);
                for &i in sites {
                    for &j in sites {
                        out.push(e[i * self.n + j]);
                    }
                }
                out
            }),
            dist,
            source: self.source,
        }
    }

    /// First triple (lexicographic) with `d(i,k) > d(i,j) + d(j,k) + tol`.
    pub fn triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.dist(i, k) > self.dist(i, j) + self.dist(j, k) + tol {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

fn bfs(adj: &[Vec<(usize, f64)>], s: usize, row: &mut [f64]) {
    row[s] = 0.0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adj[u] {
            if row[v].is_infinite() {
                row[v] = row[u] + 1.0;
                queue.push_back(v);
            }
        }
    }
}

#[derive(PartialEq, PartialOrd)]
struct Dist(f64);
impl Eq for Dist {}
impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize, row: &mut [f64]) {
    row[s] = 0.0;
    let mut heap = BinaryHeap::from([Reverse((Dist(0.0), s))]);
    while let Some(Reverse((Dist(d), u))) = heap.pop() {
        if d > row[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < row[v] {
                row[v] = nd;
                heap.push(Reverse((Dist(nd), v)));
            }
        }
    }
}
