//! Incremental Bowyer-Watson triangulation.
//!
//! The convex hull is closed off by ghost triangles `(a, b, INF)` through a
//! symbolic vertex at infinity, so no finite super-triangle is needed. A
//! ghost is in conflict with a point strictly outside its hull edge, or on
//! the edge's interior.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{circumcircle, in_circle, orient, planar, Point, PREDICATE_TOLERANCE};
use crate::error::{GapError, Result};
use crate::metric::PointCloud;

const INF: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangle {
    /// Counterclockwise site indices.
    pub vertices: [usize; 3],
    pub circumcenter: Point,
    pub circumradius: f64,
    /// Triangle across the edge opposite each vertex, `None` on the hull.
    pub neighbours: [Option<usize>; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangulation {
    pub sites: Vec<Point>,
    pub triangles: Vec<Triangle>,
}

impl Triangulation {
    /// Sorted, deduplicated Delaunay neighbours of every site.
    pub fn site_neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.sites.len()];
        for t in &self.triangles {
            let [a, b, c] = t.vertices;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                nb[u].push(v);
                nb[v].push(u);
            }
        }
        for list in &mut nb {
            list.sort_unstable();
            list.dedup();
        }
        nb
    }

    /// Largest violation of the empty-circumcircle property over all
    /// (triangle, site) pairs, as a signed distance inside the circle.
    pub fn max_circle_intrusion(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for t in &self.triangles {
            for (i, &p) in self.sites.iter().enumerate() {
                if t.vertices.contains(&i) {
                    continue;
                }
                worst = worst.max(t.circumradius - super::dist(t.circumcenter, p));
            }
        }
        worst
    }
}

struct Mesh<'a> {
    pts: &'a [Point],
    tris: Vec<[usize; 3]>,
    alive: Vec<bool>,
    edges: HashMap<(usize, usize), usize>,
}

impl Mesh<'_> {
    fn add(&mut self, t: [usize; 3]) {
        let id = self.tris.len();
        for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            self.edges.insert(e, id);
        }
        self.tris.push(t);
        self.alive.push(true);
    }

    fn kill(&mut self, id: usize) {
        let t = self.tris[id];
        for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            if self.edges.get(&e) == Some(&id) {
                self.edges.remove(&e);
            }
        }
        self.alive[id] = false;
    }

    fn conflicts(&self, id: usize, p: Point) -> bool {
        let [a, b, c] = self.tris[id];
        if c == INF {
            let (u, v) = (self.pts[a], self.pts[b]);
            let o = orient(u, v, p);
            if o > PREDICATE_TOLERANCE {
                return true;
            }
            if o < -PREDICATE_TOLERANCE {
                return false;
            }
            let t = (p[0] - u[0]) * (v[0] - u[0]) + (p[1] - u[1]) * (v[1] - u[1]);
            let len2 = (v[0] - u[0]).powi(2) + (v[1] - u[1]).powi(2);
            t > 0.0 && t < len2
        } else {
            in_circle(self.pts[a], self.pts[b], self.pts[c], p) > PREDICATE_TOLERANCE
        }
    }

    fn insert(&mut self, i: usize) {
        let p = self.pts[i];
        let Some(seed) = (0..self.tris.len()).find(|&t| self.alive[t] && self.conflicts(t, p))
        else {
            return;
        };
        let mut bad = vec![seed];
        let mut in_cavity = HashMap::from([(seed, ())]);
        let mut queue = VecDeque::from([seed]);
        while let Some(t) = queue.pop_front() {
            let [a, b, c] = self.tris[t];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                if let Some(&nb) = self.edges.get(&(v, u)) {
                    if !in_cavity.contains_key(&nb) && self.conflicts(nb, p) {
                        in_cavity.insert(nb, ());
                        bad.push(nb);
                        queue.push_back(nb);
                    }
                }
            }
        }
        bad.sort_unstable();
        let mut boundary = Vec::new();
        for &t in &bad {
            let [a, b, c] = self.tris[t];
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let twin = self.edges.get(&(v, u));
                if twin.map_or(true, |nb| !in_cavity.contains_key(nb)) {
                    boundary.push((u, v));
                }
            }
        }
        for &t in &bad {
            self.kill(t);
        }
        for (u, v) in boundary {
            let t = if v == INF {
                [i, u, INF]
            } else if u == INF {
                [v, i, INF]
            } else {
                [u, v, i]
            };
            self.add(t);
        }
    }
}

/// Delaunay triangulation of at least three non-collinear planar sites.
pub fn delaunay(cloud: &PointCloud) -> Result<Triangulation> {
    let pts = planar(cloud)?;
    triangulate(&pts)
}

pub(crate) fn triangulate(pts: &[Point]) -> Result<Triangulation> {
    if pts.len() < 3 {
        return Err(GapError::TooFewPoints);
    }
    let (a, b) = (0, 1);
    let c = (2..pts.len())
        .find(|&c| orient(pts[a], pts[b], pts[c]).abs() > PREDICATE_TOLERANCE)
        .ok_or(GapError::Collinear)?;
    let (b, c) = if orient(pts[a], pts[b], pts[c]) > 0.0 {
        (b, c)
    } else {
        (c, b)
    };
    let mut mesh = Mesh {
        pts,
        tris: Vec::new(),
        alive: Vec::new(),
        edges: HashMap::new(),
    };
    mesh.add([a, b, c]);
    mesh.add([b, a, INF]);
    mesh.add([c, b, INF]);
    mesh.add([a, c, INF]);
    for i in 0..pts.len() {
        if i != a && i != b && i != c {
            mesh.insert(i);
        }
    }
    Ok(collect(&mesh))
}

fn collect(mesh: &Mesh) -> Triangulation {
    let mut ids = vec![usize::MAX; mesh.tris.len()];
    let mut kept = Vec::new();
    for (id, t) in mesh.tris.iter().enumerate() {
        if mesh.alive[id] && t[2] != INF {
            ids[id] = kept.len();
            kept.push(id);
        }
    }
    let triangles = kept
        .iter()
        .map(|&id| {
            let v = mesh.tris[id];
            let (circumcenter, circumradius) =
                circumcircle(mesh.pts[v[0]], mesh.pts[v[1]], mesh.pts[v[2]]);
            let neighbours = [(v[1], v[2]), (v[2], v[0]), (v[0], v[1])].map(|(u, w)| {
                mesh.edges
                    .get(&(w, u))
                    .map(|&nb| ids[nb])
                    .filter(|&nb| nb != usize::MAX)
            });
            Triangle {
                vertices: v,
                circumcenter,
                circumradius,
                neighbours,
            }
        })
        .collect();
    Triangulation {
        sites: mesh.pts.to_vec(),
        triangles,
    }
}
