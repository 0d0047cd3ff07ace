//! Axis-aligned grids that keep one representative site per nonempty cell.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GapError, Result};
use crate::metric::PointCloud;

pub type CellIndex = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Representative {
    pub index: usize,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCoreset {
    pub origin: Vec<f64>,
    pub cell_side: f64,
    #[serde(skip)]
    pub cells: BTreeMap<CellIndex, Representative>,
}

impl GridCoreset {
    pub fn empty(origin: Vec<f64>, cell_side: f64) -> Result<Self> {
        if !(cell_side > 0.0 && cell_side.is_finite()) {
            return Err(GapError::InvalidParameter {
                name: "cell_side",
                value: cell_side,
                reason: "must be positive and finite",
            });
        }
        Ok(GridCoreset {
            origin,
            cell_side,
            cells: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    /// Half-open cell `[origin + i s, origin + (i+1) s)` per axis.
    pub fn cell_of(&self, point: &[f64]) -> CellIndex {
        point
            .iter()
            .zip(&self.origin)
            .map(|(&x, &a)| ((x - a) / self.cell_side).floor() as i64)
            .collect()
    }

    pub fn size(&self) -> usize {
        self.cells.len()
    }

    /// Keeps `point` as the representative of its cell if the cell is empty.
    pub fn offer(&mut self, index: usize, point: &[f64]) -> bool {
        let cell = self.cell_of(point);
        match self.cells.entry(cell) {
            std::collections::btree_map::Entry::Occupied(_) => false,
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(Representative {
                    index,
                    point: point.to_vec(),
                });
                true
            }
        }
    }

    /// Doubles the cell side; each parent cell keeps the representative of
    /// its lexicographically smallest nonempty child.
    pub fn coarsen(&mut self) {
        self.cell_side *= 2.0;
        let mut merged: BTreeMap<CellIndex, Representative> = BTreeMap::new();
        for (cell, rep) in std::mem::take(&mut self.cells) {
            let parent: CellIndex = cell.iter().map(|c| c.div_euclid(2)).collect();
            merged.entry(parent).or_insert(rep);
        }
        self.cells = merged;
    }

    /// Representative site indices in increasing order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.cells.values().map(|r| r.index).collect();
        out.sort_unstable();
        out
    }

    pub fn stats(&self) -> GridStats {
        GridStats {
            cell_side: self.cell_side,
            cells: self.size(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridStats {
    pub cell_side: f64,
    pub cells: usize,
}

/// Grid anchored at the bounding-box minimum with one representative per
/// nonempty cell: the first site by index, or a seeded uniform choice.
pub fn build_grid_coreset(
    cloud: &PointCloud,
    cell_side: f64,
    seed: Option<u64>,
) -> Result<GridCoreset> {
    if cloud.is_empty() {
        return Err(GapError::EmptyInput);
    }
    let mut origin = vec![f64::INFINITY; cloud.dim()];
    for p in cloud.points() {
        for (o, &x) in origin.iter_mut().zip(p) {
            *o = o.min(x);
        }
    }
    let mut grid = GridCoreset::empty(origin, cell_side)?;
    let mut members: BTreeMap<CellIndex, Vec<usize>> = BTreeMap::new();
    for (i, p) in cloud.points().enumerate() {
        members.entry(grid.cell_of(p)).or_default().push(i);
    }
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    for (cell, sites) in members {
        let index = match rng.as_mut() {
            Some(rng) => sites[rng.gen_range(0..sites.len())],
            None => sites[0],
        };
        grid.cells.insert(
            cell,
            Representative {
                index,
                point: cloud.point(index).to_vec(),
            },
        );
    }
    Ok(grid)
}
