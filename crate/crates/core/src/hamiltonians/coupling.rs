use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric weighted interaction structure over `n` sites.
///
/// Each unordered pair is stored once with `i < j`; the diagonal is always
/// zero. Adjacency lists are built eagerly so the dynamics can loop over
/// neighbours without touching the edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CouplingRepr", into = "CouplingRepr")]
pub struct CouplingMatrix {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

#[derive(Serialize, Deserialize)]
struct CouplingRepr {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<CouplingRepr> for CouplingMatrix {
    type Error = Error;

    fn try_from(repr: CouplingRepr) -> Result<Self> {
        CouplingMatrix::new(repr.n, repr.edges)
    }
}

impl From<CouplingMatrix> for CouplingRepr {
    fn from(m: CouplingMatrix) -> Self {
        CouplingRepr { n: m.n, edges: m.edges }
    }
}

impl CouplingMatrix {
    /// Builds a coupling matrix from a list of unordered pairs.
    ///
    /// Pairs may be given in either orientation. Self-loops, indices outside
    /// `[0, n)`, non-finite weights and duplicate pairs are rejected. Zero
    /// weights are kept as explicit edges.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("coupling matrix needs at least one site"));
        }
        let mut map = BTreeMap::new();
        for (a, b, w) in entries {
            if a >= n || b >= n {
                return Err(Error::Data(format!("pair ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::Data(format!("self-coupling on site {a}")));
            }
            if !w.is_finite() {
                return Err(Error::Data(format!("non-finite weight on pair ({a}, {b})")));
            }
            let key = (a.min(b), a.max(b));
            if map.insert(key, w).is_some() {
                return Err(Error::Data(format!("duplicate pair ({}, {})", key.0, key.1)));
            }
        }
        let edges: Vec<_> = map.into_iter().map(|((i, j), w)| (i, j, w)).collect();
        Ok(Self::from_sorted(n, edges))
    }

    /// Matrix with no couplings.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    /// Builds from a dense row-major matrix, reading the upper triangle.
    ///
    /// Entries with exact zero weight are dropped. The lower triangle must
    /// mirror the upper one exactly.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: dense.len() });
        }
        let mut entries = Vec::new();
        for i in 0..n {
            if dense[i * n + i] != 0.0 {
                return Err(Error::Data(format!("non-zero diagonal at {i}")));
            }
            for j in (i + 1)..n {
                let w = dense[i * n + j];
                if w != dense[j * n + i] {
                    return Err(Error::Data(format!("asymmetric entry at ({i}, {j})")));
                }
                if w != 0.0 {
                    entries.push((i, j, w));
                }
            }
        }
        Self::new(n, entries)
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j, w) in &edges {
            neighbors[i].push((j, w));
            neighbors[j].push((i, w));
        }
        for row in &mut neighbors {
            row.sort_by_key(|&(j, _)| j);
        }
        CouplingMatrix { n, edges, neighbors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored unordered pairs.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Stored pairs as `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Neighbours of site `i` with their weights, sorted by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    /// `J_ij`, zero when the pair is not stored.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i >= self.n || j >= self.n || i == j {
            return 0.0;
        }
        let row = &self.neighbors[i];
        match row.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }

    /// `max_i Σ_j |J_ij|`.
    pub fn max_abs_row_sum(&self) -> f64 {
        self.neighbors
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute weight, zero for an empty matrix.
    pub fn max_abs_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }

    /// Sum of all stored weights (each unordered pair once).
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut dense = vec![0.0; n * n];
        for &(i, j, w) in &self.edges {
            dense[i * n + j] = w;
            dense[j * n + i] = w;
        }
        dense
    }

    /// Same structure with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, self.edges.iter().map(|&(i, j, w)| (i, j, w * factor)))
    }

    /// Copy with `extra` decoupled sites appended.
    pub fn with_extra_sites(&self, extra: usize) -> Self {
        Self::from_sorted(self.n + extra, self.edges.clone())
    }
}
