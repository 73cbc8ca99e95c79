use std::collections::BTreeMap;

use crate::error::Result;
use crate::hamiltonians::{CouplingMatrix, IsingProblem};

/// A binary variable that is either free (with its compact index) or pinned
/// to a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Var {
    Free(usize),
    Fixed(bool),
}

/// Quadratic pseudo-Boolean function over `x ∈ {0,1}ⁿ`.
#[derive(Debug, Clone)]
pub(crate) struct Qubo {
    constant: f64,
    linear: Vec<f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
}

impl Qubo {
    pub fn new(n_vars: usize) -> Self {
        Qubo { constant: 0.0, linear: vec![0.0; n_vars], quadratic: BTreeMap::new() }
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn add_linear(&mut self, a: Var, c: f64) {
        match a {
            Var::Free(i) => self.linear[i] += c,
            Var::Fixed(x) => {
                if x {
                    self.constant += c
                }
            }
        }
    }

    /// Adds `c · x_a · x_b`, folding fixed variables and `x² = x`.
    pub fn add_product(&mut self, a: Var, b: Var, c: f64) {
        match (a, b) {
            (Var::Free(i), Var::Free(j)) if i == j => self.linear[i] += c,
            (Var::Free(i), Var::Free(j)) => *self.quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += c,
            (Var::Free(_), Var::Fixed(x)) => {
                if x {
                    self.add_linear(a, c)
                }
            }
            (Var::Fixed(x), other) => {
                if x {
                    self.add_linear(other, c)
                }
            }
        }
    }

    /// Adds `scale · (1 − Σ x)²`.
    pub fn add_one_hot_penalty(&mut self, vars: &[Var], scale: f64) {
        self.add_constant(scale);
        for &a in vars {
            self.add_linear(a, -2.0 * scale);
            for &b in vars {
                self.add_product(a, b, scale);
            }
        }
    }

    /// Substitutes `x = (1 + s)/2`, returning the Ising problem and the
    /// constant `c` with `f(x) = E_ising(s) + c`.
    pub fn into_ising(self) -> Result<(IsingProblem, f64)> {
        let n = self.linear.len();
        let mut constant = self.constant;
        let mut field = vec![0.0; n];
        for (i, &c) in self.linear.iter().enumerate() {
            constant += 0.5 * c;
            field[i] += 0.5 * c;
        }
        let mut edges = Vec::new();
        for (&(i, j), &q) in &self.quadratic {
            if q == 0.0 {
                continue;
            }
            constant += 0.25 * q;
            field[i] += 0.25 * q;
            field[j] += 0.25 * q;
            edges.push((i, j, -0.25 * q));
        }
        let problem = IsingProblem::new(CouplingMatrix::new(n, edges)?, field)?;
        Ok((problem, constant))
    }
}
