use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CouplingMatrix;
use crate::error::{Error, Result};

/// Ising / QUBO objective `−Σ_{i<j} J_ij s_i s_j + Σ_i h_i s_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsingRepr", into = "IsingRepr")]
pub struct IsingProblem {
    couplings: CouplingMatrix,
    field: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct IsingRepr {
    couplings: CouplingMatrix,
    field: Vec<f64>,
}

impl TryFrom<IsingRepr> for IsingProblem {
    type Error = Error;
    fn try_from(r: IsingRepr) -> Result<Self> {
        IsingProblem::new(r.couplings, r.field)
    }
}

impl From<IsingProblem> for IsingRepr {
    fn from(p: IsingProblem) -> Self {
        IsingRepr { couplings: p.couplings, field: p.field }
    }
}

impl IsingProblem {
    pub fn new(couplings: CouplingMatrix, field: Vec<f64>) -> Result<Self> {
        if field.len() != couplings.n() {
            return Err(Error::DimensionMismatch { expected: couplings.n(), got: field.len() });
        }
        if field.iter().any(|h| !h.is_finite()) {
            return Err(Error::Data("non-finite field entry".into()));
        }
        Ok(IsingProblem { couplings, field })
    }

    /// Problem with zero external field.
    pub fn without_field(couplings: CouplingMatrix) -> Self {
        let n = couplings.n();
        IsingProblem { couplings, field: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.couplings.n()
    }

    pub fn couplings(&self) -> &CouplingMatrix {
        &self.couplings
    }

    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn has_field(&self) -> bool {
        self.field.iter().any(|&h| h != 0.0)
    }
}

/// Higher-order binary objective `−Σ_terms Q · Π s_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoboProblem {
    n: usize,
    terms: Vec<(Vec<usize>, f64)>,
}

impl HoboProblem {
    /// Terms must use strictly increasing indices, be finite and unique.
    pub fn new(n: usize, terms: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("HOBO problem needs at least one spin"));
        }
        let mut seen = BTreeSet::new();
        for (idx, q) in &terms {
            if idx.is_empty() {
                return Err(Error::invalid("empty HOBO term"));
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("term {idx:?} is not strictly increasing")));
            }
            if idx.iter().any(|&i| i >= n) {
                return Err(Error::invalid(format!("term {idx:?} out of range for n = {n}")));
            }
            if !q.is_finite() {
                return Err(Error::invalid(format!("term {idx:?} has non-finite coefficient")));
            }
            if !seen.insert(idx.clone()) {
                return Err(Error::invalid(format!("duplicate term {idx:?}")));
            }
        }
        Ok(HoboProblem { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Vec<usize>, f64)] {
        &self.terms
    }
}

/// XY objective `−Σ_{i<j} J_ij cos(θ_i − θ_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XYProblem {
    couplings: CouplingMatrix,
}

impl XYProblem {
    pub fn new(couplings: CouplingMatrix) -> Self {
        XYProblem { couplings }
    }

    pub fn n(&self) -> usize {
        self.couplings.n()
    }

    pub fn couplings(&self) -> &CouplingMatrix {
        &self.couplings
    }
}

/// Quadratic form `u† M u` over unit-modulus `u` with Hermitian `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianXYProblem {
    n: usize,
    /// Row-major entries.
    m: Vec<Complex64>,
}

pub(crate) const HERMITIAN_TOLERANCE: f64 = 1e-12;

impl HermitianXYProblem {
    pub fn new(n: usize, m: Vec<Complex64>) -> Result<Self> {
        if m.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: m.len() });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("non-finite matrix entry"));
        }
        for i in 0..n {
            for j in i..n {
                let d = m[i * n + j] - m[j * n + i].conj();
                if d.norm() > HERMITIAN_TOLERANCE {
                    return Err(Error::invalid(format!("matrix is not Hermitian at ({i}, {j})")));
                }
            }
        }
        Ok(HermitianXYProblem { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.m
    }
}

/// XY couplings restricted to `n_states` equally spaced phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PottsProblem {
    couplings: CouplingMatrix,
    n_states: usize,
}

impl PottsProblem {
    pub fn new(couplings: CouplingMatrix, n_states: usize) -> Result<Self> {
        if n_states < 2 {
            return Err(Error::invalid("Potts model needs at least 2 states"));
        }
        Ok(PottsProblem { couplings, n_states })
    }

    pub fn n(&self) -> usize {
        self.couplings.n()
    }

    pub fn couplings(&self) -> &CouplingMatrix {
        &self.couplings
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ising_field_length_checked() {
        let j = CouplingMatrix::new(2, [(0, 1, 1.0)]).unwrap();
        assert!(IsingProblem::new(j.clone(), vec![0.0]).is_err());
        assert!(!IsingProblem::without_field(j).has_field());
    }

    #[test]
    fn hobo_canonical_form() {
        assert!(HoboProblem::new(3, vec![(vec![0, 1, 2], 1.0)]).is_ok());
        assert!(HoboProblem::new(3, vec![(vec![1, 0], 1.0)]).is_err());
        assert!(HoboProblem::new(3, vec![(vec![0, 0], 1.0)]).is_err());
        assert!(HoboProblem::new(3, vec![(vec![0, 3], 1.0)]).is_err());
        assert!(HoboProblem::new(3, vec![(vec![0], 1.0), (vec![0], 2.0)]).is_err());
    }

    #[test]
    fn hermitian_check() {
        let z = Complex64::new;
        let ok = vec![z(1.0, 0.0), z(0.5, 0.5), z(0.5, -0.5), z(2.0, 0.0)];
        assert!(HermitianXYProblem::new(2, ok).is_ok());
        let bad = vec![z(1.0, 0.0), z(0.5, 0.5), z(0.5, 0.5), z(2.0, 0.0)];
        assert!(HermitianXYProblem::new(2, bad).is_err());
    }

    #[test]
    fn potts_needs_two_states() {
        let j = CouplingMatrix::empty(2).unwrap();
        assert!(PottsProblem::new(j.clone(), 1).is_err());
        assert!(PottsProblem::new(j, 2).is_ok());
    }
}
