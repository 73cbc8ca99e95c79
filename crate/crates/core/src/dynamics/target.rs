use crate::hamiltonians::{CouplingMatrix, IsingProblem, PottsProblem, XYProblem};

/// Problem handed to a phase-dynamics solver.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Ising(&'a IsingProblem),
    XY(&'a XYProblem),
    Potts(&'a PottsProblem),
}

impl<'a> Target<'a> {
    pub fn couplings(&self) -> &'a CouplingMatrix {
        match self {
            Target::Ising(p) => p.couplings(),
            Target::XY(p) => p.couplings(),
            Target::Potts(p) => p.couplings(),
        }
    }

    pub fn n(&self) -> usize {
        self.couplings().n()
    }
}

impl<'a> From<&'a IsingProblem> for Target<'a> {
    fn from(p: &'a IsingProblem) -> Self {
        Target::Ising(p)
    }
}

impl<'a> From<&'a XYProblem> for Target<'a> {
    fn from(p: &'a XYProblem) -> Self {
        Target::XY(p)
    }
}

impl<'a> From<&'a PottsProblem> for Target<'a> {
    fn from(p: &'a PottsProblem) -> Self {
        Target::Potts(p)
    }
}
