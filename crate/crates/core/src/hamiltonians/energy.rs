use num_complex::Complex64;

use super::{BinaryConfig, HermitianXYProblem, HoboProblem, IsingProblem, PhaseConfig, XYProblem};
use crate::error::{check_len, Error, Result};

/// `−Σ_{i<j} J_ij s_i s_j + Σ_i h_i s_i`.
pub fn ising_energy(problem: &IsingProblem, config: &BinaryConfig) -> Result<f64> {
    check_len(problem.n(), config.len())?;
    Ok(ising_energy_unchecked(problem, config.spins()))
}

pub(crate) fn ising_energy_unchecked(problem: &IsingProblem, s: &[i8]) -> f64 {
    let mut pair = 0.0;
    for &(i, j, w) in problem.couplings().edges() {
        pair += w * f64::from(s[i] * s[j]);
    }
    let field: f64 = problem.field().iter().zip(s).map(|(h, &si)| h * f64::from(si)).sum();
    -pair + field
}

/// `−Σ_terms Q · Π s_i`.
pub fn hobo_energy(problem: &HoboProblem, config: &BinaryConfig) -> Result<f64> {
    check_len(problem.n(), config.len())?;
    let s = config.spins();
    let sum: f64 = problem
        .terms()
        .iter()
        .map(|(idx, q)| {
            let sign: i8 = idx.iter().map(|&i| s[i]).product();
            q * f64::from(sign)
        })
        .sum();
    Ok(-sum)
}

/// `−Σ_{i<j} J_ij cos(θ_i − θ_j)`.
pub fn xy_energy(problem: &XYProblem, config: &PhaseConfig) -> Result<f64> {
    check_len(problem.n(), config.len())?;
    Ok(xy_energy_raw(problem.couplings().edges(), config.phases()))
}

pub(crate) fn xy_energy_raw(edges: &[(usize, usize, f64)], theta: &[f64]) -> f64 {
    let mut e = 0.0;
    for &(i, j, w) in edges {
        e -= w * (theta[i] - theta[j]).cos();
    }
    e
}

/// Full complex value of `u† M u`, `u_i = exp(iθ_i)`.
pub fn hermitian_xy_form(problem: &HermitianXYProblem, config: &PhaseConfig) -> Result<Complex64> {
    let n = problem.n();
    check_len(n, config.len())?;
    let u: Vec<Complex64> = config.phases().iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (i, ui) in u.iter().enumerate() {
        let row: Complex64 = u.iter().enumerate().map(|(j, uj)| problem.entry(i, j) * uj).sum();
        total += ui.conj() * row;
    }
    Ok(total)
}

/// Real value of `u† M u`.
///
/// The imaginary part vanishes for Hermitian `M`; a residual above `1e-9`
/// is reported as an error.
pub fn hermitian_xy_energy(problem: &HermitianXYProblem, config: &PhaseConfig) -> Result<f64> {
    let form = hermitian_xy_form(problem, config)?;
    if form.im.abs() >= 1e-9 {
        return Err(Error::Data(format!("quadratic form has imaginary part {}", form.im)));
    }
    Ok(form.re)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use super::*;
    use crate::hamiltonians::CouplingMatrix;

    fn pair(w: f64) -> CouplingMatrix {
        CouplingMatrix::new(2, [(0, 1, w)]).unwrap()
    }

    #[test]
    fn ising_pair_values() {
        let p = IsingProblem::without_field(pair(1.0));
        let up = BinaryConfig::new(vec![1, 1]).unwrap();
        let mixed = BinaryConfig::new(vec![1, -1]).unwrap();
        assert_eq!(ising_energy(&p, &up).unwrap(), -1.0);
        assert_eq!(ising_energy(&p, &mixed).unwrap(), 1.0);
        assert!(matches!(
            ising_energy(&p, &BinaryConfig::all_up(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ising_field_sign() {
        let p = IsingProblem::new(CouplingMatrix::empty(1).unwrap(), vec![2.0]).unwrap();
        assert_eq!(ising_energy(&p, &BinaryConfig::new(vec![-1]).unwrap()).unwrap(), -2.0);
    }

    #[test]
    fn hobo_triple_term() {
        let p = HoboProblem::new(3, vec![(vec![0, 1, 2], 1.0)]).unwrap();
        assert_eq!(hobo_energy(&p, &BinaryConfig::all_up(3)).unwrap(), -1.0);
        let c = BinaryConfig::new(vec![1, 1, -1]).unwrap();
        assert_eq!(hobo_energy(&p, &c).unwrap(), 1.0);
    }

    #[test]
    fn xy_pair_values() {
        let p = XYProblem::new(pair(1.0));
        assert_eq!(xy_energy(&p, &PhaseConfig::new(vec![0.0, 0.0]).unwrap()).unwrap(), -1.0);
        assert_eq!(xy_energy(&p, &PhaseConfig::new(vec![0.0, PI]).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn xy_triangle_frustration() {
        let tri = CouplingMatrix::new(3, [(0, 1, -1.0), (1, 2, -1.0), (0, 2, -1.0)]).unwrap();
        let p = XYProblem::new(tri);
        let c = PhaseConfig::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0]).unwrap();
        assert!((xy_energy(&p, &c).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn hermitian_identity_and_zero() {
        let n = 3;
        let mut eye = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            eye[i * n + i] = Complex64::new(1.0, 0.0);
        }
        let c = PhaseConfig::new(vec![0.3, 1.7, 4.0]).unwrap();
        let p = HermitianXYProblem::new(n, eye).unwrap();
        assert!((hermitian_xy_energy(&p, &c).unwrap() - 3.0).abs() < 1e-14);
        let zero = HermitianXYProblem::new(n, vec![Complex64::new(0.0, 0.0); n * n]).unwrap();
        assert_eq!(hermitian_xy_energy(&zero, &c).unwrap(), 0.0);
    }
}
