use crate::error::Result;
use crate::hamiltonians::{BinaryConfig, CouplingMatrix, IsingProblem};

/// Folds the external field into couplings to an ancilla spin at index `n`.
///
/// `J_{i,n} = −h_i`; with the ancilla gauge-fixed to `+1` the energy of
/// every configuration is unchanged.
pub fn absorb_field(problem: &IsingProblem) -> Result<IsingProblem> {
    let n = problem.n();
    let mut edges: Vec<_> = problem.couplings().edges().to_vec();
    edges.extend(
        problem
            .field()
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != 0.0)
            .map(|(i, &h)| (i, n, -h)),
    );
    Ok(IsingProblem::without_field(CouplingMatrix::new(n + 1, edges)?))
}

/// Maps a configuration of the absorbed problem back to the original
/// spins, flipping everything if the ancilla came out `-1`.
pub fn gauge_fix_ancilla(config: &BinaryConfig) -> BinaryConfig {
    let s = config.spins();
    let (last, rest) = s.split_last().expect("absorbed configuration contains the ancilla");
    BinaryConfig::new(rest.iter().map(|v| v * last).collect()).expect("spins remain ±1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::ising_energy;

    #[test]
    fn zero_field_adds_decoupled_spin() {
        let j = CouplingMatrix::new(2, [(0, 1, 1.0)]).unwrap();
        let p = IsingProblem::without_field(j);
        let q = absorb_field(&p).unwrap();
        assert_eq!(q.n(), 3);
        assert_eq!(q.couplings().edges(), p.couplings().edges());
        assert!(!q.has_field());
    }

    #[test]
    fn single_spin_field() {
        let p = IsingProblem::new(CouplingMatrix::empty(1).unwrap(), vec![2.0]).unwrap();
        let q = absorb_field(&p).unwrap();
        assert_eq!(q.couplings().weight(0, 1), -2.0);
        let min = (0..4u64)
            .map(|b| ising_energy(&q, &BinaryConfig::from_bits(2, b)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, -2.0);
    }

    #[test]
    fn gauge_fix_restores_energy() {
        let p = IsingProblem::new(CouplingMatrix::new(2, [(0, 1, 0.5)]).unwrap(), vec![1.0, -0.25]).unwrap();
        let q = absorb_field(&p).unwrap();
        for bits in 0..8u64 {
            let s = BinaryConfig::from_bits(3, bits);
            let orig = gauge_fix_ancilla(&s);
            let e1 = ising_energy(&q, &s).unwrap();
            let e0 = ising_energy(&p, &orig).unwrap();
            assert!((e1 - e0).abs() < 1e-12);
        }
    }
}
