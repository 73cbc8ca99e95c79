use serde::{Deserialize, Serialize};

use super::qubo::{Qubo, Var};
use crate::error::{check_len, Error, Result};
use crate::hamiltonians::{BinaryConfig, IsingProblem};

/// Directed weighted city graph with the penalty constants of the
/// one-hot encoding.
///
/// `weights[u·n + v]` is `None` when the pair `(u, v)` is not an allowed
/// route step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    n_cities: usize,
    weights: Vec<Option<f64>>,
    penalty_a: f64,
    penalty_b: f64,
}

impl TspInstance {
    /// Validates the weights. When `penalties` is `None` the defaults
    /// `B = 1`, `A = 2·B·n·max(w) + 1` are used.
    pub fn new(n_cities: usize, weights: Vec<Option<f64>>, penalties: Option<(f64, f64)>) -> Result<Self> {
        if n_cities < 3 {
            return Err(Error::invalid(format!("TSP needs at least 3 cities, got {n_cities}")));
        }
        check_len(n_cities * n_cities, weights.len())?;
        let mut weights = weights;
        for u in 0..n_cities {
            weights[u * n_cities + u] = None;
        }
        if let Some(w) = weights.iter().flatten().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::invalid(format!("TSP weight {w} must be finite and non-negative")));
        }
        let max_w = weights.iter().flatten().copied().fold(0.0, f64::max);
        let (a, b) = penalties.unwrap_or((2.0 * n_cities as f64 * max_w + 1.0, 1.0));
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::invalid("penalty B must be positive"));
        }
        if !(a.is_finite() && a > b * max_w && a > 0.0) {
            return Err(Error::invalid(format!("penalty A = {a} must exceed B·max(w) = {}", b * max_w)));
        }
        Ok(TspInstance { n_cities, weights, penalty_a: a, penalty_b: b })
    }

    /// Complete graph from a dense row-major distance matrix.
    pub fn complete(n_cities: usize, dense: &[f64]) -> Result<Self> {
        Self::new(n_cities, dense.iter().map(|&w| Some(w)).collect(), None)
    }

    pub fn n_cities(&self) -> usize {
        self.n_cities
    }

    pub fn penalty_a(&self) -> f64 {
        self.penalty_a
    }

    pub fn penalty_b(&self) -> f64 {
        self.penalty_b
    }

    pub fn weights(&self) -> &[Option<f64>] {
        &self.weights
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.weights[u * self.n_cities + v]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().flatten().copied().fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n_cities;
        (0..n).all(|u| (0..n).all(|v| self.weight(u, v) == self.weight(v, u)))
    }

    /// Cost of the closed tour, `None` if it uses a missing pair.
    pub fn tour_cost(&self, route: &[usize]) -> Option<f64> {
        let n = route.len();
        (0..n).map(|i| self.weight(route[i], route[(i + 1) % n])).sum()
    }
}

/// Ising form of a TSP instance together with the bookkeeping needed to
/// decode it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspEncoding {
    pub problem: IsingProblem,
    /// `H_TSP(x) = E_ising(s) + offset`.
    pub offset: f64,
    pub n_cities: usize,
    pub fix_first_city: bool,
}

impl TspEncoding {
    pub fn n_spins(&self) -> usize {
        encoding_size(self.n_cities, self.fix_first_city)
    }
}

fn encoding_size(n: usize, fixed: bool) -> usize {
    if fixed {
        (n - 1) * (n - 1)
    } else {
        n * n
    }
}

/// Variable for "city `v` at position `i`".
fn variable(n: usize, fixed: bool, v: usize, i: usize) -> Var {
    if !fixed {
        return Var::Free(v * n + i);
    }
    match (v, i) {
        (0, 0) => Var::Fixed(true),
        (0, _) | (_, 0) => Var::Fixed(false),
        _ => Var::Free((v - 1) * (n - 1) + (i - 1)),
    }
}

/// Builds the one-hot TSP Hamiltonian and converts it to spins.
///
/// Positions wrap cyclically, so the encoded object is a closed tour. With
/// `fix_first_city` city 0 is pinned to position 0 and the encoding uses
/// `(N−1)²` spins.
pub fn tsp_to_ising(instance: &TspInstance, fix_first_city: bool) -> Result<TspEncoding> {
    let n = instance.n_cities;
    if n < 3 {
        return Err(Error::invalid("TSP needs at least 3 cities"));
    }
    let var = |v, i| variable(n, fix_first_city, v, i);
    let a = instance.penalty_a;
    let b = instance.penalty_b;
    let mut q = Qubo::new(encoding_size(n, fix_first_city));

    for i in 0..n {
        let column: Vec<Var> = (0..n).map(|v| var(v, i)).collect();
        q.add_one_hot_penalty(&column, a);
    }
    for v in 0..n {
        let row: Vec<Var> = (0..n).map(|i| var(v, i)).collect();
        q.add_one_hot_penalty(&row, a);
    }
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let coeff = match instance.weight(u, v) {
                Some(w) => b * w,
                None => a,
            };
            if coeff == 0.0 {
                continue;
            }
            for i in 0..n {
                q.add_product(var(u, i), var(v, (i + 1) % n), coeff);
            }
        }
    }
    let (problem, offset) = q.into_ising()?;
    Ok(TspEncoding { problem, offset, n_cities: n, fix_first_city })
}

/// Counts of broken constraints in a decoded assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TspViolations {
    /// Cities not assigned to exactly one position.
    pub city_rows: usize,
    /// Positions not holding exactly one city.
    pub position_columns: usize,
    /// Consecutive route steps outside the allowed edge set.
    pub missing_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspDecodeResult {
    pub valid: bool,
    pub route: Option<Vec<usize>>,
    pub tour_cost: Option<f64>,
    pub violations: TspViolations,
}

/// Reconstructs `x_{v,i}` from spins and checks the tour constraints.
pub fn tsp_decode(instance: &TspInstance, config: &BinaryConfig, fix_first_city: bool) -> Result<TspDecodeResult> {
    let n = instance.n_cities;
    check_len(encoding_size(n, fix_first_city), config.len())?;
    let s = config.spins();
    let x = |v: usize, i: usize| match variable(n, fix_first_city, v, i) {
        Var::Free(k) => s[k] > 0,
        Var::Fixed(b) => b,
    };
    let mut violations = TspViolations::default();
    for v in 0..n {
        if (0..n).filter(|&i| x(v, i)).count() != 1 {
            violations.city_rows += 1;
        }
    }
    let mut route = Vec::with_capacity(n);
    for i in 0..n {
        let cities: Vec<usize> = (0..n).filter(|&v| x(v, i)).collect();
        if cities.len() == 1 {
            route.push(cities[0]);
        } else {
            violations.position_columns += 1;
        }
    }
    if violations.city_rows > 0 || violations.position_columns > 0 {
        return Ok(TspDecodeResult { valid: false, route: None, tour_cost: None, violations });
    }
    violations.missing_edges = (0..n).filter(|&i| instance.weight(route[i], route[(i + 1) % n]).is_none()).count();
    if violations.missing_edges > 0 {
        return Ok(TspDecodeResult { valid: false, route: None, tour_cost: None, violations });
    }
    let cost = instance.tour_cost(&route);
    Ok(TspDecodeResult { valid: true, route: Some(route), tour_cost: cost, violations })
}

/// Spin configuration encoding `route` (which must start at city 0 when
/// `fix_first_city` is set).
pub fn tsp_encode_route(instance: &TspInstance, route: &[usize], fix_first_city: bool) -> Result<BinaryConfig> {
    let n = instance.n_cities;
    check_len(n, route.len())?;
    let mut seen = vec![false; n];
    for &c in route {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(Error::invalid(format!("route {route:?} is not a permutation")));
        }
    }
    if fix_first_city && route[0] != 0 {
        return Err(Error::invalid("route must start at city 0 when the first city is fixed"));
    }
    let mut spins = vec![-1i8; encoding_size(n, fix_first_city)];
    for (i, &v) in route.iter().enumerate() {
        if let Var::Free(k) = variable(n, fix_first_city, v, i) {
            spins[k] = 1;
        }
    }
    BinaryConfig::new(spins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::ising_energy;

    fn unit_triangle() -> TspInstance {
        TspInstance::complete(3, &[0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn rejects_small_or_bad_instances() {
        assert!(TspInstance::complete(2, &[0.0, 1.0, 1.0, 0.0]).is_err());
        assert!(TspInstance::complete(3, &[0.0, -1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]).is_err());
        let w = vec![Some(1.0); 9];
        assert!(TspInstance::new(3, w.clone(), Some((0.5, 1.0))).is_err());
        let t = TspInstance::new(3, w, None).unwrap();
        assert_eq!(t.penalty_b(), 1.0);
        assert_eq!(t.penalty_a(), 7.0);
    }

    #[test]
    fn identity_assignment_decodes() {
        let t = unit_triangle();
        let s = tsp_encode_route(&t, &[0, 1, 2], false).unwrap();
        let d = tsp_decode(&t, &s, false).unwrap();
        assert!(d.valid);
        assert_eq!(d.route, Some(vec![0, 1, 2]));
        assert_eq!(d.tour_cost, Some(3.0));
    }

    #[test]
    fn empty_assignment_is_invalid() {
        let t = unit_triangle();
        let d = tsp_decode(&t, &BinaryConfig::new(vec![-1; 9]).unwrap(), false).unwrap();
        assert!(!d.valid);
        assert_eq!(d.violations.city_rows, 3);
        assert_eq!(d.violations.position_columns, 3);
    }

    #[test]
    fn valid_tour_energy_is_b_times_cost() {
        let w = [0.0, 2.0, 3.0, 5.0, 2.0, 0.0, 4.0, 1.0, 3.0, 4.0, 0.0, 6.0, 5.0, 1.0, 6.0, 0.0];
        let t = TspInstance::complete(4, &w).unwrap();
        for fixed in [false, true] {
            let enc = tsp_to_ising(&t, fixed).unwrap();
            assert_eq!(enc.problem.n(), enc.n_spins());
            for route in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
                let s = tsp_encode_route(&t, &route, fixed).unwrap();
                let h = ising_energy(&enc.problem, &s).unwrap() + enc.offset;
                assert!((h - t.tour_cost(&route).unwrap()).abs() < 1e-9, "{route:?}: {h}");
            }
        }
    }
}
