use super::{OracleResult, TIE_TOLERANCE};
use crate::error::{Error, Result};
use crate::mappings::TspInstance;

pub const MAX_TSP_CITIES: usize = 10;

/// Cheapest tours by enumeration.
///
/// Tours start at city 0. Symmetric instances enumerate each undirected
/// cycle once, `(n−1)!/2` tours, listing it in the orientation whose second
/// city is smaller than its last. Asymmetric instances enumerate all
/// `(n−1)!` directed tours. Tours using a missing edge are skipped.
pub fn brute_force_tsp(instance: &TspInstance) -> Result<OracleResult<Vec<usize>>> {
    let n = instance.n_cities();
    if n > MAX_TSP_CITIES {
        return Err(Error::SizeLimit { n, max: MAX_TSP_CITIES });
    }
    let symmetric = instance.is_symmetric();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut tours: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut explored = 0u64;
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |perm| {
        if symmetric && perm.len() >= 2 && perm[0] > perm[perm.len() - 1] {
            return;
        }
        explored += 1;
        let route: Vec<usize> = std::iter::once(0).chain(perm.iter().copied()).collect();
        if let Some(cost) = instance.tour_cost(&route) {
            if cost < best - TIE_TOLERANCE {
                best = cost;
                tours.retain(|t| t.0 <= best + TIE_TOLERANCE);
            }
            if cost <= best + TIE_TOLERANCE {
                best = best.min(cost);
                tours.push((cost, route));
            }
        }
    });
    if tours.is_empty() {
        return Err(Error::Infeasible("no Hamiltonian cycle uses only the given edges".into()));
    }
    tours.retain(|t| t.0 <= best + TIE_TOLERANCE);
    Ok(OracleResult {
        optimal_energy: best,
        degeneracy: tours.len() as u64,
        optimizers: tours.into_iter().map(|t| t.1).collect(),
        explored,
    })
}

/// Visits every permutation of `items[k..]` by recursive swapping.
fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k + 1 >= items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
