use std::f64::consts::TAU;

use rayon::prelude::*;

use super::{OracleResult, TIE_TOLERANCE};
use crate::dynamics::xy_gradient;
use crate::error::{Error, Result};
use crate::hamiltonians::{xy_energy_raw, PhaseConfig, PottsProblem, XYProblem};

pub const MAX_XY_N: usize = 6;

/// Upper bound on `n_states^(n−1)` for the Potts enumeration.
pub const MAX_POTTS_CONFIGS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XyOracleOptions {
    /// Grid points per phase, at least 8.
    pub bins: usize,
    /// Polish the best grid points by gradient descent.
    pub refine: bool,
}

impl Default for XyOracleOptions {
    fn default() -> Self {
        XyOracleOptions { bins: 64, refine: true }
    }
}

/// Grid points kept for refinement.
const REFINE_CANDIDATES: usize = 8;

/// Best XY energy over a `bins^(n−1)` phase grid with `θ_0 = 0`, optionally
/// refined by gradient descent until the gradient norm is below `1e-10`.
///
/// The result is certified only as the best refined grid value. The single
/// optimizer returned is gauge-fixed so that its first phase is zero.
pub fn brute_force_xy(problem: &XYProblem, options: XyOracleOptions) -> Result<OracleResult<PhaseConfig>> {
    let n = problem.n();
    if n > MAX_XY_N {
        return Err(Error::SizeLimit { n, max: MAX_XY_N });
    }
    if options.bins < 8 {
        return Err(Error::invalid("bins must be at least 8"));
    }
    let keep = if options.refine { REFINE_CANDIDATES } else { 1 };
    let (grid, explored) = grid_search(problem.couplings().edges(), n, options.bins, keep);
    let step = TAU / options.bins as f64;
    let edges = problem.couplings().edges();

    let mut best: Option<(f64, Vec<f64>)> = None;
    for (_, ks) in grid {
        let mut theta: Vec<f64> = ks.iter().map(|&k| k as f64 * step).collect();
        if options.refine {
            refine_xy(problem, &mut theta);
        }
        let e = xy_energy_raw(edges, &theta);
        if best.as_ref().is_none_or(|b| e < b.0) {
            best = Some((e, theta));
        }
    }
    let (energy, theta) = best.expect("grid is never empty");
    let config = PhaseConfig::new(theta.iter().map(|t| t - theta[0]).collect())?;
    let energy = energy.min(xy_energy_raw(edges, config.phases()));
    Ok(OracleResult { optimal_energy: energy, optimizers: vec![config], explored, degeneracy: 1 })
}

/// Gradient descent with backtracking on the XY energy, stopping at
/// gradient norm `1e-10` or after a fixed iteration budget. Never increases
/// the energy.
pub fn refine_xy(problem: &XYProblem, theta: &mut [f64]) {
    let edges = problem.couplings().edges();
    let mut energy = xy_energy_raw(edges, theta);
    let mut lr = 0.5;
    let mut trial = theta.to_vec();
    for _ in 0..20_000 {
        let grad = xy_gradient(problem, theta);
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2.sqrt() < 1e-10 {
            break;
        }
        let mut accepted = false;
        while lr > 1e-12 {
            for ((t, th), g) in trial.iter_mut().zip(theta.iter()).zip(&grad) {
                *t = th - lr * g;
            }
            let e = xy_energy_raw(edges, &trial);
            // Armijo condition
            if e <= energy - 1e-4 * lr * g2 {
                theta.copy_from_slice(&trial);
                energy = e;
                accepted = true;
                lr *= 2.0;
                break;
            }
            lr *= 0.5;
        }
        if !accepted {
            break;
        }
    }
}

/// Exact Potts ground states over `n_states^(n−1)` configurations with the
/// first site pinned to state 0. Every optimum up to global rotation is
/// listed once.
pub fn brute_force_potts(problem: &PottsProblem) -> Result<OracleResult<PhaseConfig>> {
    let n = problem.n();
    let k = problem.n_states();
    let total = (k as u64).checked_pow(n as u32 - 1).filter(|&t| t <= MAX_POTTS_CONFIGS);
    if total.is_none() {
        let max = (1..=n).take_while(|&m| (k as u64).checked_pow(m as u32 - 1).is_some_and(|t| t <= MAX_POTTS_CONFIGS)).last();
        return Err(Error::SizeLimit { n, max: max.unwrap_or(1) });
    }
    let edges = problem.couplings().edges();
    let (grid, explored) = grid_search(edges, n, k, super::MAX_LISTED_OPTIMIZERS);
    let step = TAU / k as f64;
    let mut evaluated: Vec<(f64, PhaseConfig)> = grid
        .into_iter()
        .map(|(_, ks)| {
            let c = PhaseConfig::new(ks.iter().map(|&s| s as f64 * step).collect()).expect("finite phases");
            (xy_energy_raw(edges, c.phases()), c)
        })
        .collect();
    let best = evaluated.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
    evaluated.retain(|e| e.0 <= best + TIE_TOLERANCE);
    Ok(OracleResult {
        optimal_energy: best,
        degeneracy: evaluated.len() as u64,
        optimizers: evaluated.into_iter().map(|e| e.1).collect(),
        explored,
    })
}

type Grid = Vec<(f64, Vec<usize>)>;

/// Lowest `keep` grid points, ascending by energy, and the number explored.
fn grid_search(edges: &[(usize, usize, f64)], n: usize, bins: usize, keep: usize) -> (Grid, u64) {
    let cos: Vec<f64> = (0..bins).map(|d| (TAU * d as f64 / bins as f64).cos()).collect();
    let mut lower: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(i, j, w) in edges {
        lower[j].push((i, w));
    }
    let explored = (bins as u64).pow(n as u32 - 1);
    if n == 1 {
        return (vec![(0.0, vec![0])], explored);
    }
    let search = Search { cos: &cos, lower: &lower, bins, keep };
    let parts: Vec<Grid> = (0..bins)
        .into_par_iter()
        .map(|k1| {
            let mut ks = vec![0; n];
            ks[1] = k1;
            let mut top = Vec::with_capacity(keep + 1);
            let e = search.site_energy(&ks, 1);
            search.descend(&mut ks, 2, e, &mut top);
            top
        })
        .collect();
    let mut all: Grid = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    all.truncate(keep);
    (all, explored)
}

struct Search<'a> {
    cos: &'a [f64],
    lower: &'a [Vec<(usize, f64)>],
    bins: usize,
    keep: usize,
}

impl Search<'_> {
    fn site_energy(&self, ks: &[usize], m: usize) -> f64 {
        self.lower[m].iter().map(|&(j, w)| -w * self.cos[(ks[m] + self.bins - ks[j]) % self.bins]).sum()
    }

    fn descend(&self, ks: &mut Vec<usize>, m: usize, partial: f64, top: &mut Grid) {
        if m == ks.len() {
            insert_top(top, self.keep, partial, ks);
            return;
        }
        for k in 0..self.bins {
            ks[m] = k;
            let e = partial + self.site_energy(ks, m);
            self.descend(ks, m + 1, e, top);
        }
    }
}

fn insert_top(top: &mut Grid, keep: usize, energy: f64, ks: &[usize]) {
    if top.len() == keep && energy >= top[keep - 1].0 {
        return;
    }
    let pos = top.partition_point(|t| t.0 <= energy);
    top.insert(pos, (energy, ks.to_vec()));
    top.truncate(keep);
}
