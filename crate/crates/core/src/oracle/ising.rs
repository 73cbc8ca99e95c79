use rayon::prelude::*;

use super::{OracleResult, TIE_TOLERANCE};
use crate::error::{Error, Result};
use crate::hamiltonians::{ising_energy_unchecked, BinaryConfig, IsingProblem};

pub const DEFAULT_MAX_ISING_N: usize = 24;

/// Upper bound on the optimizers kept in an [`OracleResult`].
pub const MAX_LISTED_OPTIMIZERS: usize = 4096;

/// Low bits are walked in Gray-code order inside each block; high bits
/// select the block.
const BLOCK_BITS: usize = 14;

struct Block {
    min: f64,
    count: u64,
    candidates: Vec<u64>,
}

/// Exact ground states of `problem` by enumerating all `2^n` spin
/// configurations.
///
/// Energies are updated incrementally between Gray-code neighbours and the
/// final optimizers are re-evaluated from scratch, so accumulated rounding
/// never decides the answer.
pub fn brute_force_ising(problem: &IsingProblem, max_n: usize) -> Result<OracleResult<BinaryConfig>> {
    let n = problem.n();
    let limit = max_n.min(63);
    if n > limit {
        return Err(Error::SizeLimit { n, max: limit });
    }
    let dense = problem.couplings().to_dense();
    let field = problem.field();
    let scale = 1.0 + dense.iter().map(|w| w.abs()).sum::<f64>() + field.iter().map(|h| h.abs()).sum::<f64>();
    let slack = 1e-12 * scale;

    let low = n.min(BLOCK_BITS);
    let blocks: Vec<Block> =
        (0..1u64 << (n - low)).into_par_iter().map(|b| walk_block(&dense, field, n, low, b << low, slack)).collect();

    let global = blocks.iter().map(|b| b.min).fold(f64::INFINITY, f64::min);
    let mut optimizers: Vec<(f64, BinaryConfig)> = Vec::new();
    let mut degeneracy = 0;
    for b in blocks.iter().filter(|b| b.min <= global + slack) {
        degeneracy += b.count;
        for &bits in &b.candidates {
            if optimizers.len() >= MAX_LISTED_OPTIMIZERS {
                break;
            }
            let cfg = BinaryConfig::from_bits(n, bits);
            optimizers.push((ising_energy_unchecked(problem, cfg.spins()), cfg));
        }
    }
    let best = optimizers.iter().map(|o| o.0).fold(f64::INFINITY, f64::min);
    optimizers.retain(|o| o.0 <= best + TIE_TOLERANCE);
    Ok(OracleResult {
        optimal_energy: best,
        optimizers: optimizers.into_iter().map(|o| o.1).collect(),
        explored: 1u64 << n,
        degeneracy,
    })
}

fn walk_block(dense: &[f64], field: &[f64], n: usize, low: usize, start: u64, slack: f64) -> Block {
    let mut s: Vec<f64> = (0..n).map(|i| if start >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
    // local[i] = Σ_j J_ij s_j
    let mut local: Vec<f64> = (0..n).map(|i| (0..n).map(|j| dense[i * n + j] * s[j]).sum()).collect();
    let mut energy: f64 = (0..n).map(|i| s[i] * (field[i] - 0.5 * local[i])).sum();
    let mut bits = start;
    let mut block = Block { min: energy, count: 1, candidates: vec![bits] };

    for k in 1..1u64 << low {
        let i = k.trailing_zeros() as usize;
        let si = s[i];
        energy += 2.0 * si * (local[i] - field[i]);
        s[i] = -si;
        bits ^= 1 << i;
        let row = &dense[i * n..(i + 1) * n];
        for (l, w) in local.iter_mut().zip(row) {
            *l -= 2.0 * si * w;
        }

        if energy < block.min - slack {
            block.min = energy;
            block.count = 1;
            block.candidates.clear();
            block.candidates.push(bits);
        } else if energy <= block.min + slack {
            block.min = block.min.min(energy);
            block.count += 1;
            if block.candidates.len() < MAX_LISTED_OPTIMIZERS {
                block.candidates.push(bits);
            }
        }
    }
    block
}
