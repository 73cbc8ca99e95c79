//! Benchmark orchestration: restarts per (instance, solver), optional
//! oracle ground truth and success probabilities.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::document::{load_problem, Problem, ProblemType};
use super::generate::{gen_random_couplings, WeightDistribution};
use super::solve::{solve_restarts, SolveConfig, SolverKind};
use crate::error::{Error, Result};
use crate::hamiltonians::{IsingProblem, PottsProblem, XYProblem};
use crate::integrator::derive_seed;
use crate::oracle::{
    brute_force_ising, brute_force_potts, brute_force_xy, success_fraction, XyOracleOptions, DEFAULT_MAX_ISING_N,
    MAX_POTTS_CONFIGS, MAX_XY_N,
};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchInstance {
    pub id: String,
    pub problem: Problem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance_id: String,
    pub solver: SolverKind,
    pub n: usize,
    pub restarts: usize,
    /// Seed of this row; restart `r` uses stream `r`.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_probability: Option<f64>,
    /// `None` when every restart diverged.
    pub best_energy: Option<f64>,
    pub best_restart: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_energy: Option<f64>,
    pub converged: usize,
    pub diverged: usize,
    pub median_wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub solver: SolverKind,
    pub rows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_success_probability: Option<f64>,
    /// Rows where at least one restart reached the oracle energy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances_solved: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub version: String,
    pub base_seed: u64,
    pub restarts: usize,
    pub success_tolerance: f64,
    pub with_oracle: bool,
    /// Sorted by instance id, then solver.
    pub rows: Vec<BenchRow>,
    pub summary: Vec<SolverSummary>,
    pub config: SolveConfig,
}

impl BenchmarkReport {
    /// Zeroes every wall-clock field so reports can be compared byte for byte.
    pub fn strip_timing(&mut self) {
        for r in &mut self.rows {
            r.median_wall_time = 0.0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchOptions {
    pub restarts: usize,
    pub base_seed: u64,
    pub with_oracle: bool,
    pub success_tolerance: f64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions { restarts: 10, base_seed: 0, with_oracle: false, success_tolerance: 1e-6 }
    }
}

/// Ground-state energy from the matching exhaustive oracle.
pub fn oracle_energy(problem: &Problem) -> Result<f64> {
    Ok(match problem {
        Problem::Ising(p) => brute_force_ising(p, DEFAULT_MAX_ISING_N)?.optimal_energy,
        Problem::XY(p) => brute_force_xy(p, XyOracleOptions::default())?.optimal_energy,
        Problem::Potts(p) => brute_force_potts(p)?.optimal_energy,
        Problem::HermitianXY(_) => return Err(Error::invalid("no oracle for Hermitian XY problems")),
    })
}

fn check_oracle_limits(problem: &Problem) -> Result<()> {
    let n = problem.n();
    match problem {
        Problem::Ising(_) if n > DEFAULT_MAX_ISING_N => Err(Error::SizeLimit { n, max: DEFAULT_MAX_ISING_N }),
        Problem::XY(_) if n > MAX_XY_N => Err(Error::SizeLimit { n, max: MAX_XY_N }),
        Problem::Potts(p) if (p.n_states() as f64).powi(n as i32 - 1) > MAX_POTTS_CONFIGS as f64 => {
            let max = 1 + (MAX_POTTS_CONFIGS as f64).log(p.n_states() as f64).floor() as usize;
            Err(Error::SizeLimit { n, max })
        }
        Problem::HermitianXY(_) => Err(Error::invalid("no oracle for Hermitian XY problems")),
        _ => Ok(()),
    }
}

/// Runs every (instance, solver) pair.
///
/// Row seeds are derived from `base_seed` and the pair's position, so the
/// report is a pure function of the inputs. Oracle size limits are checked
/// for all instances before any solver runs.
pub fn run_benchmark(
    instances: &[BenchInstance],
    solvers: &[SolverKind],
    config: &SolveConfig,
    options: &BenchOptions,
) -> Result<BenchmarkReport> {
    if instances.is_empty() || solvers.is_empty() {
        return Err(Error::invalid("benchmark needs at least one instance and one solver"));
    }
    if options.with_oracle {
        for inst in instances {
            check_oracle_limits(&inst.problem)?;
        }
    }
    let mut rows = Vec::with_capacity(instances.len() * solvers.len());
    for (ii, inst) in instances.iter().enumerate() {
        let oracle = if options.with_oracle { Some(oracle_energy(&inst.problem)?) } else { None };
        for (si, &solver) in solvers.iter().enumerate() {
            let seed = derive_seed(options.base_seed, &[ii as u64, si as u64]);
            let report = solve_restarts(&inst.problem, solver, config, seed, options.restarts)?;
            let energies: Vec<f64> = report.results().map(|r| r.best_energy).collect();
            let mut times: Vec<f64> = report.results().map(|r| r.wall_time).collect();
            rows.push(BenchRow {
                instance_id: inst.id.clone(),
                solver,
                n: inst.problem.n(),
                restarts: options.restarts,
                seed,
                // diverged restarts count as failures
                success_probability: oracle.map(|o| {
                    success_fraction(energies.iter().copied(), o, options.success_tolerance) * energies.len() as f64
                        / options.restarts as f64
                }),
                best_energy: report.best.as_ref().map(|b| b.energy),
                best_restart: report.best.as_ref().map(|b| b.restart),
                oracle_energy: oracle,
                converged: report.converged,
                diverged: report.diverged,
                median_wall_time: median(&mut times),
            });
        }
    }
    rows.sort_by(|a, b| a.instance_id.cmp(&b.instance_id).then(a.solver.cmp(&b.solver)));

    let mut summary: Vec<SolverSummary> = Vec::new();
    let mut kinds: Vec<SolverKind> = solvers.to_vec();
    kinds.sort();
    kinds.dedup();
    for solver in kinds {
        let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.solver == solver).collect();
        let probs: Vec<f64> = mine.iter().filter_map(|r| r.success_probability).collect();
        let with_oracle = !probs.is_empty();
        summary.push(SolverSummary {
            solver,
            rows: mine.len(),
            mean_success_probability: with_oracle.then(|| probs.iter().sum::<f64>() / probs.len() as f64),
            instances_solved: with_oracle.then(|| probs.iter().filter(|&&p| p > 0.0).count()),
        });
    }

    Ok(BenchmarkReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        base_seed: options.base_seed,
        restarts: options.restarts,
        success_tolerance: options.success_tolerance,
        with_oracle: options.with_oracle,
        rows,
        summary,
        config: config.clone(),
    })
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Parameters of a generated benchmark instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateSpec {
    pub n: usize,
    #[serde(default = "full_density")]
    pub density: f64,
    #[serde(default = "default_dist")]
    pub dist: WeightDistribution,
    pub seed: u64,
}

fn full_density() -> f64 {
    1.0
}

fn default_dist() -> WeightDistribution {
    WeightDistribution::PlusMinusOne
}

/// One instance entry of a benchmark config; exactly one of `path` and
/// `generate` must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub generate: Option<GenerateSpec>,
    /// How to read coupling files and generated couplings.
    #[serde(default, rename = "type")]
    pub problem_type: Option<ProblemType>,
    #[serde(default = "three")]
    pub states: usize,
}

fn three() -> usize {
    3
}

/// Benchmark description as read by the `bench` command.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub instances: Vec<InstanceSpec>,
    pub solvers: Vec<SolverKind>,
    #[serde(flatten)]
    pub options: BenchOptions,
    #[serde(default)]
    pub solve: SolveConfig,
    /// Where to write the report; relative to the config file.
    #[serde(default)]
    pub out: Option<PathBuf>,
}


/// Materialises the instances of `config`, resolving relative paths
/// against `base_dir`.
pub fn load_instances(config: &BenchConfig, base_dir: &Path) -> Result<Vec<BenchInstance>> {
    config
        .instances
        .iter()
        .enumerate()
        .map(|(k, spec)| {
            let problem = match (&spec.path, &spec.generate) {
                (Some(path), None) => load_problem(base_dir.join(path), spec.problem_type, spec.states)?.problem,
                (None, Some(g)) => {
                    let j = gen_random_couplings(g.n, g.density, g.dist, g.seed)?;
                    match spec.problem_type.unwrap_or(ProblemType::Ising) {
                        ProblemType::Ising => Problem::Ising(IsingProblem::without_field(j)),
                        ProblemType::XY => Problem::XY(XYProblem::new(j)),
                        ProblemType::Potts => Problem::Potts(PottsProblem::new(j, spec.states)?),
                        ProblemType::HermitianXY => {
                            return Err(Error::invalid("generated instances cannot be Hermitian XY"));
                        }
                    }
                }
                _ => return Err(Error::invalid(format!("instance {k}: give exactly one of `path` and `generate`"))),
            };
            let id = spec.id.clone().unwrap_or_else(|| format!("instance-{k:03}"));
            Ok(BenchInstance { id, problem })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen_random_ising;
    use crate::integrator::SolverSchedule;

    fn quick() -> SolveConfig {
        SolveConfig { schedule: SolverSchedule { max_steps: 2_000, ..Default::default() }, ..Default::default() }
    }

    fn instance(id: &str, n: usize, seed: u64) -> BenchInstance {
        let p = gen_random_ising(n, 1.0, WeightDistribution::PlusMinusOne, seed).unwrap();
        BenchInstance { id: id.into(), problem: Problem::Ising(p) }
    }

    #[test]
    fn single_row() {
        let opts = BenchOptions { restarts: 1, ..Default::default() };
        let r = run_benchmark(&[instance("a", 4, 1)], &[SolverKind::Hopfield], &quick(), &opts).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].oracle_energy.is_none());
        let text = serde_json::to_string(&r).unwrap();
        assert!(!text.contains("oracle_energy"));
        assert!(!text.contains("success_probability"));
    }

    #[test]
    fn oracle_size_limit_checked_first() {
        let opts = BenchOptions { restarts: 1, with_oracle: true, ..Default::default() };
        let big = instance("big", 30, 1);
        let e = run_benchmark(&[instance("a", 4, 1), big], &[SolverKind::Cim], &quick(), &opts).unwrap_err();
        assert!(matches!(e, Error::SizeLimit { n: 30, .. }));
    }

    #[test]
    fn rows_sorted_and_reproducible() {
        let opts = BenchOptions { restarts: 3, with_oracle: true, base_seed: 11, ..Default::default() };
        let insts = [instance("b", 6, 2), instance("a", 5, 3)];
        let solvers = [SolverKind::Hopfield, SolverKind::Cim];
        let mut x = run_benchmark(&insts, &solvers, &quick(), &opts).unwrap();
        let mut y = run_benchmark(&insts, &solvers, &quick(), &opts).unwrap();
        let ids: Vec<(&str, SolverKind)> = x.rows.iter().map(|r| (r.instance_id.as_str(), r.solver)).collect();
        assert_eq!(ids, [("a", SolverKind::Cim), ("a", SolverKind::Hopfield), ("b", SolverKind::Cim), ("b", SolverKind::Hopfield)]);
        for row in &x.rows {
            let p = row.success_probability.unwrap();
            assert!((0.0..=1.0).contains(&p));
            assert!(row.best_energy.unwrap() >= row.oracle_energy.unwrap() - 1e-9);
        }
        x.strip_timing();
        y.strip_timing();
        assert_eq!(serde_json::to_string(&x).unwrap(), serde_json::to_string(&y).unwrap());
    }

    #[test]
    fn config_parsing() {
        let text = r#"{
            "instances": [{"id": "g", "generate": {"n": 6, "seed": 4}}, {"generate": {"n": 3, "seed": 1}, "type": "xy"}],
            "solvers": ["cim", "gd"],
            "restarts": 4,
            "with_oracle": true,
            "solve": {"schedule": {"max_steps": 500}}
        }"#;
        let cfg: BenchConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.options.restarts, 4);
        assert_eq!(cfg.solve.schedule.max_steps, 500);
        assert_eq!(cfg.solve.schedule.dt, SolverSchedule::default().dt);
        let inst = load_instances(&cfg, Path::new(".")).unwrap();
        assert_eq!(inst[0].id, "g");
        assert_eq!(inst[1].id, "instance-001");
        assert_eq!(inst[1].problem.kind(), ProblemType::XY);
        let bad: BenchConfig = serde_json::from_str(r#"{"instances": [{}], "solvers": ["gd"]}"#).unwrap();
        assert!(load_instances(&bad, Path::new(".")).is_err());
    }
}
