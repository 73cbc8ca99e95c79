//! Solver dispatch and seeded restarts.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::document::{Problem, ProblemType};
use crate::dynamics::{
    solve_cim_with, solve_gain_dissipative_with, solve_hopfield_with, solve_kuramoto_with, solve_lang_kobayashi_with,
    solve_laser_network_with, CimParams, GainDissipativeParams, HopfieldParams, KuramotoParams, LangKobayashiParams,
    LaserNetworkParams, RunResult,
};
use crate::error::{Error, Result};
use crate::hamiltonians::{ising_energy_unchecked, Configuration, IsingProblem};
use crate::integrator::{RngStream, SolverSchedule};
use crate::mappings::{absorb_field, gauge_fix_ancilla};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    /// Gain-dissipative network.
    Gd,
    Cim,
    Kuramoto,
    Hopfield,
    Laser,
    /// Lang–Kobayashi reservoir network.
    Lk,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] =
        [SolverKind::Gd, SolverKind::Cim, SolverKind::Kuramoto, SolverKind::Hopfield, SolverKind::Laser, SolverKind::Lk];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Gd => "gd",
            SolverKind::Cim => "cim",
            SolverKind::Kuramoto => "kuramoto",
            SolverKind::Hopfield => "hopfield",
            SolverKind::Laser => "laser",
            SolverKind::Lk => "lk",
        }
    }

    pub fn supports(self, problem: ProblemType) -> bool {
        use ProblemType::*;
        match self {
            SolverKind::Gd => matches!(problem, Ising | XY | Potts),
            SolverKind::Cim | SolverKind::Hopfield => problem == Ising,
            SolverKind::Kuramoto | SolverKind::Laser | SolverKind::Lk => problem == XY,
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown solver `{s}` (gd, cim, kuramoto, hopfield, laser, lk)")))
    }
}

/// Everything that parameterises a solve besides the problem and seed.
///
/// Per-site vectors left empty in the laser and Lang–Kobayashi parameters
/// are filled from the scalar defaults below. For driven gain-dissipative
/// runs the resonant order is set from the problem. On Ising problems a
/// zero `drive_ceiling` becomes `drive_margin · max_i Σ_j |J_ij|`. On Potts
/// problems a zero `drive_ceiling` selects
/// [`GainDissipativeParams::potts`] for threshold, feedback rate and drive,
/// and `schedule.dt` is then read in units where `ρ_th = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    pub schedule: SolverSchedule,
    /// Per-solver replacements for `schedule`.
    pub schedule_overrides: BTreeMap<SolverKind, SolverSchedule>,
    pub gain_dissipative: GainDissipativeParams,
    pub drive_margin: f64,
    pub cim: CimParams,
    pub kuramoto: KuramotoParams,
    pub hopfield: HopfieldParams,
    pub laser: LaserNetworkParams,
    pub laser_pump: f64,
    pub laser_loss: f64,
    pub lang_kobayashi: LangKobayashiParams,
    pub lk_initial_injection: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            schedule: SolverSchedule::default(),
            schedule_overrides: BTreeMap::new(),
            gain_dissipative: GainDissipativeParams::default(),
            drive_margin: 2.0,
            cim: CimParams::default(),
            kuramoto: KuramotoParams::default(),
            hopfield: HopfieldParams::default(),
            laser: LaserNetworkParams::default(),
            laser_pump: 2.0,
            laser_loss: 1.0,
            lang_kobayashi: LangKobayashiParams::default(),
            lk_initial_injection: 0.0,
        }
    }
}

impl SolveConfig {
    pub fn schedule_for(&self, solver: SolverKind) -> &SolverSchedule {
        self.schedule_overrides.get(&solver).unwrap_or(&self.schedule)
    }

    pub fn with_schedule(mut self, solver: SolverKind, schedule: SolverSchedule) -> Self {
        self.schedule_overrides.insert(solver, schedule);
        self
    }
}

/// Outcome of one restart; exactly one of `result` and `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartOutcome {
    pub restart: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<RunResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestRun {
    pub restart: usize,
    pub energy: f64,
    pub config: Configuration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub version: String,
    pub solver: SolverKind,
    pub problem_type: ProblemType,
    pub n: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Lowest energy over all restarts; ties go to the earliest restart.
    pub best: Option<BestRun>,
    pub converged: usize,
    pub diverged: usize,
    pub runs: Vec<RestartOutcome>,
    pub config: SolveConfig,
}

impl SolveReport {
    pub fn results(&self) -> impl Iterator<Item = &RunResult> {
        self.runs.iter().filter_map(|r| r.result.as_ref())
    }

    /// Zeroes every wall-clock field so reports can be compared byte for byte.
    pub fn strip_timing(&mut self) {
        for r in self.runs.iter_mut().filter_map(|r| r.result.as_mut()) {
            r.wall_time = 0.0;
        }
    }
}

/// Runs one restart. Restart `r` draws from stream `r` of `seed`.
pub fn solve_once(problem: &Problem, solver: SolverKind, config: &SolveConfig, seed: u64, restart: usize) -> Result<RunResult> {
    let mut rng = RngStream::new(seed, restart as u64);
    dispatch(problem, solver, config, &mut rng)
}

/// Runs `restarts` independent restarts in parallel and collects them in
/// restart order. Divergence is recorded per restart; any other error
/// aborts the solve.
pub fn solve_restarts(
    problem: &Problem,
    solver: SolverKind,
    config: &SolveConfig,
    seed: u64,
    restarts: usize,
) -> Result<SolveReport> {
    if restarts == 0 {
        return Err(Error::invalid("restarts must be positive"));
    }
    check_supported(problem, solver)?;
    let outcomes: Vec<Result<RunResult>> =
        (0..restarts).into_par_iter().map(|r| solve_once(problem, solver, config, seed, r)).collect();

    let mut runs = Vec::with_capacity(restarts);
    let mut best: Option<BestRun> = None;
    let (mut converged, mut diverged) = (0, 0);
    for (restart, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(result) => {
                converged += usize::from(result.converged);
                if best.as_ref().is_none_or(|b| result.best_energy < b.energy) {
                    best = Some(BestRun { restart, energy: result.best_energy, config: result.best_config.clone() });
                }
                runs.push(RestartOutcome { restart, result: Some(result), error: None });
            }
            Err(e @ Error::Diverged { .. }) => {
                diverged += 1;
                runs.push(RestartOutcome { restart, result: None, error: Some(e.to_string()) });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SolveReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        solver,
        problem_type: problem.kind(),
        n: problem.n(),
        seed,
        restarts,
        best,
        converged,
        diverged,
        runs,
        config: config.clone(),
    })
}

fn check_supported(problem: &Problem, solver: SolverKind) -> Result<()> {
    if solver.supports(problem.kind()) {
        Ok(())
    } else {
        Err(Error::invalid(format!("solver {solver} does not accept {} problems", problem.kind())))
    }
}

fn dispatch(problem: &Problem, solver: SolverKind, config: &SolveConfig, rng: &mut RngStream) -> Result<RunResult> {
    check_supported(problem, solver)?;
    let schedule = config.schedule_for(solver);
    match problem {
        Problem::Ising(p) if p.has_field() => {
            let absorbed = absorb_field(p)?;
            let result = dispatch_ising(&absorbed, solver, config, schedule, rng)?;
            Ok(restore_field(result, p))
        }
        Problem::Ising(p) => dispatch_ising(p, solver, config, schedule, rng),
        Problem::XY(p) => match solver {
            SolverKind::Gd => {
                let params = GainDissipativeParams { resonant_order: 0, ..config.gain_dissipative.clone() };
                solve_gain_dissipative_with(p, &params, schedule, rng)
            }
            SolverKind::Kuramoto => solve_kuramoto_with(p, &config.kuramoto, schedule, rng),
            SolverKind::Laser => {
                let mut params = config.laser.clone();
                if params.pump.is_empty() {
                    params.pump = vec![config.laser_pump; p.n()];
                }
                if params.loss.is_empty() {
                    params.loss = vec![config.laser_loss; p.n()];
                }
                solve_laser_network_with(p, &params, schedule, rng)
            }
            SolverKind::Lk => {
                let mut params = config.lang_kobayashi.clone();
                if params.reservoir_pump.is_empty() {
                    params.reservoir_pump = vec![config.lk_initial_injection; p.n()];
                }
                solve_lang_kobayashi_with(p, &params, schedule, rng)
            }
            _ => unreachable!("checked by check_supported"),
        },
        Problem::Potts(p) => {
            let mut params = GainDissipativeParams { resonant_order: p.n_states(), ..config.gain_dissipative.clone() };
            if params.drive_ceiling != 0.0 {
                return solve_gain_dissipative_with(p, &params, schedule, rng);
            }
            let auto = GainDissipativeParams::potts(p.couplings(), p.n_states());
            params.threshold = auto.threshold;
            params.feedback_rate = auto.feedback_rate;
            params.drive_ceiling = auto.drive_ceiling;
            let schedule = SolverSchedule { dt: auto.natural_dt(schedule.dt), ..schedule.clone() };
            solve_gain_dissipative_with(p, &params, &schedule, rng)
        }
        Problem::HermitianXY(_) => unreachable!("checked by check_supported"),
    }
}

fn driven(config: &SolveConfig, couplings: &crate::hamiltonians::CouplingMatrix, order: usize) -> GainDissipativeParams {
    let mut params = GainDissipativeParams { resonant_order: order, ..config.gain_dissipative.clone() };
    if params.drive_ceiling == 0.0 {
        params.drive_ceiling = config.drive_margin * couplings.max_abs_row_sum() + 1e-3;
    }
    params
}

fn dispatch_ising(
    p: &IsingProblem,
    solver: SolverKind,
    config: &SolveConfig,
    schedule: &SolverSchedule,
    rng: &mut RngStream,
) -> Result<RunResult> {
    match solver {
        SolverKind::Gd => solve_gain_dissipative_with(p, &driven(config, p.couplings(), 2), schedule, rng),
        SolverKind::Cim => solve_cim_with(p, &config.cim, schedule, rng),
        SolverKind::Hopfield => solve_hopfield_with(p, &config.hopfield, schedule, rng),
        _ => unreachable!("checked by check_supported"),
    }
}

/// Maps a run on the field-absorbed problem back to the original spins.
///
/// Configurations are gauge-fixed on the ancilla and re-evaluated; the
/// final state is left as simulated, ancilla included.
fn restore_field(mut r: RunResult, original: &IsingProblem) -> RunResult {
    let fix = |c: &Configuration| {
        let b = gauge_fix_ancilla(c.as_binary().expect("Ising solvers read out spins"));
        let e = ising_energy_unchecked(original, b.spins());
        (Configuration::Binary(b), e)
    };
    (r.best_config, r.best_energy) = fix(&r.best_config);
    (r.final_config, r.final_energy) = fix(&r.final_config);
    r
}
