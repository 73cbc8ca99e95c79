//! `spinflow`: solve, verify and benchmark spin Hamiltonians from the shell.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when every restart
//! diverged, 1 on any other failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spinflow_core::harness::{
    gen_random_ising, load_coupling, load_instances, load_json, load_problem, parse_phase_retrieval, parse_tsp,
    run_benchmark, save_coupling, save_json, solve_restarts, to_json, BenchConfig, Problem, ProblemDocument,
    ProblemType, Provenance, SolveConfig, SolveReport, SolverKind, WeightDistribution, SCHEDULE_ENV,
};
use spinflow_core::mappings::{
    cut_from_energy, maxcut_to_ising, phase_retrieval_to_xy, tsp_decode, tsp_to_ising, MaxCutInstance,
    DEFAULT_SVD_TOLERANCE,
};
use spinflow_core::oracle::{brute_force_ising, brute_force_potts, brute_force_xy, XyOracleOptions, DEFAULT_MAX_ISING_N};
use spinflow_core::{BinaryConfig, Configuration, Error};

#[derive(Parser)]
#[command(name = "spinflow", version, about = "Analogue-machine solvers for Ising, XY and Potts problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver with seeded restarts.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        /// How to read a coupling file; JSON documents carry their own type.
        #[arg(long = "type", value_enum)]
        problem_type: Option<TypeArg>,
        #[arg(long, value_enum)]
        solver: SolverArg,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Solve-config JSON; defaults to the file named by SPINFLOW_SCHEDULE.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Number of Potts states when reading a coupling file as Potts.
        #[arg(long, default_value_t = 3)]
        states: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive ground state of a small problem.
    Oracle {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long = "type", value_enum)]
        problem_type: Option<TypeArg>,
        #[arg(long, default_value_t = 3)]
        states: usize,
        /// Phase grid resolution for XY problems.
        #[arg(long, default_value_t = 64)]
        bins: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_ISING_N)]
        max_n: usize,
    },
    /// Compile a MaxCut, TSP or phase-retrieval instance into a spin problem.
    Map {
        #[arg(long, value_enum)]
        from: MapArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Keep city 0 free instead of pinning it to position 0 (TSP).
        #[arg(long)]
        free_first_city: bool,
        /// Relative singular-value cutoff of the pseudoinverse (phase retrieval).
        #[arg(long, default_value_t = DEFAULT_SVD_TOLERANCE)]
        svd_tolerance: f64,
    },
    /// Run a benchmark described by a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `out` field.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random Ising coupling file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long, value_enum, default_value_t = DistArg::Pm1)]
        dist: DistArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    Ising,
    Xy,
    Potts,
}

impl From<TypeArg> for ProblemType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::Ising => ProblemType::Ising,
            TypeArg::Xy => ProblemType::XY,
            TypeArg::Potts => ProblemType::Potts,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Gd,
    Cim,
    Kuramoto,
    Hopfield,
    Laser,
    Lk,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Gd => SolverKind::Gd,
            SolverArg::Cim => SolverKind::Cim,
            SolverArg::Kuramoto => SolverKind::Kuramoto,
            SolverArg::Hopfield => SolverKind::Hopfield,
            SolverArg::Laser => SolverKind::Laser,
            SolverArg::Lk => SolverKind::Lk,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Maxcut,
    Tsp,
    PhaseRetrieval,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Uniform,
    Gaussian,
    Pm1,
}

impl From<DistArg> for WeightDistribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Uniform => WeightDistribution::Uniform,
            DistArg::Gaussian => WeightDistribution::Gaussian,
            DistArg::Pm1 => WeightDistribution::PlusMinusOne,
        }
    }
}

enum Failure {
    Core(Error),
    AllDiverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::AllDiverged) => {
            eprintln!("error: every restart diverged");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if e.is_invalid_input() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve { problem, problem_type, solver, restarts, seed, schedule, states, out } => {
            let doc = load_problem(&problem, problem_type.map(Into::into), states)?;
            let config = solve_config(schedule.as_deref())?;
            let report = solve_restarts(&doc.problem, solver.into(), &config, seed, restarts)?;
            print_solve(&doc, &report)?;
            if let Some(out) = out {
                save_json(&report, out)?;
            }
            if report.best.is_none() {
                return Err(Failure::AllDiverged);
            }
            Ok(())
        }
        Command::Oracle { problem, problem_type, states, bins, max_n } => {
            let doc = load_problem(&problem, problem_type.map(Into::into), states)?;
            oracle(&doc, bins, max_n)
        }
        Command::Map { from, input, out, free_first_city, svd_tolerance } => {
            let doc = map(from, &input, !free_first_city, svd_tolerance)?;
            save_json(&doc, &out)?;
            println!("wrote {} problem with {} spins to {}", doc.problem.kind(), doc.problem.n(), out.display());
            Ok(())
        }
        Command::Bench { config, out } => {
            let cfg: BenchConfig = load_json(&config)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let instances = load_instances(&cfg, base)?;
            let report = run_benchmark(&instances, &cfg.solvers, &cfg.solve, &cfg.options)?;
            match out.or_else(|| cfg.out.map(|o| base.join(o))) {
                Some(path) => {
                    save_json(&report, &path)?;
                    for s in &report.summary {
                        match s.mean_success_probability {
                            Some(p) => println!("{}: {} rows, mean success probability {p:.4}", s.solver, s.rows),
                            None => println!("{}: {} rows", s.solver, s.rows),
                        }
                    }
                    println!("wrote report to {}", path.display());
                }
                None => print!("{}", to_json(&report)?),
            }
            Ok(())
        }
        Command::Gen { n, density, dist, seed, out } => {
            let p = gen_random_ising(n, density, dist.into(), seed)?;
            save_coupling(p.couplings(), &out)?;
            println!("wrote {} sites, {} couplings to {}", n, p.couplings().num_edges(), out.display());
            Ok(())
        }
    }
}

fn solve_config(path: Option<&Path>) -> Result<SolveConfig, Error> {
    let env = std::env::var_os(SCHEDULE_ENV).map(PathBuf::from);
    match path.map(Path::to_path_buf).or(env) {
        Some(p) => load_json(p),
        None => Ok(SolveConfig::default()),
    }
}

fn print_solve(doc: &ProblemDocument, report: &SolveReport) -> Result<(), Error> {
    println!("solver {} on {} problem, n = {}", report.solver, report.problem_type, report.n);
    println!(
        "restarts {}: {} converged, {} diverged",
        report.restarts, report.converged, report.diverged
    );
    let Some(best) = &report.best else {
        return Ok(());
    };
    println!("best energy {} (restart {})", best.energy, best.restart);
    println!("best config {}", format_config(&best.config));
    if let Configuration::Binary(b) = &best.config {
        describe_binary(doc, best.energy, b)?;
    }
    Ok(())
}

fn format_config(c: &Configuration) -> String {
    match c {
        Configuration::Binary(b) => b.spins().iter().map(|&s| if s > 0 { '+' } else { '-' }).collect(),
        Configuration::Phase(p) => {
            let v: Vec<String> = p.phases().iter().map(|t| format!("{t:.6}")).collect();
            v.join(" ")
        }
    }
}

/// Prints the mapped-problem view of a spin configuration.
fn describe_binary(doc: &ProblemDocument, energy: f64, config: &BinaryConfig) -> Result<(), Error> {
    match &doc.provenance {
        Some(Provenance::MaxCut { offset }) => println!("cut {}", cut_from_energy(*offset, energy)),
        Some(Provenance::Tsp { instance, fix_first_city, .. }) => {
            let d = tsp_decode(instance, config, *fix_first_city)?;
            match (d.valid, d.route, d.tour_cost) {
                (true, Some(route), Some(cost)) => {
                    let r: Vec<String> = route.iter().map(|c| c.to_string()).collect();
                    println!("tour {} cost {cost}", r.join(" "));
                }
                _ => println!("invalid tour: {:?}", d.violations),
            }
        }
        _ => {}
    }
    Ok(())
}

fn oracle(doc: &ProblemDocument, bins: usize, max_n: usize) -> Result<(), Failure> {
    match &doc.problem {
        Problem::Ising(p) => {
            let r = brute_force_ising(p, max_n)?;
            println!("energy {}", r.optimal_energy);
            println!("degeneracy {}", r.degeneracy);
            let first = &r.optimizers[0];
            println!("optimizer {}", format_config(&Configuration::Binary(first.clone())));
            describe_binary(doc, r.optimal_energy, first)?;
        }
        Problem::XY(p) => {
            let r = brute_force_xy(p, XyOracleOptions { bins, refine: true })?;
            println!("energy {}", r.optimal_energy);
            println!("optimizer {}", format_config(&Configuration::Phase(r.optimizers[0].clone())));
        }
        Problem::Potts(p) => {
            let r = brute_force_potts(p)?;
            println!("energy {}", r.optimal_energy);
            println!("degeneracy {}", r.degeneracy);
            println!("optimizer {}", format_config(&Configuration::Phase(r.optimizers[0].clone())));
        }
        Problem::HermitianXY(_) => {
            return Err(Error::InvalidArgument("no oracle for Hermitian XY problems".into()).into());
        }
    }
    Ok(())
}

fn map(from: MapArg, input: &Path, fix_first_city: bool, svd_tolerance: f64) -> Result<ProblemDocument, Error> {
    Ok(match from {
        MapArg::Maxcut => {
            let graph = MaxCutInstance::new(load_coupling(input)?)?;
            let (problem, offset) = maxcut_to_ising(&graph)?;
            ProblemDocument { problem: Problem::Ising(problem), provenance: Some(Provenance::MaxCut { offset }) }
        }
        MapArg::Tsp => {
            let instance = parse_tsp(&std::fs::read_to_string(input)?)?;
            let enc = tsp_to_ising(&instance, fix_first_city)?;
            ProblemDocument {
                problem: Problem::Ising(enc.problem),
                provenance: Some(Provenance::Tsp { instance, fix_first_city, offset: enc.offset }),
            }
        }
        MapArg::PhaseRetrieval => {
            let instance = parse_phase_retrieval(&std::fs::read_to_string(input)?)?;
            let problem = phase_retrieval_to_xy(&instance, svd_tolerance)?;
            ProblemDocument {
                problem: Problem::HermitianXY(problem),
                provenance: Some(Provenance::PhaseRetrieval { instance, svd_tolerance }),
            }
        }
    })
}
