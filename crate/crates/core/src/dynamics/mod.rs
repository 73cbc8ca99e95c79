//! Analogue-machine solvers.
//!
//! Every solver takes a problem, a parameter struct, a [`SolverSchedule`]
//! and a seed, and returns a [`RunResult`] whose energies are recomputed
//! from the readout by [`crate::hamiltonians`]. The `*_with` variants take
//! an explicit [`RngStream`] so restarts can draw from independent streams.
//!
//! [`SolverSchedule`]: crate::integrator::SolverSchedule
//! [`RngStream`]: crate::integrator::RngStream

mod cim;
mod dnls;
mod gain_dissipative;
mod hopfield;
mod kuramoto;
mod lang_kobayashi;
mod laser;
mod machine;
mod readout;
mod result;
mod state;
mod target;

pub use cim::{solve_cim, solve_cim_with, CimMode, CimParams, PumpRamp, CIM_RAMPS};
pub use dnls::{simulate_dnls, DnlsParams, DnlsSample, DnlsTrajectory};
pub use gain_dissipative::{
    solve_gain_dissipative, solve_gain_dissipative_with, GainDissipativeParams, GAIN_DISSIPATIVE_RAMPS,
};
pub use hopfield::{solve_hopfield, solve_hopfield_from, solve_hopfield_with, Activation, HopfieldParams, HOPFIELD_RAMPS};
pub use kuramoto::{solve_kuramoto, solve_kuramoto_from, solve_kuramoto_with, xy_gradient, KuramotoParams, KURAMOTO_RAMPS};
pub use lang_kobayashi::{solve_lang_kobayashi, solve_lang_kobayashi_with, LangKobayashiParams, LANG_KOBAYASHI_RAMPS};
pub use laser::{solve_laser_network, solve_laser_network_with, LaserNetworkParams, LASER_RAMPS};
pub use readout::{readout, ReadoutTarget};
pub use result::{RunResult, Sample};
pub use state::OscillatorState;
pub use target::Target;
