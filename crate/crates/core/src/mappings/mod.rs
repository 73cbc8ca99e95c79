//! Compilers from MaxCut, TSP and phase retrieval into spin problems, and
//! decoders back into the original problem's terms.

mod field;
mod maxcut;
mod phase_retrieval;
mod qubo;
mod tsp;

pub use field::{absorb_field, gauge_fix_ancilla};
pub use maxcut::{cut_from_energy, cut_value, maxcut_to_ising, MaxCutInstance};
pub use phase_retrieval::{
    phase_retrieval_decode, phase_retrieval_to_xy, pseudo_inverse, relative_error_up_to_phase,
    PhaseRetrievalInstance, DEFAULT_SVD_TOLERANCE,
};
pub use tsp::{
    tsp_decode, tsp_encode_route, tsp_to_ising, TspDecodeResult, TspEncoding, TspInstance, TspViolations,
};
