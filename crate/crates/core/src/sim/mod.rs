//! Dense statevector simulation used as an oracle for the graph rules.

pub mod clifford;
pub mod state;
pub mod verify;

pub use clifford::{single_qubit_cliffords, Mat2};
pub use state::{
    apply_local_clifford_uv, apply_stabilizer, equal_up_to_global_phase, graph_state, graph_state_with_limit,
    max_distance, schmidt_rank_log2, StateVector, DEFAULT_SIM_LIMIT,
};
pub use verify::{
    apply_lc_sequence, find_local_cliffords, stabilizer_deviation, verify_lc_rule, verify_measurement_rule,
    verify_multi_z, verify_plan, OutcomeReport, RuleReport, STRUCTURE_TOL,
};
