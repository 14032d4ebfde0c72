//! Tasks `(I, O, Δ)`, the Δ sub-model and solvability by a fixed number of
//! IIS rounds.

pub mod solver;
pub mod spec;
pub mod standard;

pub use solver::{
    check_solvability, check_witness, decision_carried_by_delta, decisions, decorate_with_decisions,
    extract_decision_map, solve, Decision, SearchOptions, SearchStats, Solution, SolvabilityVerdict,
};
pub use spec::{build_delta_submodel, validate_carrier, DeltaSubmodel, SimplicialTask, TaskSpec};
