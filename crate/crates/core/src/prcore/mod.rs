//! The Θ-PR decision engine and the closed-form oracles it is checked against.

mod construction;
mod engine;
mod oracles;
mod system;

pub use construction::{
    construct_invertible_system, expected_determinant, heinosaari_case, heinosaari_lower_bound,
    matching_partition,
};
pub use engine::{
    build_constraint_matrix, decide_theta_pr, independent_pair, subspace_contains_independent_pair,
    verify_witness, witness_for_assignment, witness_independence, DecisionReport, EngineOptions,
    Witness,
};
pub use oracles::{
    c2_oracle, c2_pr_oracle, fails_2pr_oracle, fails_3pr_cover, has_complement_property,
    is_complete, is_complete_subset, is_full_spark, Cover3,
};
pub use system::{c2_system, Assignment, VectorSystem};
