//! Phase retrieval with restricted phase sets.
//!
//! A system `G = {g_1, ..., g_m}` in `C^d` does Θ-PR for a set of unit phases Θ when
//! `<f, g_j> = θ_j <h, g_j>` with `θ_j ∈ Θ` for every `j` forces `f = θ h` for a single
//! `θ ∈ Θ`. This crate decides that property exactly for finite Θ by enumerating phase
//! assignments, checks the decision against closed-form characterizations, and builds
//! the explicit objects that go with it: Möbius maps of the circle, invertible frames
//! from pairings, and band-limited witness functions on lattices.
//!
//! Module map:
//!
//! - [`numkernel`]: dense complex linear algebra (rank, null spaces, determinants).
//! - [`phases`]: phase sets, roots of unity, arcs and cross ratios.
//! - [`moebius`]: circle-preserving Möbius maps, the Cayley transform, arc maps.
//! - [`prcore`]: the decision engine and its oracles.
//! - [`expwitness`]: sampled Paley–Wiener constructions.
//! - [`experiments`]: seeded randomized studies.
//! - [`cli`]: the `thetapr` command line.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod expwitness;
pub mod moebius;
pub mod numkernel;
pub mod phases;
pub mod prcore;

pub use error::{Error, Result};
pub use numkernel::{CMatrix, CVector, Cx, Tolerance};
pub use phases::{Arc, PhaseSet};
pub use prcore::{
    decide_theta_pr, verify_witness, Assignment, DecisionReport, EngineOptions, VectorSystem,
    Witness,
};
