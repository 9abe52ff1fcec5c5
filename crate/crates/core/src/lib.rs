//! Exclusivity graphs and quantum contextuality witnesses.
//!
//! A sum of `n` event probabilities whose exclusivity structure is the graph
//! `G` is bounded by the independence number `α(G)` in any noncontextual
//! model and by the Lovász number `ϑ(G)` in quantum theory. This crate
//! computes both bounds with two-sided certificates, extracts quantum
//! realizations (unit vectors plus a handle state), builds the subset
//! intersection family `G(q, s)`, and simulates the bookmaker game whose
//! expected profit is `ϑ/α − 1`.

pub mod error;
pub mod game;
pub mod graph;
pub mod independence;
pub mod jsonfmt;
pub mod linalg;
pub mod representation;
pub mod rng;
pub mod theta;
pub mod witness;

pub use error::{Error, Result};
pub use game::{expected_profit, simulate_game, GameConfig, GameResult};
pub use graph::{Graph, SubsetFamilySpec};
pub use independence::{brute_force_alpha, greedy_lower_bound, max_independent_set, IndependenceResult};
pub use representation::{
    extract_representation, two_value_representation, validate_representation, OrthonormalRepresentation,
    ValidationReport,
};
pub use theta::{certify_lower, certify_upper, solve_theta, ThetaConfig, ThetaResult, ThetaStatus};
pub use witness::{check_theta_growth_bound, exhaustive_ratio_scan, reproduce_table, witness_report, WitnessReport};
