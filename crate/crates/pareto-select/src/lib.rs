//! Pick the single best model configuration from a set of candidates
//! evaluated on several conflicting objectives.
//!
//! The pipeline is: build a [`types::CandidateSet`] (usually from CSV via
//! [`io`]), extract the Pareto frontier with [`dominance::pareto_frontier`],
//! then run one of the selection strategies in [`strategies`] over the
//! frontier members. Strategies that need a per-sample utopia point (the
//! calibrated population-discounted variant) get it from [`calibration`],
//! which turns a raw user/item interaction log into per-user utopia rows.
//!
//! All internal math runs on *oriented* vectors (minimization form, see
//! [`types::orient`]); inputs and outputs stay in native units.

pub mod calibration;
pub mod cli;
pub mod dominance;
pub mod error;
pub mod io;
pub mod normalize;
pub mod strategies;
pub mod types;

pub use error::{Error, Result};
