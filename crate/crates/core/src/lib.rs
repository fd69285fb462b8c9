//! Optimal rotational load shedding for multi-zone distribution networks.
//!
//! The pipeline turns a [`model::ProblemInstance`] into an integer linear
//! program through a McCormick relaxation ([`relax`]), solves it exactly
//! ([`ilp`]), recovers a consistent plan ([`recovery`]) and places the
//! resulting outages on a demand profile ([`profiles`], [`calendar`]).
//! [`baselines`] holds the round-robin and equal-power heuristics used for
//! comparison; [`oracle`] holds brute-force reference solvers.

pub mod baselines;
pub mod calendar;
pub mod cli;
pub mod error;
pub mod ilp;
pub mod model;
pub mod oracle;
pub mod pipeline;
pub mod profiles;
pub mod recovery;
pub mod relax;
pub mod scenario;

pub use error::{Error, Result};
