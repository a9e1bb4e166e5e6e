//! Cost-optimal dispatch for a grid-connected community microgrid with
//! game-theoretic allocation of the resulting costs and benefits.
//!
//! Pipeline: build and solve the dispatch model ([`dispatch`]), evaluate the
//! four cost/benefit components over all coalitions and compute exact
//! Shapley values ([`allocation`]), derive the fairness and synergy metric
//! suite ([`fairness`]), and read/write scenarios and reports ([`io`]).

pub mod allocation;
pub mod dispatch;
pub mod fairness;
pub mod io;
pub mod model;
pub mod report;

#[cfg(test)]
pub(crate) mod testkit;

pub use model::{validate_scenario, Scenario, ValidationFinding};
