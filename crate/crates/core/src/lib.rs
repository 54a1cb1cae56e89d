//! Imbalanced random CSPs under biased assignments: generators, clause
//! gadgets, reductions to Min 2-Lin-2 and Min Bisection, exact and
//! heuristic solvers, and the experiment harness around them.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod gadgets;
pub mod generator;
pub mod graph;
pub mod model;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result};
