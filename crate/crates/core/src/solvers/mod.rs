//! Exact and heuristic optimizers for Max CSP, Min 2-Lin-2 and Min Bisection,
//! the edge-expansion evaluator, and the occurrence-count refuter.
//!
//! Exact solvers refuse instances beyond their [`Limits`] with
//! [`Error::TooLarge`](crate::Error::TooLarge) instead of falling back to a
//! heuristic. Ties between optimal witnesses go to the one enumerated first.

mod bisection;
mod csp;
mod lin2;
mod refuter;

pub use bisection::{edge_expansion, min_bisection_exact, min_bisection_kl};
pub use csp::{max_csp_exact, max_csp_local, LocalSearch};
pub use lin2::{min_2lin2_exact, min_2lin2_exact_with_anchor};
pub use refuter::{occurrence_refuter, RefuteOutcome, Verdict};

use crate::gadgets::Sign;
use crate::model::{BiasedAssignment, RationalValue};

/// Exhaustion limits for the exact solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Variables enumerated by `max_csp_exact`.
    pub csp_vars: usize,
    /// Non-anchor variables left to enumerate after `min_2lin2_exact`
    /// splits off independently optimized groups.
    pub lin2_vars: usize,
    /// Vertices for `min_bisection_exact`.
    pub bisection_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { csp_vars: 25, lin2_vars: 28, bisection_vertices: 24 }
    }
}

pub const ENV_CSP_LIMIT: &str = "UCSP_CSP_LIMIT";
pub const ENV_LIN2_LIMIT: &str = "UCSP_LIN2_LIMIT";
pub const ENV_BISECTION_LIMIT: &str = "UCSP_BISECTION_LIMIT";

impl Limits {
    /// Defaults, overridden by `UCSP_CSP_LIMIT`, `UCSP_LIN2_LIMIT` and
    /// `UCSP_BISECTION_LIMIT` when set to an integer.
    pub fn from_env() -> Self {
        let read = |key: &str, fallback: usize| {
            std::env::var(key).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(fallback)
        };
        let d = Limits::default();
        Limits {
            csp_vars: read(ENV_CSP_LIMIT, d.csp_vars),
            lin2_vars: read(ENV_LIN2_LIMIT, d.lin2_vars),
            bisection_vertices: read(ENV_BISECTION_LIMIT, d.bisection_vertices),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Assignment(BiasedAssignment),
    Spins(Vec<Sign>),
    /// `true` marks the side S.
    Side(Vec<bool>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Satisfied fraction for Max CSP, unsatisfied fraction for Min 2-Lin-2,
    /// width over one for Min Bisection.
    pub optimum: RationalValue,
    pub witness: Witness,
    pub exact: bool,
}
