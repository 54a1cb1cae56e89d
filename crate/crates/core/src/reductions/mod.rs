//! Formula rewriting and the two instance-level reductions.

mod bisection;
mod lin2;

pub use bisection::{and_to_bisection, completeness_cut, BisectionGraph, CompletenessCut, VertexRole};
pub use lin2::{and_to_min2lin2, Lin2Instance};

use crate::error::{Error, Result};
use crate::model::{Formula, FormulaKind};

/// Reads every clause as an AND of its literals. Literals, `n` and the clause
/// count are unchanged.
pub fn rewrite_to_and(f: &Formula) -> Formula {
    let mut out = f.clone();
    out.kind = FormulaKind::And;
    out
}

pub(crate) fn require_and(f: &Formula) -> Result<()> {
    match f.kind {
        FormulaKind::And => Ok(()),
        ref other => Err(Error::KindMismatch { expected: "and", found: other.name() }),
    }
}
