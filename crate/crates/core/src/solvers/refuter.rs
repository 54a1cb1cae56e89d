use crate::error::Result;
use crate::generator::occurrence_report;
use crate::model::{max_zeros, Formula, Prob, RationalValue};
use crate::reductions::require_and;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Refuted,
    NoCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefuteOutcome {
    pub verdict: Verdict,
    /// Upper bound on the fraction of clauses any γ-biased assignment
    /// satisfies.
    pub bound: RationalValue,
    /// Most literal occurrences any γ-biased assignment makes true.
    pub literal_budget: u64,
}

/// Occurrence-counting certificate for k-AND formulas.
///
/// A γ-biased assignment sets at most ⌊γn⌋ variables to 0. Starting from
/// all-ones (which makes every positive occurrence true), zeroing x trades
/// its positive occurrences for its negative ones, so the best zero set takes
/// the largest positive margins occ⁻(x) − occ⁺(x). An all-true clause uses k
/// true occurrences, which bounds the satisfied fraction by U/(k·m).
pub fn occurrence_refuter(f: &Formula, gamma: Prob, epsilon: Prob) -> Result<RefuteOutcome> {
    require_and(f)?;
    let report = occurrence_report(f);
    let mut margins: Vec<i64> = report
        .occ_pos
        .iter()
        .zip(&report.occ_neg)
        .map(|(&p, &q)| q as i64 - p as i64)
        .filter(|&d| d > 0)
        .collect();
    margins.sort_unstable_by(|a, b| b.cmp(a));
    let budget: u64 = report.occ_pos.iter().sum::<u64>()
        + margins.iter().take(max_zeros(gamma, f.n)).map(|&d| d as u64).sum::<u64>();
    let denominator = (f.k * f.m()) as u64;
    let bound = if denominator == 0 || budget >= denominator {
        RationalValue::new(1, 1)
    } else {
        RationalValue::new(budget, denominator)
    };
    let threshold = Prob::from_integer(1) - epsilon;
    let verdict = if bound.cmp_prob(threshold).is_lt() { Verdict::Refuted } else { Verdict::NoCertificate };
    Ok(RefuteOutcome { verdict, bound, literal_budget: budget })
}
