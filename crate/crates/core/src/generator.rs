//! Seeded random β-imbalanced formulas and planted γ-biased instances.
//!
//! Every generator owns a `ChaCha8Rng` seeded with `Params::seed` through
//! `seed_from_u64`. Draws are consumed in this order:
//!
//! 1. (planted only) the zero positions of the hidden assignment, one call
//!    to `rand::seq::index::sample(n, ⌊γn⌋)`;
//! 2. for every clause and every slot in order: `gen_range(1..=n)` for the
//!    variable, repeated while it collides with an earlier slot of the same
//!    clause, then `gen_range(0..denom(β)) < numer(β)` for the negation.
//!
//! Streams are reproducible within this implementation only.

use std::io::Write;

use num_traits::Zero;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{max_zeros, BiasedAssignment, Clause, Formula, FormulaKind, Literal, Params, Prob, RationalValue};

/// Draws per requested clause after which planting gives up.
pub const DEFAULT_MAX_DRAWS_PER_CLAUSE: u64 = 100_000;

/// Exact Bernoulli draw for a rational probability in `[0, 1]`.
#[inline]
pub fn bernoulli<R: Rng + ?Sized>(rng: &mut R, p: Prob) -> bool {
    rng.gen_range(0..*p.denom()) < *p.numer()
}

/// Samples single clauses from the imbalanced distribution.
#[derive(Debug, Clone)]
pub struct ClauseSampler {
    n: usize,
    k: usize,
    beta: Prob,
}

impl ClauseSampler {
    pub fn new(n: usize, k: usize, beta: Prob) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("arity must be positive".into()));
        }
        if n < k {
            return Err(Error::InsufficientVariables { n, k });
        }
        if beta < Prob::zero() || beta >= Prob::new(1, 2) {
            return Err(Error::InvalidParams(format!("beta = {beta} must lie in [0, 1/2)")));
        }
        Ok(ClauseSampler { n, k, beta })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Clause {
        let mut literals: Vec<Literal> = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            let var = loop {
                let v = rng.gen_range(1..=self.n as u32);
                if literals.iter().all(|l| l.var != v) {
                    break v;
                }
            };
            literals.push(Literal { var, negated: bernoulli(rng, self.beta) });
        }
        Clause::new(literals)
    }
}

fn arity_for(params: &Params, kind: &FormulaKind) -> Result<usize> {
    match kind.fixed_arity() {
        Some(a) if a != params.k => Err(Error::ArityMismatch { expected: a, found: params.k }),
        _ => Ok(params.k),
    }
}

fn clause_count(params: &Params) -> Result<usize> {
    let m = params.clause_count();
    if m == 0 {
        return Err(Error::InvalidParams(format!(
            "delta = {} with n = {} yields no clauses",
            params.delta, params.n
        )));
    }
    Ok(m)
}

/// Random formula with `round(Δn)` clauses over `k` distinct variables each,
/// every literal negated independently with probability β.
pub fn gen_unbalanced(params: &Params, kind: &FormulaKind) -> Result<Formula> {
    let k = arity_for(params, kind)?;
    let sampler = ClauseSampler::new(params.n, k, params.beta)?;
    let m = clause_count(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let clauses = (0..m).map(|_| sampler.sample(&mut rng)).collect();
    Ok(Formula::new(params.n, k, kind.clone(), clauses)?.with_beta(params.beta))
}

#[derive(Debug, Clone)]
pub struct Planted {
    pub formula: Formula,
    pub assignment: BiasedAssignment,
    /// Total clauses drawn, accepted or not.
    pub draws: u64,
}

impl Planted {
    pub fn acceptance_rate(&self) -> f64 {
        self.formula.m() as f64 / self.draws as f64
    }
}

pub fn gen_planted(params: &Params, kind: &FormulaKind) -> Result<Planted> {
    gen_planted_with_cap(params, kind, DEFAULT_MAX_DRAWS_PER_CLAUSE)
}

/// Rejection-samples clauses satisfied by a hidden assignment with exactly
/// ⌊γn⌋ zeros.
pub fn gen_planted_with_cap(params: &Params, kind: &FormulaKind, max_draws_per_clause: u64) -> Result<Planted> {
    let k = arity_for(params, kind)?;
    let sampler = ClauseSampler::new(params.n, k, params.beta)?;
    if params.gamma < Prob::zero() || params.gamma >= Prob::new(1, 2) {
        return Err(Error::InvalidParams(format!("gamma = {} must lie in [0, 1/2)", params.gamma)));
    }
    let m = clause_count(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let zeros = max_zeros(params.gamma, params.n);
    let mut bits = vec![true; params.n];
    for i in index::sample(&mut rng, params.n, zeros) {
        bits[i] = false;
    }

    let cap = max_draws_per_clause.saturating_mul(m as u64);
    let mut clauses = Vec::with_capacity(m);
    let mut draws = 0u64;
    while clauses.len() < m {
        if draws >= cap {
            return Err(Error::PlantingStalled { draws, accepted: clauses.len() });
        }
        draws += 1;
        let c = sampler.sample(&mut rng);
        if kind.accepts(c.pattern(&bits), k) {
            clauses.push(c);
        }
    }
    let formula = Formula::new(params.n, k, kind.clone(), clauses)?.with_beta(params.beta);
    Ok(Planted { formula, assignment: BiasedAssignment::new(bits), draws })
}

/// Literal occurrence statistics; index `i` holds variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenReport {
    pub occ_pos: Vec<u64>,
    pub occ_neg: Vec<u64>,
    pub negative_literal_fraction: RationalValue,
    /// Extremes of the per-variable total occurrence count.
    pub min_occurrence: u64,
    pub max_occurrence: u64,
}

impl GenReport {
    pub fn total(&self) -> u64 {
        self.occ_pos.iter().sum::<u64>() + self.occ_neg.iter().sum::<u64>()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["var", "occ_pos", "occ_neg"])?;
        for (i, (p, n)) in self.occ_pos.iter().zip(&self.occ_neg).enumerate() {
            w.write_record([(i + 1).to_string(), p.to_string(), n.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn occurrence_report(f: &Formula) -> GenReport {
    let mut occ_pos = vec![0u64; f.n];
    let mut occ_neg = vec![0u64; f.n];
    for l in f.clauses.iter().flat_map(|c| &c.literals) {
        let slot = l.var as usize - 1;
        if l.negated {
            occ_neg[slot] += 1;
        } else {
            occ_pos[slot] += 1;
        }
    }
    let totals = occ_pos.iter().zip(&occ_neg).map(|(p, n)| p + n);
    let min_occurrence = totals.clone().min().unwrap_or(0);
    let max_occurrence = totals.max().unwrap_or(0);
    let negatives: u64 = occ_neg.iter().sum();
    let all = (f.m() * f.k) as u64;
    GenReport {
        occ_pos,
        occ_neg,
        negative_literal_fraction: RationalValue::new(negatives, all.max(1)),
        min_occurrence,
        max_occurrence,
    }
}
