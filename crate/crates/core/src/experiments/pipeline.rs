use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generator::{gen_planted, gen_unbalanced};
use crate::model::{prob_to_f64, FormulaKind, Params, Prob, RationalValue};
use crate::reductions::{and_to_bisection, and_to_min2lin2, completeness_cut, rewrite_to_and};
use crate::solvers::{min_2lin2_exact, occurrence_refuter, Limits, Verdict};

pub const PIPELINE_HEADER: [&str; 11] =
    ["seed", "kind", "n", "m", "beta", "gamma", "alpha", "value_exact", "value_kind", "bound", "pass"];

/// Largest graph whose completeness cut is recounted edge by edge.
const RECOUNT_EDGE_LIMIT: usize = 5_000_000;

/// Row kinds emitted per seed, in output order.
pub const ROW_KINDS: [&str; 5] = ["planted_lin2", "random_lin2", "planted_bisection", "planted_refuter", "random_refuter"];

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// `params.seed` is the first seed; `seeds` consecutive seeds run.
    pub params: Params,
    /// Constraint kind of the random and bisection instances before the
    /// AND rewrite.
    pub kind: FormulaKind,
    pub seeds: u64,
    pub jobs: usize,
    pub limits: Limits,
}

/// One comparison between a measured value and the bound it is checked
/// against. `value_kind` names the quantity and the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRow {
    pub seed: u64,
    pub kind: &'static str,
    pub n: usize,
    pub m: usize,
    pub beta: Prob,
    pub gamma: Prob,
    pub alpha: Prob,
    pub value_exact: Option<RationalValue>,
    pub value_kind: &'static str,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

impl PipelineRow {
    pub fn record(&self) -> [String; 11] {
        let na = || "na".to_string();
        [
            self.seed.to_string(),
            self.kind.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.beta.to_string(),
            self.gamma.to_string(),
            self.alpha.to_string(),
            self.value_exact.map_or_else(na, |v| v.to_string()),
            self.value_kind.to_string(),
            self.bound.map_or_else(na, |b| b.to_string()),
            self.pass.map_or_else(na, |p| p.to_string()),
        ]
    }
}

/// Seed of one instance stream of a pipeline seed: stream 1 is the planted
/// AND instance, 2 the random instance, 3 the planted instance of the
/// configured kind.
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over (seed, stream)
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every seed and returns rows ordered by (seed, kind).
///
/// Per seed:
/// * `planted_lin2`: a planted AND instance reduces to a 2-Lin-2 system
///   whose exact unsatisfied fraction must be 0;
/// * `random_lin2`: a random instance of `kind`, read as AND, against the
///   soundness value s′ − ε (k = 3 only);
/// * `planted_bisection`: a planted instance of `kind`, read as AND, with
///   the clauses all-true under the hidden assignment as the quota; the row
///   reports the completeness cut's width per m′ next to (3/2)α and passes
///   when the recounted width equals the true-literal occurrences outside
///   the selected clusters;
/// * `planted_refuter` / `random_refuter`: the occurrence refuter on the
///   planted AND instance (must not refute) and the random instance (refutes).
pub fn pipeline(config: &PipelineConfig) -> Result<Vec<PipelineRow>> {
    config.params.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let base = config.params.seed;
    let per_seed: Vec<Vec<PipelineRow>> = pool.install(|| {
        (0..config.seeds)
            .into_par_iter()
            .map(|i| rows_for_seed(config, base.wrapping_add(i)))
            .collect::<Result<_>>()
    })?;
    Ok(per_seed.into_iter().flatten().collect())
}

fn rows_for_seed(config: &PipelineConfig, seed: u64) -> Result<Vec<PipelineRow>> {
    let p = &config.params;
    let eps = p.epsilon;
    let alpha = p.alpha();
    let row = |kind, m, value_exact, value_kind, bound, pass| PipelineRow {
        seed,
        kind,
        n: p.n,
        m,
        beta: p.beta,
        gamma: p.gamma,
        alpha,
        value_exact,
        value_kind,
        bound,
        pass,
    };

    let planted = gen_planted(&p.clone().with_seed(stream_seed(seed, 1)), &FormulaKind::And)?;
    let random = rewrite_to_and(&gen_unbalanced(&p.clone().with_seed(stream_seed(seed, 2)), &config.kind)?);
    let mixed = gen_planted(&p.clone().with_seed(stream_seed(seed, 3)), &config.kind)?;

    let planted_lin2 = min_2lin2_exact(&and_to_min2lin2(&planted.formula)?, &config.limits)?.optimum;
    let random_lin2 = min_2lin2_exact(&and_to_min2lin2(&random)?, &config.limits)?.optimum;
    let soundness = (p.k == 3).then(|| 0.25 * (1.0 - (1.0 - prob_to_f64(p.beta)).powi(3)) - prob_to_f64(eps));

    let and_view = rewrite_to_and(&mixed.formula);
    let bits = &mixed.assignment.bits;
    let selected: Vec<usize> = (0..and_view.m())
        .filter(|&c| and_view.clause_holds(&and_view.clauses[c], bits))
        .collect();
    let nominal_width = (p.k == 3).then(|| 1.5 * prob_to_f64(alpha));
    let bisection = if selected.is_empty() {
        row("planted_bisection", and_view.m(), None, "bisect_width_per_m", nominal_width, None)
    } else {
        let rho = Prob::new(selected.len() as i64, and_view.m() as i64);
        let g = and_to_bisection(&and_view, rho, Prob::from_integer(0))?;
        let cut = completeness_cut(&g, &mixed.assignment, &selected)?;
        let true_outside: u64 = (0..and_view.m())
            .filter(|c| selected.binary_search(c).is_err())
            .map(|c| and_view.clauses[c].literals.iter().filter(|l| l.eval(bits)).count() as u64)
            .sum();
        // the edge-by-edge recount materializes every clique edge, so it is
        // limited to graphs of moderate size
        let recount_ok = g.num_edges() > RECOUNT_EDGE_LIMIT
            || g.edges().filter(|&(a, b)| cut.side[a] != cut.side[b]).count() as u64 == cut.width;
        let pass = recount_ok && cut.width == true_outside;
        row("planted_bisection", and_view.m(), Some(cut.width_per_clause()), "bisect_width_per_m", nominal_width, Some(pass))
    };

    let planted_ref = occurrence_refuter(&planted.formula, p.gamma, eps)?;
    let random_ref = occurrence_refuter(&random, p.gamma, eps)?;
    let one_minus_eps = prob_to_f64(Prob::from_integer(1) - eps);

    Ok(vec![
        row("planted_lin2", planted.formula.m(), Some(planted_lin2), "lin2_unsat_eq_0", Some(0.0), Some(planted_lin2.is_zero())),
        row(
            "random_lin2",
            random.m(),
            Some(random_lin2),
            "lin2_unsat_ge_soundness_minus_eps",
            soundness,
            soundness.map(|s| random_lin2.to_f64() >= s),
        ),
        bisection,
        row(
            "planted_refuter",
            planted.formula.m(),
            Some(planted_ref.bound),
            "refuter_bound_no_certificate",
            Some(one_minus_eps),
            Some(planted_ref.verdict == Verdict::NoCertificate),
        ),
        row(
            "random_refuter",
            random.m(),
            Some(random_ref.bound),
            "refuter_bound_refuted",
            Some(one_minus_eps),
            Some(random_ref.verdict == Verdict::Refuted),
        ),
    ])
}

pub fn write_pipeline_csv<W: Write>(rows: &[PipelineRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PIPELINE_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}
