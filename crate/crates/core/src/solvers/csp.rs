use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Limits, SolveResult, Witness};
use crate::error::{Error, Result};
use crate::model::{max_zeros, BiasedAssignment, Formula, FormulaKind, Prob, RationalValue};

/// Variables fixed up front to split the search tree across threads.
const SPLIT_VARS: usize = 4;

/// Maximizes satisfied clauses over assignments with at most ⌊γn⌋ zeros.
///
/// Depth-first branch and bound over variables 1..n, trying 0 before 1.
/// A clause counts as lost once it is fully assigned and unsatisfied, or,
/// for AND clauses, as soon as one literal is false. Subtrees whose
/// remaining upper bound cannot beat the incumbent are pruned. Ties resolve
/// to the lexicographically smallest assignment (0 < 1, variable 1 first).
pub fn max_csp_exact(f: &Formula, gamma: Prob, limits: &Limits) -> Result<SolveResult> {
    if f.n > limits.csp_vars {
        return Err(Error::TooLarge { what: "max_csp_exact variables", size: f.n, limit: limits.csp_vars });
    }
    let search = Search::new(f, max_zeros(gamma, f.n));
    // all-ones is always admissible, so its score is a safe floor
    let floor = f.satisfied_count(&BiasedAssignment::all_ones(f.n));

    let split = f.n.min(SPLIT_VARS);
    let best = (0u64..1 << split)
        .into_par_iter()
        .map(|prefix| {
            let mut state = State::new(&search);
            let prefix_bits = (0..split).map(|i| prefix >> (split - 1 - i) & 1 == 1);
            for (depth, bit) in prefix_bits.enumerate() {
                if !state.assign(&search, depth, bit) {
                    return None;
                }
            }
            let mut best = None;
            search.dfs(&mut state, split, floor, &mut best);
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<(usize, Vec<bool>)>, |acc, cand| match acc {
            Some(a) if a.0 >= cand.0 => Some(a),
            _ => Some(cand),
        });

    let (score, bits) = best.expect("the all-ones assignment is always admissible");
    Ok(SolveResult {
        optimum: RationalValue::new(score as u64, f.m().max(1) as u64),
        witness: Witness::Assignment(BiasedAssignment::new(bits)),
        exact: true,
    })
}

struct Search<'a> {
    f: &'a Formula,
    zmax: usize,
    is_and: bool,
    /// Clauses whose last variable (by index) is `depth + 1`.
    completes_at: Vec<Vec<usize>>,
    /// Per variable: (clause, literal negated).
    occurrences: Vec<Vec<(usize, bool)>>,
}

struct State {
    bits: Vec<bool>,
    zeros: usize,
    satisfied: usize,
    lost: usize,
    false_literals: Vec<u32>,
    /// Per depth: what assigning that variable changed, for undo.
    trail: Vec<(usize, usize, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn new(f: &'a Formula, zmax: usize) -> Self {
        let mut completes_at = vec![Vec::new(); f.n];
        let mut occurrences = vec![Vec::new(); f.n];
        for (ci, c) in f.clauses.iter().enumerate() {
            let last = c.literals.iter().map(|l| l.var as usize).max().unwrap_or(1);
            completes_at[last - 1].push(ci);
            for l in &c.literals {
                occurrences[l.var as usize - 1].push((ci, l.negated));
            }
        }
        Search { f, zmax, is_and: f.kind == FormulaKind::And, completes_at, occurrences }
    }

    fn dfs(&self, state: &mut State, depth: usize, floor: usize, best: &mut Option<(usize, Vec<bool>)>) {
        let bound = self.f.m() - state.lost;
        if bound < floor {
            return;
        }
        if let Some((score, _)) = best {
            if bound <= *score {
                return;
            }
        }
        if depth == self.f.n {
            *best = Some((state.satisfied, state.bits.clone()));
            return;
        }
        for bit in [false, true] {
            if state.assign(self, depth, bit) {
                self.dfs(state, depth + 1, floor, best);
            }
            state.undo(depth);
        }
    }
}

impl State {
    fn new(search: &Search) -> Self {
        State {
            bits: vec![true; search.f.n],
            zeros: 0,
            satisfied: 0,
            lost: 0,
            false_literals: vec![0; search.f.m()],
            trail: Vec::with_capacity(search.f.n),
        }
    }

    /// Assigns variable `depth + 1`; returns false if the bias cap is broken.
    /// Always pushes a trail entry, so callers must `undo` either way.
    fn assign(&mut self, search: &Search, depth: usize, bit: bool) -> bool {
        self.bits[depth] = bit;
        self.zeros += (!bit) as usize;
        let (sat_before, lost_before) = (self.satisfied, self.lost);
        let mut touched = Vec::new();
        if search.is_and {
            for &(ci, negated) in &search.occurrences[depth] {
                if bit == negated {
                    self.false_literals[ci] += 1;
                    touched.push(ci);
                    if self.false_literals[ci] == 1 {
                        self.lost += 1;
                    }
                }
            }
        }
        for &ci in &search.completes_at[depth] {
            let clause = &search.f.clauses[ci];
            if search.is_and {
                if self.false_literals[ci] == 0 {
                    self.satisfied += 1;
                }
            } else if search.f.clause_holds(clause, &self.bits) {
                self.satisfied += 1;
            } else {
                self.lost += 1;
            }
        }
        self.trail.push((sat_before, lost_before, touched));
        self.zeros <= search.zmax
    }

    fn undo(&mut self, depth: usize) {
        let (sat, lost, touched) = self.trail.pop().expect("undo without assign");
        for ci in touched {
            self.false_literals[ci] -= 1;
        }
        self.satisfied = sat;
        self.lost = lost;
        if !self.bits[depth] {
            self.zeros -= 1;
        }
        self.bits[depth] = true;
    }
}

/// Settings for [`max_csp_local`].
#[derive(Debug, Clone)]
pub struct LocalSearch {
    pub iterations: u64,
    pub seed: u64,
    /// Starting point; all-ones when absent.
    pub start: Option<BiasedAssignment>,
}

impl LocalSearch {
    pub fn new(iterations: u64, seed: u64) -> Self {
        LocalSearch { iterations, seed, start: None }
    }
}

/// Bias-respecting hill climbing with sideways moves.
///
/// Each step picks a variable uniformly; it is flipped alone when that keeps
/// the zero count within ⌊γn⌋, otherwise it is swapped with a random zero.
/// Non-worsening moves are kept. Returns the best assignment seen.
pub fn max_csp_local(f: &Formula, gamma: Prob, cfg: &LocalSearch) -> Result<SolveResult> {
    let zmax = max_zeros(gamma, f.n);
    let mut bits = match &cfg.start {
        Some(start) if start.n() != f.n || start.zero_count() > zmax => {
            return Err(Error::InvalidParams("local search start is not an admissible assignment".into()));
        }
        Some(start) => start.bits.clone(),
        None => vec![true; f.n],
    };
    let mut occurrences = vec![Vec::new(); f.n];
    for (ci, c) in f.clauses.iter().enumerate() {
        for l in &c.literals {
            occurrences[l.var as usize - 1].push(ci);
        }
    }
    let mut sat: Vec<bool> = f.clauses.iter().map(|c| f.clause_holds(c, &bits)).collect();
    let mut score = sat.iter().filter(|&&s| s).count();
    let mut zeros = bits.iter().filter(|&&b| !b).count();
    let mut best = (score, bits.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut touched = Vec::new();

    for _ in 0..cfg.iterations {
        if f.n == 0 || f.m() == 0 || score == f.m() {
            break;
        }
        let v = rng.gen_range(0..f.n);
        let mut moved = vec![v];
        if bits[v] && zeros == zmax {
            if zeros == 0 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..f.n);
                if !bits[w] {
                    break w;
                }
            };
            moved.push(w);
        }
        touched.clear();
        for &x in &moved {
            bits[x] = !bits[x];
            touched.extend_from_slice(&occurrences[x]);
        }
        touched.sort_unstable();
        touched.dedup();
        let delta: i64 = touched
            .iter()
            .map(|&ci| f.clause_holds(&f.clauses[ci], &bits) as i64 - sat[ci] as i64)
            .sum();
        if delta >= 0 {
            for &ci in &touched {
                sat[ci] = f.clause_holds(&f.clauses[ci], &bits);
            }
            score = (score as i64 + delta) as usize;
            zeros = bits.iter().filter(|&&b| !b).count();
            if score > best.0 {
                best = (score, bits.clone());
            }
        } else {
            for &x in &moved {
                bits[x] = !bits[x];
            }
        }
    }

    Ok(SolveResult {
        optimum: RationalValue::new(best.0 as u64, f.m().max(1) as u64),
        witness: Witness::Assignment(BiasedAssignment::new(best.1)),
        exact: false,
    })
}
