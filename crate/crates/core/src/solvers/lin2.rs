use rayon::prelude::*;

use super::{Limits, SolveResult, Witness};
use crate::error::{Error, Result};
use crate::gadgets::{Sign, ANCHOR_SPIN};
use crate::model::RationalValue;
use crate::reductions::Lin2Instance;

/// Largest group size plus boundary size a group table may cover.
const GROUP_BUDGET: usize = 20;
const CHUNK_BITS: u32 = 14;

pub fn min_2lin2_exact(inst: &Lin2Instance, limits: &Limits) -> Result<SolveResult> {
    min_2lin2_exact_with_anchor(inst, ANCHOR_SPIN, limits)
}

/// Exact minimum number of unsatisfied equations with the anchor (if any)
/// held at `anchor_value`.
///
/// Variables are split into a core and independent groups: once the core is
/// fixed, each group's best assignment depends only on the core variables it
/// touches, so it is precomputed per boundary assignment. The core is then
/// enumerated exhaustively. Groups come from the instance's `aux_groups` when
/// they form a valid split, and are otherwise derived by peeling
/// high-degree variables into the core until every remaining component fits
/// the group budget.
pub fn min_2lin2_exact_with_anchor(inst: &Lin2Instance, anchor_value: Sign, limits: &Limits) -> Result<SolveResult> {
    let groups = if hint_is_valid(inst) { inst.aux_groups.clone() } else { auto_groups(inst) };
    let mut group_of = vec![None; inst.num_vars];
    for (gi, g) in groups.iter().enumerate() {
        for &v in g {
            group_of[v] = Some(gi);
        }
    }
    let mut in_equation = vec![false; inst.num_vars];
    for e in &inst.equations {
        in_equation[e.a] = true;
        in_equation[e.b] = true;
    }
    let core: Vec<usize> = (0..inst.num_vars)
        .filter(|&v| in_equation[v] && Some(v) != inst.anchor && group_of[v].is_none())
        .collect();
    if core.len() > limits.lin2_vars.min(63) {
        return Err(Error::TooLarge {
            what: "min_2lin2_exact enumerated variables",
            size: core.len(),
            limit: limits.lin2_vars,
        });
    }
    let mut core_bit = vec![usize::MAX; inst.num_vars];
    for (i, &v) in core.iter().enumerate() {
        core_bit[v] = i;
    }

    // Equations among core variables and the anchor: (mask, wanted parity).
    let mut core_checks: Vec<(u64, bool)> = Vec::new();
    let mut constant_unsat = 0u64;
    let mut group_eqs: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
    for (ei, e) in inst.equations.iter().enumerate() {
        if let Some(g) = group_of[e.a].or(group_of[e.b]) {
            group_eqs[g].push(ei);
            continue;
        }
        let mut wanted = e.rhs.is_minus();
        let mut mask = 0u64;
        for v in [e.a, e.b] {
            if Some(v) == inst.anchor {
                wanted ^= anchor_value.is_minus();
            } else {
                mask ^= 1 << core_bit[v];
            }
        }
        if mask == 0 {
            constant_unsat += wanted as u64;
        } else {
            core_checks.push((mask, wanted));
        }
    }

    let tables: Vec<GroupTable> = groups
        .iter()
        .zip(&group_eqs)
        .map(|(g, eqs)| GroupTable::build(inst, g, eqs, &core_bit, anchor_value))
        .collect();

    let cost_of = |assign: u64| -> u64 {
        let core_cost = core_checks
            .iter()
            .filter(|&&(mask, wanted)| ((assign & mask).count_ones() & 1 == 1) != wanted)
            .count() as u64;
        core_cost + tables.iter().map(|t| t.cost[t.boundary_index(assign)] as u64).sum::<u64>()
    };

    let total: u64 = 1 << core.len();
    let chunk = 1u64 << CHUNK_BITS;
    let (best_cost, best_assign) = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            (start..(start + chunk).min(total))
                .map(|a| (cost_of(a), a))
                .min()
                .expect("chunk is non-empty")
        })
        .min()
        .expect("at least one core assignment");

    let mut spins = vec![Sign::Plus; inst.num_vars];
    if let Some(a) = inst.anchor {
        spins[a] = anchor_value;
    }
    for (i, &v) in core.iter().enumerate() {
        spins[v] = Sign::from_minus(best_assign >> i & 1 == 1);
    }
    for (g, t) in groups.iter().zip(&tables) {
        let local = t.best[t.boundary_index(best_assign)];
        for (i, &v) in g.iter().enumerate() {
            spins[v] = Sign::from_minus(local >> i & 1 == 1);
        }
    }
    let unsat = best_cost + constant_unsat;
    debug_assert_eq!(unsat as usize, inst.unsatisfied_count(&spins));
    Ok(SolveResult {
        optimum: RationalValue::new(unsat, inst.num_equations().max(1) as u64),
        witness: Witness::Spins(spins),
        exact: true,
    })
}

/// Best cost and group assignment per assignment of the group's boundary.
struct GroupTable {
    /// Core bit positions of the boundary variables.
    boundary: Vec<usize>,
    cost: Vec<u32>,
    best: Vec<u64>,
}

impl GroupTable {
    fn build(inst: &Lin2Instance, group: &[usize], eqs: &[usize], core_bit: &[usize], anchor_value: Sign) -> Self {
        let local = |v: usize| group.iter().position(|&g| g == v);
        let mut boundary: Vec<usize> = Vec::new();
        for &ei in eqs {
            let e = &inst.equations[ei];
            for v in [e.a, e.b] {
                if local(v).is_none() && Some(v) != inst.anchor && !boundary.contains(&core_bit[v]) {
                    boundary.push(core_bit[v]);
                }
            }
        }
        boundary.sort_unstable();
        let width = group.len();
        let checks: Vec<(u64, bool)> = eqs
            .iter()
            .map(|&ei| {
                let e = &inst.equations[ei];
                let mut wanted = e.rhs.is_minus();
                let mut mask = 0u64;
                for v in [e.a, e.b] {
                    if let Some(i) = local(v) {
                        mask ^= 1 << i;
                    } else if Some(v) == inst.anchor {
                        wanted ^= anchor_value.is_minus();
                    } else {
                        let j = boundary.binary_search(&core_bit[v]).unwrap();
                        mask ^= 1 << (width + j);
                    }
                }
                (mask, wanted)
            })
            .collect();
        let rows = 1usize << boundary.len();
        let mut cost = Vec::with_capacity(rows);
        let mut best = Vec::with_capacity(rows);
        for b in 0..rows as u64 {
            let (c, g) = (0..1u64 << width)
                .map(|g| {
                    let combined = g | b << width;
                    let unsat = checks
                        .iter()
                        .filter(|&&(mask, wanted)| ((combined & mask).count_ones() & 1 == 1) != wanted)
                        .count() as u32;
                    (unsat, g)
                })
                .min()
                .unwrap();
            cost.push(c);
            best.push(g);
        }
        GroupTable { boundary, cost, best }
    }

    #[inline]
    fn boundary_index(&self, assign: u64) -> usize {
        self.boundary
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &bit)| acc | ((assign >> bit & 1) as usize) << j)
    }
}

fn hint_is_valid(inst: &Lin2Instance) -> bool {
    if inst.aux_groups.is_empty() {
        return false;
    }
    let mut group_of = vec![None; inst.num_vars];
    for (gi, g) in inst.aux_groups.iter().enumerate() {
        for &v in g {
            if v >= inst.num_vars || Some(v) == inst.anchor || group_of[v].is_some() {
                return false;
            }
            group_of[v] = Some(gi);
        }
    }
    let mut boundary: Vec<Vec<usize>> = vec![Vec::new(); inst.aux_groups.len()];
    for e in &inst.equations {
        match (group_of[e.a], group_of[e.b]) {
            (Some(x), Some(y)) if x != y => return false,
            (Some(g), None) => boundary[g].push(e.b),
            (None, Some(g)) => boundary[g].push(e.a),
            _ => {}
        }
    }
    inst.aux_groups.iter().zip(boundary.iter_mut()).all(|(g, b)| {
        b.retain(|&v| Some(v) != inst.anchor);
        b.sort_unstable();
        b.dedup();
        g.len() + b.len() <= GROUP_BUDGET
    })
}

/// Peels max-degree variables (ties to the smallest id) into the core until
/// every component of the rest, plus its boundary, fits the group budget.
fn auto_groups(inst: &Lin2Instance) -> Vec<Vec<usize>> {
    let n = inst.num_vars;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &inst.equations {
        if Some(e.a) == inst.anchor || Some(e.b) == inst.anchor {
            continue;
        }
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut in_core = vec![false; n];
    loop {
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut worst: Option<Vec<usize>> = None;
        for start in 0..n {
            if seen[start] || in_core[start] || adj[start].is_empty() || Some(start) == inst.anchor {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut boundary = Vec::new();
            let mut i = 0;
            while i < comp.len() {
                for &w in &adj[comp[i]] {
                    if in_core[w] {
                        boundary.push(w);
                    } else if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            boundary.sort_unstable();
            boundary.dedup();
            comp.sort_unstable();
            if comp.len() + boundary.len() > GROUP_BUDGET && worst.as_ref().is_none_or(|w| comp.len() > w.len()) {
                worst = Some(comp.clone());
            }
            components.push(comp);
        }
        match worst {
            None => return components,
            Some(comp) => {
                let pick = comp
                    .iter()
                    .copied()
                    .max_by(|&a, &b| adj[a].len().cmp(&adj[b].len()).then(b.cmp(&a)))
                    .unwrap();
                in_core[pick] = true;
            }
        }
    }
}
