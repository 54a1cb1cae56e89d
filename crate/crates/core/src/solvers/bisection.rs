use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Limits, SolveResult, Witness};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::RationalValue;

/// Exact minimum bisection by enumerating every half containing vertex 0.
///
/// The enumeration is split by the second-smallest vertex of S; within a
/// split, halves are visited in increasing bitmask order and the first
/// minimum wins.
pub fn min_bisection_exact(g: &Graph, limits: &Limits) -> Result<SolveResult> {
    let n = g.num_vertices();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    if n > limits.bisection_vertices.min(62) {
        return Err(Error::TooLarge { what: "min_bisection_exact vertices", size: n, limit: limits.bisection_vertices });
    }
    if n == 0 {
        return Ok(side_result(g, Vec::new(), true));
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
    let width = |s: u64| -> u32 {
        let mut rest = s;
        let mut w = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            w += (adj[v] & !s).count_ones();
        }
        w
    };
    let half = n / 2;
    let best_mask = if half == 1 {
        1
    } else {
        (1..n)
            .into_par_iter()
            .filter_map(|f| {
                // remaining half - 2 vertices drawn from f+1..n
                let pool = n - f - 1;
                let r = half - 2;
                if pool < r {
                    return None;
                }
                let base = 1u64 | 1 << f;
                let mut best: Option<(u32, u64)> = None;
                for_each_combination(pool, r, |c| {
                    let s = base | c << (f + 1);
                    let w = width(s);
                    if best.is_none_or(|(bw, _)| w < bw) {
                        best = Some((w, s));
                    }
                });
                best.map(|(w, s)| (w, f, s))
            })
            .min_by_key(|&(w, f, _)| (w, f))
            .map(|(_, _, s)| s)
            .unwrap()
    };
    let side = (0..n).map(|v| best_mask >> v & 1 == 1).collect();
    Ok(side_result(g, side, true))
}

/// Calls `visit` with every `r`-subset of `0..pool` as a bitmask, in
/// increasing numeric order (Gosper's hack).
fn for_each_combination(pool: usize, r: usize, mut visit: impl FnMut(u64)) {
    if r == 0 {
        visit(0);
        return;
    }
    let limit = 1u64 << pool;
    let mut c = (1u64 << r) - 1;
    while c < limit {
        visit(c);
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        c = (((ripple ^ c) >> 2) / low) | ripple;
    }
}

fn side_result(g: &Graph, side: Vec<bool>, exact: bool) -> SolveResult {
    SolveResult { optimum: RationalValue::new(g.cut_width(&side), 1), witness: Witness::Side(side), exact }
}

/// Kernighan–Lin local improvement from `restarts` random balanced starts
/// (at least one). Deterministic for a given seed.
pub fn min_bisection_kl(g: &Graph, seed: u64, restarts: usize) -> Result<SolveResult> {
    let n = g.num_vertices();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(u64, Vec<bool>)> = None;
    for _ in 0..restarts.max(1) {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut side = vec![false; n];
        for &v in &order[..n / 2] {
            side[v] = true;
        }
        while kl_pass(g, &mut side) {}
        let w = g.cut_width(&side);
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, side));
        }
    }
    let (_, side) = best.unwrap();
    Ok(side_result(g, side, false))
}

/// One Kernighan–Lin pass; applies the best positive-gain prefix of swaps
/// and reports whether the cut improved.
fn kl_pass(g: &Graph, side: &mut [bool]) -> bool {
    let n = side.len();
    // d[v] = external minus internal degree
    let mut d: Vec<i64> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&w| if side[w] != side[v] { 1 } else { -1 }).sum())
        .collect();
    let mut locked = vec![false; n];
    let mut swaps = Vec::with_capacity(n / 2);
    let mut gains = Vec::with_capacity(n / 2);
    let mut current = side.to_vec();
    for _ in 0..n / 2 {
        let mut pick: Option<(i64, usize, usize)> = None;
        for a in (0..n).filter(|&a| !locked[a] && current[a]) {
            for b in (0..n).filter(|&b| !locked[b] && !current[b]) {
                let gain = d[a] + d[b] - 2 * g.has_edge(a, b) as i64;
                if pick.is_none_or(|(pg, _, _)| gain > pg) {
                    pick = Some((gain, a, b));
                }
            }
        }
        let Some((gain, a, b)) = pick else { break };
        locked[a] = true;
        locked[b] = true;
        for (moved, to) in [(a, false), (b, true)] {
            current[moved] = to;
            for &w in g.neighbors(moved) {
                // moved now sits on the other side relative to w
                d[w] += if current[w] == to { -2 } else { 2 };
            }
        }
        swaps.push((a, b));
        gains.push(gain);
    }
    let mut best_k = 0;
    let mut best_total = 0;
    let mut total = 0;
    for (i, &gain) in gains.iter().enumerate() {
        total += gain;
        if total > best_total {
            best_total = total;
            best_k = i + 1;
        }
    }
    for &(a, b) in &swaps[..best_k] {
        side[a] = false;
        side[b] = true;
    }
    best_k > 0
}

/// Φ(S) = |V|·|E(S, V∖S)| / (|E|·|S|), unreduced.
pub fn edge_expansion(g: &Graph, s: &[usize]) -> Result<RationalValue> {
    let n = g.num_vertices();
    let mut side = vec![false; n];
    for &v in s {
        if v >= n {
            return Err(Error::InvalidGraph(format!("vertex {v} leaves 0..{n}")));
        }
        side[v] = true;
    }
    let size = side.iter().filter(|&&b| b).count();
    if size == 0 {
        return Err(Error::EmptySet);
    }
    if size == n {
        return Err(Error::EmptyComplement);
    }
    if g.num_edges() == 0 {
        return Err(Error::NoEdges);
    }
    Ok(RationalValue::new(n as u64 * g.cut_width(&side), (g.num_edges() * size) as u64))
}
