//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the library's solvers or gadget verifier; each oracle
//! recomputes its quantity by plain enumeration from the definitions.

#![allow(dead_code)]

use ucsp::gadgets::Sign;
use ucsp::model::{Formula, FormulaKind, Prob};
use ucsp::reductions::Lin2Instance;

/// Best satisfied count of the 3-cube gadget for each literal-satisfaction
/// pattern (bit i set when literal i is true), rebuilt from the cube itself.
///
/// Corners are codes μ1μ2μ3 (μ1 most significant). The anchor at 000 holds
/// −1, the corners 011, 101, 110 hold literal 1, 2, 3, and the odd-weight
/// corners are free. Every cube edge joins an even and an odd corner; edges
/// at the anchor ask for product −1, edges at a literal corner ask for
/// product +1 where the literal corner carries +1 exactly when the literal
/// is true.
pub fn cube_table_oracle() -> [u32; 8] {
    let literal_corner = [0b011u32, 0b101, 0b110];
    let free: Vec<u32> = (0..8).filter(|c: &u32| c.count_ones() % 2 == 1).collect();
    let mut table = [0u32; 8];
    for (pattern, slot) in table.iter_mut().enumerate() {
        let mut best = 0;
        for assign in 0..1u32 << free.len() {
            let value = |corner: u32| -> i32 {
                if corner == 0 {
                    return -1;
                }
                if let Some(i) = literal_corner.iter().position(|&c| c == corner) {
                    return if pattern >> i & 1 == 1 { 1 } else { -1 };
                }
                let j = free.iter().position(|&c| c == corner).unwrap();
                if assign >> j & 1 == 1 {
                    -1
                } else {
                    1
                }
            };
            let mut satisfied = 0;
            for a in 0..8u32 {
                for bit in 0..3 {
                    let b = a ^ (1 << bit);
                    if a > b {
                        continue;
                    }
                    let (even, odd) = if a.count_ones() % 2 == 0 { (a, b) } else { (b, a) };
                    let want = if even == 0 { -1 } else { 1 };
                    if value(even) * value(odd) == want {
                        satisfied += 1;
                    }
                }
            }
            best = best.max(satisfied);
        }
        *slot = best;
    }
    table
}

fn literal_true(var: u32, negated: bool, bits: u64) -> bool {
    (bits >> (var - 1) & 1 == 1) != negated
}

/// min over all 2^n assignments of Σ_clauses (12 − table[pattern]).
pub fn double_brute_force(f: &Formula) -> u64 {
    assert_eq!(f.k, 3);
    let table = cube_table_oracle();
    (0..1u64 << f.n)
        .map(|bits| {
            f.clauses
                .iter()
                .map(|c| {
                    let pattern = c
                        .literals
                        .iter()
                        .enumerate()
                        .fold(0usize, |p, (i, l)| p | (literal_true(l.var, l.negated, bits) as usize) << i);
                    (12 - table[pattern]) as u64
                })
                .sum::<u64>()
        })
        .min()
        .unwrap()
}

/// Minimum unsatisfied count by enumerating every non-anchor variable.
pub fn naive_lin2(inst: &Lin2Instance, anchor: Sign) -> usize {
    let free: Vec<usize> = (0..inst.num_vars).filter(|&v| Some(v) != inst.anchor).collect();
    assert!(free.len() <= 22, "naive oracle is for small instances");
    let mut values = vec![Sign::Plus; inst.num_vars];
    (0..1u64 << free.len())
        .map(|assign| {
            for (i, &v) in free.iter().enumerate() {
                values[v] = if assign >> i & 1 == 1 { Sign::Minus } else { Sign::Plus };
            }
            if let Some(a) = inst.anchor {
                values[a] = anchor;
            }
            inst.equations
                .iter()
                .filter(|e| e.a != e.b && values[e.a].value() * values[e.b].value() != e.rhs.value())
                .count()
        })
        .min()
        .unwrap()
}

/// Largest satisfied-clause count over assignments with at most ⌊γn⌋
/// zeros, by plain enumeration.
pub fn csp_enumerate(f: &Formula, gamma: Prob) -> usize {
    // zeros ≤ γn  ⇔  zeros·den ≤ num·n
    let (num, den) = (*gamma.numer(), *gamma.denom());
    (0..1u64 << f.n)
        .filter(|bits| {
            let zeros = f.n as i64 - bits.count_ones() as i64;
            zeros * den <= num * f.n as i64
        })
        .map(|bits| {
            f.clauses
                .iter()
                .filter(|c| {
                    let trues = c.literals.iter().filter(|l| literal_true(l.var, l.negated, bits)).count();
                    match &f.kind {
                        FormulaKind::And => trues == c.literals.len(),
                        FormulaKind::Xor => trues % 2 == 1,
                        FormulaKind::General(p) => {
                            let tuple = c
                                .literals
                                .iter()
                                .enumerate()
                                .fold(0u64, |t, (i, l)| t | (literal_true(l.var, l.negated, bits) as u64) << i);
                            p.support().contains(&tuple)
                        }
                    }
                })
                .count()
        })
        .max()
        .unwrap()
}

/// (lin2_ratio, bisection_ratio) for k = 3, evaluated term by term.
pub fn gap_closed_forms_k3(beta: f64, gamma: f64) -> (f64, f64) {
    let alpha = beta + gamma - 2.0 * beta * gamma;
    let survive = (1.0 - beta) * (1.0 - beta) * (1.0 - beta);
    let c_prime = 0.5 * alpha;
    let s_prime = 0.25 * (1.0 - survive);
    let lin2 = s_prime / c_prime;
    let bisection = 2.0 * (1.0 - survive) / (1.5 * alpha) - 1.0;
    (lin2, bisection)
}

/// Relative agreement to `digits` significant digits.
pub fn agrees(a: f64, b: f64, digits: i32) -> bool {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale <= 10f64.powi(-digits)
}
