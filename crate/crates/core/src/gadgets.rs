//! Cube and hypercube 2-Lin-2 gadgets, and their exhaustive verification.
//!
//! A gadget places variables on the corners of a d-cube and emits one
//! equation `a·b = rhs` per cube edge, with variables valued ±1.
//!
//! Sign convention. Each u-edge equation `u·v = rhs` pins the aux corner to
//! `u·rhs`, which depends only on whether the literal is satisfied. Of the
//! four ways to choose the spin of a true variable and the rhs of a positive
//! literal, exactly two (equivalent) choices give the cube its enumerated
//! profile: 12 equations for the all-true pattern and 8 or 9 otherwise. The
//! frozen choice is [`CONVENTION`]: a true variable has spin +1 and a
//! positive literal gets rhs +1. [`select_convention`] re-derives it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{bitstring, Clause, Literal};

/// A ±1 value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// `true` for −1; the parity-bit view of a spin.
    #[inline]
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    #[inline]
    pub fn from_minus(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    #[inline]
    pub fn flip(self) -> Sign {
        Sign::from_minus(!self.is_minus())
    }

    #[inline]
    pub fn times(self, other: Sign) -> Sign {
        Sign::from_minus(self.is_minus() ^ other.is_minus())
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// The shared anchor corner is fixed to −1.
pub const ANCHOR_SPIN: Sign = Sign::Minus;

/// Equation `v(a)·v(b) = rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Equation2 {
    pub a: usize,
    pub b: usize,
    pub rhs: Sign,
}

impl Equation2 {
    pub fn new(a: usize, b: usize, rhs: Sign) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidEquation(format!("equation uses variable {a} twice")));
        }
        Ok(Equation2 { a, b, rhs })
    }

    #[inline]
    pub fn holds(&self, va: Sign, vb: Sign) -> bool {
        va.times(vb) == self.rhs
    }

    #[inline]
    pub fn satisfied_by(&self, values: &[Sign]) -> bool {
        self.holds(values[self.a], values[self.b])
    }
}

/// How Boolean values become spins and which rhs a positive literal gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignConvention {
    /// Spin of a variable whose Boolean value is 1.
    pub true_spin: Sign,
    /// rhs of a u-edge whose literal is positive; negative literals get the opposite.
    pub positive_rhs: Sign,
}

impl SignConvention {
    pub fn encode(&self, x: bool) -> Sign {
        if x {
            self.true_spin
        } else {
            self.true_spin.flip()
        }
    }

    pub fn decode(&self, s: Sign) -> bool {
        s == self.true_spin
    }

    pub fn edge_rhs(&self, lit: Literal) -> Sign {
        if lit.negated {
            self.positive_rhs.flip()
        } else {
            self.positive_rhs
        }
    }
}

pub const CONVENTION: SignConvention = SignConvention { true_spin: Sign::Plus, positive_rhs: Sign::Plus };

/// Candidates in the order they are tried; the first keeps the literal
/// encoding "u = −1 when x = 1".
pub fn candidate_conventions() -> [SignConvention; 4] {
    [
        SignConvention { true_spin: Sign::Minus, positive_rhs: Sign::Plus },
        SignConvention { true_spin: Sign::Plus, positive_rhs: Sign::Plus },
        SignConvention { true_spin: Sign::Minus, positive_rhs: Sign::Minus },
        SignConvention { true_spin: Sign::Plus, positive_rhs: Sign::Minus },
    ]
}

/// Whether `conv` gives the cube gadget its enumerated profile (all-true ↦
/// 12, every other pattern ↦ 8 or 9) for every literal polarity pattern.
pub fn convention_reproduces_cube_profile(conv: SignConvention) -> bool {
    (0u64..8).all(|polarity| {
        let clause = Clause::new((0..3).map(|i| Literal { var: i + 1, negated: polarity >> i & 1 == 1 }).collect());
        let mut aux = IdAllocator::new(4);
        let Ok(g) = cube_gadget_with(&clause, &mut aux, 0, |v| v as usize, conv) else {
            return false;
        };
        let Ok(table) = verify_gadget(&g) else {
            return false;
        };
        (0..8).all(|p| {
            let v = table.max_satisfied(p);
            if p == 7 {
                v == 12
            } else {
                (8..=9).contains(&v)
            }
        })
    })
}

/// First candidate convention passing [`convention_reproduces_cube_profile`].
pub fn select_convention() -> Option<SignConvention> {
    candidate_conventions().into_iter().find(|&c| convention_reproduces_cube_profile(c))
}

/// Hands out consecutive fresh variable ids.
#[derive(Debug, Clone)]
pub struct IdAllocator {
    next: usize,
}

impl IdAllocator {
    pub fn new(first: usize) -> Self {
        IdAllocator { next: first }
    }

    pub fn fresh(&mut self) -> usize {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn peek(&self) -> usize {
        self.next
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub equations: Vec<Equation2>,
    /// One id per clause slot, in clause order.
    pub u_vars: Vec<usize>,
    pub aux_vars: Vec<usize>,
    pub anchor: Option<usize>,
    /// The clause's literals; their polarities set the u-edge rhs.
    pub literals: Vec<Literal>,
    pub convention: SignConvention,
}

impl GadgetInstance {
    pub fn arity(&self) -> usize {
        self.literals.len()
    }

    /// Spins of the u-variables when literal `i` is satisfied iff bit `i` of
    /// `pattern` is set.
    pub fn u_values(&self, pattern: u64) -> Vec<Sign> {
        self.literals
            .iter()
            .enumerate()
            .map(|(i, l)| self.convention.encode((pattern >> i & 1 == 1) ^ l.negated))
            .collect()
    }
}

enum Corner {
    Anchor,
    U(usize),
    Aux,
}

fn build_on_cube(
    clause: &Clause,
    dimension: u32,
    corners: impl Fn(u32) -> Corner,
    aux: &mut IdAllocator,
    anchor: Option<usize>,
    u_of_var: impl Fn(u32) -> usize,
    conv: SignConvention,
) -> Result<GadgetInstance> {
    let u_vars: Vec<usize> = clause.literals.iter().map(|l| u_of_var(l.var)).collect();
    let size = 1u32 << dimension;
    let mut ids = vec![0usize; size as usize];
    let mut aux_vars = Vec::new();
    // which slot owns each u corner, for rhs lookup
    let mut slot_of = vec![None; size as usize];
    for code in 0..size {
        ids[code as usize] = match corners(code) {
            Corner::Anchor => anchor.expect("anchor corner requires an anchor id"),
            Corner::U(slot) => {
                slot_of[code as usize] = Some(slot);
                u_vars[slot]
            }
            Corner::Aux => {
                let id = aux.fresh();
                aux_vars.push(id);
                id
            }
        };
    }
    let mut equations = Vec::with_capacity((dimension as usize) << (dimension - 1));
    for code in 0..size {
        for bit in 0..dimension {
            if code >> bit & 1 == 1 {
                continue;
            }
            let other = code | 1 << bit;
            // put the non-aux endpoint first
            let (fixed, free) = match (&corners(code), &corners(other)) {
                (Corner::Aux, _) => (other, code),
                _ => (code, other),
            };
            let rhs = match corners(fixed) {
                Corner::Anchor => Sign::Minus,
                Corner::U(_) => conv.edge_rhs(clause.literals[slot_of[fixed as usize].unwrap()]),
                Corner::Aux => {
                    return Err(Error::InvalidEquation("gadget cube has an aux-aux edge".into()));
                }
            };
            equations.push(Equation2::new(ids[fixed as usize], ids[free as usize], rhs)?);
        }
    }
    Ok(GadgetInstance {
        equations,
        u_vars,
        aux_vars,
        anchor,
        literals: clause.literals.clone(),
        convention: conv,
    })
}

/// Three-dimensional cube gadget for a 3-literal clause.
///
/// Corner codes read `μ1μ2μ3` with `μ1` the most significant bit: the anchor
/// sits at 000, slot i at the corner whose only zero is `μi` (011, 101, 110),
/// and aux variables at 001, 010, 100, 111 in that order.
pub fn cube_gadget(
    clause: &Clause,
    aux: &mut IdAllocator,
    anchor: usize,
    u_of_var: impl Fn(u32) -> usize,
) -> Result<GadgetInstance> {
    cube_gadget_with(clause, aux, anchor, u_of_var, CONVENTION)
}

pub fn cube_gadget_with(
    clause: &Clause,
    aux: &mut IdAllocator,
    anchor: usize,
    u_of_var: impl Fn(u32) -> usize,
    conv: SignConvention,
) -> Result<GadgetInstance> {
    if clause.arity() != 3 {
        return Err(Error::ArityMismatch { expected: 3, found: clause.arity() });
    }
    clause.check_distinct()?;
    let corners = |code: u32| match code {
        0b000 => Corner::Anchor,
        0b011 => Corner::U(0),
        0b101 => Corner::U(1),
        0b110 => Corner::U(2),
        _ => Corner::Aux,
    };
    build_on_cube(clause, 3, corners, aux, Some(anchor), u_of_var, conv)
}

/// (log₂k + 1)-dimensional hypercube gadget for a k-literal clause, k a power
/// of two and at least 4. The k even-weight corners, in increasing code
/// order, hold the clause's u-variables; the k odd-weight corners are aux.
/// There is no anchor.
pub fn hypercube_gadget(clause: &Clause, aux: &mut IdAllocator, u_of_var: impl Fn(u32) -> usize) -> Result<GadgetInstance> {
    hypercube_gadget_with(clause, aux, u_of_var, CONVENTION)
}

pub fn hypercube_gadget_with(
    clause: &Clause,
    aux: &mut IdAllocator,
    u_of_var: impl Fn(u32) -> usize,
    conv: SignConvention,
) -> Result<GadgetInstance> {
    let k = clause.arity();
    if !k.is_power_of_two() {
        return Err(Error::KNotPowerOfTwo(k));
    }
    if k < 4 {
        return Err(Error::ArityTooSmall { arity: k, min: 4 });
    }
    clause.check_distinct()?;
    let dimension = k.trailing_zeros() + 1;
    let even: Vec<u32> = (0..1u32 << dimension).filter(|c| c.count_ones() % 2 == 0).collect();
    let corners = |code: u32| match even.binary_search(&code) {
        Ok(slot) => Corner::U(slot),
        Err(_) => Corner::Aux,
    };
    build_on_cube(clause, dimension, corners, aux, None, u_of_var, conv)
}

/// Largest aux count [`verify_gadget`] will enumerate.
pub const MAX_VERIFY_AUX: usize = 24;

/// Per-pattern maximum number of simultaneously satisfiable equations.
/// Pattern bit `i` is set when literal `i` is satisfied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetTable {
    pub arity: usize,
    pub num_equations: u32,
    pub max_satisfied: Vec<u32>,
}

impl GadgetTable {
    pub fn max_satisfied(&self, pattern: u64) -> u32 {
        self.max_satisfied[pattern as usize]
    }

    pub fn deficit(&self, pattern: u64) -> u32 {
        self.num_equations - self.max_satisfied(pattern)
    }

    pub fn all_true(&self) -> u64 {
        (1u64 << self.arity) - 1
    }

    pub fn patterns(&self) -> impl Iterator<Item = u64> {
        0..1u64 << self.arity
    }

    /// Smallest deficit over patterns other than all-true.
    pub fn min_nontrivial_deficit(&self) -> Option<u32> {
        let all = self.all_true();
        self.patterns().filter(|&p| p != all).map(|p| self.deficit(p)).min()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["pattern", "max_satisfied", "deficit"])?;
        for p in self.patterns() {
            w.write_record([
                bitstring(p, self.arity),
                self.max_satisfied(p).to_string(),
                self.deficit(p).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fills in the table by brute force over every aux assignment, with the
/// anchor at −1 and u-variables set from each literal-satisfaction pattern.
pub fn verify_gadget(g: &GadgetInstance) -> Result<GadgetTable> {
    let aux_count = g.aux_vars.len();
    if aux_count > MAX_VERIFY_AUX {
        return Err(Error::TooManyAux { aux: aux_count, limit: MAX_VERIFY_AUX });
    }
    let k = g.arity();
    let max_satisfied = (0..1u64 << k)
        .into_par_iter()
        .map(|pattern| best_for_pattern(g, pattern))
        .collect::<Result<Vec<_>>>()?;
    Ok(GadgetTable { arity: k, num_equations: g.equations.len() as u32, max_satisfied })
}

enum Term {
    Fixed(Sign),
    Aux(usize),
}

fn best_for_pattern(g: &GadgetInstance, pattern: u64) -> Result<u32> {
    let u_values = g.u_values(pattern);
    let term = |id: usize| -> Result<Term> {
        if Some(id) == g.anchor {
            return Ok(Term::Fixed(ANCHOR_SPIN));
        }
        if let Some(slot) = g.u_vars.iter().position(|&u| u == id) {
            return Ok(Term::Fixed(u_values[slot]));
        }
        g.aux_vars
            .iter()
            .position(|&a| a == id)
            .map(Term::Aux)
            .ok_or_else(|| Error::InvalidEquation(format!("variable {id} is not part of the gadget")))
    };
    // constant part plus (aux mask, parity wanted) pairs
    let mut constant = 0u32;
    let mut checks: Vec<(u64, bool)> = Vec::with_capacity(g.equations.len());
    for e in &g.equations {
        // each equation becomes: xor of selected aux minus-bits == wanted
        let mut wanted = e.rhs.is_minus();
        let mut mask = 0u64;
        for id in [e.a, e.b] {
            match term(id)? {
                Term::Fixed(s) => wanted ^= s.is_minus(),
                Term::Aux(j) => mask ^= 1 << j,
            }
        }
        if mask == 0 {
            constant += (!wanted) as u32;
        } else {
            checks.push((mask, wanted));
        }
    }
    let best = (0..1u64 << g.aux_vars.len())
        .map(|assign| {
            checks
                .iter()
                .filter(|&&(mask, wanted)| ((assign & mask).count_ones() % 2 == 1) == wanted)
                .count() as u32
        })
        .max()
        .unwrap_or(0);
    Ok(constant + best)
}
