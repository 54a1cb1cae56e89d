//! Shared domain types: literals, clauses, predicates, formulas, biased
//! assignments, exact fractions and the parameter record.
//!
//! Boolean convention throughout: `true` is 1. The ±1 world only appears in
//! [`crate::gadgets`] and the 2-Lin-2 instances built from them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for probabilities and densities (β, γ, Δ, ε, ρ).
pub type Prob = Ratio<i64>;

/// α = β + γ − 2βγ, the probability that a literal slot is falsified by a
/// maximally γ-biased assignment when literals are negated with probability β.
///
/// Exact for exact inputs (`Ratio`), and usable on `f64` as well.
pub fn alpha<T>(beta: T, gamma: T) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + One,
{
    let two = T::one() + T::one();
    beta + gamma - two * beta * gamma
}

/// Rounds half up: ⌊r + ½⌋.
pub fn round_half_up(r: Prob) -> i64 {
    (r + Prob::new(1, 2)).floor().to_integer()
}

/// Parses `0.25`, `1/4`, `3` or `1e-3` into an exact rational.
pub fn parse_rational(s: &str) -> std::result::Result<Prob, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let den: i64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if den == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Prob::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: {s:?}"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: {s:?}"));
    }
    let scale = frac_part.len() as i32 - exponent;
    let joined = format!("{int_part}{frac_part}");
    let mut num: i64 = if joined.is_empty() { 0 } else { joined.parse().map_err(|_| format!("out of range: {s:?}"))? };
    let mut den: i64 = 1;
    let pow = |e: i32| -> std::result::Result<i64, String> {
        10i64.checked_pow(e as u32).ok_or_else(|| format!("out of range: {s:?}"))
    };
    if scale >= 0 {
        den = pow(scale)?;
    } else {
        num = num.checked_mul(pow(-scale)?).ok_or_else(|| format!("out of range: {s:?}"))?;
    }
    if negative {
        num = -num;
    }
    Ok(Prob::new(num, den))
}

pub fn prob_to_f64(p: Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

/// An exact count-over-total fraction.
///
/// Kept unreduced so reports show the raw counts; equality and ordering
/// compare values.
#[derive(Debug, Clone, Copy)]
pub struct RationalValue {
    pub numerator: u64,
    pub denominator: u64,
}

impl RationalValue {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "RationalValue denominator must be positive");
        RationalValue { numerator, denominator }
    }

    pub fn zero() -> Self {
        RationalValue::new(0, 1)
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn to_ratio(self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn is_zero(self) -> bool {
        self.numerator == 0
    }

    /// Compares against an `i64` rational without floating point.
    pub fn cmp_prob(self, p: Prob) -> Ordering {
        let lhs = self.numerator as i128 * *p.denom() as i128;
        let rhs = *p.numer() as i128 * self.denominator as i128;
        lhs.cmp(&rhs)
    }
}

impl PartialEq for RationalValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RationalValue {}

impl PartialOrd for RationalValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, negated: true }
    }

    /// DIMACS-style signed integer.
    pub fn from_signed(x: i64) -> Option<Self> {
        if x == 0 || x.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal { var: x.unsigned_abs() as u32, negated: x < 0 })
    }

    pub fn to_signed(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    /// Truth value of the literal under `bits` (index `var - 1`).
    #[inline]
    pub fn eval(self, bits: &[bool]) -> bool {
        bits[self.var as usize - 1] ^ self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn arity(&self) -> usize {
        self.literals.len()
    }

    pub fn check_distinct(&self) -> Result<()> {
        for (i, a) in self.literals.iter().enumerate() {
            if self.literals[..i].iter().any(|b| b.var == a.var) {
                return Err(Error::RepeatedVariable { var: a.var });
            }
        }
        Ok(())
    }

    /// Bit `i` is set when literal `i` is true under `bits`.
    #[inline]
    pub fn pattern(&self, bits: &[bool]) -> u64 {
        self.literals
            .iter()
            .enumerate()
            .fold(0, |acc, (i, l)| acc | ((l.eval(bits) as u64) << i))
    }
}

/// A k-ary Boolean predicate given by its support. Tuple bit `i` holds
/// coordinate `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    arity: usize,
    support: BTreeSet<u64>,
}

impl Predicate {
    pub fn new(arity: usize, support: impl IntoIterator<Item = u64>) -> Result<Self> {
        if arity == 0 || arity > 32 {
            return Err(Error::InvalidPredicate(format!("arity {arity} is outside 1..=32")));
        }
        let support: BTreeSet<u64> = support.into_iter().collect();
        if support.is_empty() {
            return Err(Error::InvalidPredicate("support is empty".into()));
        }
        if let Some(&t) = support.iter().find(|&&t| t >> arity != 0) {
            return Err(Error::InvalidPredicate(format!("tuple {t:#b} is wider than arity {arity}")));
        }
        Ok(Predicate { arity, support })
    }

    /// Builds a predicate from bitstrings such as `"110"`, character `i`
    /// being coordinate `i`.
    pub fn from_bitstrings<S: AsRef<str>>(arity: usize, tuples: &[S]) -> Result<Self> {
        let support = tuples
            .iter()
            .map(|t| parse_bitstring(t.as_ref(), arity))
            .collect::<Result<Vec<_>>>()?;
        Predicate::new(arity, support)
    }

    /// k-ary parity: odd number of ones.
    pub fn parity(arity: usize) -> Result<Self> {
        Predicate::new(arity, (0..1u64 << arity).filter(|t| t.count_ones() % 2 == 1))
    }

    pub fn and(arity: usize) -> Result<Self> {
        Predicate::new(arity, [(1u64 << arity) - 1])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn support(&self) -> &BTreeSet<u64> {
        &self.support
    }

    pub fn accepts(&self, tuple: u64) -> bool {
        self.support.contains(&tuple)
    }
}

pub fn parse_bitstring(s: &str, arity: usize) -> Result<u64> {
    if s.len() != arity {
        return Err(Error::InvalidPredicate(format!("tuple {s:?} does not have length {arity}")));
    }
    s.chars().enumerate().try_fold(0u64, |acc, (i, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | (1 << i)),
        _ => Err(Error::InvalidPredicate(format!("tuple {s:?} is not a bitstring"))),
    })
}

pub fn bitstring(tuple: u64, arity: usize) -> String {
    (0..arity).map(|i| if tuple >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// Balanced pairwise independence: every pair of coordinates of a uniformly
/// drawn support tuple is uniform on {0,1}².
pub fn is_balanced_pairwise_independent(c: &Predicate) -> Result<bool> {
    if c.arity < 2 {
        return Err(Error::ArityTooSmall { arity: c.arity, min: 2 });
    }
    let size = c.support.len();
    // exact test: count * 4 == size
    if !size.is_multiple_of(4) {
        return Ok(false);
    }
    for i in 0..c.arity {
        for j in i + 1..c.arity {
            let mut counts = [0usize; 4];
            for &t in &c.support {
                counts[((t >> i & 1) | (t >> j & 1) << 1) as usize] += 1;
            }
            if counts.iter().any(|&n| 4 * n != size) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Xor,
    And,
    General(Predicate),
}

impl FormulaKind {
    pub fn name(&self) -> &'static str {
        match self {
            FormulaKind::Xor => "xor",
            FormulaKind::And => "and",
            FormulaKind::General(_) => "gen",
        }
    }

    /// Arity fixed by the kind itself, if any.
    pub fn fixed_arity(&self) -> Option<usize> {
        match self {
            FormulaKind::General(p) => Some(p.arity()),
            _ => None,
        }
    }

    /// Whether a clause whose literal-truth tuple is `pattern` is satisfied.
    #[inline]
    pub fn accepts(&self, pattern: u64, k: usize) -> bool {
        match self {
            FormulaKind::Xor => pattern.count_ones() % 2 == 1,
            FormulaKind::And => pattern == (1u64 << k) - 1,
            FormulaKind::General(p) => p.accepts(pattern),
        }
    }
}

pub fn clause_satisfied(clause: &Clause, kind: &FormulaKind, psi: &BiasedAssignment) -> Result<bool> {
    if let Some(expected) = kind.fixed_arity() {
        if expected != clause.arity() {
            return Err(Error::ArityMismatch { expected, found: clause.arity() });
        }
    }
    if let Some(l) = clause.literals.iter().find(|l| l.var == 0 || l.var as usize > psi.n()) {
        return Err(Error::VariableOutOfRange { var: l.var, n: psi.n() });
    }
    Ok(kind.accepts(clause.pattern(&psi.bits), clause.arity()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub n: usize,
    pub k: usize,
    pub kind: FormulaKind,
    pub clauses: Vec<Clause>,
    /// Imbalance used at generation time, if known.
    pub beta: Option<Prob>,
}

impl Formula {
    pub fn new(n: usize, k: usize, kind: FormulaKind, clauses: Vec<Clause>) -> Result<Self> {
        if k == 0 || k > 32 {
            return Err(Error::InvalidParams(format!("arity {k} is outside 1..=32")));
        }
        if let Some(expected) = kind.fixed_arity() {
            if expected != k {
                return Err(Error::ArityMismatch { expected, found: k });
            }
        }
        for c in &clauses {
            if c.arity() != k {
                return Err(Error::ArityMismatch { expected: k, found: c.arity() });
            }
            if let Some(l) = c.literals.iter().find(|l| l.var == 0 || l.var as usize > n) {
                return Err(Error::VariableOutOfRange { var: l.var, n });
            }
        }
        Ok(Formula { n, k, kind, clauses, beta: None })
    }

    pub fn with_beta(mut self, beta: Prob) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clause_holds(&self, clause: &Clause, bits: &[bool]) -> bool {
        self.kind.accepts(clause.pattern(bits), self.k)
    }

    pub fn satisfied_count(&self, psi: &BiasedAssignment) -> usize {
        assert_eq!(psi.n(), self.n, "assignment length must equal variable count");
        self.clauses.iter().filter(|c| self.clause_holds(c, &psi.bits)).count()
    }

    /// Fraction of satisfied clauses; `0/1` for an empty formula.
    pub fn value(&self, psi: &BiasedAssignment) -> RationalValue {
        RationalValue::new(self.satisfied_count(psi) as u64, self.m().max(1) as u64)
    }

    /// Same clauses read as a different kind of constraint.
    pub fn with_kind(&self, kind: FormulaKind) -> Result<Self> {
        let mut f = Formula::new(self.n, self.k, kind, self.clauses.clone())?;
        f.beta = self.beta;
        Ok(f)
    }
}

/// Assignment to `n` variables, `bits[i]` holding variable `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiasedAssignment {
    pub bits: Vec<bool>,
}

impl BiasedAssignment {
    pub fn new(bits: Vec<bool>) -> Self {
        BiasedAssignment { bits }
    }

    pub fn all_ones(n: usize) -> Self {
        BiasedAssignment { bits: vec![true; n] }
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn zero_count(&self) -> usize {
        self.bits.iter().filter(|&&b| !b).count()
    }

    pub fn zero_fraction(&self) -> RationalValue {
        RationalValue::new(self.zero_count() as u64, self.n().max(1) as u64)
    }

    /// γ-biased means at most ⌊γn⌋ zeros.
    pub fn is_biased(&self, gamma: Prob) -> bool {
        self.zero_count() <= max_zeros(gamma, self.n())
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse { line: 1, msg: format!("bad assignment character {c:?}") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(BiasedAssignment::new)
    }
}

/// ⌊γn⌋, clamped to `[0, n]`.
pub fn max_zeros(gamma: Prob, n: usize) -> usize {
    let z = (gamma * Prob::from_integer(n as i64)).floor().to_integer();
    z.clamp(0, n as i64) as usize
}

/// Every symbol the constructions are parameterized by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    /// Clauses per variable.
    pub delta: Prob,
    pub beta: Prob,
    pub gamma: Prob,
    pub epsilon: Prob,
    pub k: usize,
    pub seed: u64,
}

impl Params {
    pub fn new(n: usize, k: usize, delta: Prob, beta: Prob, seed: u64) -> Self {
        Params {
            n,
            delta,
            beta,
            gamma: Prob::zero(),
            epsilon: Prob::new(1, 100),
            k,
            seed,
        }
    }

    pub fn with_gamma(mut self, gamma: Prob) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_epsilon(mut self, epsilon: Prob) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// m = round(Δn), ties up.
    pub fn clause_count(&self) -> usize {
        round_half_up(self.delta * Prob::from_integer(self.n as i64)).max(0) as usize
    }

    pub fn alpha(&self) -> Prob {
        alpha(self.beta, self.gamma)
    }

    /// Full invariant: 0 ≤ γ < β < ½, Δ > 0, ε > 0.
    pub fn validate(&self) -> Result<()> {
        let half = Prob::new(1, 2);
        if self.gamma < Prob::zero() {
            return Err(Error::InvalidParams(format!("gamma = {} is negative", self.gamma)));
        }
        if self.gamma >= self.beta {
            return Err(Error::ParamOrderViolated { beta: self.beta.to_string(), gamma: self.gamma.to_string() });
        }
        if self.beta >= half {
            return Err(Error::InvalidParams(format!("beta = {} must be below 1/2", self.beta)));
        }
        if self.delta <= Prob::zero() {
            return Err(Error::InvalidParams(format!("delta = {} must be positive", self.delta)));
        }
        if self.epsilon <= Prob::zero() {
            return Err(Error::InvalidParams(format!("epsilon = {} must be positive", self.epsilon)));
        }
        Ok(())
    }
}
