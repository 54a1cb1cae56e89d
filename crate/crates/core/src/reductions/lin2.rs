use std::ops::Range;

use rayon::prelude::*;

use super::require_and;
use crate::error::{Error, Result};
use crate::gadgets::{cube_gadget, hypercube_gadget, Equation2, GadgetInstance, IdAllocator, Sign};
use crate::model::Formula;

/// A system of two-variable ±1 equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lin2Instance {
    pub num_vars: usize,
    /// Variable held at −1, if the instance has one.
    pub anchor: Option<usize>,
    pub equations: Vec<Equation2>,
    /// Equation range emitted for each source clause.
    pub provenance: Vec<Range<usize>>,
    /// Disjoint variable groups that only meet each other through
    /// non-group variables. Solvers enumerate the rest and optimize each
    /// group on its own.
    pub aux_groups: Vec<Vec<usize>>,
}

impl Lin2Instance {
    pub fn new(num_vars: usize, anchor: Option<usize>, equations: Vec<Equation2>) -> Result<Self> {
        if let Some(a) = anchor {
            if a >= num_vars {
                return Err(Error::InvalidEquation(format!("anchor {a} is outside 0..{num_vars}")));
            }
        }
        if let Some(e) = equations.iter().find(|e| e.a >= num_vars || e.b >= num_vars || e.a == e.b) {
            return Err(Error::InvalidEquation(format!(
                "equation {} {} {} is invalid for {num_vars} variables",
                e.a, e.b, e.rhs
            )));
        }
        Ok(Lin2Instance { num_vars, anchor, equations, provenance: Vec::new(), aux_groups: Vec::new() })
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn unsatisfied_count(&self, values: &[Sign]) -> usize {
        self.equations.iter().filter(|e| !e.satisfied_by(values)).count()
    }

    /// Whether the anchor only appears in equations with rhs −1.
    pub fn anchor_edges_are_negative(&self) -> bool {
        match self.anchor {
            None => true,
            Some(a) => self.equations.iter().filter(|e| e.a == a || e.b == a).all(|e| e.rhs == Sign::Minus),
        }
    }
}

/// Replaces every clause of an AND formula by its gadget.
///
/// Variable layout for k = 3: anchor 0, variable x ↦ u-id x, then four aux
/// ids per clause in clause order. For k a power of two there is no anchor,
/// x ↦ x − 1, and k aux ids per clause follow.
pub fn and_to_min2lin2(f: &Formula) -> Result<Lin2Instance> {
    require_and(f)?;
    let k = f.k;
    let (anchor, shift) = match k {
        3 => (Some(0), 0),
        k if k.is_power_of_two() && k >= 4 => (None, 1),
        k if !k.is_power_of_two() => return Err(Error::KNotPowerOfTwo(k)),
        k => return Err(Error::ArityTooSmall { arity: k, min: 3 }),
    };
    let u_of_var = move |v: u32| v as usize - shift;
    let first_aux = if anchor.is_some() { f.n + 1 } else { f.n };
    let aux_per_clause = if k == 3 { 4 } else { k };

    let gadgets: Vec<GadgetInstance> = f
        .clauses
        .par_iter()
        .enumerate()
        .map(|(idx, clause)| {
            let mut aux = IdAllocator::new(first_aux + idx * aux_per_clause);
            match anchor {
                Some(a) => cube_gadget(clause, &mut aux, a, u_of_var),
                None => hypercube_gadget(clause, &mut aux, u_of_var),
            }
        })
        .collect::<Result<_>>()?;

    let num_vars = first_aux + f.m() * aux_per_clause;
    let mut equations = Vec::with_capacity(gadgets.iter().map(|g| g.equations.len()).sum());
    let mut provenance = Vec::with_capacity(gadgets.len());
    let mut aux_groups = Vec::with_capacity(gadgets.len());
    for g in gadgets {
        let start = equations.len();
        equations.extend_from_slice(&g.equations);
        provenance.push(start..equations.len());
        aux_groups.push(g.aux_vars);
    }
    let mut inst = Lin2Instance::new(num_vars, anchor, equations)?;
    inst.provenance = provenance;
    inst.aux_groups = aux_groups;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Clause, FormulaKind, Literal};

    #[test]
    fn single_clause_layout() {
        let c = Clause::new(vec![Literal::pos(1), Literal::pos(2), Literal::pos(3)]);
        let f = Formula::new(3, 3, FormulaKind::And, vec![c]).unwrap();
        let inst = and_to_min2lin2(&f).unwrap();
        assert_eq!(inst.num_equations(), 12);
        assert_eq!(inst.num_vars, 8);
        assert_eq!(inst.anchor, Some(0));
        assert_eq!(inst.provenance, vec![0..12]);
        assert!(inst.anchor_edges_are_negative());
    }

    #[test]
    fn equation_counts_scale_with_clauses() {
        let clauses = (0..5)
            .map(|i| Clause::new((0..4).map(|j| Literal::pos(1 + (i + j) % 6)).collect()))
            .collect();
        let f = Formula::new(6, 4, FormulaKind::And, clauses).unwrap();
        let inst = and_to_min2lin2(&f).unwrap();
        assert_eq!(inst.num_equations(), 5 * 4 * 3);
        assert_eq!(inst.anchor, None);
        assert_eq!(inst.num_vars, 6 + 5 * 4);
    }

    #[test]
    fn rejects_xor_formulas() {
        let f = Formula::new(3, 3, FormulaKind::Xor, vec![]).unwrap();
        assert_eq!(
            and_to_min2lin2(&f).unwrap_err(),
            Error::KindMismatch { expected: "and", found: "xor" }
        );
    }

    #[test]
    fn rejects_arity_five() {
        let f = Formula::new(5, 5, FormulaKind::And, vec![]).unwrap();
        assert_eq!(and_to_min2lin2(&f).unwrap_err(), Error::KNotPowerOfTwo(5));
    }
}
