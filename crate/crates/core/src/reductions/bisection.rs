use std::ops::Range;

use num_traits::{ToPrimitive, Zero};

use super::require_and;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{round_half_up, BiasedAssignment, Formula, Literal, Prob, RationalValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    Literal(Literal),
    /// Non-connecting member `index` (1-based within the cluster) of a clause cluster.
    Cluster { clause: usize, index: usize },
    Connecting { clause: usize },
    Balancer,
    /// Isolated vertex added to make the vertex count even.
    Pad,
}

/// The cluster graph for an AND formula.
///
/// Vertex layout: literal vertices first (`2(x−1)` for `x`, `2(x−1)+1` for
/// `¬x`), then one block of m′ vertices per clause whose first vertex is the
/// connecting vertex, then the m″ balancer vertices, then the optional pad.
///
/// Cliques are kept implicit; [`BisectionGraph::edges`] materializes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisectionGraph {
    pub n_prime: usize,
    pub m_prime: usize,
    pub k: usize,
    /// Number of clusters a completeness-side cut takes: round(ρ·m′).
    pub quota: usize,
    pub m_double_prime: usize,
    pub padded: bool,
    pub rho: Prob,
    pub epsilon: Prob,
    clauses: Vec<Vec<Literal>>,
}

fn choose2(x: usize) -> usize {
    x * x.saturating_sub(1) / 2
}

impl BisectionGraph {
    pub fn num_vertices(&self) -> usize {
        2 * self.n_prime + self.m_prime * self.m_prime + self.m_double_prime + self.padded as usize
    }

    pub fn num_edges(&self) -> usize {
        self.m_prime * choose2(self.m_prime) + choose2(self.m_double_prime) + self.k * self.m_prime
    }

    pub fn clause_literals(&self, clause: usize) -> &[Literal] {
        &self.clauses[clause]
    }

    pub fn literal_vertex(&self, lit: Literal) -> usize {
        2 * (lit.var as usize - 1) + lit.negated as usize
    }

    pub fn cluster_range(&self, clause: usize) -> Range<usize> {
        let start = 2 * self.n_prime + clause * self.m_prime;
        start..start + self.m_prime
    }

    pub fn connecting_vertex(&self, clause: usize) -> usize {
        self.cluster_range(clause).start
    }

    pub fn balancer_range(&self) -> Range<usize> {
        let start = 2 * self.n_prime + self.m_prime * self.m_prime;
        start..start + self.m_double_prime
    }

    pub fn pad_vertex(&self) -> Option<usize> {
        self.padded.then(|| self.num_vertices() - 1)
    }

    pub fn role(&self, v: usize) -> VertexRole {
        let lits = 2 * self.n_prime;
        if v < lits {
            return VertexRole::Literal(Literal { var: (v / 2 + 1) as u32, negated: v % 2 == 1 });
        }
        let clusters_end = lits + self.m_prime * self.m_prime;
        if v < clusters_end {
            let offset = v - lits;
            let (clause, index) = (offset / self.m_prime, offset % self.m_prime);
            return if index == 0 {
                VertexRole::Connecting { clause }
            } else {
                VertexRole::Cluster { clause, index }
            };
        }
        if v < clusters_end + self.m_double_prime {
            VertexRole::Balancer
        } else {
            VertexRole::Pad
        }
    }

    /// Literal-vertex to connecting-vertex edges.
    pub fn bipartite_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.clauses.iter().enumerate().flat_map(move |(c, lits)| {
            let conn = self.connecting_vertex(c);
            lits.iter().map(move |&l| (self.literal_vertex(l), conn))
        })
    }

    fn clique(range: Range<usize>) -> impl Iterator<Item = (usize, usize)> {
        let end = range.end;
        range.flat_map(move |a| (a + 1..end).map(move |b| (a, b)))
    }

    /// Every edge: cluster cliques, the balancer clique, then bipartite edges.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m_prime)
            .flat_map(move |c| Self::clique(self.cluster_range(c)))
            .chain(Self::clique(self.balancer_range()))
            .chain(self.bipartite_edges())
    }

    pub fn degree(&self, v: usize) -> usize {
        match self.role(v) {
            VertexRole::Literal(l) => self.clauses.iter().filter(|c| c.contains(&l)).count(),
            VertexRole::Connecting { .. } => self.m_prime - 1 + self.k,
            VertexRole::Cluster { .. } => self.m_prime - 1,
            VertexRole::Balancer => self.m_double_prime - 1,
            VertexRole::Pad => 0,
        }
    }

    /// Cut width of a side assignment, counted per structure rather than per edge.
    pub fn cut_width(&self, side: &[bool]) -> u64 {
        assert_eq!(side.len(), self.num_vertices(), "side must cover every vertex");
        let clique_cut = |range: Range<usize>| {
            let size = range.len() as u64;
            let inside = side[range].iter().filter(|&&s| s).count() as u64;
            inside * (size - inside)
        };
        let clusters: u64 = (0..self.m_prime).map(|c| clique_cut(self.cluster_range(c))).sum();
        let bipartite = self.bipartite_edges().filter(|&(a, b)| side[a] != side[b]).count() as u64;
        clusters + clique_cut(self.balancer_range()) + bipartite
    }

    /// Materializes the graph; only sensible at small sizes.
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.num_vertices(), self.edges()).expect("cluster graph edges are simple")
    }
}

/// Builds the cluster graph with m′ = clause count and n′ = variable count.
///
/// The quota is q = round(ρm′) and the balancer has
/// m″ = round(|2q/m′ − 1 + ε|·m′²) vertices, so a side made of n′ literals
/// and q whole clusters is exactly half the graph when ε = 0: the balancer
/// sits opposite those clusters when q > m′/2 and joins them when q < m′/2.
pub fn and_to_bisection(f: &Formula, rho: Prob, epsilon: Prob) -> Result<BisectionGraph> {
    require_and(f)?;
    if f.m() == 0 {
        return Err(Error::EmptyFormula);
    }
    if rho <= Prob::zero() || rho > Prob::from_integer(1) {
        return Err(Error::RhoOutOfRange(rho.to_string()));
    }
    if epsilon < Prob::zero() {
        return Err(Error::InvalidParams(format!("epsilon = {epsilon} must be non-negative")));
    }
    for c in &f.clauses {
        c.check_distinct()?;
    }
    let m_prime = f.m();
    let quota = round_half_up(rho * Prob::from_integer(m_prime as i64)) as usize;
    let squared = Prob::from_integer((m_prime * m_prime) as i64);
    let twice_quota_rows = Prob::from_integer((2 * quota * m_prime) as i64);
    let m_double_prime = round_half_up(num_traits::Signed::abs(&(twice_quota_rows - squared + epsilon * squared))) as usize;
    let unpadded = 2 * f.n + m_prime * m_prime + m_double_prime;
    Ok(BisectionGraph {
        n_prime: f.n,
        m_prime,
        k: f.k,
        quota,
        m_double_prime,
        padded: unpadded % 2 == 1,
        rho,
        epsilon,
        clauses: f.clauses.iter().map(|c| c.literals.clone()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessCut {
    /// `true` marks membership in S.
    pub side: Vec<bool>,
    pub width: u64,
    pub m_prime: usize,
}

impl CompletenessCut {
    pub fn size(&self) -> usize {
        self.side.iter().filter(|&&s| s).count()
    }

    /// Width in units of m′.
    pub fn width_per_clause(&self) -> RationalValue {
        RationalValue::new(self.width, self.m_prime as u64)
    }

    pub fn width_per_clause_f64(&self) -> f64 {
        self.width_per_clause().to_ratio().to_f64().unwrap_or(f64::NAN)
    }
}

/// The completeness-side bisection: literal vertices true under ψ, every
/// vertex of the selected clusters, topped up to half with the pad and then
/// balancer vertices.
pub fn completeness_cut(g: &BisectionGraph, psi: &BiasedAssignment, selected: &[usize]) -> Result<CompletenessCut> {
    if psi.n() != g.n_prime {
        return Err(Error::InvalidParams(format!(
            "assignment covers {} variables, graph has {}",
            psi.n(),
            g.n_prime
        )));
    }
    if selected.len() != g.quota {
        return Err(Error::QuotaMismatch { selected: selected.len(), quota: g.quota });
    }
    let mut seen = vec![false; g.m_prime];
    for &c in selected {
        if c >= g.m_prime || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidParams(format!("clause index {c} is out of range or repeated")));
        }
        if !g.clauses[c].iter().all(|l| l.eval(&psi.bits)) {
            return Err(Error::InconsistentWitness { clause: c });
        }
    }

    let n = g.num_vertices();
    let half = n / 2;
    let mut side = vec![false; n];
    for (i, &b) in psi.bits.iter().enumerate() {
        side[2 * i + (!b) as usize] = true;
    }
    for &c in selected {
        side[g.cluster_range(c)].fill(true);
    }
    let size = g.n_prime + g.quota * g.m_prime;
    let spare = g.m_double_prime + g.padded as usize;
    if size > half || half - size > spare {
        return Err(Error::Unbalanceable { side: size, half, spare });
    }
    let fill = g.pad_vertex().into_iter().chain(g.balancer_range()).take(half - size);
    for v in fill {
        side[v] = true;
    }
    let width = g.cut_width(&side);
    Ok(CompletenessCut { side, width, m_prime: g.m_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Clause, FormulaKind};

    fn formula(n: usize, clauses: &[[i64; 3]]) -> Formula {
        let clauses = clauses
            .iter()
            .map(|c| Clause::new(c.iter().map(|&x| Literal::from_signed(x).unwrap()).collect()))
            .collect();
        Formula::new(n, 3, FormulaKind::And, clauses).unwrap()
    }

    #[test]
    fn small_construction_counts() {
        let f = formula(2, &[[1, 2, -1], [1, -2, 2], [-1, 2, 1]]);
        // repeated variables are rejected
        assert!(and_to_bisection(&f, Prob::new(2, 3), Prob::zero()).is_err());

        let f = Formula::new(
            4,
            3,
            FormulaKind::And,
            vec![
                Clause::new(vec![Literal::pos(1), Literal::pos(2), Literal::neg(3)]),
                Clause::new(vec![Literal::pos(2), Literal::pos(3), Literal::pos(4)]),
                Clause::new(vec![Literal::neg(1), Literal::pos(2), Literal::neg(4)]),
            ],
        )
        .unwrap();
        let g = and_to_bisection(&f, Prob::new(2, 3), Prob::zero()).unwrap();
        assert_eq!(g.m_double_prime, 3);
        assert_eq!(g.num_vertices(), 8 + 9 + 3);
        assert!(!g.padded);
        assert_eq!(g.edges().count(), g.num_edges());
        for c in 0..3 {
            assert_eq!(g.degree(g.connecting_vertex(c)), 2 + 3);
        }
    }

    #[test]
    fn rejects_bad_rho_and_empty_formula() {
        let f = formula(3, &[[1, 2, 3]]);
        assert!(matches!(
            and_to_bisection(&f, Prob::new(6, 5), Prob::zero()),
            Err(Error::RhoOutOfRange(_))
        ));
        let empty = formula(3, &[]);
        assert_eq!(and_to_bisection(&empty, Prob::new(1, 2), Prob::zero()), Err(Error::EmptyFormula));
    }

    #[test]
    fn roles_follow_layout() {
        let f = formula(3, &[[1, 2, 3], [-1, 2, -3]]);
        let g = and_to_bisection(&f, Prob::new(1, 2), Prob::zero()).unwrap();
        assert_eq!(g.role(0), VertexRole::Literal(Literal::pos(1)));
        assert_eq!(g.role(5), VertexRole::Literal(Literal::neg(3)));
        assert_eq!(g.role(6), VertexRole::Connecting { clause: 0 });
        assert_eq!(g.role(7), VertexRole::Cluster { clause: 0, index: 1 });
        assert_eq!(g.role(8), VertexRole::Connecting { clause: 1 });
    }

    #[test]
    fn completeness_cut_recount() {
        let f = formula(3, &[[1, 2, 3], [1, 2, -3], [-1, 2, 3], [1, -2, 3]]);
        let psi = BiasedAssignment::all_ones(3);
        let g = and_to_bisection(&f, Prob::new(1, 4), Prob::zero()).unwrap();
        let cut = completeness_cut(&g, &psi, &[0]).unwrap();
        assert_eq!(cut.size(), g.num_vertices() / 2);
        assert_eq!(cut.width, g.to_graph().cut_width(&cut.side));
        // true literals in the three unselected clauses: 2 + 2 + 2
        assert_eq!(cut.width, 6);
    }

    #[test]
    fn completeness_cut_errors() {
        let f = formula(3, &[[1, 2, 3], [1, 2, -3]]);
        let psi = BiasedAssignment::all_ones(3);
        let g = and_to_bisection(&f, Prob::new(1, 1), Prob::zero()).unwrap();
        assert_eq!(
            completeness_cut(&g, &psi, &[0]),
            Err(Error::QuotaMismatch { selected: 1, quota: 2 })
        );
        assert_eq!(completeness_cut(&g, &psi, &[0, 1]), Err(Error::InconsistentWitness { clause: 1 }));
    }
}
