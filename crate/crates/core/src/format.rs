//! Text formats for formulas, 2-Lin-2 instances, graphs and witnesses.
//!
//! All formats are line based. Blank lines and lines starting with `c` are
//! comments, except for the structured comments below, which writers emit
//! and readers honour:
//!
//! * formulas: `c beta <rational>` records the generation imbalance;
//! * 2-Lin-2: `c group <id>...` records a variable group for the solver.
//!
//! Formula: `p ucsp <kind> <k> <n> <m>`; for kind `gen` a second header
//! `p pred <k> <size>` followed by `size` bitstrings; then `m` lines of `k`
//! signed variables terminated by `0`.
//!
//! 2-Lin-2: `p lin2 <num_vars> <num_eqs> <anchor|none>`, then `a b rhs` lines
//! with rhs `+1` or `-1`.
//!
//! Graph: `p bisect <N> <M>`, optional role lines `v <id> <role> [clause
//! [index]]`, then `e <u> <v>` lines. Literal vertices carry the signed
//! literal instead of a clause.

use std::io::Write;

use crate::error::{Error, Result};
use crate::gadgets::{Equation2, Sign};
use crate::graph::Graph;
use crate::model::{bitstring, parse_bitstring, parse_rational, Clause, Formula, FormulaKind, Literal, Predicate};
use crate::reductions::{BisectionGraph, Lin2Instance, VertexRole};

/// The instance type named by a file's first `p` line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Formula,
    Lin2,
    Graph,
}

pub fn sniff(text: &str) -> Result<FileKind> {
    let Some((no, line)) = lines(text).next() else {
        return Err(parse_err(0, "empty input"));
    };
    let mut t = line.split_whitespace();
    if t.next() != Some("p") {
        return Err(parse_err(no, "expected a `p` header line"));
    }
    match t.next() {
        Some("ucsp") => Ok(FileKind::Formula),
        Some("lin2") => Ok(FileKind::Lin2),
        Some("bisect") => Ok(FileKind::Graph),
        other => Err(parse_err(no, format!("unknown header {other:?}"))),
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-comment lines with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !is_comment(l))
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

/// Payloads of `c <tag> ...` lines.
fn tagged<'a>(text: &'a str, tag: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines().enumerate().filter_map(move |(i, l)| {
        let rest = l.trim().strip_prefix('c')?.trim_start();
        let payload = rest.strip_prefix(tag)?;
        (payload.is_empty() || payload.starts_with(char::is_whitespace)).then(|| (i + 1, payload.trim()))
    })
}

fn num<T: std::str::FromStr>(no: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(no, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(no, format!("bad {what} {tok:?}")))
}

pub fn write_formula<W: Write>(f: &Formula, mut out: W) -> Result<()> {
    if let Some(beta) = f.beta {
        writeln!(out, "c beta {beta}")?;
    }
    writeln!(out, "p ucsp {} {} {} {}", f.kind.name(), f.k, f.n, f.m())?;
    if let FormulaKind::General(pred) = &f.kind {
        writeln!(out, "p pred {} {}", pred.arity(), pred.support().len())?;
        for &t in pred.support() {
            writeln!(out, "{}", bitstring(t, pred.arity()))?;
        }
    }
    for c in &f.clauses {
        for l in &c.literals {
            write!(out, "{} ", l.to_signed())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn formula_to_string(f: &Formula) -> String {
    let mut buf = Vec::new();
    write_formula(f, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut it = lines(text);
    let (no, header) = it.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let mut t = header.split_whitespace();
    if (t.next(), t.next()) != (Some("p"), Some("ucsp")) {
        return Err(parse_err(no, "expected `p ucsp <kind> <k> <n> <m>`"));
    }
    let kind_name = t.next().ok_or_else(|| parse_err(no, "missing kind"))?.to_string();
    let k: usize = num(no, t.next(), "arity")?;
    let n: usize = num(no, t.next(), "variable count")?;
    let m: usize = num(no, t.next(), "clause count")?;
    if t.next().is_some() {
        return Err(parse_err(no, "trailing tokens in header"));
    }
    let kind = match kind_name.as_str() {
        "xor" => FormulaKind::Xor,
        "and" => FormulaKind::And,
        "gen" => {
            let (no, pred_header) = it.next().ok_or_else(|| parse_err(no, "missing `p pred` header"))?;
            let mut t = pred_header.split_whitespace();
            if (t.next(), t.next()) != (Some("p"), Some("pred")) {
                return Err(parse_err(no, "expected `p pred <k> <size>`"));
            }
            let arity: usize = num(no, t.next(), "predicate arity")?;
            let size: usize = num(no, t.next(), "support size")?;
            if arity != k {
                return Err(parse_err(no, format!("predicate arity {arity} differs from k={k}")));
            }
            let mut support = Vec::with_capacity(size);
            for _ in 0..size {
                let (no, tuple) = it.next().ok_or_else(|| parse_err(no, "missing support tuple"))?;
                support.push(parse_bitstring(tuple, arity).map_err(|e| parse_err(no, e.to_string()))?);
            }
            FormulaKind::General(Predicate::new(arity, support).map_err(|e| parse_err(no, e.to_string()))?)
        }
        other => return Err(parse_err(no, format!("unknown kind {other:?}"))),
    };
    let mut clauses = Vec::with_capacity(m);
    for (no, line) in it {
        let values: Vec<i64> = line
            .split_whitespace()
            .map(|tok| tok.parse().map_err(|_| parse_err(no, format!("bad literal {tok:?}"))))
            .collect::<Result<_>>()?;
        let Some((&0, body)) = values.split_last() else {
            return Err(parse_err(no, "clause line must end with 0"));
        };
        let literals: Vec<Literal> = body
            .iter()
            .map(|&x| Literal::from_signed(x).ok_or_else(|| parse_err(no, format!("bad literal {x}"))))
            .collect::<Result<_>>()?;
        if literals.len() != k {
            return Err(parse_err(no, format!("clause has {} literals, expected {k}", literals.len())));
        }
        clauses.push(Clause::new(literals));
    }
    if clauses.len() != m {
        return Err(parse_err(0, format!("header announces {m} clauses, found {}", clauses.len())));
    }
    let mut f = Formula::new(n, k, kind, clauses)?;
    if let Some((no, payload)) = tagged(text, "beta").next() {
        f.beta = Some(parse_rational(payload).map_err(|e| parse_err(no, e))?);
    }
    Ok(f)
}

pub fn write_lin2<W: Write>(inst: &Lin2Instance, mut out: W) -> Result<()> {
    for g in &inst.aux_groups {
        let ids: Vec<String> = g.iter().map(|v| v.to_string()).collect();
        writeln!(out, "c group {}", ids.join(" "))?;
    }
    let anchor = inst.anchor.map_or("none".to_string(), |a| a.to_string());
    writeln!(out, "p lin2 {} {} {}", inst.num_vars, inst.num_equations(), anchor)?;
    for e in &inst.equations {
        writeln!(out, "{} {} {}", e.a, e.b, e.rhs)?;
    }
    Ok(())
}

pub fn parse_lin2(text: &str) -> Result<Lin2Instance> {
    let mut it = lines(text);
    let (no, header) = it.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let mut t = header.split_whitespace();
    if (t.next(), t.next()) != (Some("p"), Some("lin2")) {
        return Err(parse_err(no, "expected `p lin2 <num_vars> <num_eqs> <anchor|none>`"));
    }
    let num_vars: usize = num(no, t.next(), "variable count")?;
    let count: usize = num(no, t.next(), "equation count")?;
    let anchor = match t.next() {
        Some("none") | None => None,
        tok => Some(num(no, tok, "anchor")?),
    };
    let mut equations = Vec::with_capacity(count);
    for (no, line) in it {
        let mut t = line.split_whitespace();
        let a: usize = num(no, t.next(), "variable")?;
        let b: usize = num(no, t.next(), "variable")?;
        let rhs: i64 = num(no, t.next().map(|s| s.trim_start_matches('+')), "rhs")?;
        let rhs = Sign::from_value(rhs).ok_or_else(|| parse_err(no, format!("rhs {rhs} is not ±1")))?;
        equations.push(Equation2::new(a, b, rhs).map_err(|e| parse_err(no, e.to_string()))?);
    }
    if equations.len() != count {
        return Err(parse_err(0, format!("header announces {count} equations, found {}", equations.len())));
    }
    let mut inst = Lin2Instance::new(num_vars, anchor, equations)?;
    for (no, payload) in tagged(text, "group") {
        let group: Vec<usize> = payload
            .split_whitespace()
            .map(|tok| tok.parse().map_err(|_| parse_err(no, format!("bad group member {tok:?}"))))
            .collect::<Result<_>>()?;
        inst.aux_groups.push(group);
    }
    Ok(inst)
}

fn role_fields(role: VertexRole) -> String {
    match role {
        VertexRole::Literal(l) => format!("literal {}", l.to_signed()),
        VertexRole::Cluster { clause, index } => format!("cluster {clause} {index}"),
        VertexRole::Connecting { clause } => format!("connecting {clause}"),
        VertexRole::Balancer => "balancer".to_string(),
        VertexRole::Pad => "pad".to_string(),
    }
}

pub fn write_bisection_graph<W: Write>(g: &BisectionGraph, mut out: W) -> Result<()> {
    writeln!(out, "c rho {} epsilon {} quota {}", g.rho, g.epsilon, g.quota)?;
    writeln!(out, "p bisect {} {}", g.num_vertices(), g.num_edges())?;
    for v in 0..g.num_vertices() {
        writeln!(out, "v {v} {}", role_fields(g.role(v)))?;
    }
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}")?;
    }
    Ok(())
}

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "p bisect {} {}", g.num_vertices(), g.num_edges())?;
    for (a, b) in g.edges() {
        writeln!(out, "e {a} {b}")?;
    }
    Ok(())
}

/// Reads the edges of a graph file; role lines are checked for range only.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut it = lines(text);
    let (no, header) = it.next().ok_or_else(|| parse_err(0, "empty input"))?;
    let mut t = header.split_whitespace();
    if (t.next(), t.next()) != (Some("p"), Some("bisect")) {
        return Err(parse_err(no, "expected `p bisect <N> <M>`"));
    }
    let n: usize = num(no, t.next(), "vertex count")?;
    let m: usize = num(no, t.next(), "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (no, line) in it {
        let mut t = line.split_whitespace();
        match t.next() {
            Some("v") => {
                let id: usize = num(no, t.next(), "vertex id")?;
                if id >= n {
                    return Err(parse_err(no, format!("vertex {id} is outside 0..{n}")));
                }
            }
            Some("e") => {
                let a: usize = num(no, t.next(), "endpoint")?;
                let b: usize = num(no, t.next(), "endpoint")?;
                edges.push((a, b));
            }
            other => return Err(parse_err(no, format!("unexpected line type {other:?}"))),
        }
    }
    if edges.len() != m {
        return Err(parse_err(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edges(n, edges)
}

/// Witness sidecar text: an assignment bitstring, space-separated ±1 spins,
/// or the sorted vertex ids of S.
pub fn witness_to_string(w: &crate::solvers::Witness) -> String {
    use crate::solvers::Witness;
    match w {
        Witness::Assignment(a) => format!("assignment {}\n", a.to_bitstring()),
        Witness::Spins(s) => {
            let vals: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            format!("spins {}\n", vals.join(" "))
        }
        Witness::Side(side) => {
            let ids: Vec<String> = side.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i.to_string()).collect();
            format!("side {}\n", ids.join(" "))
        }
    }
}
