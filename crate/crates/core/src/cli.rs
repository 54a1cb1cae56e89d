//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (the error, led by its
//! variant name, goes to standard error), 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::experiments::{gap_report, kv_line, lemma1_check, pipeline, write_pipeline_csv, PipelineConfig};
use crate::format::{
    formula_to_string, parse_formula, parse_graph, parse_lin2, sniff, witness_to_string, write_bisection_graph,
    write_lin2, FileKind,
};
use crate::gadgets::{cube_gadget, hypercube_gadget, verify_gadget, IdAllocator, Sign};
use crate::generator::{gen_planted, gen_unbalanced, occurrence_report};
use crate::model::{parse_rational, Clause, FormulaKind, Literal, Params, Predicate, Prob};
use crate::reductions::{and_to_bisection, and_to_min2lin2, rewrite_to_and};
use crate::solvers::{
    max_csp_exact, max_csp_local, min_2lin2_exact_with_anchor, min_bisection_exact, min_bisection_kl, Limits,
    LocalSearch, SolveResult,
};

fn rational(s: &str) -> std::result::Result<Prob, String> {
    parse_rational(s)
}

#[derive(Debug, Parser)]
#[command(name = "ucsp", version, about = "Imbalanced random CSPs, gadget reductions and exact solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Kv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Xor,
    And,
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceTarget {
    Lin2,
    Bisect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GadgetArg {
    Cube,
    Hypercube,
}

/// Exhaustion limits; each defaults to its environment variable, then to
/// the built-in value.
#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long, env = "UCSP_CSP_LIMIT")]
    pub csp_limit: Option<usize>,
    #[arg(long, env = "UCSP_LIN2_LIMIT")]
    pub lin2_limit: Option<usize>,
    #[arg(long, env = "UCSP_BISECTION_LIMIT")]
    pub bisection_limit: Option<usize>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            csp_vars: self.csp_limit.unwrap_or(d.csp_vars),
            lin2_vars: self.lin2_limit.unwrap_or(d.lin2_vars),
            bisection_vertices: self.bisection_limit.unwrap_or(d.bisection_vertices),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random or planted formula.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Clauses per variable; m = round(delta·n).
        #[arg(long, value_parser = rational)]
        delta: Prob,
        #[arg(long, value_parser = rational)]
        beta: Prob,
        #[arg(long, value_parser = rational)]
        gamma: Option<Prob>,
        #[arg(long, value_enum, default_value = "xor")]
        kind: KindArg,
        /// Support tuples for `--kind gen`, comma separated bitstrings.
        #[arg(long)]
        pred: Option<String>,
        /// Rejection-sample clauses satisfied by a hidden γ-biased assignment.
        #[arg(long)]
        planted: bool,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Occurrence statistics CSV.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Hidden assignment of a planted formula.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Read every clause of a formula as an AND.
    Rewrite {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce an AND formula to 2-Lin-2 or to a bisection graph.
    Reduce {
        #[arg(long, value_enum)]
        to: ReduceTarget,
        #[arg(long)]
        input: PathBuf,
        /// Target satisfiable fraction; defaults to the gap report's ρ for
        /// the formula's recorded β and the given γ.
        #[arg(long, value_parser = rational)]
        rho: Option<Prob>,
        #[arg(long, value_parser = rational)]
        gamma: Option<Prob>,
        #[arg(long, value_parser = rational, default_value = "0")]
        epsilon: Prob,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a formula, 2-Lin-2 instance or graph file.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "heuristic", required_unless_present = "heuristic")]
        exact: bool,
        #[arg(long)]
        heuristic: bool,
        /// Bias cap for formulas.
        #[arg(long, value_parser = rational, default_value = "0")]
        gamma: Prob,
        /// Spin held by the anchor of a 2-Lin-2 instance.
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        anchor: i64,
        #[arg(long, required_if_eq("heuristic", "true"))]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Witness sidecar; defaults to `<input>.witness`.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "kv")]
        format: OutputFormat,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Print a gadget's table of best satisfied counts per pattern.
    GadgetVerify {
        #[arg(long, value_enum)]
        gadget: GadgetArg,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Closed-form completeness, soundness and ratio values.
    Gap {
        #[arg(long, value_parser = rational)]
        beta: Prob,
        #[arg(long, value_parser = rational)]
        gamma: Prob,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_enum, default_value = "kv")]
        format: OutputFormat,
    },
    /// Monte Carlo of the fraction of clauses avoiding a fixed literal set.
    Lemma1 {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, value_parser = rational)]
        beta: Prob,
        #[arg(long, value_parser = rational)]
        gamma: Prob,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "kv")]
        format: OutputFormat,
    },
    /// Generate, reduce, solve and compare for a range of seeds (CSV).
    Pipeline {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_parser = rational)]
        delta: Prob,
        #[arg(long, value_parser = rational)]
        beta: Prob,
        #[arg(long, value_parser = rational)]
        gamma: Prob,
        #[arg(long, value_parser = rational, default_value = "1/100")]
        epsilon: Prob,
        #[arg(long, value_enum, default_value = "xor")]
        kind: KindArg,
        /// First seed.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn render(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("ascii output")
}

fn fields_out(fields: &[(&'static str, String)], format: OutputFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        OutputFormat::Kv => writeln!(out, "{}", kv_line(fields))?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(fields.iter().map(|(k, _)| *k))?;
            w.write_record(fields.iter().map(|(_, v)| v.as_str()))?;
            w.flush()?;
        }
    }
    Ok(())
}

fn check_ranges(beta: Prob, gamma: Option<Prob>) -> Result<()> {
    if beta < Prob::zero() || beta >= Prob::new(1, 2) {
        return Err(Error::InvalidParams(format!("--beta {beta} must lie in [0, 1/2)")));
    }
    if let Some(g) = gamma {
        if g < Prob::zero() {
            return Err(Error::InvalidParams(format!("--gamma {g} is negative")));
        }
        if g >= beta {
            return Err(Error::ParamOrderViolated { beta: beta.to_string(), gamma: g.to_string() });
        }
    }
    Ok(())
}

fn kind_of(kind: KindArg, k: usize, pred: Option<&str>) -> Result<FormulaKind> {
    match (kind, pred) {
        (KindArg::Xor, None) => Ok(FormulaKind::Xor),
        (KindArg::And, None) => Ok(FormulaKind::And),
        (KindArg::Gen, Some(p)) => {
            let tuples: Vec<&str> = p.split(',').map(str::trim).collect();
            Ok(FormulaKind::General(Predicate::from_bitstrings(k, &tuples)?))
        }
        (KindArg::Gen, None) => Err(Error::InvalidPredicate("--kind gen needs --pred".into())),
        (_, Some(_)) => Err(Error::InvalidPredicate("--pred only applies to --kind gen".into())),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Gen { n, k, delta, beta, gamma, kind, pred, planted, seed, out: path, report, witness } => {
            check_ranges(beta, gamma)?;
            if delta <= Prob::zero() {
                return Err(Error::InvalidParams(format!("--delta {delta} must be positive")));
            }
            let kind = kind_of(kind, k, pred.as_deref())?;
            let params = Params::new(n, k, delta, beta, seed).with_gamma(gamma.unwrap_or_else(Prob::zero));
            let (formula, hidden) = if planted {
                let p = gen_planted(&params, &kind)?;
                (p.formula, Some(p.assignment))
            } else {
                (gen_unbalanced(&params, &kind)?, None)
            };
            emit(path.as_deref(), &formula_to_string(&formula), out)?;
            if let Some(r) = report {
                let mut buf = Vec::new();
                occurrence_report(&formula).write_csv(&mut buf)?;
                emit(Some(&r), &render(buf), out)?;
            }
            if let Some(w) = witness {
                let hidden = hidden.ok_or_else(|| Error::InvalidParams("--witness needs --planted".into()))?;
                emit(Some(&w), &format!("assignment {}\n", hidden.to_bitstring()), out)?;
            }
            Ok(())
        }
        Command::Rewrite { input, out: path } => {
            let f = parse_formula(&read(&input)?)?;
            emit(path.as_deref(), &formula_to_string(&rewrite_to_and(&f)), out)
        }
        Command::Reduce { to, input, rho, gamma, epsilon, out: path } => {
            let f = parse_formula(&read(&input)?)?;
            let mut buf = Vec::new();
            match to {
                ReduceTarget::Lin2 => write_lin2(&and_to_min2lin2(&f)?, &mut buf)?,
                ReduceTarget::Bisect => {
                    let rho = match rho {
                        Some(r) => r,
                        None => {
                            let beta = f.beta.ok_or_else(|| {
                                Error::InvalidParams("--rho is required when the formula records no beta".into())
                            })?;
                            gap_report(beta, gamma.unwrap_or_else(Prob::zero), f.k)?.rho_exact
                        }
                    };
                    write_bisection_graph(&and_to_bisection(&f, rho, epsilon)?, &mut buf)?
                }
            }
            emit(path.as_deref(), &render(buf), out)
        }
        Command::Solve { input, exact, heuristic: _, gamma, anchor, seed, iterations, restarts, witness, format, limits } => {
            let text = read(&input)?;
            let limits = limits.limits();
            let anchor = Sign::from_value(anchor)
                .ok_or_else(|| Error::InvalidParams(format!("--anchor {anchor} must be -1 or +1")))?;
            let seed = seed.unwrap_or(0);
            let result: SolveResult = match sniff(&text)? {
                FileKind::Formula => {
                    let f = parse_formula(&text)?;
                    if exact {
                        max_csp_exact(&f, gamma, &limits)?
                    } else {
                        max_csp_local(&f, gamma, &LocalSearch::new(iterations, seed))?
                    }
                }
                FileKind::Lin2 => {
                    if !exact {
                        return Err(Error::InvalidParams("2-Lin-2 instances only have an exact solver".into()));
                    }
                    min_2lin2_exact_with_anchor(&parse_lin2(&text)?, anchor, &limits)?
                }
                FileKind::Graph => {
                    let g = parse_graph(&text)?;
                    if exact {
                        min_bisection_exact(&g, &limits)?
                    } else {
                        min_bisection_kl(&g, seed, restarts)?
                    }
                }
            };
            let sidecar = witness.unwrap_or_else(|| {
                let mut s = input.clone().into_os_string();
                s.push(".witness");
                PathBuf::from(s)
            });
            emit(Some(&sidecar), &witness_to_string(&result.witness), out)?;
            let fields = vec![
                ("optimum", result.optimum.to_string()),
                ("decimal", result.optimum.to_f64().to_string()),
                ("exact", result.exact.to_string()),
                ("witness", sidecar.display().to_string()),
            ];
            fields_out(&fields, format, out)
        }
        Command::GadgetVerify { gadget, k } => {
            let clause = Clause::new((1..=k as u32).map(Literal::pos).collect());
            let g = match gadget {
                GadgetArg::Cube => {
                    if k != 3 {
                        return Err(Error::ArityMismatch { expected: 3, found: k });
                    }
                    cube_gadget(&clause, &mut IdAllocator::new(k + 1), 0, |v| v as usize)?
                }
                GadgetArg::Hypercube => hypercube_gadget(&clause, &mut IdAllocator::new(k), |v| v as usize - 1)?,
            };
            verify_gadget(&g)?.write_csv(out)
        }
        Command::Gap { beta, gamma, k, format } => fields_out(&gap_report(beta, gamma, k)?.fields(), format, out),
        Command::Lemma1 { n, beta, gamma, k, trials, seed, format } => {
            fields_out(&lemma1_check(n, beta, gamma, k, trials, seed)?.fields(), format, out)
        }
        Command::Pipeline { n, k, delta, beta, gamma, epsilon, kind, seed, seeds, jobs, out: path, limits } => {
            check_ranges(beta, Some(gamma))?;
            if epsilon <= Prob::zero() {
                return Err(Error::InvalidParams(format!("--epsilon {epsilon} must be positive")));
            }
            let kind = kind_of(kind, k, None)?;
            let params = Params::new(n, k, delta, beta, seed).with_gamma(gamma).with_epsilon(epsilon);
            let config = PipelineConfig { params, kind, seeds, jobs: jobs.max(1), limits: limits.limits() };
            let mut buf = Vec::new();
            write_pipeline_csv(&pipeline(&config)?, &mut buf)?;
            emit(path.as_deref(), &render(buf), out)
        }
    }
}
