use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treepump::automata::Dta;
use treepump::decompose::{decompose_k, g_sigma, DecomposeError};
use treepump::game::{self, GameConstraint, LanguageOracle, Outcome, DEFAULT_MAX_N};
use treepump::pump::{ogden_decompose, ogden_decompose_multi, verify_witness};
use treepump::terms::{self, Marking, RankedAlphabet, Tree};

#[derive(Parser)]
#[command(
    name = "treepump",
    version,
    about = "Tree automata and constructive pumping for regular tree languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Marked nodes, given inline with `!`, as an address list, or all at once.
#[derive(Args)]
struct MarkArgs {
    /// Comma-separated addresses such as `1.1,2.1` (root is `e`).
    #[arg(long)]
    marks: Option<String>,
    /// Mark every node.
    #[arg(long)]
    all: bool,
    /// Mark every node carrying this label.
    #[arg(long, value_name = "LABEL")]
    mark_label: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Classic,
    Ogden,
}

#[derive(Subcommand)]
enum Command {
    /// Print accept or reject.
    Member { automaton: String, tree: String },
    /// Print the state reached at every node.
    Run { automaton: String, tree: String },
    /// Print g_Σ(K) for maximal rank M.
    Gsigma {
        #[arg(long)]
        max_rank: usize,
        #[arg(long)]
        k: usize,
    },
    /// Cut a marked tree into c'·c_1⋯c_k·t'.
    Decompose {
        #[arg(long)]
        k: usize,
        /// Maximal rank used for the reported threshold; defaults to the tree's own.
        #[arg(long)]
        max_rank: Option<usize>,
        #[command(flatten)]
        marks: MarkArgs,
        tree: String,
    },
    /// Extract and verify a pump witness.
    Ogden {
        automaton: String,
        tree: String,
        #[command(flatten)]
        marks: MarkArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Extract and verify an M-fold simultaneous pump witness.
    OgdenMulti {
        #[arg(long)]
        m: usize,
        automaton: String,
        tree: String,
        #[command(flatten)]
        marks: MarkArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Print c'·c^N·t'.
    Pump {
        cprime: String,
        c: String,
        tprime: String,
        #[arg(long)]
        n: usize,
    },
    /// Adjudicate every adversary decomposition of a tree.
    Game {
        /// L1, L2 or dta:<file>.
        #[arg(long)]
        oracle: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        #[command(flatten)]
        marks: MarkArgs,
        tree: String,
    },
}

/// A failed invocation: bad input, reported on stderr with exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult = Result<(String, bool), UsageError>;

/// Inline text, or the contents of the file named after a leading `@`.
/// A lone `@` is the identity context.
fn read_term(arg: &str) -> Result<String, UsageError> {
    match arg.trim().strip_prefix('@') {
        Some(path) if !path.is_empty() => {
            fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read `{path}`: {e}")))
        }
        _ => Ok(arg.to_string()),
    }
}

fn read_dta(path: &str) -> Result<Dta, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read `{path}`: {e}")))?;
    treepump::parse_dta(&text).map_err(|e| UsageError(format!("{path}: {e}")))
}

fn resolve_marks(tree: &Tree, inline: Marking, args: &MarkArgs) -> Result<Marking, UsageError> {
    let mut marks = inline;
    if let Some(list) = &args.marks {
        marks = marks.union(&Marking::parse_list(tree, list)?);
    }
    if let Some(label) = &args.mark_label {
        marks = marks.union(&Marking::by_label(tree, |l| l == label));
    }
    if args.all {
        marks = Marking::all(tree);
    }
    Ok(marks)
}

fn merge_alphabets<'a>(alphabets: impl IntoIterator<Item = &'a RankedAlphabet>) -> Result<RankedAlphabet, UsageError> {
    let mut symbols: Vec<(String, usize)> = Vec::new();
    for alphabet in alphabets {
        for (name, rank) in alphabet.iter() {
            match symbols.iter().find(|(n, _)| n == name) {
                Some((_, r)) if *r != rank => {
                    return Err(UsageError(format!("symbol `{name}` is used with ranks {r} and {rank}")))
                }
                Some(_) => {}
                None => symbols.push((name.to_string(), rank)),
            }
        }
    }
    Ok(RankedAlphabet::new(symbols)?)
}

fn member(automaton: &str, tree: &str) -> CliResult {
    let dta = read_dta(automaton)?;
    let (t, _) = terms::parse_tree(dta.alphabet(), &read_term(tree)?)?;
    let accepted = dta.accepts(&t)?;
    Ok((format!("{}\n", if accepted { "accept" } else { "reject" }), accepted))
}

fn run(automaton: &str, tree: &str) -> CliResult {
    let dta = read_dta(automaton)?;
    let (t, _) = terms::parse_tree(dta.alphabet(), &read_term(tree)?)?;
    let Some(annotation) = dta.annotate(&t)? else {
        return Ok(("undefined\n".to_string(), false));
    };
    let mut out = String::new();
    for (u, q) in annotation.iter() {
        writeln!(out, "{u} {}", dta.state_name(q)).unwrap();
    }
    Ok((out, dta.is_final(annotation.root())))
}

fn gsigma(max_rank: usize, k: usize) -> CliResult {
    Ok((format!("{}\n", g_sigma(max_rank, k)?), true))
}

fn decompose(k: usize, max_rank: Option<usize>, mark_args: &MarkArgs, tree: &str) -> CliResult {
    let (t, inline, alphabet) = terms::parse_tree_inferred(&read_term(tree)?)?;
    let marks = resolve_marks(&t, inline, mark_args)?;
    let m = max_rank.unwrap_or_else(|| alphabet.max_rank());
    let p = if m == 0 { 2 } else { g_sigma(m, k)? };
    let mut out = String::new();
    writeln!(out, "k: {k}").unwrap();
    writeln!(out, "max_rank: {m}").unwrap();
    writeln!(out, "p: {p}").unwrap();
    writeln!(out, "marks: {}", marks.len()).unwrap();
    let d = match decompose_k(&t, &marks, k) {
        Ok(d) => d,
        Err(e @ DecomposeError::NotEnoughInteresting { .. }) => {
            writeln!(out, "error: {e}").unwrap();
            return Ok((out, false));
        }
        Err(e) => return Err(e.into()),
    };
    writeln!(out, "cprime: {}", d.cprime).unwrap();
    for (i, (c, marks)) in d.chain.iter().zip(&d.chain_marks).enumerate() {
        writeln!(out, "c{}: {c}", i + 1).unwrap();
        writeln!(out, "c{}_marks: {marks}", i + 1).unwrap();
    }
    writeln!(out, "tprime: {}", d.tprime).unwrap();
    writeln!(out, "inner_marks: {}", d.inner_marks).unwrap();
    let cuts: Vec<String> = d.cuts.iter().map(ToString::to_string).collect();
    writeln!(out, "cuts: {}", cuts.join(" ")).unwrap();
    Ok((out, true))
}

fn ogden(automaton: &str, tree: &str, mark_args: &MarkArgs, max_n: usize) -> CliResult {
    let dta = read_dta(automaton)?;
    let (t, inline) = terms::parse_tree(dta.alphabet(), &read_term(tree)?)?;
    let marks = resolve_marks(&t, inline, mark_args)?;
    let w = ogden_decompose(&dta, &t, &marks)?;
    let report = verify_witness(&dta, &w, max_n);
    let mut out = String::new();
    writeln!(out, "p: {}", w.p_used).unwrap();
    writeln!(out, "marks: {}", marks.len()).unwrap();
    writeln!(out, "state: {}", dta.state_name(w.state)).unwrap();
    writeln!(out, "cprime: {}", w.cprime).unwrap();
    writeln!(out, "c: {}", w.c).unwrap();
    writeln!(out, "tprime: {}", w.tprime).unwrap();
    writeln!(out, "u: {}", w.outer).unwrap();
    writeln!(out, "v: {}", w.inner).unwrap();
    writeln!(out, "marks_in_c: {}", w.marks_in_c).unwrap();
    writeln!(out, "marks_in_inner: {}", w.marks_in_inner).unwrap();
    out.push_str(&report.to_string());
    Ok((out, report.passed()))
}

fn ogden_multi(m: usize, automaton: &str, tree: &str, mark_args: &MarkArgs, max_n: usize) -> CliResult {
    let dta = read_dta(automaton)?;
    let (t, inline) = terms::parse_tree(dta.alphabet(), &read_term(tree)?)?;
    let marks = resolve_marks(&t, inline, mark_args)?;
    let w = ogden_decompose_multi(&dta, &t, &marks, m)?;
    let report = verify_witness(&dta, &w, max_n);
    let mut out = String::new();
    writeln!(out, "m: {m}").unwrap();
    writeln!(out, "p: {}", w.p_used).unwrap();
    writeln!(out, "marks: {}", marks.len()).unwrap();
    writeln!(out, "state: {}", dta.state_name(w.state)).unwrap();
    writeln!(out, "cprime: {}", w.cprime).unwrap();
    for (i, (c, marks)) in w.chain.iter().zip(&w.chain_marks).enumerate() {
        writeln!(out, "c{}: {c}", i + 1).unwrap();
        writeln!(out, "c{}_marks: {marks}", i + 1).unwrap();
    }
    writeln!(out, "tprime: {}", w.tprime).unwrap();
    let cuts: Vec<String> = w.cuts.iter().map(ToString::to_string).collect();
    writeln!(out, "cuts: {}", cuts.join(" ")).unwrap();
    writeln!(out, "marks_in_inner: {}", w.marks_in_inner).unwrap();
    out.push_str(&report.to_string());
    Ok((out, report.passed()))
}

fn pump(cprime: &str, c: &str, tprime: &str, n: usize) -> CliResult {
    let (outer, _, a1) = terms::parse_context_inferred(&read_term(cprime)?)?;
    let (pumped, _, a2) = terms::parse_context_inferred(&read_term(c)?)?;
    let (inner, _, a3) = terms::parse_tree_inferred(&read_term(tprime)?)?;
    merge_alphabets([&a1, &a2, &a3])?;
    let tree = outer.substitute(&pumped.power(n).substitute(&inner));
    Ok((format!("{tree}\n"), true))
}

fn oracle_for(spec: &str) -> Result<LanguageOracle, UsageError> {
    match spec.strip_prefix("dta:") {
        Some(path) => Ok(LanguageOracle::from_dta(spec, read_dta(path)?)),
        None => Ok(game::builtin_oracle(spec)?),
    }
}

fn play(oracle: &str, mode: Mode, p: usize, max_n: usize, mark_args: &MarkArgs, tree: &str) -> CliResult {
    if p == 0 {
        return Err(UsageError("--p must be at least 1".into()));
    }
    let oracle = oracle_for(oracle)?;
    let (t, inline) = terms::parse_tree(oracle.alphabet(), &read_term(tree)?)?;
    let constraint = match mode {
        Mode::Classic => GameConstraint::Classic { p },
        Mode::Ogden => GameConstraint::Ogden {
            p,
            marks: resolve_marks(&t, inline, mark_args)?,
        },
    };
    let report = game::play(&oracle, &t, &constraint, max_n);
    Ok((report.to_string(), report.outcome() == Outcome::WeWin))
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Member { automaton, tree } => member(automaton, tree),
        Command::Run { automaton, tree } => run(automaton, tree),
        Command::Gsigma { max_rank, k } => gsigma(*max_rank, *k),
        Command::Decompose {
            k,
            max_rank,
            marks,
            tree,
        } => decompose(*k, *max_rank, marks, tree),
        Command::Ogden {
            automaton,
            tree,
            marks,
            max_n,
        } => ogden(automaton, tree, marks, *max_n),
        Command::OgdenMulti {
            m,
            automaton,
            tree,
            marks,
            max_n,
        } => ogden_multi(*m, automaton, tree, marks, *max_n),
        Command::Pump { cprime, c, tprime, n } => pump(cprime, c, tprime, *n),
        Command::Game {
            oracle,
            mode,
            p,
            max_n,
            marks,
            tree,
        } => play(oracle, *mode, *p, *max_n, marks, tree),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((out, success)) => {
            print!("{out}");
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
