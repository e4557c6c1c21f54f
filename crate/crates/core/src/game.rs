//! Batch adjudication of the pumping game against an adversary.
//!
//! The adversary picks `p`, we pick a tree (and, in Ogden mode, a marking),
//! the adversary picks a decomposition `c'·c·t'` obeying the constraint, and
//! we must name an `n` with `c'·c^n·t'` outside the language. [`play`] takes
//! the first two moves as given, enumerates every legal third move and
//! searches `n = 0..=max_n` for a refutation of each.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::automata::Dta;
use crate::terms::{Address, Context, Marking, RankedAlphabet, Tree};

/// Bound used by the CLI when `--max-n` is not given.
pub const DEFAULT_MAX_N: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("unknown oracle `{0}` (expected L1 or L2)")]
    UnknownOracle(String),
}

type Membership = dyn Fn(&Tree) -> bool + Send + Sync;

/// A named, total membership predicate.
#[derive(Clone)]
pub struct LanguageOracle {
    name: String,
    alphabet: RankedAlphabet,
    membership: Arc<Membership>,
}

impl fmt::Debug for LanguageOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageOracle")
            .field("name", &self.name)
            .field("alphabet", &self.alphabet.to_string())
            .finish_non_exhaustive()
    }
}

impl LanguageOracle {
    pub fn new(
        name: impl Into<String>,
        alphabet: RankedAlphabet,
        membership: impl Fn(&Tree) -> bool + Send + Sync + 'static,
    ) -> Self {
        LanguageOracle {
            name: name.into(),
            alphabet,
            membership: Arc::new(membership),
        }
    }

    /// Membership by running `dta`; trees outside its alphabet are rejected.
    pub fn from_dta(name: impl Into<String>, dta: Dta) -> Self {
        let alphabet = dta.alphabet().clone();
        LanguageOracle::new(name, alphabet, move |t| dta.accepts(t).unwrap_or(false))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn contains(&self, tree: &Tree) -> bool {
        (self.membership)(tree)
    }
}

/// Strips a maximal chain of unary `symbol` nodes, returning its length and the rest.
fn unary_run<'t>(mut tree: &'t Tree, symbol: &str) -> (usize, &'t Tree) {
    let mut n = 0;
    while tree.label() == symbol && tree.arity() == 1 {
        n += 1;
        tree = &tree.children()[0];
    }
    (n, tree)
}

fn is_leaf(tree: &Tree, symbol: &str) -> bool {
    tree.label() == symbol && tree.arity() == 0
}

/// `f(g^n·a, g^n·a)` with `n ≥ 1`.
fn in_l1(tree: &Tree) -> bool {
    let branch = |t: &Tree| {
        let (n, rest) = unary_run(t, "g");
        (n >= 1 && is_leaf(rest, "a")).then_some(n)
    };
    match (tree.label(), tree.children()) {
        ("f", [left, right]) => matches!((branch(left), branch(right)), (Some(l), Some(r)) if l == r),
        _ => false,
    }
}

/// `f(g^n·h^{m1}·a, g^n·h^{m2}·a)` with `n, m1, m2 ≥ 1`.
fn in_l2(tree: &Tree) -> bool {
    let branch = |t: &Tree| {
        let (n, rest) = unary_run(t, "g");
        let (m, rest) = unary_run(rest, "h");
        (n >= 1 && m >= 1 && is_leaf(rest, "a")).then_some(n)
    };
    match (tree.label(), tree.children()) {
        ("f", [left, right]) => matches!((branch(left), branch(right)), (Some(l), Some(r)) if l == r),
        _ => false,
    }
}

/// The two example languages: `L1` (balanced `g`-branches) and `L2`
/// (balanced `g`-prefixes over non-empty `h`-chains).
pub fn builtin_oracle(name: &str) -> Result<LanguageOracle, GameError> {
    let symbols: &[(&str, usize)] = match name {
        "L1" => &[("f", 2), ("g", 1), ("a", 0)],
        "L2" => &[("f", 2), ("g", 1), ("h", 1), ("a", 0)],
        other => return Err(GameError::UnknownOracle(other.to_string())),
    };
    let alphabet = RankedAlphabet::new(symbols.iter().copied()).expect("static alphabet");
    Ok(match name {
        "L1" => LanguageOracle::new(name, alphabet, in_l1),
        _ => LanguageOracle::new(name, alphabet, in_l2),
    })
}

/// The rules the adversary's decomposition must obey.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameConstraint {
    /// `|c| ≥ 1` and `|c·t'| ≤ p`.
    Classic { p: usize },
    /// At least one mark in `c` and at most `p` marks in `c·t'`.
    Ogden { p: usize, marks: Marking },
}

impl GameConstraint {
    pub fn p(&self) -> usize {
        match self {
            GameConstraint::Classic { p } | GameConstraint::Ogden { p, .. } => *p,
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            GameConstraint::Classic { .. } => "classic",
            GameConstraint::Ogden { .. } => "ogden",
        }
    }

    /// Whether cutting `tree` at the strict ancestor pair `(outer, inner)` is a legal move.
    pub fn admits(&self, tree: &Tree, outer: &Address, inner: &Address) -> bool {
        if !outer.is_strict_prefix_of(inner) {
            return false;
        }
        match self {
            GameConstraint::Classic { p } => tree.get(outer).is_some_and(|s| s.size() <= *p),
            GameConstraint::Ogden { p, marks } => {
                marks.count_between(outer, inner) >= 1 && marks.count_within(outer) <= *p
            }
        }
    }
}

/// One legal decomposition `c'·c·t'`, cut at `outer` (root of `c`) and `inner` (hole of `c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryMove {
    pub outer: Address,
    pub inner: Address,
    pub cprime: Context,
    pub c: Context,
    pub tprime: Tree,
}

impl AdversaryMove {
    /// `c'·c^n·t'`.
    pub fn pump(&self, n: usize) -> Tree {
        self.cprime.substitute(&self.c.power(n).substitute(&self.tprime))
    }
}

/// Every legal adversary move on `tree`, ordered lexicographically by `(outer, inner)`.
pub fn enumerate_decompositions(tree: &Tree, constraint: &GameConstraint) -> Vec<AdversaryMove> {
    let addresses = tree.addresses();
    let mut moves = Vec::new();
    for (i, outer) in addresses.iter().enumerate() {
        // Descendants follow their ancestor contiguously in preorder.
        for inner in addresses[i + 1..].iter().take_while(|v| outer.is_prefix_of(v)) {
            if constraint.admits(tree, outer, inner) {
                let (cprime, c, tprime) = tree.split(outer, inner).expect("strict ancestor pair of own nodes");
                moves.push(AdversaryMove {
                    outer: outer.clone(),
                    inner: inner.clone(),
                    cprime,
                    c,
                    tprime,
                });
            }
        }
    }
    moves
}

/// The smallest `n ≤ max_n` whose pumped tree falls outside the language.
pub fn refute(oracle: &LanguageOracle, mv: &AdversaryMove, max_n: usize) -> Option<usize> {
    (0..=max_n).find(|&n| !oracle.contains(&mv.pump(n)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Refuted {
        n: usize,
        counterexample: Tree,
    },
    /// Every pumped tree for `n ≤ up_to` stayed in the language. Says nothing about larger `n`.
    Unrefuted {
        up_to: usize,
    },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    WeWin,
    AdversarySurvives,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::WeWin => "WE_WIN",
            Outcome::AdversarySurvives => "ADVERSARY_SURVIVES",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameReport {
    pub oracle: String,
    pub mode: &'static str,
    pub p: usize,
    pub max_n: usize,
    pub tree: Tree,
    pub verdicts: Vec<(AdversaryMove, Verdict)>,
}

impl GameReport {
    /// We win iff every legal move is refuted (vacuously so if there are none).
    pub fn outcome(&self) -> Outcome {
        if self.verdicts.iter().all(|(_, v)| v.is_refuted()) {
            Outcome::WeWin
        } else {
            Outcome::AdversarySurvives
        }
    }

    pub fn survivors(&self) -> impl Iterator<Item = &AdversaryMove> + '_ {
        self.verdicts.iter().filter(|(_, v)| !v.is_refuted()).map(|(m, _)| m)
    }
}

impl fmt::Display for GameReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "oracle: {}", self.oracle)?;
        writeln!(f, "mode: {}", self.mode)?;
        writeln!(f, "p: {}", self.p)?;
        writeln!(f, "max_n: {}", self.max_n)?;
        writeln!(f, "tree: {}", self.tree)?;
        writeln!(f, "decompositions: {}", self.verdicts.len())?;
        for (mv, verdict) in &self.verdicts {
            write!(
                f,
                "decomposition: u={} v={} cprime={} c={} tprime={} ",
                mv.outer, mv.inner, mv.cprime, mv.c, mv.tprime
            )?;
            match verdict {
                Verdict::Refuted { n, counterexample } => writeln!(f, "refuted n={n} tree={counterexample}")?,
                Verdict::Unrefuted { up_to } => writeln!(f, "unrefuted up_to={up_to}")?,
            }
        }
        writeln!(f, "overall: {}", self.outcome())
    }
}

/// Plays the third and fourth turns exhaustively. Moves are judged in
/// parallel; the report lists them in enumeration order.
pub fn play(oracle: &LanguageOracle, tree: &Tree, constraint: &GameConstraint, max_n: usize) -> GameReport {
    let moves = enumerate_decompositions(tree, constraint);
    let verdicts = moves
        .into_par_iter()
        .map(|mv| {
            let verdict = match refute(oracle, &mv, max_n) {
                Some(n) => Verdict::Refuted {
                    n,
                    counterexample: mv.pump(n),
                },
                None => Verdict::Unrefuted { up_to: max_n },
            };
            (mv, verdict)
        })
        .collect();
    GameReport {
        oracle: oracle.name().to_string(),
        mode: constraint.mode(),
        p: constraint.p(),
        max_n,
        tree: tree.clone(),
        verdicts,
    }
}
