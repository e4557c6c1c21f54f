//! Deterministic bottom-up finite tree automata.
//!
//! Transition functions are partial. A missing transition sends the run to an
//! implicit rejecting sink, which shows up as `None` from [`Dta::run`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::decompose::g_sigma;
use crate::terms::{Address, Context, RankedAlphabet, TermError, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<AutomatonError>,
    },
    #[error("state `{0}` is not declared")]
    UndeclaredState(String),
    #[error("invalid state name `{0}`")]
    InvalidStateName(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UndeclaredSymbol(String),
    #[error("symbol `{symbol}` has rank {expected} but the transition lists {found} argument state(s)")]
    TransitionRank {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate transition for `{0}`")]
    DuplicateTransition(String),
    #[error("state id {0} does not belong to this automaton")]
    UnknownState(usize),
    #[error(transparent)]
    Term(#[from] TermError),
}

pub type Result<T, E = AutomatonError> = std::result::Result<T, E>;

/// Index of a state within its automaton; states are numbered in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A deterministic bottom-up tree automaton with a partial transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dta {
    alphabet: RankedAlphabet,
    states: Vec<String>,
    finals: BTreeSet<StateId>,
    // symbol -> argument states -> target
    transitions: HashMap<String, HashMap<Vec<StateId>, StateId>>,
}

/// Incremental construction with validation at each step.
#[derive(Debug, Clone)]
pub struct DtaBuilder {
    dta: Dta,
    index: HashMap<String, StateId>,
}

impl DtaBuilder {
    pub fn state(&mut self, name: &str) -> Result<StateId> {
        if self.index.contains_key(name) {
            return Err(AutomatonError::DuplicateState(name.to_string()));
        }
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(AutomatonError::InvalidStateName(name.to_string()));
        }
        let id = StateId(self.dta.states.len());
        self.dta.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    fn lookup(&self, name: &str) -> Result<StateId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| AutomatonError::UndeclaredState(name.to_string()))
    }

    pub fn final_state(&mut self, name: &str) -> Result<()> {
        let id = self.lookup(name)?;
        self.dta.finals.insert(id);
        Ok(())
    }

    pub fn transition<S: AsRef<str>>(&mut self, symbol: &str, args: &[S], target: &str) -> Result<()> {
        let expected = self
            .dta
            .alphabet
            .rank(symbol)
            .ok_or_else(|| AutomatonError::UndeclaredSymbol(symbol.to_string()))?;
        if expected != args.len() {
            return Err(AutomatonError::TransitionRank {
                symbol: symbol.to_string(),
                expected,
                found: args.len(),
            });
        }
        let args = args
            .iter()
            .map(|a| self.lookup(a.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let target = self.lookup(target)?;
        let by_args = self.dta.transitions.entry(symbol.to_string()).or_default();
        if by_args.contains_key(&args) {
            let shown = self.dta.show_key(symbol, &args);
            return Err(AutomatonError::DuplicateTransition(shown));
        }
        by_args.insert(args, target);
        Ok(())
    }

    pub fn build(self) -> Dta {
        self.dta
    }
}

/// Per-node states of a successful run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAnnotation(BTreeMap<Address, StateId>);

impl StateAnnotation {
    pub fn get(&self, address: &Address) -> Option<StateId> {
        self.0.get(address).copied()
    }

    pub fn root(&self) -> StateId {
        self.0[&Address::root()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries in preorder.
    pub fn iter(&self) -> impl Iterator<Item = (&Address, StateId)> + '_ {
        self.0.iter().map(|(u, q)| (u, *q))
    }
}

impl Dta {
    pub fn builder(alphabet: RankedAlphabet) -> DtaBuilder {
        DtaBuilder {
            dta: Dta {
                alphabet,
                states: Vec::new(),
                finals: BTreeSet::new(),
                transitions: HashMap::new(),
            },
            index: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals.iter().copied()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.values().map(HashMap::len).sum()
    }

    /// One transition step, `None` when undefined.
    pub fn step(&self, symbol: &str, args: &[StateId]) -> Option<StateId> {
        self.transitions.get(symbol)?.get(args).copied()
    }

    fn show_key(&self, symbol: &str, args: &[StateId]) -> String {
        if args.is_empty() {
            symbol.to_string()
        } else {
            let names: Vec<&str> = args.iter().map(|q| self.state_name(*q)).collect();
            format!("{symbol}({})", names.join(","))
        }
    }

    fn check_state(&self, q: StateId) -> Result<()> {
        if q.0 < self.states.len() {
            Ok(())
        } else {
            Err(AutomatonError::UnknownState(q.0))
        }
    }

    /// Bottom-up run; `Ok(None)` if some required transition is missing.
    pub fn run(&self, tree: &Tree) -> Result<Option<StateId>> {
        self.alphabet.check_tree(tree)?;
        Ok(self.eval(tree, None))
    }

    pub fn accepts(&self, tree: &Tree) -> Result<bool> {
        Ok(self.run(tree)?.is_some_and(|q| self.is_final(q)))
    }

    /// Evaluates a context with its hole standing for state `q`.
    pub fn run_context(&self, context: &Context, q: StateId) -> Result<Option<StateId>> {
        self.check_state(q)?;
        self.alphabet.check_context(context)?;
        Ok(self.eval(context.skeleton(), Some(q)))
    }

    fn eval(&self, node: &Tree, hole: Option<StateId>) -> Option<StateId> {
        if let Some(q) = hole {
            if node.is_hole() {
                return Some(q);
            }
        }
        let args = node
            .children()
            .iter()
            .map(|child| self.eval(child, hole))
            .collect::<Option<Vec<_>>>()?;
        self.step(node.label(), &args)
    }

    /// The state reached at every node, or `None` if the run is rejected anywhere.
    pub fn annotate(&self, tree: &Tree) -> Result<Option<StateAnnotation>> {
        self.alphabet.check_tree(tree)?;
        let mut states = BTreeMap::new();
        Ok(self
            .annotate_node(tree, Address::root(), &mut states)
            .map(|_| StateAnnotation(states)))
    }

    fn annotate_node(&self, node: &Tree, at: Address, out: &mut BTreeMap<Address, StateId>) -> Option<StateId> {
        let args = node
            .children()
            .iter()
            .enumerate()
            .map(|(i, child)| self.annotate_node(child, at.child(i + 1), out))
            .collect::<Option<Vec<_>>>()?;
        let q = self.step(node.label(), &args)?;
        out.insert(at, q);
        Some(q)
    }

    /// The pumping threshold `g_Σ(|Q|)` for this automaton's alphabet; 2 when
    /// every symbol is nullary. Saturates at `u64::MAX`.
    pub fn pumping_constant(&self) -> u64 {
        match self.alphabet.max_rank() {
            0 => 2,
            m => g_sigma(m, self.num_states()).unwrap_or(u64::MAX),
        }
    }

    /// Every accepted tree of size at most `size_bound`, ordered by size and
    /// then by rendering.
    ///
    /// Built by dynamic programming over (size, state): trees of size `s` are
    /// grouped by the state they evaluate to, and a symbol is only expanded for
    /// argument-state tuples that have a transition.
    pub fn enumerate_language(&self, size_bound: usize) -> Vec<Tree> {
        let (arena, by_size) = self.reachable_by_size(size_bound);
        let mut accepted: Vec<(usize, String, Tree)> = by_size
            .iter()
            .enumerate()
            .flat_map(|(size, groups)| {
                groups
                    .iter()
                    .filter(|(q, _)| self.is_final(**q))
                    .flat_map(|(_, ids)| ids.iter())
                    .map(move |&id| (size, id))
            })
            .map(|(size, id)| {
                let tree = arena.build(id);
                (size, tree.to_string(), tree)
            })
            .collect();
        accepted.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        accepted.into_iter().map(|(_, _, t)| t).collect()
    }

    /// `result[s][q]` holds every tree of size `s` whose run ends in `q`, as
    /// ids into the returned arena.
    fn reachable_by_size(&self, size_bound: usize) -> (Arena<'_>, Vec<BTreeMap<StateId, Vec<u32>>>) {
        let mut arena = Arena::default();
        let mut by_size: Vec<BTreeMap<StateId, Vec<u32>>> = vec![BTreeMap::new(); size_bound + 1];
        for size in 1..=size_bound {
            let mut layer: BTreeMap<StateId, Vec<u32>> = BTreeMap::new();
            for (symbol, rank) in self.alphabet.iter() {
                let Some(rules) = self.transitions.get(symbol) else {
                    continue;
                };
                if rank == 0 {
                    if size == 1 {
                        if let Some(&q) = rules.get([].as_slice()) {
                            layer.entry(q).or_default().push(arena.push(symbol, &[]));
                        }
                    }
                    continue;
                }
                if size <= rank {
                    continue;
                }
                for parts in compositions(size - 1, rank) {
                    for (args, &target) in rules {
                        let groups: Option<Vec<&[u32]>> = args
                            .iter()
                            .zip(&parts)
                            .map(|(q, &s)| by_size[s].get(q).map(Vec::as_slice))
                            .collect();
                        let Some(groups) = groups else { continue };
                        let out = layer.entry(target).or_default();
                        for_each_product(&groups, &mut |children| {
                            let ids: Vec<u32> = children.iter().map(|&&c| c).collect();
                            out.push(arena.push(symbol, &ids));
                        });
                    }
                }
            }
            by_size[size] = layer;
        }
        (arena, by_size)
    }
}

/// Shared-structure trees for the enumeration DP; children are arena ids.
#[derive(Default)]
struct Arena<'a> {
    nodes: Vec<(&'a str, Vec<u32>)>,
}

impl<'a> Arena<'a> {
    fn push(&mut self, symbol: &'a str, children: &[u32]) -> u32 {
        self.nodes.push((symbol, children.to_vec()));
        (self.nodes.len() - 1) as u32
    }

    fn build(&self, id: u32) -> Tree {
        let (symbol, children) = &self.nodes[id as usize];
        Tree::new(*symbol, children.iter().map(|&c| self.build(c)).collect())
    }
}

/// All ways to write `total` as an ordered sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=left.saturating_sub(parts - 1) {
            prefix.push(first);
            go(left - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && total >= parts {
        go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

fn for_each_product<'a, T>(lists: &[&'a [T]], f: &mut impl FnMut(&[&'a T])) {
    fn go<'a, T>(lists: &[&'a [T]], acc: &mut Vec<&'a T>, f: &mut impl FnMut(&[&'a T])) {
        match lists.split_first() {
            None => f(acc),
            Some((head, rest)) => {
                for item in head.iter() {
                    acc.push(item);
                    go(rest, acc, f);
                    acc.pop();
                }
            }
        }
    }
    go(lists, &mut Vec::with_capacity(lists.len()), f)
}

impl fmt::Display for Dta {
    /// Writes the automaton in the same line format [`parse_dta`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        writeln!(f, "states: {}", self.states.join(" "))?;
        let finals: Vec<&str> = self.finals().map(|q| self.state_name(q)).collect();
        writeln!(f, "final: {}", finals.join(" "))?;
        let mut rules: Vec<(String, &str)> = self
            .transitions
            .iter()
            .flat_map(|(symbol, by_args)| {
                by_args
                    .iter()
                    .map(move |(args, target)| (self.show_key(symbol, args), self.state_name(*target)))
            })
            .collect();
        rules.sort();
        for (key, target) in rules {
            writeln!(f, "trans: {key} -> {target}")?;
        }
        Ok(())
    }
}

impl FromStr for Dta {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Self> {
        parse_dta(s)
    }
}

fn list_items(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

/// Parses the line-oriented automaton format:
///
/// ```text
/// # g^n(a)
/// alphabet: g/1 a/0
/// states: q
/// final: q
/// trans: a -> q
/// trans: g(q) -> q
/// ```
///
/// Declarations may appear in any order and `alphabet:`, `states:` and
/// `final:` lines may repeat.
pub fn parse_dta(text: &str) -> Result<Dta> {
    let mut symbols: Vec<(String, usize)> = Vec::new();
    let mut states: Vec<(usize, String)> = Vec::new();
    let mut finals: Vec<(usize, String)> = Vec::new();
    let mut rules: Vec<(usize, &str)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, rest)) = content.split_once(':') else {
            return Err(AutomatonError::Syntax {
                line,
                msg: format!("expected `key: ...`, found `{content}`"),
            });
        };
        match key.trim() {
            "alphabet" => {
                for item in list_items(rest) {
                    let parsed = item
                        .split_once('/')
                        .and_then(|(name, rank)| Some((name.to_string(), rank.parse::<usize>().ok()?)));
                    match parsed {
                        Some(pair) => symbols.push(pair),
                        None => {
                            return Err(AutomatonError::Syntax {
                                line,
                                msg: format!("expected `name/rank`, found `{item}`"),
                            })
                        }
                    }
                }
            }
            "states" => states.extend(list_items(rest).map(|s| (line, s.to_string()))),
            "final" => finals.extend(list_items(rest).map(|s| (line, s.to_string()))),
            "trans" => rules.push((line, rest.trim())),
            other => {
                return Err(AutomatonError::Syntax {
                    line,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let alphabet = RankedAlphabet::new(symbols)?;
    let mut builder = Dta::builder(alphabet);
    let at = |line: usize| {
        move |e: AutomatonError| AutomatonError::AtLine {
            line,
            source: Box::new(e),
        }
    };
    for (line, name) in &states {
        builder.state(name).map_err(at(*line))?;
    }
    for (line, name) in &finals {
        builder.final_state(name).map_err(at(*line))?;
    }
    for (line, rule) in rules {
        let (symbol, args, target) = parse_rule(rule).ok_or_else(|| AutomatonError::Syntax {
            line,
            msg: format!("expected `sym(q1,...,qk) -> q`, found `{rule}`"),
        })?;
        builder.transition(symbol, &args, target).map_err(at(line))?;
    }
    Ok(builder.build())
}

fn parse_rule(rule: &str) -> Option<(&str, Vec<&str>, &str)> {
    let (lhs, target) = rule.split_once("->")?;
    let target = target.trim();
    let lhs = lhs.trim();
    if target.is_empty() || target.contains(char::is_whitespace) {
        return None;
    }
    match lhs.split_once('(') {
        None => (!lhs.is_empty() && !lhs.contains(char::is_whitespace)).then_some((lhs, Vec::new(), target)),
        Some((symbol, args)) => {
            let args = args.trim().strip_suffix(')')?;
            let args: Vec<&str> = args.split(',').map(str::trim).collect();
            if args.iter().any(|a| a.is_empty()) {
                return None;
            }
            Some((symbol.trim(), args, target))
        }
    }
}
