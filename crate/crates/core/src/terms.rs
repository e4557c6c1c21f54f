//! Ranked alphabets, finite ordered trees, one-hole contexts and Gorn addresses.
//!
//! Every value here is immutable once built. Operations that "change" a tree
//! (substitution, splitting, composing contexts) return fresh values, so the
//! recomposition identities can be checked with plain `==`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Reserved name of the nullary hole symbol in the concrete syntax.
pub const HOLE: &str = "@";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("symbol `{name}` at byte {pos} has rank {expected} but is applied to {found} argument(s)")]
    RankMismatch {
        name: String,
        pos: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("symbol `{name}` at {address} is not in the alphabet")]
    NotInAlphabet { name: String, address: Address },
    #[error("symbol `{name}` at {address} has rank {expected} but has {found} children")]
    ArityMismatch {
        name: String,
        address: Address,
        expected: usize,
        found: usize,
    },
    #[error("address {0} does not denote a node of the tree")]
    InvalidAddress(Address),
    #[error("malformed address `{0}`")]
    AddressSyntax(String),
    #[error("{outer} is not a strict ancestor of {inner}")]
    NotStrictAncestor { outer: Address, inner: Address },
    #[error("a context needs exactly one hole, found {0}")]
    HoleCount(usize),
    #[error("the hole cannot be marked")]
    MarkedHole,
    #[error("the hole `@` is only allowed in contexts")]
    HoleInTree,
}

pub type Result<T, E = TermError> = std::result::Result<T, E>;

fn valid_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite set of symbols, each with a fixed rank.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedAlphabet {
    symbols: BTreeMap<String, usize>,
}

impl RankedAlphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut alphabet = RankedAlphabet::default();
        for (name, rank) in symbols {
            let name = name.into();
            if !valid_symbol_name(&name) {
                return Err(TermError::InvalidSymbol(name));
            }
            if alphabet.symbols.insert(name.clone(), rank).is_some() {
                return Err(TermError::DuplicateSymbol(name));
            }
        }
        Ok(alphabet)
    }

    pub fn rank(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// The maximal rank of any symbol; 0 for an empty alphabet.
    pub fn max_rank(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbols in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().map(|(name, rank)| (name.as_str(), *rank))
    }

    /// Checks that every node of `tree` uses a declared symbol at its declared rank.
    pub fn check_tree(&self, tree: &Tree) -> Result<()> {
        self.check_node(tree, &mut Vec::new(), false)
    }

    /// Like [`check_tree`](Self::check_tree), but the hole is admitted at its position.
    pub fn check_context(&self, context: &Context) -> Result<()> {
        self.check_node(&context.tree, &mut Vec::new(), true)
    }

    fn check_node(&self, node: &Tree, path: &mut Vec<usize>, allow_hole: bool) -> Result<()> {
        if allow_hole && node.is_hole() {
            return Ok(());
        }
        let expected = self.rank(&node.label).ok_or_else(|| TermError::NotInAlphabet {
            name: node.label.clone(),
            address: Address(path.clone()),
        })?;
        if expected != node.children.len() {
            return Err(TermError::ArityMismatch {
                name: node.label.clone(),
                address: Address(path.clone()),
                expected,
                found: node.children.len(),
            });
        }
        for (i, child) in node.children.iter().enumerate() {
            path.push(i + 1);
            self.check_node(child, path, allow_hole)?;
            path.pop();
        }
        Ok(())
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, rank)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}/{rank}")?;
        }
        Ok(())
    }
}

/// A node identity: the 1-based child indices on the way down from the root.
///
/// The derived ordering is lexicographic, so a node sorts before all of its
/// descendants and sorted addresses come out in preorder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(Vec<usize>);

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    /// Builds an address from child indices; every index must be at least 1.
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let indices: Vec<usize> = indices.into_iter().collect();
        if indices.contains(&0) {
            let text = indices.iter().map(usize::to_string).collect::<Vec<_>>().join(".");
            return Err(TermError::AddressSyntax(text));
        }
        Ok(Address(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Address {
        assert!(index >= 1, "child indices are 1-based");
        let mut indices = self.0.clone();
        indices.push(index);
        Address(indices)
    }

    pub fn parent(&self) -> Option<Address> {
        let (_, init) = self.0.split_last()?;
        Some(Address(init.to_vec()))
    }

    /// Ancestor-or-self test.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Proper ancestor test.
    pub fn is_strict_prefix_of(&self, other: &Address) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    /// The address of `self` relative to `prefix`, if `prefix` is an ancestor-or-self.
    pub fn strip_prefix(&self, prefix: &Address) -> Option<Address> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| Address(rest.to_vec()))
    }

    pub fn concat(&self, suffix: &Address) -> Address {
        let mut indices = self.0.clone();
        indices.extend_from_slice(&suffix.0);
        Address(indices)
    }

    /// Strict ancestors, root first.
    pub fn ancestors(&self) -> impl Iterator<Item = Address> + '_ {
        (0..self.0.len()).map(move |len| Address(self.0[..len].to_vec()))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, index) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{index}")?;
        }
        Ok(())
    }
}

impl FromStr for Address {
    type Err = TermError;

    /// Parses `e` (or the empty string) as the root and `1.2.1` as a path.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Address::root());
        }
        let indices = s
            .split('.')
            .map(|part| match part.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(TermError::AddressSyntax(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Address(indices))
    }
}

/// A finite ordered labelled tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    label: String,
    children: Vec<Tree>,
}

impl Tree {
    /// # Panics
    ///
    /// If `label` is the reserved hole name; holes only live inside [`Context`].
    pub fn new(label: impl Into<String>, children: Vec<Tree>) -> Self {
        let label = label.into();
        assert!(label != HOLE, "`{HOLE}` is reserved for context holes");
        Tree { label, children }
    }

    pub fn leaf(label: impl Into<String>) -> Self {
        Tree::new(label, Vec::new())
    }

    /// `symbol(symbol(...symbol(base)))` with `n` unary layers.
    pub fn unary_chain(symbol: &str, n: usize, base: Tree) -> Self {
        (0..n).fold(base, |inner, _| Tree::new(symbol, vec![inner]))
    }

    fn hole() -> Self {
        Tree {
            label: HOLE.to_string(),
            children: Vec::new(),
        }
    }

    pub(crate) fn is_hole(&self) -> bool {
        self.label == HOLE
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn arity(&self) -> usize {
        self.children.len()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Tree::height).max().unwrap_or(0)
    }

    pub fn get(&self, address: &Address) -> Option<&Tree> {
        address
            .indices()
            .iter()
            .try_fold(self, |node, &i| node.children.get(i.checked_sub(1)?))
    }

    pub fn contains(&self, address: &Address) -> bool {
        self.get(address).is_some()
    }

    pub fn subtree_at(&self, address: &Address) -> Result<Tree> {
        self.get(address)
            .cloned()
            .ok_or_else(|| TermError::InvalidAddress(address.clone()))
    }

    /// All node addresses in preorder (equivalently, sorted order).
    pub fn addresses(&self) -> Vec<Address> {
        let mut out = Vec::with_capacity(self.size());
        let mut path = Vec::new();
        self.collect_addresses(&mut path, &mut out);
        out
    }

    fn collect_addresses(&self, path: &mut Vec<usize>, out: &mut Vec<Address>) {
        out.push(Address(path.clone()));
        for (i, child) in self.children.iter().enumerate() {
            path.push(i + 1);
            child.collect_addresses(path, out);
            path.pop();
        }
    }

    /// `self` with the subtree at `address` replaced by `replacement`.
    fn replaced(&self, address: &Address, replacement: Tree) -> Result<Tree> {
        let mut out = self.clone();
        let slot = address
            .indices()
            .iter()
            .try_fold(&mut out, |node, &i| node.children.get_mut(i - 1))
            .ok_or_else(|| TermError::InvalidAddress(address.clone()))?;
        *slot = replacement;
        Ok(out)
    }

    /// The context obtained by cutting out the subtree at `address`.
    pub fn context_at(&self, address: &Address) -> Result<Context> {
        let tree = self.replaced(address, Tree::hole())?;
        Ok(Context {
            tree,
            hole: address.clone(),
        })
    }

    /// Cuts `self` at a strict ancestor pair `outer` above `inner` into
    /// `(c', c, t')` with `c'·c·t' = self`.
    pub fn split(&self, outer: &Address, inner: &Address) -> Result<(Context, Context, Tree)> {
        for address in [outer, inner] {
            if !self.contains(address) {
                return Err(TermError::InvalidAddress(address.clone()));
            }
        }
        if !outer.is_strict_prefix_of(inner) {
            return Err(TermError::NotStrictAncestor {
                outer: outer.clone(),
                inner: inner.clone(),
            });
        }
        let cprime = self.context_at(outer)?;
        let middle = self.subtree_at(outer)?;
        let relative = inner.strip_prefix(outer).expect("checked ancestor");
        let c = middle.context_at(&relative)?;
        let tprime = self.subtree_at(inner)?;
        Ok((cprime, c, tprime))
    }

    fn count_holes(&self) -> usize {
        usize::from(self.is_hole()) + self.children.iter().map(Tree::count_holes).sum::<usize>()
    }

    fn find_hole(&self, path: &mut Vec<usize>) -> bool {
        if self.is_hole() {
            return true;
        }
        for (i, child) in self.children.iter().enumerate() {
            path.push(i + 1);
            if child.find_hole(path) {
                return true;
            }
            path.pop();
        }
        false
    }

    fn write_marked(&self, f: &mut impl fmt::Write, path: &mut Vec<usize>, marks: &Marking) -> fmt::Result {
        f.write_str(&self.label)?;
        if marks.contains_indices(path) {
            f.write_str("!")?;
        }
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, child) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                path.push(i + 1);
                child.write_marked(f, path, marks)?;
                path.pop();
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_marked(f, &mut Vec::new(), &Marking::default())
    }
}

/// Renders `tree` in the concrete syntax with a `!` after every marked label.
pub fn render(tree: &Tree, marks: &Marking) -> String {
    let mut out = String::new();
    tree.write_marked(&mut out, &mut Vec::new(), marks)
        .expect("writing to a String cannot fail");
    out
}

/// A tree with exactly one hole leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    tree: Tree,
    hole: Address,
}

impl Context {
    /// The empty context `∘`.
    pub fn identity() -> Self {
        Context {
            tree: Tree::hole(),
            hole: Address::root(),
        }
    }

    /// `symbol(∘)` for a unary symbol.
    pub fn unary(symbol: &str) -> Self {
        Context {
            tree: Tree {
                label: symbol.to_string(),
                children: vec![Tree::hole()],
            },
            hole: Address(vec![1]),
        }
    }

    /// Builds a context from a skeleton in which [`HOLE`] labels exactly one leaf.
    /// Skeletons with holes can only come from parsing or another context.
    pub fn from_skeleton(tree: Tree) -> Result<Self> {
        match tree.count_holes() {
            1 => {}
            n => return Err(TermError::HoleCount(n)),
        }
        let mut path = Vec::new();
        tree.find_hole(&mut path);
        let hole = Address(path);
        if !tree.get(&hole).expect("hole was found").children.is_empty() {
            return Err(TermError::HoleCount(1));
        }
        Ok(Context { tree, hole })
    }

    /// The underlying tree, including the `@`-labelled hole leaf.
    pub fn skeleton(&self) -> &Tree {
        &self.tree
    }

    pub fn hole_address(&self) -> &Address {
        &self.hole
    }

    /// Number of non-hole nodes.
    pub fn size(&self) -> usize {
        self.tree.size() - 1
    }

    pub fn is_identity(&self) -> bool {
        self.hole.is_root()
    }

    /// Label at the root, or `None` for the identity context.
    pub fn root_label(&self) -> Option<&str> {
        (!self.is_identity()).then(|| self.tree.label())
    }

    /// `c·t`: plugs `tree` into the hole.
    pub fn substitute(&self, tree: &Tree) -> Tree {
        self.tree
            .replaced(&self.hole, tree.clone())
            .expect("hole address is valid by construction")
    }

    /// `c1·c2`: plugs `inner` into the hole; the new hole is `inner`'s, relocated.
    pub fn compose(&self, inner: &Context) -> Context {
        Context {
            tree: self.substitute(&inner.tree),
            hole: self.hole.concat(&inner.hole),
        }
    }

    /// `c^n`, with `c^0 = ∘`.
    pub fn power(&self, n: usize) -> Context {
        (0..n).fold(Context::identity(), |acc, _| acc.compose(self))
    }

    pub fn render_marked(&self, marks: &Marking) -> String {
        render(&self.tree, marks)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tree.fmt(f)
    }
}

/// The distinguished nodes of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Marking(BTreeSet<Address>);

impl Marking {
    pub fn empty() -> Self {
        Marking::default()
    }

    /// Validates every address against `tree`.
    pub fn new(tree: &Tree, addresses: impl IntoIterator<Item = Address>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for address in addresses {
            if !tree.contains(&address) {
                return Err(TermError::InvalidAddress(address));
            }
            set.insert(address);
        }
        Ok(Marking(set))
    }

    /// Every node of `tree` marked.
    pub fn all(tree: &Tree) -> Self {
        Marking(tree.addresses().into_iter().collect())
    }

    /// Every node whose label satisfies `pred`.
    pub fn by_label(tree: &Tree, pred: impl Fn(&str) -> bool) -> Self {
        Marking(
            tree.addresses()
                .into_iter()
                .filter(|u| pred(tree.get(u).expect("own address").label()))
                .collect(),
        )
    }

    /// Parses a comma-separated address list such as `1.1,2.1` (root is `e`).
    pub fn parse_list(tree: &Tree, text: &str) -> Result<Self> {
        let addresses = text
            .split(',')
            .map(str::trim)
            .filter(|part| !part.is_empty())
            .map(Address::from_str)
            .collect::<Result<Vec<_>>>()?;
        Marking::new(tree, addresses)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, address: &Address) -> bool {
        self.0.contains(address)
    }

    fn contains_indices(&self, indices: &[usize]) -> bool {
        // Avoids allocating an Address for every rendered node when unmarked.
        !self.0.is_empty() && self.0.contains(&Address(indices.to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Address> + '_ {
        self.0.iter()
    }

    /// Marks in the subtree rooted at `root`.
    pub fn count_within(&self, root: &Address) -> usize {
        self.0
            .range(root.clone()..)
            .take_while(|u| root.is_prefix_of(u))
            .count()
    }

    /// Marks in the subtree at `outer` but not in the subtree at `inner`, i.e.
    /// the marks owned by the context between the two cut points.
    pub fn count_between(&self, outer: &Address, inner: &Address) -> usize {
        self.count_within(outer)
            - if outer.is_prefix_of(inner) {
                self.count_within(inner)
            } else {
                0
            }
    }

    /// The marking merged with `other`.
    pub fn union(&self, other: &Marking) -> Marking {
        Marking(self.0.union(&other.0).cloned().collect())
    }
}

impl FromIterator<Address> for Marking {
    /// Builds an unvalidated marking; prefer [`Marking::new`] when a tree is at hand.
    fn from_iter<I: IntoIterator<Item = Address>>(iter: I) -> Self {
        Marking(iter.into_iter().collect())
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, address) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{address}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------------

struct RawNode {
    name: String,
    pos: usize,
    marked: bool,
    children: Vec<RawNode>,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(TermError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn name(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        if rest.starts_with(HOLE) {
            self.pos += HOLE.len();
            return Ok((HOLE.to_string(), start));
        }
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || c == '_' || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return match rest.chars().next() {
                Some(c) => self.error(format!("expected a symbol name, found `{c}`")),
                None => self.error("expected a symbol name, found end of input"),
            };
        }
        self.pos += len;
        Ok((rest[..len].to_string(), start))
    }

    fn node(&mut self) -> Result<RawNode> {
        let (name, pos) = self.name()?;
        let mut marked = false;
        if self.peek() == Some('!') {
            self.pos += 1;
            marked = true;
        }
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.node()?);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return self.error(format!("expected `,` or `)`, found `{c}`")),
                    None => return self.error("unclosed `(`"),
                }
            }
        }
        Ok(RawNode {
            name,
            pos,
            marked,
            children,
        })
    }

    fn parse(src: &'a str) -> Result<RawNode> {
        let mut parser = Parser { src, pos: 0 };
        let root = parser.node()?;
        if let Some(c) = parser.peek() {
            return parser.error(format!("unexpected trailing `{c}`"));
        }
        Ok(root)
    }
}

/// How ranks are checked while converting a parsed node.
enum Ranks<'a> {
    Fixed(&'a RankedAlphabet),
    Inferred(BTreeMap<String, usize>),
}

impl Ranks<'_> {
    fn check(&mut self, node: &RawNode) -> Result<()> {
        let found = node.children.len();
        let expected = match self {
            Ranks::Fixed(alphabet) => alphabet.rank(&node.name).ok_or_else(|| TermError::UnknownSymbol {
                name: node.name.clone(),
                pos: node.pos,
            })?,
            Ranks::Inferred(seen) => *seen.entry(node.name.clone()).or_insert(found),
        };
        if expected != found {
            return Err(TermError::RankMismatch {
                name: node.name.clone(),
                pos: node.pos,
                expected,
                found,
            });
        }
        Ok(())
    }
}

fn convert(node: RawNode, ranks: &mut Ranks<'_>, path: &mut Vec<usize>, marks: &mut BTreeSet<Address>) -> Result<Tree> {
    if node.name == HOLE {
        if node.marked {
            return Err(TermError::MarkedHole);
        }
        if !node.children.is_empty() {
            return Err(TermError::RankMismatch {
                name: node.name,
                pos: node.pos,
                expected: 0,
                found: node.children.len(),
            });
        }
        return Ok(Tree::hole());
    }
    ranks.check(&node)?;
    if node.marked {
        marks.insert(Address(path.clone()));
    }
    let mut children = Vec::with_capacity(node.children.len());
    for (i, child) in node.children.into_iter().enumerate() {
        path.push(i + 1);
        children.push(convert(child, ranks, path, marks)?);
        path.pop();
    }
    Ok(Tree {
        label: node.name,
        children,
    })
}

fn parse_skeleton(text: &str, ranks: &mut Ranks<'_>) -> Result<(Tree, Marking)> {
    let raw = Parser::parse(text)?;
    let mut marks = BTreeSet::new();
    let tree = convert(raw, ranks, &mut Vec::new(), &mut marks)?;
    Ok((tree, Marking(marks)))
}

fn reject_holes(tree: Tree) -> Result<Tree> {
    match tree.count_holes() {
        0 => Ok(tree),
        _ => Err(TermError::HoleInTree),
    }
}

/// Parses a tree such as `f(g!(a),g!(a))` against `alphabet`, returning the
/// addresses of `!`-marked nodes alongside it.
pub fn parse_tree(alphabet: &RankedAlphabet, text: &str) -> Result<(Tree, Marking)> {
    let (tree, marks) = parse_skeleton(text, &mut Ranks::Fixed(alphabet))?;
    Ok((reject_holes(tree)?, marks))
}

/// Parses a context such as `f(@,a)` against `alphabet`.
pub fn parse_context(alphabet: &RankedAlphabet, text: &str) -> Result<(Context, Marking)> {
    let (tree, marks) = parse_skeleton(text, &mut Ranks::Fixed(alphabet))?;
    Ok((Context::from_skeleton(tree)?, marks))
}

/// Parses a tree without a declared alphabet: each symbol's rank is fixed by
/// its first occurrence, and the inferred alphabet is returned.
pub fn parse_tree_inferred(text: &str) -> Result<(Tree, Marking, RankedAlphabet)> {
    let mut ranks = Ranks::Inferred(BTreeMap::new());
    let (tree, marks) = parse_skeleton(text, &mut ranks)?;
    let tree = reject_holes(tree)?;
    Ok((tree, marks, ranks.into_alphabet()))
}

/// Context counterpart of [`parse_tree_inferred`].
pub fn parse_context_inferred(text: &str) -> Result<(Context, Marking, RankedAlphabet)> {
    let mut ranks = Ranks::Inferred(BTreeMap::new());
    let (tree, marks) = parse_skeleton(text, &mut ranks)?;
    Ok((Context::from_skeleton(tree)?, marks, ranks.into_alphabet()))
}

impl Ranks<'_> {
    fn into_alphabet(self) -> RankedAlphabet {
        match self {
            Ranks::Fixed(alphabet) => alphabet.clone(),
            Ranks::Inferred(symbols) => RankedAlphabet { symbols },
        }
    }
}
