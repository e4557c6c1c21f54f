//! Mark-driven decomposition of a tree into `c'·c_1⋯c_k·t'`.
//!
//! A node is *interesting* if it is marked or if at least two of its children
//! lead down to interesting nodes. Along a root-to-leaf path that visits the
//! most interesting nodes, the last `k+1` of them become the cut points: each
//! context between consecutive cuts owns at least one mark, and the subtree at
//! the first cut owns at most `g_Σ(k)` marks.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::terms::{Address, Context, Marking, TermError, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("g_Σ needs a maximal rank of at least 1")]
    ZeroRank,
    #[error("g_Σ({n}) overflows for maximal rank {m}")]
    Overflow { m: usize, n: usize },
    #[error("the number of contexts k must be at least 1")]
    ZeroK,
    #[error("no root-to-leaf path visits {needed} interesting nodes (the best visits {found})")]
    NotEnoughInteresting { needed: usize, found: usize },
    #[error(transparent)]
    Term(#[from] TermError),
}

pub type Result<T, E = DecomposeError> = std::result::Result<T, E>;

/// `Σ_{i=0..n} m^i` for `m ≥ 1`.
pub fn g_sigma(m: usize, n: usize) -> Result<u64> {
    if m == 0 {
        return Err(DecomposeError::ZeroRank);
    }
    let m64 = m as u64;
    let mut sum: u64 = 0;
    let mut power: u64 = 1;
    for i in 0..=n {
        sum = sum.checked_add(power).ok_or(DecomposeError::Overflow { m, n })?;
        if i < n {
            power = power.checked_mul(m64).ok_or(DecomposeError::Overflow { m, n })?;
        }
    }
    Ok(sum)
}

/// The interesting nodes of `tree` under `marks`, in one bottom-up pass.
pub fn interesting_nodes(tree: &Tree, marks: &Marking) -> BTreeSet<Address> {
    fn visit(node: &Tree, at: Address, marks: &Marking, out: &mut BTreeSet<Address>) -> bool {
        let mut leading = 0;
        for (i, child) in node.children().iter().enumerate() {
            if visit(child, at.child(i + 1), marks, out) {
                leading += 1;
            }
        }
        let interesting = marks.contains(&at) || leading >= 2;
        if interesting {
            out.insert(at);
        }
        interesting || leading > 0
    }
    let mut out = BTreeSet::new();
    if !marks.is_empty() {
        visit(tree, Address::root(), marks, &mut out);
    }
    out
}

/// `d(u)`: the number of interesting strict ancestors of `u`.
pub fn depth_d(tree: &Tree, interesting: &BTreeSet<Address>, u: &Address) -> Result<usize> {
    if !tree.contains(u) {
        return Err(TermError::InvalidAddress(u.clone()).into());
    }
    Ok(u.ancestors().filter(|a| interesting.contains(a)).count())
}

/// A root-to-leaf path visiting the most interesting nodes. Among several such
/// paths the one ending in the lexicographically least leaf wins.
pub fn max_interesting_path(tree: &Tree, interesting: &BTreeSet<Address>) -> Result<Vec<Address>> {
    if interesting.is_empty() {
        return Err(DecomposeError::NotEnoughInteresting { needed: 1, found: 0 });
    }
    // Returns the best count below `at` and the child indices of the chosen
    // path, innermost first.
    fn best(node: &Tree, at: &Address, interesting: &BTreeSet<Address>) -> (usize, Vec<usize>) {
        let own = usize::from(interesting.contains(at));
        let mut winner: Option<(usize, usize, Vec<usize>)> = None;
        for (i, child) in node.children().iter().enumerate() {
            let (count, path) = best(child, &at.child(i + 1), interesting);
            if winner.as_ref().is_none_or(|(c, _, _)| count > *c) {
                winner = Some((count, i + 1, path));
            }
        }
        match winner {
            None => (own, Vec::new()),
            Some((count, index, mut path)) => {
                path.push(index);
                (own + count, path)
            }
        }
    }
    let (_, mut reversed) = best(tree, &Address::root(), interesting);
    reversed.reverse();
    let mut at = Address::root();
    let mut path = vec![at.clone()];
    for index in reversed {
        at = at.child(index);
        path.push(at.clone());
    }
    Ok(path)
}

/// The result of cutting a tree at `k+1` interesting nodes `v_1 … v_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Outer context, hole at `v_1`.
    pub cprime: Context,
    /// `c_i` is rooted at `v_i` with its hole at `v_{i+1}`.
    pub chain: Vec<Context>,
    /// Subtree at `v_{k+1}`.
    pub tprime: Tree,
    /// `v_1 … v_{k+1}` as addresses in the source tree.
    pub cuts: Vec<Address>,
    /// Marks owned by each `c_i`: at or below `v_i`, not at or below `v_{i+1}`.
    pub chain_marks: Vec<usize>,
    /// Marks in `c_1⋯c_k·t'`, i.e. in the subtree at `v_1`.
    pub inner_marks: usize,
}

impl Decomposition {
    pub fn k(&self) -> usize {
        self.chain.len()
    }

    /// `c_1⋯c_k·t'`.
    pub fn inner(&self) -> Tree {
        self.chain
            .iter()
            .rev()
            .fold(self.tprime.clone(), |inner, c| c.substitute(&inner))
    }

    /// `c'·c_1⋯c_k·t'`, which equals the source tree.
    pub fn recompose(&self) -> Tree {
        self.cprime.substitute(&self.inner())
    }
}

/// Cuts `tree` into `c'·c_1⋯c_k·t'` along the maximal interesting path.
///
/// Succeeds whenever some root-to-leaf path visits `k+1` interesting nodes,
/// which is guaranteed once `marks.len() ≥ g_Σ(k)` but may also happen below
/// that threshold.
pub fn decompose_k(tree: &Tree, marks: &Marking, k: usize) -> Result<Decomposition> {
    if k == 0 {
        return Err(DecomposeError::ZeroK);
    }
    let interesting = interesting_nodes(tree, marks);
    if interesting.is_empty() {
        return Err(DecomposeError::NotEnoughInteresting {
            needed: k + 1,
            found: 0,
        });
    }
    let path = max_interesting_path(tree, &interesting)?;
    let on_path: Vec<Address> = path.into_iter().filter(|u| interesting.contains(u)).collect();
    if on_path.len() < k + 1 {
        return Err(DecomposeError::NotEnoughInteresting {
            needed: k + 1,
            found: on_path.len(),
        });
    }
    let cuts = on_path[on_path.len() - (k + 1)..].to_vec();

    let cprime = tree.context_at(&cuts[0])?;
    let chain = cuts
        .windows(2)
        .map(|pair| {
            let relative = pair[1].strip_prefix(&pair[0]).expect("cuts lie on one path");
            tree.subtree_at(&pair[0])?.context_at(&relative)
        })
        .collect::<Result<Vec<_>, TermError>>()?;
    let tprime = tree.subtree_at(&cuts[k])?;
    let chain_marks = cuts
        .windows(2)
        .map(|pair| marks.count_between(&pair[0], &pair[1]))
        .collect();
    let inner_marks = marks.count_within(&cuts[0]);

    Ok(Decomposition {
        cprime,
        chain,
        tprime,
        cuts,
        chain_marks,
        inner_marks,
    })
}
