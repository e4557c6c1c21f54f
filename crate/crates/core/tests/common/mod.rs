#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;
use treepump::automata::Dta;
use treepump::terms::{Address, Marking, RankedAlphabet, Tree};

pub const L3: &str = include_str!("../../data/l3.dta");
pub const PARITY: &str = include_str!("../../data/parity.dta");

/// Symbols of rank 0..=`max_rank`: `a`, `b` nullary, then `g/1`, `f/2`, `h/3`.
pub fn alphabet_up_to(max_rank: usize) -> RankedAlphabet {
    let all = [("a", 0), ("b", 0), ("g", 1), ("f", 2), ("h", 3)];
    RankedAlphabet::new(all.into_iter().filter(|(_, r)| *r <= max_rank)).unwrap()
}

pub fn fga() -> RankedAlphabet {
    RankedAlphabet::new([("f", 2), ("g", 1), ("a", 0)]).unwrap()
}

/// A random tree of exactly `size` nodes over `alphabet`, which must have a
/// nullary symbol.
pub fn random_tree(rng: &mut impl Rng, alphabet: &RankedAlphabet, size: usize) -> Tree {
    let mut by_rank: Vec<Vec<String>> = vec![Vec::new(); alphabet.max_rank() + 1];
    for (symbol, rank) in alphabet.iter() {
        by_rank[rank].push(symbol.to_string());
    }
    grow(rng, &by_rank, size)
}

fn grow(rng: &mut impl Rng, by_rank: &[Vec<String>], size: usize) -> Tree {
    let pick = |rng: &mut _, symbols: &[String]| symbols[Rng::random_range(rng, 0..symbols.len())].clone();
    if size == 1 {
        return Tree::leaf(pick(rng, &by_rank[0]));
    }
    let ranks: Vec<usize> = (1..by_rank.len().min(size))
        .filter(|&r| !by_rank[r].is_empty())
        .collect();
    let rank = ranks[rng.random_range(0..ranks.len())];
    let symbol = pick(rng, &by_rank[rank]);
    // Random composition of size-1 into `rank` positive parts.
    let mut cuts: Vec<usize> = index::sample(rng, size - 2, rank - 1)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(rank);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(size - 1)) {
        parts.push(c - prev);
        prev = c;
    }
    Tree::new(symbol, parts.into_iter().map(|s| grow(rng, by_rank, s)).collect())
}

/// A random marking of exactly `count` nodes.
pub fn random_marking(rng: &mut impl Rng, tree: &Tree, count: usize) -> Marking {
    let all = tree.addresses();
    let chosen = index::sample(rng, all.len(), count.min(all.len()));
    Marking::new(tree, chosen.into_iter().map(|i| all[i].clone())).unwrap()
}

/// A random partial DTA over `alphabet` with `states` states; each transition
/// is present with probability `density` and at least one state is final.
pub fn random_dta(rng: &mut impl Rng, alphabet: &RankedAlphabet, states: usize, density: f64) -> Dta {
    let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    let mut builder = Dta::builder(alphabet.clone());
    for name in &names {
        builder.state(name).unwrap();
    }
    let mut any_final = false;
    for name in &names {
        if rng.random_bool(0.5) {
            builder.final_state(name).unwrap();
            any_final = true;
        }
    }
    if !any_final {
        builder.final_state(&names[rng.random_range(0..states)]).unwrap();
    }
    for (symbol, rank) in alphabet.iter() {
        for tuple in tuples(states, rank) {
            if rng.random_bool(density) {
                let args: Vec<&str> = tuple.iter().map(|&i| names[i].as_str()).collect();
                let target = &names[rng.random_range(0..states)];
                builder.transition(symbol, &args, target).unwrap();
            }
        }
    }
    builder.build()
}

/// All `rank`-tuples over `0..states`.
pub fn tuples(states: usize, rank: usize) -> Vec<Vec<usize>> {
    (0..rank).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..states).map(move |q| {
                    let mut next = prefix.clone();
                    next.push(q);
                    next
                })
            })
            .collect()
    })
}

/// Which states are reachable by some tree of each size, as bit sets.
pub struct Feasibility<'a> {
    dta: &'a Dta,
    reach: Vec<u64>,
    // (symbol, args, target)
    rules: Vec<(String, Vec<usize>, usize)>,
}

impl<'a> Feasibility<'a> {
    pub fn new(dta: &'a Dta, max_size: usize) -> Self {
        assert!(dta.num_states() <= 64);
        let mut rules = Vec::new();
        for (symbol, rank) in dta.alphabet().iter() {
            for args in tuples(dta.num_states(), rank) {
                let ids: Vec<_> = args.iter().map(|&i| dta.states().nth(i).unwrap()).collect();
                if let Some(target) = dta.step(symbol, &ids) {
                    rules.push((symbol.to_string(), args, target.index()));
                }
            }
        }
        let mut reach = vec![0u64; max_size + 1];
        for size in 1..=max_size {
            let mut mask = 0u64;
            for (_, args, target) in &rules {
                if Self::splittable(&reach, size - 1, args) {
                    mask |= 1 << target;
                }
            }
            reach[size] = mask;
        }
        Feasibility { dta, reach, rules }
    }

    fn splittable(reach: &[u64], total: usize, args: &[usize]) -> bool {
        match args.split_first() {
            None => total == 0,
            Some((q, rest)) => {
                let min_rest = rest.len();
                (1..=total.saturating_sub(min_rest))
                    .any(|s| reach[s] & (1 << q) != 0 && Self::splittable(reach, total - s, rest))
            }
        }
    }

    pub fn reachable(&self, size: usize, state: usize) -> bool {
        self.reach.get(size).is_some_and(|m| m & (1 << state) != 0)
    }

    /// Sizes in `range` at which some accepted tree exists.
    pub fn accepted_sizes(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        range
            .filter(|&s| self.dta.finals().any(|q| self.reachable(s, q.index())))
            .collect()
    }

    /// A random tree of exactly `size` nodes whose run ends in `state`.
    pub fn sample(&self, rng: &mut impl Rng, size: usize, state: usize) -> Tree {
        assert!(self.reachable(size, state));
        let mut options: Vec<(&str, Vec<usize>, &[usize])> = Vec::new();
        for (symbol, args, target) in &self.rules {
            if *target != state {
                continue;
            }
            for parts in self.splits(size - 1, args) {
                options.push((symbol, parts, args));
            }
        }
        let (symbol, parts, args) = &options[rng.random_range(0..options.len())];
        let children = parts
            .iter()
            .zip(args.iter())
            .map(|(&s, &q)| self.sample(rng, s, q))
            .collect();
        Tree::new(*symbol, children)
    }

    fn splits(&self, total: usize, args: &[usize]) -> Vec<Vec<usize>> {
        match args.split_first() {
            None if total == 0 => vec![Vec::new()],
            None => Vec::new(),
            Some((q, rest)) => (1..=total.saturating_sub(rest.len()))
                .filter(|&s| self.reachable(s, *q))
                .flat_map(|s| {
                    self.splits(total - s, rest).into_iter().map(move |mut tail| {
                        tail.insert(0, s);
                        tail
                    })
                })
                .collect(),
        }
    }

    /// A random accepted tree of exactly `size` nodes.
    pub fn sample_accepted(&self, rng: &mut impl Rng, size: usize) -> Tree {
        let finals: Vec<usize> = self
            .dta
            .finals()
            .map(|q| q.index())
            .filter(|&q| self.reachable(size, q))
            .collect();
        let q = finals[rng.random_range(0..finals.len())];
        self.sample(rng, size, q)
    }
}

/// Every tree over `alphabet` with at most `bound` nodes, by naive recursion.
pub fn all_trees(alphabet: &RankedAlphabet, bound: usize) -> Vec<Tree> {
    fn exact(alphabet: &RankedAlphabet, size: usize) -> Vec<Tree> {
        let mut out = Vec::new();
        for (symbol, rank) in alphabet.iter() {
            if rank == 0 {
                if size == 1 {
                    out.push(Tree::leaf(symbol));
                }
                continue;
            }
            for parts in compositions(size.saturating_sub(1), rank) {
                let mut partial: Vec<Vec<Tree>> = vec![Vec::new()];
                for s in parts {
                    let options = exact(alphabet, s);
                    partial = partial
                        .into_iter()
                        .flat_map(|prefix| {
                            options.iter().map(move |t| {
                                let mut next = prefix.clone();
                                next.push(t.clone());
                                next
                            })
                        })
                        .collect();
                }
                out.extend(partial.into_iter().map(|children| Tree::new(symbol, children)));
            }
        }
        out
    }
    (1..=bound).flat_map(|s| exact(alphabet, s)).collect()
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (1..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Interesting nodes by iterating the defining rule to a fixpoint over
/// explicit address sets.
pub fn interesting_by_fixpoint(tree: &Tree, marks: &Marking) -> BTreeSet<Address> {
    let nodes = tree.addresses();
    let mut interesting: BTreeSet<Address> = marks.iter().cloned().collect();
    loop {
        let mut changed = false;
        for u in &nodes {
            if interesting.contains(u) {
                continue;
            }
            let arity = tree.get(u).unwrap().arity();
            let leading = (1..=arity)
                .filter(|&i| {
                    let child = u.child(i);
                    interesting.iter().any(|w| child.is_prefix_of(w))
                })
                .count();
            if leading >= 2 {
                interesting.insert(u.clone());
                changed = true;
            }
        }
        if !changed {
            return interesting;
        }
    }
}

/// Marks at or below `outer` but not at or below `inner`, by filtering.
pub fn marks_between(marks: &Marking, outer: &Address, inner: Option<&Address>) -> usize {
    marks
        .iter()
        .filter(|u| outer.is_prefix_of(u) && inner.is_none_or(|v| !v.is_prefix_of(u)))
        .count()
}
