//! Pump witnesses extracted from an automaton run.
//!
//! [`ogden_decompose`] cuts an accepted tree at `|Q|+1` interesting nodes and
//! picks two cut points where the run is in the same state `q`. The context
//! between them loops on `q`, so it can be deleted or repeated freely. The
//! three state conditions carried by a witness are a certificate that every
//! pumped tree is accepted; [`verify_witness`] re-checks them and also runs the
//! automaton on a few pumped trees.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::automata::{AutomatonError, Dta, StateId};
use crate::decompose::{decompose_k, g_sigma, DecomposeError};
use crate::terms::{Address, Context, Marking, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PumpError {
    #[error("the automaton does not accept the tree")]
    NotAccepted,
    #[error("{found} marked node(s), but the pumping constant is {required}")]
    NotEnoughMarks { found: usize, required: u64 },
    #[error("tree of size {size} is smaller than the pumping constant {required}")]
    TreeTooSmall { size: usize, required: u64 },
    #[error("the number of simultaneously pumped contexts must be at least 1")]
    ZeroFold,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

pub type Result<T, E = PumpError> = std::result::Result<T, E>;

/// `t = c'·c·t'` together with a state `q` such that `t'` evaluates to `q`,
/// `c` maps `q` to itself and `c'` maps `q` to a final state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpWitness {
    pub cprime: Context,
    pub c: Context,
    pub tprime: Tree,
    pub state: StateId,
    /// The pumping constant the extraction was run with.
    pub p_used: u64,
    /// Root of `c` in the source tree.
    pub outer: Address,
    /// Hole of `c` (root of `t'`) in the source tree.
    pub inner: Address,
    pub marks_in_c: usize,
    /// Marks in `c·t'`.
    pub marks_in_inner: usize,
}

/// `t = c'·c_1⋯c_m·t'` where every `c_i` loops on the same state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPumpWitness {
    pub cprime: Context,
    pub chain: Vec<Context>,
    pub tprime: Tree,
    pub state: StateId,
    pub p_used: u64,
    /// The `m+1` cut addresses in the source tree.
    pub cuts: Vec<Address>,
    pub chain_marks: Vec<usize>,
    /// Marks in `c_1⋯c_m·t'`.
    pub marks_in_inner: usize,
}

/// A pumping decomposition that can be instantiated and certified.
pub trait Witness {
    /// The tree obtained by raising the pumped context(s) to the `n`-th power.
    fn pumped(&self, n: usize) -> Tree;

    /// The loop contexts, in order.
    fn loops(&self) -> Vec<&Context>;

    fn cprime(&self) -> &Context;

    fn tprime(&self) -> &Tree;

    fn state(&self) -> StateId;
}

impl Witness for PumpWitness {
    fn pumped(&self, n: usize) -> Tree {
        pump(self, n)
    }

    fn loops(&self) -> Vec<&Context> {
        vec![&self.c]
    }

    fn cprime(&self) -> &Context {
        &self.cprime
    }

    fn tprime(&self) -> &Tree {
        &self.tprime
    }

    fn state(&self) -> StateId {
        self.state
    }
}

impl Witness for MultiPumpWitness {
    fn pumped(&self, n: usize) -> Tree {
        pump_multi(self, n)
    }

    fn loops(&self) -> Vec<&Context> {
        self.chain.iter().collect()
    }

    fn cprime(&self) -> &Context {
        &self.cprime
    }

    fn tprime(&self) -> &Tree {
        &self.tprime
    }

    fn state(&self) -> StateId {
        self.state
    }
}

/// `c'·c^n·t'`.
pub fn pump(w: &PumpWitness, n: usize) -> Tree {
    w.cprime.substitute(&w.c.power(n).substitute(&w.tprime))
}

/// `c'·c_1^n⋯c_m^n·t'`.
pub fn pump_multi(w: &MultiPumpWitness, n: usize) -> Tree {
    let inner = w
        .chain
        .iter()
        .rev()
        .fold(w.tprime.clone(), |inner, c| c.power(n).substitute(&inner));
    w.cprime.substitute(&inner)
}

fn threshold(dta: &Dta, k: usize) -> u64 {
    match dta.alphabet().max_rank() {
        0 => 2,
        m => g_sigma(m, k).unwrap_or(u64::MAX),
    }
}

fn require_accepted(dta: &Dta, tree: &Tree) -> Result<()> {
    if dta.accepts(tree)? {
        Ok(())
    } else {
        Err(PumpError::NotAccepted)
    }
}

/// Extracts a pump witness from an accepted tree with at least
/// `dta.pumping_constant()` marked nodes.
///
/// The witness has at least one mark in `c` and at most `p_used` marks in `c·t'`.
pub fn ogden_decompose(dta: &Dta, tree: &Tree, marks: &Marking) -> Result<PumpWitness> {
    require_accepted(dta, tree)?;
    let k = dta.num_states();
    let p = threshold(dta, k);
    if (marks.len() as u64) < p {
        return Err(PumpError::NotEnoughMarks {
            found: marks.len(),
            required: p,
        });
    }
    let d = decompose_k(tree, marks, k)?;
    let run = dta.annotate(tree)?.expect("accepted trees have a complete run");
    let states: Vec<StateId> = d
        .cuts
        .iter()
        .map(|u| run.get(u).expect("cut addresses are nodes"))
        .collect();
    // Smallest i, then smallest j; k+1 cut states over k states always repeat.
    let (i, j) = (0..states.len())
        .flat_map(|i| (i + 1..states.len()).map(move |j| (i, j)))
        .find(|&(i, j)| states[i] == states[j])
        .expect("pigeonhole: more cut points than states");

    let c = d.chain[i..j]
        .iter()
        .fold(Context::identity(), |acc, ci| acc.compose(ci));
    let outer = d.cuts[i].clone();
    let inner = d.cuts[j].clone();
    Ok(PumpWitness {
        cprime: tree.context_at(&outer).map_err(DecomposeError::from)?,
        c,
        tprime: tree.subtree_at(&inner).map_err(DecomposeError::from)?,
        state: states[i],
        p_used: p,
        marks_in_c: marks.count_between(&outer, &inner),
        marks_in_inner: marks.count_within(&outer),
        outer,
        inner,
    })
}

/// The unmarked special case: every node counts, so `size(c·t') ≤ p`.
pub fn standard_decompose(dta: &Dta, tree: &Tree) -> Result<PumpWitness> {
    require_accepted(dta, tree)?;
    let p = dta.pumping_constant();
    if (tree.size() as u64) < p {
        return Err(PumpError::TreeTooSmall {
            size: tree.size(),
            required: p,
        });
    }
    ogden_decompose(dta, tree, &Marking::all(tree))
}

/// Extracts `mfold` contexts that all loop on one state, so that they can be
/// pumped simultaneously. Needs `g_Σ(mfold·|Q|)` marks.
pub fn ogden_decompose_multi(dta: &Dta, tree: &Tree, marks: &Marking, mfold: usize) -> Result<MultiPumpWitness> {
    if mfold == 0 {
        return Err(PumpError::ZeroFold);
    }
    require_accepted(dta, tree)?;
    let k = mfold * dta.num_states();
    let p = threshold(dta, k);
    if (marks.len() as u64) < p {
        return Err(PumpError::NotEnoughMarks {
            found: marks.len(),
            required: p,
        });
    }
    let d = decompose_k(tree, marks, k)?;
    let run = dta.annotate(tree)?.expect("accepted trees have a complete run");
    let states: Vec<StateId> = d
        .cuts
        .iter()
        .map(|u| run.get(u).expect("cut addresses are nodes"))
        .collect();

    let mut positions: BTreeMap<StateId, Vec<usize>> = BTreeMap::new();
    for (i, q) in states.iter().enumerate() {
        positions.entry(*q).or_default().push(i);
    }
    // Most frequent state; ties go to the smaller state name.
    let (&state, occurrences) = positions
        .iter()
        .max_by_key(|(q, at)| (at.len(), Reverse(dta.state_name(**q))))
        .expect("at least one cut");
    assert!(
        occurrences.len() > mfold,
        "pigeonhole: {} cuts over {} states",
        states.len(),
        dta.num_states()
    );
    let chosen = &occurrences[..=mfold];

    let chain = chosen
        .windows(2)
        .map(|pair| {
            d.chain[pair[0]..pair[1]]
                .iter()
                .fold(Context::identity(), |acc, ci| acc.compose(ci))
        })
        .collect();
    let cuts: Vec<Address> = chosen.iter().map(|&i| d.cuts[i].clone()).collect();
    let chain_marks = cuts
        .windows(2)
        .map(|pair| marks.count_between(&pair[0], &pair[1]))
        .collect();
    Ok(MultiPumpWitness {
        cprime: tree.context_at(&cuts[0]).map_err(DecomposeError::from)?,
        chain,
        tprime: tree.subtree_at(&cuts[mfold]).map_err(DecomposeError::from)?,
        state,
        p_used: p,
        chain_marks,
        marks_in_inner: marks.count_within(&cuts[0]),
        cuts,
    })
}

/// One named condition in a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Result of [`verify_witness`]: the state certificate, which covers every
/// exponent, and explicit membership runs for `n = 0..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub certificate: Vec<Check>,
    /// `(n, accepted)` for each spot-checked exponent.
    pub spot_checks: Vec<(usize, bool)>,
}

impl VerificationReport {
    pub fn certificate_holds(&self) -> bool {
        self.certificate.iter().all(|c| c.passed)
    }

    pub fn passed(&self) -> bool {
        self.certificate_holds() && self.spot_checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> + '_ {
        self.certificate.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        for check in &self.certificate {
            writeln!(f, "check {}: {} ({})", check.name, verdict(check.passed), check.detail)?;
        }
        for (n, ok) in &self.spot_checks {
            writeln!(f, "spot n={n}: {}", if *ok { "accept" } else { "REJECT" })?;
        }
        writeln!(f, "verification: {}", verdict(self.passed()))
    }
}

fn show_state(dta: &Dta, q: Option<StateId>) -> String {
    q.map_or_else(|| "undefined".to_string(), |q| dta.state_name(q).to_string())
}

/// Checks the state certificate of `w` and runs `dta` on the pumped trees
/// for every `n ≤ max_n`. Failures are reported, never raised.
pub fn verify_witness<W: Witness + ?Sized>(dta: &Dta, w: &W, max_n: usize) -> VerificationReport {
    let q = w.state();
    let valid_state = q.index() < dta.num_states();
    let q_name = if valid_state {
        dta.state_name(q).to_string()
    } else {
        format!("#{}", q.index())
    };
    let mut certificate = Vec::new();

    let loops = w.loops();
    let many = loops.len() > 1;
    let tag = |base: &str, i: usize| {
        if many {
            format!("{base}[{}]", i + 1)
        } else {
            base.to_string()
        }
    };

    for (i, c) in loops.iter().enumerate() {
        certificate.push(Check {
            name: tag("loop_nonempty", i),
            passed: c.size() >= 1,
            detail: format!("|c| = {}", c.size()),
        });
    }

    let tprime = dta.run(w.tprime()).ok().flatten();
    certificate.push(Check {
        name: "tprime_reaches_q".into(),
        passed: valid_state && tprime == Some(q),
        detail: format!("t' -> {}, q = {q_name}", show_state(dta, tprime)),
    });

    for (i, c) in loops.iter().enumerate() {
        let image = if valid_state {
            dta.run_context(c, q).ok().flatten()
        } else {
            None
        };
        certificate.push(Check {
            name: tag("loop_fixes_q", i),
            passed: valid_state && image == Some(q),
            detail: format!("c({q_name}) -> {}", show_state(dta, image)),
        });
    }

    let outer = if valid_state {
        dta.run_context(w.cprime(), q).ok().flatten()
    } else {
        None
    };
    certificate.push(Check {
        name: "cprime_accepts_q".into(),
        passed: outer.is_some_and(|r| dta.is_final(r)),
        detail: format!("c'({q_name}) -> {}", show_state(dta, outer)),
    });

    let spot_checks = (0..=max_n)
        .map(|n| (n, dta.accepts(&w.pumped(n)).unwrap_or(false)))
        .collect();

    VerificationReport {
        certificate,
        spot_checks,
    }
}
