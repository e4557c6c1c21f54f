//! Ranked trees, deterministic bottom-up tree automata, and constructive
//! pumping for regular tree languages.
//!
//! - [`terms`]: ranked alphabets, trees, one-hole contexts, Gorn addresses and
//!   the concrete `f(g!(a),a)` syntax.
//! - [`automata`]: deterministic bottom-up automata with partial transitions.
//! - [`decompose`]: cutting a marked tree into `c'·c_1⋯c_k·t'` along interesting nodes.
//! - [`pump`]: pump witnesses certified by automaton states.
//! - [`game`]: exhaustive adjudication of the pumping game against an adversary.

pub mod automata;
pub mod decompose;
pub mod game;
pub mod pump;
pub mod terms;

pub use automata::{parse_dta, Dta, StateAnnotation, StateId};
pub use decompose::{decompose_k, g_sigma, Decomposition};
pub use game::{builtin_oracle, play, GameConstraint, GameReport, LanguageOracle, Outcome};
pub use pump::{
    ogden_decompose, ogden_decompose_multi, pump, pump_multi, standard_decompose, verify_witness, MultiPumpWitness,
    PumpWitness, VerificationReport,
};
pub use terms::{parse_context, parse_tree, render, Address, Context, Marking, RankedAlphabet, Tree};
