//! Complete conformance test suites via the W-method.
//!
//! The crate computes state covers and characterization sets, assembles
//! W-method suites, runs them against implementation models and checks the
//! result against exact equivalence oracles, for four families of machines:
//!
//! * [`fsm`]: DFAs, Moore machines and Mealy machines,
//! * [`weighted`]: weighted automata over the rationals,
//! * [`nominal`]: deterministic register automata over equality atoms.
//!
//! [`faultsim`] samples mutants inside each family's fault domain and checks
//! that the generated suites kill every inequivalent one.

pub mod cli;
pub mod exec;
pub mod faultsim;
pub mod formats;
pub mod fsm;
pub mod nominal;
pub mod weighted;
pub mod words;

pub use exec::Exec;
pub use words::{Alphabet, Equivalence, Suite, Verdict, Word, WordError};
