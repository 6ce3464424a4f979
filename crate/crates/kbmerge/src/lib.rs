//! Merging of inconsistent propositional knowledge bases by hypothesizing
//! the acquisition mistakes that produced them, inverting the most
//! plausible ones under upper/lower integrity bounds, and disjoining the
//! merged scenarios.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`logic`] — formulas, parsing, and brute-force model semantics over an
//!   explicit finite universe;
//! * [`transforms`] — the mistake transformations (renaming, wrong
//!   generalization, wrong particularization, value flips) and their
//!   candidate/inverse enumeration;
//! * [`ranking`] — model-counting similarity measures and the plausibility
//!   ranking of transformation hypotheses;
//! * [`engine`] — the merging operators themselves, plus a classical
//!   minimal-model-change baseline;
//! * [`sim`] — a seeded simulator that injects known mistakes into correct
//!   sources and measures how much the operators recover.
//!
//! Everything is a pure function over immutable values; the model space is
//! always an explicit [`logic::Universe`] capped at
//! [`logic::DEFAULT_UNIVERSE_CAP`] variables, because every check
//! enumerates up to `2^|universe|` assignments.

pub mod engine;
pub mod logic;
pub mod ranking;
pub mod sim;
pub mod transforms;

pub use engine::{
    dalal_revise, general_merge, rm_merge, rmel_merge, Disjunct, MergeConfig, MergeError,
    MergeOutcome, MistakeKinds, Provenance, RankScope, Ranking, Substitution,
};
pub use logic::{
    parse_formula, Formula, KnowledgeProfile, LogicError, Model, Universe, Variable,
};
pub use ranking::{DeltaMode, RankScore};
pub use sim::{OperatorChoice, RecoveryReport, Scenario};
pub use transforms::{Transformation, TransformationSet, TransformationTuple};
