//! Homeomorphic embedding modulo equational axioms.
//!
//! Decides whether one term embeds into another when some operators are
//! commutative, associative, or both, so that embedding is judged on
//! equivalence classes rather than on syntax trees. The crate offers
//! several interchangeable deciders:
//!
//! - a class-enumeration oracle that tests plain embedding across the full
//!   equivalence classes of both sides,
//! - a breadth-first search over one-step projections of the right-hand
//!   side, checking reachability of the left-hand side modulo the axioms,
//! - a goal-driven rewriting calculus whose rules are generated from the
//!   signature and pruned by subsumption,
//! - two deterministic recursive engines over canonical flattened terms,
//!   differing only in strict versus short-circuit boolean evaluation.
//!
//! All engines report a verdict plus work statistics under a common budget,
//! and a divergence whistle built on top admits terms one at a time and
//! blows when an earlier term embeds into a new one.

pub mod classes;
pub mod embed;
pub mod engine;
pub mod flat;
pub mod matching;
pub mod meta;
pub mod naive;
pub mod parse;
pub mod rogd;
pub mod sig;
pub mod term;
pub mod theory;
pub mod whistle;

pub use classes::{enumerate_class, enumerate_class_capped, ClassError, DEFAULT_CLASS_CAP};
pub use embed::{embeds_pure, embeds_var, oracle_embeds, EmbedGoal};
pub use engine::{run_engine, Budget, EngineError, EngineKind, Outcome, Stats, Verdict};
pub use flat::{eq_mod_b, flatten, FlatTerm};
pub use meta::{
    embeds_flat, embeds_ml, embeds_sml, to_meta, CallCounter, FlatVariant, MetaTerm,
    EQUATION_CASES,
};
pub use naive::{embeds_naive, one_step_successors};
pub use parse::{parse_signature, parse_term, ParseError};
pub use rogd::embeds_rogd;
pub use sig::{AxiomSet, OperatorDecl, Signature, SignatureBuilder, Sort, Symbol};
pub use term::Term;
pub use theory::{gen_emb_rules, gen_rogd_rules, RewriteRule, RewriteTheory, TheoryKind};
pub use whistle::{whistle_add, WhistleError, WhistleState, WhistleVerdict};
