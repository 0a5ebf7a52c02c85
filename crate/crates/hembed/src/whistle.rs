//! An online divergence whistle. Terms are admitted one at a time; each new
//! term is checked against every earlier term, oldest first, and the
//! whistle blows as soon as some earlier term embeds into the new one.
//! Because embedding modulo the axioms is a well-quasi-order on terms over
//! a finite signature, every infinite sequence eventually blows.

use thiserror::Error;

use crate::embed::EmbedGoal;
use crate::engine::{run_engine, Budget, EngineError, EngineKind, Outcome};
use crate::sig::Signature;
use crate::term::Term;

/// The admitted history plus the configuration used for each check.
#[derive(Clone, Debug)]
pub struct WhistleState {
    pub history: Vec<Term>,
    pub engine: EngineKind,
    pub sig: Signature,
    pub budget_per_check: Budget,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WhistleVerdict {
    /// No earlier term embeds into the candidate; it joined the history.
    Pass,
    /// The history entry at this index embeds into the candidate. The
    /// candidate is not appended.
    Blow(usize),
}

#[derive(Debug, Error)]
pub enum WhistleError {
    /// A single embedding check exhausted its budget. Inconclusive checks
    /// are surfaced rather than treated as non-embeddings, because a missed
    /// blow would defeat the whistle's purpose.
    #[error("embedding check against history entry {index} exhausted its budget")]
    Timeout { index: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl WhistleState {
    pub fn new(sig: Signature, engine: EngineKind, budget_per_check: Budget) -> Self {
        WhistleState {
            history: Vec::new(),
            engine,
            sig,
            budget_per_check,
        }
    }
}

/// Checks the candidate against the history, oldest entry first. Returns
/// the first blowing index, or appends the candidate and passes.
pub fn whistle_add(state: &mut WhistleState, t: Term) -> Result<WhistleVerdict, WhistleError> {
    for (index, earlier) in state.history.iter().enumerate() {
        let goal = EmbedGoal::new(earlier.clone(), t.clone(), &state.sig);
        let verdict = run_engine(state.engine, &goal, &state.budget_per_check)?;
        match verdict.outcome {
            Outcome::True => return Ok(WhistleVerdict::Blow(index)),
            Outcome::Timeout => return Err(WhistleError::Timeout { index }),
            Outcome::False => {}
        }
    }
    state.history.push(t);
    Ok(WhistleVerdict::Pass)
}
