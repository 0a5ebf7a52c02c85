//! Common engine interface: outcomes, counters, budgets, and the dispatcher
//! that runs any of the five embedding deciders on a goal.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::classes::{enumerate_class_capped, ClassError, DEFAULT_CLASS_CAP};
use crate::embed::{embeds_pure, EmbedGoal};
use crate::meta::{embeds_flat, FlatVariant};
use crate::naive::embeds_naive;
use crate::rogd::embeds_rogd;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EngineKind {
    Naive,
    Rogd,
    Ml,
    Sml,
    Oracle,
}

impl EngineKind {
    pub const ALL: [EngineKind; 5] = [
        EngineKind::Naive,
        EngineKind::Rogd,
        EngineKind::Ml,
        EngineKind::Sml,
        EngineKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Rogd => "rogd",
            EngineKind::Ml => "ml",
            EngineKind::Sml => "sml",
            EngineKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(EngineKind::Naive),
            "rogd" => Ok(EngineKind::Rogd),
            "ml" => Ok(EngineKind::Ml),
            "sml" => Ok(EngineKind::Sml),
            "oracle" => Ok(EngineKind::Oracle),
            other => Err(format!("unknown engine '{other}'")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    True,
    False,
    Timeout,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::True => "true",
            Outcome::False => "false",
            Outcome::Timeout => "timeout",
        })
    }
}

/// Counters reported with every verdict. Search engines fill
/// `states_expanded` and `peak_frontier`; the flattened engines fill
/// `recursive_calls`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Stats {
    pub states_expanded: u64,
    pub recursive_calls: u64,
    pub wall_time: Duration,
    pub peak_frontier: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_true(&self) -> bool {
        self.outcome == Outcome::True
    }
}

/// Resource bounds for one engine call. `None` means unbounded; Timeout is
/// only possible when at least one bound is set.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_millis: Option<u64>,
    pub max_states: Option<u64>,
}

impl Budget {
    pub const UNBOUNDED: Budget = Budget {
        max_millis: None,
        max_states: None,
    };

    pub fn with_millis(ms: u64) -> Budget {
        Budget {
            max_millis: Some(ms),
            max_states: None,
        }
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum EngineError {
    #[error("equivalence class larger than the cap of {cap} terms")]
    ClassCap { cap: usize },
}

impl From<ClassError> for EngineError {
    fn from(e: ClassError) -> Self {
        match e {
            ClassError::CapExceeded { cap } => EngineError::ClassCap { cap },
        }
    }
}

/// Budget supervisor shared by the engines: tracks the deadline and the
/// state bound, polling the clock only every few hundred probes.
pub(crate) struct Ticker {
    start: Instant,
    deadline: Option<Instant>,
    max_states: Option<u64>,
    probes: u32,
    expired: bool,
}

const PROBE_INTERVAL: u32 = 256;

impl Ticker {
    pub(crate) fn new(budget: &Budget) -> Ticker {
        let start = Instant::now();
        Ticker {
            start,
            deadline: budget.max_millis.map(|ms| start + Duration::from_millis(ms)),
            max_states: budget.max_states,
            probes: 0,
            expired: false,
        }
    }

    /// True once the budget is exhausted; `states` is the caller's current
    /// expansion count.
    pub(crate) fn exhausted(&mut self, states: u64) -> bool {
        if self.expired {
            return true;
        }
        if let Some(max) = self.max_states {
            if states > max {
                self.expired = true;
                return true;
            }
        }
        if let Some(deadline) = self.deadline {
            self.probes += 1;
            if self.probes >= PROBE_INTERVAL {
                self.probes = 0;
                if Instant::now() >= deadline {
                    self.expired = true;
                    return true;
                }
            }
        }
        false
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Runs the selected engine on the goal. All engines decide the same
/// relation; they differ in strategy and cost. Only the oracle can fail
/// outright (its class enumeration is capped); every other result is a
/// verdict, with Timeout reserved for exhausted budgets.
pub fn run_engine(
    kind: EngineKind,
    goal: &EmbedGoal,
    budget: &Budget,
) -> Result<Verdict, EngineError> {
    match kind {
        EngineKind::Naive => Ok(embeds_naive(goal, budget)),
        EngineKind::Rogd => Ok(embeds_rogd(goal, budget)),
        EngineKind::Ml => Ok(embeds_flat(goal, FlatVariant::Ml, budget)),
        EngineKind::Sml => Ok(embeds_flat(goal, FlatVariant::Sml, budget)),
        EngineKind::Oracle => run_oracle(goal, budget),
    }
}

fn run_oracle(goal: &EmbedGoal, budget: &Budget) -> Result<Verdict, EngineError> {
    let mut ticker = Ticker::new(budget);
    let usig = goal.sig.to_universal();
    let lhs_class = enumerate_class_capped(&goal.lhs.sharp(), &usig, DEFAULT_CLASS_CAP)?;
    let rhs_class = enumerate_class_capped(&goal.rhs.sharp(), &usig, DEFAULT_CLASS_CAP)?;
    let mut pairs = 0u64;
    let mut outcome = Outcome::False;
    'search: for u in &lhs_class {
        for v in &rhs_class {
            pairs += 1;
            if ticker.exhausted(pairs) {
                outcome = Outcome::Timeout;
                break 'search;
            }
            if embeds_pure(u, v) {
                outcome = Outcome::True;
                break 'search;
            }
        }
    }
    Ok(Verdict {
        outcome,
        stats: Stats {
            states_expanded: pairs,
            recursive_calls: 0,
            wall_time: ticker.elapsed(),
            peak_frontier: (lhs_class.len() * rhs_class.len()) as u64,
        },
    })
}
