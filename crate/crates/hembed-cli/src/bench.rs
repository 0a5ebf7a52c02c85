//! Benchmark runner: seeded non-embedding goals, one row per engine and
//! goal, wall-clock medians over repeated runs, CSV output.

use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hembed::{
    flatten, run_engine, Budget, EmbedGoal, EngineError, EngineKind, Outcome, Signature, Term,
};

use crate::gen::{GenError, GenSpec, TermGen};

/// One benchmark measurement. Sizes are recorded for the original term
/// (`ot`, binary node count) and its flattened form (`ft`).
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub engine: EngineKind,
    pub goal_id: usize,
    pub t1_ot: usize,
    pub t1_ft: usize,
    pub t2_ot: usize,
    pub t2_ft: usize,
    pub outcome: Outcome,
    pub time_ms: u64,
    pub states: u64,
    pub calls: u64,
}

pub const CSV_HEADER: &str = "engine,goal_id,t1_ot,t1_ft,t2_ot,t2_ft,outcome,time_ms,states,calls";

impl BenchRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.engine,
            self.goal_id,
            self.t1_ot,
            self.t1_ft,
            self.t2_ot,
            self.t2_ft,
            self.outcome,
            self.time_ms,
            self.states,
            self.calls
        )
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// How often each (engine, goal) cell is re-run for the median. Outcomes
/// and work counts are deterministic, so repetitions only steady the clock.
pub const DEFAULT_REPS: usize = 10;

/// Allowed attempts at drawing one non-embedding goal.
pub const RESAMPLE_CAP: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Runs every engine against one seeded false goal per requested right-hand
/// depth. Goals are drawn by rejection against the short-circuit engine so
/// that every engine must explore its full space, and each cell is repeated
/// `reps` times with the median wall time reported. A cell that times out
/// is not repeated.
pub fn run_bench(
    sig: &Signature,
    engines: &[EngineKind],
    spec: &GenSpec,
    budget: &Budget,
    reps: usize,
) -> Result<Vec<BenchRow>, BenchError> {
    let gen = TermGen::new(sig, &spec.symbol_mix)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let usig = sig.to_universal();
    let mut rows = Vec::new();
    for (goal_id, &t2_depth) in spec.t2_sizes.iter().enumerate() {
        let (t1, t2) = draw_false_goal(&gen, &mut rng, sig, spec.t1_size, t2_depth, budget)?;
        let t1_ot = t1.size();
        let t2_ot = t2.size();
        let t1_ft = flatten(&t1.sharp(), &usig).size();
        let t2_ft = flatten(&t2.sharp(), &usig).size();
        let goal = EmbedGoal::new(t1.clone(), t2.clone(), sig);
        for &engine in engines {
            let mut times = Vec::with_capacity(reps);
            let mut verdict = None;
            for _ in 0..reps.max(1) {
                let started = Instant::now();
                let v = run_engine(engine, &goal, budget)?;
                times.push(started.elapsed().as_millis() as u64);
                let timed_out = v.outcome == Outcome::Timeout;
                verdict = Some(v);
                if timed_out {
                    break;
                }
            }
            let v = verdict.expect("at least one repetition ran");
            times.sort_unstable();
            rows.push(BenchRow {
                engine,
                goal_id,
                t1_ot,
                t1_ft,
                t2_ot,
                t2_ft,
                outcome: v.outcome,
                time_ms: times[times.len() / 2],
                states: v.stats.states_expanded,
                calls: v.stats.recursive_calls,
            });
        }
    }
    Ok(rows)
}

/// Draws term pairs until the short-circuit engine rejects the embedding.
/// Pairs whose check cannot finish within the budget are discarded too.
fn draw_false_goal(
    gen: &TermGen<'_>,
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    t1_depth: usize,
    t2_depth: usize,
    budget: &Budget,
) -> Result<(Term, Term), GenError> {
    for _ in 0..RESAMPLE_CAP {
        let t1 = gen.exact_depth(rng, t1_depth)?;
        let t2 = gen.exact_depth(rng, t2_depth)?;
        let goal = EmbedGoal::new(t1.clone(), t2.clone(), sig);
        let verdict = run_engine(EngineKind::Sml, &goal, budget)
            .expect("the short-circuit engine raises no class errors");
        if verdict.outcome == Outcome::False {
            return Ok((t1, t2));
        }
    }
    Err(GenError::NoFalseGoal {
        attempts: RESAMPLE_CAP,
    })
}
