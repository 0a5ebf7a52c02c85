//! Goal-driven embedding: interprets the generated goal rewrite theory by
//! depth-first proof search. A state is a list of outstanding ground goals;
//! the leftmost goal is rewritten with each theory rule in order, matching
//! modulo the axioms, and the search backtracks across the resulting
//! alternatives.

use std::ops::ControlFlow;

use crate::engine::{Budget, Outcome, Stats, Ticker, Verdict};
use crate::embed::EmbedGoal;
use crate::flat::{flatten, FlatTerm};
use crate::matching::{apply_subst, for_each_match};
use crate::sig::Symbol;
use crate::theory::{gen_rogd_rules, RewriteTheory, AND_OP, GOAL_OP, TRUE_OP};

pub fn embeds_rogd(goal: &EmbedGoal, budget: &Budget) -> Verdict {
    let th = gen_rogd_rules(&goal.sig);
    let lhs = flatten(&goal.lhs.sharp(), &th.sig);
    let rhs = flatten(&goal.rhs.sharp(), &th.sig);
    let root = FlatTerm::App(Symbol::new(GOAL_OP), vec![lhs, rhs]);

    let mut search = Search {
        th: &th,
        ticker: Ticker::new(budget),
        stats: Stats::default(),
        timed_out: false,
    };
    let proved = search.solve(&[root]);
    let outcome = if search.timed_out {
        Outcome::Timeout
    } else if proved {
        Outcome::True
    } else {
        Outcome::False
    };
    let mut stats = search.stats;
    stats.wall_time = search.ticker.elapsed();
    Verdict { outcome, stats }
}

struct Search<'a> {
    th: &'a RewriteTheory,
    ticker: Ticker,
    stats: Stats,
    timed_out: bool,
}

impl Search<'_> {
    fn solve(&mut self, goals: &[FlatTerm]) -> bool {
        let (goal, rest) = match goals.split_first() {
            Some(split) => split,
            None => return true,
        };
        self.stats.states_expanded += 1;
        self.stats.peak_frontier = self.stats.peak_frontier.max(goals.len() as u64);
        if self.ticker.exhausted(self.stats.states_expanded) {
            self.timed_out = true;
            return false;
        }
        for rule in &self.th.rules {
            let mut alternatives: Vec<FlatTerm> = Vec::new();
            let _ = for_each_match(&rule.lhs, goal, &self.th.sig, &mut |binds| {
                let instance = apply_subst(&rule.rhs, binds, &self.th.sig);
                if !alternatives.contains(&instance) {
                    alternatives.push(instance);
                }
                ControlFlow::Continue(())
            });
            for alt in alternatives {
                let mut next = subgoals_of(&alt);
                next.extend(rest.iter().cloned());
                if self.solve(&next) {
                    return true;
                }
                if self.timed_out {
                    return false;
                }
            }
        }
        false
    }
}

/// Splits an instantiated rule right-hand side into its goal list: `true`
/// contributes nothing, a conjunction contributes each conjunct.
fn subgoals_of(t: &FlatTerm) -> Vec<FlatTerm> {
    match t {
        FlatTerm::App(op, _) if op.as_str() == TRUE_OP => Vec::new(),
        FlatTerm::App(op, args) if op.as_str() == AND_OP => args.clone(),
        other => vec![other.clone()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_signature, parse_term};
    use crate::sig::Signature;

    fn nat09() -> Signature {
        parse_signature(
            "fmod NAT09 is
               sort Nat .
               op 0 : -> Nat . op 1 : -> Nat . op 2 : -> Nat .
               op 3 : -> Nat . op 4 : -> Nat .
               op suc : Nat -> Nat .
               op _+_ : Nat Nat -> Nat [assoc comm] .
             endfm",
        )
        .unwrap()
    }

    fn run(l: &str, r: &str) -> Outcome {
        let sig = nat09();
        let goal = EmbedGoal::new(
            parse_term(l, &sig).unwrap(),
            parse_term(r, &sig).unwrap(),
            &sig,
        );
        embeds_rogd(&goal, &Budget::UNBOUNDED).outcome
    }

    #[test]
    fn derives_the_worked_example() {
        assert_eq!(run("+(1,+(2,3))", "+(+(4,2),+(3,1))"), Outcome::True);
    }

    #[test]
    fn base_coupling_proves_equal_constants() {
        assert_eq!(run("0", "0"), Outcome::True);
    }

    #[test]
    fn rejects_a_strictly_larger_left_side() {
        assert_eq!(run("suc(0)", "0"), Outcome::False);
    }

    #[test]
    fn couples_blocks_against_a_single_alien() {
        assert_eq!(run("+(1,+(2,3))", "+(1,suc(+(2,3)))"), Outcome::True);
    }

    #[test]
    fn variables_collapse_before_the_search() {
        let sig = nat09();
        let goal = EmbedGoal::new(
            parse_term("+(1,X:Nat)", &sig).unwrap(),
            parse_term("+(Y:Nat,+(1,3))", &sig).unwrap(),
            &sig,
        );
        assert_eq!(embeds_rogd(&goal, &Budget::UNBOUNDED).outcome, Outcome::True);
    }

    #[test]
    fn budget_exhaustion_reports_timeout() {
        let sig = nat09();
        let goal = EmbedGoal::new(
            parse_term("+(4,4)", &sig).unwrap(),
            parse_term("+(1,+(2,+(3,+(1,+(2,0)))))", &sig).unwrap(),
            &sig,
        );
        let budget = Budget {
            max_millis: None,
            max_states: Some(3),
        };
        let v = embeds_rogd(&goal, &budget);
        assert_eq!(v.outcome, Outcome::Timeout);
    }
}
