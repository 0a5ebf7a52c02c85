//! Reachability-based embedding: a term embeds into another exactly when the
//! larger one rewrites to the smaller one under the projection rules, taken
//! modulo the axioms. The engine runs a breadth-first search over canonical
//! flattened states.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::engine::{Budget, Outcome, Stats, Ticker, Verdict};
use crate::embed::EmbedGoal;
use crate::flat::{flatten, mk_node, FlatTerm};
use crate::sig::Signature;
use crate::theory::{RewriteTheory, TheoryKind};

/// All canonical results of one projection step modulo the axioms, at the
/// root or below it.
///
/// At an AC root, a binary projection pattern matches every grouping of the
/// flattened argument multiset, so one step keeps any nonempty proper
/// sub-multiset. At an A root the same pattern ranges over contiguous
/// groupings, so one step deletes any nonempty proper contiguous segment.
/// C and free roots project single arguments. Below the root the step
/// recurses into one argument and the result is re-canonicalized, which
/// splices arguments that became rooted by the surrounding operator.
pub fn one_step_successors(ft: &FlatTerm, th: &RewriteTheory) -> BTreeSet<FlatTerm> {
    debug_assert_eq!(th.kind, TheoryKind::EmbU);
    successors(ft, &th.sig)
}

fn successors(t: &FlatTerm, sig: &Signature) -> BTreeSet<FlatTerm> {
    let mut out = BTreeSet::new();
    let (op, args) = match t {
        FlatTerm::App(op, args) if !args.is_empty() => (op, args),
        _ => return out,
    };
    let ax = sig.axioms(op);
    let n = args.len();
    if ax.is_ac() && n >= 2 {
        for mask in 1..(1u64 << n) - 1 {
            let kept: Vec<FlatTerm> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| args[i].clone())
                .collect();
            out.insert(mk_node(op, kept, ax));
        }
    } else if ax.assoc && n >= 2 {
        for from in 0..n {
            for to in from + 1..=n {
                if (from, to) == (0, n) {
                    continue;
                }
                let kept: Vec<FlatTerm> = args[..from]
                    .iter()
                    .chain(&args[to..])
                    .cloned()
                    .collect();
                out.insert(mk_node(op, kept, ax));
            }
        }
    } else {
        for a in args {
            out.insert(a.clone());
        }
    }
    for (i, a) in args.iter().enumerate() {
        for s in successors(a, sig) {
            let mut rebuilt = args.clone();
            rebuilt[i] = s;
            out.insert(mk_node(op, rebuilt, ax));
        }
    }
    out
}

/// Decides embedding by searching the projection rewrite space breadth
/// first, starting from the sharpened right-hand side. Every step strictly
/// shrinks the term, so the search terminates; states smaller than the
/// target are pruned.
pub fn embeds_naive(goal: &EmbedGoal, budget: &Budget) -> Verdict {
    let mut ticker = Ticker::new(budget);
    let th = crate::theory::gen_emb_rules(&goal.sig);
    let target = flatten(&goal.lhs.sharp(), &th.sig);
    let start = flatten(&goal.rhs.sharp(), &th.sig);
    let target_size = target.size();

    let mut stats = Stats::default();
    let mut outcome = Outcome::False;
    if start == target {
        outcome = Outcome::True;
    } else if start.size() > target_size {
        let mut visited: HashSet<FlatTerm> = HashSet::new();
        let mut queue: VecDeque<FlatTerm> = VecDeque::new();
        visited.insert(start.clone());
        queue.push_back(start);
        stats.peak_frontier = 1;
        'bfs: while let Some(state) = queue.pop_front() {
            stats.states_expanded += 1;
            if ticker.exhausted(stats.states_expanded) {
                outcome = Outcome::Timeout;
                break;
            }
            for next in one_step_successors(&state, &th) {
                if next == target {
                    outcome = Outcome::True;
                    break 'bfs;
                }
                if next.size() <= target_size || !visited.insert(next.clone()) {
                    continue;
                }
                queue.push_back(next);
            }
            stats.peak_frontier = stats.peak_frontier.max(queue.len() as u64);
        }
    }
    stats.wall_time = ticker.elapsed();
    Verdict { outcome, stats }
}
