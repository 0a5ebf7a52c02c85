//! The deterministic flattened engines. Both evaluate the same equation
//! system over canonical flattened terms; the strict variant always
//! evaluates both operands of a conjunction or disjunction, the
//! short-circuit variant stops as soon as the first operand settles the
//! result. That evaluation policy is the entire difference between the two.
//!
//! The equation system follows the recursive structure of embedding:
//! diving via `any`, free coupling via `all`, commutative coupling by the
//! two binary alignments, associative coupling via `all_A`, and
//! associative-commutative coupling via `all_AC`/`all_AC_aux` with
//! first-occurrence `remove`. The list equations carry one disjunct beyond
//! plain element-to-element assignment: a block of arguments (a contiguous
//! run for A, a sub-multiset for AC) may be hosted together by a single
//! argument of the right-hand list, since an alien can collapse to a term
//! rooted by the surrounding operator and splice. Without that disjunct the
//! relation would miss embeddings such as +(1,+(2,3)) into
//! +(1,suc(+(2,3))), which class enumeration confirms. Candidate blocks are
//! filtered by the binary-tree size of the host: sizes are invariant across
//! an equivalence class and embedding never maps a term into a smaller one,
//! so oversized blocks are skipped by both variants alike, and sub-multisets
//! are enumerated up to multiplicity so repeated arguments do not multiply
//! identical alternatives.

use std::time::Instant;

use crate::engine::{Budget, Outcome, Stats, Ticker, Verdict};
use crate::embed::EmbedGoal;
use crate::flat::{flatten, mk_node, FlatTerm};
use crate::sig::{Signature, Symbol};
use crate::term::Term;

/// A ground, canonical, flattened term paired with the universal signature
/// that supplies each operator's axiom tag.
#[derive(Clone, Debug)]
pub struct MetaTerm {
    pub term: FlatTerm,
    pub sig: Signature,
}

pub fn to_meta(t: &Term, sig: &Signature) -> MetaTerm {
    let usig = sig.to_universal();
    MetaTerm {
        term: flatten(&t.sharp(), &usig),
        sig: usig,
    }
}

/// Work counters for one evaluation: calls to the embedding function itself
/// and calls to the list helpers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CallCounter {
    pub embed_calls: u64,
    pub helper_calls: u64,
}

impl CallCounter {
    pub fn total(&self) -> u64 {
        self.embed_calls + self.helper_calls
    }

    /// Componentwise comparison, used to check that short-circuiting never
    /// costs more than strict evaluation.
    pub fn le(&self, other: &CallCounter) -> bool {
        self.embed_calls <= other.embed_calls && self.helper_calls <= other.helper_calls
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlatVariant {
    Ml,
    Sml,
}

/// The named equation cases of the evaluator, in dispatch order. The
/// `remove` helper is a single case: its empty and non-empty clauses
/// implement one first-occurrence deletion.
pub const EQUATION_CASES: [&str; 21] = [
    "embed: sharp embeds sharp",
    "embed: application never embeds into sharp",
    "embed: distinct roots dive only",
    "embed: free coupling",
    "embed: commutative coupling",
    "embed: associative coupling",
    "embed: associative-commutative coupling",
    "any: empty list",
    "any: head or rest",
    "all: both empty",
    "all: left empty",
    "all: right empty",
    "all: positionwise head and rest",
    "all_A: left exhausted",
    "all_A: right exhausted",
    "all_A: host, skip, or host a run",
    "all_AC: left exhausted",
    "all_AC: delegate to candidate walk",
    "all_AC_aux: candidates exhausted",
    "all_AC_aux: host, host a block, or advance",
    "remove: first occurrence",
];

pub fn embeds_ml(m1: &MetaTerm, m2: &MetaTerm) -> (bool, CallCounter) {
    let (verdict, counter, _) = evaluate(m1, m2, FlatVariant::Ml, None);
    (verdict, counter)
}

pub fn embeds_sml(m1: &MetaTerm, m2: &MetaTerm) -> (bool, CallCounter) {
    let (verdict, counter, _) = evaluate(m1, m2, FlatVariant::Sml, None);
    (verdict, counter)
}

/// Evaluation with the per-case hit table, used by the structural-parity
/// and coverage tests.
pub fn embeds_flat_traced(
    m1: &MetaTerm,
    m2: &MetaTerm,
    variant: FlatVariant,
) -> (bool, CallCounter, [u64; EQUATION_CASES.len()]) {
    evaluate(m1, m2, variant, None)
}

/// Runs one flattened engine under the common interface. The evaluation is
/// total, so only the wall-clock bound can cut it short.
pub fn embeds_flat(goal: &EmbedGoal, variant: FlatVariant, budget: &Budget) -> Verdict {
    let ticker = Ticker::new(budget);
    let m1 = to_meta(&goal.lhs, &goal.sig);
    let m2 = to_meta(&goal.rhs, &goal.sig);
    let deadline = budget
        .max_millis
        .map(|ms| Instant::now() + std::time::Duration::from_millis(ms));
    let (verdict, counter, _) = evaluate(&m1, &m2, variant, deadline);
    let expired = deadline.is_some_and(|d| Instant::now() >= d);
    let outcome = if expired {
        Outcome::Timeout
    } else if verdict {
        Outcome::True
    } else {
        Outcome::False
    };
    Verdict {
        outcome,
        stats: Stats {
            states_expanded: 0,
            recursive_calls: counter.total(),
            wall_time: ticker.elapsed(),
            peak_frontier: 0,
        },
    }
}

fn evaluate(
    m1: &MetaTerm,
    m2: &MetaTerm,
    variant: FlatVariant,
    deadline: Option<Instant>,
) -> (bool, CallCounter, [u64; EQUATION_CASES.len()]) {
    let mut eval = Eval {
        sig: &m1.sig,
        short: variant == FlatVariant::Sml,
        counter: CallCounter::default(),
        hits: [0; EQUATION_CASES.len()],
        deadline,
        probes: 0,
        expired: false,
    };
    let verdict = eval.embed(&m1.term, &m2.term);
    (verdict, eval.counter, eval.hits)
}

struct Eval<'a> {
    sig: &'a Signature,
    short: bool,
    counter: CallCounter,
    hits: [u64; EQUATION_CASES.len()],
    deadline: Option<Instant>,
    probes: u32,
    expired: bool,
}

impl Eval<'_> {
    fn hit(&mut self, case: usize) {
        self.hits[case] += 1;
    }

    fn tick(&mut self) {
        if let Some(deadline) = self.deadline {
            self.probes += 1;
            if self.probes >= 1024 {
                self.probes = 0;
                if Instant::now() >= deadline {
                    self.expired = true;
                }
            }
        }
    }

    fn or2<F, G>(&mut self, f: F, g: G) -> bool
    where
        F: FnOnce(&mut Self) -> bool,
        G: FnOnce(&mut Self) -> bool,
    {
        let a = f(self);
        if self.short && a {
            return true;
        }
        let b = g(self);
        a || b
    }

    fn and2<F, G>(&mut self, f: F, g: G) -> bool
    where
        F: FnOnce(&mut Self) -> bool,
        G: FnOnce(&mut Self) -> bool,
    {
        let a = f(self);
        if self.short && !a {
            return false;
        }
        let b = g(self);
        a && b
    }

    fn embed(&mut self, s: &FlatTerm, t: &FlatTerm) -> bool {
        self.counter.embed_calls += 1;
        self.tick();
        if self.expired {
            return false;
        }
        match (s.is_sharp(), t.is_sharp()) {
            (true, true) => {
                self.hit(0);
                return true;
            }
            (false, true) => {
                self.hit(1);
                return false;
            }
            _ => {}
        }
        let (f, ts) = match t {
            FlatTerm::App(f, ts) => (f, ts.as_slice()),
            FlatTerm::Var(_) => unreachable!("meta-terms are ground"),
        };
        if s.root() != Some(f) {
            self.hit(2);
            return self.any(s, ts);
        }
        let ss = match s {
            FlatTerm::App(_, ss) => ss.as_slice(),
            FlatTerm::Var(_) => unreachable!("meta-terms are ground"),
        };
        let ax = self.sig.axioms(f);
        if ax.is_ac() {
            self.hit(6);
            self.or2(|e| e.any(s, ts), |e| e.all_ac(f, ss, ts))
        } else if ax.assoc {
            self.hit(5);
            self.or2(|e| e.any(s, ts), |e| e.all_a(f, ss, ts))
        } else if ax.comm {
            self.hit(4);
            debug_assert!(ss.len() == 2 && ts.len() == 2);
            self.or2(
                |e| e.any(s, ts),
                |e| {
                    e.or2(
                        |e| e.and2(|e| e.embed(&ss[0], &ts[0]), |e| e.embed(&ss[1], &ts[1])),
                        |e| e.and2(|e| e.embed(&ss[0], &ts[1]), |e| e.embed(&ss[1], &ts[0])),
                    )
                },
            )
        } else {
            self.hit(3);
            self.or2(|e| e.any(s, ts), |e| e.all(ss, ts))
        }
    }

    fn any(&mut self, u: &FlatTerm, l: &[FlatTerm]) -> bool {
        self.counter.helper_calls += 1;
        match l.split_first() {
            None => {
                self.hit(7);
                false
            }
            Some((v, rest)) => {
                self.hit(8);
                self.or2(|e| e.embed(u, v), |e| e.any(u, rest))
            }
        }
    }

    fn all(&mut self, l1: &[FlatTerm], l2: &[FlatTerm]) -> bool {
        self.counter.helper_calls += 1;
        match (l1.split_first(), l2.split_first()) {
            (None, None) => {
                self.hit(9);
                true
            }
            (None, Some(_)) => {
                self.hit(10);
                false
            }
            (Some(_), None) => {
                self.hit(11);
                false
            }
            (Some((u, r1)), Some((v, r2))) => {
                self.hit(12);
                self.and2(|e| e.embed(u, v), |e| e.all(r1, r2))
            }
        }
    }

    fn all_a(&mut self, op: &Symbol, l1: &[FlatTerm], l2: &[FlatTerm]) -> bool {
        self.counter.helper_calls += 1;
        if l1.is_empty() {
            self.hit(13);
            return true;
        }
        if l2.is_empty() {
            self.hit(14);
            return false;
        }
        self.hit(15);
        let (u, rest1) = (&l1[0], &l1[1..]);
        let (v, rest2) = (&l2[0], &l2[1..]);
        let mut result = self.and2(|e| e.embed(u, v), |e| e.all_a(op, rest1, rest2));
        if !(self.short && result) {
            let skipped = self.all_a(op, l1, rest2);
            result = result || skipped;
        }
        let ax = self.sig.axioms(op);
        let cap = self.ot_size(v);
        for run in 2..=l1.len() {
            if self.short && result {
                break;
            }
            let cost: u64 =
                l1[..run].iter().map(|w| self.ot_size(w)).sum::<u64>() + (run as u64 - 1);
            if cost > cap {
                break;
            }
            let block = mk_node(op, l1[..run].to_vec(), ax);
            let hosted = self.and2(|e| e.embed(&block, v), |e| e.all_a(op, &l1[run..], rest2));
            result = result || hosted;
        }
        result
    }

    fn all_ac(&mut self, op: &Symbol, l1: &[FlatTerm], l2: &[FlatTerm]) -> bool {
        self.counter.helper_calls += 1;
        if l1.is_empty() {
            self.hit(16);
            return true;
        }
        self.hit(17);
        self.all_ac_aux(op, l1, l2, l2)
    }

    fn all_ac_aux(
        &mut self,
        op: &Symbol,
        l1: &[FlatTerm],
        l2: &[FlatTerm],
        l3: &[FlatTerm],
    ) -> bool {
        self.counter.helper_calls += 1;
        let (v, candidates) = match l2.split_first() {
            None => {
                self.hit(18);
                return false;
            }
            Some(split) => split,
        };
        self.hit(19);
        let (u, rest1) = (&l1[0], &l1[1..]);
        let mut result = self.and2(
            |e| e.embed(u, v),
            |e| {
                let live = e.remove(v, l3);
                e.all_ac(op, rest1, &live)
            },
        );
        let ax = self.sig.axioms(op);
        let costs: Vec<u64> = rest1.iter().map(|w| self.ot_size(w)).collect();
        let mut alternatives = Vec::new();
        collect_groups(
            rest1,
            &costs,
            0,
            self.ot_size(u),
            self.ot_size(v),
            &mut Vec::new(),
            &mut Vec::new(),
            &mut alternatives,
        );
        for (group, remaining) in alternatives {
            if self.short && result {
                break;
            }
            let mut args = vec![u.clone()];
            args.extend(group);
            let block = mk_node(op, args, ax);
            let hosted = self.and2(
                |e| e.embed(&block, v),
                |e| {
                    let live = e.remove(v, l3);
                    e.all_ac(op, &remaining, &live)
                },
            );
            result = result || hosted;
        }
        if !(self.short && result) {
            let advanced = self.all_ac_aux(op, l1, candidates, l3);
            result = result || advanced;
        }
        result
    }

    fn remove(&mut self, v: &FlatTerm, l: &[FlatTerm]) -> Vec<FlatTerm> {
        self.counter.helper_calls += 1;
        self.hit(20);
        let mut out = Vec::with_capacity(l.len().saturating_sub(1));
        let mut removed = false;
        for w in l {
            if !removed && w == v {
                removed = true;
            } else {
                out.push(w.clone());
            }
        }
        out
    }

    /// Binary-tree node count of a flattened term. A poly-variadic node of
    /// an associative operator with n arguments stands for n-1 binary
    /// applications; every other node counts as itself.
    fn ot_size(&self, t: &FlatTerm) -> u64 {
        match t {
            FlatTerm::Var(_) => 1,
            FlatTerm::App(f, args) => {
                let inner: u64 = args.iter().map(|a| self.ot_size(a)).sum();
                if self.sig.axioms(f).assoc && args.len() >= 2 {
                    inner + args.len() as u64 - 1
                } else {
                    inner + 1
                }
            }
        }
    }
}

/// Enumerates the distinct non-empty sub-multisets of a canonically sorted
/// argument slice, pairing each with its leftover arguments. `base` is the
/// size already committed to the block; a sub-multiset is emitted only if
/// the finished block still fits inside `cap`. Equal arguments are adjacent
/// after canonicalization, so choosing a copy count per run visits each
/// distinct sub-multiset exactly once.
#[allow(clippy::too_many_arguments)]
fn collect_groups(
    rest: &[FlatTerm],
    costs: &[u64],
    idx: usize,
    base: u64,
    cap: u64,
    group: &mut Vec<FlatTerm>,
    leftover: &mut Vec<FlatTerm>,
    out: &mut Vec<(Vec<FlatTerm>, Vec<FlatTerm>)>,
) {
    if idx == rest.len() {
        if !group.is_empty() {
            out.push((group.clone(), leftover.clone()));
        }
        return;
    }
    let mut end = idx + 1;
    while end < rest.len() && rest[end] == rest[idx] {
        end += 1;
    }
    let count = end - idx;
    let unit = costs[idx] + 1;
    for picked in 0..=count {
        let cost = base + picked as u64 * unit;
        if cost > cap {
            break;
        }
        let group_mark = group.len();
        let leftover_mark = leftover.len();
        for _ in 0..picked {
            group.push(rest[idx].clone());
        }
        for _ in 0..count - picked {
            leftover.push(rest[idx].clone());
        }
        collect_groups(rest, costs, end, cost, cap, group, leftover, out);
        group.truncate(group_mark);
        leftover.truncate(leftover_mark);
    }
}

/// Reference variant of `all_A` that commits to the first host of the head
/// element instead of disjoining over all hosting positions. Equivalent to
/// the full recursion because a later host only restricts what remains for
/// the rest of the list. Exists to validate the full version.
pub fn all_a_greedy(op: &Symbol, l1: &[FlatTerm], l2: &[FlatTerm], sig: &Signature) -> bool {
    if l1.is_empty() {
        return true;
    }
    if l2.is_empty() {
        return false;
    }
    let (u, rest1) = (&l1[0], &l1[1..]);
    let (v, rest2) = (&l2[0], &l2[1..]);
    if raw_embed(u, v, sig) {
        if all_a_greedy(op, rest1, rest2, sig) {
            return true;
        }
    } else if all_a_greedy(op, l1, rest2, sig) {
        return true;
    }
    let ax = sig.axioms(op);
    for run in 2..=l1.len() {
        let block = mk_node(op, l1[..run].to_vec(), ax);
        if raw_embed(&block, v, sig) && all_a_greedy(op, &l1[run..], rest2, sig) {
            return true;
        }
    }
    false
}

/// Runs the associative list test on raw argument lists, for property
/// checks that drive `all_A` directly.
pub fn all_a_full(op: &Symbol, l1: &[FlatTerm], l2: &[FlatTerm], sig: &Signature) -> bool {
    fresh_eval(sig).all_a(op, l1, l2)
}

/// Runs the associative-commutative list test on raw argument lists.
pub fn all_ac_full(op: &Symbol, l1: &[FlatTerm], l2: &[FlatTerm], sig: &Signature) -> bool {
    fresh_eval(sig).all_ac(op, l1, l2)
}

fn fresh_eval(sig: &Signature) -> Eval<'_> {
    Eval {
        sig,
        short: true,
        counter: CallCounter::default(),
        hits: [0; EQUATION_CASES.len()],
        deadline: None,
        probes: 0,
        expired: false,
    }
}

fn raw_embed(s: &FlatTerm, t: &FlatTerm, sig: &Signature) -> bool {
    fresh_eval(sig).embed(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_signature, parse_term};

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

    fn meta(s: &str, sig: &Signature) -> MetaTerm {
        to_meta(&parse_term(s, sig).unwrap(), sig)
    }

    #[test]
    fn meta_representation_is_canonical() {
        let sig = nat09();
        let m = meta("+(+(4,2),+(3,1))", &sig);
        assert_eq!(m.term.to_string(), "+(1,2,3,4)");
        assert_eq!(meta("X:Nat", &sig).term.to_string(), "#");
    }

    #[test]
    fn worked_example_is_true_under_both_variants() {
        let sig = nat09();
        let m1 = meta("+(1,+(2,3))", &sig);
        let m2 = meta("+(+(4,2),+(3,1))", &sig);
        assert!(embeds_ml(&m1, &m2).0);
        assert!(embeds_sml(&m1, &m2).0);
    }

    #[test]
    fn short_circuit_never_costs_more() {
        let sig = nat09();
        let pairs = [
            ("+(1,+(2,3))", "+(+(4,2),+(3,1))"),
            ("+(4,4)", "+(1,+(2,3))"),
            ("+(2,1)", "+(1,+(0,+(3,2)))"),
            ("suc(0)", "0"),
            ("+(1,X:Nat)", "+(Y:Nat,+(1,3))"),
        ];
        for (l, r) in pairs {
            let m1 = meta(l, &sig);
            let m2 = meta(r, &sig);
            let (v_ml, c_ml) = embeds_ml(&m1, &m2);
            let (v_sml, c_sml) = embeds_sml(&m1, &m2);
            assert_eq!(v_ml, v_sml, "{l} vs {r}");
            assert!(c_sml.le(&c_ml), "{l} vs {r}: {c_sml:?} vs {c_ml:?}");
        }
    }

    #[test]
    fn short_circuit_is_strictly_cheaper_on_an_ac_goal() {
        let sig = nat09();
        let m1 = meta("+(1,+(2,3))", &sig);
        let m2 = meta("+(+(4,2),+(3,1))", &sig);
        let (_, c_ml) = embeds_ml(&m1, &m2);
        let (_, c_sml) = embeds_sml(&m1, &m2);
        assert!(c_sml.total() < c_ml.total());
    }

    #[test]
    fn sharp_embeds_sharp_in_one_call() {
        let sig = nat09();
        let m = meta("X:Nat", &sig);
        let (v, c) = embeds_sml(&m, &m);
        assert!(v);
        assert_eq!(c.embed_calls, 1);
        assert_eq!(c.helper_calls, 0);
    }

    #[test]
    fn blocks_host_into_a_single_alien() {
        let sig = nat09();
        let m1 = meta("+(1,+(2,3))", &sig);
        let m2 = meta("+(1,suc(+(2,3)))", &sig);
        assert!(embeds_ml(&m1, &m2).0);
        assert!(embeds_sml(&m1, &m2).0);
    }

    #[test]
    fn constants_couple_through_the_free_equation() {
        let sig = nat09();
        let (v, _, hits) = embeds_flat_traced(
            &meta("0", &sig),
            &meta("0", &sig),
            FlatVariant::Ml,
        );
        assert!(v);
        assert_eq!(hits[3], 1, "free coupling fired");
        assert_eq!(hits[9], 1, "all(nil,nil) fired");
    }

    #[test]
    fn case_table_has_twenty_one_entries() {
        assert_eq!(EQUATION_CASES.len(), 21);
    }

    #[test]
    fn every_case_fires_somewhere_in_a_small_corpus() {
        let sig = parse_signature(
            "fmod MIX is
               sort T .
               op a : -> T . op b : -> T . op c : -> T .
               op s : T -> T .
               op pair : T T -> T [comm] .
               op cat : T T -> T [assoc] .
               op _+_ : T T -> T [assoc comm] .
             endfm",
        )
        .unwrap();
        let goals = [
            ("X:T", "Y:T"),
            ("s(a)", "X:T"),
            ("a", "s(b)"),
            ("s(a)", "s(s(a))"),
            ("s(s(a))", "s(a)"),
            ("pair(a,b)", "pair(b,s(a))"),
            ("cat(a,b)", "cat(b,cat(a,s(b)))"),
            ("cat(a,cat(b,c))", "cat(a,s(cat(b,c)))"),
            ("+(a,b)", "+(b,+(a,s(c)))"),
            ("+(a,+(b,c))", "+(a,s(+(b,c)))"),
            ("+(a,a)", "+(b,c)"),
            ("cat(a,a)", "cat(b,c)"),
        ];
        let mut seen = [0u64; EQUATION_CASES.len()];
        for (l, r) in goals {
            for variant in [FlatVariant::Ml, FlatVariant::Sml] {
                let (_, _, hits) =
                    embeds_flat_traced(&meta(l, &sig), &meta(r, &sig), variant);
                for (acc, h) in seen.iter_mut().zip(hits) {
                    *acc += h;
                }
            }
        }
        // The uneven-length `all` clauses cannot fire from well-formed
        // terms (equal names mean equal arities), so they are driven
        // directly; they exist to make the free list recursion total.
        let mut eval = fresh_eval(&sig);
        let a = meta("a", &sig).term;
        assert!(!eval.all(&[], &[a.clone()]));
        assert!(!eval.all(&[a.clone()], &[]));
        seen[10] += eval.hits[10];
        seen[11] += eval.hits[11];
        for (i, count) in seen.iter().enumerate() {
            assert!(*count > 0, "case {} ({}) never fired", i, EQUATION_CASES[i]);
        }
    }

    #[test]
    fn flat_engine_reports_verdicts_with_counters() {
        let sig = nat09();
        let goal = EmbedGoal::new(
            parse_term("+(2,1)", &sig).unwrap(),
            parse_term("+(1,+(0,+(3,2)))", &sig).unwrap(),
            &sig,
        );
        let v = embeds_flat(&goal, FlatVariant::Sml, &Budget::UNBOUNDED);
        assert_eq!(v.outcome, Outcome::True);
        assert!(v.stats.recursive_calls > 0);
        assert_eq!(v.stats.states_expanded, 0);
    }
}
