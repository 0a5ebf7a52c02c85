//! Rewrite theories for deciding embedding by reachability and by
//! goal-driven proof search.
//!
//! `gen_emb_rules` emits one projection rule per operator argument over the
//! universal signature; `gen_rogd_rules` emits the goal-driven rule set:
//! diving into right-hand arguments, coupling of equal constants, and
//! decomposition of equal operators. Both generators drop rules that a kept
//! rule subsumes modulo the axioms, which collapses the commutative,
//! associative, and associative-commutative decomposition variants into the
//! plain coupling rule and records the merge in the rule label.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use crate::flat::{mk_node, FlatTerm};
use crate::matching::{apply_subst, for_each_match};
use crate::sig::{AxiomSet, Signature, Symbol};

/// Infix operator of embedding goals inside rule terms.
pub const GOAL_OP: &str = "<|";
/// Conjunction of goals; associative-commutative.
pub const AND_OP: &str = "/\\";
/// The trivially true goal.
pub const TRUE_OP: &str = "true";

/// Attribute lookup that also covers the goal-level operators.
pub(crate) fn goal_axioms(sig: &Signature, op: &Symbol) -> AxiomSet {
    if op.as_str() == AND_OP {
        AxiomSet::AC
    } else {
        sig.axioms(op)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TheoryKind {
    /// Projection rules `f(X1,..,Xn) -> Xi`; embedding is reachability.
    EmbU,
    /// Goal rules `u <| v => goals`; embedding is proof search.
    Rogd,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteRule {
    pub label: String,
    pub lhs: FlatTerm,
    pub rhs: FlatTerm,
}

#[derive(Clone, Debug)]
pub struct RewriteTheory {
    pub kind: TheoryKind,
    /// The universal signature the rules live over.
    pub sig: Signature,
    pub rules: Vec<RewriteRule>,
}

fn goal(u: FlatTerm, v: FlatTerm) -> FlatTerm {
    FlatTerm::App(Symbol::new(GOAL_OP), vec![u, v])
}

fn conj(goals: Vec<FlatTerm>, sig: &Signature) -> FlatTerm {
    if goals.len() == 1 {
        return goals.into_iter().next().expect("nonempty");
    }
    let op = Symbol::new(AND_OP);
    let ax = goal_axioms(sig, &op);
    mk_node(&op, goals, ax)
}

fn truth() -> FlatTerm {
    FlatTerm::leaf(TRUE_OP)
}

fn var(prefix: &str, i: usize) -> FlatTerm {
    FlatTerm::var(&format!("{prefix}{i}"))
}

fn op_node(sig: &Signature, name: &Symbol, args: Vec<FlatTerm>) -> FlatTerm {
    mk_node(name, args, goal_axioms(sig, name))
}

/// Projection rules over the universal signature, after redundancy
/// elimination. For every C or AC binary operator exactly one of the two
/// projections survives.
pub fn gen_emb_rules(sig: &Signature) -> RewriteTheory {
    let usig = sig.to_universal();
    let mut candidates = Vec::new();
    for d in usig.ops() {
        let n = d.arity();
        for i in 0..n {
            let args: Vec<FlatTerm> = (1..=n).map(|j| var("X", j)).collect();
            candidates.push(RewriteRule {
                label: format!("Proj_{}", i + 1),
                lhs: op_node(&usig, &d.name, args),
                rhs: var("X", i + 1),
            });
        }
    }
    let mut rules: Vec<RewriteRule> = Vec::new();
    for cand in candidates {
        if !rules.iter().any(|kept| subsumes(kept, &cand, &usig)) {
            rules.push(cand);
        }
    }
    RewriteTheory {
        kind: TheoryKind::EmbU,
        sig: usig,
        rules,
    }
}

/// Which decomposition schema a candidate rule came from; drives label
/// merging when a schema collapses into the plain coupling rule.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Schema {
    Plain,
    Comm,
    Assoc,
    AssocComm,
}

impl Schema {
    fn tag(self) -> &'static str {
        match self {
            Schema::Plain => "",
            Schema::Comm => "C",
            Schema::Assoc => "A",
            Schema::AssocComm => "AC",
        }
    }
}

/// Goal-driven rules over the universal signature plus `#`, after
/// subsumption elimination.
pub fn gen_rogd_rules(sig: &Signature) -> RewriteTheory {
    let usig = sig.to_universal();
    let mut candidates: Vec<(Option<Schema>, RewriteRule)> = Vec::new();

    // Diving: X <| f(T1,..,Tn) => X <| Ti.
    for d in usig.ops() {
        let n = d.arity();
        for i in 1..=n {
            let targs: Vec<FlatTerm> = (1..=n).map(|j| var("T", j)).collect();
            candidates.push((
                None,
                RewriteRule {
                    label: "Diving".to_string(),
                    lhs: goal(FlatTerm::var("X"), op_node(&usig, &d.name, targs)),
                    rhs: goal(FlatTerm::var("X"), var("T", i)),
                },
            ));
        }
    }

    // Coupling of constants: # first, then user constants in declaration
    // order.
    let mut base = vec![RewriteRule {
        label: "Coupling".to_string(),
        lhs: goal(FlatTerm::sharp(), FlatTerm::sharp()),
        rhs: truth(),
    }];
    for d in usig.ops() {
        if d.is_constant() && d.name.as_str() != crate::sig::SHARP {
            base.push(RewriteRule {
                label: "Coupling".to_string(),
                lhs: goal(FlatTerm::leaf(d.name.as_str()), FlatTerm::leaf(d.name.as_str())),
                rhs: truth(),
            });
        }
    }
    candidates.extend(base.into_iter().map(|r| (None, r)));

    // Decomposition coupling per non-constant operator, with the
    // commutative/associative variants right after the plain rule.
    for d in usig.ops() {
        let n = d.arity();
        if n == 0 {
            continue;
        }
        let f = &d.name;
        let svars: Vec<FlatTerm> = (1..=n).map(|i| var("S", i)).collect();
        let tvars: Vec<FlatTerm> = (1..=n).map(|i| var("T", i)).collect();
        let subgoals: Vec<FlatTerm> = svars
            .iter()
            .cloned()
            .zip(tvars.iter().cloned())
            .map(|(s, t)| goal(s, t))
            .collect();
        candidates.push((
            Some(Schema::Plain),
            RewriteRule {
                label: "Coupling".to_string(),
                lhs: goal(
                    op_node(&usig, f, svars.clone()),
                    op_node(&usig, f, tvars.clone()),
                ),
                rhs: conj(subgoals, &usig),
            },
        ));
        if d.axioms.comm {
            candidates.push((
                Some(Schema::Comm),
                RewriteRule {
                    label: "Coupling_C".to_string(),
                    lhs: goal(
                        op_node(&usig, f, svars.clone()),
                        op_node(&usig, f, tvars.clone()),
                    ),
                    rhs: conj(
                        vec![
                            goal(var("S", 1), var("T", 2)),
                            goal(var("S", 2), var("T", 1)),
                        ],
                        &usig,
                    ),
                },
            ));
        }
        if d.axioms.assoc {
            let nest = |a: FlatTerm, b: FlatTerm| op_node(&usig, f, vec![a, b]);
            // f(S1,f(S2,S3)) <| f(T1,T2) => f(S1,S2) <| T1 /\ S3 <| T2
            candidates.push((
                Some(Schema::Assoc),
                RewriteRule {
                    label: "Coupling_A".to_string(),
                    lhs: goal(
                        nest(var("S", 1), nest(var("S", 2), var("S", 3))),
                        nest(var("T", 1), var("T", 2)),
                    ),
                    rhs: conj(
                        vec![
                            goal(nest(var("S", 1), var("S", 2)), var("T", 1)),
                            goal(var("S", 3), var("T", 2)),
                        ],
                        &usig,
                    ),
                },
            ));
            // f(S1,S2) <| f(T1,f(T2,T3)) => S1 <| f(T1,T2) /\ S2 <| T3
            candidates.push((
                Some(Schema::Assoc),
                RewriteRule {
                    label: "Coupling_A".to_string(),
                    lhs: goal(
                        nest(var("S", 1), var("S", 2)),
                        nest(var("T", 1), nest(var("T", 2), var("T", 3))),
                    ),
                    rhs: conj(
                        vec![
                            goal(var("S", 1), nest(var("T", 1), var("T", 2))),
                            goal(var("S", 2), var("T", 3)),
                        ],
                        &usig,
                    ),
                },
            ));
            if d.axioms.comm {
                // f(S1,f(S2,S3)) <| f(T1,T2) => f(S1,S2) <| T2 /\ S3 <| T1
                candidates.push((
                    Some(Schema::AssocComm),
                    RewriteRule {
                        label: "Coupling_AC".to_string(),
                        lhs: goal(
                            nest(var("S", 1), nest(var("S", 2), var("S", 3))),
                            nest(var("T", 1), var("T", 2)),
                        ),
                        rhs: conj(
                            vec![
                                goal(nest(var("S", 1), var("S", 2)), var("T", 2)),
                                goal(var("S", 3), var("T", 1)),
                            ],
                            &usig,
                        ),
                    },
                ));
                // f(S1,S2) <| f(T1,f(T2,T3)) => S2 <| f(T1,T2) /\ S1 <| T3
                candidates.push((
                    Some(Schema::AssocComm),
                    RewriteRule {
                        label: "Coupling_AC".to_string(),
                        lhs: goal(
                            nest(var("S", 1), var("S", 2)),
                            nest(var("T", 1), nest(var("T", 2), var("T", 3))),
                        ),
                        rhs: conj(
                            vec![
                                goal(var("S", 2), nest(var("T", 1), var("T", 2))),
                                goal(var("S", 1), var("T", 3)),
                            ],
                            &usig,
                        ),
                    },
                ));
            }
        }
    }

    let mut kept: Vec<(RewriteRule, BTreeSet<Schema>)> = Vec::new();
    for (schema, cand) in candidates {
        let mut absorbed_by = None;
        for (i, (rule, _)) in kept.iter().enumerate() {
            if subsumes(rule, &cand, &usig) {
                absorbed_by = Some(i);
                break;
            }
        }
        match absorbed_by {
            Some(i) => {
                if let Some(s) = schema {
                    kept[i].1.insert(s);
                }
            }
            None => {
                let mut merged = BTreeSet::new();
                if let Some(s) = schema {
                    merged.insert(s);
                }
                kept.push((cand, merged));
            }
        }
    }

    let rules = kept
        .into_iter()
        .map(|(mut rule, merged)| {
            let extra: Vec<&str> = merged
                .iter()
                .filter(|s| **s != Schema::Plain)
                .map(|s| s.tag())
                .collect();
            if !extra.is_empty() {
                rule.label = format!("Coupling_{{∅,{}}}", extra.join(","));
            }
            rule
        })
        .collect();

    RewriteTheory {
        kind: TheoryKind::Rogd,
        sig: usig,
        rules,
    }
}

/// True when `kept` subsumes `cand` modulo the axioms: some matcher of
/// `kept.lhs` onto the variable-frozen `cand.lhs` instantiates `kept.rhs` to
/// the frozen `cand.rhs`.
fn subsumes(kept: &RewriteRule, cand: &RewriteRule, sig: &Signature) -> bool {
    let lhs = freeze(&cand.lhs, sig);
    let rhs = freeze(&cand.rhs, sig);
    for_each_match(&kept.lhs, &lhs, sig, &mut |binds| {
        if apply_subst(&kept.rhs, binds, sig) == rhs {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .is_break()
}

/// Replaces each variable with an opaque constant so the term can stand as a
/// ground matching subject.
fn freeze(t: &FlatTerm, sig: &Signature) -> FlatTerm {
    match t {
        FlatTerm::Var(v) => FlatTerm::leaf(&format!("\u{1}frz:{v}")),
        FlatTerm::App(op, args) => {
            let frozen = args.iter().map(|a| freeze(a, sig)).collect();
            mk_node(op, frozen, goal_axioms(sig, op))
        }
    }
}

/// Formats a rule term: goals infix, conjunctions joined, everything else in
/// prefix form.
fn fmt_rule_term(t: &FlatTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        FlatTerm::App(op, args) if op.as_str() == GOAL_OP && args.len() == 2 => {
            write!(f, "{} {} {}", args[0], GOAL_OP, args[1])
        }
        FlatTerm::App(op, args) if op.as_str() == AND_OP => {
            for (i, g) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, " {AND_OP} ")?;
                }
                fmt_rule_term(g, f)?;
            }
            Ok(())
        }
        other => write!(f, "{other}"),
    }
}

impl fmt::Display for RewriteTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            write!(f, "[{}] ", rule.label)?;
            fmt_rule_term(&rule.lhs, f)?;
            match self.kind {
                TheoryKind::EmbU => write!(f, " -> ")?,
                TheoryKind::Rogd => write!(f, " => ")?,
            }
            fmt_rule_term(&rule.rhs, f)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_signature;

    fn nat() -> Signature {
        parse_signature(
            "fmod NAT is
               sort Nat .
               op 0 : -> Nat .
               op suc : Nat -> Nat .
               op _+_ : Nat Nat -> Nat [assoc comm] .
             endfm",
        )
        .unwrap()
    }

    #[test]
    fn emb_rules_for_nat_keep_one_plus_projection() {
        let th = gen_emb_rules(&nat());
        assert_eq!(th.kind, TheoryKind::EmbU);
        assert_eq!(
            th.to_string(),
            "[Proj_1] suc(X1:U) -> X1:U\n[Proj_1] +(X1:U,X2:U) -> X1:U\n"
        );
    }

    #[test]
    fn emb_rule_count_is_arity_sum_minus_commutative_binaries() {
        let sig = parse_signature(
            "fmod M is
               sort S .
               op c : -> S .
               op h : S S S -> S .
               op f : S S -> S [assoc] .
               op g : S S -> S [comm] .
               op k : S S -> S [assoc comm] .
             endfm",
        )
        .unwrap();
        // Arities sum to 3 + 2 + 2 + 2 = 9; g and k each lose one.
        let th = gen_emb_rules(&sig);
        assert_eq!(th.rules.len(), 7);
        let f_rules: Vec<_> = th
            .rules
            .iter()
            .filter(|r| r.lhs.root().map(|s| s.as_str()) == Some("f"))
            .collect();
        assert_eq!(f_rules.len(), 2);
    }

    #[test]
    fn rogd_rules_for_nat_match_the_six_rule_set() {
        let th = gen_rogd_rules(&nat());
        assert_eq!(th.kind, TheoryKind::Rogd);
        let labels: Vec<&str> = th.rules.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(
            labels,
            vec![
                "Diving",
                "Diving",
                "Coupling",
                "Coupling",
                "Coupling",
                "Coupling_{∅,C,A,AC}"
            ]
        );
        assert_eq!(
            th.to_string(),
            "\
[Diving] X:U <| suc(T1:U) => X:U <| T1:U
[Diving] X:U <| +(T1:U,T2:U) => X:U <| T1:U
[Coupling] # <| # => true
[Coupling] 0 <| 0 => true
[Coupling] suc(S1:U) <| suc(T1:U) => S1:U <| T1:U
[Coupling_{∅,C,A,AC}] +(S1:U,S2:U) <| +(T1:U,T2:U) => S1:U <| T1:U /\\ S2:U <| T2:U
"
        );
    }

    #[test]
    fn rogd_rules_for_a_free_binary_operator() {
        let sig = parse_signature(
            "fmod M is sort S . op c : -> S . op g : S S -> S . endfm",
        )
        .unwrap();
        let th = gen_rogd_rules(&sig);
        let labels: Vec<&str> = th.rules.iter().map(|r| r.label.as_str()).collect();
        // Both diving rules survive, plus #, c, and one coupling.
        assert_eq!(labels, vec!["Diving", "Diving", "Coupling", "Coupling", "Coupling"]);
    }

    #[test]
    fn rogd_assoc_only_operator_merges_the_nested_variants() {
        let sig = parse_signature(
            "fmod M is sort S . op c : -> S . op f : S S -> S [assoc] . endfm",
        )
        .unwrap();
        let th = gen_rogd_rules(&sig);
        let labels: Vec<&str> = th.rules.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(
            labels,
            vec!["Diving", "Diving", "Coupling", "Coupling", "Coupling_{∅,A}"]
        );
    }

    #[test]
    fn rogd_comm_only_operator_merges_the_crossed_variant() {
        let sig = parse_signature(
            "fmod M is sort S . op c : -> S . op f : S S -> S [comm] . endfm",
        )
        .unwrap();
        let th = gen_rogd_rules(&sig);
        let labels: Vec<&str> = th.rules.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(
            labels,
            vec!["Diving", "Coupling", "Coupling", "Coupling_{∅,C}"]
        );
    }
}
