//! Syntactic homeomorphic embedding and the class-enumeration oracle.

use crate::classes::{enumerate_class_capped, ClassError, DEFAULT_CLASS_CAP};
use crate::sig::Signature;
use crate::term::Term;

/// An embedding query `lhs` into `rhs` over a signature.
#[derive(Clone, Debug)]
pub struct EmbedGoal {
    pub lhs: Term,
    pub rhs: Term,
    pub sig: Signature,
}

impl EmbedGoal {
    pub fn new(lhs: Term, rhs: Term, sig: &Signature) -> Self {
        EmbedGoal {
            lhs,
            rhs,
            sig: sig.clone(),
        }
    }
}

/// Postorder index of a term's subterm occurrences. The root is the last
/// entry; `kids[i]` lists the indices of node i's arguments.
struct Spine<'a> {
    nodes: Vec<&'a Term>,
    kids: Vec<Vec<usize>>,
}

impl<'a> Spine<'a> {
    fn new(t: &'a Term) -> Self {
        let mut s = Spine {
            nodes: Vec::new(),
            kids: Vec::new(),
        };
        s.push(t);
        s
    }

    fn push(&mut self, t: &'a Term) -> usize {
        let kids = match t {
            Term::Var { .. } => Vec::new(),
            Term::App { args, .. } => args.iter().map(|a| self.push(a)).collect(),
        };
        self.nodes.push(t);
        self.kids.push(kids);
        self.nodes.len() - 1
    }

    fn root(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Pure homeomorphic embedding on ground terms: either the right root is
/// deleted (diving) or the roots agree and arguments embed position-wise
/// (coupling). Worst case O(|s| * |t|) thanks to memoization.
pub fn embeds_pure(s: &Term, t: &Term) -> bool {
    debug_assert!(s.is_ground() && t.is_ground());
    let ls = Spine::new(s);
    let rt = Spine::new(t);
    let mut memo = vec![None; ls.nodes.len() * rt.nodes.len()];
    pure_rec(&ls, &rt, ls.root(), rt.root(), &mut memo)
}

fn pure_rec(
    ls: &Spine<'_>,
    rt: &Spine<'_>,
    i: usize,
    j: usize,
    memo: &mut [Option<bool>],
) -> bool {
    let key = i * rt.nodes.len() + j;
    if let Some(v) = memo[key] {
        return v;
    }
    let (s, t) = (ls.nodes[i], rt.nodes[j]);
    let dive = rt.kids[j]
        .iter()
        .any(|&tj| pure_rec(ls, rt, i, tj, memo));
    let couple = !dive && {
        match (s, t) {
            (Term::App { op: f, .. }, Term::App { op: g, .. })
                if f == g && ls.kids[i].len() == rt.kids[j].len() =>
            {
                ls.kids[i]
                    .iter()
                    .zip(&rt.kids[j])
                    .all(|(&si, &tj)| pure_rec(ls, rt, si, tj, memo))
            }
            _ => false,
        }
    };
    let v = dive || couple;
    memo[key] = Some(v);
    v
}

/// Variable-extended embedding: any variable embeds into any variable,
/// diving may pass a variable on the left into the right-hand arguments, and
/// coupling is as in the ground case. Agrees with
/// `embeds_pure(s.sharp(), t.sharp())`.
pub fn embeds_var(s: &Term, t: &Term) -> bool {
    let ls = Spine::new(s);
    let rt = Spine::new(t);
    let mut memo = vec![None; ls.nodes.len() * rt.nodes.len()];
    var_rec(&ls, &rt, ls.root(), rt.root(), &mut memo)
}

fn var_rec(
    ls: &Spine<'_>,
    rt: &Spine<'_>,
    i: usize,
    j: usize,
    memo: &mut [Option<bool>],
) -> bool {
    let key = i * rt.nodes.len() + j;
    if let Some(v) = memo[key] {
        return v;
    }
    let (s, t) = (ls.nodes[i], rt.nodes[j]);
    let v = match (s, t) {
        (Term::Var { .. }, Term::Var { .. }) => true,
        (Term::App { .. }, Term::Var { .. }) => false,
        _ => {
            let dive = rt.kids[j]
                .iter()
                .any(|&tj| var_rec(ls, rt, i, tj, memo));
            dive || match (s, t) {
                (Term::App { op: f, .. }, Term::App { op: g, .. })
                    if f == g && ls.kids[i].len() == rt.kids[j].len() =>
                {
                    ls.kids[i]
                        .iter()
                        .zip(&rt.kids[j])
                        .all(|(&si, &tj)| var_rec(ls, rt, si, tj, memo))
                }
                _ => false,
            }
        }
    };
    memo[key] = Some(v);
    v
}

/// Definitional oracle for embedding modulo axioms: enumerate both sides'
/// equivalence classes (of the variable-collapsed terms) and look for a pure
/// embedding between any pair.
pub fn oracle_embeds(goal: &EmbedGoal) -> Result<bool, ClassError> {
    oracle_embeds_capped(goal, DEFAULT_CLASS_CAP)
}

/// As [`oracle_embeds`] with an explicit class cap. The optional callback
/// sees each candidate pair, for instrumentation.
pub fn oracle_embeds_capped(goal: &EmbedGoal, cap: usize) -> Result<bool, ClassError> {
    oracle_embeds_inner(goal, cap, &mut |_, _| ())
}

pub(crate) fn oracle_embeds_inner(
    goal: &EmbedGoal,
    cap: usize,
    on_pair: &mut dyn FnMut(&Term, &Term),
) -> Result<bool, ClassError> {
    let usig = goal.sig.to_universal();
    let ls = goal.lhs.sharp();
    let rs = goal.rhs.sharp();
    let left = enumerate_class_capped(&ls, &usig, cap)?;
    let right = enumerate_class_capped(&rs, &usig, cap)?;
    for u in &left {
        for v in &right {
            on_pair(u, v);
            if embeds_pure(u, v) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_signature, parse_term};

    fn nat09() -> Signature {
        parse_signature(
            "fmod NAT is
               sort Nat .
               op 0 : -> Nat . op 1 : -> Nat . op 2 : -> Nat .
               op 3 : -> Nat . op 4 : -> Nat . op 5 : -> Nat .
               op 6 : -> Nat . op 7 : -> Nat . op 8 : -> Nat .
               op 9 : -> Nat .
               op suc : Nat -> Nat .
               op _+_ : Nat Nat -> Nat [assoc comm] .
             endfm",
        )
        .unwrap()
    }

    fn free_sig() -> Signature {
        parse_signature(
            "fmod FREE is
               sort S .
               op 0 : -> S .
               op s : S -> S .
               op _+_ : S S -> S .
               op _*_ : S S -> S .
             endfm",
        )
        .unwrap()
    }

    #[test]
    fn constants_embed_only_themselves() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        assert!(embeds_pure(&t("2"), &t("2")));
        assert!(!embeds_pure(&t("2"), &t("3")));
    }

    #[test]
    fn diving_reaches_inner_subterms() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        assert!(embeds_pure(&t("2"), &t("+(2,+(3,1))")));
        assert!(embeds_pure(&t("+(3,1)"), &t("+(2,+(3,1))")));
        assert!(embeds_pure(&t("suc(0)"), &t("suc(suc(0))")));
    }

    #[test]
    fn coupling_needs_matching_roots_in_order() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        // Without axioms the argument order is rigid.
        assert!(!embeds_pure(&t("+(1,2)"), &t("+(2,1)")));
        assert!(embeds_pure(&t("+(1,2)"), &t("+(1,+(0,2))")));
    }

    #[test]
    fn variable_extended_embedding_on_the_motivating_goal() {
        let sig = free_sig();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let small = t("*(s(X:S),s(Y:S))");
        let large = t("*(s(+(0,s(X:S))),s(+(X:S,Y:S)))");
        assert!(embeds_var(&small, &large));
        assert!(!embeds_var(&large, &small));
    }

    #[test]
    fn variables_embed_into_any_variable() {
        let sig = free_sig();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        assert!(embeds_var(&t("X:S"), &t("Y:S")));
        assert!(embeds_var(&t("X:S"), &t("s(Y:S)")));
        assert!(!embeds_var(&t("s(X:S)"), &t("Y:S")));
    }

    #[test]
    fn sharp_collapse_matches_variable_rules() {
        let sig = free_sig();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        for (a, b) in [
            ("*(s(X:S),s(Y:S))", "*(s(+(0,s(X:S))),s(+(X:S,Y:S)))"),
            ("s(X:S)", "s(0)"),
            ("+(X:S,0)", "+(s(X:S),Y:S)"),
            ("X:S", "0"),
        ] {
            let (a, b) = (t(a), t(b));
            assert_eq!(
                embeds_var(&a, &b),
                embeds_pure(&a.sharp(), &b.sharp()),
                "mismatch for {a} / {b}"
            );
        }
    }

    #[test]
    fn oracle_accepts_the_commuted_sum() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let goal = EmbedGoal::new(t("+(1,2)"), t("+(2,+(3,1))"), &sig);
        assert_eq!(oracle_embeds(&goal), Ok(true));
    }

    #[test]
    fn oracle_rejects_missing_material() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let goal = EmbedGoal::new(t("+(4,4)"), t("+(2,+(3,1))"), &sig);
        assert_eq!(oracle_embeds(&goal), Ok(false));
        let goal = EmbedGoal::new(t("suc(4)"), t("+(4,4)"), &sig);
        assert_eq!(oracle_embeds(&goal), Ok(false));
    }

    #[test]
    fn oracle_handles_variables_via_sharp() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let goal = EmbedGoal::new(t("+(1,X:Nat)"), t("+(Y:Nat,+(1,3))"), &sig);
        assert_eq!(oracle_embeds(&goal), Ok(true));
    }

    #[test]
    fn oracle_respects_the_class_cap() {
        let sig = nat09();
        let t = |s: &str| parse_term(s, &sig).unwrap();
        let goal = EmbedGoal::new(
            t("1"),
            t("+(1,+(2,+(3,+(4,+(5,6)))))"),
            &sig,
        );
        assert!(matches!(
            oracle_embeds_capped(&goal, 10),
            Err(ClassError::CapExceeded { cap: 10 })
        ));
    }
}
