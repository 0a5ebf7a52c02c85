//! Matching of flattened patterns onto flattened subjects modulo the
//! operators' axioms.
//!
//! Associative patterns bind contiguous blocks of a subject cluster;
//! associative-commutative patterns bind arbitrary sub-multisets. Matchers
//! are enumerated lazily through a callback so a caller can stop at the
//! first hit or bail out on a budget.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::flat::{mk_node, FlatTerm};
use crate::sig::{AxiomSet, Signature, Symbol};
use crate::theory::goal_axioms;

/// A substitution from pattern variables to ground flattened terms.
pub type Subst = BTreeMap<Symbol, FlatTerm>;

type Cont<'a> = &'a mut dyn FnMut(&mut Subst) -> ControlFlow<()>;

/// Calls `f` once per matcher of `pat` onto `subj`. Returns
/// `ControlFlow::Break(())` as soon as `f` breaks.
pub fn for_each_match(
    pat: &FlatTerm,
    subj: &FlatTerm,
    sig: &Signature,
    f: &mut dyn FnMut(&Subst) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut binds = Subst::new();
    match_pair(pat, subj, sig, &mut binds, &mut |b| f(b))
}

/// True when at least one matcher exists.
pub fn matches(pat: &FlatTerm, subj: &FlatTerm, sig: &Signature) -> bool {
    for_each_match(pat, subj, sig, &mut |_| ControlFlow::Break(())).is_break()
}

fn match_pair(
    pat: &FlatTerm,
    subj: &FlatTerm,
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    match pat {
        FlatTerm::Var(v) => {
            if let Some(bound) = binds.get(v) {
                if bound == subj {
                    k(binds)
                } else {
                    ControlFlow::Continue(())
                }
            } else {
                binds.insert(v.clone(), subj.clone());
                let r = k(binds);
                binds.remove(v);
                r
            }
        }
        FlatTerm::App(f, pargs) => {
            let FlatTerm::App(g, sargs) = subj else {
                return ControlFlow::Continue(());
            };
            if f != g {
                return ControlFlow::Continue(());
            }
            let ax = goal_axioms(sig, f);
            if ax.is_ac() && sargs.len() >= 2 {
                match_ac(f, ax, pargs, sargs, sig, binds, k)
            } else if ax.assoc && sargs.len() >= 2 {
                match_assoc(f, ax, pargs, sargs, 0, 0, sig, binds, k)
            } else if ax.comm {
                match_comm(pargs, sargs, sig, binds, k)
            } else if pargs.len() == sargs.len() {
                let pairs: Vec<(&FlatTerm, &FlatTerm)> =
                    pargs.iter().zip(sargs.iter()).collect();
                match_seq(&pairs, 0, sig, binds, k)
            } else {
                ControlFlow::Continue(())
            }
        }
    }
}

fn match_seq(
    pairs: &[(&FlatTerm, &FlatTerm)],
    at: usize,
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    if at == pairs.len() {
        return k(binds);
    }
    let (p, s) = pairs[at];
    match_pair(p, s, sig, binds, &mut |b| match_seq(pairs, at + 1, sig, b, k))
}

fn match_comm(
    pargs: &[FlatTerm],
    sargs: &[FlatTerm],
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    if pargs.len() != 2 || sargs.len() != 2 {
        return ControlFlow::Continue(());
    }
    let straight: Vec<(&FlatTerm, &FlatTerm)> = vec![(&pargs[0], &sargs[0]), (&pargs[1], &sargs[1])];
    match_seq(&straight, 0, sig, binds, k)?;
    if sargs[0] != sargs[1] {
        let crossed: Vec<(&FlatTerm, &FlatTerm)> =
            vec![(&pargs[0], &sargs[1]), (&pargs[1], &sargs[0])];
        match_seq(&crossed, 0, sig, binds, k)?;
    }
    ControlFlow::Continue(())
}

/// Associative cluster matching: pattern arguments bind contiguous nonempty
/// blocks of the subject arguments, in order.
#[allow(clippy::too_many_arguments)]
fn match_assoc(
    op: &Symbol,
    ax: AxiomSet,
    pargs: &[FlatTerm],
    sargs: &[FlatTerm],
    pi: usize,
    start: usize,
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    let n = pargs.len();
    let m = sargs.len();
    if n == 0 || n > m {
        return ControlFlow::Continue(());
    }
    if pi == n - 1 {
        let block = block_term(op, ax, &sargs[start..]);
        return match_pair(&pargs[pi], &block, sig, binds, k);
    }
    let rest_needed = n - pi - 1;
    for len in 1..=(m - start - rest_needed) {
        let block = block_term(op, ax, &sargs[start..start + len]);
        match_pair(&pargs[pi], &block, sig, binds, &mut |b| {
            match_assoc(op, ax, pargs, sargs, pi + 1, start + len, sig, b, k)
        })?;
    }
    ControlFlow::Continue(())
}

/// Associative-commutative cluster matching: pattern arguments bind disjoint
/// nonempty sub-multisets covering the subject arguments. Non-variable
/// pattern arguments can only match single elements, since any larger block
/// is rooted by the cluster operator.
fn match_ac(
    op: &Symbol,
    ax: AxiomSet,
    pargs: &[FlatTerm],
    sargs: &[FlatTerm],
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    let n = pargs.len();
    if n == 0 || n > sargs.len() {
        return ControlFlow::Continue(());
    }
    let remaining: Vec<usize> = (0..sargs.len()).collect();
    ac_rec(op, ax, pargs, sargs, 0, &remaining, sig, binds, k)
}

#[allow(clippy::too_many_arguments)]
fn ac_rec(
    op: &Symbol,
    ax: AxiomSet,
    pargs: &[FlatTerm],
    sargs: &[FlatTerm],
    pi: usize,
    remaining: &[usize],
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    let n = pargs.len();
    if pi == n - 1 {
        if remaining.is_empty() {
            return ControlFlow::Continue(());
        }
        let chosen: Vec<FlatTerm> = remaining.iter().map(|&i| sargs[i].clone()).collect();
        let block = if chosen.len() == 1 {
            chosen.into_iter().next().expect("nonempty")
        } else {
            mk_node(op, chosen, ax)
        };
        return match_pair(&pargs[pi], &block, sig, binds, k);
    }
    let rest_needed = n - pi - 1;
    if pargs[pi].root().is_some() {
        if remaining.len() < rest_needed + 1 {
            return ControlFlow::Continue(());
        }
        // A non-variable argument takes exactly one element; equal subject
        // elements are adjacent in canonical order, so duplicates skip.
        for (j, &idx) in remaining.iter().enumerate() {
            if j > 0 && sargs[remaining[j - 1]] == sargs[idx] {
                continue;
            }
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&r| r != idx)
                .collect();
            match_pair(&pargs[pi], &sargs[idx], sig, binds, &mut |b| {
                ac_rec(op, ax, pargs, sargs, pi + 1, &rest, sig, b, k)
            })?;
        }
        ControlFlow::Continue(())
    } else {
        subset_rec(
            op, ax, pargs, sargs, pi, remaining, 0, &mut Vec::new(), rest_needed, sig, binds, k,
        )
    }
}

/// Enumerates the nonempty subsets of `remaining[at..]` (joined with the
/// already `chosen` indices) that leave at least `rest_needed` elements.
#[allow(clippy::too_many_arguments)]
fn subset_rec(
    op: &Symbol,
    ax: AxiomSet,
    pargs: &[FlatTerm],
    sargs: &[FlatTerm],
    pi: usize,
    remaining: &[usize],
    at: usize,
    chosen: &mut Vec<usize>,
    rest_needed: usize,
    sig: &Signature,
    binds: &mut Subst,
    k: Cont<'_>,
) -> ControlFlow<()> {
    if at == remaining.len() {
        if chosen.is_empty() || remaining.len() - chosen.len() < rest_needed {
            return ControlFlow::Continue(());
        }
        let vals: Vec<FlatTerm> = chosen.iter().map(|&i| sargs[i].clone()).collect();
        let block = if vals.len() == 1 {
            vals.into_iter().next().expect("nonempty")
        } else {
            mk_node(op, vals, ax)
        };
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|r| !chosen.contains(r))
            .collect();
        return match_pair(&pargs[pi], &block, sig, binds, &mut |b| {
            ac_rec(op, ax, pargs, sargs, pi + 1, &rest, sig, b, k)
        });
    }
    chosen.push(remaining[at]);
    subset_rec(
        op, ax, pargs, sargs, pi, remaining, at + 1, chosen, rest_needed, sig, binds, k,
    )?;
    chosen.pop();
    subset_rec(
        op, ax, pargs, sargs, pi, remaining, at + 1, chosen, rest_needed, sig, binds, k,
    )
}

fn block_term(op: &Symbol, ax: AxiomSet, slice: &[FlatTerm]) -> FlatTerm {
    if slice.len() == 1 {
        slice[0].clone()
    } else {
        mk_node(op, slice.to_vec(), ax)
    }
}

/// Applies a substitution to a pattern, rebuilding canonical nodes.
pub fn apply_subst(t: &FlatTerm, binds: &Subst, sig: &Signature) -> FlatTerm {
    match t {
        FlatTerm::Var(v) => binds
            .get(v)
            .cloned()
            .unwrap_or_else(|| t.clone()),
        FlatTerm::App(op, args) => {
            let inst = args.iter().map(|a| apply_subst(a, binds, sig)).collect();
            mk_node(op, inst, goal_axioms(sig, op))
        }
    }
}

/// Collects every matcher eagerly; test-facing convenience.
pub fn all_matches(pat: &FlatTerm, subj: &FlatTerm, sig: &Signature) -> Vec<Subst> {
    let mut out = Vec::new();
    let _ = for_each_match(pat, subj, sig, &mut |b| {
        out.push(b.clone());
        ControlFlow::Continue(())
    });
    out
}
