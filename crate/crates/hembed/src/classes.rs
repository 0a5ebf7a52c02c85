//! Enumeration of equivalence classes modulo associativity/commutativity.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::sig::Signature;
use crate::term::Term;

/// Default cap on the number of class members.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("equivalence class exceeds the cap of {cap} terms")]
    CapExceeded { cap: usize },
}

/// All terms equal to `t` modulo the signature's axioms, in a deterministic
/// order, capped at [`DEFAULT_CLASS_CAP`].
pub fn enumerate_class(t: &Term, sig: &Signature) -> Result<Vec<Term>, ClassError> {
    enumerate_class_capped(t, sig, DEFAULT_CLASS_CAP)
}

/// As [`enumerate_class`] with an explicit cap.
pub fn enumerate_class_capped(
    t: &Term,
    sig: &Signature,
    cap: usize,
) -> Result<Vec<Term>, ClassError> {
    let set = class_set(t, sig, cap)?;
    Ok(set.into_iter().collect())
}

fn class_set(t: &Term, sig: &Signature, cap: usize) -> Result<BTreeSet<Term>, ClassError> {
    let mut out = BTreeSet::new();
    match t {
        Term::Var { .. } => {
            out.insert(t.clone());
        }
        Term::App { op, args } => {
            let ax = sig.axioms(op);
            if ax.assoc {
                // Whole cluster at once: alien subterms in their original
                // order, then every argument-class choice, ordering (when
                // commutative), and re-association.
                let aliens = cluster_aliens(t, op);
                let choices: Vec<Vec<Term>> = aliens
                    .iter()
                    .map(|a| class_set(a, sig, cap).map(|s| s.into_iter().collect()))
                    .collect::<Result<_, _>>()?;
                for combo in choices.into_iter().multi_cartesian_product() {
                    if ax.comm {
                        let mut seq = combo;
                        seq.sort();
                        loop {
                            build_shapes(op, &seq, &mut out, cap)?;
                            if !next_permutation(&mut seq) {
                                break;
                            }
                        }
                    } else {
                        build_shapes(op, &combo, &mut out, cap)?;
                    }
                }
            } else if ax.comm {
                let left = class_set(&args[0], sig, cap)?;
                let right = class_set(&args[1], sig, cap)?;
                for a in &left {
                    for b in &right {
                        for t in [
                            Term::App { op: op.clone(), args: vec![a.clone(), b.clone()] },
                            Term::App { op: op.clone(), args: vec![b.clone(), a.clone()] },
                        ] {
                            insert_capped(&mut out, t, cap)?;
                        }
                    }
                }
            } else {
                let choices: Vec<Vec<Term>> = args
                    .iter()
                    .map(|a| class_set(a, sig, cap).map(|s| s.into_iter().collect()))
                    .collect::<Result<_, _>>()?;
                if choices.is_empty() {
                    insert_capped(&mut out, t.clone(), cap)?;
                } else {
                    for combo in choices.into_iter().multi_cartesian_product() {
                        insert_capped(&mut out, Term::App { op: op.clone(), args: combo }, cap)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Maximal same-operator cluster leaves of `t`, left to right.
fn cluster_aliens(t: &Term, op: &crate::sig::Symbol) -> Vec<Term> {
    match t {
        Term::App { op: f, args } if f == op => args
            .iter()
            .flat_map(|a| cluster_aliens(a, op))
            .collect(),
        other => vec![other.clone()],
    }
}

/// Inserts every binary re-association of `seq` under `op`.
fn build_shapes(
    op: &crate::sig::Symbol,
    seq: &[Term],
    out: &mut BTreeSet<Term>,
    cap: usize,
) -> Result<(), ClassError> {
    for t in shapes(op, seq) {
        insert_capped(out, t, cap)?;
    }
    Ok(())
}

fn shapes(op: &crate::sig::Symbol, seq: &[Term]) -> Vec<Term> {
    if seq.len() == 1 {
        return vec![seq[0].clone()];
    }
    let mut out = Vec::new();
    for split in 1..seq.len() {
        for l in shapes(op, &seq[..split]) {
            for r in shapes(op, &seq[split..]) {
                out.push(Term::App {
                    op: op.clone(),
                    args: vec![l.clone(), r],
                });
            }
        }
    }
    out
}

fn insert_capped(out: &mut BTreeSet<Term>, t: Term, cap: usize) -> Result<(), ClassError> {
    out.insert(t);
    if out.len() > cap {
        return Err(ClassError::CapExceeded { cap });
    }
    Ok(())
}

/// In-place step to the next distinct permutation in lexicographic order;
/// false when `seq` was the last one.
fn next_permutation<T: Ord>(seq: &mut [T]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}
