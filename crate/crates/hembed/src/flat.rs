//! Canonical flattened terms.
//!
//! Arguments of associative operators are spliced into a single variadic
//! node; commutative argument lists are sorted under [`term_order`]. Two
//! terms are equal modulo their operators' axioms exactly when their
//! flattened forms are structurally equal.

use std::cmp::Ordering;
use std::fmt;

use crate::sig::{AxiomSet, Signature, Symbol, SHARP, UNIVERSAL_SORT};
use crate::term::Term;

/// A flattened term. Variables occur only in rewrite-rule patterns; terms
/// handled by the engines are ground.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FlatTerm {
    Var(Symbol),
    App(Symbol, Vec<FlatTerm>),
}

impl FlatTerm {
    pub fn var(name: &str) -> FlatTerm {
        FlatTerm::Var(Symbol::new(name))
    }

    pub fn leaf(op: &str) -> FlatTerm {
        FlatTerm::App(Symbol::new(op), Vec::new())
    }

    pub fn sharp() -> FlatTerm {
        FlatTerm::leaf(SHARP)
    }

    pub fn is_sharp(&self) -> bool {
        matches!(self, FlatTerm::App(op, args) if op.as_str() == SHARP && args.is_empty())
    }

    /// Root operator; `None` for variables.
    pub fn root(&self) -> Option<&Symbol> {
        match self {
            FlatTerm::Var(_) => None,
            FlatTerm::App(op, _) => Some(op),
        }
    }

    pub fn args(&self) -> &[FlatTerm] {
        match self {
            FlatTerm::Var(_) => &[],
            FlatTerm::App(_, args) => args,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            FlatTerm::Var(_) => 1,
            FlatTerm::App(_, args) => 1 + args.iter().map(FlatTerm::size).sum::<usize>(),
        }
    }

    /// Variables occurring in the term, left to right, first occurrence only.
    pub fn vars(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        fn walk(t: &FlatTerm, out: &mut Vec<Symbol>) {
            match t {
                FlatTerm::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                FlatTerm::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        walk(self, &mut out);
        out
    }
}

/// Total order on flattened terms: variables before applications, variables
/// by name, applications by operator name, then argument count, then
/// arguments left to right.
pub fn term_order(a: &FlatTerm, b: &FlatTerm) -> Ordering {
    match (a, b) {
        (FlatTerm::Var(x), FlatTerm::Var(y)) => x.cmp(y),
        (FlatTerm::Var(_), FlatTerm::App(..)) => Ordering::Less,
        (FlatTerm::App(..), FlatTerm::Var(_)) => Ordering::Greater,
        (FlatTerm::App(f, xs), FlatTerm::App(g, ys)) => f
            .cmp(g)
            .then_with(|| xs.len().cmp(&ys.len()))
            .then_with(|| {
                for (x, y) in xs.iter().zip(ys) {
                    let o = term_order(x, y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }),
    }
}

impl PartialOrd for FlatTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(term_order(self, other))
    }
}

impl Ord for FlatTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        term_order(self, other)
    }
}

/// Builds a canonical node over already-canonical arguments: splices nested
/// occurrences of an associative operator, sorts commutative argument lists,
/// and collapses a variadic node left with a single argument.
pub fn mk_node(op: &Symbol, args: Vec<FlatTerm>, ax: AxiomSet) -> FlatTerm {
    let mut args = if ax.assoc {
        let mut spliced = Vec::with_capacity(args.len());
        for a in args {
            match a {
                FlatTerm::App(f, sub) if &f == op => spliced.extend(sub),
                other => spliced.push(other),
            }
        }
        spliced
    } else {
        args
    };
    if ax.comm {
        args.sort();
    }
    if ax.assoc && args.len() == 1 {
        return args.pop().expect("nonempty");
    }
    FlatTerm::App(op.clone(), args)
}

/// Canonical flattened form of a term.
pub fn flatten(t: &Term, sig: &Signature) -> FlatTerm {
    match t {
        Term::Var { name, .. } => FlatTerm::Var(name.clone()),
        Term::App { op, args } => {
            let fargs = args.iter().map(|a| flatten(a, sig)).collect();
            mk_node(op, fargs, sig.axioms(op))
        }
    }
}

/// Re-canonicalizes a flattened term bottom-up. Identity on outputs of
/// [`flatten`]; used after surgical edits.
pub fn canonicalize(t: &FlatTerm, sig: &Signature) -> FlatTerm {
    match t {
        FlatTerm::Var(_) => t.clone(),
        FlatTerm::App(op, args) => {
            let cargs = args.iter().map(|a| canonicalize(a, sig)).collect();
            mk_node(op, cargs, sig.axioms(op))
        }
    }
}

/// Expands a flattened term back to binary form, associating variadic nodes
/// to the right. Variables come back at the universal sort.
pub fn unflatten(t: &FlatTerm, sig: &Signature) -> Term {
    match t {
        FlatTerm::Var(name) => Term::Var {
            name: name.clone(),
            sort: crate::sig::Sort::new(UNIVERSAL_SORT),
        },
        FlatTerm::App(op, args) => {
            let mut parts: Vec<Term> = args.iter().map(|a| unflatten(a, sig)).collect();
            if parts.len() > 2 && sig.axioms(op).assoc {
                let mut acc = parts.pop().expect("nonempty");
                while let Some(next) = parts.pop() {
                    acc = Term::App {
                        op: op.clone(),
                        args: vec![next, acc],
                    };
                }
                acc
            } else {
                Term::App {
                    op: op.clone(),
                    args: parts,
                }
            }
        }
    }
}

/// Equality modulo the signature's associativity/commutativity axioms.
pub fn eq_mod_b(t1: &Term, t2: &Term, sig: &Signature) -> bool {
    flatten(t1, sig) == flatten(t2, sig)
}

impl fmt::Display for FlatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatTerm::Var(name) => write!(f, "{name}:{UNIVERSAL_SORT}"),
            FlatTerm::App(op, args) => {
                write!(f, "{op}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}
