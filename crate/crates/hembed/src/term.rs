//! First-order terms over a signature.

use std::fmt;

use crate::sig::{Signature, Sort, Symbol, SHARP, UNIVERSAL_SORT};

/// A term: a sorted variable or an operator application. Constants are
/// applications with no arguments.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var { name: Symbol, sort: Sort },
    App { op: Symbol, args: Vec<Term> },
}

impl Term {
    pub fn var(name: &str, sort: &str) -> Term {
        Term::Var {
            name: Symbol::new(name),
            sort: Sort::new(sort),
        }
    }

    pub fn constant(op: &str) -> Term {
        Term::App {
            op: Symbol::new(op),
            args: Vec::new(),
        }
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App {
            op: Symbol::new(op),
            args,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var { .. })
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var { .. } => false,
            Term::App { args, .. } => args.iter().all(Term::is_ground),
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var { .. } => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Nesting depth; leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var { .. } => 1,
            Term::App { args, .. } => {
                1 + args.iter().map(Term::depth).max().unwrap_or(0)
            }
        }
    }

    /// Replaces every variable with the fresh constant `#`.
    pub fn sharp(&self) -> Term {
        match self {
            Term::Var { .. } => Term::constant(SHARP),
            Term::App { op, args } => Term::App {
                op: op.clone(),
                args: args.iter().map(Term::sharp).collect(),
            },
        }
    }

    /// Re-sorts every variable to the universal sort, mirroring
    /// [`Signature::to_universal`] on the term side.
    pub fn to_universal(&self) -> Term {
        match self {
            Term::Var { name, .. } => Term::Var {
                name: name.clone(),
                sort: Sort::new(UNIVERSAL_SORT),
            },
            Term::App { op, args } => Term::App {
                op: op.clone(),
                args: args.iter().map(Term::to_universal).collect(),
            },
        }
    }

    /// The sort of the term under `sig`: the variable's declared sort or the
    /// operator's result sort. `None` for operators the signature lacks.
    pub fn sort(&self, sig: &Signature) -> Option<Sort> {
        match self {
            Term::Var { sort, .. } => Some(sort.clone()),
            Term::App { op, .. } => sig.op(op).map(|d| d.result_sort.clone()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { name, sort } => write!(f, "{name}:{sort}"),
            Term::App { op, args } => {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(a: Term, b: Term) -> Term {
        Term::app("+", vec![a, b])
    }

    #[test]
    fn size_and_depth() {
        let t = Term::app("suc", vec![Term::app("suc", vec![Term::constant("0")])]);
        assert_eq!(t.size(), 3);
        assert_eq!(t.depth(), 3);
        assert_eq!(Term::constant("0").depth(), 1);
    }

    #[test]
    fn sharp_replaces_all_variables() {
        let t = sum(Term::var("X", "Nat"), Term::app("suc", vec![Term::var("Y", "Nat")]));
        let s = t.sharp();
        assert!(s.is_ground());
        assert_eq!(s, sum(Term::constant("#"), Term::app("suc", vec![Term::constant("#")])));
        assert_eq!(s.sharp(), s);
    }

    #[test]
    fn display_round_trip_shape() {
        let t = sum(Term::constant("1"), Term::var("X", "Nat"));
        assert_eq!(t.to_string(), "+(1,X:Nat)");
        assert_eq!(Term::constant("0").to_string(), "0");
    }
}
