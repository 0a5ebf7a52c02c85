//! Seeded random term generation. Terms are well-sorted, ground, of an
//! exact requested nesting depth, and drawn from a configurable slice of
//! the signature's operators. The same seed always yields the same term.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

use hembed::{OperatorDecl, Signature, Sort, Term};

/// How many operators of each axiom class the generator may use, taken in
/// declaration order from the signature. Constants are always available as
/// leaves and are not counted here.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymbolMix {
    pub free: usize,
    pub comm: usize,
    pub assoc: usize,
    pub assoc_comm: usize,
}

impl SymbolMix {
    /// Every non-constant operator of the signature.
    pub fn full(sig: &Signature) -> SymbolMix {
        let mut mix = SymbolMix {
            free: 0,
            comm: 0,
            assoc: 0,
            assoc_comm: 0,
        };
        for d in sig.ops().iter().filter(|d| !d.is_constant()) {
            match (d.axioms.assoc, d.axioms.comm) {
                (false, false) => mix.free += 1,
                (false, true) => mix.comm += 1,
                (true, false) => mix.assoc += 1,
                (true, true) => mix.assoc_comm += 1,
            }
        }
        mix
    }
}

/// A goal-generation request: seed, depth of the left term, depths of the
/// right terms, and the operator mix.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub seed: u64,
    pub t1_size: usize,
    pub t2_sizes: Vec<usize>,
    pub symbol_mix: SymbolMix,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("requested {want} {class} operator(s), signature has {have}")]
    NotEnoughSymbols {
        class: &'static str,
        want: usize,
        have: usize,
    },
    #[error("requested depth {depth} but sizes must be at least 1")]
    ZeroDepth { depth: usize },
    #[error("no term of depth {depth} exists under the requested mix")]
    UnreachableDepth { depth: usize },
    #[error("no non-embedding goal found after {attempts} attempts")]
    NoFalseGoal { attempts: usize },
}

/// Generates the left-hand term of the spec: depth `t1_size`, seeded by
/// `seed`.
pub fn gen_term(spec: &GenSpec, sig: &Signature) -> Result<Term, GenError> {
    let gen = TermGen::new(sig, &spec.symbol_mix)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    gen.exact_depth(&mut rng, spec.t1_size)
}

/// A validated generator over one signature and mix, reusable across draws.
pub struct TermGen<'a> {
    sig: &'a Signature,
    constants: Vec<&'a OperatorDecl>,
    ops: Vec<&'a OperatorDecl>,
}

impl<'a> TermGen<'a> {
    pub fn new(sig: &'a Signature, mix: &SymbolMix) -> Result<Self, GenError> {
        let constants: Vec<_> = sig.constants().collect();
        let mut ops = Vec::new();
        for (class, want, assoc, comm) in [
            ("free", mix.free, false, false),
            ("commutative", mix.comm, false, true),
            ("associative", mix.assoc, true, false),
            ("associative-commutative", mix.assoc_comm, true, true),
        ] {
            let available: Vec<_> = sig
                .ops()
                .iter()
                .filter(|d| {
                    !d.is_constant() && d.axioms.assoc == assoc && d.axioms.comm == comm
                })
                .collect();
            if available.len() < want {
                return Err(GenError::NotEnoughSymbols {
                    class,
                    want,
                    have: available.len(),
                });
            }
            ops.extend(available.into_iter().take(want));
        }
        Ok(TermGen {
            sig,
            constants,
            ops,
        })
    }

    /// True when a term of exactly this depth exists whose sort fits the
    /// target (any sort when `target` is None).
    fn reachable(
        &self,
        target: Option<&Sort>,
        depth: usize,
        memo: &mut BTreeMap<(Option<Sort>, usize), bool>,
    ) -> bool {
        let key = (target.cloned(), depth);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        // Seed the memo pessimistically so sort cycles terminate.
        memo.insert(key.clone(), false);
        let fits = |d: &OperatorDecl| match target {
            None => true,
            Some(s) => self.sig.poset().leq(&d.result_sort, s),
        };
        let v = if depth == 1 {
            self.constants.iter().any(|d| fits(d))
        } else {
            self.ops.iter().any(|d| {
                fits(d)
                    && d.arg_sorts.iter().enumerate().any(|(i, deep)| {
                        self.reachable(Some(deep), depth - 1, memo)
                            && d.arg_sorts.iter().enumerate().all(|(j, other)| {
                                i == j || self.fillable(Some(other), depth - 1, memo)
                            })
                    })
            })
        };
        memo.insert(key, v);
        v
    }

    fn fillable(
        &self,
        target: Option<&Sort>,
        up_to: usize,
        memo: &mut BTreeMap<(Option<Sort>, usize), bool>,
    ) -> bool {
        (1..=up_to).any(|d| self.reachable(target, d, memo))
    }

    /// Draws a ground term of exactly `depth`, uniformly at each node among
    /// the admissible choices.
    pub fn exact_depth(&self, rng: &mut ChaCha8Rng, depth: usize) -> Result<Term, GenError> {
        if depth == 0 {
            return Err(GenError::ZeroDepth { depth });
        }
        let mut memo = BTreeMap::new();
        if !self.reachable(None, depth, &mut memo) {
            return Err(GenError::UnreachableDepth { depth });
        }
        Ok(self.draw(rng, None, depth, &mut memo))
    }

    fn draw(
        &self,
        rng: &mut ChaCha8Rng,
        target: Option<&Sort>,
        depth: usize,
        memo: &mut BTreeMap<(Option<Sort>, usize), bool>,
    ) -> Term {
        let fits = |this: &Self, d: &OperatorDecl| match target {
            None => true,
            Some(s) => this.sig.poset().leq(&d.result_sort, s),
        };
        if depth == 1 {
            let pool: Vec<_> = self
                .constants
                .iter()
                .filter(|d| fits(self, d))
                .collect();
            let pick = pool[rng.gen_range(0..pool.len())];
            return Term::constant(pick.name.as_str());
        }
        let pool: Vec<_> = self
            .ops
            .iter()
            .filter(|d| {
                fits(self, d)
                    && d.arg_sorts.iter().enumerate().any(|(i, deep)| {
                        self.reachable(Some(deep), depth - 1, memo)
                            && d.arg_sorts.iter().enumerate().all(|(j, other)| {
                                i == j || self.fillable(Some(other), depth - 1, memo)
                            })
                    })
            })
            .copied()
            .collect();
        let op = pool[rng.gen_range(0..pool.len())];
        let deep_positions: Vec<usize> = (0..op.arg_sorts.len())
            .filter(|&i| {
                self.reachable(Some(&op.arg_sorts[i]), depth - 1, memo)
                    && op.arg_sorts.iter().enumerate().all(|(j, other)| {
                        i == j || self.fillable(Some(other), depth - 1, memo)
                    })
            })
            .collect();
        let deep = deep_positions[rng.gen_range(0..deep_positions.len())];
        let args: Vec<Term> = op
            .arg_sorts
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let d = if i == deep {
                    depth - 1
                } else {
                    let choices: Vec<usize> =
                        (1..depth).filter(|&d| self.reachable(Some(s), d, memo)).collect();
                    choices[rng.gen_range(0..choices.len())]
                };
                self.draw(rng, Some(s), d, memo)
            })
            .collect();
        Term::app(op.name.as_str(), args)
    }
}
