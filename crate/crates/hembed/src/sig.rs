//! Order-sorted signatures with associativity/commutativity attributes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Name of the universal sort introduced by [`Signature::to_universal`].
pub const UNIVERSAL_SORT: &str = "U";
/// Name of the fresh constant that stands in for variables.
pub const SHARP: &str = "#";

/// Interned operator or variable name. Cheap to clone, ordered by content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Sort name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sort {
    fn from(s: &str) -> Self {
        Sort::new(s)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Equational attributes of a binary operator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct AxiomSet {
    pub assoc: bool,
    pub comm: bool,
}

impl AxiomSet {
    pub const FREE: AxiomSet = AxiomSet { assoc: false, comm: false };
    pub const A: AxiomSet = AxiomSet { assoc: true, comm: false };
    pub const C: AxiomSet = AxiomSet { assoc: false, comm: true };
    pub const AC: AxiomSet = AxiomSet { assoc: true, comm: true };

    pub fn is_free(self) -> bool {
        !self.assoc && !self.comm
    }

    pub fn is_ac(self) -> bool {
        self.assoc && self.comm
    }
}

/// One operator declaration: argument sorts, result sort, attributes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperatorDecl {
    pub name: Symbol,
    pub arg_sorts: Vec<Sort>,
    pub result_sort: Sort,
    pub axioms: AxiomSet,
}

impl OperatorDecl {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    pub fn is_constant(&self) -> bool {
        self.arg_sorts.is_empty()
    }
}

/// Partial order on sorts: the reflexive-transitive closure of the declared
/// subsort pairs.
#[derive(Clone, Debug, Default)]
pub struct SortPoset {
    sorts: BTreeSet<Sort>,
    leq: BTreeSet<(Sort, Sort)>,
}

impl SortPoset {
    pub fn contains(&self, s: &Sort) -> bool {
        self.sorts.contains(s)
    }

    /// `a <= b` in the subsort order.
    pub fn leq(&self, a: &Sort, b: &Sort) -> bool {
        a == b || self.leq.contains(&(a.clone(), b.clone()))
    }

    /// True when the two sorts live in the same connected component of the
    /// subsort graph.
    pub fn same_component(&self, a: &Sort, b: &Sort) -> bool {
        self.component_of(a) == self.component_of(b)
    }

    fn component_of(&self, s: &Sort) -> Sort {
        // Representative: the least sort of the component under name order.
        let mut members = BTreeSet::new();
        let mut frontier = vec![s.clone()];
        members.insert(s.clone());
        while let Some(x) = frontier.pop() {
            for (a, b) in &self.leq {
                let next = if a == &x && !members.contains(b) {
                    b.clone()
                } else if b == &x && !members.contains(a) {
                    a.clone()
                } else {
                    continue;
                };
                members.insert(next.clone());
                frontier.push(next);
            }
        }
        members.into_iter().next().expect("component is nonempty")
    }

    /// Groups all sorts by connected component, keyed by the representative.
    fn components(&self) -> BTreeMap<Sort, BTreeSet<Sort>> {
        let mut out: BTreeMap<Sort, BTreeSet<Sort>> = BTreeMap::new();
        for s in &self.sorts {
            out.entry(self.component_of(s)).or_default().insert(s.clone());
        }
        out
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.sorts.iter()
    }
}

/// Errors raised while assembling a signature.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SigError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("duplicate operator `{0}`")]
    DuplicateOperator(String),
    #[error("sort name `{0}` is reserved")]
    ReservedSort(String),
    #[error("operator name `{0}` is reserved")]
    ReservedOperator(String),
    #[error("operator `{0}` cannot carry assoc/comm: it is not binary")]
    AxiomArity(String),
    #[error("operator `{0}` carries assoc/comm but its argument and result sorts are not in one component")]
    AxiomSorts(String),
    #[error("subsort declarations form a cycle through `{0}`")]
    SubsortCycle(String),
    #[error("synthesized top sort `{0}` collides with a declared sort")]
    TopNameClash(String),
}

#[derive(Debug, Default)]
struct SigInner {
    poset: SortPoset,
    ops: Vec<OperatorDecl>,
    by_name: HashMap<Symbol, usize>,
}

/// An order-sorted signature. Clones share the underlying data.
#[derive(Clone, Debug)]
pub struct Signature(Arc<SigInner>);

impl Signature {
    pub fn builder() -> SignatureBuilder {
        SignatureBuilder::default()
    }

    pub fn poset(&self) -> &SortPoset {
        &self.0.poset
    }

    /// Operator declarations in declaration order.
    pub fn ops(&self) -> &[OperatorDecl] {
        &self.0.ops
    }

    pub fn op(&self, name: &Symbol) -> Option<&OperatorDecl> {
        self.0.by_name.get(name).map(|&i| &self.0.ops[i])
    }

    /// Attributes of an operator; unknown names are treated as free.
    pub fn axioms(&self, name: &Symbol) -> AxiomSet {
        self.op(name).map(|d| d.axioms).unwrap_or(AxiomSet::FREE)
    }

    pub fn constants(&self) -> impl Iterator<Item = &OperatorDecl> {
        self.0.ops.iter().filter(|d| d.is_constant())
    }

    /// True when this signature is already the image of [`to_universal`]:
    /// a single sort `U` plus the `#` constant.
    pub fn is_universal(&self) -> bool {
        let u = Sort::new(UNIVERSAL_SORT);
        self.0.poset.sorts.len() == 1
            && self.0.poset.contains(&u)
            && self.op(&Symbol::new(SHARP)).is_some()
    }

    /// Collapses every sort to the universal sort `U` and adds the fresh
    /// constant `#`. Operator names and attributes are preserved. Idempotent.
    pub fn to_universal(&self) -> Signature {
        if self.is_universal() {
            return self.clone();
        }
        let mut b = SignatureBuilder::default();
        b.allow_reserved = true;
        b.sort(UNIVERSAL_SORT);
        for d in self.ops() {
            let args = vec![UNIVERSAL_SORT; d.arity()];
            b.op_with(d.name.as_str(), &args, UNIVERSAL_SORT, d.axioms)
                .expect("universal image is well-formed");
        }
        b.op_with::<&str>(SHARP, &[], UNIVERSAL_SORT, AxiomSet::FREE)
            .expect("sharp constant is fresh");
        b.build().expect("universal image is well-formed")
    }
}

/// Incremental signature construction with the validation the parser relies on.
#[derive(Debug, Default)]
pub struct SignatureBuilder {
    sorts: BTreeSet<Sort>,
    subsorts: Vec<(Sort, Sort)>,
    ops: Vec<OperatorDecl>,
    names: BTreeSet<Symbol>,
    allow_reserved: bool,
}

impl SignatureBuilder {
    /// Declares a sort. Redeclaration is a no-op.
    pub fn sort(&mut self, name: &str) -> &mut Self {
        self.sorts.insert(Sort::new(name));
        self
    }

    /// Declares `sub < sup`. Both sides must already be declared when
    /// [`build`](Self::build) runs.
    pub fn subsort(&mut self, sub: &str, sup: &str) -> &mut Self {
        self.subsorts.push((Sort::new(sub), Sort::new(sup)));
        self
    }

    /// Declares a free operator.
    pub fn op(&mut self, name: &str, args: &[&str], result: &str) -> Result<&mut Self, SigError> {
        self.op_with(name, args, result, AxiomSet::FREE)
    }

    /// Declares an operator with attributes.
    pub fn op_with<S: AsRef<str>>(
        &mut self,
        name: &str,
        args: &[S],
        result: &str,
        axioms: AxiomSet,
    ) -> Result<&mut Self, SigError> {
        if !self.allow_reserved && name == SHARP {
            return Err(SigError::ReservedOperator(name.to_string()));
        }
        let sym = Symbol::new(name);
        if !self.names.insert(sym.clone()) {
            return Err(SigError::DuplicateOperator(name.to_string()));
        }
        if (axioms.assoc || axioms.comm) && args.len() != 2 {
            return Err(SigError::AxiomArity(name.to_string()));
        }
        self.ops.push(OperatorDecl {
            name: sym,
            arg_sorts: args.iter().map(|s| Sort::new(s.as_ref())).collect(),
            result_sort: Sort::new(result),
            axioms,
        });
        Ok(self)
    }

    /// Validates everything, synthesizes missing top sorts, and freezes the
    /// signature.
    pub fn build(&mut self) -> Result<Signature, SigError> {
        if !self.allow_reserved {
            if self.sorts.contains(&Sort::new(UNIVERSAL_SORT)) {
                return Err(SigError::ReservedSort(UNIVERSAL_SORT.to_string()));
            }
            for (a, b) in &self.subsorts {
                for s in [a, b] {
                    if s.as_str() == UNIVERSAL_SORT {
                        return Err(SigError::ReservedSort(UNIVERSAL_SORT.to_string()));
                    }
                }
            }
        }
        for (a, b) in &self.subsorts {
            for s in [a, b] {
                if !self.sorts.contains(s) {
                    return Err(SigError::UnknownSort(s.as_str().to_string()));
                }
            }
        }

        let mut poset = SortPoset {
            sorts: self.sorts.clone(),
            leq: BTreeSet::new(),
        };
        for (a, b) in &self.subsorts {
            if a != b {
                poset.leq.insert((a.clone(), b.clone()));
            }
        }
        transitive_close(&mut poset.leq);
        for (a, b) in &poset.leq {
            if poset.leq.contains(&(b.clone(), a.clone())) {
                return Err(SigError::SubsortCycle(a.as_str().to_string()));
            }
        }

        synthesize_tops(&mut poset)?;

        for d in &self.ops {
            for s in d.arg_sorts.iter().chain(std::iter::once(&d.result_sort)) {
                if !poset.contains(s) {
                    return Err(SigError::UnknownSort(s.as_str().to_string()));
                }
            }
            if d.axioms.assoc || d.axioms.comm {
                let a0 = &d.arg_sorts[0];
                let a1 = &d.arg_sorts[1];
                let mut ok = poset.same_component(a0, a1);
                if d.axioms.assoc {
                    ok = ok && poset.same_component(a0, &d.result_sort);
                }
                if !ok {
                    return Err(SigError::AxiomSorts(d.name.as_str().to_string()));
                }
            }
        }

        let mut by_name = HashMap::new();
        for (i, d) in self.ops.iter().enumerate() {
            by_name.insert(d.name.clone(), i);
        }
        Ok(Signature(Arc::new(SigInner {
            poset,
            ops: std::mem::take(&mut self.ops),
            by_name,
        })))
    }
}

fn transitive_close(leq: &mut BTreeSet<(Sort, Sort)>) {
    loop {
        let mut added = Vec::new();
        for (a, b) in leq.iter() {
            for (c, d) in leq.iter() {
                if b == c && a != d && !leq.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        leq.extend(added);
    }
}

/// Ensures every connected component has a top sort, adding
/// `Top-<representative>` where one is missing.
fn synthesize_tops(poset: &mut SortPoset) -> Result<(), SigError> {
    for (rep, members) in poset.components() {
        let has_top = members
            .iter()
            .any(|t| members.iter().all(|s| poset.leq(s, t)));
        if has_top {
            continue;
        }
        let top = Sort::new(&format!("Top-{rep}"));
        if poset.sorts.contains(&top) {
            return Err(SigError::TopNameClash(top.as_str().to_string()));
        }
        poset.sorts.insert(top.clone());
        for s in &members {
            poset.leq.insert((s.clone(), top.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> Signature {
        let mut b = Signature::builder();
        b.sort("Nat");
        b.op("0", &[], "Nat").unwrap();
        b.op("suc", &["Nat"], "Nat").unwrap();
        b.op_with("+", &["Nat", "Nat"], "Nat", AxiomSet::AC).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn axioms_lookup_defaults_to_free() {
        let sig = nat();
        assert_eq!(sig.axioms(&Symbol::new("+")), AxiomSet::AC);
        assert_eq!(sig.axioms(&Symbol::new("suc")), AxiomSet::FREE);
        assert_eq!(sig.axioms(&Symbol::new("nosuch")), AxiomSet::FREE);
    }

    #[test]
    fn universal_collapses_sorts_and_adds_sharp() {
        let sig = nat();
        let u = sig.to_universal();
        assert!(u.is_universal());
        assert_eq!(u.poset().sorts().count(), 1);
        let plus = u.op(&Symbol::new("+")).unwrap();
        assert_eq!(plus.axioms, AxiomSet::AC);
        assert_eq!(plus.arg_sorts, vec![Sort::new(UNIVERSAL_SORT); 2]);
        assert!(u.op(&Symbol::new(SHARP)).unwrap().is_constant());
    }

    #[test]
    fn universal_is_idempotent() {
        let u = nat().to_universal();
        let uu = u.to_universal();
        assert_eq!(u.ops().len(), uu.ops().len());
        assert!(uu.is_universal());
    }

    #[test]
    fn empty_signature_universalizes_to_sharp_only() {
        let sig = Signature::builder().build().unwrap();
        let u = sig.to_universal();
        assert!(u.is_universal());
        assert_eq!(u.ops().len(), 1);
        assert_eq!(u.ops()[0].name.as_str(), SHARP);
    }

    #[test]
    fn duplicate_operator_rejected() {
        let mut b = Signature::builder();
        b.sort("S");
        b.op("f", &["S"], "S").unwrap();
        assert_eq!(
            b.op("f", &["S", "S"], "S").unwrap_err(),
            SigError::DuplicateOperator("f".into())
        );
    }

    #[test]
    fn axiom_on_non_binary_rejected() {
        let mut b = Signature::builder();
        b.sort("S");
        assert_eq!(
            b.op_with("g", &["S"], "S", AxiomSet::A).unwrap_err(),
            SigError::AxiomArity("g".into())
        );
    }

    #[test]
    fn reserved_names_rejected() {
        let mut b = Signature::builder();
        b.sort("U");
        assert_eq!(b.build().unwrap_err(), SigError::ReservedSort("U".into()));
        let mut b = Signature::builder();
        b.sort("S");
        assert_eq!(
            b.op("#", &[], "S").unwrap_err(),
            SigError::ReservedOperator("#".into())
        );
    }

    #[test]
    fn subsort_cycle_rejected() {
        let mut b = Signature::builder();
        b.sort("A").sort("B");
        b.subsort("A", "B").subsort("B", "A");
        assert!(matches!(b.build(), Err(SigError::SubsortCycle(_))));
    }

    #[test]
    fn missing_top_is_synthesized() {
        let mut b = Signature::builder();
        b.sort("A").sort("B").sort("C");
        b.subsort("A", "B").subsort("A", "C");
        let sig = b.build().unwrap();
        let top = Sort::new("Top-A");
        assert!(sig.poset().contains(&top));
        for s in ["A", "B", "C"] {
            assert!(sig.poset().leq(&Sort::new(s), &top));
        }
    }

    #[test]
    fn existing_top_is_kept() {
        let mut b = Signature::builder();
        b.sort("A").sort("B");
        b.subsort("A", "B");
        let sig = b.build().unwrap();
        assert_eq!(sig.poset().sorts().count(), 2);
    }

    #[test]
    fn top_name_clash_is_an_error() {
        let mut b = Signature::builder();
        b.sort("A").sort("B").sort("C").sort("Top-A");
        b.subsort("A", "B").subsort("A", "C");
        assert_eq!(
            b.build().unwrap_err(),
            SigError::TopNameClash("Top-A".into())
        );
    }

    #[test]
    fn comm_requires_same_component() {
        let mut b = Signature::builder();
        b.sort("A").sort("B");
        assert!(b.op_with("f", &["A", "B"], "A", AxiomSet::C).is_ok());
        assert_eq!(
            b.build().unwrap_err(),
            SigError::AxiomSorts("f".into())
        );
    }
}
