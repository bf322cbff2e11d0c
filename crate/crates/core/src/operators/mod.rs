//! Modal operators on finite Boolean algebras.
//!
//! On a finite algebra additivity forces complete additivity, so an operator
//! is stored by its values on atoms and extended by
//! `f(x) = ⋁ { f(a) : a atom, a ≤ x }`, `f(0) = 0`.

mod classify;
mod structure;

use std::fmt;

use crate::ba::{Element, ElementSet, FiniteBa};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

pub use classify::{ClassLabel, Irreducibility, IrreducibilityKind};
pub use structure::{all_algebras, build_kn, embeds, Subalgebra, MAX_EMBED_ATOMS, MAX_SUBALGEBRA_ATOMS};

/// The four depth-two shapes: restriction of the canonical relation to the
/// lower and upper level is the identity (`i`) or universal (`u`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtremalKind {
    Ii,
    Iu,
    Ui,
    Uu,
}

impl ExtremalKind {
    pub const ALL: [ExtremalKind; 4] = [
        ExtremalKind::Ii,
        ExtremalKind::Iu,
        ExtremalKind::Ui,
        ExtremalKind::Uu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtremalKind::Ii => "ii",
            ExtremalKind::Iu => "iu",
            ExtremalKind::Ui => "ui",
            ExtremalKind::Uu => "uu",
        }
    }
}

impl fmt::Display for ExtremalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExtremalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ExtremalKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Lookup {
                kind: "extremal kind",
                name: s.to_string(),
            })
    }
}

/// A normal additive operator, determined by its values on atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModalOperator {
    atom_values: Vec<Element>,
}

impl ModalOperator {
    pub fn from_atom_values(ba: &FiniteBa, values: &[Element]) -> Result<Self> {
        if values.len() != ba.n_atoms() {
            return Err(Error::Arity {
                expected: ba.n_atoms(),
                got: values.len(),
            });
        }
        for v in values {
            ba.element(v.bits())?;
        }
        Ok(ModalOperator {
            atom_values: values.to_vec(),
        })
    }

    pub fn identity(ba: &FiniteBa) -> Self {
        ModalOperator {
            atom_values: ba.atoms().collect(),
        }
    }

    /// `f(0) = 0`, `f(x) = 1` otherwise.
    pub fn discriminator(ba: &FiniteBa) -> Self {
        ModalOperator {
            atom_values: vec![ba.top(); ba.n_atoms()],
        }
    }

    pub fn atom_values(&self) -> &[Element] {
        &self.atom_values
    }

    pub fn n_atoms(&self) -> usize {
        self.atom_values.len()
    }

    pub fn apply(&self, x: Element) -> Element {
        x.atom_indices()
            .fold(Element::ZERO, |acc, i| acc | self.atom_values[i])
    }

    /// The full value table, indexed by element bitmask.
    pub fn table(&self) -> OperatorTable {
        let size = 1usize << self.atom_values.len();
        let mut values = vec![Element::ZERO; size];
        for x in 1..size {
            let low = x.trailing_zeros() as usize;
            values[x] = values[x & (x - 1)] | self.atom_values[low];
        }
        OperatorTable {
            n_atoms: self.atom_values.len(),
            values,
        }
    }
}

/// An arbitrary map `B → B` given by its full table. Used for operators that
/// are not additive (e.g. duals) and for externally supplied tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorTable {
    n_atoms: usize,
    values: Vec<Element>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OperatorProperties {
    pub normal: bool,
    pub additive: bool,
    pub closure: bool,
    pub interior: bool,
}

impl OperatorTable {
    pub fn from_values(ba: &FiniteBa, values: Vec<Element>) -> Result<Self> {
        if values.len() != ba.size() {
            return Err(Error::Arity {
                expected: ba.size(),
                got: values.len(),
            });
        }
        for v in &values {
            ba.element(v.bits())?;
        }
        Ok(OperatorTable {
            n_atoms: ba.n_atoms(),
            values,
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn apply(&self, x: Element) -> Element {
        self.values[x.bits() as usize]
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    fn top(&self) -> Element {
        Element::new((self.values.len() - 1) as u32)
    }

    /// `g(x) = −f(−x)`.
    pub fn dual(&self) -> OperatorTable {
        let top = self.top().bits();
        let values = (0..self.values.len())
            .map(|x| Element::new(top ^ self.values[x ^ top as usize].bits()))
            .collect();
        OperatorTable {
            n_atoms: self.n_atoms,
            values,
        }
    }

    pub fn properties(&self) -> OperatorProperties {
        let normal = self.values[0].is_zero();
        // f is additive iff f(0) ≤ f(y) for all y and f(x) is the join of f on
        // the atoms below x for every nonzero x.
        let f0 = self.values[0];
        let additive = (1..self.values.len()).all(|x| {
            let low = x & x.wrapping_neg();
            let rest = x ^ low;
            f0.leq(self.values[x])
                && (rest == 0 || self.values[x] == self.values[low] | self.values[rest])
        });
        let elements = || (0..self.values.len()).map(|x| Element::new(x as u32));
        let closure = elements().all(|x| {
            let fx = self.apply(x);
            x.leq(fx) && self.apply(fx) == fx
        });
        let interior = elements().all(|x| {
            let gx = self.apply(x);
            gx.leq(x) && self.apply(gx) == gx
        });
        OperatorProperties {
            normal,
            additive,
            closure,
            interior,
        }
    }

    /// Recovers the atom-value form; fails unless the table is normal and additive.
    pub fn to_operator(&self) -> Result<ModalOperator> {
        let props = self.properties();
        if !(props.normal && props.additive) {
            return Err(Error::Precondition(
                "operator table is not normal and additive".into(),
            ));
        }
        Ok(ModalOperator {
            atom_values: (0..self.n_atoms).map(|i| self.values[1 << i]).collect(),
        })
    }

    pub fn fixpoints(&self) -> ElementSet {
        (0..self.values.len() as u32)
            .map(Element::new)
            .filter(|&x| self.apply(x) == x)
            .collect()
    }
}

/// A finite Boolean algebra with a modal operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModalAlgebra {
    base: FiniteBa,
    op: ModalOperator,
}

impl ModalAlgebra {
    pub fn new(base: FiniteBa, op: ModalOperator) -> Result<Self> {
        if op.n_atoms() != base.n_atoms() {
            return Err(Error::Arity {
                expected: base.n_atoms(),
                got: op.n_atoms(),
            });
        }
        Ok(ModalAlgebra { base, op })
    }

    /// Convenience constructor from raw atom-value bitmasks.
    pub fn from_atom_values(n_atoms: usize, values: &[u32]) -> Result<Self> {
        let base = FiniteBa::new(n_atoms)?;
        let values: Vec<Element> = values.iter().map(|&v| Element::new(v)).collect();
        let op = ModalOperator::from_atom_values(&base, &values)?;
        Ok(ModalAlgebra { base, op })
    }

    /// The two-element closure algebra `2`.
    pub fn two() -> Self {
        let base = FiniteBa::new(1).expect("one atom");
        ModalAlgebra {
            op: ModalOperator::identity(&base),
            base,
        }
    }

    pub fn base(&self) -> &FiniteBa {
        &self.base
    }

    pub fn op(&self) -> &ModalOperator {
        &self.op
    }

    pub fn n_atoms(&self) -> usize {
        self.base.n_atoms()
    }

    pub fn f(&self, x: Element) -> Element {
        self.op.apply(x)
    }

    /// `f∂(x) = −f(−x)`.
    pub fn dual_f(&self, x: Element) -> Element {
        self.base.complement(self.f(self.base.complement(x)))
    }

    pub fn table(&self) -> OperatorTable {
        self.op.table()
    }

    pub fn properties(&self) -> OperatorProperties {
        self.table().properties()
    }

    pub fn is_closure(&self) -> bool {
        // Additivity makes the atom-wise test sufficient: x ≤ f(x) on atoms
        // gives Cl1 everywhere, and f(f(a)) ≤ f(a) on atoms gives Cl2.
        self.op.atom_values.iter().enumerate().all(|(i, &v)| {
            v.contains_atom(i) && self.f(v) == v
        })
    }

    pub fn is_identity(&self) -> bool {
        self.op == ModalOperator::identity(&self.base)
    }

    pub fn is_discriminator(&self) -> bool {
        self.op == ModalOperator::discriminator(&self.base)
    }

    /// The dual operator `f∂` as a full table (it is multiplicative, not additive).
    pub fn dual_operator(&self) -> OperatorTable {
        self.table().dual()
    }

    /// Fixpoints of `f` (closed elements) and of `f∂` (open elements).
    pub fn closed_open_elements(&self) -> (ElementSet, ElementSet) {
        let table = self.table();
        (table.fixpoints(), table.dual().fixpoints())
    }

    pub fn closed_elements(&self) -> ElementSet {
        self.table().fixpoints()
    }

    /// Exhaustive test of `f(a)·b = 0 ⟺ g(b)·a = 0`; the failing pair `(a, b)`
    /// is the first in lexicographic order.
    pub fn conjugate_check(&self, g: &ModalOperator) -> Result<Verdict<(Element, Element)>> {
        if g.n_atoms() != self.n_atoms() {
            return Err(Error::Arity {
                expected: self.n_atoms(),
                got: g.n_atoms(),
            });
        }
        let f = self.table();
        let g = g.table();
        for a in self.base.elements() {
            for b in self.base.elements() {
                if (f.apply(a) & b).is_zero() != (g.apply(b) & a).is_zero() {
                    return Ok(Verdict::Fails((a, b)));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    /// The depth-two inequality `f(f∂(x) · f(f∂(y)) · −y) ≤ x` over all pairs.
    pub fn depth2_axiom(&self) -> Verdict<(Element, Element)> {
        let f = self.table();
        let g = f.dual();
        for x in self.base.elements() {
            for y in self.base.elements() {
                let inner = g.apply(x) & f.apply(g.apply(y)) & self.base.complement(y);
                if !f.apply(inner).leq(x) {
                    return Verdict::Fails((x, y));
                }
            }
        }
        Verdict::Holds
    }

    pub fn satisfies_depth2_axiom(&self) -> bool {
        self.depth2_axiom().holds()
    }
}

impl fmt::Display for ModalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨2^{}, f:", self.n_atoms())?;
        for (i, v) in self.op.atom_values.iter().enumerate() {
            write!(f, " a{i}↦{v}")?;
        }
        f.write_str("⟩")
    }
}

/// The extremal closure operators with parameter `param`:
///
/// * `iu`: `f(x) = x` if `x ≤ param`, else `1` (ideal algebras),
/// * `ui`: `f(0) = 0`, `f(x) = param + x` otherwise (filter algebras),
/// * `uu`: `f(0) = 0`, `f(x) = param` if `0 < x ≤ param`, else `1` (MaxId algebras),
/// * `ii`: `f(x) = x` if `x ≤ param`, else `param + x`.
pub fn extremal_operator(kind: ExtremalKind, ba: &FiniteBa, param: Element) -> Result<ModalOperator> {
    ba.element(param.bits())?;
    if kind == ExtremalKind::Uu && param.is_zero() {
        return Err(Error::Parameter(
            "the MaxId operator needs a nonzero parameter".into(),
        ));
    }
    let top = ba.top();
    let atom_values = ba
        .atoms()
        .map(|atom| {
            let below = atom.leq(param);
            match kind {
                ExtremalKind::Iu => if below { atom } else { top },
                ExtremalKind::Ui => param | atom,
                ExtremalKind::Uu => if below { param } else { top },
                ExtremalKind::Ii => if below { atom } else { param | atom },
            }
        })
        .collect();
    Ok(ModalOperator { atom_values })
}

/// Builds the closure operator whose closed elements are exactly `d`, via
/// `f(b) = min(↑b ∩ d)`.
///
/// `d` must contain `0` and `1` and be closed under joins; a failure of meet
/// closure shows up as some `↑b ∩ d` without a least member and is reported
/// for the first such `b`.
pub fn operator_from_sublattice(ba: &FiniteBa, d: &ElementSet) -> Result<ModalOperator> {
    for x in d {
        ba.element(x.bits())?;
    }
    if !d.contains(ba.bottom()) || !d.contains(ba.top()) {
        return Err(Error::Precondition(
            "the closed-element set must contain 0 and 1".into(),
        ));
    }
    if !d.iter().all(|x| d.iter().all(|y| d.contains(x | y))) {
        return Err(Error::Precondition(
            "the closed-element set is not closed under joins".into(),
        ));
    }
    let mut table = Vec::with_capacity(ba.size());
    for b in ba.elements() {
        let above: ElementSet = d.iter().filter(|c| b.leq(*c)).collect();
        match above.least() {
            Some(m) => table.push(m),
            None => {
                return Err(Error::NoClosure {
                    element: b.to_string(),
                })
            }
        }
    }
    OperatorTable::from_values(ba, table)?.to_operator()
}
