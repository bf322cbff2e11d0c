//! Finite Boolean algebras presented as powerset algebras over indexed atoms.
//!
//! Every finite Boolean algebra is atomic, so it is (up to isomorphism) the
//! powerset of its atoms. An element is a bitmask; bit `i` is atom `i`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr};

use crate::error::{Error, Result};

pub const MAX_ATOMS: usize = 20;

/// An element of a [`FiniteBa`], stored as the bitmask of the atoms below it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);

    pub const fn new(bits: u32) -> Self {
        Element(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `self ≤ other` in the lattice order.
    pub const fn leq(self, other: Element) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn contains_atom(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn atom_count(self) -> u32 {
        self.0.count_ones()
    }

    /// Indices of the atoms below this element, ascending.
    pub fn atom_indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }
}

impl BitOr for Element {
    type Output = Element;
    fn bitor(self, rhs: Element) -> Element {
        Element(self.0 | rhs.0)
    }
}

impl BitAnd for Element {
    type Output = Element;
    fn bitand(self, rhs: Element) -> Element {
        Element(self.0 & rhs.0)
    }
}

impl fmt::Display for Element {
    /// Renders the atom set, e.g. `{0,2}`; the bottom element is `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.atom_indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// The powerset algebra on `n_atoms` atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiniteBa {
    n_atoms: usize,
}

/// Results of the four Boolean primitives on a pair of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primitives {
    pub join: Element,
    pub meet: Element,
    /// Complement of the first argument.
    pub complement: Element,
    /// Whether the first argument is below the second.
    pub leq: bool,
}

impl FiniteBa {
    pub fn new(n_atoms: usize) -> Result<Self> {
        if n_atoms == 0 || n_atoms > MAX_ATOMS {
            return Err(Error::size("atom count", n_atoms, MAX_ATOMS));
        }
        Ok(FiniteBa { n_atoms })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Number of elements, `2^n_atoms`.
    pub fn size(&self) -> usize {
        1usize << self.n_atoms
    }

    pub fn bottom(&self) -> Element {
        Element::ZERO
    }

    pub fn top(&self) -> Element {
        Element(((1u64 << self.n_atoms) - 1) as u32)
    }

    pub fn atom(&self, i: usize) -> Element {
        debug_assert!(i < self.n_atoms);
        Element(1 << i)
    }

    pub fn atoms(&self) -> impl Iterator<Item = Element> {
        (0..self.n_atoms).map(|i| Element(1 << i))
    }

    /// All elements in increasing bitmask order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.size() as u32).map(Element)
    }

    pub fn contains(&self, x: Element) -> bool {
        x.leq(self.top())
    }

    /// Validates a raw bitmask as an element of this algebra.
    pub fn element(&self, bits: u32) -> Result<Element> {
        let x = Element(bits);
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::Domain(format!(
                "bitmask {bits:#b} is not an element of the algebra on {} atoms",
                self.n_atoms
            )))
        }
    }

    pub fn complement(&self, x: Element) -> Element {
        Element(self.top().0 ^ x.0)
    }

    pub fn is_atom(&self, x: Element) -> bool {
        x.atom_count() == 1
    }

    pub fn is_antiatom(&self, x: Element) -> bool {
        self.is_atom(self.complement(x))
    }

    /// Join, meet, complement and order on a pair of (validated) elements.
    pub fn primitives(&self, x: Element, y: Element) -> Result<Primitives> {
        self.element(x.bits())?;
        self.element(y.bits())?;
        Ok(Primitives {
            join: x | y,
            meet: x & y,
            complement: self.complement(x),
            leq: x & y == x,
        })
    }

    /// `↓a`, the principal ideal generated by `a`.
    pub fn down_set(&self, a: Element) -> ElementSet {
        self.elements().filter(|x| x.leq(a)).collect()
    }

    /// `↑a`, the principal filter generated by `a`.
    pub fn up_set(&self, a: Element) -> ElementSet {
        self.elements().filter(|x| a.leq(*x)).collect()
    }

    /// Ideal / filter / bounded-sublattice flags of a subset.
    pub fn subset_class(&self, set: &ElementSet) -> SubsetClass {
        if set.is_empty() {
            return SubsetClass::default();
        }
        let join_closed = set
            .iter()
            .all(|x| set.iter().all(|y| set.contains(x | y)));
        let meet_closed = set
            .iter()
            .all(|x| set.iter().all(|y| set.contains(x & y)));
        let down_closed = set
            .iter()
            .all(|x| self.elements().filter(|y| y.leq(x)).all(|y| set.contains(y)));
        let up_closed = set
            .iter()
            .all(|x| self.elements().filter(|y| x.leq(*y)).all(|y| set.contains(y)));
        SubsetClass {
            is_ideal: down_closed && join_closed,
            is_filter: up_closed && meet_closed,
            is_bounded_sublattice: set.contains(self.bottom())
                && set.contains(self.top())
                && join_closed
                && meet_closed,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SubsetClass {
    pub is_ideal: bool,
    pub is_filter: bool,
    pub is_bounded_sublattice: bool,
}

/// A set of elements of one ambient algebra, kept sorted by bitmask.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElementSet {
    members: BTreeSet<Element>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: Element) -> bool {
        self.members.insert(x)
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.contains(&x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.members.iter().copied()
    }

    /// Least member under the lattice order, if one exists.
    pub fn least(&self) -> Option<Element> {
        let meet = self.iter().fold(Element(u32::MAX), |acc, x| acc & x);
        self.contains(meet).then_some(meet)
    }

    /// Join of all members (bottom for the empty set).
    pub fn join(&self) -> Element {
        self.iter().fold(Element::ZERO, |acc, x| acc | x)
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        ElementSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = Element;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Element>>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter().copied()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(bits: &[u32]) -> ElementSet {
        bits.iter().map(|&b| Element::new(b)).collect()
    }

    #[test]
    fn sizes_and_guards() {
        assert_eq!(FiniteBa::new(1).unwrap().size(), 2);
        assert_eq!(FiniteBa::new(2).unwrap().size(), 4);
        assert!(matches!(FiniteBa::new(21), Err(Error::Size { .. })));
        assert!(matches!(FiniteBa::new(0), Err(Error::Size { .. })));
        let b = FiniteBa::new(20).unwrap();
        assert_eq!(b.top().bits(), (1 << 20) - 1);
    }

    #[test]
    fn primitives_on_two_atoms() {
        let b = FiniteBa::new(2).unwrap();
        let (a0, a1) = (b.atom(0), b.atom(1));
        let p = b.primitives(a0, a1).unwrap();
        assert_eq!(p.join.bits(), 0b11);
        assert_eq!(p.meet, Element::ZERO);
        assert_eq!(p.complement, a1);
        assert!(b.primitives(a0, b.top()).unwrap().leq);
        assert!(!b.primitives(a1, a0).unwrap().leq);
        assert!(matches!(
            b.primitives(Element::new(4), a0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn subset_classes() {
        let b = FiniteBa::new(2).unwrap();
        let ideal = b.subset_class(&set(&[0, 1]));
        assert_eq!(
            ideal,
            SubsetClass {
                is_ideal: true,
                is_filter: false,
                is_bounded_sublattice: false
            }
        );
        let filter = b.subset_class(&set(&[1, 3]));
        assert_eq!(
            filter,
            SubsetClass {
                is_ideal: false,
                is_filter: true,
                is_bounded_sublattice: false
            }
        );
        let chain = b.subset_class(&set(&[0, 1, 3]));
        assert_eq!(
            chain,
            SubsetClass {
                is_ideal: false,
                is_filter: false,
                is_bounded_sublattice: true
            }
        );
        assert_eq!(b.subset_class(&ElementSet::new()), SubsetClass::default());
    }

    #[test]
    fn boolean_laws_exhaustive() {
        for n in 1..=4 {
            let b = FiniteBa::new(n).unwrap();
            for x in b.elements() {
                assert_eq!(b.complement(b.complement(x)), x);
                for y in b.elements() {
                    assert_eq!(b.complement(x | y), b.complement(x) & b.complement(y));
                    assert_eq!(b.complement(x & y), b.complement(x) | b.complement(y));
                }
            }
        }
    }

    #[test]
    fn principal_sets_and_ideals() {
        for n in 1..=3 {
            let b = FiniteBa::new(n).unwrap();
            for a in b.elements() {
                assert!(b.subset_class(&b.down_set(a)).is_ideal);
                assert!(b.subset_class(&b.up_set(a)).is_filter);
            }
        }
        // Every ideal is principal: enumerate all subsets of the 8-element algebra.
        let b = FiniteBa::new(3).unwrap();
        let mut ideals = 0;
        for mask in 1u32..(1 << 8) {
            let s: ElementSet = (0..8).filter(|e| mask >> e & 1 == 1).map(Element::new).collect();
            if b.subset_class(&s).is_ideal {
                ideals += 1;
                let top = s.join();
                assert!(s.contains(top));
                assert_eq!(s, b.down_set(top));
            }
        }
        assert_eq!(ideals, 8);
    }

    #[test]
    fn element_display() {
        assert_eq!(Element::new(0b101).to_string(), "{0,2}");
        assert_eq!(Element::ZERO.to_string(), "{}");
    }
}
