use std::collections::BTreeSet;
use std::fmt;

use super::{extremal_operator, ExtremalKind, ModalAlgebra};
use crate::ba::Element;
use crate::error::{Error, Result};

/// Membership of a closure algebra in one of the depth-two families.
///
/// Families overlap, so classification yields a set of labels. Each family
/// label carries one canonical parameter:
///
/// * `Ima(a)`: closed elements are `↓a ∪ {1}`; the largest such `a`.
/// * `Fma(0)` / `FmaProper(a)`: closed elements are `{0} ∪ ↑a` with `a ≠ 1`;
///   proper when `a ≠ 0`. The two-element algebra is `Fma(0)`.
/// * `Mma(a)`: closed elements are `{0, a, 1}`, `a ≠ 0`; the discriminator is `Mma(1)`.
/// * `Gma(b)`: `f(x) = x` below `b`, `b + x` elsewhere; the identity is `Gma(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    Ima(Element),
    Fma(Element),
    FmaProper(Element),
    Mma(Element),
    Gma(Element),
    Dma,
    Identity,
}

impl ClassLabel {
    pub fn family(&self) -> &'static str {
        match self {
            ClassLabel::Ima(_) => "IMA",
            ClassLabel::Fma(_) => "FMA",
            ClassLabel::FmaProper(_) => "FMA_proper",
            ClassLabel::Mma(_) => "MMA",
            ClassLabel::Gma(_) => "GMA",
            ClassLabel::Dma => "DMA",
            ClassLabel::Identity => "IDENTITY",
        }
    }

    pub fn parameter(&self) -> Option<Element> {
        match *self {
            ClassLabel::Ima(a)
            | ClassLabel::Fma(a)
            | ClassLabel::FmaProper(a)
            | ClassLabel::Mma(a)
            | ClassLabel::Gma(a) => Some(a),
            ClassLabel::Dma | ClassLabel::Identity => None,
        }
    }

    /// Whether this label places the algebra in the family built by `kind`
    /// (`ui` covers both filter-algebra labels).
    pub fn matches_kind(&self, kind: ExtremalKind) -> bool {
        matches!(
            (self, kind),
            (ClassLabel::Ima(_), ExtremalKind::Iu)
                | (ClassLabel::Fma(_) | ClassLabel::FmaProper(_), ExtremalKind::Ui)
                | (ClassLabel::Mma(_), ExtremalKind::Uu)
                | (ClassLabel::Gma(_), ExtremalKind::Ii)
        )
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some(p) => write!(f, "{}({p})", self.family()),
            None => f.write_str(self.family()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrreducibilityKind {
    /// The two-element algebra.
    TwoElement,
    Simple,
    SubdirectlyIrreducible,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Irreducibility {
    pub kind: IrreducibilityKind,
    /// Least nonzero closed element, present exactly when the algebra is SI.
    pub witness: Option<Element>,
}

impl Irreducibility {
    pub fn is_si(&self) -> bool {
        self.kind != IrreducibilityKind::Neither
    }

    pub fn is_simple(&self) -> bool {
        matches!(
            self.kind,
            IrreducibilityKind::TwoElement | IrreducibilityKind::Simple
        )
    }
}

impl fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            IrreducibilityKind::TwoElement => "two-element (simple)",
            IrreducibilityKind::Simple => "simple",
            IrreducibilityKind::SubdirectlyIrreducible => "subdirectly irreducible",
            IrreducibilityKind::Neither => "not subdirectly irreducible",
        };
        match self.witness {
            Some(w) => write!(f, "{name}, least nonzero closed element {w}"),
            None => f.write_str(name),
        }
    }
}

impl ModalAlgebra {
    fn is_extremal(&self, kind: ExtremalKind, param: Element) -> bool {
        extremal_operator(kind, self.base(), param).is_ok_and(|op| &op == self.op())
    }

    /// Every family label the algebra satisfies; empty unless `f` is a closure operator.
    pub fn classify(&self) -> BTreeSet<ClassLabel> {
        let mut labels = BTreeSet::new();
        if !self.is_closure() {
            return labels;
        }
        let b = self.base();
        let top = b.top();
        let values = self.op().atom_values();
        let identity = self.is_identity();

        if identity {
            labels.insert(ClassLabel::Identity);
        }
        if self.is_discriminator() {
            labels.insert(ClassLabel::Dma);
        }

        // iu: atoms below a are fixed, the others go to 1.
        let fixed = b
            .atoms()
            .enumerate()
            .filter(|&(i, atom)| values[i] == atom)
            .fold(Element::ZERO, |acc, (_, atom)| acc | atom);
        if self.is_extremal(ExtremalKind::Iu, fixed) {
            labels.insert(ClassLabel::Ima(fixed));
        }

        // ui: every atom value is a + atom, so a is their meet (for two or more atoms).
        if identity {
            labels.insert(ClassLabel::Fma(Element::ZERO));
        } else {
            let a = values.iter().fold(top, |acc, &v| acc & v);
            if a != top && self.is_extremal(ExtremalKind::Ui, a) {
                labels.insert(if a.is_zero() {
                    ClassLabel::Fma(a)
                } else {
                    ClassLabel::FmaProper(a)
                });
            }
        }

        // uu: atoms below a go to a, the others to 1.
        let not_top = b
            .atoms()
            .enumerate()
            .filter(|&(i, _)| values[i] != top)
            .fold(Element::ZERO, |acc, (_, atom)| acc | atom);
        let a = if not_top.is_zero() { top } else { not_top };
        if self.is_extremal(ExtremalKind::Uu, a) {
            labels.insert(ClassLabel::Mma(a));
        }

        // ii: atoms below b are fixed; the identity is reported with b = 0.
        let b_param = if identity { Element::ZERO } else { fixed };
        if self.is_extremal(ExtremalKind::Ii, b_param) {
            labels.insert(ClassLabel::Gma(b_param));
        }
        labels
    }

    /// Subdirect irreducibility via the least nonzero closed element.
    pub fn irreducibility(&self) -> Result<Irreducibility> {
        if !self.is_closure() {
            return Err(Error::Precondition(
                "irreducibility is defined here for closure algebras only".into(),
            ));
        }
        // Every nonzero closed x lies above f(atom) for some atom below x, and
        // the meet of the f(atom) is closed when nonzero; so it is the least
        // nonzero closed element if and only if one exists.
        let top = self.base().top();
        let least = self
            .op()
            .atom_values()
            .iter()
            .fold(top, |acc, &v| acc & v);
        let verdict = if least.is_zero() {
            Irreducibility {
                kind: IrreducibilityKind::Neither,
                witness: None,
            }
        } else {
            let kind = if self.n_atoms() == 1 {
                IrreducibilityKind::TwoElement
            } else if least == top {
                IrreducibilityKind::Simple
            } else {
                IrreducibilityKind::SubdirectlyIrreducible
            };
            Irreducibility {
                kind,
                witness: Some(least),
            }
        };
        Ok(verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ba::{ElementSet, FiniteBa};
    use crate::operators::{all_algebras, ModalOperator};

    fn e(bits: u32) -> Element {
        Element::new(bits)
    }

    fn labels(a: &ModalAlgebra) -> Vec<String> {
        a.classify().iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn chain_algebra_is_in_all_four_families() {
        let f2 = ModalAlgebra::from_atom_values(2, &[1, 3]).unwrap();
        let expected: BTreeSet<ClassLabel> = [
            ClassLabel::Ima(e(1)),
            ClassLabel::FmaProper(e(1)),
            ClassLabel::Mma(e(1)),
            ClassLabel::Gma(e(1)),
        ]
        .into();
        assert_eq!(f2.classify(), expected);
    }

    #[test]
    fn discriminator_and_identity_labels() {
        let b3 = FiniteBa::new(3).unwrap();
        let disc = ModalAlgebra::new(b3, ModalOperator::discriminator(&b3)).unwrap();
        let expected: BTreeSet<ClassLabel> =
            [ClassLabel::Dma, ClassLabel::Ima(e(0)), ClassLabel::Mma(e(7))].into();
        assert_eq!(disc.classify(), expected);

        let b2 = FiniteBa::new(2).unwrap();
        let id = ModalAlgebra::new(b2, ModalOperator::identity(&b2)).unwrap();
        let expected: BTreeSet<ClassLabel> = [
            ClassLabel::Identity,
            ClassLabel::Ima(e(3)),
            ClassLabel::Fma(e(0)),
            ClassLabel::Gma(e(0)),
        ]
        .into();
        assert_eq!(id.classify(), expected);

        assert_eq!(
            labels(&ModalAlgebra::two()),
            vec!["IMA({0})", "FMA({})", "MMA({0})", "GMA({})", "DMA", "IDENTITY"]
        );
    }

    #[test]
    fn non_closure_gets_no_labels() {
        let a = ModalAlgebra::from_atom_values(2, &[2, 1]).unwrap();
        assert!(a.classify().is_empty());
        assert!(matches!(a.irreducibility(), Err(Error::Precondition(_))));
    }

    /// Closed-set characterisations, checked by scanning all parameters.
    fn families_by_closed_sets(a: &ModalAlgebra) -> BTreeSet<&'static str> {
        let b = a.base();
        let closed = a.closed_elements();
        let mut out = BTreeSet::new();
        let with = |base: ElementSet, extra: &[Element]| -> ElementSet {
            base.iter().chain(extra.iter().copied()).collect()
        };
        for p in b.elements() {
            if with(b.down_set(p), &[b.top()]) == closed {
                out.insert("IMA");
            }
            if p != b.top() && with(b.up_set(p), &[Element::ZERO]) == closed {
                out.insert("FMA");
            }
            if !p.is_zero() && closed == [Element::ZERO, p, b.top()].into_iter().collect() {
                out.insert("MMA");
            }
            let gma_fits = b.elements().all(|x| {
                let expected = if x.leq(p) { x } else { p | x };
                a.f(x) == expected
            });
            if gma_fits {
                out.insert("GMA");
            }
        }
        if a.n_atoms() == 1 {
            out.insert("FMA");
        }
        out
    }

    #[test]
    fn recognizer_agrees_with_closed_set_definitions() {
        for n in 1..=3 {
            for a in all_algebras(n).unwrap().into_iter().filter(|a| a.is_closure()) {
                let recognized: BTreeSet<&str> = a
                    .classify()
                    .iter()
                    .filter(|l| l.parameter().is_some())
                    .map(|l| match l.family() {
                        "FMA_proper" => "FMA",
                        other => other,
                    })
                    .collect();
                assert_eq!(recognized, families_by_closed_sets(&a), "{a}");
            }
        }
    }

    #[test]
    fn recognizer_agrees_with_constructors() {
        for n in 1..=4 {
            let b = FiniteBa::new(n).unwrap();
            for kind in ExtremalKind::ALL {
                for p in b.elements() {
                    // uu needs a ≠ 0; a filter algebra needs F ≠ {1} unless |B| = 2.
                    if (kind == ExtremalKind::Uu && p.is_zero())
                        || (kind == ExtremalKind::Ui && p == b.top() && n > 1)
                    {
                        continue;
                    }
                    let a = ModalAlgebra::new(b, extremal_operator(kind, &b, p).unwrap()).unwrap();
                    assert!(
                        a.classify().iter().any(|l| l.matches_kind(kind)),
                        "{kind} at {p} on {n} atoms"
                    );
                }
            }
        }
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = ModalAlgebra::from_atom_values(2, &[1, 3]).unwrap();
        let v = f2.irreducibility().unwrap();
        assert_eq!(v.kind, IrreducibilityKind::SubdirectlyIrreducible);
        assert_eq!(v.witness, Some(e(1)));
        assert!(!v.is_simple());

        let b2 = FiniteBa::new(2).unwrap();
        let id = ModalAlgebra::new(b2, ModalOperator::identity(&b2)).unwrap();
        assert_eq!(id.irreducibility().unwrap().kind, IrreducibilityKind::Neither);

        for n in 2..=5 {
            let b = FiniteBa::new(n).unwrap();
            let disc = ModalAlgebra::new(b, ModalOperator::discriminator(&b)).unwrap();
            assert_eq!(disc.irreducibility().unwrap().kind, IrreducibilityKind::Simple);
        }
        assert_eq!(
            ModalAlgebra::two().irreducibility().unwrap().kind,
            IrreducibilityKind::TwoElement
        );
    }

    #[test]
    fn irreducibility_agrees_with_closed_element_scan() {
        for n in 1..=3 {
            for a in all_algebras(n).unwrap().into_iter().filter(|a| a.is_closure()) {
                let nonzero: ElementSet =
                    a.closed_elements().iter().filter(|x| !x.is_zero()).collect();
                let v = a.irreducibility().unwrap();
                assert_eq!(v.witness, nonzero.least());
                let simple = a.closed_elements().len() == 2;
                assert_eq!(v.is_simple(), simple);
                if let Some(w) = v.witness {
                    assert!(nonzero.iter().all(|x| w.leq(x)));
                }
            }
        }
    }
}
