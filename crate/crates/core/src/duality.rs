//! Finite Jónsson–Tarski duality: complex algebras of frames and canonical
//! frames of algebras. Ultrafilters of a finite algebra are principal, so the
//! canonical frame lives on atoms.

use serde::{Deserialize, Serialize};

use crate::ba::{Element, FiniteBa};
use crate::error::{Error, Result};
use crate::frames::{for_each_permutation, Frame, MAX_WORLDS};
use crate::operators::{ModalAlgebra, ModalOperator};

/// Bound for the permutation search in [`algebras_isomorphic`].
pub const MAX_ISO_ATOMS: usize = 7;

/// The file format `{"atoms": n, "f_on_atoms": [bits, …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub atoms: usize,
    pub f_on_atoms: Vec<u32>,
}

impl AlgebraFile {
    pub fn from_algebra(a: &ModalAlgebra) -> Self {
        AlgebraFile {
            atoms: a.n_atoms(),
            f_on_atoms: a.op().atom_values().iter().map(|v| v.bits()).collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<ModalAlgebra> {
        ModalAlgebra::from_atom_values(self.atoms, &self.f_on_atoms)
    }
}

/// `Cm(F)`: the powerset of the worlds with `⟨R⟩X = {x : R(x) ∩ X ≠ ∅}`.
/// On the atom `{w}` this is the set of predecessors of `w`.
pub fn complex_algebra(frame: &Frame) -> Result<ModalAlgebra> {
    let n = frame.n_worlds();
    let base = FiniteBa::new(n)?;
    let values: Vec<Element> = (0..n)
        .map(|w| {
            let preds = (0..n)
                .filter(|&x| frame.related(x, w))
                .fold(0u32, |acc, x| acc | 1 << x);
            Element::new(preds)
        })
        .collect();
    let op = ModalOperator::from_atom_values(&base, &values)?;
    ModalAlgebra::new(base, op)
}

/// The canonical frame on atoms: `i R j` iff `aᵢ ≤ f(aⱼ)`.
pub fn canonical_frame(a: &ModalAlgebra) -> Result<Frame> {
    let n = a.n_atoms();
    if n > MAX_WORLDS {
        return Err(Error::size("atom count for a canonical frame", n, MAX_WORLDS));
    }
    let values = a.op().atom_values();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| values[j].contains_atom(i))
                .fold(0u32, |acc, j| acc | 1 << j)
        })
        .collect();
    Frame::from_rows(rows)
}

/// Searches for an atom bijection `π` with `π(f_A(aᵢ)) = f_B(a_{π(i)})`.
/// Returns the first such `π` in permutation order.
pub fn algebras_isomorphic(a: &ModalAlgebra, b: &ModalAlgebra) -> Result<Option<Vec<usize>>> {
    let n = a.n_atoms();
    let limit = n.max(b.n_atoms());
    if limit > MAX_ISO_ATOMS {
        return Err(Error::size("atom count for isomorphism search", limit, MAX_ISO_ATOMS));
    }
    if n != b.n_atoms() {
        return Ok(None);
    }
    let fa = a.op().atom_values();
    let fb = b.op().atom_values();
    let counts = |f: &[Element]| {
        let mut c: Vec<u32> = f.iter().map(|v| v.atom_count()).collect();
        c.sort_unstable();
        c
    };
    if counts(fa) != counts(fb) {
        return Ok(None);
    }
    let mut found = None;
    for_each_permutation(n, |perm| {
        if found.is_some() {
            return;
        }
        let transport = |x: Element| {
            x.atom_indices().fold(0u32, |acc, i| acc | 1 << perm[i])
        };
        if (0..n).all(|i| transport(fa[i]) == fb[perm[i]].bits()) {
            found = Some(perm.to_vec());
        }
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{all_algebras, extremal_operator, ExtremalKind};

    fn f2() -> Frame {
        Frame::new(2, &[(0, 0), (0, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn complex_algebra_examples() {
        let disc = complex_algebra(&Frame::universal(2).unwrap()).unwrap();
        assert!(disc.is_discriminator());
        let cm = complex_algebra(&f2()).unwrap();
        assert_eq!(cm, ModalAlgebra::from_atom_values(2, &[0b01, 0b11]).unwrap());
        assert!(complex_algebra(&Frame::identity(4).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn diamond_matches_definition() {
        for frame in crate::frames::all_relations(3).unwrap() {
            let cm = complex_algebra(&frame).unwrap();
            for x in 0u32..8 {
                let direct = (0..3)
                    .filter(|&w| frame.successors(w) & x != 0)
                    .fold(0u32, |acc, w| acc | 1 << w);
                assert_eq!(cm.f(Element::new(x)).bits(), direct);
            }
        }
    }

    #[test]
    fn canonical_frame_examples() {
        let ba = FiniteBa::new(2).unwrap();
        let ui = extremal_operator(ExtremalKind::Ui, &ba, ba.atom(0)).unwrap();
        let frame = canonical_frame(&ModalAlgebra::new(ba, ui).unwrap()).unwrap();
        assert_eq!(frame, f2());
        let ba3 = FiniteBa::new(3).unwrap();
        let disc = ModalAlgebra::new(ba3, ModalOperator::discriminator(&ba3)).unwrap();
        assert_eq!(canonical_frame(&disc).unwrap(), Frame::universal(3).unwrap());
        let id = ModalAlgebra::new(ba3, ModalOperator::identity(&ba3)).unwrap();
        assert_eq!(canonical_frame(&id).unwrap(), Frame::identity(3).unwrap());
    }

    #[test]
    fn isomorphism_examples() {
        let f2plus = ModalAlgebra::from_atom_values(2, &[0b01, 0b11]).unwrap();
        let cm = complex_algebra(&f2()).unwrap();
        assert_eq!(algebras_isomorphic(&f2plus, &cm).unwrap(), Some(vec![0, 1]));
        let id = ModalAlgebra::from_atom_values(2, &[0b01, 0b10]).unwrap();
        let disc = ModalAlgebra::from_atom_values(2, &[0b11, 0b11]).unwrap();
        assert_eq!(algebras_isomorphic(&id, &disc).unwrap(), None);
        let swapped = ModalAlgebra::from_atom_values(2, &[0b11, 0b10]).unwrap();
        assert_eq!(algebras_isomorphic(&f2plus, &swapped).unwrap(), Some(vec![1, 0]));
        let big = ModalAlgebra::from_atom_values(8, &[1, 2, 4, 8, 16, 32, 64, 128]).unwrap();
        assert!(algebras_isomorphic(&big, &big).is_err());
    }

    #[test]
    fn round_trips() {
        for a in all_algebras(3).unwrap() {
            let back = complex_algebra(&canonical_frame(&a).unwrap()).unwrap();
            assert_eq!(back, a);
        }
        for frame in crate::frames::all_relations(3).unwrap() {
            let back = canonical_frame(&complex_algebra(&frame).unwrap()).unwrap();
            assert_eq!(back, frame);
        }
    }

    #[test]
    fn converse_gives_conjugate() {
        for frame in crate::frames::all_relations(3).unwrap() {
            let cm = complex_algebra(&frame).unwrap();
            let conv = complex_algebra(&frame.converse()).unwrap();
            assert!(cm.conjugate_check(conv.op()).unwrap().holds(), "{frame}");
        }
    }

    #[test]
    fn algebra_file_round_trip() {
        let json = r#"{"atoms": 2, "f_on_atoms": [1, 3]}"#;
        let file: AlgebraFile = serde_json::from_str(json).unwrap();
        let a = file.to_algebra().unwrap();
        assert_eq!(AlgebraFile::from_algebra(&a), file);
    }
}
