use super::{ModalAlgebra, ModalOperator};
use crate::ba::{Element, ElementSet, FiniteBa, MAX_ATOMS};
use crate::error::{Error, Result};

/// Bound on the atom count for exhaustive subalgebra search.
pub const MAX_SUBALGEBRA_ATOMS: usize = 4;
/// Bound on the target's atom count for exhaustive embedding search (`|B| ≤ 16`).
pub const MAX_EMBED_ATOMS: usize = 4;
/// Bound for [`all_algebras`]: `(2^n)^n` operators.
const MAX_ENUMERATED_ATOMS: usize = 4;

/// Packs the bits of `x` that sit under `mask` into the low bits, in order.
fn compress(x: u32, mask: u32) -> u32 {
    let mut out = 0;
    for (k, i) in Element::new(mask).atom_indices().enumerate() {
        out |= (x >> i & 1) << k;
    }
    out
}

impl ModalAlgebra {
    /// The quotient by the closed ideal `↓c`, computed as the relativization to
    /// `−c`: atoms of the quotient are the atoms below `−c` (in index order) and
    /// `g(y) = f(y) · −c`.
    pub fn quotient(&self, c: Element) -> Result<ModalAlgebra> {
        let b = self.base();
        b.element(c.bits())?;
        if self.f(c) != c {
            return Err(Error::Precondition(format!("{c} is not a closed element")));
        }
        if c == b.top() {
            return Err(Error::Trivial);
        }
        let rest = b.complement(c);
        let base = FiniteBa::new(rest.atom_count() as usize)?;
        let values: Vec<Element> = rest
            .atom_indices()
            .map(|i| Element::new(compress((self.op().atom_values()[i] & rest).bits(), rest.bits())))
            .collect();
        ModalAlgebra::new(base, ModalOperator::from_atom_values(&base, &values)?)
    }

    /// The projection `x ↦ x · −c` onto the quotient by `↓c`, re-indexed.
    pub fn project(&self, c: Element, x: Element) -> Element {
        let rest = self.base().complement(c);
        Element::new(compress((x & rest).bits(), rest.bits()))
    }

    /// All subalgebras. A Boolean subalgebra of a finite algebra is given by a
    /// partition of the atoms; it is a modal subalgebra iff `f` maps each block
    /// join to a union of blocks.
    pub fn subalgebras(&self) -> Result<Vec<Subalgebra>> {
        let n = self.n_atoms();
        if n > MAX_SUBALGEBRA_ATOMS {
            return Err(Error::size("atom count for subalgebra search", n, MAX_SUBALGEBRA_ATOMS));
        }
        let mut out = Vec::new();
        for blocks in set_partitions(n) {
            let is_union_of_blocks =
                |x: Element| blocks.iter().all(|&blk| (x & blk).is_zero() || blk.leq(x));
            if blocks.iter().all(|&blk| is_union_of_blocks(self.f(blk))) {
                let base = FiniteBa::new(blocks.len())?;
                let values: Vec<Element> = blocks
                    .iter()
                    .map(|&blk| {
                        let image = self.f(blk);
                        blocks
                            .iter()
                            .enumerate()
                            .filter(|(_, &other)| other.leq(image))
                            .fold(Element::ZERO, |acc, (k, _)| acc | base.atom(k))
                    })
                    .collect();
                let algebra = ModalAlgebra::new(base, ModalOperator::from_atom_values(&base, &values)?)?;
                out.push(Subalgebra { blocks, algebra });
            }
        }
        out.sort_by(|x, y| x.blocks.len().cmp(&y.blocks.len()).then_with(|| x.blocks.cmp(&y.blocks)));
        Ok(out)
    }

    /// Direct product; the atoms of `self` come first, those of `other` after.
    pub fn product(&self, other: &ModalAlgebra) -> Result<ModalAlgebra> {
        let n1 = self.n_atoms();
        let n = n1 + other.n_atoms();
        if n > MAX_ATOMS {
            return Err(Error::size("atom count of product", n, MAX_ATOMS));
        }
        let base = FiniteBa::new(n)?;
        let values: Vec<Element> = self
            .op()
            .atom_values()
            .iter()
            .copied()
            .chain(other.op().atom_values().iter().map(|v| Element::new(v.bits() << n1)))
            .collect();
        ModalAlgebra::new(base, ModalOperator::from_atom_values(&base, &values)?)
    }
}

/// A subalgebra, presented both as its atoms inside the parent (`blocks`) and as
/// a re-indexed algebra whose atom `k` is `blocks[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    pub blocks: Vec<Element>,
    pub algebra: ModalAlgebra,
}

impl Subalgebra {
    /// Image of a subalgebra element in the parent.
    pub fn embed(&self, y: Element) -> Element {
        y.atom_indices()
            .fold(Element::ZERO, |acc, k| acc | self.blocks[k])
    }

    /// The carrier as a set of parent elements.
    pub fn carrier(&self) -> ElementSet {
        self.algebra.base().elements().map(|y| self.embed(y)).collect()
    }
}

/// Partitions of `{0, …, n−1}` as block bitmasks, blocks ordered by least member.
fn set_partitions(n: usize) -> Vec<Vec<Element>> {
    // Restricted growth strings.
    fn go(i: usize, n: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Element>>) {
        if i == n {
            let mut blocks = vec![0u32; max];
            for (atom, &l) in labels.iter().enumerate() {
                blocks[l] |= 1 << atom;
            }
            out.push(blocks.into_iter().map(Element::new).collect());
            return;
        }
        for l in 0..=max {
            labels.push(l);
            go(i + 1, n, labels, max.max(l + 1), out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// Every modal algebra on `n_atoms` atoms (all `(2^n)^n` atom-value tables),
/// in increasing table order.
pub fn all_algebras(n_atoms: usize) -> Result<Vec<ModalAlgebra>> {
    if n_atoms > MAX_ENUMERATED_ATOMS {
        return Err(Error::size("atom count for operator enumeration", n_atoms, MAX_ENUMERATED_ATOMS));
    }
    let base = FiniteBa::new(n_atoms)?;
    let width = n_atoms as u32;
    let count = 1u64 << (width * width);
    Ok((0..count)
        .map(|code| {
            let values: Vec<Element> = (0..n_atoms)
                .map(|i| Element::new((code >> (width * i as u32)) as u32 & base.top().bits()))
                .collect();
            ModalAlgebra {
                base,
                op: ModalOperator { atom_values: values },
            }
        })
        .collect())
}

const MAX_KN: usize = 6;

/// `Kₙ` in closure form. As an interior algebra its open elements are the
/// chain `0, a₁, a₁+a₂, …, 1`; dualizing gives `f(aⱼ) = aⱼ + … + aₙ`.
pub fn build_kn(n: usize) -> Result<ModalAlgebra> {
    if n == 0 || n > MAX_KN {
        return Err(Error::size("K_n index", n, MAX_KN));
    }
    let base = FiniteBa::new(n)?;
    let top = base.top().bits();
    let values: Vec<Element> = (0..n)
        .map(|j| Element::new(top & !((1u32 << j) - 1)))
        .collect();
    ModalAlgebra::new(base, ModalOperator::from_atom_values(&base, &values)?)
}

/// Searches for an injective homomorphism `source → target`. Boolean
/// embeddings correspond to maps from target atoms onto source atoms; the image
/// of source atom `i` is the join of its preimage. Additivity makes it enough
/// to check `h(f(aᵢ)) = f(h(aᵢ))` on source atoms. Returns the images of the
/// source atoms for the first embedding found.
pub fn embeds(source: &ModalAlgebra, target: &ModalAlgebra) -> Result<Option<Vec<Element>>> {
    let (m, n) = (source.n_atoms(), target.n_atoms());
    if n > MAX_EMBED_ATOMS {
        return Err(Error::size("target atom count for embedding search", n, MAX_EMBED_ATOMS));
    }
    if m > n {
        return Ok(None);
    }
    let mut assignment = vec![0usize; n];
    loop {
        let mut images = vec![Element::ZERO; m];
        for (t, &s) in assignment.iter().enumerate() {
            images[s] = images[s] | target.base().atom(t);
        }
        if images.iter().all(|x| !x.is_zero()) {
            let h = |x: Element| {
                x.atom_indices()
                    .fold(Element::ZERO, |acc, i| acc | images[i])
            };
            let commutes = (0..m).all(|i| {
                let source_atom = source.base().atom(i);
                h(source.f(source_atom)) == target.f(images[i])
            });
            if commutes {
                return Ok(Some(images));
            }
        }
        // Next function target atoms → source atoms, little-endian counter.
        let mut k = 0;
        loop {
            if k == n {
                return Ok(None);
            }
            assignment[k] += 1;
            if assignment[k] < m {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}
