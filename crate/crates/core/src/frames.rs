//! Finite Kripke frames stored as adjacency bit-rows.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ExtremalKind;
use crate::verdict::Verdict;

pub const MAX_WORLDS: usize = 12;
/// Bound for brute-force canonical forms (`n!` relabelings).
pub const MAX_CANONICAL_WORLDS: usize = 7;
/// Bound for quasiorder enumeration.
pub const MAX_ENUM_QUASIORDER_WORLDS: usize = 5;
/// Bound for enumerating arbitrary relations (`2^(n²)` matrices).
pub const MAX_ENUM_RELATION_WORLDS: usize = 4;

/// A set of worlds as a bitmask.
pub type WorldSet = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame {
    n_worlds: usize,
    rows: Vec<WorldSet>,
}

/// The file format `{"worlds": n, "edges": [[i, j], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    pub worlds: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Frame {
    pub fn new(n_worlds: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_world_count(n_worlds)?;
        let mut rows = vec![0; n_worlds];
        for &(x, y) in edges {
            if x >= n_worlds || y >= n_worlds {
                return Err(Error::Domain(format!(
                    "edge ({x}, {y}) mentions a world outside 0..{n_worlds}"
                )));
            }
            rows[x] |= 1 << y;
        }
        Ok(Frame { n_worlds, rows })
    }

    /// Builds a frame from successor bitmasks, one per world.
    pub fn from_rows(rows: Vec<WorldSet>) -> Result<Self> {
        let n_worlds = rows.len();
        check_world_count(n_worlds)?;
        let all = full(n_worlds);
        if let Some(w) = rows.iter().position(|r| r & !all != 0) {
            return Err(Error::Domain(format!("row {w} has successors outside 0..{n_worlds}")));
        }
        Ok(Frame { n_worlds, rows })
    }

    pub fn identity(n_worlds: usize) -> Result<Self> {
        Frame::from_rows((0..n_worlds).map(|w| 1 << w).collect())
    }

    pub fn universal(n_worlds: usize) -> Result<Self> {
        Frame::from_rows(vec![full(n_worlds); n_worlds])
    }

    /// The chain `0 → 1 → … → n−1`, reflexive and transitive.
    pub fn chain(n_worlds: usize) -> Result<Self> {
        let all = full(n_worlds);
        Frame::from_rows((0..n_worlds).map(|w| all & !((1 << w) - 1)).collect())
    }

    pub fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    pub fn rows(&self) -> &[WorldSet] {
        &self.rows
    }

    /// `R(x)`, the successors of `x`.
    pub fn successors(&self, x: usize) -> WorldSet {
        self.rows[x]
    }

    pub fn all_worlds(&self) -> WorldSet {
        full(self.n_worlds)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_worlds;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.related(x, y))
            .collect()
    }

    pub fn converse(&self) -> Frame {
        let n = self.n_worlds;
        let rows = (0..n)
            .map(|y| {
                (0..n)
                    .filter(|&x| self.related(x, y))
                    .fold(0, |acc, x| acc | 1 << x)
            })
            .collect();
        Frame { n_worlds: n, rows }
    }

    /// Contains every pair of `other` (same world count).
    pub fn contains_relation(&self, other: &Frame) -> bool {
        self.n_worlds == other.n_worlds
            && self.rows.iter().zip(&other.rows).all(|(a, b)| b & !a == 0)
    }

    pub fn union(&self, other: &Frame) -> Result<Frame> {
        if self.n_worlds != other.n_worlds {
            return Err(Error::Domain("union of frames with different world counts".into()));
        }
        Frame::from_rows(self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect())
    }

    /// Relabels world `x` as `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Frame {
        let mut rows = vec![0; self.n_worlds];
        for (x, &px) in perm.iter().enumerate() {
            rows[px] = map_bits(self.rows[x], perm);
        }
        Frame {
            n_worlds: self.n_worlds,
            rows,
        }
    }

    pub fn is_quasiorder(&self) -> bool {
        self.condition(FrameCondition::Quasiorder)
            .map(|v| v.holds())
            .unwrap_or(false)
    }

    pub fn to_file(&self) -> FrameFile {
        FrameFile {
            worlds: self.n_worlds,
            edges: self.edges().into_iter().map(|(x, y)| [x, y]).collect(),
        }
    }

    pub fn from_file(file: &FrameFile) -> Result<Frame> {
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Frame::new(file.worlds, &edges)
    }
}

fn map_bits(set: WorldSet, perm: &[usize]) -> WorldSet {
    perm.iter()
        .enumerate()
        .filter(|&(y, _)| set >> y & 1 == 1)
        .fold(0, |acc, (_, &py)| acc | 1 << py)
}

pub(crate) fn members(set: WorldSet) -> impl Iterator<Item = usize> {
    (0..WorldSet::BITS as usize).filter(move |&i| set >> i & 1 == 1)
}

fn full(n: usize) -> WorldSet {
    ((1u64 << n) - 1) as WorldSet
}

fn check_world_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("a frame needs at least one world".into()));
    }
    if n > MAX_WORLDS {
        return Err(Error::size("world count", n, MAX_WORLDS));
    }
    Ok(())
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} worlds:", self.n_worlds)?;
        for (x, y) in self.edges() {
            write!(f, " {x}→{y}")?;
        }
        Ok(())
    }
}

/// First-order frame conditions, including the correspondents of the axiom catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameCondition {
    Serial,
    Reflexive,
    Transitive,
    Symmetric,
    /// `(xRy ∧ yRz) ⇒ (yRx ∨ zRy)`.
    B2,
    /// Every proper cluster seen from `x` is seen from all of `R(x)`: above any
    /// world, a proper cluster can only be the single final one (quasiorders only).
    Dum,
    /// Every cluster is simple (quasiorders only).
    Grz,
    /// Every world sees a world whose only successor is itself (quasiorders only).
    M,
    Convergent,
    /// `(xRy ∧ xRz) ⇒ (yRz ∨ zRy)`.
    Dot3,
    /// `(xRy ∧ x ≠ y ∧ xRz) ⇒ zRy`.
    R1,
    Directed,
    Quasiorder,
}

impl FrameCondition {
    pub const ALL: [FrameCondition; 13] = [
        FrameCondition::Serial,
        FrameCondition::Reflexive,
        FrameCondition::Transitive,
        FrameCondition::Symmetric,
        FrameCondition::B2,
        FrameCondition::Dum,
        FrameCondition::Grz,
        FrameCondition::M,
        FrameCondition::Convergent,
        FrameCondition::Dot3,
        FrameCondition::R1,
        FrameCondition::Directed,
        FrameCondition::Quasiorder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameCondition::Serial => "serial",
            FrameCondition::Reflexive => "reflexive",
            FrameCondition::Transitive => "transitive",
            FrameCondition::Symmetric => "symmetric",
            FrameCondition::B2 => "b2",
            FrameCondition::Dum => "dum",
            FrameCondition::Grz => "grz",
            FrameCondition::M => "m",
            FrameCondition::Convergent => "convergent",
            FrameCondition::Dot3 => "dot3",
            FrameCondition::R1 => "r1",
            FrameCondition::Directed => "directed",
            FrameCondition::Quasiorder => "quasiorder",
        }
    }

    /// Conditions whose reading assumes a reflexive transitive frame.
    pub fn needs_quasiorder(self) -> bool {
        matches!(self, FrameCondition::Dum | FrameCondition::Grz | FrameCondition::M)
    }
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FrameCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            ".2" | "g2" => "convergent",
            ".3" | "h3" => "dot3",
            ".1" => "m",
            other => other,
        };
        FrameCondition::ALL
            .into_iter()
            .find(|c| c.name() == alias)
            .ok_or_else(|| Error::Lookup {
                kind: "frame condition",
                name: s.to_string(),
            })
    }
}

impl Frame {
    /// Evaluates a frame condition exhaustively. On failure the witness lists
    /// the worlds of the first violating tuple.
    pub fn condition(&self, cond: FrameCondition) -> Result<Verdict<Vec<usize>>> {
        let n = self.n_worlds;
        let r = |x: usize, y: usize| self.related(x, y);
        let worlds = || 0..n;
        let first = |mut it: Box<dyn Iterator<Item = Vec<usize>> + '_>| Verdict::from(it.next());

        if cond.needs_quasiorder() && !self.is_quasiorder() {
            return Err(Error::Precondition(format!(
                "condition `{cond}` is only evaluated on quasiorders"
            )));
        }
        let verdict = match cond {
            FrameCondition::Serial => first(Box::new(
                worlds().filter(|&x| self.rows[x] == 0).map(|x| vec![x]),
            )),
            FrameCondition::Reflexive => first(Box::new(
                worlds().filter(|&x| !r(x, x)).map(|x| vec![x]),
            )),
            FrameCondition::Transitive => first(Box::new(triples(n).filter(
                move |&[x, y, z]| r(x, y) && r(y, z) && !r(x, z),
            ).map(|t| t.to_vec()))),
            FrameCondition::Symmetric => first(Box::new(pairs(n).filter(
                move |&[x, y]| r(x, y) && !r(y, x),
            ).map(|t| t.to_vec()))),
            FrameCondition::B2 => first(Box::new(triples(n).filter(
                move |&[x, y, z]| r(x, y) && r(y, z) && !(r(y, x) || r(z, y)),
            ).map(|t| t.to_vec()))),
            FrameCondition::Convergent => first(Box::new(triples(n).filter(
                move |&[x, y, z]| r(x, y) && r(x, z) && self.rows[y] & self.rows[z] == 0,
            ).map(|t| t.to_vec()))),
            FrameCondition::Dot3 => first(Box::new(triples(n).filter(
                move |&[x, y, z]| r(x, y) && r(x, z) && !(r(y, z) || r(z, y)),
            ).map(|t| t.to_vec()))),
            FrameCondition::R1 => first(Box::new(triples(n).filter(
                move |&[x, y, z]| r(x, y) && x != y && r(x, z) && !r(z, y),
            ).map(|t| t.to_vec()))),
            FrameCondition::Directed => first(Box::new(pairs(n).filter(
                move |&[x, y]| self.rows[x] & self.rows[y] == 0,
            ).map(|t| t.to_vec()))),
            FrameCondition::Quasiorder => {
                match self.condition(FrameCondition::Reflexive)? {
                    Verdict::Holds => self.condition(FrameCondition::Transitive)?,
                    fails => fails,
                }
            }
            FrameCondition::Grz => first(Box::new(pairs(n).filter(
                move |&[x, y]| x != y && r(x, y) && r(y, x),
            ).map(|t| t.to_vec()))),
            FrameCondition::Dum => {
                let proper = move |c: usize| worlds().any(|d| d != c && r(c, d) && r(d, c));
                first(Box::new(triples(n).filter(
                    move |&[x, d, c]| r(x, d) && r(x, c) && proper(c) && !r(d, c),
                ).map(|t| t.to_vec())))
            }
            FrameCondition::M => {
                let is_end = move |y: usize| self.rows[y] == 1 << y;
                first(Box::new(worlds().filter(
                    move |&x| !worlds().any(|y| r(x, y) && is_end(y)),
                ).map(|x| vec![x])))
            }
        };
        Ok(verdict)
    }
}

fn pairs(n: usize) -> impl Iterator<Item = [usize; 2]> {
    (0..n).flat_map(move |x| (0..n).map(move |y| [x, y]))
}

fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| [x, y, z])))
}

/// Clusters of a quasiorder with their induced partial order and levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPoset {
    /// Member sets, ordered by least member.
    pub clusters: Vec<WorldSet>,
    /// `order[c]` is the set of cluster indices `d` with `c ≤ d`.
    pub order: Vec<u32>,
    /// Length of the longest chain ending at each cluster, starting from 1.
    pub levels: Vec<usize>,
    pub depth: usize,
}

impl ClusterPoset {
    pub fn is_simple(&self, c: usize) -> bool {
        self.clusters[c].count_ones() == 1
    }

    /// Union of the clusters on a level.
    pub fn level_worlds(&self, level: usize) -> WorldSet {
        self.clusters
            .iter()
            .zip(&self.levels)
            .filter(|(_, &l)| l == level)
            .fold(0, |acc, (&c, _)| acc | c)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.clusters.len()).all(|c| {
            (0..self.clusters.len()).all(|d| self.order[c] >> d & 1 == 1 || self.order[d] >> c & 1 == 1)
        })
    }
}

impl Frame {
    pub fn cluster_poset(&self) -> Result<ClusterPoset> {
        if !self.is_quasiorder() {
            return Err(Error::Precondition("cluster poset requires a quasiorder".into()));
        }
        let n = self.n_worlds;
        let mut clusters: Vec<WorldSet> = Vec::new();
        let mut cluster_of = vec![usize::MAX; n];
        for x in 0..n {
            if cluster_of[x] != usize::MAX {
                continue;
            }
            let members = (0..n)
                .filter(|&y| self.related(x, y) && self.related(y, x))
                .fold(0, |acc, y| acc | 1 << y);
            for y in 0..n {
                if members >> y & 1 == 1 {
                    cluster_of[y] = clusters.len();
                }
            }
            clusters.push(members);
        }
        let k = clusters.len();
        let order: Vec<u32> = clusters
            .iter()
            .map(|&c| {
                let x = c.trailing_zeros() as usize;
                (0..k)
                    .filter(|&d| self.related(x, clusters[d].trailing_zeros() as usize))
                    .fold(0, |acc, d| acc | 1 << d)
            })
            .collect();
        // Longest chain ending at c: memoised over strict predecessors.
        let mut levels = vec![0usize; k];
        fn level(c: usize, order: &[u32], memo: &mut [usize]) -> usize {
            if memo[c] != 0 {
                return memo[c];
            }
            let best = (0..order.len())
                .filter(|&d| d != c && order[d] >> c & 1 == 1)
                .map(|d| level(d, order, memo))
                .max()
                .unwrap_or(0);
            memo[c] = best + 1;
            memo[c]
        }
        for c in 0..k {
            level(c, &order, &mut levels);
        }
        let depth = levels.iter().copied().max().unwrap_or(0);
        Ok(ClusterPoset {
            clusters,
            order,
            levels,
            depth,
        })
    }
}

/// A matched extremal shape: `u` is level one, `v` level two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtremalMatch {
    pub kind: ExtremalKind,
    pub u: WorldSet,
    pub v: WorldSet,
}

/// The relation of an extremal kind on levels `u` (lower) and `v` (upper).
pub fn extremal_relation(kind: ExtremalKind, n_worlds: usize, u: WorldSet, v: WorldSet) -> Result<Frame> {
    let rows = (0..n_worlds)
        .map(|x| {
            let mut row = 1 << x;
            let in_u = u >> x & 1 == 1;
            let in_v = v >> x & 1 == 1;
            if in_u {
                row |= v;
            }
            match kind {
                ExtremalKind::Ii => {}
                ExtremalKind::Iu => {
                    if in_v {
                        row |= v;
                    }
                }
                ExtremalKind::Ui => {
                    if in_u {
                        row |= u;
                    }
                }
                ExtremalKind::Uu => {
                    if in_u {
                        row |= u;
                    }
                    if in_v {
                        row |= v;
                    }
                }
            }
            row
        })
        .collect();
    Frame::from_rows(rows)
}

impl Frame {
    /// Every extremal kind whose formula equals the relation, with `U`/`V` the
    /// first and second level. Empty unless the frame is a quasiorder of depth two.
    pub fn classify_extremal(&self) -> Vec<ExtremalMatch> {
        let Ok(poset) = self.cluster_poset() else {
            return Vec::new();
        };
        if poset.depth != 2 {
            return Vec::new();
        }
        let u = poset.level_worlds(1);
        let v = poset.level_worlds(2);
        ExtremalKind::ALL
            .into_iter()
            .filter(|&kind| {
                extremal_relation(kind, self.n_worlds, u, v).is_ok_and(|f| &f == self)
            })
            .map(|kind| ExtremalMatch { kind, u, v })
            .collect()
    }

    /// Worlds `0..u_size` form the lower level `U`, the rest the upper level `V`.
    pub fn make_extremal(kind: ExtremalKind, u_size: usize, v_size: usize) -> Result<Frame> {
        if u_size == 0 || v_size == 0 {
            return Err(Error::Domain("both levels of an extremal frame must be nonempty".into()));
        }
        let n = u_size + v_size;
        check_world_count(n)?;
        let u = full(u_size);
        extremal_relation(kind, n, u, full(n) & !u)
    }

    /// The relabeling whose sorted edge list is lexicographically least.
    pub fn canonical_form(&self) -> Result<Frame> {
        let n = self.n_worlds;
        if n > MAX_CANONICAL_WORLDS {
            return Err(Error::size("world count for canonical form", n, MAX_CANONICAL_WORLDS));
        }
        let mut best: Option<(u64, Frame)> = None;
        for_each_permutation(n, |perm| {
            let g = self.relabel(perm);
            let key = edge_key(&g);
            if best.as_ref().is_none_or(|(k, _)| key > *k) {
                best = Some((key, g));
            }
        });
        Ok(best.expect("at least one permutation").1)
    }

    pub fn is_isomorphic(&self, other: &Frame) -> Result<bool> {
        if self.n_worlds != other.n_worlds {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }
}

/// Row-major adjacency bits with the first pair most significant. Among
/// frames with equally many edges, a larger key means a lexicographically
/// smaller sorted edge list.
fn edge_key(f: &Frame) -> u64 {
    let n = f.n_worlds;
    let mut key = 0u64;
    for x in 0..n {
        for y in 0..n {
            key = key << 1 | f.related(x, y) as u64;
        }
    }
    key
}

/// Heap's algorithm; calls `visit` once per permutation of `0..n`.
pub(crate) fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Constraints for [`enumerate_frames`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumConstraints {
    pub quasiorder: bool,
    pub max_depth: Option<usize>,
}

/// Pairwise non-isomorphic frames on `n_worlds` worlds, as canonical forms in
/// ascending order. A depth bound implies the quasiorder constraint.
pub fn enumerate_frames(n_worlds: usize, constraints: EnumConstraints) -> Result<Vec<Frame>> {
    check_world_count(n_worlds)?;
    let quasiorder = constraints.quasiorder || constraints.max_depth.is_some();
    let n = n_worlds;
    let mut seen = BTreeSet::new();
    if quasiorder {
        if n > MAX_ENUM_QUASIORDER_WORLDS {
            return Err(Error::size("world count for quasiorder enumeration", n, MAX_ENUM_QUASIORDER_WORLDS));
        }
        // Reflexive by construction: only off-diagonal bits vary.
        let off: Vec<(usize, usize)> = pairs(n)
            .filter(|&[x, y]| x != y)
            .map(|[x, y]| (x, y))
            .collect();
        for code in 0u64..(1u64 << off.len()) {
            let mut rows: Vec<WorldSet> = (0..n).map(|x| 1 << x).collect();
            for (k, &(x, y)) in off.iter().enumerate() {
                if code >> k & 1 == 1 {
                    rows[x] |= 1 << y;
                }
            }
            if !is_transitive_rows(&rows) {
                continue;
            }
            let frame = Frame { n_worlds: n, rows };
            if let Some(d) = constraints.max_depth {
                if frame.cluster_poset()?.depth > d {
                    continue;
                }
            }
            seen.insert(frame.canonical_form()?);
        }
    } else {
        if n > MAX_ENUM_RELATION_WORLDS {
            return Err(Error::size("world count for relation enumeration", n, MAX_ENUM_RELATION_WORLDS));
        }
        for frame in all_relations(n)? {
            seen.insert(frame.canonical_form()?);
        }
    }
    Ok(seen.into_iter().collect())
}

/// Every binary relation on `n_worlds` labelled worlds, in bit-code order.
pub fn all_relations(n_worlds: usize) -> Result<Vec<Frame>> {
    check_world_count(n_worlds)?;
    if n_worlds > MAX_ENUM_RELATION_WORLDS {
        return Err(Error::size("world count for relation enumeration", n_worlds, MAX_ENUM_RELATION_WORLDS));
    }
    let n = n_worlds;
    let row_mask = full(n) as u64;
    Ok((0u64..(1u64 << (n * n)))
        .map(|code| Frame {
            n_worlds: n,
            rows: (0..n).map(|x| ((code >> (n * x)) & row_mask) as WorldSet).collect(),
        })
        .collect())
}

/// Every quasiorder on `n_worlds` labelled worlds.
pub fn all_quasiorders(n_worlds: usize) -> Result<Vec<Frame>> {
    check_world_count(n_worlds)?;
    if n_worlds > MAX_ENUM_QUASIORDER_WORLDS {
        return Err(Error::size("world count for quasiorder enumeration", n_worlds, MAX_ENUM_QUASIORDER_WORLDS));
    }
    let n = n_worlds;
    let off: Vec<(usize, usize)> = pairs(n).filter(|&[x, y]| x != y).map(|[x, y]| (x, y)).collect();
    let mut out = Vec::new();
    for code in 0u64..(1u64 << off.len()) {
        let mut rows: Vec<WorldSet> = (0..n).map(|x| 1 << x).collect();
        for (k, &(x, y)) in off.iter().enumerate() {
            if code >> k & 1 == 1 {
                rows[x] |= 1 << y;
            }
        }
        if is_transitive_rows(&rows) {
            out.push(Frame { n_worlds: n, rows });
        }
    }
    Ok(out)
}

fn is_transitive_rows(rows: &[WorldSet]) -> bool {
    rows.iter().all(|&row| {
        members(row).all(|y| rows[y] & !row == 0)
    })
}
