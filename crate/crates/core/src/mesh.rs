//! Mesh patterns and mesh containment.
//!
//! A square `(a,b)` of a mesh over a pattern of length `k` is indexed by its
//! lower-left corner, `0 <= a, b <= k`. Relative to an occurrence with
//! positions `i_1 < ... < i_k` and sorted values `v_1 < ... < v_k` in a host of
//! length `n`, the square stands for the open region
//! `i_a < col < i_{a+1}`, `v_b < row < v_{b+1}` with sentinels
//! `i_0 = v_0 = 0` and `i_{k+1} = v_{k+1} = n + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::perm::{Occurrence, Permutation, Point, Symmetry};

/// Largest pattern length a [`Mesh`] can describe; `(k+1)^2` squares must fit
/// in 128 bits.
pub const MAX_MESH_K: usize = 10;

/// A unit square addressed by its lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeshSquare {
    pub col: usize,
    pub row: usize,
}

impl MeshSquare {
    pub const fn new(col: usize, row: usize) -> Self {
        MeshSquare { col, row }
    }

    /// Image of this square under a symmetry of a `k`-pattern diagram.
    pub fn transform(self, k: usize, sym: Symmetry) -> MeshSquare {
        match sym {
            Symmetry::Reverse => MeshSquare::new(k - self.col, self.row),
            Symmetry::Complement => MeshSquare::new(self.col, k - self.row),
            Symmetry::Inverse => MeshSquare::new(self.row, self.col),
        }
    }
}

impl fmt::Display for MeshSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

impl Serialize for MeshSquare {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.col, self.row].serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeshSquare {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [col, row] = <[usize; 2]>::deserialize(d)?;
        Ok(MeshSquare::new(col, row))
    }
}

/// A set of squares over `[0,k]^2`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mesh {
    k: usize,
    bits: u128,
}

impl Mesh {
    pub fn empty(k: usize) -> Result<Self> {
        if k > MAX_MESH_K {
            return Err(Error::BoundExceeded {
                what: "mesh pattern length",
                value: k,
                bound: MAX_MESH_K,
            });
        }
        Ok(Mesh { k, bits: 0 })
    }

    pub fn from_squares<I>(k: usize, squares: I) -> Result<Self>
    where
        I: IntoIterator<Item = MeshSquare>,
    {
        let mut mesh = Mesh::empty(k)?;
        for sq in squares {
            mesh.insert(sq)?;
        }
        Ok(mesh)
    }

    /// Convenience constructor from `(col,row)` pairs.
    pub fn from_pairs(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Mesh::from_squares(k, pairs.iter().map(|&(c, r)| MeshSquare::new(c, r)))
    }

    /// Every square of `[0,k]^2`.
    pub fn full(k: usize) -> Result<Self> {
        let mut mesh = Mesh::empty(k)?;
        mesh.bits = Self::all_bits(k);
        Ok(mesh)
    }

    /// The box `[1,k-1]^2`.
    pub fn boxed(k: usize) -> Result<Self> {
        let inner = (1..k).flat_map(|c| (1..k).map(move |r| MeshSquare::new(c, r)));
        Mesh::from_squares(k, inner)
    }

    pub(crate) fn from_bits(k: usize, bits: u128) -> Self {
        debug_assert!(k <= MAX_MESH_K && bits & !Self::all_bits(k) == 0);
        Mesh { k, bits }
    }

    fn all_bits(k: usize) -> u128 {
        let cells = (k + 1) * (k + 1);
        if cells == 128 {
            u128::MAX
        } else {
            (1u128 << cells) - 1
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    /// Bit position of a square; squares are ordered by `(col,row)`.
    #[inline]
    pub fn index(k: usize, sq: MeshSquare) -> usize {
        sq.col * (k + 1) + sq.row
    }

    #[inline]
    pub fn square_at(k: usize, index: usize) -> MeshSquare {
        MeshSquare::new(index / (k + 1), index % (k + 1))
    }

    pub fn check_square(k: usize, sq: MeshSquare) -> Result<()> {
        if sq.col > k || sq.row > k {
            return Err(Error::SquareOutOfRange {
                col: sq.col,
                row: sq.row,
                k,
            });
        }
        Ok(())
    }

    pub fn insert(&mut self, sq: MeshSquare) -> Result<()> {
        Self::check_square(self.k, sq)?;
        self.bits |= 1u128 << Self::index(self.k, sq);
        Ok(())
    }

    pub fn contains(&self, sq: MeshSquare) -> bool {
        sq.col <= self.k && sq.row <= self.k && self.bits >> Self::index(self.k, sq) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &Mesh) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersects(&self, other: &Mesh) -> bool {
        self.bits & other.bits != 0
    }

    pub fn union(&self, other: &Mesh) -> Mesh {
        Mesh::from_bits(self.k, self.bits | other.bits)
    }

    /// Squares in `(col,row)` lexicographic order.
    pub fn squares(&self) -> impl Iterator<Item = MeshSquare> + '_ {
        let k = self.k;
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(Mesh::square_at(k, i))
        })
    }

    pub fn transform(&self, sym: Symmetry) -> Mesh {
        let mut out = Mesh { k: self.k, bits: 0 };
        for sq in self.squares() {
            out.bits |= 1u128 << Self::index(self.k, sq.transform(self.k, sym));
        }
        out
    }
}

impl fmt::Debug for Mesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mesh(k={}, ", self.k)?;
        f.debug_set().entries(self.squares()).finish()?;
        f.write_str(")")
    }
}

/// A classical pattern together with a mesh of the same size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MeshPattern {
    pattern: Permutation,
    mesh: Mesh,
}

impl MeshPattern {
    pub fn new(pattern: Permutation, mesh: Mesh) -> Result<Self> {
        if mesh.k() != pattern.len() {
            return Err(Error::MeshSizeMismatch {
                mesh_k: mesh.k(),
                pattern_k: pattern.len(),
            });
        }
        Ok(MeshPattern { pattern, mesh })
    }

    /// The pattern with an empty mesh.
    pub fn classical(pattern: Permutation) -> Result<Self> {
        let mesh = Mesh::empty(pattern.len())?;
        Ok(MeshPattern { pattern, mesh })
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn k(&self) -> usize {
        self.pattern.len()
    }

    pub fn with_mesh(&self, mesh: Mesh) -> Result<Self> {
        MeshPattern::new(self.pattern.clone(), mesh)
    }

    pub fn transform(&self, sym: Symmetry) -> MeshPattern {
        MeshPattern {
            pattern: self.pattern.apply(sym),
            mesh: self.mesh.transform(sym),
        }
    }

    /// `<perm>:<c,r>;<c,r>;...`
    pub fn to_text(&self) -> String {
        let squares: Vec<String> = self
            .mesh
            .squares()
            .map(|s| format!("{},{}", s.col, s.row))
            .collect();
        format!("{}:{}", self.pattern.to_text(), squares.join(";"))
    }
}

impl fmt::Display for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeshPattern({})", self.to_text())
    }
}

impl FromStr for MeshPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (perm, squares) = s
            .split_once(':')
            .ok_or_else(|| parse_err(s, "expected `<perm>:<c,r>;...`"))?;
        let pattern: Permutation = perm.parse()?;
        let k = pattern.len();
        let mut mesh = Mesh::empty(k)?;
        if !squares.trim().is_empty() {
            for tok in squares.split(';') {
                let (c, r) = tok
                    .split_once(',')
                    .ok_or_else(|| parse_err(tok, "expected `col,row`"))?;
                let col = c
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(tok, "column is not an integer"))?;
                let row = r
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err(tok, "row is not an integer"))?;
                mesh.insert(MeshSquare::new(col, row))
                    .map_err(|e| parse_err(tok, e.to_string()))?;
            }
        }
        Ok(MeshPattern { pattern, mesh })
    }
}

#[derive(Serialize, Deserialize)]
struct MeshPatternRepr {
    perm: Permutation,
    mesh: Vec<MeshSquare>,
}

impl Serialize for MeshPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeshPatternRepr {
            perm: self.pattern.clone(),
            mesh: self.mesh.squares().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MeshPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MeshPatternRepr::deserialize(d)?;
        let k = repr.perm.len();
        let mesh = Mesh::from_squares(k, repr.mesh).map_err(serde::de::Error::custom)?;
        MeshPattern::new(repr.perm, mesh).map_err(serde::de::Error::custom)
    }
}

/// Sorted occurrence values plus the square each non-occurrence host point
/// falls into.
struct Slots {
    k: usize,
    /// `(square index, point)` for every host point outside the occurrence.
    cells: Vec<(usize, Point)>,
}

fn slots(host: &Permutation, occ: &Occurrence) -> Result<Slots> {
    occ.check_within(host.len())?;
    let k = occ.len();
    if k > MAX_MESH_K {
        return Err(Error::BoundExceeded {
            what: "occurrence length",
            value: k,
            bound: MAX_MESH_K,
        });
    }
    let positions = occ.indices();
    let mut values = occ.values(host);
    values.sort_unstable();
    let mut cells = Vec::with_capacity(host.len() - k);
    for pt in host.points() {
        let a = positions.partition_point(|&p| p < pt.col);
        if positions.get(a) == Some(&pt.col) {
            continue;
        }
        let b = values.partition_point(|&v| v < pt.row);
        cells.push((Mesh::index(k, MeshSquare::new(a, b)), pt));
    }
    Ok(Slots { k, cells })
}

/// Host points in the open region that `square` stands for.
pub fn region_contents(
    host: &Permutation,
    occ: &Occurrence,
    square: MeshSquare,
) -> Result<Vec<Point>> {
    Mesh::check_square(occ.len(), square)?;
    let s = slots(host, occ)?;
    let target = Mesh::index(s.k, square);
    Ok(s.cells
        .into_iter()
        .filter(|&(i, _)| i == target)
        .map(|(_, p)| p)
        .collect())
}

/// Number of host points in each region, indexed by [`Mesh::index`].
pub fn region_counts(host: &Permutation, occ: &Occurrence) -> Result<Vec<usize>> {
    let s = slots(host, occ)?;
    let mut counts = vec![0; (s.k + 1) * (s.k + 1)];
    for (i, _) in s.cells {
        counts[i] += 1;
    }
    Ok(counts)
}

/// The squares whose regions hold at least one host point.
pub fn occupied_regions(host: &Permutation, occ: &Occurrence) -> Result<Mesh> {
    let s = slots(host, occ)?;
    let bits = s.cells.iter().fold(0u128, |acc, &(i, _)| acc | 1 << i);
    Ok(Mesh::from_bits(s.k, bits))
}

/// Total number of host points lying in shaded regions.
pub fn violations(host: &Permutation, occ: &Occurrence, mesh: &Mesh) -> Result<usize> {
    if mesh.k() != occ.len() {
        return Err(Error::MeshSizeMismatch {
            mesh_k: mesh.k(),
            pattern_k: occ.len(),
        });
    }
    let s = slots(host, occ)?;
    Ok(s.cells.iter().filter(|&&(i, _)| mesh.bits >> i & 1 == 1).count())
}

/// Classical occurrences of `mp.pattern()` whose shaded regions are empty.
pub fn mesh_occurrences(host: &Permutation, mp: &MeshPattern) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for_each_mesh_occurrence(host, mp, |idx| {
        out.push(Occurrence::from_sorted(idx.to_vec()));
        true
    });
    out
}

pub fn contains_mesh(host: &Permutation, mp: &MeshPattern) -> bool {
    let mut found = false;
    for_each_mesh_occurrence(host, mp, |_| {
        found = true;
        false
    });
    found
}

fn for_each_mesh_occurrence<F>(host: &Permutation, mp: &MeshPattern, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    host.for_each_occurrence(&mp.pattern, |idx| {
        if mp.mesh.is_empty() {
            return visit(idx);
        }
        let occ = Occurrence::from_sorted(idx.to_vec());
        let occupied = occupied_regions(host, &occ).expect("occurrence fits its host");
        if occupied.intersects(&mp.mesh) {
            true
        } else {
            visit(idx)
        }
    });
}

pub fn transform(mp: &MeshPattern, sym: Symmetry) -> MeshPattern {
    mp.transform(sym)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn occ(v: &[usize]) -> Occurrence {
        Occurrence::new(v.to_vec()).unwrap()
    }

    fn mp(s: &str) -> MeshPattern {
        s.parse().unwrap()
    }

    #[test]
    fn region_contents_examples() {
        let host = p("42135");
        assert_eq!(
            region_contents(&host, &occ(&[2, 3, 4]), MeshSquare::new(0, 3)).unwrap(),
            vec![Point::new(1, 4)]
        );
        assert!(region_contents(&host, &occ(&[2, 3, 5]), MeshSquare::new(3, 0))
            .unwrap()
            .is_empty());
        // adjacent positions 2 and 3 leave column strip 2 empty
        for row in 0..=3 {
            assert!(region_contents(&host, &occ(&[1, 2, 3]), MeshSquare::new(1, row))
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn region_contents_errors() {
        let host = p("42135");
        assert!(region_contents(&host, &occ(&[2, 3, 6]), MeshSquare::new(0, 0)).is_err());
        assert!(region_contents(&host, &occ(&[2, 3, 4]), MeshSquare::new(4, 0)).is_err());
    }

    #[test]
    fn violations_examples() {
        let host = p("42135");
        let m = mp("213:0,3;1,2;1,3;3,0");
        assert_eq!(violations(&host, &occ(&[2, 3, 4]), m.mesh()).unwrap(), 1);
        assert_eq!(violations(&host, &occ(&[1, 2, 5]), m.mesh()).unwrap(), 0);
        let empty = Mesh::empty(3).unwrap();
        for o in host.occurrences(&p("213")) {
            assert_eq!(violations(&host, &o, &empty).unwrap(), 0);
        }
    }

    #[test]
    fn mesh_occurrences_examples() {
        let host = p("42135");
        let got: Vec<Vec<usize>> = mesh_occurrences(&host, &mp("213:0,3;1,2;1,3;3,0"))
            .iter()
            .map(|o| o.indices().to_vec())
            .collect();
        assert_eq!(got, vec![vec![1, 2, 5], vec![1, 3, 5], vec![1, 4, 5], vec![2, 3, 5]]);
        assert_eq!(mesh_occurrences(&host, &mp("213:")).len(), 5);

        let m = mp("231:1,1;2,0;3,1");
        assert_eq!(p("3412").occurrences(m.pattern()).len(), 2);
        assert!(mesh_occurrences(&p("3412"), &m).is_empty());
    }

    #[test]
    fn contains_mesh_examples() {
        assert!(contains_mesh(&p("42135"), &mp("213:0,3;1,2;1,3;3,0")));
        assert!(!contains_mesh(&p("42315"), &mp("132:")));
        assert!(!contains_mesh(&p("3412"), &mp("231:1,1;2,0;3,1")));
    }

    #[test]
    fn transform_examples() {
        assert_eq!(mp("231:1,1").transform(Symmetry::Reverse), mp("132:2,1"));
        assert_eq!(mp("231:1,1").transform(Symmetry::Complement), mp("213:1,2"));
        assert_eq!(mp("231:2,0").transform(Symmetry::Inverse), mp("312:0,2"));
    }

    #[test]
    fn text_format_is_canonical() {
        let m = mp("213:3,0;0,3;1,3;1,2");
        assert_eq!(m.to_text(), "213:0,3;1,2;1,3;3,0");
        assert_eq!(mp("213:").to_text(), "213:");
        assert!("213:4,0".parse::<MeshPattern>().is_err());
        assert!("213:1".parse::<MeshPattern>().is_err());
        assert!("213".parse::<MeshPattern>().is_err());
    }

    #[test]
    fn mesh_size_mismatch() {
        let m = Mesh::empty(2).unwrap();
        assert!(MeshPattern::new(p("123"), m).is_err());
        assert!(Mesh::empty(MAX_MESH_K + 1).is_err());
    }

    #[test]
    fn boxed_mesh() {
        let b = Mesh::boxed(3).unwrap();
        let sq: Vec<_> = b.squares().collect();
        assert_eq!(
            sq,
            vec![
                MeshSquare::new(1, 1),
                MeshSquare::new(1, 2),
                MeshSquare::new(2, 1),
                MeshSquare::new(2, 2)
            ]
        );
        assert!(Mesh::boxed(1).unwrap().is_empty());
        assert_eq!(Mesh::full(10).unwrap().len(), 121);
    }
}
