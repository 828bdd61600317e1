//! Enclosed diagonals and the superfluous-mesh criterion.
//!
//! An enclosed diagonal is a run of `h` squares along a line of slope `+1`
//! or `-1` such that the `h-1` corners shared by consecutive squares are
//! points of the pattern and the two outer corners are not. For `h = 1` the
//! requirement is that none of the four corners is a point. A mesh is
//! superfluous, meaning the mesh pattern is avoided by exactly the
//! permutations avoiding its underlying classical pattern, precisely when it
//! contains no such run.
//!
//! Descending runs use squares `(i+x, j-x)` with interior corners at
//! `(i+x, j-x+1)`, so a run touches each of its points at the shared corner.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::mesh::{Mesh, MeshPattern, MeshSquare};
use crate::perm::{Permutation, Symmetry};

/// Slope of a diagonal: `+1` ascending, `-1` descending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Ascending,
    Descending,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Ascending => 1,
            Direction::Descending => -1,
        }
    }

    fn from_sign(eps: i64) -> Option<Self> {
        match eps {
            1 => Some(Direction::Ascending),
            -1 => Some(Direction::Descending),
            _ => None,
        }
    }
}

/// A candidate or enclosed diagonal `((i,j), eps, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnclosedDiagonal {
    pub anchor: MeshSquare,
    pub direction: Direction,
    pub length: usize,
}

impl EnclosedDiagonal {
    /// Builds a diagonal, normalising `h = 1` to the ascending direction.
    pub fn new(anchor: MeshSquare, direction: Direction, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::Precondition("diagonal length must be at least 1".into()));
        }
        if direction == Direction::Descending && anchor.row + 1 < length {
            return Err(Error::Precondition(format!(
                "descending diagonal from {anchor} of length {length} leaves the first quadrant"
            )));
        }
        let direction = if length == 1 {
            Direction::Ascending
        } else {
            direction
        };
        Ok(EnclosedDiagonal {
            anchor,
            direction,
            length,
        })
    }

    pub fn is_singleton(&self) -> bool {
        self.length == 1
    }

    /// The `h` squares of the run, starting from the anchor.
    pub fn squares(&self) -> Vec<MeshSquare> {
        let (i, j) = (self.anchor.col, self.anchor.row);
        (0..self.length)
            .map(|x| match self.direction {
                Direction::Ascending => MeshSquare::new(i + x, j + x),
                Direction::Descending => MeshSquare::new(i + x, j - x),
            })
            .collect()
    }

    pub fn mesh(&self, k: usize) -> Result<Mesh> {
        Mesh::from_squares(k, self.squares())
    }

    /// Image under a symmetry of a `k`-pattern diagram.
    pub fn transform(&self, k: usize, sym: Symmetry) -> EnclosedDiagonal {
        let squares: Vec<MeshSquare> = self
            .squares()
            .into_iter()
            .map(|s| s.transform(k, sym))
            .collect();
        let flips = matches!(sym, Symmetry::Reverse | Symmetry::Complement);
        let direction = match (self.length, flips, self.direction) {
            (1, _, _) => Direction::Ascending,
            (_, false, d) => d,
            (_, true, Direction::Ascending) => Direction::Descending,
            (_, true, Direction::Descending) => Direction::Ascending,
        };
        let anchor = *squares.iter().min().expect("length >= 1");
        EnclosedDiagonal {
            anchor,
            direction,
            length: self.length,
        }
    }
}

impl fmt::Display for EnclosedDiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({},{}),{:+},{})",
            self.anchor.col,
            self.anchor.row,
            self.direction.sign(),
            self.length
        )
    }
}

impl FromStr for EnclosedDiagonal {
    type Err = Error;

    /// Accepts `((i,j),eps,h)` or the bare `i,j,eps,h`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !"() ".contains(*c)).collect();
        let parts: Vec<&str> = cleaned.split(',').collect();
        if parts.len() != 4 {
            return Err(parse_err(s, "expected ((i,j),eps,h)"));
        }
        let num = |t: &str| {
            t.parse::<i64>()
                .map_err(|_| parse_err(t, "expected an integer"))
        };
        let (i, j, eps, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?, num(parts[3])?);
        if i < 0 || j < 0 || h < 1 {
            return Err(parse_err(s, "anchor must be non-negative and h >= 1"));
        }
        let direction = Direction::from_sign(eps).ok_or_else(|| parse_err(parts[2], "eps must be +1 or -1"))?;
        EnclosedDiagonal::new(MeshSquare::new(i as usize, j as usize), direction, h as usize)
            .map_err(|e| parse_err(s, e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct DiagonalRepr {
    anchor: [usize; 2],
    eps: i8,
    h: usize,
    squares: Vec<MeshSquare>,
}

impl Serialize for EnclosedDiagonal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DiagonalRepr {
            anchor: [self.anchor.col, self.anchor.row],
            eps: self.direction.sign(),
            h: self.length,
            squares: self.squares(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EnclosedDiagonal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DiagonalRepr::deserialize(d)?;
        let direction = Direction::from_sign(r.eps.into())
            .ok_or_else(|| serde::de::Error::custom("eps must be +1 or -1"))?;
        EnclosedDiagonal::new(MeshSquare::new(r.anchor[0], r.anchor[1]), direction, r.h)
            .map_err(serde::de::Error::custom)
    }
}

/// Every diagonal that would be enclosed if all of its squares were shaded.
///
/// Order: ascending multi-square runs, descending multi-square runs, then
/// singletons, each group sorted by anchor.
pub fn candidate_diagonals(p: &Permutation) -> Vec<EnclosedDiagonal> {
    let k = p.len();
    let mut out = Vec::new();
    // ascending: outer corners (i,j), (i+h,j+h); interior (i+x,j+x)
    for i in 0..=k {
        for j in 0..=k {
            if p.has_point(i, j) {
                continue;
            }
            let mut h = 1;
            while p.has_point(i + h, j + h) {
                h += 1;
            }
            if h >= 2 {
                out.push(EnclosedDiagonal {
                    anchor: MeshSquare::new(i, j),
                    direction: Direction::Ascending,
                    length: h,
                });
            }
        }
    }
    // descending: outer corners (i,j+1), (i+h,j-h+1); interior (i+x,j-x+1)
    for i in 0..=k {
        for j in 0..=k {
            if p.has_point(i, j + 1) {
                continue;
            }
            let mut h = 1;
            while h <= j && p.has_point(i + h, j + 1 - h) {
                h += 1;
            }
            if h >= 2 {
                out.push(EnclosedDiagonal {
                    anchor: MeshSquare::new(i, j),
                    direction: Direction::Descending,
                    length: h,
                });
            }
        }
    }
    for i in 0..=k {
        for j in 0..=k {
            if square_touches_graph(p, MeshSquare::new(i, j)) {
                continue;
            }
            out.push(EnclosedDiagonal {
                anchor: MeshSquare::new(i, j),
                direction: Direction::Ascending,
                length: 1,
            });
        }
    }
    out
}

/// Whether some corner of the square is a point of the graph.
pub fn square_touches_graph(p: &Permutation, sq: MeshSquare) -> bool {
    let (i, j) = (sq.col, sq.row);
    p.has_point(i, j) || p.has_point(i + 1, j) || p.has_point(i, j + 1) || p.has_point(i + 1, j + 1)
}

/// Candidates whose squares all lie in the mesh.
pub fn enclosed_diagonals(mp: &MeshPattern) -> Vec<EnclosedDiagonal> {
    let k = mp.k();
    candidate_diagonals(mp.pattern())
        .into_iter()
        .filter(|d| d.squares().iter().all(|&s| s.col <= k && mp.mesh().contains(s)))
        .collect()
}

pub fn is_superfluous(mp: &MeshPattern) -> bool {
    enclosed_diagonals(mp).is_empty()
}

/// Candidate diagonals of one permutation as bitmasks, for testing many
/// meshes against the same pattern.
#[derive(Debug, Clone)]
pub struct CandidateMasks {
    k: usize,
    diagonals: Vec<EnclosedDiagonal>,
    masks: Vec<u128>,
}

impl CandidateMasks {
    pub fn new(p: &Permutation) -> Result<Self> {
        let k = p.len();
        let diagonals = candidate_diagonals(p);
        let masks = diagonals
            .iter()
            .map(|d| d.mesh(k).map(|m| m.bits()))
            .collect::<Result<Vec<_>>>()?;
        Ok(CandidateMasks {
            k,
            diagonals,
            masks,
        })
    }

    pub fn diagonals(&self) -> &[EnclosedDiagonal] {
        &self.diagonals
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_superfluous(&self, mesh: &Mesh) -> bool {
        let bits = mesh.bits();
        self.masks.iter().all(|&m| m & bits != m)
    }

    pub fn first_enclosed(&self, mesh: &Mesh) -> Option<EnclosedDiagonal> {
        let bits = mesh.bits();
        self.masks
            .iter()
            .position(|&m| m & bits == m)
            .map(|i| self.diagonals[i])
    }
}

/// Whether a run of adjacent positions carries increasing or decreasing
/// consecutive values. Runs of a single position carry neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunDirection {
    Increasing,
    Decreasing,
    Single,
}

/// A maximal block of positions `start..start+length` whose values change by
/// exactly one, always in the same direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConsecutiveRun {
    pub start: usize,
    pub direction: RunDirection,
    pub length: usize,
}

/// Splits the positions of `p` into maximal consecutive runs.
pub fn runs(p: &Permutation) -> Vec<ConsecutiveRun> {
    let w = p.word();
    let step = |i: usize| -> RunDirection {
        if w[i + 1] == w[i] + 1 {
            RunDirection::Increasing
        } else if w[i] == w[i + 1] + 1 {
            RunDirection::Decreasing
        } else {
            RunDirection::Single
        }
    };
    let mut out = Vec::new();
    let mut start = 0;
    while start < w.len() {
        let mut end = start;
        let dir = if start + 1 < w.len() {
            step(start)
        } else {
            RunDirection::Single
        };
        if dir != RunDirection::Single {
            while end + 1 < w.len() && step(end) == dir {
                end += 1;
            }
        }
        out.push(ConsecutiveRun {
            start: start + 1,
            direction: dir,
            length: end - start + 1,
        });
        start = end + 1;
    }
    out
}
