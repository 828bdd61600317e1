//! Occurrence repair: turning a classical occurrence of a superfluous mesh
//! pattern into one with fewer points in shaded regions.
//!
//! The basic move is the value-chain shift. Suppose a shaded square `(i,j)`
//! has a host point `z` in its region and its top-right corner is the pattern
//! point `(i+1, j+1)`. Follow shaded squares up the diagonal while their
//! top-right corners are pattern points, stopping at the first unshaded
//! square `(i+h, j+h)`. Then `z` takes over the role of pattern position
//! `i+1`, and the host point playing position `i+x` moves to position
//! `i+x+1` for `1 <= x < h`. The other three corner orientations are handled
//! by conjugating with complement, reverse, or both.
//!
//! A single shift does not always lower the violation count, so
//! [`repair_occurrence`] runs a breadth-first search over shifts and returns
//! the nearest occurrence with strictly fewer violations.

use std::collections::{HashSet, VecDeque};

use crate::diagonal::enclosed_diagonals;
use crate::error::{Error, Result};
use crate::mesh::{region_counts, violations, Mesh, MeshPattern, MeshSquare};
use crate::perm::{Occurrence, Permutation, Symmetry};

/// Orientations used to bring any corner to the top-right.
const ORIENTATIONS: [&[Symmetry]; 4] = [
    &[],
    &[Symmetry::Complement],
    &[Symmetry::Reverse],
    &[Symmetry::Reverse, Symmetry::Complement],
];

/// One value-chain shift, reported in the caller's coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainShift {
    /// The shaded square whose region held `point_col`.
    pub square: MeshSquare,
    /// Host position of the point that joins the occurrence.
    pub point_col: usize,
    /// Number of squares in the shifted chain.
    pub chain: usize,
    pub result: Occurrence,
}

/// All value-chain shifts available from `occ`, in the order
/// (square, host position, orientation).
pub fn chain_shifts(host: &Permutation, mp: &MeshPattern, occ: &Occurrence) -> Result<Vec<ChainShift>> {
    let mut all = Vec::new();
    for (o, syms) in ORIENTATIONS.iter().enumerate() {
        let (h, m, oc) = conjugate(host, mp, occ, syms);
        for shift in up_right_shifts(&h, &m, &oc)? {
            let back = unconjugate(&h, mp.k(), shift, syms);
            all.push((o, back));
        }
    }
    all.sort_by_key(|(o, s)| (s.square, s.point_col, *o));
    Ok(all.into_iter().map(|(_, s)| s).collect())
}

fn conjugate(
    host: &Permutation,
    mp: &MeshPattern,
    occ: &Occurrence,
    syms: &[Symmetry],
) -> (Permutation, MeshPattern, Occurrence) {
    let mut h = host.clone();
    let mut m = mp.clone();
    let mut o = occ.clone();
    for &s in syms {
        o = o.transform(&h, s);
        h = h.apply(s);
        m = m.transform(s);
    }
    (h, m, o)
}

/// Maps a shift computed on the conjugated host back. Every orientation is
/// an involution built from commuting reflections.
fn unconjugate(conj_host: &Permutation, k: usize, shift: ChainShift, syms: &[Symmetry]) -> ChainShift {
    let n = conj_host.len();
    let mut h = conj_host.clone();
    let mut result = shift.result;
    let mut square = shift.square;
    let mut col = shift.point_col;
    for &s in syms.iter().rev() {
        result = result.transform(&h, s);
        square = square.transform(k, s);
        if s == Symmetry::Reverse {
            col = n + 1 - col;
        }
        h = h.apply(s);
    }
    ChainShift {
        square,
        point_col: col,
        chain: shift.chain,
        result,
    }
}

fn up_right_shifts(host: &Permutation, mp: &MeshPattern, occ: &Occurrence) -> Result<Vec<ChainShift>> {
    let pattern = mp.pattern();
    let mesh = mp.mesh();
    let positions = occ.indices();
    let mut values = occ.values(host);
    values.sort_unstable();

    let mut out = Vec::new();
    for sq in mesh.squares() {
        let (i, j) = (sq.col, sq.row);
        if !pattern.has_point(i + 1, j + 1) {
            continue;
        }
        let mut h = 1;
        while mesh.contains(MeshSquare::new(i + h, j + h)) && pattern.has_point(i + h + 1, j + h + 1) {
            h += 1;
        }
        if mesh.contains(MeshSquare::new(i + h, j + h)) {
            // the run ends at a corner that is not a pattern point
            continue;
        }
        let col_lo = if i == 0 { 0 } else { positions[i - 1] };
        let col_hi = positions[i];
        let row_lo = if j == 0 { 0 } else { values[j - 1] };
        let row_hi = values[j];
        for z in col_lo + 1..col_hi {
            let v = host.at(z);
            if v <= row_lo || v >= row_hi {
                continue;
            }
            let mut next = positions.to_vec();
            next[i] = z;
            next[i + 1..i + h].copy_from_slice(&positions[i..i + h - 1]);
            out.push(ChainShift {
                square: sq,
                point_col: z,
                chain: h,
                result: Occurrence::new(next)?,
            });
        }
    }
    Ok(out)
}

fn check_preconditions(host: &Permutation, mp: &MeshPattern, occ: &Occurrence) -> Result<usize> {
    occ.check_within(host.len())?;
    if occ.len() != mp.k() || host.pattern_at(occ) != *mp.pattern() {
        return Err(Error::Precondition(format!(
            "{occ} is not an occurrence of {} in {host}",
            mp.pattern()
        )));
    }
    if let Some(d) = enclosed_diagonals(mp).first() {
        return Err(Error::Precondition(format!(
            "{mp} has the enclosed diagonal {d}"
        )));
    }
    let v = violations(host, occ, mp.mesh())?;
    if v == 0 {
        return Err(Error::Precondition(format!(
            "{occ} is already a mesh occurrence of {mp}"
        )));
    }
    Ok(v)
}

/// Returns an occurrence with strictly fewer shaded-region points than `occ`,
/// reached from `occ` by the fewest value-chain shifts.
pub fn repair_occurrence(host: &Permutation, mp: &MeshPattern, occ: &Occurrence) -> Result<Occurrence> {
    let start = check_preconditions(host, mp, occ)?;
    let mut seen: HashSet<Occurrence> = HashSet::from([occ.clone()]);
    let mut queue = VecDeque::from([occ.clone()]);
    while let Some(cur) = queue.pop_front() {
        for shift in chain_shifts(host, mp, &cur)? {
            if !seen.insert(shift.result.clone()) {
                continue;
            }
            if violations(host, &shift.result, mp.mesh())? < start {
                return Ok(shift.result);
            }
            queue.push_back(shift.result);
        }
    }
    Err(Error::TheoremViolation(format!(
        "no value-chain shift sequence lowers the {start} violations of {occ} for {mp} in {host}"
    )))
}

/// Iterates [`repair_occurrence`] until a mesh occurrence is reached.
/// Returns each occurrence visited with its violation count, starting with
/// `occ` itself.
pub fn repair_path(host: &Permutation, mp: &MeshPattern, occ: &Occurrence) -> Result<Vec<(Occurrence, usize)>> {
    let mut v = check_preconditions(host, mp, occ)?;
    let mut path = vec![(occ.clone(), v)];
    let mut cur = occ.clone();
    while v > 0 {
        cur = repair_occurrence(host, mp, &cur)?;
        let next = violations(host, &cur, mp.mesh())?;
        debug_assert!(next < v);
        v = next;
        path.push((cur.clone(), v));
    }
    Ok(path)
}

/// Shaded-region counts of an occurrence, per square of the mesh.
pub fn violation_breakdown(host: &Permutation, occ: &Occurrence, mesh: &Mesh) -> Result<Vec<(MeshSquare, usize)>> {
    let counts = region_counts(host, occ)?;
    Ok(mesh
        .squares()
        .map(|s| (s, counts[Mesh::index(mesh.k(), s)]))
        .filter(|&(_, c)| c > 0)
        .collect())
}
