//! Brute-force comparison of mesh avoidance against classical avoidance, and
//! explicit non-coincidence witnesses.

use rayon::prelude::*;
use serde::Serialize;

use crate::diagonal::{candidate_diagonals, enclosed_diagonals, is_superfluous, Direction, EnclosedDiagonal};
use crate::error::{Error, Result};
use crate::mesh::{contains_mesh, occupied_regions, Mesh, MeshPattern};
use crate::perm::{all_permutations, flatten_ints, Occurrence, Permutation};

/// Largest host length scanned exhaustively by default.
pub const DEFAULT_SCAN_BOUND: usize = 8;

/// Anything whose containment in a host can be decided.
pub trait Pattern {
    fn pattern_len(&self) -> usize;
    fn is_contained_in(&self, host: &Permutation) -> bool;
}

impl Pattern for Permutation {
    fn pattern_len(&self) -> usize {
        self.len()
    }

    fn is_contained_in(&self, host: &Permutation) -> bool {
        host.contains(self)
    }
}

impl Pattern for MeshPattern {
    fn pattern_len(&self) -> usize {
        self.k()
    }

    fn is_contained_in(&self, host: &Permutation) -> bool {
        contains_mesh(host, self)
    }
}

fn check_scan_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "host length for an exhaustive scan",
            value: n,
            bound,
        });
    }
    Ok(())
}

/// `|Av(pattern) ∩ S_n|` by scanning `S_n`.
pub fn av_count<P: Pattern + Sync>(pattern: &P, n: usize) -> Result<u64> {
    av_count_bounded(pattern, n, DEFAULT_SCAN_BOUND)
}

pub fn av_count_bounded<P: Pattern + Sync>(pattern: &P, n: usize, bound: usize) -> Result<u64> {
    check_scan_bound(n, bound)?;
    let hosts: Vec<Permutation> = all_permutations(n)?.collect();
    Ok(hosts
        .par_iter()
        .filter(|h| !pattern.is_contained_in(h))
        .count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LengthCounts {
    pub n: usize,
    pub av_classical: u64,
    pub av_mesh: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// No host up to `n_max` separates the two avoidance classes.
    CoincidentUpToNMax,
    WitnessFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoincidenceReport {
    pub mesh_pattern: MeshPattern,
    pub n_max: usize,
    /// Counts for every length scanned to completion. The scan stops at the
    /// first witness, so the witness's own length is absent.
    pub per_length: Vec<LengthCounts>,
    pub verdict: Verdict,
    pub witness: Option<Permutation>,
}

impl CoincidenceReport {
    pub fn is_coincident(&self) -> bool {
        self.verdict == Verdict::CoincidentUpToNMax
    }
}

type HostMasks = Vec<(Permutation, Vec<u128>)>;

/// For one classical pattern, the occupied-region mask of every occurrence in
/// every host of length `k..=n_max`. Answers coincidence queries for many
/// meshes over the same pattern.
#[derive(Debug, Clone)]
pub struct CoincidenceOracle {
    pattern: Permutation,
    n_max: usize,
    /// `(n, hosts)`; each host keeps its occurrence masks.
    levels: Vec<(usize, HostMasks)>,
}

impl CoincidenceOracle {
    pub fn new(pattern: &Permutation, n_max: usize) -> Result<Self> {
        Self::with_bound(pattern, n_max, DEFAULT_SCAN_BOUND)
    }

    pub fn with_bound(pattern: &Permutation, n_max: usize, bound: usize) -> Result<Self> {
        let k = pattern.len();
        Mesh::empty(k)?;
        if n_max < k {
            return Err(Error::Precondition(format!(
                "n_max = {n_max} is shorter than the pattern length {k}"
            )));
        }
        check_scan_bound(n_max, bound)?;
        let mut levels = Vec::new();
        for n in k..=n_max {
            let hosts: Vec<Permutation> = all_permutations(n)?.collect();
            let table: HostMasks = hosts
                .into_par_iter()
                .map(|h| {
                    let masks = h
                        .occurrences(pattern)
                        .iter()
                        .map(|o| occupied_regions(&h, o).expect("occurrence fits").bits())
                        .collect();
                    (h, masks)
                })
                .collect();
            levels.push((n, table));
        }
        Ok(CoincidenceOracle {
            pattern: pattern.clone(),
            n_max,
            levels,
        })
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    /// Scans hosts in order of length, then lexicographically, stopping at
    /// the first host that contains the pattern but not the mesh pattern.
    pub fn scan(&self, mesh: &Mesh) -> Result<CoincidenceReport> {
        let mp = MeshPattern::new(self.pattern.clone(), *mesh)?;
        let bits = mesh.bits();
        let mut per_length = Vec::new();
        for (n, hosts) in &self.levels {
            let mut av_classical = 0;
            let mut av_mesh = 0;
            for (host, masks) in hosts {
                let classical = !masks.is_empty();
                let meshed = masks.iter().any(|&m| m & bits == 0);
                if classical && !meshed {
                    return Ok(CoincidenceReport {
                        mesh_pattern: mp,
                        n_max: self.n_max,
                        per_length,
                        verdict: Verdict::WitnessFound,
                        witness: Some(host.clone()),
                    });
                }
                av_classical += u64::from(!classical);
                av_mesh += u64::from(!meshed);
            }
            per_length.push(LengthCounts {
                n: *n,
                av_classical,
                av_mesh,
            });
        }
        Ok(CoincidenceReport {
            mesh_pattern: mp,
            n_max: self.n_max,
            per_length,
            verdict: Verdict::CoincidentUpToNMax,
            witness: None,
        })
    }

    /// Just the verdict, without building a report.
    pub fn is_coincident(&self, mesh: &Mesh) -> bool {
        let bits = mesh.bits();
        self.levels.iter().all(|(_, hosts)| {
            hosts
                .iter()
                .all(|(_, masks)| masks.is_empty() || masks.iter().any(|&m| m & bits == 0))
        })
    }
}

/// Brute-force coincidence scan without consulting the diagonal criterion.
pub fn scan_coincidence(mp: &MeshPattern, n_max: usize) -> Result<CoincidenceReport> {
    CoincidenceOracle::new(mp.pattern(), n_max)?.scan(mp.mesh())
}

/// Scans for a witness and cross-checks the outcome against the enclosed
/// diagonal criterion. Once `n_max >= k+1` the two must agree; disagreement
/// is reported as [`Error::TheoremViolation`].
pub fn verify_coincidence(mp: &MeshPattern, n_max: usize) -> Result<CoincidenceReport> {
    let report = scan_coincidence(mp, n_max)?;
    check_against_criterion(mp, &report)?;
    Ok(report)
}

pub(crate) fn check_against_criterion(mp: &MeshPattern, report: &CoincidenceReport) -> Result<()> {
    if report.n_max <= mp.k() {
        return Ok(());
    }
    let superfluous = is_superfluous(mp);
    match (superfluous, &report.witness) {
        (true, Some(w)) => Err(Error::TheoremViolation(format!(
            "{mp} has no enclosed diagonal but {w} contains {} and avoids the mesh pattern",
            mp.pattern()
        ))),
        (false, None) => Err(Error::TheoremViolation(format!(
            "{mp} has the enclosed diagonal {} but no witness exists up to length {}",
            enclosed_diagonals(mp)[0],
            report.n_max
        ))),
        _ => Ok(()),
    }
}

/// Confirms that `{π}` alone is a classical basis for `Av(mp)` up to `n_max`.
pub fn minimal_basis_check(mp: &MeshPattern, n_max: usize) -> Result<bool> {
    if !is_superfluous(mp) {
        return Err(Error::Precondition(format!(
            "{mp} has an enclosed diagonal"
        )));
    }
    let report = scan_coincidence(mp, n_max)?;
    Ok(report.is_coincident()
        && report.per_length.iter().all(|c| c.av_classical == c.av_mesh))
}

/// A permutation of length `k+1` that contains `p` but avoids
/// `(p, squares(d))`: `p` with a new value just above row `j` inserted after
/// position `i`.
pub fn witness(p: &Permutation, d: &EnclosedDiagonal) -> Result<Permutation> {
    if !candidate_diagonals(p).contains(d) {
        return Err(Error::Precondition(format!(
            "{d} is not a candidate diagonal of {p}"
        )));
    }
    match d.direction {
        Direction::Ascending => Ok(insert_above(p, d.anchor.col, d.anchor.row)),
        Direction::Descending => {
            let k = p.len();
            let flipped = d.transform(k, crate::perm::Symmetry::Complement);
            let w = witness(&p.complement(), &flipped)?;
            Ok(w.complement())
        }
    }
}

/// Inserts the value `row + 1/2` after position `col`, working with doubled
/// values so the new entry stays integral.
fn insert_above(p: &Permutation, col: usize, row: usize) -> Permutation {
    let mut doubled: Vec<usize> = p.word().iter().map(|&v| 2 * v).collect();
    doubled.insert(col, 2 * row + 1);
    flatten_ints(&doubled).expect("doubled values and an odd insert are distinct")
}

/// Classical occurrences of `p` in its witness that still avoid every shaded
/// square; empty exactly when the witness works.
pub fn witness_escapes(p: &Permutation, d: &EnclosedDiagonal, w: &Permutation) -> Result<Vec<Occurrence>> {
    let mp = MeshPattern::new(p.clone(), d.mesh(p.len())?)?;
    Ok(crate::mesh::mesh_occurrences(w, &mp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn mp(s: &str) -> MeshPattern {
        s.parse().unwrap()
    }

    fn d(s: &str) -> EnclosedDiagonal {
        s.parse().unwrap()
    }

    #[test]
    fn av_count_examples() {
        assert_eq!(av_count(&p("123"), 4).unwrap(), 14);
        assert_eq!(av_count(&mp("123:1,1"), 4).unwrap(), 14);
        assert_eq!(av_count(&p("1"), 3).unwrap(), 0);
        assert!(av_count(&p("1"), 9).is_err());
    }

    #[test]
    fn verify_examples() {
        let r = verify_coincidence(&mp("231:1,1"), 5).unwrap();
        assert!(r.is_coincident());
        assert_eq!(r.per_length.len(), 3);
        for c in &r.per_length {
            assert_eq!(c.av_classical, c.av_mesh);
        }

        let r = verify_coincidence(&mp("231:1,1;3,2"), 4).unwrap();
        assert_eq!(r.verdict, Verdict::WitnessFound);
        assert_eq!(r.witness, Some(p("2413")));

        let r = verify_coincidence(&mp("4132:"), 6).unwrap();
        assert!(r.is_coincident());
        assert!(verify_coincidence(&mp("12:"), 1).is_err());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness(&p("231"), &d("((2,0),+1,2)")).unwrap(), p("3412"));
        assert_eq!(witness(&p("231"), &d("((3,2),+1,1)")).unwrap(), p("2413"));
        let w = witness(&p("123"), &d("((0,0),+1,4)")).unwrap();
        assert_eq!(w, p("1234"));
        assert_eq!(w.occurrences(&p("123")).len(), 4);
        assert!(witness_escapes(&p("123"), &d("((0,0),+1,4)"), &w).unwrap().is_empty());
        assert!(matches!(
            witness(&p("231"), &d("((1,1),+1,1)")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn descending_witness() {
        // 132 has the descending run (1,3),(2,2),(3,1) through its points 3, 2
        let diag = d("((1,3),-1,3)");
        let w = witness(&p("132"), &diag).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.contains(&p("132")));
        assert!(witness_escapes(&p("132"), &diag, &w).unwrap().is_empty());
    }

    #[test]
    fn minimal_basis_examples() {
        assert!(minimal_basis_check(&mp("123:1,1"), 6).unwrap());
        assert!(minimal_basis_check(&mp("231:"), 5).unwrap());
        assert!(minimal_basis_check(&mp("132:1,1;1,2;2,1;2,2"), 6).unwrap());
        assert!(minimal_basis_check(&mp("123:1,1;1,2;2,1;2,2"), 5).is_err());
    }
}
