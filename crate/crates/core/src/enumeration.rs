//! Counting superfluous meshes.
//!
//! A mesh is superfluous for `π` when it contains no candidate diagonal.
//! Singleton candidates just forbid individual squares, so the count only
//! ranges over the universe `U'` of squares with at least one corner on the
//! graph of `π`. Within `U'` the multi-square candidates are handled by
//! inclusion-exclusion, factored over groups of candidates that share
//! squares.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::diagonal::{candidate_diagonals, is_superfluous, runs, EnclosedDiagonal, RunDirection};
use crate::error::{Error, Result};
use crate::mesh::{Mesh, MeshPattern};
use crate::perm::{all_permutations, Permutation};

/// Largest connected group of candidates the inclusion-exclusion sum will
/// expand (it visits `2^size` subsets).
pub const DEFAULT_IE_BOUND: usize = 24;
/// Largest pattern length for [`sup_mesh_direct`].
pub const DEFAULT_DIRECT_BOUND: usize = 4;
/// Largest `k` for full-table sweeps over `S_k`.
pub const DEFAULT_TABLE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupMeshReport {
    pub permutation: Permutation,
    /// `|U'|`: squares with at least one corner on the graph.
    pub universe_size: usize,
    pub singleton_count: usize,
    pub multi_candidate_count: usize,
    #[serde(serialize_with = "as_decimal")]
    pub sup_mesh: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub non_superfluous: BigUint,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SupMeshReport {
    pub fn k(&self) -> usize {
        self.permutation.len()
    }
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `2^((k+1)^2)`, the number of meshes on a `k`-pattern.
pub fn total_meshes(k: usize) -> BigUint {
    pow2((k + 1) * (k + 1))
}

fn check_mesh_k(k: usize) -> Result<()> {
    Mesh::empty(k).map(|_| ())
}

fn split_candidates(p: &Permutation) -> (Vec<EnclosedDiagonal>, Vec<EnclosedDiagonal>) {
    candidate_diagonals(p).into_iter().partition(|d| !d.is_singleton())
}

fn mask(k: usize, d: &EnclosedDiagonal) -> u128 {
    d.mesh(k).expect("k checked by caller").bits()
}

/// Groups candidate masks into connected components of the "shares a square"
/// relation.
fn components(masks: &[u128]) -> Vec<Vec<u128>> {
    let mut parent: Vec<usize> = (0..masks.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..masks.len() {
        for b in a + 1..masks.len() {
            if masks[a] & masks[b] != 0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<u128>> = Vec::new();
    let mut root_slot = vec![usize::MAX; masks.len()];
    for (i, &mask) in masks.iter().enumerate() {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(mask);
    }
    groups
}

/// `sum over S of (-1)^|S| 2^(|squares| - |union S|)` for one component.
fn component_count(group: &[u128]) -> BigUint {
    let squares = group.iter().fold(0u128, |a, &m| a | m).count_ones() as usize;
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for subset in 0u64..(1u64 << group.len()) {
        let mut union = 0u128;
        let mut rest = subset;
        while rest != 0 {
            union |= group[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        let term = pow2(squares - union.count_ones() as usize);
        if subset.count_ones() % 2 == 0 {
            plus += term;
        } else {
            minus += term;
        }
    }
    plus - minus
}

/// Superfluous meshes of `p` by inclusion-exclusion.
pub fn sup_mesh_ie(p: &Permutation) -> Result<SupMeshReport> {
    sup_mesh_ie_bounded(p, DEFAULT_IE_BOUND)
}

/// As [`sup_mesh_ie`], refusing candidate components larger than `bound`.
pub fn sup_mesh_ie_bounded(p: &Permutation, bound: usize) -> Result<SupMeshReport> {
    let k = p.len();
    check_mesh_k(k)?;
    let (multi, singles) = split_candidates(p);
    let cells = (k + 1) * (k + 1);
    let universe_size = cells - singles.len();

    let masks: Vec<u128> = multi.iter().map(|d| mask(k, d)).collect();
    let groups = components(&masks);
    if let Some(big) = groups.iter().map(Vec::len).max().filter(|&m| m > bound) {
        return Err(Error::BoundExceeded {
            what: "candidate diagonals in one component",
            value: big,
            bound,
        });
    }
    let covered = masks.iter().fold(0u128, |a, &m| a | m).count_ones() as usize;
    let mut sup = pow2(universe_size - covered);
    for g in &groups {
        sup *= component_count(g);
    }
    let non_superfluous = total_meshes(k) - &sup;
    Ok(SupMeshReport {
        permutation: p.clone(),
        universe_size,
        singleton_count: singles.len(),
        multi_candidate_count: multi.len(),
        sup_mesh: sup,
        non_superfluous,
    })
}

/// Superfluous meshes of `p` by testing every subset of `U'`.
pub fn sup_mesh_direct(p: &Permutation) -> Result<BigUint> {
    sup_mesh_direct_bounded(p, DEFAULT_DIRECT_BOUND)
}

pub fn sup_mesh_direct_bounded(p: &Permutation, bound: usize) -> Result<BigUint> {
    let k = p.len();
    if k > bound {
        return Err(Error::BoundExceeded {
            what: "pattern length for direct enumeration",
            value: k,
            bound,
        });
    }
    check_mesh_k(k)?;
    let (_, singles) = split_candidates(p);
    let forbidden: Vec<usize> = singles
        .iter()
        .map(|d| Mesh::index(k, d.anchor))
        .collect();
    let universe: Vec<usize> = (0..(k + 1) * (k + 1))
        .filter(|i| !forbidden.contains(i))
        .collect();
    let count: u64 = (0u64..1u64 << universe.len())
        .into_par_iter()
        .filter(|&subset| {
            let mut bits = 0u128;
            let mut rest = subset;
            while rest != 0 {
                bits |= 1u128 << universe[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            let mp = MeshPattern::new(p.clone(), Mesh::from_bits(k, bits)).expect("sizes agree");
            is_superfluous(&mp)
        })
        .count() as u64;
    Ok(BigUint::from(count))
}

/// One report per permutation of `S_k`, in lexicographic order.
pub fn sup_mesh_table(k: usize) -> Result<Vec<SupMeshReport>> {
    sup_mesh_table_bounded(k, DEFAULT_TABLE_BOUND)
}

pub fn sup_mesh_table_bounded(k: usize, bound: usize) -> Result<Vec<SupMeshReport>> {
    if k > bound {
        return Err(Error::BoundExceeded {
            what: "k for a full table",
            value: k,
            bound,
        });
    }
    let perms: Vec<Permutation> = all_permutations(k)?.collect();
    perms.par_iter().map(sup_mesh_ie).collect()
}

fn binomial(n: usize, r: i64) -> BigUint {
    if r < 0 || r as usize > n {
        return BigUint::zero();
    }
    let r = r as usize;
    let mut acc = BigUint::one();
    for t in 0..r {
        acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    acc
}

/// Closed form for the minimum over `S_k`, written as the alternating sum
/// over the identity's `k+1` hazard diagonals.
pub fn min_supmesh(k: usize) -> BigUint {
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for i in 0..=(k + 1) {
        let mut term = binomial(k, i as i64 - 1) * pow2(2 * k + 2 - 2 * i);
        if i <= k {
            term += binomial(k, i as i64) * pow2(3 * k + 1 - 2 * i);
        }
        if i % 2 == 0 {
            plus += term;
        } else {
            minus += term;
        }
    }
    plus - minus
}

/// `(2^(k+1) - 1) * 3^k`, the factored form of [`min_supmesh`].
pub fn min_supmesh_product(k: usize) -> BigUint {
    (pow2(k + 1) - BigUint::one()) * BigUint::from(3u32).pow(k as u32)
}

/// `3^(2k)`: `2k` disjoint two-square hazards covering `4k` squares.
pub fn max_supmesh(k: usize) -> BigUint {
    BigUint::from(3u32).pow(2 * k as u32)
}

/// `sum_{i=0}^{upper} (-1)^i C(2k,i) 2^(4k-2i)`. With `upper = 2k` this is
/// [`max_supmesh`]; with `upper = k` it is the truncated variant reported for
/// comparison by [`printed_max_sum`].
pub fn max_alternating_sum(k: usize, upper: usize) -> BigUint {
    let upper = upper.min(2 * k);
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for i in 0..=upper {
        let term = binomial(2 * k, i as i64) * pow2(4 * k - 2 * i);
        if i % 2 == 0 {
            plus += term;
        } else {
            minus += term;
        }
    }
    if plus >= minus {
        plus - minus
    } else {
        // truncated sums can go negative; never for upper = k, but keep the
        // function total
        BigUint::zero()
    }
}

/// The alternating sum truncated at `i = k`.
pub fn printed_max_sum(k: usize) -> BigUint {
    max_alternating_sum(k, k)
}

/// Whether no two adjacent positions carry consecutive values.
pub fn has_no_adjacent_consecutive(p: &Permutation) -> bool {
    runs(p).iter().all(|r| r.direction == RunDirection::Single)
}

fn is_monotone_run(p: &Permutation) -> bool {
    let r = runs(p);
    r.len() == 1
}

/// Number of permutations of `S_k` with no adjacent consecutive values, by
/// scanning `S_k`.
pub fn a002464_count(k: usize) -> Result<u64> {
    a002464_count_bounded(k, 10)
}

pub fn a002464_count_bounded(k: usize, bound: usize) -> Result<u64> {
    if k > bound {
        return Err(Error::BoundExceeded {
            what: "k for an S_k scan",
            value: k,
            bound,
        });
    }
    Ok(all_permutations(k)?
        .filter(has_no_adjacent_consecutive)
        .count() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableExtreme {
    #[serde(serialize_with = "as_decimal")]
    pub value: BigUint,
    pub permutations: Vec<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub k: usize,
    /// Permutations whose adjacent positions all carry consecutive values.
    pub minimizers: Vec<Permutation>,
    /// Permutations where no adjacent positions carry consecutive values.
    pub maximizers: Vec<Permutation>,
    #[serde(serialize_with = "as_decimal")]
    pub min_value: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub max_value: BigUint,
    /// The alternating sum truncated at `i = k`, for comparison.
    #[serde(serialize_with = "as_decimal")]
    pub printed_max_sum: BigUint,
    /// False when no permutation of `S_k` realises `max_value`.
    pub max_realized: bool,
    /// Exact table extremes; present when `k` is within the table bound.
    pub table_min: Option<TableExtreme>,
    pub table_max: Option<TableExtreme>,
}

/// Extremal permutations for sup-mesh over `S_k`.
pub fn extremal_permutations(k: usize) -> Result<ExtremalReport> {
    extremal_permutations_bounded(k, DEFAULT_TABLE_BOUND)
}

pub fn extremal_permutations_bounded(k: usize, table_bound: usize) -> Result<ExtremalReport> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if k > 10 {
        return Err(Error::BoundExceeded {
            what: "k for an S_k scan",
            value: k,
            bound: 10,
        });
    }
    let mut minimizers = Vec::new();
    let mut maximizers = Vec::new();
    for p in all_permutations(k)? {
        if is_monotone_run(&p) {
            minimizers.push(p.clone());
        }
        if has_no_adjacent_consecutive(&p) {
            maximizers.push(p);
        }
    }
    let (table_min, table_max) = if k <= table_bound && k <= DEFAULT_TABLE_BOUND {
        let table = sup_mesh_table_bounded(k, table_bound)?;
        let pick = |want_max: bool| {
            let best = table
                .iter()
                .map(|r| &r.sup_mesh)
                .fold(None::<&BigUint>, |acc, v| match acc {
                    None => Some(v),
                    Some(a) if (want_max && v > a) || (!want_max && v < a) => Some(v),
                    Some(a) => Some(a),
                })
                .expect("S_k is nonempty")
                .clone();
            let permutations = table
                .iter()
                .filter(|r| r.sup_mesh == best)
                .map(|r| r.permutation.clone())
                .collect();
            TableExtreme {
                value: best,
                permutations,
            }
        };
        (Some(pick(false)), Some(pick(true)))
    } else {
        (None, None)
    };
    Ok(ExtremalReport {
        k,
        max_realized: !maximizers.is_empty(),
        minimizers,
        maximizers,
        min_value: min_supmesh(k),
        max_value: max_supmesh(k),
        printed_max_sum: printed_max_sum(k),
        table_min,
        table_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn worked_examples() {
        let r = sup_mesh_ie(&p("123")).unwrap();
        assert_eq!(r.sup_mesh, big(405));
        assert_eq!(r.universe_size, 10);
        assert_eq!(r.singleton_count, 6);
        assert_eq!(r.multi_candidate_count, 4);
        // five pairwise disjoint hazards over 11 squares: 3^4 * 7
        let r = sup_mesh_ie(&p("132")).unwrap();
        assert_eq!(r.sup_mesh, big(567));
        assert_eq!(r.universe_size, 11);
        assert_eq!(r.multi_candidate_count, 5);
        assert_eq!(sup_mesh_ie(&p("1")).unwrap().sup_mesh, big(9));
    }

    #[test]
    fn report_invariants() {
        for k in 1..=4 {
            for r in sup_mesh_table(k).unwrap() {
                assert_eq!(&r.sup_mesh + &r.non_superfluous, total_meshes(k));
                assert_eq!(r.universe_size + r.singleton_count, (k + 1) * (k + 1));
            }
        }
    }

    #[test]
    fn direct_matches_worked_examples() {
        assert_eq!(sup_mesh_direct(&p("123")).unwrap(), big(405));
        assert_eq!(sup_mesh_direct(&p("132")).unwrap(), big(567));
        assert_eq!(sup_mesh_direct(&p("21")).unwrap(), sup_mesh_ie(&p("21")).unwrap().sup_mesh);
        assert!(matches!(
            sup_mesh_direct(&Permutation::identity(5)),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn tables() {
        let t3: Vec<BigUint> = sup_mesh_table(3).unwrap().into_iter().map(|r| r.sup_mesh).collect();
        assert_eq!(t3, [405u64, 567, 567, 567, 567, 405].map(big));
        let t1 = sup_mesh_table(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[0].sup_mesh, big(9));
        let t2 = sup_mesh_table(2).unwrap();
        assert_eq!(t2[0].sup_mesh, t2[1].sup_mesh);
        assert!(sup_mesh_table(9).is_err());
    }

    #[test]
    fn ie_bound_is_enforced() {
        assert!(matches!(
            sup_mesh_ie_bounded(&p("132"), 0),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn min_formula_values() {
        assert_eq!(min_supmesh(1), big(9));
        assert_eq!(min_supmesh(2), big(63));
        assert_eq!(min_supmesh(3), big(405));
        for k in 1..=12 {
            assert_eq!(min_supmesh(k), min_supmesh_product(k), "k={k}");
        }
    }

    #[test]
    fn max_formula_values() {
        assert_eq!(max_supmesh(4), big(6561));
        assert_eq!(max_supmesh(1), big(9));
        assert_eq!(printed_max_sum(4), big(9728));
        for k in 1..=8 {
            assert_eq!(max_alternating_sum(k, 2 * k), max_supmesh(k));
        }
    }

    #[test]
    fn a002464_values() {
        let got: Vec<u64> = (1..=5).map(|k| a002464_count(k).unwrap()).collect();
        assert_eq!(got, vec![1, 0, 0, 2, 14]);
    }

    #[test]
    fn extremal_k3() {
        let r = extremal_permutations(3).unwrap();
        assert_eq!(r.minimizers, vec![p("123"), p("321")]);
        assert!(r.maximizers.is_empty());
        assert!(!r.max_realized);
        let tmax = r.table_max.unwrap();
        assert_eq!(tmax.value, big(567));
        assert_eq!(tmax.permutations, vec![p("132"), p("213"), p("231"), p("312")]);
        assert_eq!(r.table_min.unwrap().value, big(405));
    }

    #[test]
    fn extremal_k4_and_k1() {
        let r = extremal_permutations(4).unwrap();
        assert_eq!(r.maximizers, vec![p("2413"), p("3142")]);
        assert_eq!(r.table_max.unwrap().value, big(6561));
        let r = extremal_permutations(1).unwrap();
        assert_eq!(r.minimizers, vec![p("1")]);
        assert_eq!(r.maximizers, vec![p("1")]);
    }
}
