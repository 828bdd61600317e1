use std::collections::BTreeSet;

use meshpat::mesh::occupied_regions;
use meshpat::{
    all_permutations, candidate_diagonals, contains_mesh, enclosed_diagonals, flatten, is_superfluous,
    max_supmesh, mesh_occurrences, min_supmesh, sup_mesh_direct, sup_mesh_ie, violations, Mesh, MeshPattern,
    MeshSquare, Occurrence, Permutation, Symmetry,
};
use proptest::prelude::*;

fn perm(max_len: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_len)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|w| Permutation::from_word(w).unwrap())
}

fn mesh_pattern(max_k: usize) -> impl Strategy<Value = MeshPattern> {
    perm(max_k).prop_flat_map(|p| {
        let k = p.len();
        let cells = (k + 1) * (k + 1);
        proptest::collection::vec(any::<bool>(), cells).prop_map(move |on| {
            let mesh = Mesh::from_squares(
                k,
                on.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| Mesh::square_at(k, i)),
            )
            .unwrap();
            MeshPattern::new(p.clone(), mesh).unwrap()
        })
    })
}

fn symmetry() -> impl Strategy<Value = Symmetry> {
    prop_oneof![
        Just(Symmetry::Reverse),
        Just(Symmetry::Complement),
        Just(Symmetry::Inverse)
    ]
}

/// The endpoint condition on a set of squares, checked literally: the
/// squares form a diagonal run whose interior corners all lie on the graph
/// and whose two outer corners do not.
fn literal_enclosed(p: &Permutation, squares: &[MeshSquare]) -> bool {
    let h = squares.len();
    let mut s = squares.to_vec();
    s.sort();
    let (i, j) = (s[0].col, s[0].row);
    let ascending = s.iter().enumerate().all(|(x, q)| q.col == i + x && q.row == j + x);
    let descending = s.iter().enumerate().all(|(x, q)| q.col == i + x && q.row + x == j);
    let corner = |c: usize, r: usize| p.has_point(c, r);
    if h == 1 {
        return !corner(i, j) && !corner(i + 1, j) && !corner(i, j + 1) && !corner(i + 1, j + 1);
    }
    if ascending {
        (1..h).all(|x| corner(i + x, j + x)) && !corner(i, j) && !corner(i + h, j + h)
    } else if descending {
        (1..h).all(|x| corner(i + x, j + 1 - x)) && !corner(i, j + 1) && !corner(i + h, j + 1 - h)
    } else {
        false
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flatten_is_idempotent(values in proptest::collection::hash_set(0i64..1000, 1..12)) {
        let v: Vec<i64> = values.into_iter().collect();
        let once = flatten(&v).unwrap();
        let twice = flatten(once.word()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn symmetries_are_involutions(p in perm(9), s in symmetry()) {
        prop_assert_eq!(p.apply(s).apply(s), p);
    }

    #[test]
    fn occurrence_counts_are_symmetric(host in perm(7), pattern in perm(4), s in symmetry()) {
        prop_assert_eq!(
            host.occurrences(&pattern).len(),
            host.apply(s).occurrences(&pattern.apply(s)).len()
        );
    }

    #[test]
    fn mesh_transform_commutes_with_containment(host in perm(6), m in mesh_pattern(3), s in symmetry()) {
        prop_assert_eq!(contains_mesh(&host, &m), contains_mesh(&host.apply(s), &m.transform(s)));
        prop_assert_eq!(m.transform(s).transform(s), m);
    }

    #[test]
    fn empty_mesh_is_classical(host in perm(7), pattern in perm(4)) {
        let m = MeshPattern::classical(pattern.clone()).unwrap();
        prop_assert_eq!(mesh_occurrences(&host, &m), host.occurrences(&pattern));
    }

    #[test]
    fn more_shading_fewer_occurrences(host in perm(6), m in mesh_pattern(3), extra in 0usize..16) {
        let k = m.k();
        let mut bigger = *m.mesh();
        bigger.insert(Mesh::square_at(k, extra % ((k + 1) * (k + 1)))).unwrap();
        let larger = m.with_mesh(bigger).unwrap();
        let small: BTreeSet<Occurrence> = mesh_occurrences(&host, &larger).into_iter().collect();
        let all: BTreeSet<Occurrence> = mesh_occurrences(&host, &m).into_iter().collect();
        prop_assert!(small.is_subset(&all));
    }

    #[test]
    fn occupied_regions_match_violations(host in perm(7), m in mesh_pattern(3)) {
        for occ in host.occurrences(m.pattern()) {
            let occupied = occupied_regions(&host, &occ).unwrap();
            let v = violations(&host, &occ, m.mesh()).unwrap();
            prop_assert_eq!(occupied.intersects(m.mesh()), v > 0);
        }
    }

    #[test]
    fn candidates_match_the_endpoint_condition(m in mesh_pattern(4)) {
        let p = m.pattern();
        let enclosed = enclosed_diagonals(&m);
        for d in candidate_diagonals(p) {
            prop_assert!(literal_enclosed(p, &d.squares()), "{}", d);
            let shaded = d.squares().iter().all(|&s| m.mesh().contains(s));
            prop_assert_eq!(shaded, enclosed.contains(&d));
        }
        prop_assert_eq!(is_superfluous(&m), enclosed.is_empty());
    }

    #[test]
    fn superfluousness_is_symmetric(m in mesh_pattern(4), s in symmetry()) {
        prop_assert_eq!(is_superfluous(&m), is_superfluous(&m.transform(s)));
    }

    #[test]
    fn sup_mesh_lies_between_the_extremes(p in perm(7)) {
        let k = p.len();
        let sup = sup_mesh_ie(&p).unwrap().sup_mesh;
        prop_assert!(min_supmesh(k) <= sup && sup <= max_supmesh(k));
    }

    #[test]
    fn occurrence_positions_are_increasing(host in perm(8), pattern in perm(3)) {
        for occ in host.occurrences(&pattern) {
            prop_assert!(occ.indices().windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(host.pattern_at(&occ), pattern.clone());
        }
    }
}

/// Every set of squares passing the literal endpoint condition is a candidate.
#[test]
fn endpoint_condition_has_no_extra_solutions() {
    for k in 1..=4 {
        for p in all_permutations(k).unwrap() {
            let found: BTreeSet<Vec<MeshSquare>> = candidate_diagonals(&p)
                .iter()
                .map(|d| {
                    let mut s = d.squares();
                    s.sort();
                    s
                })
                .collect();
            for i in 0..=k {
                for j in 0..=k {
                    for h in 1..=k + 1 {
                        let up: Vec<MeshSquare> = (0..h).map(|x| MeshSquare::new(i + x, j + x)).collect();
                        if i + h <= k + 1 && j + h <= k + 1 && literal_enclosed(&p, &up) {
                            assert!(found.contains(&up), "{p} ascending {up:?}");
                        }
                        if h >= 2 && i + h <= k + 1 && j + 1 >= h {
                            let mut down: Vec<MeshSquare> = (0..h).map(|x| MeshSquare::new(i + x, j - x)).collect();
                            down.sort();
                            if literal_enclosed(&p, &down) {
                                assert!(found.contains(&down), "{p} descending {down:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn occurrences_sum_to_binomial() {
    for n in 1..=6 {
        for k in 1..=n {
            let hosts: Vec<Permutation> = all_permutations(n).unwrap().collect();
            let total: usize = all_permutations(k)
                .unwrap()
                .map(|pat| hosts.iter().map(|h| h.occurrences(&pat).len()).sum::<usize>())
                .sum();
            // each k-subset of positions of each host is an occurrence of exactly one pattern
            let choose = (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i);
            let factorial: usize = (1..=n).product();
            assert_eq!(total, choose * factorial, "n={n} k={k}");
        }
    }
}

#[test]
fn inclusion_exclusion_matches_enumeration() {
    for k in 1..=3 {
        for p in all_permutations(k).unwrap() {
            assert_eq!(sup_mesh_ie(&p).unwrap().sup_mesh, sup_mesh_direct(&p).unwrap(), "{p}");
        }
    }
    for text in ["1234", "2413", "1324", "4213", "3142"] {
        let p: Permutation = text.parse().unwrap();
        assert_eq!(sup_mesh_ie(&p).unwrap().sup_mesh, sup_mesh_direct(&p).unwrap(), "{p}");
    }
}

#[test]
fn multi_square_candidates_partition_the_universe() {
    for k in 1..=5 {
        for p in all_permutations(k).unwrap() {
            let mut seen = BTreeSet::new();
            for d in candidate_diagonals(&p).iter().filter(|d| !d.is_singleton()) {
                for s in d.squares() {
                    assert!(seen.insert(s), "{p}: {s:?} in two candidates");
                }
            }
            let universe = sup_mesh_ie(&p).unwrap().universe_size;
            assert_eq!(seen.len(), universe, "{p}");
        }
    }
}
