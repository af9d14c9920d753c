//! Randomised checks of structural identities.

mod common;

use std::collections::BTreeSet;

use common::*;
use cwposet::certify::{cw_certify, CertifyBudget, Status};
use cwposet::complex::{order_complex, Face, SimplicialComplex};
use cwposet::homology::{chain_complex, invariant_factors, reduced_homology, smith_normal_form, IntMatrix};
use cwposet::invariants::{is_eulerian, is_thin, mobius, reduced_euler_characteristic};
use cwposet::shelling::{find_shelling, verify_shelling, ShellingOrder, ShellingSearch};
use cwposet::{IntervalSpec, Poset};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Ranked levels of 1-3 elements; every element above level 0 covers a
/// nonempty subset of the level below and is covered by something on the
/// level above. Optionally adds a bottom and a top.
fn build_graded(sizes: &[usize], masks: &[u8], bottom: bool, top: bool) -> Poset {
    let mut elements = Vec::new();
    let mut covers: Vec<(String, String)> = Vec::new();
    let mut next_mask = masks.iter().cycle();
    for (r, &n) in sizes.iter().enumerate() {
        for i in 0..n {
            let name = format!("r{r}_{i}");
            if r > 0 {
                let below = sizes[r - 1];
                let mut m = *next_mask.next().unwrap() as usize % (1 << below);
                if m == 0 {
                    m = 1 << (i % below);
                }
                for j in (0..below).filter(|j| m >> j & 1 == 1) {
                    covers.push((format!("r{}_{j}", r - 1), name.clone()));
                }
            }
            elements.push(name);
        }
    }
    for (r, &n) in sizes.iter().enumerate().skip(1) {
        for j in 0..sizes[r - 1] {
            let lower = format!("r{}_{j}", r - 1);
            if !covers.iter().any(|(a, _)| *a == lower) {
                covers.push((lower, format!("r{r}_{}", j % n)));
            }
        }
    }
    if bottom {
        for i in 0..sizes[0] {
            covers.push(("bot".into(), format!("r0_{i}")));
        }
        elements.push("bot".into());
    }
    if top {
        let last = sizes.len() - 1;
        for i in 0..sizes[last] {
            covers.push((format!("r{last}_{i}"), "top".into()));
        }
        elements.push("top".into());
    }
    Poset::build(&elements, &covers).unwrap()
}

fn graded_poset() -> impl Strategy<Value = Poset> {
    (
        prop::collection::vec(1usize..=3, 1..=4),
        prop::collection::vec(any::<u8>(), 12),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(sizes, masks, bottom, top)| build_graded(&sizes, &masks, bottom, top))
}

fn bounded_poset() -> impl Strategy<Value = Poset> {
    (prop::collection::vec(1usize..=3, 1..=4), prop::collection::vec(any::<u8>(), 12))
        .prop_map(|(sizes, masks)| build_graded(&sizes, &masks, true, true))
}

/// Facets as nonempty subsets of up to 8 vertices.
fn complex_from_masks(masks: &[u16]) -> SimplicialComplex {
    let faces: Vec<Vec<String>> = masks
        .iter()
        .map(|m| (0..8).filter(|b| m >> b & 1 == 1).map(|b| format!("v{b}")).collect())
        .collect();
    SimplicialComplex::from_faces(&faces).unwrap()
}

fn complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(1u16..256, 1..7).prop_map(|m| complex_from_masks(&m))
}

/// Pure complexes: facets are 3-subsets of 7 vertices.
fn pure_complex() -> impl Strategy<Value = SimplicialComplex> {
    let triples: Vec<u16> = (0u16..128).filter(|m| m.count_ones() == 3).collect();
    prop::sample::subsequence(triples, 1..=10).prop_map(|m| complex_from_masks(&m))
}

fn face_set(k: &SimplicialComplex) -> FaceSet {
    all_faces(&k.facet_labels())
}

fn dense(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covers_climb_one_rank(p in graded_poset()) {
        for (a, b) in p.covers() {
            prop_assert_eq!(p.rank(b), p.rank(a) + 1);
        }
    }

    #[test]
    fn interval_is_idempotent(p in graded_poset()) {
        for (x, y) in p.strict_pairs() {
            let spec = IntervalSpec::closed(p.label(x), p.label(y));
            let once = p.interval(&spec).unwrap();
            let twice = once.interval(&spec).unwrap();
            prop_assert!(once.is_isomorphic(&twice).unwrap());
            prop_assert_eq!(once.labels(), twice.labels());
        }
    }

    #[test]
    fn product_is_commutative_and_associative(
        a in (1usize..=2, any::<bool>()),
        b in (1usize..=2, any::<bool>()),
        c in (1usize..=2, any::<bool>()),
    ) {
        // chains or antichains of size 1-2
        let small = |(n, chain): (usize, bool)| {
            let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let covers: Vec<(String, String)> = if chain {
                (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect()
            } else {
                Vec::new()
            };
            Poset::build(&labels, &covers).unwrap()
        };
        let (p, q, r) = (small(a), small(b), small(c));
        prop_assert!(p.product(&q).is_isomorphic(&q.product(&p)).unwrap());
        prop_assert!(p.product(&q).product(&r).is_isomorphic(&p.product(&q.product(&r))).unwrap());
    }

    #[test]
    fn link_matches_brute_force(k in complex(), pick in any::<prop::sample::Index>()) {
        let faces: Vec<Face> = k.faces_by_dim().into_iter().flatten().collect();
        let sigma = pick.get(&faces);
        let link = k.link(sigma).unwrap();
        let all = face_set(&k);
        let s: BTreeSet<String> = k.labels_of(sigma).into_iter().collect();
        let brute: FaceSet = all
            .iter()
            .filter(|t| t.is_disjoint(&s) && all.contains(&t.union(&s).cloned().collect()))
            .cloned()
            .collect();
        prop_assert_eq!(face_set(&link), brute);
    }

    #[test]
    fn join_with_void_sphere_is_identity(k in complex()) {
        let j = k.join(&SimplicialComplex::void_sphere());
        prop_assert_eq!(j.facet_label_set(), k.facet_label_set());
        let j = SimplicialComplex::void_sphere().join(&k);
        prop_assert_eq!(j.facet_label_set(), k.facet_label_set());
    }

    #[test]
    fn link_of_vertex_is_join(p in graded_poset()) {
        for (x, y) in p.strict_pairs() {
            let delta = order_complex(&p.open_interval(x, y));
            for z in p.open_members(x, y) {
                let link = delta.link_of_labels(&[p.label(z)]).unwrap();
                let join = order_complex(&p.open_interval(x, z)).join(&order_complex(&p.open_interval(z, y)));
                prop_assert_eq!(face_set(&link), face_set(&join));
                prop_assert_eq!(
                    face_set(&link),
                    brute_join(&open_chains(&p, x, z), &open_chains(&p, z, y))
                );
            }
        }
    }

    #[test]
    fn link_of_chain_is_iterated_join(p in bounded_poset()) {
        let (x, y) = (p.minimum().unwrap(), p.maximum().unwrap());
        let delta = order_complex(&p.open_interval(x, y));
        for chain in open_chains(&p, x, y).into_iter().filter(|c| c.len() >= 2) {
            let mut ids: Vec<usize> = chain.iter().map(|l| p.index_of(l).unwrap()).collect();
            ids.sort_by_key(|&i| p.rank(i));
            let labels: Vec<&str> = ids.iter().map(|&i| p.label(i)).collect();
            let link = delta.link_of_labels(&labels).unwrap();
            let mut stops = vec![x];
            stops.extend(&ids);
            stops.push(y);
            let join = stops
                .windows(2)
                .map(|w| order_complex(&p.open_interval(w[0], w[1])))
                .reduce(|a, b| a.join(&b))
                .unwrap();
            prop_assert_eq!(face_set(&link), face_set(&join));
        }
    }

    #[test]
    fn hall_identity(p in graded_poset()) {
        let mu = mobius(&p);
        for (x, y) in p.strict_pairs() {
            let expected = BigInt::from(chain_euler(&p, x, y));
            prop_assert_eq!(mu.get(x, y), Some(&expected));
            prop_assert_eq!(
                BigInt::from(reduced_euler_characteristic(&order_complex(&p.open_interval(x, y)))),
                expected
            );
        }
    }

    #[test]
    fn mobius_rows_sum_to_zero(p in graded_poset()) {
        let mu = mobius(&p);
        for (x, y) in p.strict_pairs() {
            let sum: BigInt = (0..p.len())
                .filter(|&z| p.le(x, z) && p.le(z, y))
                .map(|z| mu.get(x, z).cloned().unwrap())
                .sum();
            prop_assert!(sum.is_zero());
        }
    }

    #[test]
    fn eulerian_implies_thin(p in bounded_poset()) {
        if is_eulerian(&p).unwrap().holds() {
            prop_assert!(is_thin(&p).holds());
        }
    }

    #[test]
    fn boundary_squares_to_zero(k in complex()) {
        let cc = chain_complex(&k);
        for i in 0..cc.dim() {
            let lower = cc.boundary(i).unwrap().to_dense();
            let upper = cc.boundary(i + 1).unwrap().to_dense();
            prop_assert!(lower.mul(&upper).is_zero());
        }
    }

    #[test]
    fn betti_alternating_sum_is_reduced_euler(k in complex()) {
        prop_assert_eq!(reduced_homology(&k).euler_characteristic(), reduced_euler_characteristic(&k));
    }

    #[test]
    fn sparse_and_dense_snf_agree(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6)) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal_matrix());
        let sparse = cwposet::homology::SparseMatrix {
            rows: rows.len(),
            cols: 5,
            entries: rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(j, &v)| (j, v)).collect())
                .collect(),
        };
        prop_assert_eq!(sparse.invariant_factors(), invariant_factors(&m));
        if rows.len() == 5 {
            let det = bareiss_det(&dense(&m)).abs();
            let product: BigInt = if s.rank() == 5 { s.diagonal.iter().product() } else { BigInt::zero() };
            prop_assert_eq!(det, product);
        }
    }

    #[test]
    fn shellings_verify_and_are_prefix_closed(k in pure_complex()) {
        if let ShellingSearch::Found(order) = find_shelling(&k, 100_000).unwrap() {
            prop_assert!(verify_shelling(&k, &order).unwrap().holds());
            let labels = order.facet_labels(&k);
            for len in 1..labels.len() {
                let prefix = SimplicialComplex::from_faces(&labels[..len]).unwrap();
                let idx: Vec<usize> = labels[..len]
                    .iter()
                    .map(|f| {
                        let set: BTreeSet<String> = f.iter().cloned().collect();
                        prefix
                            .facet_labels()
                            .iter()
                            .position(|g| g.iter().cloned().collect::<BTreeSet<_>>() == set)
                            .unwrap()
                    })
                    .collect();
                prop_assert!(verify_shelling(&prefix, &ShellingOrder(idx)).unwrap().holds());
            }
        }
    }

    #[test]
    fn certificate_is_consistent(p in bounded_poset()) {
        let cert = cw_certify(&p, CertifyBudget::default());
        let mu = mobius(&p);
        let rank_of = |l: &str| p.rank(p.index_of(l).unwrap());
        for rec in &cert.intervals {
            let (x, y) = (p.index_of(&rec.lower).unwrap(), p.index_of(&rec.upper).unwrap());
            if rec.status == Status::CertifiedSphere {
                let sign = if rec.rank_difference % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                prop_assert_eq!(mu.get(x, y), Some(&sign));
            }
            for (a, b) in &rec.dependencies {
                prop_assert!(rank_of(b) - rank_of(a) < rec.rank_difference);
                let pos = cert.intervals.iter().position(|r| &r.lower == a && &r.upper == b).unwrap();
                let here = cert.intervals.iter().position(|r| r == rec).unwrap();
                prop_assert!(pos < here);
            }
        }
    }
}
