//! Acceptance criteria AC1-AC10. Each test prints one `[PASS]`/`[FAIL]` line
//! (visible with `--nocapture`) and then asserts.

mod common;

use std::time::{Duration, Instant};

use common::*;
use cwposet::certify::{cw_certify, CertifyBudget, CwVerdict, Route, Status};
use cwposet::complex::{face_poset, order_complex, SimplicialComplex};
use cwposet::generators::{
    boolean_lattice, bruhat_interval, named_triangulation, Permutation, TriangulationName,
};
use cwposet::homology::{
    orientability_class, pi1_triviality, reduced_homology, smith_normal_form, IntMatrix, Orientability,
    Pi1Verdict, DEFAULT_PI1_BUDGET,
};
use cwposet::invariants::{is_eulerian, is_thin, mobius, reduced_euler_characteristic};
use cwposet::shelling::{
    danaraj_klee_check, find_shelling, verify_shelling, DkVerdict, ShellingSearch, DEFAULT_SHELLING_BUDGET,
};
use cwposet::Poset;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: &str, what: &str, started: Instant, limit: Option<Duration>, failures: Vec<String>) {
    let elapsed = started.elapsed();
    let mut failures = failures;
    if let Some(limit) = limit {
        if elapsed > limit {
            failures.push(format!("took {elapsed:.2?}, limit {limit:.0?}"));
        }
    }
    let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("[{tag}] {id} {what} ({elapsed:.2?})");
    for f in &failures {
        println!("       {f}");
    }
    assert!(failures.is_empty(), "{id}: {failures:?}");
}

fn s_n(n: usize) -> Poset {
    bruhat_interval(n, &Permutation::identity(n), &Permutation::longest(n)).unwrap()
}

fn triangulation(name: TriangulationName) -> SimplicialComplex {
    named_triangulation(name).unwrap().complex
}

#[test]
fn ac01_hall_identity() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (name, p) in [("B4", boolean_lattice(4).unwrap()), ("S3", s_n(3))] {
        let mu = mobius(&p);
        for x in 0..p.len() {
            if mu.get(x, x) != Some(&BigInt::one()) {
                failures.push(format!("{name}: mu({0},{0}) != 1", p.label(x)));
            }
            for y in (0..p.len()).filter(|&y| p.lt(x, y)) {
                let m = mu.get(x, y).cloned().unwrap_or_default();
                let oracle = BigInt::from(chain_euler(&p, x, y));
                let library = BigInt::from(reduced_euler_characteristic(&order_complex(&p.open_interval(x, y))));
                if m != oracle || library != oracle {
                    failures.push(format!(
                        "{name}: ({}, {}) mu = {m}, chains give {oracle}, complex gives {library}",
                        p.label(x),
                        p.label(y)
                    ));
                }
            }
        }
    }
    verdict("AC1", "Hall identity on B4 and S3", t, Some(Duration::from_secs(5)), failures);
}

#[test]
fn ac02_eulerian_and_thin() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (name, p) in [("B5", boolean_lattice(5).unwrap()), ("S4", s_n(4))] {
        let thin = is_thin(&p);
        if !thin.violations.is_empty() {
            failures.push(format!("{name}: {} thinness witnesses", thin.violations.len()));
        }
        if !is_eulerian(&p).unwrap().holds() {
            failures.push(format!("{name}: not Eulerian"));
        }
    }
    let thin = is_thin(&three_middles());
    if thin.violations.len() != 1 {
        failures.push(format!("3-middles: {} witnesses, expected 1", thin.violations.len()));
    } else {
        let v = &thin.violations[0];
        if (v.lower.as_str(), v.upper.as_str(), v.middle_count) != ("0", "1", 3) {
            failures.push(format!("3-middles: unexpected witness {v:?}"));
        }
    }
    verdict("AC2", "Eulerian/thin on B5, S4; 3-middles witness", t, Some(Duration::from_secs(30)), failures);
}

/// A nonzero group as `(dim, betti, torsion)`.
type Group<'a> = (isize, usize, &'a [u32]);

#[test]
fn ac03_homology_oracles() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let cases: [(TriangulationName, &[Group]); 3] = [
        (TriangulationName::BoundarySimplex(3), &[(2, 1, &[])]),
        (TriangulationName::Rp2_6, &[(1, 0, &[2])]),
        (TriangulationName::Torus7, &[(1, 2, &[]), (2, 1, &[])]),
    ];
    for (name, expected) in cases {
        let k = triangulation(name);
        let each = Instant::now();
        let h = reduced_homology(&k);
        let elapsed = each.elapsed();
        let got: Vec<(isize, usize, Vec<BigInt>)> =
            h.nonzero().map(|g| (g.dim, g.betti, g.torsion.clone())).collect();
        let want: Vec<(isize, usize, Vec<BigInt>)> = expected
            .iter()
            .map(|(d, b, ts)| (*d, *b, ts.iter().map(|&x| BigInt::from(x)).collect()))
            .collect();
        if got != want {
            failures.push(format!("{name}: got {h}"));
        }
        if elapsed > Duration::from_secs(2) {
            failures.push(format!("{name}: took {elapsed:.2?}"));
        }
    }
    verdict("AC3", "homology of boundary tetrahedron, RP2, torus", t, None, failures);
}

#[test]
fn ac04_boolean_certification() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for n in 2..=5 {
        let each = Instant::now();
        let p = boolean_lattice(n).unwrap();
        let cert = cw_certify(&p, CertifyBudget::default());
        if !cert.cw_poset || cert.verdict != CwVerdict::CwPoset {
            failures.push(format!("B{n}: verdict {:?}", cert.verdict));
        }
        let lower: Vec<_> = cert.intervals.iter().filter(|r| r.lower == "{}").collect();
        if lower.len() != (1 << n) - 1 {
            failures.push(format!("B{n}: {} intervals from the bottom", lower.len()));
        }
        for r in lower.iter().filter(|r| r.status != Status::CertifiedSphere) {
            failures.push(format!("B{n}: ({}, {}) is {:?}", r.lower, r.upper, r.status));
        }
        if n <= 4 {
            for r in cert
                .intervals
                .iter()
                .filter(|r| !matches!(r.route, Route::LowDimExact | Route::DanarajKlee))
            {
                failures.push(format!("B{n}: ({}, {}) used {:?}", r.lower, r.upper, r.route));
            }
        }
        if n == 5 && each.elapsed() > Duration::from_secs(60) {
            failures.push(format!("B5 took {:.2?}", each.elapsed()));
        }
    }
    verdict("AC4", "cw_certify on B2..B5", t, None, failures);
}

#[test]
fn ac05_bruhat_danaraj_klee() {
    let t = Instant::now();
    let p = s_n(4);
    let report = danaraj_klee_check(&p, DEFAULT_SHELLING_BUDGET);
    let mut failures = Vec::new();
    if report.verdict != DkVerdict::CwCertified {
        failures.push(format!("verdict {:?}", report.verdict));
    }
    verdict("AC5", "Danaraj-Klee certifies S4", t, Some(Duration::from_secs(300)), failures);
}

#[test]
fn ac06_link_join_identity() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut check = |name: &str, p: &Poset, x: usize, z: usize, y: usize| {
        let delta = order_complex(&p.open_interval(x, y));
        let faces = open_chains(p, x, y);
        let lib_faces = all_faces(&delta.facet_labels());
        let link = delta.link_of_labels(&[p.label(z)]).unwrap();
        let join = order_complex(&p.open_interval(x, z)).join(&order_complex(&p.open_interval(z, y)));
        let oracle = brute_join(&open_chains(p, x, z), &open_chains(p, z, y));
        let ok = lib_faces == faces
            && brute_link(&faces, p.label(z)) == oracle
            && all_faces(&link.facet_labels()) == oracle
            && all_faces(&join.facet_labels()) == oracle;
        if !ok {
            failures.push(format!("{name}: ({}, {}) at {}", p.label(x), p.label(y), p.label(z)));
        }
    };
    let mut total = 0;
    for (name, p) in [("B4", boolean_lattice(4).unwrap()), ("S3", s_n(3))] {
        for (x, y) in p.strict_pairs() {
            for z in p.open_members(x, y) {
                check(name, &p, x, z, y);
                total += 1;
            }
        }
    }
    let b5 = boolean_lattice(5).unwrap();
    let pairs: Vec<(usize, usize)> = b5
        .strict_pairs()
        .into_iter()
        .filter(|&(x, y)| b5.rank(y) - b5.rank(x) >= 2)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let (x, y) = pairs[rng.gen_range(0..pairs.len())];
        let middle = b5.open_members(x, y);
        let z = middle[rng.gen_range(0..middle.len())];
        check("B5", &b5, x, z, y);
        total += 1;
    }
    verdict(
        "AC6",
        &format!("link = join on {total} (interval, vertex) pairs"),
        t,
        None,
        failures,
    );
}

#[test]
fn ac07_shelling_search() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let sphere = triangulation(TriangulationName::BoundarySimplex(4));
    match find_shelling(&sphere, DEFAULT_SHELLING_BUDGET).unwrap() {
        ShellingSearch::Found(order) => {
            if !verify_shelling(&sphere, &order).unwrap().holds() {
                failures.push("boundary 4-simplex: returned order does not verify".into());
            }
        }
        other => failures.push(format!("boundary 4-simplex: {other:?}")),
    }
    let rp2 = triangulation(TriangulationName::Rp2_6);
    match find_shelling(&rp2, DEFAULT_SHELLING_BUDGET).unwrap() {
        ShellingSearch::None => {}
        other => failures.push(format!("rp2_6: {other:?}, expected none by exhaustion")),
    }
    verdict("AC7", "shelling found for boundary 4-simplex, none for RP2", t, Some(Duration::from_secs(600)), failures);
}

#[test]
fn ac08_negative_controls() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let rp2 = triangulation(TriangulationName::Rp2_6);
    let tet = triangulation(TriangulationName::BoundarySimplex(3));
    if orientability_class(&rp2) != Orientability::NonOrientable {
        failures.push("rp2_6 not reported non-orientable".into());
    }
    if pi1_triviality(&rp2, DEFAULT_PI1_BUDGET) != Pi1Verdict::Unknown {
        failures.push("rp2_6 pi1 not unknown".into());
    }
    if pi1_triviality(&tet, DEFAULT_PI1_BUDGET) != Pi1Verdict::Trivial {
        failures.push("boundary tetrahedron pi1 not trivial".into());
    }
    let cert = cw_certify(&three_middles(), CertifyBudget::default());
    if cert.cw_poset || cert.failing_interval != Some(("0".into(), "1".into())) {
        failures.push(format!("3-middles: {:?} at {:?}", cert.verdict, cert.failing_interval));
    }
    verdict("AC8", "negative controls", t, None, failures);
}

#[test]
fn ac09_barycentric_identity() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let cases = [
        ("edge", complex(&[&["a", "b"]])),
        ("boundary triangle", complex(&[&["a", "b"], &["b", "c"], &["a", "c"]])),
        ("solid triangle", complex(&[&["a", "b", "c"]])),
        ("boundary tetrahedron", triangulation(TriangulationName::BoundarySimplex(3))),
    ];
    for (name, k) in cases {
        let proper = face_poset(&k).without_minimum().unwrap();
        let delta = order_complex(&proper);
        if !delta.is_isomorphic(&k.barycentric_subdivision()).unwrap() {
            failures.push(format!("{name}: not isomorphic"));
        }
    }
    verdict("AC9", "order complex of proper face poset is sd(K)", t, None, failures);
}

#[test]
fn ac10_snf_battery() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..200 {
        let r = rng.gen_range(1..=8);
        let c = if case % 2 == 0 { r } else { rng.gen_range(1..=8) };
        let rows: Vec<Vec<BigInt>> = (0..r)
            .map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        if s.left.mul(&m).mul(&s.right) != s.diagonal_matrix() {
            failures.push(format!("case {case}: left*M*right != D"));
        }
        if s.diagonal.iter().any(|d| !d.is_positive()) || s.diagonal.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            failures.push(format!("case {case}: divisibility chain broken"));
        }
        let dense = |a: &IntMatrix| -> Vec<Vec<BigInt>> {
            (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).clone()).collect()).collect()
        };
        for (side, u) in [("left", &s.left), ("right", &s.right)] {
            if bareiss_det(&dense(u)).abs() != BigInt::one() {
                failures.push(format!("case {case}: {side} transform not unimodular"));
            }
        }
        if r == c {
            let det = bareiss_det(&rows).abs();
            let product: BigInt = if s.rank() == r { s.diagonal.iter().product() } else { BigInt::zero() };
            if det != product {
                failures.push(format!("case {case}: |det| {det} vs product {product}"));
            }
        } else {
            // gcd of all entries is the first invariant factor
            let g = rows.iter().flatten().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            let first = s.diagonal.first().cloned().unwrap_or_default();
            if g != first {
                failures.push(format!("case {case}: gcd {g} vs d1 {first}"));
            }
        }
    }
    verdict("AC10", "Smith normal form on 200 random matrices", t, None, failures);
}
