//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's complex, homology or invariants code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cwposet::Poset;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type FaceSet = BTreeSet<BTreeSet<String>>;

/// Every chain (including the empty one) of the open interval `(x, y)`.
pub fn open_chains(p: &Poset, x: usize, y: usize) -> FaceSet {
    let members: Vec<usize> = (0..p.len()).filter(|&z| p.lt(x, z) && p.lt(z, y)).collect();
    let mut out = FaceSet::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((chain, from)) = stack.pop() {
        out.insert(chain.iter().map(|&z| p.label(z).to_string()).collect());
        for (k, &z) in members.iter().enumerate().skip(from) {
            if chain.iter().all(|&c| p.lt(c, z) || p.lt(z, c)) {
                let mut next = chain.clone();
                next.push(z);
                stack.push((next, k + 1));
            }
        }
    }
    out
}

/// `Σ (-1)^{|c|-1}` over all chains `c` of `(x, y)`, the empty chain counting `-1`.
pub fn chain_euler(p: &Poset, x: usize, y: usize) -> i64 {
    open_chains(p, x, y)
        .iter()
        .map(|c| if c.len() % 2 == 1 { 1 } else { -1 })
        .sum()
}

/// Downward closure of a list of facets.
pub fn all_faces(facets: &[Vec<String>]) -> FaceSet {
    let mut out = FaceSet::new();
    for f in facets {
        for mask in 0u64..1 << f.len() {
            out.insert(
                f.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v.clone())
                    .collect(),
            );
        }
    }
    out
}

/// Faces `τ` with `z ∉ τ` and `τ ∪ {z}` a face.
pub fn brute_link(faces: &FaceSet, z: &str) -> FaceSet {
    faces
        .iter()
        .filter(|t| !t.contains(z))
        .filter(|t| {
            let mut u = (*t).clone();
            u.insert(z.to_string());
            faces.contains(&u)
        })
        .cloned()
        .collect()
}

/// Pairwise unions; vertex sets are assumed disjoint.
pub fn brute_join(a: &FaceSet, b: &FaceSet) -> FaceSet {
    let mut out = FaceSet::new();
    for s in a {
        for t in b {
            out.insert(s.union(t).cloned().collect());
        }
    }
    out
}

/// Fraction-free (Bareiss) determinant.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn poset(elements: &[&str], covers: &[(&str, &str)]) -> Poset {
    Poset::build(elements, covers).unwrap()
}

/// `0̂ < a, b, c < 1̂`.
pub fn three_middles() -> Poset {
    poset(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
}

pub fn complex(facets: &[&[&str]]) -> cwposet::SimplicialComplex {
    let f: Vec<Vec<String>> = facets.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    cwposet::SimplicialComplex::from_faces(&f).unwrap()
}
