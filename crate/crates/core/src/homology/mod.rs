//! Exact reduced integral homology of simplicial complexes and the tests
//! built on it: homology spheres, Cohen-Macaulayness, orientability and a
//! sound fundamental-group triviality heuristic.
//!
//! Everything uses the augmented chain complex, so `[∅]` has `H̃₋₁ = ℤ` and a
//! connected complex has `H̃₀ = 0`.

mod pi1;
mod snf;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{Face, SimplicialComplex};

pub use pi1::{pi1_triviality, Pi1Verdict, DEFAULT_PI1_BUDGET};
pub use snf::{invariant_factors, smith_normal_form, IntMatrix, SnfResult, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("complex has dimension {actual}, expected {expected}")]
    DimensionMismatch { expected: isize, actual: isize },
    #[error("complex is not pure")]
    NotPure,
}

/// Augmented simplicial chain complex with lexicographically ordered bases.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    /// `bases[k]` are the `(k-1)`-faces; `bases[0] = [∅]`.
    bases: Vec<Vec<Face>>,
    /// `boundaries[i]` is `∂_i`.
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Top dimension of the complex.
    pub fn dim(&self) -> isize {
        self.bases.len() as isize - 2
    }

    /// Ordered basis of `i`-faces, `i ≥ -1`.
    pub fn basis(&self, i: isize) -> &[Face] {
        self.bases
            .get((i + 1) as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// `∂_i : C_i → C_{i-1}` for `0 ≤ i ≤ dim`, rows indexed by `(i-1)`-faces.
    pub fn boundary(&self, i: isize) -> Option<&SparseMatrix> {
        if i < 0 {
            return None;
        }
        self.boundaries.get(i as usize)
    }
}

/// Builds the augmented chain complex; the orientation of a face is its
/// sorted vertex order and `∂[v₀…v_k] = Σ (-1)^j [v₀…v̂_j…v_k]`.
pub fn chain_complex(complex: &SimplicialComplex) -> ChainComplex {
    let bases = complex.faces_by_dim();
    let mut boundaries = Vec::with_capacity(bases.len().saturating_sub(1));
    for k in 1..bases.len() {
        let lower: HashMap<&Face, usize> = bases[k - 1].iter().enumerate().map(|(i, f)| (f, i)).collect();
        // build transposed (one row per face), then transpose into ∂ layout
        let rows: Vec<Vec<(usize, i64)>> = bases[k]
            .iter()
            .map(|f| {
                let mut row: Vec<(usize, i64)> = (0..f.len())
                    .map(|pos| {
                        let sign = if pos % 2 == 0 { 1 } else { -1 };
                        (lower[&f.without_position(pos)], sign)
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        let transposed = SparseMatrix {
            rows: bases[k].len(),
            cols: bases[k - 1].len(),
            entries: rows,
        };
        boundaries.push(transposed.transpose());
    }
    ChainComplex { bases, boundaries }
}

mod bigint_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// One reduced homology group `ℤ^betti ⊕ ⨁ ℤ/t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub dim: isize,
    pub betti: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Exactly `ℤ`.
    pub fn is_integers(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Reduced homology in every dimension from `-1` to the complex dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroups {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyGroups {
    /// Group in dimension `i`; zero outside the stored range.
    pub fn group(&self, i: isize) -> HomologyGroup {
        self.groups
            .iter()
            .find(|g| g.dim == i)
            .cloned()
            .unwrap_or(HomologyGroup {
                dim: i,
                betti: 0,
                torsion: Vec::new(),
            })
    }

    pub fn betti(&self, i: isize) -> usize {
        self.group(i).betti
    }

    pub fn torsion(&self, i: isize) -> Vec<BigInt> {
        self.group(i).torsion
    }

    /// Nonzero groups only.
    pub fn nonzero(&self) -> impl Iterator<Item = &HomologyGroup> {
        self.groups.iter().filter(|g| !g.is_zero())
    }

    /// `Σ (-1)^i betti_i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.dim.rem_euclid(2) == 0 { g.betti as i64 } else { -(g.betti as i64) })
            .sum()
    }
}

impl fmt::Display for HomologyGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|g| format!("H~{} = {}", g.dim, g)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Reduced homology from the invariant factors of the boundary maps.
pub fn reduced_homology(complex: &SimplicialComplex) -> HomologyGroups {
    let cc = chain_complex(complex);
    // factors[i] = invariant factors of ∂_i
    let factors: Vec<Vec<BigInt>> = cc.boundaries.iter().map(SparseMatrix::invariant_factors).collect();
    let top = cc.bases.len();
    let groups = (0..top)
        .map(|k| {
            let n = cc.bases[k].len();
            let rank_out = if k == 0 { 0 } else { factors[k - 1].len() };
            let incoming = factors.get(k);
            let rank_in = incoming.map_or(0, Vec::len);
            let torsion = incoming
                .map(|fs| fs.iter().filter(|d| !d.is_one()).cloned().collect())
                .unwrap_or_default();
            HomologyGroup {
                dim: k as isize - 1,
                betti: n - rank_out - rank_in,
                torsion,
            }
        })
        .collect();
    HomologyGroups { groups }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereVerdict {
    HomologySphere,
    /// First dimension where the homology differs from that of a sphere.
    NotSphere { dim: isize, group: String },
}

impl SphereVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SphereVerdict::HomologySphere)
    }
}

/// `H̃_i = 0` below `d` and `H̃_d = ℤ`.
pub fn is_homology_sphere(complex: &SimplicialComplex, d: isize) -> Result<SphereVerdict, HomologyError> {
    if complex.dim() != d {
        return Err(HomologyError::DimensionMismatch {
            expected: d,
            actual: complex.dim(),
        });
    }
    Ok(sphere_verdict(&reduced_homology(complex), d))
}

fn sphere_verdict(h: &HomologyGroups, d: isize) -> SphereVerdict {
    for g in &h.groups {
        let ok = if g.dim == d { g.is_integers() } else { g.is_zero() };
        if !ok {
            return SphereVerdict::NotSphere {
                dim: g.dim,
                group: g.to_string(),
            };
        }
    }
    SphereVerdict::HomologySphere
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmVerdict {
    /// Integral-homology surrogate of the homotopy Cohen-Macaulay property.
    HomologyCohenMacaulay,
    Fails {
        face: Vec<String>,
        dim: isize,
        group: String,
    },
}

impl CmVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CmVerdict::HomologyCohenMacaulay)
    }
}

/// For every face `σ` (including `∅`), the link has vanishing reduced
/// homology below its top dimension and torsion-free top homology.
/// The first failing face in (dimension, lexicographic) order is reported.
pub fn is_homology_cm(complex: &SimplicialComplex) -> Result<CmVerdict, HomologyError> {
    if !complex.is_pure() {
        return Err(HomologyError::NotPure);
    }
    let faces: Vec<Face> = complex.faces_by_dim().into_iter().flatten().collect();
    let failures: Vec<Option<CmVerdict>> = faces
        .par_iter()
        .map(|sigma| {
            let link = complex.link(sigma).expect("enumerated faces belong to the complex");
            let top = link.dim();
            let h = reduced_homology(&link);
            h.groups
                .iter()
                .find(|g| if g.dim < top { !g.is_zero() } else { !g.torsion.is_empty() })
                .map(|g| CmVerdict::Fails {
                    face: complex.labels_of(sigma),
                    dim: g.dim,
                    group: g.to_string(),
                })
        })
        .collect();
    Ok(failures
        .into_iter()
        .flatten()
        .next()
        .unwrap_or(CmVerdict::HomologyCohenMacaulay))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientability {
    Orientable,
    NonOrientable,
    NotPseudomanifold,
}

/// For a strongly connected pseudomanifold the top homology is `ℤ` exactly
/// when it is orientable and `0` otherwise.
pub fn orientability_class(complex: &SimplicialComplex) -> Orientability {
    if !complex.is_pseudomanifold() {
        return Orientability::NotPseudomanifold;
    }
    let h = reduced_homology(complex);
    match h.betti(complex.dim()) {
        1 => Orientability::Orientable,
        0 => Orientability::NonOrientable,
        _ => Orientability::NotPseudomanifold,
    }
}
