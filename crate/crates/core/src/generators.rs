//! Example families: Boolean lattices, cross-polytope face posets, Bruhat
//! intervals in symmetric groups, and a small catalogue of triangulations
//! with known homology.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::homology::{HomologyGroup, HomologyGroups};
use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("{family} parameter {value} outside {min}..={max}")]
    OutOfRange {
        family: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("`{0}` is not a permutation of 1..{1}")]
    NotAPermutation(String, usize),
    #[error("{0} is not below {1} in Bruhat order")]
    NotComparable(String, String),
    #[error("unknown triangulation `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

fn check_range(family: &'static str, value: usize, min: usize, max: usize) -> Result<(), GeneratorError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(GeneratorError::OutOfRange {
            family,
            value,
            min,
            max,
        })
    }
}

fn set_label<I: IntoIterator<Item = String>>(items: I) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(","))
}

/// Subsets of `{1..n}` ordered by inclusion, labelled `{}`, `{1}`, `{1,2}`, ...
pub fn boolean_lattice(n: usize) -> Result<Poset, GeneratorError> {
    check_range("boolean_lattice", n, 1, 8)?;
    let size = 1usize << n;
    let mut masks: Vec<usize> = (0..size).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let position: HashMap<usize, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let labels = masks
        .iter()
        .map(|&m| set_label((0..n).filter(|b| m >> b & 1 == 1).map(|b| (b + 1).to_string())))
        .collect();
    let mut covers = Vec::new();
    for &m in &masks {
        for b in (0..n).filter(|b| m >> b & 1 == 0) {
            covers.push((position[&m], position[&(m | 1 << b)]));
        }
    }
    Ok(Poset::from_indexed(labels, &covers)?)
}

/// Face poset, with `0̂ = ∅`, of the boundary of the `n`-dimensional
/// cross-polytope. Faces are sign-consistent subsets of `{±1..±n}` of size
/// at most `n`, labelled like `{+1,-3}`.
pub fn crosspolytope_face_poset(n: usize) -> Result<Poset, GeneratorError> {
    check_range("crosspolytope_face_poset", n, 1, 6)?;
    // each coordinate is absent (0), positive (1) or negative (2)
    let mut faces: Vec<Vec<u8>> = Vec::new();
    let total = 3usize.pow(n as u32);
    for mut code in 0..total {
        let mut f = vec![0u8; n];
        for slot in f.iter_mut() {
            *slot = (code % 3) as u8;
            code /= 3;
        }
        faces.push(f);
    }
    let size = |f: &Vec<u8>| f.iter().filter(|&&s| s != 0).count();
    faces.sort_by(|a, b| size(a).cmp(&size(b)).then_with(|| a.cmp(b)));
    let position: HashMap<Vec<u8>, usize> = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let labels = faces
        .iter()
        .map(|f| {
            set_label(f.iter().enumerate().filter(|(_, &s)| s != 0).map(|(i, &s)| {
                format!("{}{}", if s == 1 { '+' } else { '-' }, i + 1)
            }))
        })
        .collect();
    let mut covers = Vec::new();
    for f in &faces {
        for i in (0..n).filter(|&i| f[i] == 0) {
            for s in [1u8, 2] {
                let mut g = f.clone();
                g[i] = s;
                if let Some(&j) = position.get(&g) {
                    covers.push((position[f], j));
                }
            }
        }
    }
    Ok(Poset::from_indexed(labels, &covers)?)
}

/// A permutation in one-line notation, values `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    pub fn longest(n: usize) -> Self {
        Permutation((1..=n as u8).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count())
            .sum()
    }

    fn swapped(&self, i: usize, j: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i, j);
        Permutation(v)
    }

    /// Bruhat comparison by the sorted-prefix criterion.
    pub fn bruhat_le(&self, other: &Permutation) -> bool {
        if self.len() != other.len() {
            return false;
        }
        (1..self.len()).all(|k| {
            let mut a = self.0[..k].to_vec();
            let mut b = other.0[..k].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a.iter().zip(&b).all(|(x, y)| x <= y)
        })
    }

    /// Permutations `v·t` for transpositions `t` that raise the length by exactly one.
    pub fn upper_covers(&self) -> Vec<Permutation> {
        let target = self.length() + 1;
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let v = self.swapped(i, j);
                if v.length() == target {
                    out.push(v);
                }
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl Permutation {
    /// Parses one-line notation such as `2143` (or `2,1,4,3`) as a permutation of `1..=n`.
    pub fn parse(text: &str, n: usize) -> Result<Self, GeneratorError> {
        let bad = || GeneratorError::NotAPermutation(text.to_string(), n);
        let digits: Vec<u8> = if text.contains(',') {
            text.split(',')
                .map(|s| s.trim().parse::<u8>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        let mut sorted = digits.clone();
        sorted.sort_unstable();
        if sorted != (1..=n as u8).collect::<Vec<_>>() {
            return Err(bad());
        }
        Ok(Permutation(digits))
    }
}

/// The closed Bruhat interval `[u, w]` in `S_n`, labelled in one-line notation.
pub fn bruhat_interval(n: usize, u: &Permutation, w: &Permutation) -> Result<Poset, GeneratorError> {
    check_range("bruhat_interval", n, 2, 6)?;
    for p in [u, w] {
        if p.len() != n {
            return Err(GeneratorError::NotAPermutation(p.to_string(), n));
        }
    }
    if !u.bruhat_le(w) {
        return Err(GeneratorError::NotComparable(u.to_string(), w.to_string()));
    }
    let mut elements = vec![u.clone()];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(u.clone(), 0)]);
    let mut covers = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let up = elements[i].upper_covers();
        for v in up {
            if !v.bruhat_le(w) {
                continue;
            }
            let j = *index.entry(v.clone()).or_insert_with(|| {
                elements.push(v);
                queue.push_back(elements.len() - 1);
                elements.len() - 1
            });
            covers.push((i, j));
        }
    }
    let labels = elements.iter().map(Permutation::to_string).collect();
    Ok(Poset::from_indexed(labels, &covers)?)
}

/// Catalogue entries for [`named_triangulation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangulationName {
    BoundarySimplex(usize),
    Rp2_6,
    Torus7,
    BoundaryCrosspolytope(usize),
}

impl fmt::Display for TriangulationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriangulationName::BoundarySimplex(d) => write!(f, "boundary_simplex({d})"),
            TriangulationName::Rp2_6 => write!(f, "rp2_6"),
            TriangulationName::Torus7 => write!(f, "torus_7"),
            TriangulationName::BoundaryCrosspolytope(d) => write!(f, "boundary_crosspolytope({d})"),
        }
    }
}

impl FromStr for TriangulationName {
    type Err = GeneratorError;

    /// Accepts `rp2_6`, `torus_7`, `boundary_simplex(3)` or `boundary_simplex:3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GeneratorError::UnknownName(s.to_string());
        let s = s.trim();
        match s {
            "rp2_6" => return Ok(TriangulationName::Rp2_6),
            "torus_7" => return Ok(TriangulationName::Torus7),
            _ => {}
        }
        let (head, arg) = match s.split_once('(') {
            Some((h, rest)) => (h, rest.strip_suffix(')').ok_or_else(unknown)?),
            None => s.split_once(':').ok_or_else(unknown)?,
        };
        let d: usize = arg.trim().parse().map_err(|_| unknown())?;
        match head.trim() {
            "boundary_simplex" => Ok(TriangulationName::BoundarySimplex(d)),
            "boundary_crosspolytope" => Ok(TriangulationName::BoundaryCrosspolytope(d)),
            _ => Err(unknown()),
        }
    }
}

/// A stored triangulation with its known reduced homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedTriangulation {
    pub name: TriangulationName,
    pub complex: SimplicialComplex,
    pub expected: HomologyGroups,
}

fn homology_table(top: isize, nonzero: &[(isize, usize, u32)]) -> HomologyGroups {
    let groups = (-1..=top)
        .map(|dim| {
            let (betti, torsion) = nonzero
                .iter()
                .find(|(d, _, _)| *d == dim)
                .map_or((0, Vec::new()), |&(_, b, t)| {
                    (b, if t > 1 { vec![BigInt::from(t)] } else { Vec::new() })
                });
            HomologyGroup { dim, betti, torsion }
        })
        .collect();
    HomologyGroups { groups }
}

fn complex_of(facets: &[Vec<usize>]) -> SimplicialComplex {
    let faces: Vec<Vec<String>> = facets
        .iter()
        .map(|f| f.iter().map(|v| v.to_string()).collect())
        .collect();
    SimplicialComplex::from_faces(&faces).expect("nonempty catalogue entry")
}

fn without_each(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect()
}

pub fn named_triangulation(name: TriangulationName) -> Result<NamedTriangulation, GeneratorError> {
    let (complex, expected) = match name {
        TriangulationName::BoundarySimplex(d) => {
            check_range("boundary_simplex", d, 1, 6)?;
            let k = complex_of(&without_each(d + 1));
            (k, homology_table(d as isize - 1, &[(d as isize - 1, 1, 0)]))
        }
        TriangulationName::BoundaryCrosspolytope(d) => {
            check_range("boundary_crosspolytope", d, 1, 5)?;
            // vertex 2i is +e_i, 2i+1 is -e_i
            let facets = (0..1usize << d)
                .map(|signs| (0..d).map(|i| 2 * i + (signs >> i & 1)).collect())
                .collect::<Vec<Vec<usize>>>();
            let facets: Vec<Vec<String>> = facets
                .iter()
                .map(|f| {
                    f.iter()
                        .map(|&v| format!("{}{}", if v % 2 == 0 { '+' } else { '-' }, v / 2 + 1))
                        .collect()
                })
                .collect();
            let k = SimplicialComplex::from_faces(&facets).expect("nonempty");
            (k, homology_table(d as isize - 1, &[(d as isize - 1, 1, 0)]))
        }
        TriangulationName::Rp2_6 => {
            let facets = [
                [1, 2, 3],
                [1, 3, 4],
                [1, 4, 5],
                [1, 5, 6],
                [1, 2, 6],
                [2, 3, 5],
                [3, 4, 6],
                [2, 4, 5],
                [3, 5, 6],
                [2, 4, 6],
            ];
            let k = complex_of(&facets.iter().map(|f| f.to_vec()).collect::<Vec<_>>());
            (k, homology_table(2, &[(1, 0, 2)]))
        }
        TriangulationName::Torus7 => {
            let facets: Vec<Vec<usize>> = (0..7)
                .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
                .collect();
            (complex_of(&facets), homology_table(2, &[(1, 2, 0), (2, 1, 0)]))
        }
    };
    Ok(NamedTriangulation {
        name,
        complex,
        expected,
    })
}

/// Parses the name first; see [`TriangulationName`].
pub fn named_triangulation_str(name: &str) -> Result<NamedTriangulation, GeneratorError> {
    named_triangulation(name.parse()?)
}
