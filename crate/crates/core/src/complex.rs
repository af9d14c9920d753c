//! Finite abstract simplicial complexes stored by their facets, together with
//! the order complex / face poset dictionary.
//!
//! A complex with the single facet `∅` is the (-1)-sphere; it is the identity
//! for [`SimplicialComplex::join`] and is what the order complex of an empty
//! poset produces. A complex with no faces at all is never constructed.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iso::{self, IsoOutcome, Matcher};
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("a complex needs at least one face (use a single empty facet for the (-1)-sphere)")]
    NoFaces,
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<String>),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("isomorphism search exceeded its node budget")]
    BudgetExceeded,
}

/// A face: strictly increasing vertex indices into its complex's vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Face(vertices)
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    /// Simplicial dimension, `-1` for the empty face.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Sorted-merge subset test.
    pub fn is_subset(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| other.0.binary_search(v).is_ok()).collect())
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_err())
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Face::new(v)
    }

    /// The face with the vertex at position `pos` removed.
    pub fn without_position(&self, pos: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(pos);
        Face(v)
    }

    /// All subsets, including `∅` and the face itself.
    pub fn subfaces(&self) -> impl Iterator<Item = Face> + '_ {
        let k = self.0.len();
        assert!(k < 64, "face too large to enumerate");
        (0u64..1 << k).map(move |mask| {
            Face((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }
}

impl Deref for Face {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Result of a purity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Purity {
    Pure,
    /// Two facets of different dimension.
    Impure { smaller: Vec<String>, larger: Vec<String> },
}

impl Purity {
    pub fn is_pure(&self) -> bool {
        matches!(self, Purity::Pure)
    }
}

/// The three sub-checks of the pseudomanifold condition, reported separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudomanifoldReport {
    pub pure: bool,
    /// Every ridge lies in exactly two facets.
    pub ridge_degree_two: bool,
    /// First ridge with the wrong facet count, and that count.
    pub ridge_witness: Option<(Vec<String>, usize)>,
    /// Facet-ridge adjacency graph is connected.
    pub strongly_connected: bool,
}

impl PseudomanifoldReport {
    /// Pure, ridge degree two and strongly connected.
    pub fn is_pseudomanifold(&self) -> bool {
        self.pure && self.ridge_degree_two && self.strongly_connected
    }

    /// Pure and ridge degree two, without the connectivity requirement.
    pub fn is_weak_pseudomanifold(&self) -> bool {
        self.pure && self.ridge_degree_two
    }
}

/// A finite abstract simplicial complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Face>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces` (any generating set; non-maximal
    /// entries are dropped). Vertex order is order of first appearance.
    pub fn from_faces<S: AsRef<str>>(faces: &[Vec<S>]) -> Result<Self, ComplexError> {
        if faces.is_empty() {
            return Err(ComplexError::NoFaces);
        }
        let mut vertices: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut indexed = Vec::with_capacity(faces.len());
        for f in faces {
            let mut face = Vec::with_capacity(f.len());
            for v in f {
                let v = v.as_ref();
                let i = *index.entry(v.to_string()).or_insert_with(|| {
                    vertices.push(v.to_string());
                    vertices.len() - 1
                });
                face.push(i);
            }
            indexed.push(Face::new(face));
        }
        Ok(Self::from_indexed(vertices, indexed))
    }

    /// Builds from indexed faces, dropping non-maximal faces and unused vertices.
    pub fn from_indexed(vertices: Vec<String>, faces: Vec<Face>) -> Self {
        let mut faces: Vec<Face> = faces.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        faces.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut maximal: Vec<Face> = Vec::with_capacity(faces.len());
        for f in faces {
            if !maximal.iter().any(|m| m.len() > f.len() && f.is_subset(m)) {
                maximal.push(f);
            }
        }
        Self::from_maximal(vertices, maximal)
    }

    /// Builds from faces known to be pairwise incomparable. Unused vertices are
    /// dropped and the vertex order of `vertices` is otherwise kept.
    pub(crate) fn from_maximal(vertices: Vec<String>, facets: Vec<Face>) -> Self {
        assert!(!facets.is_empty(), "complex needs at least one facet");
        let mut used = vec![false; vertices.len()];
        for f in &facets {
            for &v in f.iter() {
                used[v] = true;
            }
        }
        let mut remap = vec![usize::MAX; vertices.len()];
        let mut kept = Vec::new();
        for (i, label) in vertices.into_iter().enumerate() {
            if used[i] {
                remap[i] = kept.len();
                kept.push(label);
            }
        }
        let mut facets: Vec<Face> = facets
            .into_iter()
            .map(|f| Face(f.iter().map(|&v| remap[v]).collect()))
            .collect();
        facets.sort();
        facets.dedup();
        SimplicialComplex {
            vertices: kept,
            facets,
        }
    }

    /// The (-1)-sphere: one empty facet, no vertices.
    pub fn void_sphere() -> Self {
        SimplicialComplex {
            vertices: Vec::new(),
            facets: vec![Face::empty()],
        }
    }

    /// Full simplex on the given vertex labels.
    pub fn simplex<S: AsRef<str>>(vertices: &[S]) -> Self {
        let labels: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let face = Face((0..labels.len()).collect());
        Self::from_maximal(labels, vec![face])
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|l| l == label)
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn dim(&self) -> isize {
        self.facets.iter().map(Face::dim).max().unwrap_or(-1)
    }

    pub fn is_void_sphere(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    pub fn labels_of(&self, face: &Face) -> Vec<String> {
        face.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Facets as label lists, for serialization and reports.
    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|f| self.labels_of(f)).collect()
    }

    /// Facets as sets of labels; two complexes have the same faces exactly
    /// when these agree.
    pub fn facet_label_set(&self) -> BTreeSet<BTreeSet<String>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|&v| self.vertices[v].clone()).collect())
            .collect()
    }

    /// Looks up a face given by labels.
    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face, ComplexError> {
        let mut idx = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            idx.push(
                self.vertex_index(l)
                    .ok_or_else(|| ComplexError::UnknownVertex(l.to_string()))?,
            );
        }
        let face = Face::new(idx);
        if self.contains(&face) {
            Ok(face)
        } else {
            Err(ComplexError::NotAFace(
                labels.iter().map(|l| l.as_ref().to_string()).collect(),
            ))
        }
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.facets.iter().any(|f| face.is_subset(f))
    }

    /// Every face, grouped by dimension: entry `k` holds the `(k-1)`-faces,
    /// each group sorted lexicographically. Entry 0 is `[∅]`.
    pub fn faces_by_dim(&self) -> Vec<Vec<Face>> {
        let top = (self.dim() + 2) as usize;
        let mut levels: Vec<Vec<Face>> = vec![Vec::new(); top];
        for f in &self.facets {
            levels[f.len()].push(f.clone());
        }
        // each level is the facets of that size plus the ridges of the level above
        for k in (0..top).rev() {
            let mut level = std::mem::take(&mut levels[k]);
            level.par_sort_unstable();
            level.dedup();
            if k > 0 {
                let ridges: Vec<Face> = level
                    .par_iter()
                    .flat_map_iter(|f| (0..f.len()).map(move |p| f.without_position(p)))
                    .collect();
                levels[k - 1].extend(ridges);
            }
            levels[k] = level;
        }
        levels
    }

    /// `f_{-1}, f_0, …, f_d`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim().iter().map(Vec::len).collect()
    }

    /// Faces `τ` with `τ ∩ σ = ∅` and `τ ∪ σ` a face.
    pub fn link(&self, sigma: &Face) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotAFace(self.labels_of(sigma)));
        }
        let facets: Vec<Face> = self
            .facets
            .iter()
            .filter(|f| sigma.is_subset(f))
            .map(|f| Face(f.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect()))
            .collect();
        Ok(Self::from_maximal(self.vertices.clone(), facets))
    }

    /// Link of a face given by labels.
    pub fn link_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<SimplicialComplex, ComplexError> {
        let face = self.face_from_labels(labels)?;
        self.link(&face)
    }

    /// Join: faces are unions of a face of `self` and a face of `other`.
    /// Colliding labels in `other` get a `'` suffix until unique.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut vertices = self.vertices.clone();
        let mut taken: HashSet<String> = vertices.iter().cloned().collect();
        for l in &other.vertices {
            let mut label = l.clone();
            while taken.contains(&label) {
                label.push('\'');
            }
            taken.insert(label.clone());
            vertices.push(label);
        }
        let shift = self.vertices.len();
        let facets = self
            .facets
            .iter()
            .flat_map(|f| {
                other.facets.iter().map(move |g| {
                    let mut v = f.0.clone();
                    v.extend(g.iter().map(|&x| x + shift));
                    Face(v)
                })
            })
            .collect();
        Self::from_maximal(vertices, facets)
    }

    /// First barycentric subdivision, built directly from flags of faces.
    /// Vertices are the nonempty faces, labelled `{a,b,…}`.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        if self.is_void_sphere() {
            return Self::void_sphere();
        }
        let mut index: HashMap<Face, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut facets = Vec::new();
        for f in &self.facets {
            // A maximal flag in the closure of f is an ordering of its vertices.
            for perm in permutations(f.len()) {
                let mut flag = Vec::with_capacity(f.len());
                for k in 1..=f.len() {
                    let face = Face::new(perm[..k].iter().map(|&p| f[p]).collect());
                    let id = *index.entry(face.clone()).or_insert_with(|| {
                        labels.push(self.face_label(&face));
                        labels.len() - 1
                    });
                    flag.push(id);
                }
                facets.push(Face::new(flag));
            }
        }
        Self::from_maximal(labels, facets)
    }

    /// `{a,b,c}` label of a face.
    pub fn face_label(&self, face: &Face) -> String {
        format!("{{{}}}", self.labels_of(face).join(","))
    }

    /// Purity, with two facets of different size as witness.
    pub fn purity(&self) -> Purity {
        let smallest = self.facets.iter().min_by_key(|f| (f.len(), (*f).clone())).unwrap();
        let largest = self.facets.iter().max_by_key(|f| f.len()).unwrap();
        if smallest.len() == largest.len() {
            Purity::Pure
        } else {
            Purity::Impure {
                smaller: self.labels_of(smallest),
                larger: self.labels_of(largest),
            }
        }
    }

    pub fn is_pure(&self) -> bool {
        self.purity().is_pure()
    }

    /// Map from each ridge (codimension-one face of some facet) to the facets containing it.
    pub(crate) fn ridge_map(&self) -> HashMap<Face, Vec<usize>> {
        let mut map: HashMap<Face, Vec<usize>> = HashMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for pos in 0..f.len() {
                map.entry(f.without_position(pos)).or_default().push(i);
            }
        }
        map
    }

    pub fn pseudomanifold_report(&self) -> PseudomanifoldReport {
        let pure = self.is_pure();
        let ridges = self.ridge_map();
        let mut ridge_list: Vec<(&Face, &Vec<usize>)> = ridges.iter().collect();
        ridge_list.sort();
        let bad = ridge_list.iter().find(|(_, fs)| fs.len() != 2);
        let ridge_witness = bad.map(|(r, fs)| (self.labels_of(r), fs.len()));

        let k = self.facets.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let n = p[c];
                p[c] = r;
                c = n;
            }
            r
        }
        for (_, fs) in &ridge_list {
            for w in fs.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let roots: HashSet<usize> = (0..k).map(|i| find(&mut parent, i)).collect();
        PseudomanifoldReport {
            pure,
            ridge_degree_two: ridge_witness.is_none(),
            ridge_witness,
            strongly_connected: roots.len() <= 1,
        }
    }

    pub fn is_pseudomanifold(&self) -> bool {
        self.pseudomanifold_report().is_pseudomanifold()
    }

    /// 1-skeleton adjacency lists.
    pub(crate) fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for f in &self.facets {
            for (i, &a) in f.iter().enumerate() {
                for &b in &f[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        adj
    }

    /// Number of connected components of the underlying space (0 for `[∅]`).
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Isomorphism search over signature-compatible vertex bijections.
    pub fn isomorphism(&self, other: &SimplicialComplex, budget: u64) -> Result<IsoOutcome, ComplexError> {
        let n = self.vertices.len();
        if n != other.vertices.len()
            || self.facets.len() != other.facets.len()
            || self.f_vector() != other.f_vector()
        {
            return Ok(IsoOutcome::NotIsomorphic);
        }
        let sig = |k: &SimplicialComplex| -> Vec<Vec<usize>> {
            (0..k.vertices.len())
                .map(|v| {
                    let lk = k.link(&Face(vec![v])).expect("vertex is a face");
                    let mut s = vec![k.facets.iter().filter(|f| f.binary_search(&v).is_ok()).count()];
                    s.extend(lk.f_vector());
                    s
                })
                .collect()
        };
        let rel = |k: &SimplicialComplex| -> Vec<u8> {
            let mut r = vec![0u8; n * n];
            for (a, nbrs) in k.adjacency().iter().enumerate() {
                for &b in nbrs {
                    r[a * n + b] = 1;
                }
            }
            r
        };
        let target: HashSet<&Face> = other.facets.iter().collect();
        let containing: Vec<Vec<&Face>> = (0..n)
            .map(|v| self.facets.iter().filter(|f| f.binary_search(&v).is_ok()).collect())
            .collect();
        let matcher = Matcher::new(sig(self), sig(other), rel(self), rel(other));
        let hook = |a: usize, map: &[usize]| {
            containing[a].iter().all(|f| {
                if f.iter().any(|&v| map[v] == usize::MAX) {
                    return true;
                }
                let image = Face::new(f.iter().map(|&v| map[v]).collect());
                target.contains(&image)
            })
        };
        match matcher.search(budget, hook) {
            Some(Some(map)) => Ok(IsoOutcome::Isomorphic(
                map.iter()
                    .enumerate()
                    .map(|(i, &j)| (self.vertices[i].clone(), other.vertices[j].clone()))
                    .collect(),
            )),
            Some(None) => Ok(IsoOutcome::NotIsomorphic),
            None => Err(ComplexError::BudgetExceeded),
        }
    }

    pub fn is_isomorphic(&self, other: &SimplicialComplex) -> Result<bool, ComplexError> {
        Ok(self.isomorphism(other, iso::DEFAULT_BUDGET)?.is_isomorphic())
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self.facets.iter().map(|x| self.face_label(x)).collect();
        write!(f, "[{}]", facets.join(" "))
    }
}

/// All permutations of `0..k` (lexicographic).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Order complex: vertices are the elements of `poset` (in its order), facets
/// its maximal chains. The empty poset gives the (-1)-sphere.
pub fn order_complex(poset: &Poset) -> SimplicialComplex {
    if poset.is_empty() {
        return SimplicialComplex::void_sphere();
    }
    let mut facets = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn walk(p: &Poset, v: usize, stack: &mut Vec<usize>, out: &mut Vec<Face>) {
        stack.push(v);
        if p.up(v).is_empty() {
            out.push(Face::new(stack.clone()));
        } else {
            for &w in p.up(v) {
                walk(p, w, stack, out);
            }
        }
        stack.pop();
    }
    for m in poset.minimal_elements() {
        walk(poset, m, &mut stack, &mut facets);
    }
    SimplicialComplex::from_maximal(poset.labels().to_vec(), facets)
}

/// Face poset: every face including `∅` (as `0̂`), ordered by inclusion,
/// with rank equal to cardinality. Labels are `{a,b}`; `∅` is `{}`.
pub fn face_poset(complex: &SimplicialComplex) -> Poset {
    let faces: Vec<Face> = complex.faces_by_dim().into_iter().flatten().collect();
    let index: HashMap<&Face, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let labels: Vec<String> = faces.iter().map(|f| complex.face_label(f)).collect();
    let mut covers = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        for pos in 0..f.len() {
            covers.push((index[&f.without_position(pos)], i));
        }
    }
    Poset::from_indexed(labels, &covers).expect("face poset is graded by cardinality")
}
