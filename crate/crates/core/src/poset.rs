//! Finite graded posets given by their Hasse diagram.
//!
//! Elements carry opaque string labels; internally everything is re-indexed
//! densely so the heavier algorithms work on `usize`. Ranks are never taken
//! as input: they are computed as the length of the longest chain down to a
//! minimal element and then checked against every cover.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iso::{self, IsoOutcome, Matcher};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("cover ({0}, {1}) references unknown element `{2}`")]
    UnknownLabel(String, String, String),
    #[error("cover ({0}, {1}) is listed more than once")]
    DuplicateCover(String, String),
    #[error("cover relation has a cycle through `{0}`")]
    CycleDetected(String),
    #[error("listed cover ({0}, {1}) is implied by transitivity through `{2}`")]
    NonCoverEdge(String, String, String),
    #[error("cover ({lower}, {upper}) jumps from rank {lower_rank} to rank {upper_rank}")]
    NotGraded {
        lower: String,
        upper: String,
        lower_rank: usize,
        upper_rank: usize,
    },
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
    #[error("no element labelled `{0}`")]
    NoSuchElement(String),
    #[error("poset has no unique minimal element")]
    NoMinimum,
    #[error("isomorphism search exceeded its node budget")]
    BudgetExceeded,
}

/// Whether an interval includes its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Openness {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub lower: String,
    pub upper: String,
    pub openness: Openness,
}

impl IntervalSpec {
    pub fn open(lower: impl Into<String>, upper: impl Into<String>) -> Self {
        Self {
            lower: lower.into(),
            upper: upper.into(),
            openness: Openness::Open,
        }
    }

    pub fn closed(lower: impl Into<String>, upper: impl Into<String>) -> Self {
        Self {
            lower: lower.into(),
            upper: upper.into(),
            openness: Openness::Closed,
        }
    }
}

/// Dense bitset row used for the strict order relation.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn union_with(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A validated finite graded poset. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    rank: Vec<usize>,
    /// `above[i]` holds every `j` with `i < j`.
    above: Vec<BitRow>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from labels and its Hasse diagram.
    pub fn build<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self, PosetError> {
        let labels: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let (a, b) = (a.as_ref(), b.as_ref());
            let lookup = |x: &str| {
                index
                    .get(x)
                    .copied()
                    .ok_or_else(|| PosetError::UnknownLabel(a.into(), b.into(), x.into()))
            };
            pairs.push((lookup(a)?, lookup(b)?));
        }
        Self::from_indexed(labels, &pairs)
    }

    /// Same as [`Poset::build`] with covers already given as label indices.
    pub fn from_indexed(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(PosetError::DuplicateLabel(l.clone()));
            }
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(covers.len());
        for &(a, b) in covers {
            assert!(a < n && b < n, "cover index out of range");
            if a == b {
                return Err(PosetError::CycleDetected(labels[a].clone()));
            }
            if !seen.insert((a, b)) {
                return Err(PosetError::DuplicateCover(labels[a].clone(), labels[b].clone()));
            }
            up[a].push(b);
            down[b].push(a);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
        }

        // Kahn's algorithm gives a topological order or exposes a cycle.
        let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &up[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(PosetError::CycleDetected(labels[stuck].clone()));
        }

        let mut above = vec![BitRow::new(n); n];
        for &v in topo.iter().rev() {
            let mut row = BitRow::new(n);
            for &w in &up[v] {
                row.set(w);
                row.union_with(&above[w]);
            }
            above[v] = row;
        }

        // A listed cover (a, b) is spurious if b sits above another upper cover of a.
        for a in 0..n {
            for &b in &up[a] {
                if let Some(&c) = up[a].iter().find(|&&c| c != b && above[c].get(b)) {
                    return Err(PosetError::NonCoverEdge(
                        labels[a].clone(),
                        labels[b].clone(),
                        labels[c].clone(),
                    ));
                }
            }
        }

        let mut rank = vec![0usize; n];
        for &v in &topo {
            rank[v] = down[v].iter().map(|&u| rank[u] + 1).max().unwrap_or(0);
        }
        for a in 0..n {
            for &b in &up[a] {
                if rank[b] != rank[a] + 1 {
                    return Err(PosetError::NotGraded {
                        lower: labels[a].clone(),
                        upper: labels[b].clone(),
                        lower_rank: rank[a],
                        upper_rank: rank[b],
                    });
                }
            }
        }

        Ok(Poset {
            labels,
            index,
            up,
            down,
            rank,
            above,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn require(&self, label: &str) -> Result<usize, PosetError> {
        self.index_of(label)
            .ok_or_else(|| PosetError::NoSuchElement(label.to_string()))
    }

    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    /// Length of the longest chain; 0 for the empty poset.
    pub fn height(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    /// Elements covering `i`.
    pub fn up(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    /// Elements covered by `i`.
    pub fn down(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Strict order `i < j`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.above[i].get(j)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j)
    }

    /// Number of elements strictly above `i`.
    pub fn above_count(&self, i: usize) -> usize {
        self.above[i].count()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    /// The unique minimal element `0̂`, if there is one.
    pub fn minimum(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// The unique maximal element `1̂`, if there is one.
    pub fn maximum(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// Unique `0̂` plus at least one other element.
    pub fn is_bounded_below(&self) -> bool {
        self.len() >= 2 && self.minimum().is_some()
    }

    /// All comparable pairs `x < y`, ordered by rank difference, then `x`, then `y`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|x| (0..self.len()).filter(move |&y| self.lt(x, y)).map(move |y| (x, y)))
            .collect();
        pairs.sort_by_key(|&(x, y)| (self.rank[y] - self.rank[x], x, y));
        pairs
    }

    /// Indices `z` with `x < z < y`, in index order.
    pub fn open_members(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&z| self.lt(x, z) && self.lt(z, y))
            .collect()
    }

    /// Induced subposet on a convex member set (an interval or an upper/lower set).
    /// Covers of a convex subset are exactly the covers of `self` among its members.
    fn convex_subposet(&self, members: &[usize]) -> Poset {
        let mut local = vec![usize::MAX; self.len()];
        for (k, &m) in members.iter().enumerate() {
            local[m] = k;
        }
        let labels: Vec<String> = members.iter().map(|&m| self.labels[m].clone()).collect();
        let covers: Vec<(usize, usize)> = members
            .iter()
            .flat_map(|&a| {
                let local = &local;
                self.up[a]
                    .iter()
                    .filter(move |&&b| local[b] != usize::MAX)
                    .map(move |&b| (local[a], local[b]))
            })
            .collect();
        Poset::from_indexed(labels, &covers).expect("convex subposet of a valid poset is valid")
    }

    /// The open interval `(x, y)` by index; empty when `y` covers `x`.
    pub fn open_interval(&self, x: usize, y: usize) -> Poset {
        self.convex_subposet(&self.open_members(x, y))
    }

    /// The closed interval `[x, y]` by index.
    pub fn closed_interval(&self, x: usize, y: usize) -> Poset {
        let members: Vec<usize> = (0..self.len())
            .filter(|&z| self.le(x, z) && self.le(z, y))
            .collect();
        self.convex_subposet(&members)
    }

    /// The interval described by `spec`, ranks re-based to 0.
    pub fn interval(&self, spec: &IntervalSpec) -> Result<Poset, PosetError> {
        let x = self.require(&spec.lower)?;
        let y = self.require(&spec.upper)?;
        if !self.lt(x, y) {
            return Err(PosetError::NotComparable(spec.lower.clone(), spec.upper.clone()));
        }
        Ok(match spec.openness {
            Openness::Open => self.open_interval(x, y),
            Openness::Closed => self.closed_interval(x, y),
        })
    }

    /// `self` with its minimum removed (the proper part above `0̂`).
    pub fn without_minimum(&self) -> Result<Poset, PosetError> {
        let m = self.minimum().ok_or(PosetError::NoMinimum)?;
        let members: Vec<usize> = (0..self.len()).filter(|&i| i != m).collect();
        Ok(self.convex_subposet(&members))
    }

    /// Cartesian product with componentwise order. Labels are `(p,q)`.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.len();
        let id = |i: usize, j: usize| i * m + j;
        let labels: Vec<String> = self
            .labels
            .iter()
            .flat_map(|p| other.labels.iter().map(move |q| format!("({p},{q})")))
            .collect();
        let mut covers = Vec::new();
        for i in 0..self.len() {
            for j in 0..m {
                for &i2 in &self.up[i] {
                    covers.push((id(i, j), id(i2, j)));
                }
                for &j2 in &other.up[j] {
                    covers.push((id(i, j), id(i, j2)));
                }
            }
        }
        Poset::from_indexed(labels, &covers).expect("product of graded posets is graded")
    }

    /// Isomorphism test by backtracking over rank- and degree-compatible bijections.
    pub fn isomorphism(&self, other: &Poset, budget: u64) -> Result<IsoOutcome, PosetError> {
        if self.len() != other.len() || self.cover_count() != other.cover_count() {
            return Ok(IsoOutcome::NotIsomorphic);
        }
        let sig = |p: &Poset| -> Vec<Vec<usize>> {
            (0..p.len())
                .map(|i| {
                    vec![
                        p.rank[i],
                        p.up[i].len(),
                        p.down[i].len(),
                        p.above_count(i),
                        (0..p.len()).filter(|&j| p.lt(j, i)).count(),
                    ]
                })
                .collect()
        };
        let rel = |p: &Poset| -> Vec<u8> {
            let n = p.len();
            let mut r = vec![0u8; n * n];
            for i in 0..n {
                for j in 0..n {
                    r[i * n + j] = if p.lt(i, j) {
                        1
                    } else if p.lt(j, i) {
                        2
                    } else {
                        0
                    };
                }
            }
            r
        };
        let matcher = Matcher::new(sig(self), sig(other), rel(self), rel(other));
        match matcher.search(budget, |_, _| true) {
            Some(Some(map)) => Ok(IsoOutcome::Isomorphic(
                map.iter()
                    .enumerate()
                    .map(|(i, &j)| (self.labels[i].clone(), other.labels[j].clone()))
                    .collect(),
            )),
            Some(None) => Ok(IsoOutcome::NotIsomorphic),
            None => Err(PosetError::BudgetExceeded),
        }
    }

    /// Convenience wrapper around [`Poset::isomorphism`] with the default budget.
    pub fn is_isomorphic(&self, other: &Poset) -> Result<bool, PosetError> {
        Ok(matches!(
            self.isomorphism(other, iso::DEFAULT_BUDGET)?,
            IsoOutcome::Isomorphic(_)
        ))
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "poset with {} elements, {} covers, height {}",
            self.len(),
            self.cover_count(),
            self.height()
        )
    }
}
