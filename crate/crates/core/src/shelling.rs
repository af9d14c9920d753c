//! Shelling verification, bounded exhaustive shelling search, and the
//! thin + shellable sufficient condition for CW posets.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{order_complex, Face, SimplicialComplex};
use crate::invariants::{is_thin, ThinViolation};
use crate::poset::Poset;

pub const DEFAULT_SHELLING_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShellingError {
    #[error("complex is not pure")]
    NotPure,
    #[error("order is not a permutation of the {0} facets")]
    NotAPermutation(usize),
}

/// A facet order, as indices into [`SimplicialComplex::facets`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellingOrder(pub Vec<usize>);

impl ShellingOrder {
    /// Facets in order, as label lists (the JSON form emitted by the CLI).
    pub fn facet_labels(&self, complex: &SimplicialComplex) -> Vec<Vec<String>> {
        self.0.iter().map(|&i| complex.labels_of(&complex.facets()[i])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellingVerdict {
    Shelling,
    /// First position `step` (1-based) where the new facet meets the earlier
    /// ones in something other than a pure codimension-one complex.
    Fails {
        step: usize,
        facet: Vec<String>,
        intersection: Vec<Vec<String>>,
    },
}

impl ShellingVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ShellingVerdict::Shelling)
    }
}

/// Precomputed incidence data for the extension test.
struct Shell<'a> {
    complex: &'a SimplicialComplex,
    /// `partners[f]`: `(p, g)` where facet `g ≠ f` contains `f` minus its `p`-th vertex.
    partners: Vec<Vec<(usize, usize)>>,
    /// Facets containing each vertex.
    by_vertex: Vec<Vec<usize>>,
    /// Dimension ≤ 0: every order is a shelling.
    trivial: bool,
}

impl<'a> Shell<'a> {
    fn new(complex: &'a SimplicialComplex) -> Self {
        let facets = complex.facets();
        let trivial = complex.dim() <= 0;
        let mut by_vertex = vec![Vec::new(); complex.vertices().len()];
        for (i, f) in facets.iter().enumerate() {
            for &v in f.iter() {
                by_vertex[v].push(i);
            }
        }
        let partners = if trivial {
            vec![Vec::new(); facets.len()]
        } else {
            let ridges = complex.ridge_map();
            facets
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    (0..f.len())
                        .flat_map(|p| {
                            ridges[&f.without_position(p)]
                                .iter()
                                .filter(move |&&j| j != i)
                                .map(move |&j| (p, j))
                        })
                        .collect()
                })
                .collect()
        };
        Shell {
            complex,
            partners,
            by_vertex,
            trivial,
        }
    }

    /// Whether facet `F` meets the union of the `placed` facets in a pure
    /// codimension-one subcomplex of its boundary. `placed` must be nonempty.
    ///
    /// With `R` the vertices `v` such that `F∖{v}` lies in a placed facet,
    /// this holds exactly when `R` is contained in no placed facet.
    fn accepts(&self, placed: &[bool], f: usize) -> bool {
        if self.trivial {
            return true;
        }
        let facet = &self.complex.facets()[f];
        let mut free = vec![false; facet.len()];
        for &(p, g) in &self.partners[f] {
            if placed[g] {
                free[p] = true;
            }
        }
        let restriction: Vec<usize> = facet
            .iter()
            .zip(&free)
            .filter(|(_, &b)| b)
            .map(|(&v, _)| v)
            .collect();
        let Some(&pivot) = restriction.iter().min_by_key(|&&v| self.by_vertex[v].len()) else {
            return false;
        };
        !self.by_vertex[pivot].iter().any(|&g| {
            placed[g] && {
                let other = &self.complex.facets()[g];
                restriction.iter().all(|v| other.binary_search(v).is_ok())
            }
        })
    }

    /// Maximal faces of `F ∩ (∪ placed)`, for failure reports.
    fn intersection(&self, placed: &[bool], f: usize) -> Vec<Face> {
        let facet = &self.complex.facets()[f];
        let parts: Vec<Face> = (0..self.complex.facets().len())
            .filter(|&i| placed[i])
            .map(|i| facet.intersection(&self.complex.facets()[i]))
            .collect();
        let mut maximal: Vec<Face> = Vec::new();
        for p in &parts {
            if !parts.iter().any(|q| q.len() > p.len() && p.is_subset(q)) && !maximal.contains(p) {
                maximal.push(p.clone());
            }
        }
        maximal.sort();
        maximal
    }
}

/// Checks a facet order against the shelling condition.
pub fn verify_shelling(
    complex: &SimplicialComplex,
    order: &ShellingOrder,
) -> Result<ShellingVerdict, ShellingError> {
    if !complex.is_pure() {
        return Err(ShellingError::NotPure);
    }
    let k = complex.facets().len();
    let mut seen = vec![false; k];
    if order.0.len() != k || order.0.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
        return Err(ShellingError::NotAPermutation(k));
    }
    let shell = Shell::new(complex);
    let mut placed = vec![false; k];
    for (step, &f) in order.0.iter().enumerate() {
        if step > 0 && !shell.accepts(&placed, f) {
            let meet = shell.intersection(&placed, f);
            return Ok(ShellingVerdict::Fails {
                step: step + 1,
                facet: complex.labels_of(&complex.facets()[f]),
                intersection: meet.iter().map(|m| complex.labels_of(m)).collect(),
            });
        }
        placed[f] = true;
    }
    Ok(ShellingVerdict::Shelling)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellingSearch {
    Found(ShellingOrder),
    /// The whole search space was exhausted.
    None,
    BudgetExhausted,
}

impl ShellingSearch {
    pub fn status(&self) -> SearchStatus {
        match self {
            ShellingSearch::Found(_) => SearchStatus::Found,
            ShellingSearch::None => SearchStatus::None,
            ShellingSearch::BudgetExhausted => SearchStatus::BudgetExhausted,
        }
    }
}

/// Outcome of a shelling search without the order itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    None,
    BudgetExhausted,
}

impl SearchStatus {
    /// `None` dominates `BudgetExhausted`, which dominates `Found`.
    pub fn combine(self, other: SearchStatus) -> SearchStatus {
        use SearchStatus::*;
        match (self, other) {
            (None, _) | (_, None) => None,
            (BudgetExhausted, _) | (_, BudgetExhausted) => BudgetExhausted,
            _ => Found,
        }
    }
}

/// Upper bound on the memo table size, in 64-bit words.
const MEMO_WORDS: usize = 1 << 24;

/// Search state: the placed set and the frontier of unplaced facets that share
/// a ridge with it (only those can be accepted).
struct Search<'a> {
    shell: Shell<'a>,
    placed: Vec<bool>,
    key: Vec<u64>,
    order: Vec<usize>,
    placed_partners: Vec<usize>,
    frontier: BTreeSet<usize>,
}

impl Search<'_> {
    fn place(&mut self, f: usize) {
        self.placed[f] = true;
        self.key[f / 64] |= 1 << (f % 64);
        self.order.push(f);
        self.frontier.remove(&f);
        for &(_, g) in &self.shell.partners[f] {
            self.placed_partners[g] += 1;
            if !self.placed[g] {
                self.frontier.insert(g);
            }
        }
    }

    fn unplace(&mut self) {
        let f = self.order.pop().expect("nonempty order");
        for &(_, g) in &self.shell.partners[f] {
            self.placed_partners[g] -= 1;
            if self.placed_partners[g] == 0 {
                self.frontier.remove(&g);
            }
        }
        self.placed[f] = false;
        self.key[f / 64] &= !(1 << (f % 64));
        if self.placed_partners[f] > 0 {
            self.frontier.insert(f);
        }
    }

    fn next_candidate(&self, from: usize) -> Option<usize> {
        if self.order.is_empty() {
            (from < self.placed.len()).then_some(from)
        } else if self.shell.trivial {
            (from..self.placed.len()).find(|&g| !self.placed[g])
        } else {
            self.frontier
                .range(from..)
                .copied()
                .find(|&g| self.shell.accepts(&self.placed, g))
        }
    }
}

/// Depth-first search over facet sequences (facets tried in lexicographic
/// order), pruning placed-sets already known to be dead ends. `budget` caps
/// the number of prefix extensions.
pub fn find_shelling(complex: &SimplicialComplex, budget: u64) -> Result<ShellingSearch, ShellingError> {
    if !complex.is_pure() {
        return Err(ShellingError::NotPure);
    }
    let k = complex.facets().len();
    let mut search = Search {
        shell: Shell::new(complex),
        placed: vec![false; k],
        key: vec![0u64; k.div_ceil(64)],
        order: Vec::with_capacity(k),
        placed_partners: vec![0; k],
        frontier: BTreeSet::new(),
    };
    // Extendability depends only on the placed set, not on its order.
    let mut failed: HashSet<Vec<u64>> = HashSet::new();
    let mut nodes = 0u64;
    // cursors[d]: smallest facet index not yet tried at depth d
    let mut cursors = vec![0usize];
    loop {
        let depth = search.order.len();
        if depth == k {
            return Ok(ShellingSearch::Found(ShellingOrder(search.order)));
        }
        match search.next_candidate(cursors[depth]) {
            Some(f) => {
                nodes += 1;
                if nodes > budget {
                    return Ok(ShellingSearch::BudgetExhausted);
                }
                cursors[depth] = f + 1;
                search.place(f);
                if !failed.is_empty() && failed.contains(&search.key) {
                    search.unplace();
                } else {
                    cursors.push(0);
                }
            }
            None => {
                if depth == 0 {
                    return Ok(ShellingSearch::None);
                }
                if failed.len() * search.key.len() < MEMO_WORDS {
                    failed.insert(search.key.clone());
                }
                cursors.pop();
                search.unplace();
            }
        }
    }
}

/// Shelling search outcome for one open interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalShelling {
    pub lower: String,
    pub upper: String,
    pub rank_difference: usize,
    pub status: SearchStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DkWitness {
    NotBoundedBelow,
    NotThin(ThinViolation),
    NotShellable { lower: String, upper: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DkVerdict {
    CwCertified,
    Failed(DkWitness),
    Inconclusive { lower: String, upper: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DkReport {
    pub verdict: DkVerdict,
    pub thin_violations: Vec<ThinViolation>,
    /// Aggregate over the intervals `(0̂, y)` only.
    pub lower_intervals: Option<SearchStatus>,
    /// Aggregate over every open interval.
    pub all_intervals: Option<SearchStatus>,
    pub intervals: Vec<IntervalShelling>,
}

/// Thinness plus a shelling of every open interval's order complex.
pub fn danaraj_klee_check(poset: &Poset, budget: u64) -> DkReport {
    let failed = |w: DkWitness, thin_violations| DkReport {
        verdict: DkVerdict::Failed(w),
        thin_violations,
        lower_intervals: None,
        all_intervals: None,
        intervals: Vec::new(),
    };
    let Some(zero) = poset.minimum().filter(|_| poset.is_bounded_below()) else {
        return failed(DkWitness::NotBoundedBelow, Vec::new());
    };
    let thin = is_thin(poset);
    if let Some(v) = thin.violations.first() {
        return failed(DkWitness::NotThin(v.clone()), thin.violations.clone());
    }

    let pairs = poset.strict_pairs();
    let intervals: Vec<IntervalShelling> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let delta = order_complex(&poset.open_interval(x, y));
            let status = find_shelling(&delta, budget)
                .expect("order complexes of graded intervals are pure")
                .status();
            IntervalShelling {
                lower: poset.label(x).to_string(),
                upper: poset.label(y).to_string(),
                rank_difference: poset.rank(y) - poset.rank(x),
                status,
            }
        })
        .collect();

    let fold = |it: &mut dyn Iterator<Item = &IntervalShelling>| {
        it.fold(SearchStatus::Found, |acc, s| acc.combine(s.status))
    };
    let zero_label = poset.label(zero);
    let lower = fold(&mut intervals.iter().filter(|s| s.lower == zero_label));
    let all = fold(&mut intervals.iter());
    let verdict = if let Some(s) = intervals.iter().find(|s| s.status == SearchStatus::None) {
        DkVerdict::Failed(DkWitness::NotShellable {
            lower: s.lower.clone(),
            upper: s.upper.clone(),
        })
    } else if let Some(s) = intervals.iter().find(|s| s.status == SearchStatus::BudgetExhausted) {
        DkVerdict::Inconclusive {
            lower: s.lower.clone(),
            upper: s.upper.clone(),
        }
    } else {
        DkVerdict::CwCertified
    };
    DkReport {
        verdict,
        thin_violations: Vec::new(),
        lower_intervals: Some(lower),
        all_intervals: Some(all),
        intervals,
    }
}
