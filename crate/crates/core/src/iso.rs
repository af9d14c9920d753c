//! Backtracking isomorphism search shared by posets and simplicial complexes.
//!
//! Both structures are reduced to vertex signatures plus a pairwise relation
//! code; structure-specific constraints beyond pairs are enforced through a
//! hook called after every assignment.

use serde::{Deserialize, Serialize};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Result of a completed (non-budget-exhausted) isomorphism search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoOutcome {
    /// Label pairs `(from, to)` of a structure-preserving bijection.
    Isomorphic(Vec<(String, String)>),
    /// Search space exhausted without a bijection.
    NotIsomorphic,
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

pub(crate) struct Matcher {
    n: usize,
    sig_a: Vec<Vec<usize>>,
    sig_b: Vec<Vec<usize>>,
    rel_a: Vec<u8>,
    rel_b: Vec<u8>,
}

impl Matcher {
    pub(crate) fn new(
        sig_a: Vec<Vec<usize>>,
        sig_b: Vec<Vec<usize>>,
        rel_a: Vec<u8>,
        rel_b: Vec<u8>,
    ) -> Self {
        let n = sig_a.len();
        assert_eq!(sig_b.len(), n);
        assert_eq!(rel_a.len(), n * n);
        assert_eq!(rel_b.len(), n * n);
        Matcher {
            n,
            sig_a,
            sig_b,
            rel_a,
            rel_b,
        }
    }

    /// Order in which vertices of A get assigned: rarest signature first, then
    /// the vertex most related to what is already placed.
    fn search_order(&self) -> Vec<usize> {
        let n = self.n;
        let freq = |s: &Vec<usize>| self.sig_a.iter().filter(|t| *t == s).count();
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut links = vec![0usize; n];
        for _ in 0..n {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .min_by_key(|&v| (usize::MAX - links[v], freq(&self.sig_a[v]), v))
                .unwrap();
            placed[next] = true;
            order.push(next);
            for (w, l) in links.iter_mut().enumerate() {
                if self.rel_a[next * n + w] != 0 {
                    *l += 1;
                }
            }
        }
        order
    }

    /// Runs the search. `None` means the budget ran out; `Some(None)` means
    /// exhaustion without a match.
    pub(crate) fn search<F>(&self, budget: u64, mut hook: F) -> Option<Option<Vec<usize>>>
    where
        F: FnMut(usize, &[usize]) -> bool,
    {
        let mut sa: Vec<&Vec<usize>> = self.sig_a.iter().collect();
        let mut sb: Vec<&Vec<usize>> = self.sig_b.iter().collect();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Some(None);
        }
        if self.n == 0 {
            return Some(Some(Vec::new()));
        }
        let order = self.search_order();
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        let mut nodes = 0u64;
        match self.extend(&order, 0, &mut map, &mut used, &mut nodes, budget, &mut hook) {
            Step::Found => Some(Some(map)),
            Step::Exhausted => Some(None),
            Step::OutOfBudget => None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend<F>(
        &self,
        order: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        nodes: &mut u64,
        budget: u64,
        hook: &mut F,
    ) -> Step
    where
        F: FnMut(usize, &[usize]) -> bool,
    {
        if depth == order.len() {
            return Step::Found;
        }
        let n = self.n;
        let a = order[depth];
        for b in 0..n {
            if used[b] || self.sig_a[a] != self.sig_b[b] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&pa| {
                let pb = map[pa];
                self.rel_a[a * n + pa] == self.rel_b[b * n + pb]
                    && self.rel_a[pa * n + a] == self.rel_b[pb * n + b]
            });
            if !consistent {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Step::OutOfBudget;
            }
            map[a] = b;
            used[b] = true;
            if hook(a, map) {
                match self.extend(order, depth + 1, map, used, nodes, budget, hook) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            map[a] = usize::MAX;
            used[b] = false;
        }
        Step::Exhausted
    }
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}
