//! Edge-path presentation of the fundamental group and bounded Tietze
//! simplification.
//!
//! Every move is a genuine Tietze transformation, so `Trivial` is only
//! reported when the presented group really is trivial. Failure to simplify
//! says nothing and is reported as `Unknown`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;

pub const DEFAULT_PI1_BUDGET: u64 = 100_000;

/// Relators longer than this abort the simplification.
const MAX_WORD_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pi1Verdict {
    Trivial,
    Unknown,
}

/// Letters are `±(g+1)` for generator `g`.
type Word = Vec<i32>;

fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|&x| -x).collect()
}

/// Free and cyclic reduction.
fn reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    let mut d: VecDeque<i32> = out.into();
    while d.len() >= 2 && d.front() == d.back().map(|b| -b).as_ref() {
        d.pop_front();
        d.pop_back();
    }
    d.into()
}

/// Decides (soundly, incompletely) whether `π₁` of a connected complex is trivial.
pub fn pi1_triviality(complex: &SimplicialComplex, budget: u64) -> Pi1Verdict {
    if complex.vertices().is_empty() || !complex.is_connected() {
        return Pi1Verdict::Unknown;
    }
    let adj = complex.adjacency();

    // BFS spanning tree rooted at vertex 0.
    let n = adj.len();
    let mut in_tree = vec![false; n];
    let mut tree_edges = std::collections::HashSet::new();
    in_tree[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !in_tree[w] {
                in_tree[w] = true;
                tree_edges.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }

    let mut generator: HashMap<(usize, usize), i32> = HashMap::new();
    for (a, nbrs) in adj.iter().enumerate() {
        for &b in nbrs {
            if a < b && !tree_edges.contains(&(a, b)) {
                let next = generator.len() as i32 + 1;
                generator.insert((a, b), next);
            }
        }
    }
    let letter = |a: usize, b: usize| -> Option<i32> {
        if a < b {
            generator.get(&(a, b)).copied()
        } else {
            generator.get(&(b, a)).map(|g| -g)
        }
    };

    let mut relators: Vec<Word> = Vec::new();
    let mut seen_triangles = std::collections::HashSet::new();
    for f in complex.facets() {
        let v = f.vertices();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                for k in j + 1..v.len() {
                    if !seen_triangles.insert((v[i], v[j], v[k])) {
                        continue;
                    }
                    let w: Word = [letter(v[i], v[j]), letter(v[j], v[k]), letter(v[k], v[i])]
                        .into_iter()
                        .flatten()
                        .collect();
                    let w = reduce(&w);
                    if !w.is_empty() {
                        relators.push(w);
                    }
                }
            }
        }
    }

    let mut alive = generator.len();
    let mut moves = 0u64;
    while alive > 0 {
        moves += 1;
        if moves > budget {
            return Pi1Verdict::Unknown;
        }
        // Shortest relator containing some generator exactly once; lowest generator.
        let mut best: Option<(usize, usize, i32)> = None;
        for (ri, r) in relators.iter().enumerate() {
            if best.is_some_and(|(_, len, _)| len <= r.len()) {
                continue;
            }
            let mut counts: HashMap<i32, usize> = HashMap::new();
            for &x in r {
                *counts.entry(x.abs()).or_default() += 1;
            }
            if let Some(g) = counts.iter().filter(|(_, &c)| c == 1).map(|(&g, _)| g).min() {
                best = Some((ri, r.len(), g));
            }
        }
        let Some((ri, _, g)) = best else {
            return Pi1Verdict::Unknown;
        };
        let r = relators.swap_remove(ri);
        // Rotate so that g^{±1} leads, then solve g = rest^{-1} (or its inverse).
        let pos = r.iter().position(|x| x.abs() == g).unwrap();
        let mut rot: Word = r[pos..].iter().chain(&r[..pos]).copied().collect();
        let lead = rot.remove(0);
        let replacement: Word = if lead > 0 { inverse(&rot) } else { rot };
        let replacement_inv = inverse(&replacement);
        let mut next = Vec::with_capacity(relators.len());
        for w in relators.drain(..) {
            let mut out = Vec::with_capacity(w.len());
            for x in w {
                if x == g {
                    out.extend_from_slice(&replacement);
                } else if x == -g {
                    out.extend_from_slice(&replacement_inv);
                } else {
                    out.push(x);
                }
            }
            let out = reduce(&out);
            if out.len() > MAX_WORD_LEN {
                return Pi1Verdict::Unknown;
            }
            if !out.is_empty() {
                next.push(out);
            }
        }
        next.sort();
        next.dedup();
        relators = next;
        alive -= 1;
    }
    Pi1Verdict::Trivial
}
