//! Möbius function, Eulerian and thin tests, reduced Euler characteristic.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("Eulerian test needs a unique minimum and maximum")]
    MissingBounds,
}

/// `μ(x, y)` for every comparable pair `x ≤ y`.
#[derive(Debug, Clone)]
pub struct MobiusTable {
    n: usize,
    /// Row-major `n × n`; `None` where `x ≰ y`.
    values: Vec<Option<BigInt>>,
}

impl MobiusTable {
    pub fn get(&self, x: usize, y: usize) -> Option<&BigInt> {
        self.values[x * self.n + y].as_ref()
    }

    /// Lookup by labels.
    pub fn value(&self, poset: &Poset, x: &str, y: &str) -> Option<&BigInt> {
        self.get(poset.index_of(x)?, poset.index_of(y)?)
    }

    /// `(x, y, μ)` for every comparable pair, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(move |(k, v)| v.as_ref().map(|v| (k / self.n, k % self.n, v)))
    }
}

/// Tabulates `μ` by the defining recursion `μ(x,y) = -Σ_{x≤z<y} μ(x,z)`.
pub fn mobius(poset: &Poset) -> MobiusTable {
    let n = poset.len();
    let mut values = vec![None; n * n];
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_by_key(|&i| (poset.rank(i), i));
    for x in 0..n {
        values[x * n + x] = Some(BigInt::one());
        let uppers: Vec<usize> = by_rank.iter().copied().filter(|&y| poset.lt(x, y)).collect();
        for (k, &y) in uppers.iter().enumerate() {
            let mut sum = BigInt::one();
            // every z with x < z < y has strictly smaller rank, so it precedes y
            for &z in &uppers[..k] {
                if poset.lt(z, y) {
                    sum += values[x * n + z].as_ref().expect("computed earlier");
                }
            }
            values[x * n + y] = Some(-sum);
        }
    }
    MobiusTable { n, values }
}

/// `(-1)^k` by parity. The Eulerian sign is written with exponent
/// `rk y − rk x − 2` in some sources and `rk y − rk x` in others; both have
/// the same parity.
pub fn sign_of_rank_difference(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerianVerdict {
    Eulerian,
    NotEulerian {
        lower: String,
        upper: String,
        mobius: String,
        expected: String,
    },
}

impl EulerianVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, EulerianVerdict::Eulerian)
    }
}

/// Checks `μ(x,y) = (-1)^{rk y − rk x}` for every comparable pair of a
/// bounded poset; the first violation (by rank difference) is the witness.
pub fn is_eulerian(poset: &Poset) -> Result<EulerianVerdict, InvariantError> {
    if poset.minimum().is_none() || poset.maximum().is_none() {
        return Err(InvariantError::MissingBounds);
    }
    let table = mobius(poset);
    for (x, y) in poset.strict_pairs() {
        let mu = table.get(x, y).unwrap();
        let expected = sign_of_rank_difference(poset.rank(y) - poset.rank(x));
        if *mu != expected {
            return Ok(EulerianVerdict::NotEulerian {
                lower: poset.label(x).to_string(),
                upper: poset.label(y).to_string(),
                mobius: mu.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(EulerianVerdict::Eulerian)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinViolation {
    pub lower: String,
    pub upper: String,
    pub middle_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinVerdict {
    pub violations: Vec<ThinViolation>,
}

impl ThinVerdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every rank-two open interval must have exactly two elements.
pub fn is_thin(poset: &Poset) -> ThinVerdict {
    let mut violations = Vec::new();
    for x in 0..poset.len() {
        let mut reached: Vec<(usize, usize)> = Vec::new();
        for &z in poset.up(x) {
            for &y in poset.up(z) {
                match reached.iter_mut().find(|(t, _)| *t == y) {
                    Some((_, c)) => *c += 1,
                    None => reached.push((y, 1)),
                }
            }
        }
        reached.sort_unstable();
        for (y, count) in reached {
            if count != 2 {
                violations.push(ThinViolation {
                    lower: poset.label(x).to_string(),
                    upper: poset.label(y).to_string(),
                    middle_count: count,
                });
            }
        }
    }
    ThinVerdict { violations }
}

/// `Σ_{i≥-1} (-1)^i f_i` including the empty face.
pub fn reduced_euler_characteristic(complex: &SimplicialComplex) -> i64 {
    complex
        .f_vector()
        .iter()
        .enumerate()
        .map(|(k, &f)| {
            // entry k counts (k-1)-faces
            let f = f as i64;
            if k % 2 == 0 {
                -f
            } else {
                f
            }
        })
        .sum()
}

/// `μ(x,y) = 0` sum check over a closed interval; used by tests and reports.
pub fn mobius_row_sum(poset: &Poset, table: &MobiusTable, x: usize, y: usize) -> BigInt {
    let mut s = BigInt::zero();
    for z in 0..poset.len() {
        if poset.le(x, z) && poset.le(z, y) {
            s += table.get(x, z).unwrap();
        }
    }
    s
}
