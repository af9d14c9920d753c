//! Integer matrices and Smith normal form over arbitrary-precision integers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Nested arrays of decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        (0..self.cols)
                            .map(|j| match i64::try_from(self.get(i, j)) {
                                Ok(v) => serde_json::Value::from(v),
                                Err(_) => serde_json::Value::from(self.get(i, j).to_string()),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[target] += factor * row[source]`.
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if !s.is_zero() {
                let add = s * factor;
                self.data[target * self.cols + j] += add;
            }
        }
    }

    /// `col[target] += factor * col[source]`.
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source];
            if !s.is_zero() {
                let add = s * factor;
                self.data[i * self.cols + target] += add;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = -v;
        }
    }
}

/// Smith normal form `left · M · right = diag(d₁, …, d_r, 0, …)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero invariant factors, positive, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The full `rows × cols` diagonal matrix.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d.set(i, i, v.clone());
        }
        d
    }
}

/// Row and column transforms are tracked only when requested.
struct Transforms {
    left: Option<IntMatrix>,
    right: Option<IntMatrix>,
}

impl Transforms {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(l) = &mut self.left {
            l.swap_rows(a, b);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(r) = &mut self.right {
            r.swap_cols(a, b);
        }
    }
    fn add_row(&mut self, t: usize, s: usize, f: &BigInt) {
        if let Some(l) = &mut self.left {
            l.add_row(t, s, f);
        }
    }
    fn add_col(&mut self, t: usize, s: usize, f: &BigInt) {
        if let Some(r) = &mut self.right {
            r.add_col(t, s, f);
        }
    }
    fn negate_row(&mut self, r: usize) {
        if let Some(l) = &mut self.left {
            l.negate_row(r);
        }
    }
}

/// Smallest nonzero absolute value in the trailing block, ties by row then column.
fn smallest_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn reduce(mut a: IntMatrix, track: bool) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut tr = Transforms {
        left: track.then(|| IntMatrix::identity(m)),
        right: track.then(|| IntMatrix::identity(n)),
    };
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        a.swap_cols(t, pj);
        tr.swap_cols(t, pj);
        loop {
            let p = a.get(t, t).clone();
            for i in t + 1..m {
                if !a.get(i, t).is_zero() {
                    let q = -(a.get(i, t) / &p);
                    if !q.is_zero() {
                        a.add_row(i, t, &q);
                        tr.add_row(i, t, &q);
                    }
                }
            }
            for j in t + 1..n {
                if !a.get(t, j).is_zero() {
                    let q = -(a.get(t, j) / &p);
                    if !q.is_zero() {
                        a.add_col(j, t, &q);
                        tr.add_col(j, t, &q);
                    }
                }
            }
            // Leftover remainders are strictly smaller than the pivot: move the
            // smallest one into pivot position and repeat.
            let col_rest = (t + 1..m)
                .filter(|&i| !a.get(i, t).is_zero())
                .map(|i| (a.get(i, t).abs(), 0usize, i));
            let row_rest = (t + 1..n)
                .filter(|&j| !a.get(t, j).is_zero())
                .map(|j| (a.get(t, j).abs(), 1usize, j));
            if let Some((_, kind, k)) = col_rest.chain(row_rest).min() {
                if kind == 0 {
                    a.swap_rows(t, k);
                    tr.swap_rows(t, k);
                } else {
                    a.swap_cols(t, k);
                    tr.swap_cols(t, k);
                }
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let offending = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !(a.get(i, j) % &p).is_zero())
            });
            if let Some(i) = offending {
                let one = BigInt::one();
                a.add_row(t, i, &one);
                tr.add_row(t, i, &one);
                continue;
            }
            break;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            tr.negate_row(t);
        }
        diagonal.push(a.get(t, t).clone());
        t += 1;
    }
    let identity_if_untracked = |x: Option<IntMatrix>, k: usize| x.unwrap_or_else(|| IntMatrix::identity(k));
    SnfResult {
        diagonal,
        left: identity_if_untracked(tr.left, if track { m } else { 0 }),
        right: identity_if_untracked(tr.right, if track { n } else { 0 }),
        rows: m,
        cols: n,
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(matrix: &IntMatrix) -> SnfResult {
    reduce(matrix.clone(), true)
}

/// Invariant factors only (no transforms).
pub fn invariant_factors(matrix: &IntMatrix) -> Vec<BigInt> {
    reduce(matrix.clone(), false).diagonal
}

/// Sparse integer matrix stored by rows; entries fit in `i64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `entries[i]` is row `i` as `(column, value)` sorted by column, no zeros.
    pub entries: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                d.set(i, j, BigInt::from(v));
            }
        }
        d
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries = vec![Vec::new(); self.cols];
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                entries[j].push((i, v));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Invariant factors: unit pivots are eliminated sparsely in machine
    /// integers, the (usually tiny) remainder goes through the dense
    /// arbitrary-precision reduction. Any `i64` overflow hands the current
    /// state to the dense stage, so the result is always exact.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut rows = self.entries.clone();
        let mut active = vec![true; self.rows];
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for (i, row) in rows.iter().enumerate() {
            for &(j, _) in row {
                col_rows[j].push(i);
            }
        }
        // shortest rows first, re-queued whenever they change; stale entries are skipped
        let mut queue: BinaryHeap<Reverse<(usize, usize)>> =
            rows.iter().enumerate().map(|(i, r)| Reverse((r.len(), i))).collect();
        let mut units = 0usize;
        'pivots: while let Some(Reverse((len, r))) = queue.pop() {
            if !active[r] || rows[r].len() != len || len == 0 {
                continue;
            }
            // among unit entries, the column with fewest rows limits fill-in
            let Some(&(c, v)) = rows[r]
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .min_by_key(|(j, _)| col_rows[*j].len())
            else {
                continue;
            };
            let pivot_row = std::mem::take(&mut rows[r]);
            active[r] = false;
            let holders = std::mem::take(&mut col_rows[c]);
            for &i in &holders {
                if !active[i] {
                    continue;
                }
                let Ok(at) = rows[i].binary_search_by_key(&c, |&(j, _)| j) else {
                    continue;
                };
                // row_i -= (a / v) * pivot_row, and v = ±1
                let factor = rows[i][at].1 * v;
                match sub_scaled(&rows[i], &pivot_row, factor) {
                    Some(new_row) => {
                        for j in new_columns(&rows[i], &new_row) {
                            col_rows[j].push(i);
                        }
                        queue.push(Reverse((new_row.len(), i)));
                        rows[i] = new_row;
                    }
                    None => {
                        // overflow: restore the pivot row and finish densely
                        rows[r] = pivot_row;
                        active[r] = true;
                        col_rows[c] = holders;
                        break 'pivots;
                    }
                }
            }
            units += 1;
        }

        let live_rows: Vec<usize> = (0..self.rows)
            .filter(|&i| active[i] && !rows[i].is_empty())
            .collect();
        let mut live_cols: Vec<usize> = live_rows
            .iter()
            .flat_map(|&i| rows[i].iter().map(|&(j, _)| j))
            .collect();
        live_cols.sort_unstable();
        live_cols.dedup();
        let mut factors = vec![BigInt::one(); units];
        if !live_rows.is_empty() {
            let mut dense = IntMatrix::zeros(live_rows.len(), live_cols.len());
            for (a, &i) in live_rows.iter().enumerate() {
                for &(j, v) in &rows[i] {
                    let b = live_cols.binary_search(&j).unwrap();
                    dense.set(a, b, BigInt::from(v));
                }
            }
            factors.extend(invariant_factors(&dense));
        }
        factors
    }
}

/// Columns present in `new` but not in `old` (both sorted).
fn new_columns(old: &[(usize, i64)], new: &[(usize, i64)]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut it = old.iter().map(|&(j, _)| j).peekable();
    for &(j, _) in new {
        while it.peek().is_some_and(|&o| o < j) {
            it.next();
        }
        if it.peek() != Some(&j) {
            out.push(j);
        }
    }
    out
}

/// `target - factor * pivot` over sorted sparse rows; `None` on overflow.
fn sub_scaled(target: &[(usize, i64)], pivot: &[(usize, i64)], factor: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < pivot.len() {
        let ta = target.get(a).map(|x| x.0).unwrap_or(usize::MAX);
        let pb = pivot.get(b).map(|x| x.0).unwrap_or(usize::MAX);
        let (col, val) = if ta < pb {
            a += 1;
            (ta, target[a - 1].1)
        } else if pb < ta {
            b += 1;
            (pb, pivot[b - 1].1.checked_mul(factor)?.checked_neg()?)
        } else {
            a += 1;
            b += 1;
            let prod = pivot[b - 1].1.checked_mul(factor)?;
            (ta, target[a - 1].1.checked_sub(prod)?)
        };
        if val != 0 {
            out.push((col, val));
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_contract(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal_matrix());
        for w in s.diagonal.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        assert!(s.diagonal.iter().all(|d| d.is_positive()));
        s
    }

    #[test]
    fn identity_matrix() {
        let s = check_contract(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, big(&[1, 1, 1]));
    }

    #[test]
    fn two_by_two() {
        let m = IntMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]);
        let s = check_contract(&m);
        assert_eq!(s.diagonal, big(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let s = check_contract(&IntMatrix::zeros(3, 2));
        assert!(s.diagonal.is_empty());
    }

    #[test]
    fn divisibility_fix_needed() {
        // diag(2, 3) is not in normal form: SNF is diag(1, 6)
        let m = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]);
        let s = check_contract(&m);
        assert_eq!(s.diagonal, big(&[1, 6]));
    }

    #[test]
    fn rectangular() {
        let m = IntMatrix::from_rows(&[vec![4i64, 6, 8], vec![10, 12, 14]]);
        let s = check_contract(&m);
        // gcd of entries 2, gcd of 2x2 minors 12
        assert_eq!(s.diagonal, big(&[2, 6]));
    }

    #[test]
    fn sparse_matches_dense() {
        let m = SparseMatrix {
            rows: 3,
            cols: 3,
            entries: vec![vec![(0, 2), (1, 4)], vec![(0, 6), (1, 8)], vec![(2, -1)]],
        };
        assert_eq!(m.invariant_factors(), big(&[1, 2, 4]));
        assert_eq!(invariant_factors(&m.to_dense()), big(&[1, 2, 4]));
    }

    #[test]
    fn sparse_overflow_falls_back() {
        let huge = i64::MAX / 2 + 7;
        let m = SparseMatrix {
            rows: 2,
            cols: 2,
            entries: vec![vec![(0, 1), (1, huge)], vec![(0, huge), (1, 3)]],
        };
        let dense = invariant_factors(&m.to_dense());
        assert_eq!(m.invariant_factors(), dense);
    }

    #[test]
    fn json_output() {
        let m = IntMatrix::from_rows(&[vec![1i64, -2]]);
        assert_eq!(m.to_json().to_string(), "[[1,-2]]");
    }
}
