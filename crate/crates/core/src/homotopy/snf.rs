//! Invariant factors of integer matrices.
//!
//! Sparse unit-pivot elimination runs first; whatever survives is handed to
//! a dense Smith normal form. All arithmetic is overflow-checked.

use std::collections::{BTreeMap, BTreeSet};

use super::HomotopyError;

/// Row-major sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let cols = dense.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(dense.len(), cols);
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols);
        if v == 0 {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i].get(&j).copied().unwrap_or(0)
    }
}

fn overflow() -> HomotopyError {
    HomotopyError::Overflow
}

/// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<i64>, HomotopyError> {
    let mut rows = m.data.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }

    let mut units = 0usize;
    loop {
        // unit pivot minimising (column fill, row fill)
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            for (&j, &v) in row {
                if v.abs() == 1 {
                    let key = (col_rows[j].len(), row.len());
                    if best.is_none_or(|b| key < (b.2, b.3)) {
                        best = Some((i, j, key.0, key.1));
                    }
                }
            }
        }
        let Some((pi, pj, _, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        let pv = pivot_row[&pj];
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pi);
        }
        let targets: Vec<usize> = col_rows[pj].iter().copied().collect();
        for r in targets {
            let factor = rows[r][&pj].checked_mul(pv).ok_or_else(overflow)?;
            for (&j, &v) in &pivot_row {
                let cur = rows[r].get(&j).copied().unwrap_or(0);
                let next = cur
                    .checked_sub(factor.checked_mul(v).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
                if next == 0 {
                    rows[r].remove(&j);
                    col_rows[j].remove(&r);
                } else {
                    rows[r].insert(j, next);
                    col_rows[j].insert(r);
                }
            }
            debug_assert!(!rows[r].contains_key(&pj));
        }
        units += 1;
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&j| !col_rows[j].is_empty()).collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let mut dense = vec![vec![0i64; live_cols.len()]; live_rows.len()];
    for (p, &i) in live_rows.iter().enumerate() {
        for (&j, &v) in &rows[i] {
            dense[p][col_pos[&j]] = v;
        }
    }
    let mut out = vec![1i64; units];
    out.extend(dense_invariant_factors(dense)?);
    if !divisibility_chain(&out) {
        return Err(HomotopyError::SnfSelfCheck);
    }
    Ok(out)
}

/// Each entry divides the next.
pub fn divisibility_chain(d: &[i64]) -> bool {
    d.windows(2).all(|w| w[0] != 0 && w[1] % w[0] == 0)
}

/// Dense Smith normal form; returns the nonzero diagonal.
pub fn dense_invariant_factors(mut a: Vec<Vec<i64>>) -> Result<Vec<i64>, HomotopyError> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    row_axpy(&mut a, i, t, q)?;
                    dirty |= a[i][t] != 0;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    col_axpy(&mut a, j, t, q)?;
                    dirty |= a[t][j] != 0;
                }
            }
            if dirty {
                // a remainder is smaller than the pivot; bring it in
                let (pi, pj) = min_in_cross(&a, t);
                a.swap(t, pi);
                swap_cols(&mut a, t, pj);
                continue;
            }
            let p = a[t][t];
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match offender {
                Some(i) => {
                    // row_t += row_i, then reduce again
                    row_axpy(&mut a, t, i, -1)?;
                }
                None => break,
            }
        }
        diag.push(a[t][t].checked_abs().ok_or_else(overflow)?);
    }
    Ok(diag)
}

fn min_entry(
    a: &[Vec<i64>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(u64, usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a[i][j].unsigned_abs();
            if v != 0 && best.is_none_or(|b| v < b.0) {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn min_in_cross(a: &[Vec<i64>], t: usize) -> (usize, usize) {
    let rows = a.len();
    let cols = a[0].len();
    let mut best = (a[t][t].unsigned_abs(), t, t);
    for i in t + 1..rows {
        let v = a[i][t].unsigned_abs();
        if v != 0 && v < best.0 {
            best = (v, i, t);
        }
    }
    for j in t + 1..cols {
        let v = a[t][j].unsigned_abs();
        if v != 0 && v < best.0 {
            best = (v, t, j);
        }
    }
    (best.1, best.2)
}

fn swap_cols(a: &mut [Vec<i64>], x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}

/// row_i -= q * row_src
fn row_axpy(a: &mut [Vec<i64>], i: usize, src: usize, q: i64) -> Result<(), HomotopyError> {
    for j in 0..a[i].len() {
        let delta = q.checked_mul(a[src][j]).ok_or_else(overflow)?;
        a[i][j] = a[i][j].checked_sub(delta).ok_or_else(overflow)?;
    }
    Ok(())
}

/// col_j -= q * col_src
fn col_axpy(a: &mut [Vec<i64>], j: usize, src: usize, q: i64) -> Result<(), HomotopyError> {
    for row in a.iter_mut() {
        let delta = q.checked_mul(row[src]).ok_or_else(overflow)?;
        row[j] = row[j].checked_sub(delta).ok_or_else(overflow)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_forms() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(dense_invariant_factors(m.clone()).unwrap(), vec![2, 6, 12]);
        assert_eq!(
            invariant_factors(&SparseMatrix::from_dense(&m)).unwrap(),
            vec![2, 6, 12]
        );
        assert_eq!(
            dense_invariant_factors(vec![vec![2, 0], vec![0, 3]]).unwrap(),
            vec![1, 6]
        );
        assert!(dense_invariant_factors(vec![vec![0, 0]]).unwrap().is_empty());
        assert!(invariant_factors(&SparseMatrix::new(0, 3)).unwrap().is_empty());
    }

    #[test]
    fn overflow_is_reported() {
        let m = vec![vec![1, i64::MAX], vec![-1, i64::MAX]];
        assert_eq!(
            invariant_factors(&SparseMatrix::from_dense(&m)),
            Err(HomotopyError::Overflow)
        );
    }

    fn det_abs_2x2(m: &[Vec<i64>]) -> i64 {
        (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs()
    }

    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    proptest! {
        // d_1 is the gcd of the entries; d_1 * d_2 is |det| for 2x2.
        #[test]
        fn two_by_two_invariants(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let m = vec![vec![a, b], vec![c, d]];
            let f = dense_invariant_factors(m.clone()).unwrap();
            let g = gcd(gcd(a, b), gcd(c, d));
            let det = det_abs_2x2(&m);
            match f.len() {
                0 => prop_assert_eq!(g, 0),
                1 => { prop_assert_eq!(f[0], g); prop_assert_eq!(det, 0); }
                _ => { prop_assert_eq!(f[0], g); prop_assert_eq!(f[0] * f[1], det); }
            }
            prop_assert!(divisibility_chain(&f));
            let sparse = invariant_factors(&SparseMatrix::from_dense(&m)).unwrap();
            prop_assert_eq!(sparse, f);
        }

        #[test]
        fn sparse_and_dense_agree(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-3i64..4, 36)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            let dense = dense_invariant_factors(m.clone()).unwrap();
            let sparse = invariant_factors(&SparseMatrix::from_dense(&m)).unwrap();
            prop_assert!(divisibility_chain(&dense));
            prop_assert_eq!(sparse, dense);
        }
    }
}
