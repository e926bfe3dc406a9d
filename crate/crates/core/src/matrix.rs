//! Exact rational matrices: a sparse column store for morphism payloads and
//! dense helpers for elimination.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn render_q(x: &Q) -> String {
    if x.is_integer() {
        alloc::format!("{}", x.numer())
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// Column-sparse matrix. Each column holds `(row, value)` pairs sorted by row
/// with no explicit zeros, so derived equality and ordering are canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(u32, Q)>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: alloc::vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| alloc::vec![(i as u32, Q::one())]).collect();
        QMatrix { rows: n, cols: n, data }
    }

    /// Builds from arbitrary column entries; duplicates are summed and zeros dropped.
    pub fn from_columns(rows: usize, cols: usize, mut data: Vec<Vec<(u32, Q)>>) -> Self {
        data.resize(cols, Vec::new());
        for col in data.iter_mut() {
            normalize(col);
        }
        QMatrix { rows, cols, data }
    }

    pub fn from_dense(dense: &[Vec<Q>]) -> Option<Self> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        if dense.iter().any(|r| r.len() != cols) {
            return None;
        }
        let mut data = alloc::vec![Vec::new(); cols];
        for (i, row) in dense.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    data[j].push((i as u32, x.clone()));
                }
            }
        }
        Some(QMatrix { rows, cols, data })
    }

    /// Column vector.
    pub fn from_vec(v: &[Q]) -> Self {
        let col = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i as u32, x.clone()))
            .collect();
        QMatrix { rows: v.len(), cols: 1, data: alloc::vec![col] }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(u32, Q)] {
        &self.data[c]
    }

    pub fn columns(&self) -> &[Vec<(u32, Q)>] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match self.data[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(k) => self.data[c][k].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn dense(&self) -> Vec<Vec<Q>> {
        let mut out = alloc::vec![alloc::vec![Q::zero(); self.cols]; self.rows];
        for (c, col) in self.data.iter().enumerate() {
            for (r, x) in col {
                out[*r as usize][c] = x.clone();
            }
        }
        out
    }

    /// Column-major vectorization.
    pub fn vectorize(&self) -> Vec<Q> {
        let mut out = alloc::vec![Q::zero(); self.rows * self.cols];
        for (c, col) in self.data.iter().enumerate() {
            for (r, x) in col {
                out[c * self.rows + *r as usize] = x.clone();
            }
        }
        out
    }

    /// `self · rhs`; panics on a dimension mismatch, callers check shapes.
    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let data = rhs
            .data
            .iter()
            .map(|col| {
                let mut acc: Vec<(u32, Q)> = Vec::new();
                for (k, b) in col {
                    for (i, a) in &self.data[*k as usize] {
                        acc.push((*i, a * b));
                    }
                }
                normalize(&mut acc);
                acc
            })
            .collect();
        QMatrix { rows: self.rows, cols: rhs.cols, data }
    }

    /// Kronecker product with the left factor as the major index.
    pub fn kron(&self, rhs: &QMatrix) -> QMatrix {
        let mut data = Vec::with_capacity(self.cols * rhs.cols);
        for a_col in &self.data {
            for b_col in &rhs.data {
                let mut col = Vec::with_capacity(a_col.len() * b_col.len());
                for (i, a) in a_col {
                    for (k, b) in b_col {
                        col.push((*i * rhs.rows as u32 + *k, a * b));
                    }
                }
                data.push(col);
            }
        }
        QMatrix { rows: self.rows * rhs.rows, cols: self.cols * rhs.cols, data }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut data = alloc::vec![Vec::new(); self.rows];
        for (c, col) in self.data.iter().enumerate() {
            for (r, x) in col {
                data[*r as usize].push((c as u32, x.clone()));
            }
        }
        QMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        let mut out = alloc::vec![Q::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in &self.data[c] {
                out[*r as usize] += a * x;
            }
        }
        out
    }

    pub fn is_nonneg(&self) -> bool {
        self.data.iter().flatten().all(|(_, x)| !x.is_negative())
    }

    pub fn replace_column(&mut self, c: usize, col: Vec<(u32, Q)>) {
        let mut col = col;
        normalize(&mut col);
        self.data[c] = col;
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        inverse(&self.dense()).and_then(|d| QMatrix::from_dense(&d))
    }

    pub fn rank(&self) -> usize {
        let mut d = self.dense();
        rref(&mut d, self.cols).len()
    }

    pub fn render(&self) -> String {
        let mut s = String::from("[");
        for (i, row) in self.dense().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push('[');
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{}", render_q(x));
            }
            s.push(']');
        }
        s.push(']');
        s
    }
}

fn normalize(col: &mut Vec<(u32, Q)>) {
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(u32, Q)> = Vec::with_capacity(col.len());
    for (r, x) in col.drain(..) {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    *col = out;
}

/// Reduces `rows` (each of length `ncols`) to reduced row-echelon form,
/// dropping zero rows. Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= p * &factor;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(rows: &[&[i64]]) -> QMatrix {
        let d: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        QMatrix::from_dense(&d).unwrap()
    }

    #[test]
    fn product_with_identity() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.mul(&QMatrix::identity(2)), a);
    }

    #[test]
    fn scalar_kron() {
        assert_eq!(m(&[&[2]]).kron(&m(&[&[3]])), m(&[&[6]]));
    }

    #[test]
    fn kron_matches_entrywise_formula() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 5, 1], &[6, 7, 0]]);
        let k = a.kron(&b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..3 {
                        assert_eq!(k.get(i * 2 + p, j * 3 + q), a.get(i, j) * b.get(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)], vec![qi(0), qi(1)]];
        assert_eq!(rank(&rows, 2), 2);
    }

    #[test]
    fn vectorize_is_column_major() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.vectorize(), vec![qi(1), qi(3), qi(2), qi(4)]);
    }
}
