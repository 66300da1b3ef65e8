//! Exact integer and rational linear algebra.
//!
//! Lattices are row spans: a weight is a row, a sublattice is the integer row
//! span of a matrix. Everything is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed so that an empty row list
    /// still has a width.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self, LatticeError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LatticeError::Ragged { row: r, expected: cols, got: row.len() });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Keeps only the listed rows, in the listed order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix { rows: idx.len(), cols: self.cols, data }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = q * &self.data[src * self.cols + c];
            self.data[dst * self.cols + c] -= delta;
        }
    }

    /// col[dst] -= q * col[src]
    fn sub_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let delta = q * &self.data[r * self.cols + src];
            self.data[r * self.cols + dst] -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.row_mut(i) {
            *v = -std::mem::take(v);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())).finish()
    }
}

/// Row Hermite normal form `h` with a unimodular `u` such that `u·m = h`.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)`, and zero
/// rows sit at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        if pivot_row == h.rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let best = (pivot_row..h.rows).filter(|&i| !h[(i, col)].is_zero()).min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(best, pivot_row);
            u.swap_rows(best, pivot_row);
            let mut done = true;
            for i in pivot_row + 1..h.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.sub_row_multiple(i, pivot_row, &q);
                u.sub_row_multiple(i, pivot_row, &q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&p);
            h.sub_row_multiple(i, pivot_row, &q);
            u.sub_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row
/// lattice. Two matrices span the same lattice iff these agree.
pub fn lattice_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (h, _) = hnf(m);
    (0..h.rows()).map(|i| h.row(i).to_vec()).filter(|r| r.iter().any(|v| !v.is_zero())).collect()
}

/// Smith invariant factors `d1 | d2 | ... | dr`, padded with zeros to
/// `min(rows, cols)`.
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let Some((pr, pc)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);
        loop {
            let mut clean = true;
            for i in t + 1..a.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.sub_row_multiple(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..a.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.sub_col_multiple(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // a remainder is now smaller than the pivot; bring it in
                let (pr, pc) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pr);
                a.swap_cols(t, pc);
                continue;
            }
            // divisibility: the pivot must divide the whole trailing block
            let offender =
                (t + 1..a.rows).flat_map(|i| (t + 1..a.cols).map(move |j| (i, j))).find(|&(i, j)| !(&a[(i, j)] % &a[(t, t)]).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::from(-1);
                    a.sub_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        diag.push(a[(t, t)].abs());
    }
    diag.resize(n, BigInt::zero());
    diag
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    (t..a.rows)
        .flat_map(|i| (t..a.cols).map(move |j| (i, j)))
        .filter(|&(i, j)| !a[(i, j)].is_zero())
        .min_by(|&x, &y| a[x].abs().cmp(&a[y].abs()))
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let col = (t..a.rows).map(|i| (i, t));
    let row = (t + 1..a.cols).map(|j| (t, j));
    col.chain(row).filter(|&p| !a[p].is_zero()).min_by(|&x, &y| a[x].abs().cmp(&a[y].abs())).expect("pivot is nonzero")
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for col in 0..a.cols {
        let Some(p) = (r..a.rows).find(|&i| !a[(i, col)].is_zero()) else { continue };
        a.swap_rows(p, r);
        for i in r + 1..a.rows {
            if a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            let g = a[(r, col)].clone();
            for j in col..a.cols {
                let v = &a[(i, j)] * &g - &a[(r, j)] * &f;
                a[(i, j)] = v;
            }
            // keep entries small
            let content = a.row(i).iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            if !content.is_zero() && !content.is_one() {
                for v in a.row_mut(i) {
                    *v /= &content;
                }
            }
        }
        r += 1;
        if r == a.rows {
            break;
        }
    }
    r
}

/// Is `v` an integer combination of the rows of `gens`?
pub fn in_sublattice(v: &[BigInt], gens: &IntMatrix) -> Result<bool, LatticeError> {
    if v.len() != gens.cols() {
        return Err(LatticeError::DimensionMismatch { expected: gens.cols(), got: v.len() });
    }
    let (h, _) = hnf(gens);
    Ok(reduce_against_hnf(v, &h))
}

/// Back-substitution of `v` against a matrix already in Hermite normal form.
pub(crate) fn reduce_against_hnf(v: &[BigInt], h: &IntMatrix) -> bool {
    let mut r = v.to_vec();
    let mut next = 0;
    for col in 0..h.cols() {
        let is_pivot = next < h.rows() && !h[(next, col)].is_zero();
        if is_pivot {
            let p = &h[(next, col)];
            let (q, rem) = r[col].div_rem(p);
            if !rem.is_zero() {
                return false;
            }
            for (x, y) in r.iter_mut().zip(h.row(next)) {
                *x -= &q * y;
            }
            next += 1;
        } else if !r[col].is_zero() {
            return false;
        }
    }
    true
}

/// Dense rational matrix, entries always in lowest terms.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Result<Self, LatticeError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LatticeError::Ragged { row: r, expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(RationalMatrix { rows: data.len() / cols.max(1), cols, data })
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RationalMatrix { rows: m.rows, cols: m.cols, data: m.data.iter().cloned().map(BigRational::from_integer).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, LatticeError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(LatticeError::DimensionMismatch { expected: self.rows * self.cols, got: rhs.rows * rhs.cols });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(RationalMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// The principal-position block with the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Exact rank by Gaussian elimination over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut r = 0;
        for col in 0..a.cols {
            let Some(p) = (r..a.rows).find(|&i| !a[(i, col)].is_zero()) else { continue };
            if p != r {
                for c in 0..a.cols {
                    a.data.swap(p * a.cols + c, r * a.cols + c);
                }
            }
            let inv = a[(r, col)].recip();
            for i in r + 1..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let f = &a[(i, col)] * &inv;
                for j in col..a.cols {
                    let delta = &f * &a[(r, j)];
                    if !delta.is_zero() {
                        a[(i, j)] -= delta;
                    }
                }
            }
            r += 1;
            if r == a.rows {
                break;
            }
        }
        r
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_already_reduced() {
        let a = m(&[&[2, 0], &[0, 2]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, a);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_two_by_two() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(&[&[1, 0], &[0, 2]]));
        assert_eq!(u.mul(&a).unwrap(), h);
        assert_eq!(u.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_zero_row() {
        let a = m(&[&[0, 0]]);
        assert_eq!(hnf(&a).0, a);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let a = m(&[&[3, 5, 1], &[0, 4, 7], &[6, 10, 2]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a).unwrap(), h);
        assert!(h.row(2).iter().all(Zero::is_zero));
        // pivot of row 1 is at column 1 or 2; everything above it is in range
        let pc = (0..3).find(|&c| !h[(1, c)].is_zero()).unwrap();
        assert!(h[(1, pc)].is_positive());
        assert!(!h[(0, pc)].is_negative() && h[(0, pc)] < h[(1, pc)]);
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&m(&[&[2, 4], &[4, 8]])), ints(&[2, 0]));
        assert_eq!(snf(&IntMatrix::identity(3)), ints(&[1, 1, 1]));
        assert_eq!(snf(&m(&[&[2]])), ints(&[2]));
        assert_eq!(snf(&m(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
        assert_eq!(snf(&m(&[&[1, 0], &[0, 1], &[1, 1]])), ints(&[1, 1]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
        assert_eq!(rank(&IntMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn sublattice_membership() {
        assert!(in_sublattice(&ints(&[2, 0]), &m(&[&[1, 0]])).unwrap());
        assert!(!in_sublattice(&ints(&[1, 0]), &m(&[&[2, 0]])).unwrap());
        assert!(in_sublattice(&ints(&[1, 1]), &m(&[&[1, 0], &[0, 1]])).unwrap());
        assert!(in_sublattice(&ints(&[0, 0]), &IntMatrix::zeros(0, 2)).unwrap());
        assert!(!in_sublattice(&ints(&[0, 1]), &IntMatrix::zeros(0, 2)).unwrap());
        assert_eq!(in_sublattice(&ints(&[1]), &m(&[&[1, 0]])), Err(LatticeError::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]).determinant().unwrap(), BigInt::from(4));
    }

    #[test]
    fn rational_rank_and_products() {
        let half = BigRational::new(1.into(), 2.into());
        let r = RationalMatrix::from_rows(2, vec![vec![half.clone(), half.clone()], vec![BigRational::one(), BigRational::one()]]).unwrap();
        assert_eq!(r.rank(), 1);
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        let p = r.mul(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(p, r);
        assert!(r.sub(&r).unwrap().is_zero());
    }
}
