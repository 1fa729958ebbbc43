//! Dense matrices over arbitrary-precision integers.
//!
//! Every matrix the crate handles (designs, tournaments, transforms) is an
//! [`IntMatrix`]. Storage is row-major and all arithmetic is exact.

mod format;

pub use format::{parse_matrices, parse_matrix, write_matrix};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::is_prime;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    #[serde(rename = "entries", with = "crate::serde_dec::big_vec")]
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    /// All-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| 1)
    }

    pub fn diagonal<I: Into<BigInt>, T: IntoIterator<Item = I>>(diag: T) -> Self {
        let diag: Vec<BigInt> = diag.into_iter().map(Into::into).collect();
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> i64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(BigInt::from(f(i, j)));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from equal-length rows of machine integers.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn from_row_vecs(rows: usize, cols: usize, v: Vec<Vec<BigInt>>) -> Self {
        let data: Vec<BigInt> = v.into_iter().flatten().collect();
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.map(|v| v * k)
    }

    pub fn map<F: FnMut(&BigInt) -> BigInt>(&self, f: F) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with<F: Fn(&BigInt, &BigInt) -> BigInt>(&self, other: &Self, f: F) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Exact product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * self^T`
    pub fn gram(&self) -> Self {
        self.matmul(&self.transpose()).expect("conformable by construction")
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| &self[(i, j)]).sum()).collect()
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::OutOfRange(format!("row {r} of {}", self.rows)));
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::OutOfRange(format!("column {c} of {}", self.cols)));
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self[(r, c)].clone());
            }
        }
        Ok(Self { rows: rows.len(), cols: cols.len(), data })
    }

    /// Simultaneous reordering: row `i` of the result is row `order[i]`,
    /// and likewise for columns.
    pub fn permute_symmetric(&self, order: &[usize]) -> Result<Self> {
        self.submatrix(order, order)
    }

    /// `D * self * D` for a diagonal sign matrix `D`.
    pub fn sign_switch(&self, row_signs: &[i8], col_signs: &[i8]) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if row_signs[i] * col_signs[j] < 0 {
                    out[(i, j)] = -&out[(i, j)];
                }
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// True when every entry is `1` or `-1`.
    pub fn is_pm1(&self) -> bool {
        self.data.iter().all(|v| v.abs().is_one())
    }

    /// True when every entry is `0` or `1`.
    pub fn is_01(&self) -> bool {
        self.data.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        negate = !negate;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            let (head, tail) = a.split_at_mut(k + 1);
            let pivot_row = &head[k];
            for row in tail.iter_mut() {
                for j in k + 1..n {
                    let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// Returns `(adj, det)` with `self * adj = det * I`.
    ///
    /// Fraction-free Gauss-Jordan (Montante) elimination on `[A | I]`: every
    /// intermediate is a minor of the augmented matrix, so the divisions by
    /// the previous pivot are exact.
    pub fn adjugate_and_det(&self) -> Result<(Self, BigInt)> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok((Self::zeros(0, 0), BigInt::one()));
        }
        let w = 2 * n;
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| BigInt::from(i64::from(i == j))));
                r
            })
            .collect();
        let mut prev = BigInt::one();
        let mut negate = false;
        for k in 0..n {
            if m[k][k].is_zero() {
                let p = (k + 1..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::Singular)?;
                m.swap(k, p);
                negate = !negate;
            }
            let pivot_row = m[k].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..w {
                    if j == k {
                        continue;
                    }
                    let v = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot_row[k].clone();
        }
        // Row swaps act on [A | I] as [PA | P]; the right half ends up as
        // det(PA) * A^{-1}, which differs from adj(A) by the swap sign.
        let det = if negate { -&prev } else { prev };
        let mut data = Vec::with_capacity(n * n);
        for row in m {
            for v in row.into_iter().skip(n) {
                data.push(if negate { -v } else { v });
            }
        }
        Ok((Self { rows: n, cols: n, data }, det))
    }

    /// Rank of the matrix reduced modulo a prime `p`.
    pub fn rank_mod_p(&self, p: u64) -> Result<usize> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let bp = BigInt::from(p);
        let mut a: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| {
                        let r = ((v % &bp) + &bp) % &bp;
                        u64::try_from(r).expect("residue fits")
                    })
                    .collect()
            })
            .collect();
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = pow_mod(a[rank][col], p - 2, p);
            for v in &mut a[rank][col..] {
                *v = mulmod(*v, inv);
            }
            let pivot_row = a[rank].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    let f = row[col];
                    for (v, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *v = (*v + p - mulmod(f, pv)) % p;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Ok(rank)
    }

    /// Circulant matrix: row `i` is the first row shifted right `i` times.
    pub fn circulant(first_row: &[i64]) -> Result<Self> {
        let n = first_row.len();
        if n == 0 {
            return Err(Error::InvalidEntries("circulant needs a nonempty row".into()));
        }
        Ok(Self::from_fn(n, n, |i, j| first_row[(j + n - i) % n]))
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            let (ai, bi) = (i / other.rows, i % other.rows);
            for j in 0..c {
                let (aj, bj) = (j / other.cols, j % other.cols);
                data.push(&self[(ai, aj)] * &other[(bi, bj)]);
            }
        }
        Self { rows: r, cols: c, data }
    }

    /// Assembles `[[a11, a12], [a21, a22]]`.
    pub fn block2x2(a11: &Self, a12: &Self, a21: &Self, a22: &Self) -> Result<Self> {
        if a11.rows != a12.rows || a21.rows != a22.rows || a11.cols != a21.cols || a12.cols != a22.cols {
            return Err(Error::DimensionMismatch(format!(
                "blocks {}x{}, {}x{}, {}x{}, {}x{} do not tile",
                a11.rows, a11.cols, a12.rows, a12.cols, a21.rows, a21.cols, a22.rows, a22.cols
            )));
        }
        let (top, left) = (a11.rows, a11.cols);
        let (r, c) = (top + a21.rows, left + a12.cols);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let v = match (i < top, j < left) {
                    (true, true) => &a11[(i, j)],
                    (true, false) => &a12[(i, j - left)],
                    (false, true) => &a21[(i - top, j)],
                    (false, false) => &a22[(i - top, j - left)],
                };
                data.push(v.clone());
            }
        }
        Ok(Self { rows: r, cols: c, data })
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `try_*`/`matmul` methods
// when the shapes come from input.
impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        self.map(|v| -v)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_matrix(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    const EXAMPLE_26_ROW: [i64; 13] = [1, 1, 1, 1, -1, 1, -1, -1, 1, 1, 1, -1, 1];
    const EXAMPLE_66_ROW: [i64; 11] = [0, -1, 1, -1, -1, -1, 1, 1, 1, -1, 1];

    #[test]
    fn identity_product() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(i3.matmul(&i3).unwrap(), i3);
    }

    #[test]
    fn circulant_grams() {
        let r = IntMatrix::circulant(&EXAMPLE_26_ROW).unwrap();
        let expect = &IntMatrix::identity(13).scale(&12.into()) + &IntMatrix::ones(13, 13);
        assert_eq!(r.gram(), expect);

        let a = IntMatrix::circulant(&EXAMPLE_66_ROW).unwrap();
        let expect = &IntMatrix::identity(11).scale(&11.into()) - &IntMatrix::ones(11, 11);
        assert_eq!(a.gram(), expect);
    }

    #[test]
    fn matmul_mismatch() {
        let a = IntMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn small_determinants() {
        assert_eq!(IntMatrix::identity(5).determinant().unwrap(), BigInt::one());
        assert_eq!(m(&[&[1, 1], &[-1, 1]]).determinant().unwrap(), BigInt::from(2));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), BigInt::zero());
        assert_eq!(IntMatrix::zeros(0, 0).determinant().unwrap(), BigInt::one());
        assert!(matches!(IntMatrix::zeros(2, 3).determinant(), Err(Error::NotSquare { .. })));
        // needs a pivot swap in the middle of the elimination
        let p = m(&[&[1, 2, 3], &[2, 4, 7], &[1, 3, 2]]);
        assert_eq!(p.determinant().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn adjugates() {
        let (adj, d) = IntMatrix::identity(3).adjugate_and_det().unwrap();
        assert_eq!((adj, d), (IntMatrix::identity(3), BigInt::one()));
        let (adj, d) = IntMatrix::diagonal([2, 3]).adjugate_and_det().unwrap();
        assert_eq!((adj, d), (IntMatrix::diagonal([3, 2]), BigInt::from(6)));
        let swap = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
        let (adj, d) = swap.adjugate_and_det().unwrap();
        assert_eq!(d, BigInt::from(-2));
        assert_eq!(&swap * &adj, IntMatrix::identity(3).scale(&d));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).adjugate_and_det().unwrap_err(), Error::Singular);
    }

    #[test]
    fn ranks_mod_p() {
        assert_eq!(IntMatrix::identity(4).rank_mod_p(2).unwrap(), 4);
        for p in [2, 3, 5, 7] {
            assert_eq!(IntMatrix::ones(5, 5).rank_mod_p(p).unwrap(), 1);
        }
        assert_eq!(IntMatrix::identity(3).scale(&3.into()).rank_mod_p(3).unwrap(), 0);
        assert_eq!(m(&[&[-1, 2], &[1, 1]]).rank_mod_p(3).unwrap(), 1);
        assert_eq!(IntMatrix::identity(2).rank_mod_p(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn circulant_shapes() {
        assert_eq!(IntMatrix::circulant(&[5]).unwrap(), m(&[&[5]]));
        let c = IntMatrix::circulant(&[0, 1, 0]).unwrap();
        assert_eq!(c, m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        let r = IntMatrix::circulant(&EXAMPLE_26_ROW).unwrap();
        assert!(r.row_sums().iter().all(|s| *s == BigInt::from(5)));
        assert!(IntMatrix::circulant(&[]).is_err());
    }

    #[test]
    fn kronecker_products() {
        let b = m(&[&[1, 2], &[3, 4]]);
        let k = IntMatrix::identity(2).kronecker(&b);
        assert_eq!(k, IntMatrix::block2x2(&b, &IntMatrix::zeros(2, 2), &IntMatrix::zeros(2, 2), &b).unwrap());
        assert_eq!(m(&[&[2]]).kronecker(&b), b.scale(&2.into()));

        // R1 of the order-66 construction: (A + I) (x) (J3 - I3) + (J11 - 2 I11) (x) I3
        let a = IntMatrix::circulant(&EXAMPLE_66_ROW).unwrap();
        let i11 = IntMatrix::identity(11);
        let j3_i3 = &IntMatrix::ones(3, 3) - &IntMatrix::identity(3);
        let j11_2i = &IntMatrix::ones(11, 11) - &i11.scale(&2.into());
        let r1 = &(&a + &i11).kronecker(&j3_i3) + &j11_2i.kronecker(&IntMatrix::identity(3));
        assert!(r1.row_sums().iter().all(|s| *s == BigInt::from(11)));
    }

    #[test]
    fn block_assembly() {
        let one = m(&[&[1]]);
        let x = IntMatrix::block2x2(&one, &one, &-&one, &one).unwrap();
        assert_eq!(x, m(&[&[1, 1], &[-1, 1]]));
        let bad = IntMatrix::block2x2(&one, &IntMatrix::zeros(2, 1), &one, &one);
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn shape_checks() {
        assert!(IntMatrix::new(2, 2, vec![BigInt::one(); 3]).is_err());
        assert!(IntMatrix::from_rows(&[vec![1, 2], vec![3]]).is_err());
        assert!(IntMatrix::identity(2).submatrix(&[0, 2], &[0]).is_err());
    }
}
