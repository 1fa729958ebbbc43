//! Smith normal form over the integers.
//!
//! [`smith_normal_form`] is the working engine. [`minor_gcd`] is an
//! independent brute-force route through determinantal divisors, kept for
//! cross-checking the engine on small inputs.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::IntMatrix;

/// Largest `min(rows, cols)` that [`minor_gcd`] accepts without an override.
pub const MINOR_GCD_MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    /// Invariant factors, `min(rows, cols)` of them, nonnegative and each
    /// dividing the next.
    #[serde(with = "crate::serde_dec::big_vec")]
    pub factors: Vec<BigInt>,
    pub rank: usize,
    /// `left * a * right = diag(factors)` when transforms were requested.
    pub left: Option<IntMatrix>,
    pub right: Option<IntMatrix>,
}

impl SnfResult {
    /// The diagonal matrix with the shape of the original input.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zeros(rows, cols);
        for (i, f) in self.factors.iter().enumerate() {
            d[(i, i)] = f.clone();
        }
        d
    }
}

struct Reducer {
    a: Vec<Vec<BigInt>>,
    left: Option<Vec<Vec<BigInt>>>,
    right: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(l) = &mut self.left {
                l.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if let Some(r) = &mut self.right {
                for row in r.iter_mut() {
                    row.swap(i, j);
                }
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        fn apply(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt, from: usize) {
            let (s, d) = if src < dst {
                let (lo, hi) = m.split_at_mut(dst);
                (&lo[src], &mut hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(src);
                (&hi[0], &mut lo[dst])
            };
            for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        }
        apply(&mut self.a, dst, src, q, from);
        if let Some(l) = &mut self.left {
            apply(l, dst, src, q, 0);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for row in &mut self.a[from..] {
            if !row[src].is_zero() {
                let v = q * &row[src];
                row[dst] += v;
            }
        }
        if let Some(r) = &mut self.right {
            for row in r.iter_mut() {
                if !row[src].is_zero() {
                    let v = q * &row[src];
                    row[dst] += v;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in &mut self.a[i] {
            *v = -&*v;
        }
        if let Some(l) = &mut self.left {
            for v in &mut l[i] {
                *v = -&*v;
            }
        }
    }

    /// Nonzero entry of least absolute value in the trailing block at `t`.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = &self.a[i][j];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(_, _, b)| v.magnitude() < b.magnitude()) {
                    best = Some((i, j, v));
                    if v.magnitude().is_one() {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` around the pivot at `(t, t)`.
    /// Returns false if some remainder was left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.rows {
            if self.a[i][t].is_zero() {
                continue;
            }
            let q = &self.a[i][t] / &self.a[t][t];
            if !q.is_zero() {
                self.add_row(i, t, &-q, t);
            }
            clean &= self.a[i][t].is_zero();
        }
        for j in t + 1..self.cols {
            if self.a[t][j].is_zero() {
                continue;
            }
            let q = &self.a[t][j] / &self.a[t][t];
            if !q.is_zero() {
                self.add_col(j, t, &-q, t);
            }
            clean &= self.a[t][j].is_zero();
        }
        clean
    }

    /// Moves the smallest nonzero entry of row/column `t` onto the pivot.
    fn repivot(&mut self, t: usize) {
        let mut best = (t, t);
        let mut mag = self.a[t][t].magnitude().clone();
        for i in t + 1..self.rows {
            let v = self.a[i][t].magnitude();
            if !v.is_zero() && *v < mag {
                mag = v.clone();
                best = (i, t);
            }
        }
        for j in t + 1..self.cols {
            let v = self.a[t][j].magnitude();
            if !v.is_zero() && *v < mag {
                mag = v.clone();
                best = (t, j);
            }
        }
        self.swap_rows(t, best.0);
        self.swap_cols(t, best.1);
    }

    /// First entry of the trailing block not divisible by the pivot.
    fn divisibility_violation(&self, t: usize) -> Option<usize> {
        let p = &self.a[t][t];
        (t + 1..self.rows).find(|&i| self.a[i][t + 1..].iter().any(|v| !v.is_multiple_of(p)))
    }

    fn run(&mut self) -> Vec<BigInt> {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                if !self.eliminate(t) {
                    self.repivot(t);
                    continue;
                }
                match self.divisibility_violation(t) {
                    Some(i) => self.add_row(t, i, &BigInt::one(), t),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        (0..n).map(|i| self.a[i][i].clone()).collect()
    }
}

/// Smith normal form of `a`, optionally with unimodular transforms.
pub fn smith_normal_form(a: &IntMatrix, want_transforms: bool) -> SnfResult {
    let (rows, cols) = a.shape();
    let mut r = Reducer {
        a: a.to_rows(),
        left: want_transforms.then(|| IntMatrix::identity(rows).to_rows()),
        right: want_transforms.then(|| IntMatrix::identity(cols).to_rows()),
        rows,
        cols,
    };
    let factors = r.run();
    let rank = factors.iter().take_while(|f| !f.is_zero()).count();
    SnfResult {
        factors,
        rank,
        left: r.left.map(|l| IntMatrix::from_row_vecs(rows, rows, l)),
        right: r.right.map(|m| IntMatrix::from_row_vecs(cols, cols, m)),
    }
}

pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(a, false).factors
}

/// gcd of all `i x i` minors (`d_0 = 1`). Refuses inputs whose smaller
/// dimension exceeds [`MINOR_GCD_MAX_DIM`].
pub fn minor_gcd(a: &IntMatrix, i: usize) -> Result<BigInt> {
    let small = a.rows().min(a.cols());
    if small > MINOR_GCD_MAX_DIM {
        return Err(Error::Precondition(format!(
            "minor_gcd on a {}x{} matrix needs C(n,i)^2 determinants; use minor_gcd_unbounded",
            a.rows(),
            a.cols()
        )));
    }
    minor_gcd_unbounded(a, i)
}

/// [`minor_gcd`] without the size gate.
pub fn minor_gcd_unbounded(a: &IntMatrix, i: usize) -> Result<BigInt> {
    let small = a.rows().min(a.cols());
    if i > small {
        return Err(Error::OutOfRange(format!("minor order {i} exceeds {small}")));
    }
    if i == 0 {
        return Ok(BigInt::one());
    }
    let mut g = BigInt::zero();
    for rows in (0..a.rows()).combinations(i) {
        for cols in (0..a.cols()).combinations(i) {
            let d = a.submatrix(&rows, &cols)?.determinant()?;
            g = g.gcd(&d);
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

/// Invariant factors recovered as `d_i / d_{i-1}` from the minor gcds.
pub fn factors_from_minor_gcds(a: &IntMatrix) -> Result<Vec<BigInt>> {
    let small = a.rows().min(a.cols());
    let mut out = Vec::with_capacity(small);
    let mut prev = BigInt::one();
    for i in 1..=small {
        let d = minor_gcd(a, i)?;
        if d.is_zero() {
            out.resize(small, BigInt::zero());
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    Ok(out)
}

/// `det(m[rows, cols])` for a nonsingular square `m`.
pub fn complementary_minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "row set of size {} vs column set of size {}",
            rows.len(),
            cols.len()
        )));
    }
    if m.determinant()?.is_zero() {
        return Err(Error::Singular);
    }
    m.submatrix(rows, cols)?.determinant()
}

/// Checks the complementary-minor identity
/// `det(M)^{|J'|-1} det(M[I,J]) = (-1)^{sum I + sum J} det(adj(M)[J',I'])`
/// with exact integers (indices are 0-based, which leaves the sign intact).
pub fn jacobi_identity_holds(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> Result<bool> {
    let lhs_minor = complementary_minor(m, rows, cols)?;
    let (adj, det) = m.adjugate_and_det()?;
    let n = m.rows();
    let rows_c: Vec<usize> = (0..n).filter(|i| !rows.contains(i)).collect();
    let cols_c: Vec<usize> = (0..n).filter(|j| !cols.contains(j)).collect();
    let rhs = if rows_c.is_empty() { BigInt::one() } else { adj.submatrix(&cols_c, &rows_c)?.determinant()? };
    let parity = (rows.iter().sum::<usize>() + cols.iter().sum::<usize>()) % 2;
    let rhs = if parity == 1 { -rhs } else { rhs };
    let k = cols_c.len();
    // det^{k-1} may have a negative exponent when k = 0: multiply through.
    Ok(if k == 0 { lhs_minor == &det * &rhs } else { num_traits::pow(det, k - 1) * lhs_minor == rhs })
}

/// Human notation for a factor list: `1, 2^13, 12^10, 60^2`.
pub fn format_factors(factors: &[BigInt]) -> String {
    factors
        .iter()
        .chunk_by(|f| *f)
        .into_iter()
        .map(|(v, run)| match run.count() {
            1 => v.to_string(),
            k => format!("{v}^{k}"),
        })
        .join(", ")
}

/// Inverse of [`format_factors`].
pub fn parse_factors(text: &str) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || Error::Parse { line: 1, msg: format!("bad factor run `{tok}`") };
        let (v, k) = match tok.split_once('^') {
            Some((v, k)) => (v.trim(), k.trim().parse::<usize>().map_err(|_| bad())?),
            None => (tok, 1),
        };
        let v: BigInt = v.parse().map_err(|_| bad())?;
        out.extend(std::iter::repeat_n(v, k));
    }
    Ok(out)
}

/// Expands run-length pairs `[(v, k), ...]` into a factor list.
pub fn expand_runs(runs: &[(u64, usize)]) -> Vec<BigInt> {
    runs.iter().flat_map(|&(v, k)| std::iter::repeat_n(BigInt::from(v), k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_and_diagonals() {
        assert_eq!(invariant_factors(&IntMatrix::identity(4)), ints(&[1, 1, 1, 1]));
        assert_eq!(invariant_factors(&IntMatrix::diagonal([4, 2])), ints(&[2, 4]));
        assert_eq!(invariant_factors(&IntMatrix::diagonal([2, 3])), ints(&[1, 6]));
        assert_eq!(invariant_factors(&IntMatrix::zeros(2, 2)), ints(&[0, 0]));
        let r = smith_normal_form(&IntMatrix::zeros(2, 2), false);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rectangular_with_transforms() {
        let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12]]).unwrap();
        let r = smith_normal_form(&a, true);
        assert_eq!(r.factors, ints(&[2, 6]));
        let (p, q) = (r.left.unwrap(), r.right.unwrap());
        assert_eq!(&(&p * &a) * &q, IntMatrix::from_rows(&[[2, 0, 0], [0, 6, 0]]).unwrap());
        assert!(p.determinant().unwrap().magnitude().is_one());
        assert!(q.determinant().unwrap().magnitude().is_one());
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2, 3) is not in normal form; the fix-up step must fire.
        let r = smith_normal_form(&IntMatrix::diagonal([2, 3]), true);
        assert_eq!(r.factors, ints(&[1, 6]));
        let d = &(&r.left.unwrap() * &IntMatrix::diagonal([2, 3])) * &r.right.unwrap();
        assert_eq!(d, IntMatrix::diagonal([1, 6]));
    }

    #[test]
    fn minor_gcds() {
        let m = IntMatrix::identity(3).scale(&2.into());
        assert_eq!(minor_gcd(&m, 1).unwrap(), BigInt::from(2));
        assert_eq!(minor_gcd(&m, 3).unwrap(), BigInt::from(8));
        assert_eq!(minor_gcd(&m, 0).unwrap(), BigInt::one());
        assert!(matches!(minor_gcd(&m, 4), Err(Error::OutOfRange(_))));
        assert!(matches!(minor_gcd(&IntMatrix::identity(9), 1), Err(Error::Precondition(_))));
        assert_eq!(minor_gcd_unbounded(&IntMatrix::identity(9), 1).unwrap(), BigInt::one());
        let a = IntMatrix::from_rows(&[[3, 1, 4], [1, 5, 9], [2, 6, 5]]).unwrap();
        assert_eq!(minor_gcd(&a, 3).unwrap(), a.determinant().unwrap().abs());
    }

    #[test]
    fn complementary_minors() {
        let m = IntMatrix::diagonal([2, 3]);
        assert_eq!(complementary_minor(&m, &[0], &[0]).unwrap(), BigInt::from(2));
        assert_eq!(complementary_minor(&m, &[0, 1], &[0, 1]).unwrap(), BigInt::from(6));
        assert!(jacobi_identity_holds(&m, &[0], &[0]).unwrap());
        assert!(jacobi_identity_holds(&m, &[0, 1], &[0, 1]).unwrap());
        assert!(jacobi_identity_holds(&m, &[1], &[0]).unwrap());
        assert_eq!(complementary_minor(&IntMatrix::zeros(2, 2), &[0], &[0]), Err(Error::Singular));
        assert!(matches!(complementary_minor(&m, &[0], &[0, 1]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(complementary_minor(&m, &[], &[]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn factor_notation() {
        let f = expand_runs(&[(1, 1), (2, 13), (12, 10), (60, 2)]);
        assert_eq!(format_factors(&f), "1, 2^13, 12^10, 60^2");
        assert_eq!(parse_factors("1, 2^13, 12^10, 60^2").unwrap(), f);
        assert_eq!(format_factors(&ints(&[1, 1, 1])), "1^3");
        assert_eq!(format_factors(&ints(&[0, 0])), "0^2");
        assert_eq!(format_factors(&ints(&[1])), "1");
        assert_eq!(format_factors(&[]), "");
        assert!(parse_factors("2^x").is_err());
    }
}
