//! Constructors for the matrix families: tournaments and their bordered
//! skew-type matrices, two-block EW matrices, and Barba doubling.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::IntMatrix;

/// First row of the 13x13 circulant Barba matrix of the order-26 example.
pub const EXAMPLE_26_ROW: [i64; 13] = [1, 1, 1, 1, -1, 1, -1, -1, 1, 1, 1, -1, 1];

/// First row of the 11x11 skew circulant behind the order-66 example.
pub const EXAMPLE_66_ROW: [i64; 11] = [0, -1, 1, -1, -1, -1, 1, 1, 1, -1, 1];

/// A 0/1 matrix `A` with `A + A^T = J - I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tournament {
    matrix: IntMatrix,
}

impl Tournament {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotTournament(format!("{}x{} is not square", matrix.rows(), matrix.cols())));
        }
        if !matrix.is_01() {
            return Err(Error::NotTournament("entries outside {0, 1}".into()));
        }
        let n = matrix.rows();
        for i in 0..n {
            if !matrix[(i, i)].is_zero() {
                return Err(Error::NotTournament(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                if !(&matrix[(i, j)] + &matrix[(j, i)]).is_one() {
                    return Err(Error::NotTournament(format!("pair ({i}, {j}) is not oriented exactly once")));
                }
            }
        }
        Ok(Self { matrix })
    }

    /// Decodes the strictly-upper-triangular pattern: bit `k` refers to the
    /// `k`-th pair `(i, j)`, `i < j`, in row-major order, and a set bit means
    /// `i -> j`.
    pub fn from_upper_bits(order: usize, bits: impl Fn(usize) -> bool) -> Self {
        let mut m = IntMatrix::zeros(order, order);
        let mut k = 0;
        for i in 0..order {
            for j in i + 1..order {
                if bits(k) {
                    m[(i, j)] = BigInt::one();
                } else {
                    m[(j, i)] = BigInt::one();
                }
                k += 1;
            }
        }
        Self { matrix: m }
    }

    /// The tournament in which `i -> j` whenever `i < j`.
    pub fn transitive(order: usize) -> Self {
        Self::from_upper_bits(order, |_| true)
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|i| self.matrix.row(i).iter().filter(|v| v.is_one()).count()).collect()
    }

    /// `A + I`
    pub fn plus_identity(&self) -> IntMatrix {
        &self.matrix + &IntMatrix::identity(self.order())
    }

    /// Relabels vertices: vertex `i` of the result is vertex `order[i]`.
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        Ok(Self { matrix: self.matrix.permute_symmetric(order)? })
    }
}

/// Borders a tournament: `S = [[1, 1^T], [-1, I + A - A^T]]`.
pub fn skew_from_tournament(a: &Tournament) -> IntMatrix {
    let n = a.order();
    let m = a.matrix();
    IntMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, _) => 1,
        (_, 0) => -1,
        (i, j) if i == j => 1,
        (i, j) => {
            if m[(i - 1, j - 1)].is_one() {
                1
            } else {
                -1
            }
        }
    })
}

/// Inverse of [`skew_from_tournament`]. Only the exact bordered form is
/// accepted: first row all `+1`, first column `-1` below the corner.
pub fn tournament_from_skew(s: &IntMatrix) -> Result<Tournament> {
    let n = s.rows();
    if !s.is_square() || n == 0 {
        return Err(Error::NotNormalized(format!("{}x{} is not a nonempty square", s.rows(), s.cols())));
    }
    if !s.is_pm1() {
        return Err(Error::NotNormalized("entries outside {1, -1}".into()));
    }
    if s.row(0).iter().any(|v| !v.is_one()) {
        return Err(Error::NotNormalized("first row is not all ones".into()));
    }
    if (1..n).any(|i| s[(i, 0)] != BigInt::from(-1)) {
        return Err(Error::NotNormalized("first column is not -1 below the corner".into()));
    }
    for i in 1..n {
        if !s[(i, i)].is_one() {
            return Err(Error::NotNormalized(format!("diagonal entry {i} is not 1")));
        }
        for j in i + 1..n {
            if !(&s[(i, j)] + &s[(j, i)]).is_zero() {
                return Err(Error::NotNormalized(format!("S + S^T is nonzero at ({i}, {j})")));
            }
        }
    }
    let a = IntMatrix::from_fn(n - 1, n - 1, |i, j| i64::from(i != j && s[(i + 1, j + 1)].is_one()));
    Tournament::new(a)
}

/// Brings a skew-type +-1 matrix into bordered form by a simultaneous
/// signed permutation, using row `pivot` as the new first row.
pub fn normalize_skew(x: &IntMatrix, pivot: usize) -> Result<IntMatrix> {
    let n = x.rows();
    if !x.is_square() || !x.is_pm1() {
        return Err(Error::InvalidEntries("need a square +-1 matrix".into()));
    }
    if pivot >= n {
        return Err(Error::OutOfRange(format!("pivot {pivot} of {n}")));
    }
    let two_i = IntMatrix::identity(n).scale(&BigInt::from(2));
    if (x + &x.transpose()) != two_i {
        return Err(Error::Precondition("matrix is not skew-type".into()));
    }
    let signs: Vec<i8> = (0..n).map(|j| if j == pivot || x[(pivot, j)].is_one() { 1 } else { -1 }).collect();
    let order: Vec<usize> = std::iter::once(pivot).chain((0..n).filter(|&j| j != pivot)).collect();
    x.sign_switch(&signs, &signs).permute_symmetric(&order)
}

/// Two square blocks of equal order assembled as `[[R1, R2], [-R2^T, R1^T]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockEwSpec {
    pub r1_block: IntMatrix,
    pub r2_block: IntMatrix,
}

impl BlockEwSpec {
    pub fn new(r1_block: IntMatrix, r2_block: IntMatrix) -> Result<Self> {
        if !r1_block.is_square() || r1_block.shape() != r2_block.shape() {
            return Err(Error::DimensionMismatch(format!(
                "blocks {:?} and {:?} must be square of equal order",
                r1_block.shape(),
                r2_block.shape()
            )));
        }
        Ok(Self { r1_block, r2_block })
    }

    /// Splits a matrix already in the two-block layout, if it is one.
    pub fn from_matrix(x: &IntMatrix) -> Option<Self> {
        let n = x.rows();
        if !x.is_square() || n % 2 != 0 {
            return None;
        }
        let h = n / 2;
        let (lo, hi): (Vec<usize>, Vec<usize>) = ((0..h).collect(), (h..n).collect());
        let r1 = x.submatrix(&lo, &lo).ok()?;
        let r2 = x.submatrix(&lo, &hi).ok()?;
        let spec = Self { r1_block: r1, r2_block: r2 };
        (spec.assemble() == *x).then_some(spec)
    }

    pub fn order(&self) -> usize {
        2 * self.r1_block.rows()
    }

    pub fn assemble(&self) -> IntMatrix {
        let r1 = &self.r1_block;
        let r2 = &self.r2_block;
        IntMatrix::block2x2(r1, r2, &-&r2.transpose(), &r1.transpose()).expect("blocks validated")
    }

    /// `(r1, r2)` when `R_k J = R_k^T J = r_k J` for both blocks.
    pub fn block_row_sums(&self) -> Option<(BigInt, BigInt)> {
        Some((constant_line_sum(&self.r1_block)?, constant_line_sum(&self.r2_block)?))
    }
}

fn constant_line_sum(m: &IntMatrix) -> Option<BigInt> {
    let rs = m.row_sums();
    let first = rs.first()?.clone();
    let all_same = rs.iter().chain(m.col_sums().iter()).all(|s| *s == first);
    all_same.then_some(first)
}

/// The order-26 EW matrix `[[R, R], [-R^T, R^T]]`, `R` the 13x13 circulant
/// on [`EXAMPLE_26_ROW`].
pub fn build_example_26() -> IntMatrix {
    example_26_spec().assemble()
}

pub fn example_26_spec() -> BlockEwSpec {
    let r = IntMatrix::circulant(&EXAMPLE_26_ROW).expect("nonempty row");
    BlockEwSpec::new(r.clone(), r).expect("equal blocks")
}

/// The order-66 EW matrix built from the 11x11 circulant `A` on
/// [`EXAMPLE_66_ROW`]:
///
/// `R1 = (A + I) (x) (J3 - I3) + (J11 - 2 I11) (x) I3`,
/// `R2 = (A + I) (x) (J3 - I3) + (I11 - A) (x) I3`.
pub fn build_example_66() -> IntMatrix {
    example_66_spec().assemble()
}

pub fn example_66_spec() -> BlockEwSpec {
    let a = IntMatrix::circulant(&EXAMPLE_66_ROW).expect("nonempty row");
    let i11 = IntMatrix::identity(11);
    let i3 = IntMatrix::identity(3);
    let j3_minus_i3 = &IntMatrix::ones(3, 3) - &i3;
    let shared = (&a + &i11).kronecker(&j3_minus_i3);
    let j11_minus_2i = &IntMatrix::ones(11, 11) - &i11.scale(&BigInt::from(2));
    let r1 = &shared + &j11_minus_2i.kronecker(&i3);
    let r2 = &shared + &(&i11 - &a).kronecker(&i3);
    BlockEwSpec::new(r1, r2).expect("33x33 blocks")
}

/// `[[R, R], [-R^T, R^T]]`; an EW matrix of order `2n` when `R` is Barba.
pub fn barba_double(r: &IntMatrix) -> Result<IntMatrix> {
    if !r.is_square() {
        return Err(Error::NotSquare { rows: r.rows(), cols: r.cols() });
    }
    if !r.is_pm1() {
        return Err(Error::InvalidEntries("Barba doubling needs a +-1 matrix".into()));
    }
    Ok(BlockEwSpec::new(r.clone(), r.clone())?.assemble())
}

/// `R R^T = R^T R = (n - 1) I + J`.
pub fn is_barba(r: &IntMatrix) -> Result<bool> {
    if !r.is_square() {
        return Err(Error::NotSquare { rows: r.rows(), cols: r.cols() });
    }
    if !r.is_pm1() {
        return Err(Error::InvalidEntries("Barba test needs a +-1 matrix".into()));
    }
    let n = r.rows();
    let target = &IntMatrix::identity(n).scale(&BigInt::from(n as i64 - 1)) + &IntMatrix::ones(n, n);
    Ok(r.gram() == target && r.transpose().gram() == target)
}
