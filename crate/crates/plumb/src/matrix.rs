//! Exact integer matrices: determinants by fraction-free elimination and
//! signatures by symmetric congruence reduction over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Inertia of a symmetric bilinear form: counts of positive, negative and
/// zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.b_plus + self.b_minus
    }

    pub fn size(&self) -> usize {
        self.b_plus + self.b_minus + self.b_zero
    }

    pub fn is_negative_definite(&self) -> bool {
        self.b_plus == 0 && self.b_zero == 0
    }
}

/// A square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.n + j] = value;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Exact determinant by the Bareiss fraction-free algorithm.
    /// The empty matrix has determinant 1.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                match (k + 1..n).find(|&r| !at(&m, r, k).is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j)) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        let d = at(&m, n - 1, n - 1);
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Exact inertia of a symmetric matrix via congruence diagonalization
    /// over the rationals. Zero pivots are repaired by diagonal permutation
    /// or, when the whole remaining diagonal vanishes, by a symmetric
    /// row-and-column addition that exposes a nonzero pivot.
    pub fn signature(&self) -> Signature {
        assert!(self.is_symmetric(), "signature requires a symmetric matrix");
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let mut sig = Signature {
            b_plus: 0,
            b_minus: 0,
            b_zero: 0,
        };
        let mut k = 0;
        while k < n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    swap_sym(&mut a, k, j);
                } else if let Some((i, j)) = find_offdiag(&a, k) {
                    // Remaining diagonal is zero; a[i][j] != 0. Adding row and
                    // column j to i gives the diagonal entry 2*a[i][j].
                    add_sym(&mut a, i, j);
                    if i != k {
                        swap_sym(&mut a, k, i);
                    }
                } else {
                    sig.b_zero += n - k;
                    break;
                }
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                sig.b_plus += 1;
            } else {
                sig.b_minus += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] / &pivot;
                for j in k + 1..n {
                    let v = &a[i][j] - &factor * &a[k][j];
                    a[i][j] = v;
                }
                a[i][k] = BigRational::zero();
            }
            for j in k + 1..n {
                a[k][j] = BigRational::zero();
            }
            k += 1;
        }
        sig
    }
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    a.swap(i, j);
    for row in a.iter_mut().take(n) {
        row.swap(i, j);
    }
}

/// Symmetric congruence: row i += row j, then column i += column j.
fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let v = &a[i][c] + &a[j][c];
        a[i][c] = v;
    }
    for r in 0..n {
        let v = &a[r][i] + &a[r][j];
        a[r][i] = v;
    }
}

fn find_offdiag(a: &[Vec<BigRational>], k: usize) -> Option<(usize, usize)> {
    let n = a.len();
    for i in k..n {
        for j in i + 1..n {
            if !a[i][j].is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}
