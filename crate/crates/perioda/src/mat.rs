//! Small exact matrices backing the lattice operations: integer column
//! Hermite normal form (with optional transformation tracking), rational
//! determinants, inverses, and matrix-vector products.
//!
//! Everything here is sized for ranks in the low single digits; no attempt
//! is made at asymptotic cleverness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::point::Rat;

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            a: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.a[i * self.cols + j]
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + j, i * self.cols + k);
        }
    }

    /// col_j += q * col_k
    fn add_col(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = self.at(i, k) * q;
            *self.at_mut(i, j) += t;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.at(i, j).clone();
            *self.at_mut(i, j) = v;
        }
    }

    /// In-place column Hermite normal form. Afterwards the matrix is lower
    /// triangular in its first `min(rows, cols)` columns with positive
    /// pivots, entries left of each pivot reduced into `[0, pivot)`, and all
    /// later columns zero. Returns the pivot count (the rank).
    ///
    /// When `transform` is supplied it must be a `cols x cols` identity on
    /// entry; the same column operations are applied so that
    /// `original * transform == hnf`.
    pub fn col_hnf(&mut self, mut transform: Option<&mut IntMat>) -> usize {
        let mut pivot = 0;
        for i in 0..self.rows {
            if pivot == self.cols {
                break;
            }
            loop {
                // smallest nonzero entry in row i among columns pivot..
                let mut best: Option<usize> = None;
                for j in pivot..self.cols {
                    if !self.at(i, j).is_zero()
                        && best.is_none_or(|b| self.at(i, j).abs() < self.at(i, b).abs())
                    {
                        best = Some(j);
                    }
                }
                let Some(b) = best else { break };
                self.swap_cols(pivot, b);
                if let Some(t) = transform.as_deref_mut() {
                    t.swap_cols(pivot, b);
                }
                let mut done = true;
                for j in pivot + 1..self.cols {
                    if !self.at(i, j).is_zero() {
                        let q = -(self.at(i, j) / self.at(i, pivot));
                        self.add_col(j, pivot, &q);
                        if let Some(t) = transform.as_deref_mut() {
                            t.add_col(j, pivot, &q);
                        }
                        if !self.at(i, j).is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if self.at(i, pivot).is_zero() {
                continue; // no pivot in this row
            }
            if self.at(i, pivot).is_negative() {
                self.negate_col(pivot);
                if let Some(t) = transform.as_deref_mut() {
                    t.negate_col(pivot);
                }
            }
            for j in 0..pivot {
                let q = -self.at(i, j).div_floor(self.at(i, pivot));
                self.add_col(j, pivot, &q);
                if let Some(t) = transform.as_deref_mut() {
                    t.add_col(j, pivot, &q);
                }
            }
            pivot += 1;
        }
        pivot
    }
}

/// Determinant of a square rational matrix (row-major), by exact Gaussian
/// elimination.
pub fn rat_det(n: usize, a: &[Rat]) -> Rat {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r * n + col].is_zero());
        let Some(p) = pivot else { return Rat::zero() };
        if p != col {
            for j in 0..n {
                m.swap(p * n + j, col * n + j);
            }
            det = -det;
        }
        let pv = m[col * n + col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r * n + col].is_zero() {
                continue;
            }
            let f = &m[r * n + col] / &pv;
            for j in col..n {
                let t = &m[col * n + j] * &f;
                m[r * n + j] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn rat_inverse(n: usize, a: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut inv: Vec<Rat> = (0..n * n)
        .map(|k| {
            if k / n == k % n {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r * n + col].is_zero())?;
        if p != col {
            for j in 0..n {
                m.swap(p * n + j, col * n + j);
                inv.swap(p * n + j, col * n + j);
            }
        }
        let pv = m[col * n + col].clone();
        for j in 0..n {
            m[col * n + j] /= &pv;
            inv[col * n + j] /= &pv;
        }
        for r in 0..n {
            if r == col || m[r * n + col].is_zero() {
                continue;
            }
            let f = m[r * n + col].clone();
            for j in 0..n {
                let t = &m[col * n + j] * &f;
                m[r * n + j] -= t;
                let t = &inv[col * n + j] * &f;
                inv[r * n + j] -= t;
            }
        }
    }
    Some(inv)
}

/// `a * v` for a row-major `n x n` rational matrix.
pub fn rat_mat_vec(n: usize, a: &[Rat], v: &[Rat]) -> Vec<Rat> {
    assert_eq!(v.len(), n);
    (0..n)
        .map(|i| {
            let mut acc = Rat::zero();
            for j in 0..n {
                if !a[i * n + j].is_zero() && !v[j].is_zero() {
                    acc += &a[i * n + j] * &v[j];
                }
            }
            acc
        })
        .collect()
}

/// `a * b` for row-major rational matrices (`n x n`).
pub fn rat_mat_mul(n: usize, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k * n + j].is_zero() {
                    continue;
                }
                let t = &a[i * n + k] * &b[k * n + j];
                out[i * n + j] += t;
            }
        }
    }
    out
}

/// Common denominator of a rational slice.
pub fn common_denominator(a: &[Rat]) -> BigInt {
    let mut d = BigInt::one();
    for r in a {
        d = d.lcm(r.denom());
    }
    d
}

/// Scales a rational matrix into an integer one: returns `(d, d*a)`.
pub fn to_integer_matrix(a: &[Rat]) -> (BigInt, Vec<BigInt>) {
    let d = common_denominator(a);
    let dr = BigRational::from_integer(d.clone());
    (d, a.iter().map(|r| (r * &dr).to_integer()).collect())
}
