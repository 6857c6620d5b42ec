//! Exact linear algebra over the rationals on small dense matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

pub type Matrix = Vec<Vec<BigRational>>;

pub fn to_rational_matrix(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(BigRational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

fn check_square(m: &[Vec<BigRational>]) -> Result<usize> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(domain("matrix is not square"));
    }
    Ok(n)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn determinant(rows: &[Vec<i64>]) -> Result<BigInt> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(domain("matrix is not square"));
    }
    let mut a: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(if n == 0 { BigInt::one() } else { sign * &a[n - 1][n - 1] })
}

/// Solves `m · x = rhs` by Gaussian elimination; errors if `m` is singular.
pub fn solve(m: &[Vec<BigRational>], rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    let n = check_square(m)?;
    if rhs.len() != n {
        return Err(domain("right-hand side has the wrong length"));
    }
    let mut aug: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();
    eliminate(&mut aug, n)?;
    Ok(aug.into_iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(m: &[Vec<BigRational>]) -> Result<Matrix> {
    let n = check_square(m)?;
    let mut aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    eliminate(&mut aug, n)?;
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Gauss-Jordan on the leading `n × n` block of an augmented matrix.
fn eliminate(aug: &mut Matrix, n: usize) -> Result<()> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| domain("matrix is singular"))?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
    }
    Ok(())
}

/// Row-echelon form built one vector at a time, for greedy independence
/// tests.
#[derive(Debug, Clone, Default)]
pub struct IncrementalEchelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl IncrementalEchelon {
    pub fn new() -> IncrementalEchelon {
        IncrementalEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the vectors inserted so far and
    /// reports whether it was.
    pub fn try_insert(&mut self, v: &[i64]) -> bool {
        let mut r: Vec<BigRational> =
            v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
        for (pc, row) in &self.rows {
            if r[*pc].is_zero() {
                continue;
            }
            let f = r[*pc].clone();
            for (x, y) in r.iter_mut().zip(row) {
                *x -= &f * y;
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                let inv = r[pc].recip();
                for x in r.iter_mut() {
                    *x *= &inv;
                }
                // keep earlier rows reduced against the new pivot column
                for (_, row) in self.rows.iter_mut() {
                    if !row[pc].is_zero() {
                        let f = row[pc].clone();
                        for (x, y) in row.iter_mut().zip(&r) {
                            *x -= &f * y;
                        }
                    }
                }
                self.rows.push((pc, r));
                true
            }
            None => false,
        }
    }
}
