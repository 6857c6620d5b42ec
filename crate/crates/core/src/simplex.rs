//! Exact rational revised simplex for the integer-weight LP.
//!
//! The weight LP is `min Σ zⱼ` subject to `⟨w, z⟩ >= 1` for every constraint
//! vector `w`. Because every unit vector is among the constraints, the dual
//! `max Σ λ_w` s.t. `Σ λ_w·w = 1`, `λ >= 0` starts from the identity basis
//! without a phase one. At dual optimality the simplex multipliers are a
//! primal vertex and the basic columns are its tight constraints.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, internal, resource, Result};
use crate::linalg::{identity, Matrix};

/// A primal vertex together with the constraints that are tight at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub z: Vec<BigRational>,
    /// Indices into the constraint list, one per dimension.
    pub tight: Vec<usize>,
    pub pivots: usize,
}

/// Solves the weight LP over `constraints`, all of dimension `dim`.
/// The unit vectors must be present.
pub fn solve_weight_lp(constraints: &[Vec<i64>], dim: usize, max_pivots: usize) -> Result<Vertex> {
    if constraints.iter().any(|c| c.len() != dim) {
        return Err(domain("constraint vectors disagree on dimension"));
    }
    let mut basis: Vec<usize> = (0..dim)
        .map(|j| {
            constraints
                .iter()
                .position(|c| c.iter().enumerate().all(|(i, &x)| x == i64::from(i == j)))
                .ok_or_else(|| domain(format!("unit vector {j} missing from constraints")))
        })
        .collect::<Result<_>>()?;
    let column = |c: usize| -> Vec<BigRational> {
        constraints[c].iter().map(|&x| BigRational::from_integer(x.into())).collect()
    };
    let mut b_inv: Matrix = identity(dim);
    let mut x_b: Vec<BigRational> = vec![BigRational::one(); dim];
    let mut pivots = 0;
    loop {
        // multipliers y = 1ᵀ·B⁻¹
        let y: Vec<BigRational> = (0..dim)
            .map(|j| b_inv.iter().fold(BigRational::zero(), |acc, row| acc + &row[j]))
            .collect();
        // Bland: lowest index with positive reduced cost 1 − ⟨w, y⟩
        let entering = (0..constraints.len()).find(|&c| {
            !basis.contains(&c) && {
                let dot = constraints[c]
                    .iter()
                    .zip(&y)
                    .fold(BigRational::zero(), |acc, (&w, yj)| acc + yj * BigRational::from_integer(w.into()));
                dot < BigRational::one()
            }
        });
        let Some(entering) = entering else {
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by_key(|&i| basis[i]);
            return Ok(Vertex { z: y, tight: order.into_iter().map(|i| basis[i]).collect(), pivots });
        };
        if pivots >= max_pivots {
            return Err(resource(format!("simplex exceeded {max_pivots} pivots")));
        }
        let a = column(entering);
        let d: Vec<BigRational> = b_inv
            .iter()
            .map(|row| row.iter().zip(&a).fold(BigRational::zero(), |acc, (x, y)| acc + x * y))
            .collect();
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, di) in d.iter().enumerate() {
            if !di.is_positive() {
                continue;
            }
            let ratio = &x_b[i] / di;
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (r, theta) = leave.ok_or_else(|| internal("weight LP dual is unbounded, so the primal is infeasible"))?;
        for i in 0..dim {
            if i != r {
                x_b[i] = &x_b[i] - &theta * &d[i];
            }
        }
        x_b[r] = theta;
        let pivot_row: Vec<BigRational> = b_inv[r].iter().map(|x| x / &d[r]).collect();
        for (i, row) in b_inv.iter_mut().enumerate() {
            if i == r || d[i].is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &d[i] * p;
            }
        }
        b_inv[r] = pivot_row;
        basis[r] = entering;
        pivots += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn two_dimensional_vertex() {
        // z0 >= 1, z1 >= 1, z0 + z1 >= 1, z1 − z0 >= 1: optimum (1, 2)
        let cons = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 1]];
        let v = solve_weight_lp(&cons, 2, 100).unwrap();
        assert_eq!(v.z, vec![q(1), q(2)]);
        let mut tight = v.tight.clone();
        tight.sort();
        assert_eq!(tight, vec![0, 3]);
    }

    #[test]
    fn infeasible_system_is_internal_error() {
        // z0 >= 1 and −z0 >= 1 cannot both hold
        let cons = vec![vec![1], vec![-1]];
        assert!(matches!(solve_weight_lp(&cons, 1, 100), Err(crate::Error::Internal(_))));
    }

    #[test]
    fn missing_unit_vector() {
        assert!(solve_weight_lp(&[vec![1, 1]], 2, 10).is_err());
    }

    #[test]
    fn vertex_satisfies_all_constraints() {
        let cons = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, -1, 1], vec![-1, 1, 0], vec![1, 1, -1], vec![-1, 0, 1]];
        let v = solve_weight_lp(&cons, 3, 100).unwrap();
        for c in &cons {
            let dot = c.iter().zip(&v.z).fold(BigRational::zero(), |acc, (&w, z)| acc + z * q(w));
            assert!(dot >= BigRational::one());
        }
        for &t in &v.tight {
            let dot = cons[t].iter().zip(&v.z).fold(BigRational::zero(), |acc, (&w, z)| acc + z * q(w));
            assert_eq!(dot, BigRational::one());
        }
    }
}
