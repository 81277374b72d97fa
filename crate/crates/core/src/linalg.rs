//! Dense exact linear algebra over Q: row reduction, rank, kernels and
//! linear solves with infeasibility certificates.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::primitive_integer_vector;
use crate::arith::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect()
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
pub fn rref(m: &Matrix, ncols: usize) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[row].clone();
        for (r, line) in a.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col].clone();
                for (x, p) in line.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix, ncols: usize) -> usize {
    rref(m, ncols).1.len()
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column.
pub fn kernel(m: &Matrix, ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[i][f].clone();
            }
            v
        })
        .collect()
}

/// Kernel basis scaled to primitive integer vectors.
pub fn integer_kernel(m: &Matrix, ncols: usize) -> Vec<Vec<BigInt>> {
    kernel(m, ncols)
        .iter()
        .map(|v| primitive_integer_vector(v))
        .collect()
}

/// Outcome of solving `m x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solve {
    /// A particular solution (free variables set to zero).
    Solution(Vec<Rational>),
    /// A vector `y` with `y^T m = 0` and `y . b != 0`.
    Infeasible(Vec<Rational>),
}

pub fn solve(m: &Matrix, ncols: usize, b: &[Rational]) -> Solve {
    let nrows = m.len();
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        let mt = transpose(m, ncols);
        let left = kernel(&mt, nrows);
        let y = left
            .into_iter()
            .find(|y| !dot(y, b).is_zero())
            .expect("inconsistent system has a certificate");
        return Solve::Infeasible(y);
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[i][ncols].clone();
    }
    Solve::Solution(x)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}
