//! Maximum likelihood estimation: closed forms from blending functions and
//! Horn pairs, the fiber-product formula, Birch residuals and an iterative
//! proportional scaling oracle.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::rational::{format_rational, to_f64};
use crate::arith::Rational;
use crate::blending::{BlendingSystem, WeightVector};
use crate::geometry::{DesignMatrix, PointConfiguration};
use crate::horn::{horn_parametrize, HornError, HornPair};
use crate::tfp::{product_index, Multigrading};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MleError {
    #[error("data vector has zero total")]
    ZeroTotal,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("function {index} has a pole at the data point {point}")]
    Pole { index: usize, point: String },
    #[error("degree class {} has zero total count", .class + 1)]
    ZeroClassTotal { class: usize },
    #[error("sufficient statistic {} of the data is zero; the estimate lies on the boundary", .row + 1)]
    ZeroMargin { row: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("probability {} is {value} but its count is positive", .index + 1)]
    DomainError { index: usize, value: f64 },
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error("invalid count {0:?}")]
    Parse(String),
}

/// Nonnegative counts with a positive total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataVector(Vec<u64>);

impl DataVector {
    pub fn new(counts: Vec<u64>) -> Result<Self, MleError> {
        if counts.iter().all(|&c| c == 0) {
            return Err(MleError::ZeroTotal);
        }
        Ok(DataVector(counts))
    }

    /// Parses a comma-separated list such as `3,1,1,1`.
    pub fn parse(s: &str) -> Result<Self, MleError> {
        let counts = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u64>().map_err(|_| MleError::Parse(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect()
    }

    /// `u / u_+`.
    pub fn empirical(&self) -> Vec<Rational> {
        let t = Rational::from_integer(self.total().into());
        self.0
            .iter()
            .map(|&c| Rational::from_integer(c.into()) / &t)
            .collect()
    }

    fn check_len(&self, expected: usize) -> Result<(), MleError> {
        if self.len() != expected {
            return Err(MleError::DimensionMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// `sum_b (u_b / u_+) b`.
pub fn data_point(config: &PointConfiguration, u: &DataVector) -> Result<Vec<Rational>, MleError> {
    u.check_len(config.len())?;
    let emp = u.empirical();
    Ok((0..config.dim())
        .map(|k| {
            config
                .points()
                .iter()
                .zip(&emp)
                .filter(|(b, _)| b[k] != 0)
                .map(|(b, e)| e * Rational::from_integer(b[k].into()))
                .fold(Rational::zero(), |a, x| a + x)
        })
        .collect())
}

/// Evaluates the blending functions at the data point.
pub fn mle_closed_form(sys: &BlendingSystem, u: &DataVector) -> Result<Vec<Rational>, MleError> {
    let p = data_point(sys.config(), u)?;
    sys.functions()
        .iter()
        .enumerate()
        .map(|(index, f)| {
            f.eval(&p).map_err(|_| MleError::Pole {
                index,
                point: fmt(&p),
            })
        })
        .collect()
}

/// The Horn parametrization applied to the counts.
pub fn mle_horn(pair: &HornPair, u: &DataVector) -> Result<Vec<Rational>, MleError> {
    u.check_len(pair.ncols())?;
    Ok(horn_parametrize(pair, &u.to_rationals())?)
}

/// Marginal counts `u^i_{j,+}` and `u^i_{+,k}` on the two factors.
pub fn marginalize(g: &Multigrading, u: &DataVector) -> Result<(DataVector, DataVector), MleError> {
    let idx = product_index(g);
    u.check_len(idx.len())?;
    let mut ub = vec![0u64; g.graded_b().config().len()];
    let mut uc = vec![0u64; g.graded_c().config().len()];
    for (q, &c) in idx.iter().zip(u.counts()) {
        ub[q.b] += c;
        uc[q.c] += c;
    }
    Ok((DataVector::new(ub)?, DataVector::new(uc)?))
}

/// `p^i_{jk} = pB^i_j pC^i_k / pA^i` with `pA^i = u^i_{++} / u_+`.
pub fn tfp_mle_combine(
    p_b: &[Rational],
    p_c: &[Rational],
    g: &Multigrading,
    u: &DataVector,
) -> Result<Vec<Rational>, MleError> {
    let idx = product_index(g);
    u.check_len(idx.len())?;
    for (p, n) in [
        (p_b, g.graded_b().config().len()),
        (p_c, g.graded_c().config().len()),
    ] {
        if p.len() != n {
            return Err(MleError::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
    }
    let p_a = class_marginals(g, u)?;
    if let Some(class) = p_a.iter().position(Zero::is_zero) {
        return Err(MleError::ZeroClassTotal { class });
    }
    Ok(idx
        .iter()
        .map(|q| &p_b[q.b] * &p_c[q.c] / &p_a[q.i])
        .collect())
}

/// `u^i_{++} / u_+` for every degree class.
pub fn class_marginals(g: &Multigrading, u: &DataVector) -> Result<Vec<Rational>, MleError> {
    let idx = product_index(g);
    u.check_len(idx.len())?;
    let mut totals = vec![0u64; g.num_classes()];
    for (q, &c) in idx.iter().zip(u.counts()) {
        totals[q.i] += c;
    }
    let t = Rational::from_integer(u.total().into());
    Ok(totals
        .into_iter()
        .map(|c| Rational::from_integer(c.into()) / &t)
        .collect())
}

/// Closed-form estimate for a fiber product, from the factor systems and
/// the marginalized data.
pub fn tfp_mle(
    sys_b: &BlendingSystem,
    sys_c: &BlendingSystem,
    g: &Multigrading,
    u: &DataVector,
) -> Result<Vec<Rational>, MleError> {
    let (ub, uc) = marginalize(g, u)?;
    let p_b = mle_closed_form(sys_b, &ub)?;
    let p_c = mle_closed_form(sys_c, &uc)?;
    tfp_mle_combine(&p_b, &p_c, g, u)
}

/// `dm p - dm u / u_+`.
pub fn birch_residual(
    dm: &DesignMatrix,
    u: &DataVector,
    p: &[Rational],
) -> Result<Vec<Rational>, MleError> {
    u.check_len(dm.ncols())?;
    if p.len() != dm.ncols() {
        return Err(MleError::DimensionMismatch {
            expected: dm.ncols(),
            found: p.len(),
        });
    }
    let fitted = dm.apply(p);
    let observed = dm.apply(&u.empirical());
    Ok(fitted.iter().zip(&observed).map(|(a, b)| a - b).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IpsResult {
    pub probs: Vec<f64>,
    pub iterations: usize,
    /// Sup-norm of `dm p - dm u / u_+` at the returned point.
    pub residual: f64,
}

/// Generalized iterative scaling on the design matrix.
///
/// Rows are shifted to be nonnegative and a slack row makes every column sum
/// to the same `s`; each sweep multiplies `p_b` by
/// `prod_a (target_a / fitted_a)^(M_ab / s)` and renormalizes.
pub fn ips_fit(
    dm: &DesignMatrix,
    w: &WeightVector,
    u: &DataVector,
    tol: f64,
    max_iter: usize,
) -> Result<IpsResult, MleError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(MleError::InvalidTolerance);
    }
    let n = dm.ncols();
    u.check_len(n)?;
    if w.len() != n {
        return Err(MleError::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let emp: Vec<f64> = u.empirical().iter().map(to_f64).collect();
    let original: Vec<Vec<f64>> = dm
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let scaled = scaling_matrix(dm.rows());
    let s = column_sum(&scaled).max(1) as f64;
    let m: Vec<Vec<f64>> = scaled
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let target: Vec<f64> = m.iter().map(|r| dot(r, &emp)).collect();
    if let Some(row) = target.iter().position(|&t| t <= 0.0) {
        return Err(MleError::ZeroMargin { row });
    }
    let obs: Vec<f64> = original.iter().map(|r| dot(r, &emp)).collect();
    let residual = |p: &[f64]| -> f64 {
        original
            .iter()
            .zip(&obs)
            .map(|(r, o)| (dot(r, p) - o).abs())
            .fold(0.0, f64::max)
    };

    let wsum: f64 = w.as_slice().iter().map(to_f64).sum();
    let mut p: Vec<f64> = w.as_slice().iter().map(|x| to_f64(x) / wsum).collect();
    for iterations in 0..=max_iter {
        let res = residual(&p);
        if res < tol {
            return Ok(IpsResult {
                probs: p,
                iterations,
                residual: res,
            });
        }
        if iterations == max_iter {
            return Err(MleError::NotConverged {
                iterations,
                residual: res,
            });
        }
        let ratios: Vec<f64> = m
            .iter()
            .zip(&target)
            .map(|(r, t)| (t / dot(r, &p)).ln())
            .collect();
        for (b, pb) in p.iter_mut().enumerate() {
            let e: f64 = m.iter().zip(&ratios).map(|(r, l)| r[b] * l).sum();
            *pb *= (e / s).exp();
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
    }
    unreachable!("loop returns on its last iteration")
}

fn column_sum(m: &[Vec<i64>]) -> i64 {
    m.first().map_or(0, |r| {
        (0..r.len())
            .map(|b| m.iter().map(|r| r[b]).sum())
            .max()
            .unwrap_or(0)
    })
}

/// Nonnegative rows with equal column sums, spanning the same statistics.
fn scaling_matrix(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            let shift = (-r.iter().copied().min().unwrap_or(0)).max(0);
            r.iter().map(|x| x + shift).collect::<Vec<i64>>()
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let sums: Vec<i64> = (0..ncols).map(|b| m.iter().map(|r| r[b]).sum()).collect();
    let s = sums.iter().copied().max().unwrap_or(0);
    let slack: Vec<i64> = sums.iter().map(|c| s - c).collect();
    if slack.iter().any(|&x| x != 0) {
        m.push(slack);
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sum_i u_i log p_i`, with `0 log 0 = 0`.
pub fn log_likelihood(u: &DataVector, p: &[f64]) -> Result<f64, MleError> {
    u.check_len(p.len())?;
    let mut total = 0.0;
    for (index, (&c, &x)) in u.counts().iter().zip(p).enumerate() {
        if c == 0 {
            continue;
        }
        if x.is_nan() || x <= 0.0 {
            return Err(MleError::DomainError { index, value: x });
        }
        total += c as f64 * x.ln();
    }
    Ok(total)
}

pub fn log_likelihood_exact(u: &DataVector, p: &[Rational]) -> Result<f64, MleError> {
    for (index, (&c, x)) in u.counts().iter().zip(p).enumerate() {
        if c > 0 && !x.is_positive() {
            return Err(MleError::DomainError {
                index,
                value: to_f64(x),
            });
        }
    }
    let f: Vec<f64> = p.iter().map(to_f64).collect();
    log_likelihood(u, &f)
}

fn fmt(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}
