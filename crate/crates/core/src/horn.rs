//! Horn matrices, Horn pairs and their parametrizations.

use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::rational::{checked_pow, format_rational};
use crate::arith::{numbered_vars, Polynomial, Rational};
use crate::blending::Verdict;
use crate::tfp::{tfp_label, Multigrading};

/// Seed of the equivalence check run by [`minimize_horn_pair`].
const MINIMIZE_CHECK_SEED: u64 = 0x4d1f;
const MINIMIZE_CHECK_TRIALS: usize = 100;
/// Symbolic sum-to-one checks run up to this many columns.
pub const SYMBOLIC_COLUMN_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HornError {
    #[error("Horn matrix has no rows or no columns")]
    Empty,
    #[error("row {} has {found} entries, expected {expected}", .row + 1)]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("column {} sums to {sum}, not 0", .column + 1)]
    NonZeroColumnSum { column: usize, sum: i64 },
    #[error("lambda has {found} entries for {expected} columns")]
    LambdaLength { expected: usize, found: usize },
    #[error("lambda entry {} is zero", .column + 1)]
    ZeroLambda { column: usize },
    #[error("{found} column labels for {expected} columns")]
    LabelCount { expected: usize, found: usize },
    #[error("data vector has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {} of Hu is zero but raised to a negative power", .row + 1)]
    ZeroToNegativePower { row: usize },
    #[error("inconsistent block index: {0}")]
    InconsistentBlockIndex(String),
    #[error("rows {rows:?} are proportional with coefficients summing to zero")]
    MergeAborted { rows: Vec<usize> },
    #[error("minimized pair disagrees with the input at u = {0}")]
    EquivalenceFailed(String),
}

/// Integer matrix whose columns sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornMatrix {
    rows: Vec<Vec<i64>>,
    ncols: usize,
    column_labels: Option<Vec<String>>,
}

impl HornMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, HornError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || ncols == 0 {
            return Err(HornError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(HornError::RaggedRows {
                    row,
                    expected: ncols,
                    found: r.len(),
                });
            }
        }
        for column in 0..ncols {
            let sum: i64 = rows.iter().map(|r| r[column]).sum();
            if sum != 0 {
                return Err(HornError::NonZeroColumnSum { column, sum });
            }
        }
        Ok(HornMatrix {
            rows,
            ncols,
            column_labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, HornError> {
        if labels.len() != self.ncols {
            return Err(HornError::LabelCount {
                expected: self.ncols,
                found: labels.len(),
            });
        }
        self.column_labels = Some(labels);
        Ok(self)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[c]).collect()
    }

    pub fn column_labels(&self) -> Option<&[String]> {
        self.column_labels.as_deref()
    }

    /// `Hu`.
    pub fn apply(&self, u: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(u)
                    .filter(|(h, _)| **h != 0)
                    .map(|(h, x)| x * Rational::from_integer((*h).into()))
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }
}

/// Right-aligned text rendering, with a header line when columns are labelled.
pub fn format_matrix(h: &HornMatrix) -> String {
    let cells: Vec<Vec<String>> = h
        .rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    let mut width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    if let Some(labels) = h.column_labels() {
        width = width.max(labels.iter().map(String::len).max().unwrap_or(0));
    }
    let mut out = String::new();
    let mut line = |items: &mut dyn Iterator<Item = &String>| {
        let parts: Vec<String> = items.map(|s| format!("{s:>width$}")).collect();
        let _ = writeln!(out, "{}", parts.join(" "));
    };
    if let Some(labels) = h.column_labels() {
        line(&mut labels.iter());
    }
    for r in &cells {
        line(&mut r.iter());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornPair {
    h: HornMatrix,
    lambda: Vec<Rational>,
}

impl HornPair {
    pub fn new(h: HornMatrix, lambda: Vec<Rational>) -> Result<Self, HornError> {
        if lambda.len() != h.ncols() {
            return Err(HornError::LambdaLength {
                expected: h.ncols(),
                found: lambda.len(),
            });
        }
        if let Some(column) = lambda.iter().position(Zero::is_zero) {
            return Err(HornError::ZeroLambda { column });
        }
        Ok(HornPair { h, lambda })
    }

    pub fn from_integers(rows: Vec<Vec<i64>>, lambda: &[i64]) -> Result<Self, HornError> {
        let lambda = lambda
            .iter()
            .map(|&l| Rational::from_integer(l.into()))
            .collect();
        Self::new(HornMatrix::new(rows)?, lambda)
    }

    pub fn matrix(&self) -> &HornMatrix {
        &self.h
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn ncols(&self) -> usize {
        self.h.ncols()
    }

    pub fn with_labels(self, labels: Vec<String>) -> Result<Self, HornError> {
        Ok(HornPair {
            h: self.h.with_labels(labels)?,
            lambda: self.lambda,
        })
    }

    /// Reorders the columns (and labels and lambda) by `perm`.
    pub fn permuted_columns(&self, perm: &[usize]) -> Self {
        let rows = self
            .h
            .rows
            .iter()
            .map(|r| perm.iter().map(|&c| r[c]).collect())
            .collect();
        let labels = self
            .h
            .column_labels
            .as_ref()
            .map(|l| perm.iter().map(|&c| l[c].clone()).collect());
        HornPair {
            h: HornMatrix {
                rows,
                ncols: self.h.ncols,
                column_labels: labels,
            },
            lambda: perm.iter().map(|&c| self.lambda[c].clone()).collect(),
        }
    }
}

/// `lambda * (Hu)^H`, with `0^0 = 1`.
pub fn horn_parametrize(pair: &HornPair, u: &[Rational]) -> Result<Vec<Rational>, HornError> {
    let h = pair.matrix();
    if u.len() != h.ncols() {
        return Err(HornError::DimensionMismatch {
            expected: h.ncols(),
            found: u.len(),
        });
    }
    let hu = h.apply(u);
    (0..h.ncols())
        .map(|c| {
            let mut v = pair.lambda()[c].clone();
            for (row, (r, base)) in h.rows().iter().zip(&hu).enumerate() {
                let e = r[c];
                if e != 0 {
                    v *= checked_pow(base, e).ok_or(HornError::ZeroToNegativePower { row })?;
                }
            }
            Ok(v)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HornReport {
    pub sums_to_one: Verdict,
    pub positive: Verdict,
    /// Outcome of the symbolic sum check; `None` when skipped for size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic_sum: Option<bool>,
}

impl HornReport {
    pub fn passed(&self) -> bool {
        self.sums_to_one.passed && self.positive.passed
    }
}

fn fmt_vec(u: &[Rational]) -> String {
    let parts: Vec<String> = u.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Positive integer test vectors; the first one is all ones.
pub fn trial_vectors(n: usize, trials: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|t| {
            (0..n)
                .map(|_| {
                    let x: i64 = if t == 0 { 1 } else { rng.gen_range(1..=50) };
                    Rational::from_integer(x.into())
                })
                .collect()
        })
        .collect()
}

/// Checks that the parametrization sums to one and is positive on
/// `trials` positive integer vectors, plus symbolically for small pairs.
pub fn validate_horn_pair(pair: &HornPair, trials: usize, seed: u64) -> HornReport {
    let mut sums = Verdict::pass();
    let mut positive = Verdict::pass();
    for u in trial_vectors(pair.ncols(), trials.max(1), seed) {
        match horn_parametrize(pair, &u) {
            Err(e) => {
                let w = format!("u = {}: {e}", fmt_vec(&u));
                if sums.passed {
                    sums = Verdict::fail(w.clone());
                }
                if positive.passed {
                    positive = Verdict::fail(w);
                }
            }
            Ok(p) => {
                let total: Rational = p.iter().fold(Rational::zero(), |a, b| a + b);
                if sums.passed && !total.is_one() {
                    sums = Verdict::fail(format!(
                        "u = {} gives total {}",
                        fmt_vec(&u),
                        format_rational(&total)
                    ));
                }
                if positive.passed {
                    if let Some(c) = p.iter().position(|x| !x.is_positive()) {
                        positive = Verdict::fail(format!(
                            "u = {} gives coordinate {} = {}",
                            fmt_vec(&u),
                            c + 1,
                            format_rational(&p[c])
                        ));
                    }
                }
            }
        }
        if !sums.passed && !positive.passed {
            break;
        }
    }
    let symbolic_sum = (pair.ncols() <= SYMBOLIC_COLUMN_LIMIT).then(|| symbolic_sum_is_one(pair));
    if symbolic_sum == Some(false) && sums.passed {
        sums = Verdict::fail("the coordinates do not sum to one as rational functions of u");
    }
    HornReport {
        sums_to_one: sums,
        positive,
        symbolic_sum,
    }
}

/// A group of nonzero rows that are rational multiples of one primitive row.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RowClass {
    /// Primitive representative with positive first nonzero entry.
    base: Vec<i64>,
    /// `(row index, multiplier)` with `row = multiplier * base`.
    members: Vec<(usize, i64)>,
}

fn primitive_row(r: &[i64]) -> Option<(Vec<i64>, i64)> {
    let first = *r.iter().find(|&&x| x != 0)?;
    let g = r.iter().fold(0i64, |g, &x| g.gcd(&x));
    let c = if first < 0 { -g } else { g };
    Some((r.iter().map(|&x| x / c).collect(), c))
}

/// Proportionality classes of the nonzero rows, in order of first occurrence.
fn row_classes(h: &HornMatrix) -> Vec<RowClass> {
    let mut classes: Vec<RowClass> = Vec::new();
    for (i, r) in h.rows().iter().enumerate() {
        let Some((base, c)) = primitive_row(r) else {
            continue;
        };
        match classes.iter_mut().find(|k| k.base == base) {
            Some(k) => k.members.push((i, c)),
            None => classes.push(RowClass {
                base,
                members: vec![(i, c)],
            }),
        }
    }
    classes
}

/// Symbolic check that the coordinates of the parametrization sum to one,
/// treating `u` as indeterminates.
pub fn symbolic_sum_is_one(pair: &HornPair) -> bool {
    let h = pair.matrix();
    let n = h.ncols();
    let vars = numbered_vars("u", n);
    let classes = row_classes(h);
    let forms: Vec<Polynomial> = classes
        .iter()
        .map(|k| {
            let coeffs: Vec<Rational> = k
                .base
                .iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect();
            Polynomial::affine(&vars, &coeffs, Rational::zero())
        })
        .collect();
    // exponent of each class form in each column, and the folded constant
    let mut exps = vec![vec![0i64; n]; classes.len()];
    let mut consts = pair.lambda().to_vec();
    for (ki, k) in classes.iter().enumerate() {
        for &(row, c) in &k.members {
            let c = Rational::from_integer(c.into());
            for col in 0..n {
                let e = h.rows()[row][col];
                exps[ki][col] += e;
                if e != 0 {
                    consts[col] *= checked_pow(&c, e).expect("nonzero multiplier");
                }
            }
        }
    }
    let shift: Vec<i64> = exps
        .iter()
        .map(|row| row.iter().map(|&e| (-e).max(0)).max().unwrap_or(0))
        .collect();
    let mut numerator = Polynomial::zero(&vars);
    for col in 0..n {
        let mut term = Polynomial::constant(&vars, consts[col].clone());
        for (ki, form) in forms.iter().enumerate() {
            let e = exps[ki][col] + shift[ki];
            if e > 0 {
                term = &term * &form.pow(e as u32);
            }
        }
        numerator = &numerator + &term;
    }
    let denominator = forms
        .iter()
        .zip(&shift)
        .fold(Polynomial::one(&vars), |acc, (f, &s)| {
            &acc * &f.pow(s as u32)
        });
    numerator == denominator
}

/// Identity on top of a row of `-1`s, with `lambda = (-1, ..., -1)`.
pub fn simplex_horn_pair(m: usize) -> HornPair {
    assert!(m >= 1, "simplex needs at least one outcome");
    let mut rows: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
        .collect();
    rows.push(vec![-1; m]);
    HornPair::from_integers(rows, &vec![-1; m]).expect("valid simplex pair")
}

fn class_members(
    block: &[usize],
    num_classes: usize,
    side: &str,
) -> Result<Vec<Vec<usize>>, HornError> {
    let mut members = vec![Vec::new(); num_classes];
    for (col, &i) in block.iter().enumerate() {
        if i >= num_classes {
            return Err(HornError::InconsistentBlockIndex(format!(
                "{side} column {} has class {} of {num_classes}",
                col + 1,
                i + 1
            )));
        }
        members[i].push(col);
    }
    if let Some(i) = members.iter().position(Vec::is_empty) {
        return Err(HornError::InconsistentBlockIndex(format!(
            "{side} has no column in class {}",
            i + 1
        )));
    }
    Ok(members)
}

/// Horn pair of a toric fiber product from Horn pairs of its factors.
///
/// `block_b[c]` is the degree class of column `c` of the first pair.
pub fn tfp_horn_pair(
    pair_b: &HornPair,
    pair_c: &HornPair,
    num_classes: usize,
    block_b: &[usize],
    block_c: &[usize],
) -> Result<HornPair, HornError> {
    for (side, pair, block) in [("B", pair_b, block_b), ("C", pair_c, block_c)] {
        if block.len() != pair.ncols() {
            return Err(HornError::InconsistentBlockIndex(format!(
                "{side} has {} columns but {} block indices",
                pair.ncols(),
                block.len()
            )));
        }
    }
    let mb = class_members(block_b, num_classes, "B")?;
    let mc = class_members(block_c, num_classes, "C")?;
    let ha = simplex_horn_pair(num_classes);
    let (r1, r2, ra) = (
        pair_b.matrix().nrows(),
        pair_c.matrix().nrows(),
        ha.matrix().nrows(),
    );
    let mut columns = Vec::new();
    let mut lambda = Vec::new();
    let mut labels = Vec::new();
    for i in 0..num_classes {
        let hi = ha.matrix().column(i);
        for (j, &cb) in mb[i].iter().enumerate() {
            for (k, &cc) in mc[i].iter().enumerate() {
                let mut col = pair_b.matrix().column(cb);
                col.extend(pair_c.matrix().column(cc));
                col.extend(hi.iter().map(|x| -x));
                columns.push(col);
                lambda.push(-(&pair_b.lambda()[cb] * &pair_c.lambda()[cc]));
                labels.push(tfp_label(i, j, k));
            }
        }
    }
    let rows: Vec<Vec<i64>> = (0..r1 + r2 + ra)
        .map(|a| columns.iter().map(|c| c[a]).collect())
        .collect();
    HornPair::new(HornMatrix::new(rows)?, lambda)?.with_labels(labels)
}

/// [`tfp_horn_pair`] with block indices taken from a validated multigrading.
pub fn tfp_horn_pair_graded(
    pair_b: &HornPair,
    pair_c: &HornPair,
    g: &Multigrading,
) -> Result<HornPair, HornError> {
    tfp_horn_pair(
        pair_b,
        pair_c,
        g.num_classes(),
        g.assignment_b(),
        g.assignment_c(),
    )
}

/// Result of [`minimize_horn_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimized {
    pub pair: HornPair,
    /// Input rows (0-based) making up each output row.
    pub provenance: Vec<Vec<usize>>,
    /// Proportional row groups left unmerged because their multipliers sum to zero.
    pub zero_sum_classes: Vec<Vec<usize>>,
}

/// Merges proportional rows and folds the constants into lambda.
///
/// With `strict`, a proportional group whose multipliers sum to zero is an
/// error; otherwise it is left as is and reported.
pub fn minimize_horn_pair(pair: &HornPair, strict: bool) -> Result<Minimized, HornError> {
    let h = pair.matrix();
    let n = h.ncols();
    let mut lambda = pair.lambda().to_vec();
    // output rows keyed by the position of their first input row
    let mut out: Vec<(usize, Vec<i64>, Vec<usize>)> = Vec::new();
    let mut zero_sum = Vec::new();
    for class in row_classes(h) {
        let rows: Vec<usize> = class.members.iter().map(|m| m.0).collect();
        if class.members.len() == 1 {
            out.push((rows[0], h.rows()[rows[0]].clone(), rows));
            continue;
        }
        let total: i64 = class.members.iter().map(|m| m.1).sum();
        if total == 0 {
            if strict {
                return Err(HornError::MergeAborted { rows });
            }
            for &r in &rows {
                out.push((r, h.rows()[r].clone(), vec![r]));
            }
            zero_sum.push(rows);
            continue;
        }
        let big_c = Rational::from_integer(total.into());
        let mut merged = vec![0i64; n];
        for (col, m) in merged.iter_mut().enumerate() {
            let mut e_c = 0i64;
            for &(row, c) in &class.members {
                let e = h.rows()[row][col];
                e_c += e;
                if e != 0 {
                    lambda[col] *= checked_pow(&Rational::from_integer(c.into()), e)
                        .expect("nonzero multiplier");
                }
            }
            if e_c != 0 {
                lambda[col] /= checked_pow(&big_c, e_c).expect("nonzero sum");
            }
            *m = class
                .members
                .iter()
                .map(|&(row, _)| h.rows()[row][col])
                .sum();
        }
        if merged.iter().any(|&x| x != 0) {
            out.push((rows[0], merged, rows));
        }
    }
    out.sort_by_key(|o| o.0);
    let provenance = out.iter().map(|o| o.2.clone()).collect();
    let rows: Vec<Vec<i64>> = out.into_iter().map(|o| o.1).collect();
    let mut matrix = HornMatrix::new(rows)?;
    if let Some(l) = h.column_labels() {
        matrix = matrix.with_labels(l.to_vec())?;
    }
    let result = HornPair::new(matrix, lambda)?;
    for u in trial_vectors(n, MINIMIZE_CHECK_TRIALS, MINIMIZE_CHECK_SEED) {
        if horn_parametrize(pair, &u)? != horn_parametrize(&result, &u)? {
            return Err(HornError::EquivalenceFailed(fmt_vec(&u)));
        }
    }
    Ok(Minimized {
        pair: result,
        provenance,
        zero_sum_classes: zero_sum,
    })
}
