//! Sparse multivariate polynomials over Q.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration order (and therefore serialization) is
//! deterministic. Variables are named; binary operations on polynomials over
//! different variable lists first extend both to the union of the lists.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use super::ArithError;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// ties broken by comparing exponents left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    fn embed(&self, map: &[usize], nvars: usize) -> Monomial {
        let mut e = vec![0; nvars];
        for (i, &x) in self.0.iter().enumerate() {
            e[map[i]] = x;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

/// Default variable names `prefix1, ..., prefix{n}`.
pub fn numbered_vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Polynomial {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    /// The polynomial `vars[index]`.
    pub fn variable(vars: &[String], index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial(e), Rational::one());
        p
    }

    /// The polynomial named `name`, which must appear in `vars`.
    pub fn named(vars: &[String], name: &str) -> Result<Self, ArithError> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ArithError::UnknownVariable(name.to_string()))?;
        Ok(Self::variable(vars, idx))
    }

    /// Affine form `constant + sum coeffs[i] * vars[i]`.
    pub fn affine(vars: &[String], coeffs: &[Rational], constant: Rational) -> Self {
        let mut p = Self::constant(vars, constant);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; vars.len()];
                e[i] = 1;
                p.terms.insert(Monomial(e), c.clone());
            }
        }
        p
    }

    pub fn from_terms(
        vars: &[String],
        terms: impl IntoIterator<Item = (Rational, Vec<u32>)>,
    ) -> Result<Self, ArithError> {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            if e.len() != vars.len() {
                return Err(ArithError::DimensionMismatch {
                    expected: vars.len(),
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in decreasing monomial order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Value of the constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable that occurs with a nonzero exponent.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self, ArithError> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        let mut used = vec![false; self.vars.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                used[i] |= e > 0;
            }
        }
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(j),
                None if !used[i] => map.push(usize::MAX),
                None => return Err(ArithError::UnknownVariable(v.clone())),
            }
        }
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[i]] = x;
                }
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Replaces the variable names positionally.
    pub fn renamed(&self, vars: &[String]) -> Result<Self, ArithError> {
        if vars.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                found: vars.len(),
            });
        }
        Ok(Polynomial {
            vars: vars.to_vec(),
            terms: self.terms.clone(),
        })
    }

    fn extended(&self, vars: &[String]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        Polynomial {
            vars: vars.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.embed(&map, vars.len()), c.clone()))
                .collect(),
        }
    }

    /// Brings two polynomials onto the union of their variable lists.
    pub fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let vars = union_vars(&a.vars, &b.vars);
        (a.extended(&vars), b.extended(&vars))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value at `x` (one coordinate per variable).
    pub fn eval(&self, x: &[Rational]) -> Result<Rational, ArithError> {
        if x.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                found: x.len(),
            });
        }
        let mut powers: Vec<Vec<Rational>> =
            x.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &x[i];
                    cache.push(next);
                }
                t *= &cache[e as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor` when the division leaves no remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (mut rem, g) = Self::aligned(self, divisor);
        let mut quot = Self::zero(&rem.vars);
        let (lm_g, lc_g) = {
            let (m, c) = g.leading_term().expect("nonzero");
            (m.clone(), c.clone())
        };
        while let Some((lm_r, lc_r)) = rem.leading_term() {
            if !lm_g.divides(lm_r) {
                return None;
            }
            let t = lm_g.quotient_of(lm_r);
            let c = lc_r / &lc_g;
            rem = &rem - &g.mul_term(&t, &c);
            quot.add_term(t, c);
        }
        Some(quot)
    }

    /// Largest monomial dividing every term (the unit monomial for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Divides every term by `m`; `m` must divide all of them.
    pub fn div_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (m.quotient_of(n), c.clone()))
                .collect(),
        }
    }

    /// Factor `s` such that `s * self` has coprime integer coefficients and a
    /// positive leading coefficient. Zero maps to one.
    pub fn primitive_scale(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c * &lcm).to_integer()));
        let mut s = Rational::new(lcm, gcd);
        if self.leading_coefficient().unwrap().is_negative() {
            s = -s;
        }
        s
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// variable list, which becomes the variable list of the result.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Self, ArithError> {
        if images.len() != self.vars.len() {
            return Err(ArithError::DimensionMismatch {
                expected: self.vars.len(),
                found: images.len(),
            });
        }
        let target: Vec<String> = images
            .iter()
            .fold(Vec::new(), |acc, p| union_vars(&acc, &p.vars));
        let images: Vec<Polynomial> = images.iter().map(|p| p.extended(&target)).collect();
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Self::one(&target), p.clone()])
            .collect();
        let mut out = Self::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &images[i];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = Self::aligned(self, other);
        a.terms == b.terms
    }
}

impl Eq for Polynomial {}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut a, b) = if self.vars == rhs.vars {
            (self.clone(), None)
        } else {
            let (a, b) = Polynomial::aligned(self, rhs);
            (a, Some(b))
        };
        let b = b.as_ref().unwrap_or(rhs);
        for (m, c) in &b.terms {
            a.add_term(m.clone(), c.clone());
        }
        a
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = if self.vars == rhs.vars {
            (None, None)
        } else {
            let (a, b) = Polynomial::aligned(self, rhs);
            (Some(a), Some(b))
        };
        let a = a.as_ref().unwrap_or(self);
        let b = b.as_ref().unwrap_or(rhs);
        let mut out = Polynomial::zero(&a.vars);
        for (m, c) in &a.terms {
            for (n, d) in &b.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let factors: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            self.vars[i].clone()
                        } else {
                            format!("{}^{}", self.vars[i], e)
                        }
                    })
                    .collect();
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", format_rational(&abs))?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
