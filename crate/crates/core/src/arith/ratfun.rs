//! Rational functions `num / den` over Q.
//!
//! Canonical form: the denominator has coprime integer coefficients and a
//! positive leading coefficient; the numerator absorbs the scale factor.
//! Common factors are not removed in general. [`RationalFunction::simplified`]
//! cancels common monomials and exact polynomial quotients, which is what the
//! arithmetic operators apply to their results.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Monomial, Polynomial};
use super::rational::Rational;
use super::ArithError;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds `num / den` in canonical form without cancelling factors.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (num, den) = Polynomial::aligned(&num, &den);
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction {
                den: Polynomial::one(num.vars()),
                num,
            };
        }
        let s = den.primitive_scale();
        if s.is_one() {
            return RationalFunction { num, den };
        }
        RationalFunction {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(vars, c))
    }

    pub fn zero(vars: &[String]) -> Self {
        Self::from_polynomial(Polynomial::zero(vars))
    }

    pub fn one(vars: &[String]) -> Self {
        Self::from_polynomial(Polynomial::one(vars))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn with_vars(&self, vars: &[String]) -> Result<Self, ArithError> {
        Ok(RationalFunction {
            num: self.num.with_vars(vars)?,
            den: self.den.with_vars(vars)?,
        })
    }

    pub fn renamed(&self, vars: &[String]) -> Result<Self, ArithError> {
        Ok(RationalFunction {
            num: self.num.renamed(vars)?,
            den: self.den.renamed(vars)?,
        })
    }

    /// Exact value at `x`; [`ArithError::Pole`] when the denominator vanishes.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational, ArithError> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(ArithError::Pole);
        }
        Ok(self.num.eval(x)? / d)
    }

    /// Cancels the common monomial factor and, when the denominator divides
    /// the numerator exactly, returns the quotient polynomial.
    pub fn simplified(&self) -> Self {
        if self.num.is_zero() || self.den.is_constant() {
            let c = self.den.constant_term();
            if c.is_one() {
                return self.clone();
            }
            return Self::from_polynomial(self.num.scale(&(Rational::one() / c)));
        }
        let g = {
            let a = self.num.monomial_content();
            let b = self.den.monomial_content();
            Monomial::new(
                a.exponents()
                    .iter()
                    .zip(b.exponents())
                    .map(|(x, y)| *x.min(y))
                    .collect(),
            )
        };
        let (num, den) = if g.is_one() {
            (self.num.clone(), self.den.clone())
        } else {
            (self.num.div_monomial(&g), self.den.div_monomial(&g))
        };
        if den.is_constant() {
            let c = den.constant_term();
            return Self::from_polynomial(num.scale(&(Rational::one() / c)));
        }
        if num.total_degree() >= den.total_degree() {
            if let Some(q) = num.div_exact(&den) {
                return Self::from_polynomial(q);
            }
        }
        Self::normalize(num, den)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        if a.den == b.den {
            return Self::normalize(&a.num + &b.num, a.den).simplified();
        }
        if let Some(q) = a.den.div_exact(&b.den) {
            return Self::normalize(&a.num + &(&b.num * &q), a.den).simplified();
        }
        if let Some(q) = b.den.div_exact(&a.den) {
            return Self::normalize(&(&a.num * &q) + &b.num, b.den).simplified();
        }
        Self::normalize(&(&a.num * &b.den) + &(&b.num * &a.den), &a.den * &b.den).simplified()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        if a.is_zero() || b.is_zero() {
            return Self::zero(a.vars());
        }
        // cross-cancel exact factors before multiplying out
        let (an, bd) = cancel_pair(&a.num, &b.den);
        let (bn, ad) = cancel_pair(&b.num, &a.den);
        Self::normalize(&an * &bn, &ad * &bd).simplified()
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.num.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::normalize(self.num.pow(e), self.den.pow(e))
    }

    /// Equality in the fraction field, by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        let (a, b) = Self::aligned(self, other);
        if a.den == b.den {
            return a.num == b.num;
        }
        &a.num * &b.den == &b.num * &a.den
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        if a.vars() == b.vars() {
            return (a.clone(), b.clone());
        }
        let (an, bn) = Polynomial::aligned(&a.num, &b.num);
        let vars = an.vars().to_vec();
        (
            RationalFunction {
                num: an,
                den: a.den.with_vars(&vars).expect("aligned"),
            },
            RationalFunction {
                num: bn,
                den: b.den.with_vars(&vars).expect("aligned"),
            },
        )
    }
}

/// Removes `d` from `n` (or `n` from `d`) when one divides the other exactly.
fn cancel_pair(n: &Polynomial, d: &Polynomial) -> (Polynomial, Polynomial) {
    if d.is_constant() || n.is_constant() {
        return (n.clone(), d.clone());
    }
    if let Some(q) = n.div_exact(d) {
        return (q, Polynomial::one(d.vars()));
    }
    if let Some(q) = d.div_exact(n) {
        return (Polynomial::one(n.vars()), q);
    }
    (n.clone(), d.clone())
}

/// Structural equality of canonical forms. Use [`RationalFunction::equals`]
/// for equality as elements of the fraction field.
impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, rhs)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, &-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Sum of a sequence of rational functions over `vars`.
pub fn sum<'a>(
    vars: &[String],
    items: impl IntoIterator<Item = &'a RationalFunction>,
) -> RationalFunction {
    items
        .into_iter()
        .fold(RationalFunction::zero(vars), |acc, f| acc.add(f))
}
