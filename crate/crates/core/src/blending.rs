//! Toric blending functions and the conditions of rational linear precision.
//!
//! A [`BlendingSystem`] pairs a point configuration and weights with one
//! rational function per point. The `verify_*` functions check the four
//! conditions separately: partition of unity and linear precision as exact
//! identities on the affine hull of the configuration, toric membership via
//! binomial relations of the design-matrix kernel at sampled points, and
//! nonnegativity at sampled relative-interior points.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::rational::{checked_pow, format_rational};
use crate::arith::{numbered_vars, ratfun, ArithError, Polynomial, Rational, RationalFunction};
use crate::geometry::{
    design_matrix, lattice_distance_forms_in, sample_convex_combinations, sample_interior,
    AffineHull, GeometryError, LatticePolytope, PointConfiguration,
};
use crate::linalg;

pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_SEED: u64 = 0;
/// Number of evaluation points used by [`IdentityMode::Sampled`] by default.
pub const FAST_IDENTITY_POINTS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlendingError {
    #[error("point {index} lies outside the polytope")]
    PointOutsidePolytope { index: usize },
    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Positive weights, one per configuration point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self, BlendingError> {
        if let Some(index) = weights.iter().position(|w| !w.is_positive()) {
            return Err(BlendingError::NonPositiveWeight { index });
        }
        Ok(WeightVector(weights))
    }

    pub fn from_integers(weights: &[i64]) -> Result<Self, BlendingError> {
        Self::new(
            weights
                .iter()
                .map(|&w| Rational::from_integer(w.into()))
                .collect(),
        )
    }

    pub fn ones(n: usize) -> Self {
        WeightVector(vec![Rational::one(); n])
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        WeightVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlendingKind {
    Toric,
    Custom,
}

#[derive(Debug, Clone)]
pub struct BlendingSystem {
    config: PointConfiguration,
    weights: WeightVector,
    functions: Vec<RationalFunction>,
    kind: BlendingKind,
    vars: Vec<String>,
}

impl BlendingSystem {
    /// Builds a system over the variables `vars` (one per coordinate).
    pub fn new(
        config: PointConfiguration,
        weights: WeightVector,
        functions: Vec<RationalFunction>,
        kind: BlendingKind,
        vars: Vec<String>,
    ) -> Result<Self, BlendingError> {
        let n = config.len();
        if weights.len() != n {
            return Err(BlendingError::CountMismatch {
                what: "weights",
                expected: n,
                found: weights.len(),
            });
        }
        if functions.len() != n {
            return Err(BlendingError::CountMismatch {
                what: "functions",
                expected: n,
                found: functions.len(),
            });
        }
        if vars.len() != config.dim() {
            return Err(BlendingError::CountMismatch {
                what: "variables",
                expected: config.dim(),
                found: vars.len(),
            });
        }
        let functions = functions
            .iter()
            .map(|f| f.with_vars(&vars))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BlendingSystem {
            config,
            weights,
            functions,
            kind,
            vars,
        })
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn functions(&self) -> &[RationalFunction] {
        &self.functions
    }

    pub fn kind(&self) -> BlendingKind {
        self.kind
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Same functions over new variable names (positional).
    pub fn renamed(&self, vars: Vec<String>) -> Result<Self, BlendingError> {
        let functions = self
            .functions
            .iter()
            .map(|f| f.renamed(&vars))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(
            self.config.clone(),
            self.weights.clone(),
            functions,
            self.kind,
            vars,
        )
    }

    /// Reorders points, weights and functions together.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        BlendingSystem {
            config: self.config.permuted(perm),
            weights: self.weights.permuted(perm),
            functions: perm.iter().map(|&i| self.functions[i].clone()).collect(),
            kind: self.kind,
            vars: self.vars.clone(),
        }
    }

    /// Values of all functions at `p`.
    pub fn eval(&self, p: &[Rational]) -> Result<Vec<Rational>, ArithError> {
        self.functions.iter().map(|f| f.eval(p)).collect()
    }
}

/// Toric blending functions `w_b * beta_b / beta_w` of `(poly, w)` at `points`.
///
/// `beta_b` is the product of the lattice-distance forms `h_i` raised to
/// `h_i(b)`; the common denominator `beta_w = sum w_b beta_b` is kept as is.
pub fn toric_blending(
    poly: &LatticePolytope,
    points: &PointConfiguration,
    w: &WeightVector,
) -> Result<BlendingSystem, BlendingError> {
    toric_blending_in(poly, points, w, numbered_vars("x", poly.dim()))
}

pub fn toric_blending_in(
    poly: &LatticePolytope,
    points: &PointConfiguration,
    w: &WeightVector,
    vars: Vec<String>,
) -> Result<BlendingSystem, BlendingError> {
    if points.dim() != poly.dim() {
        return Err(BlendingError::CountMismatch {
            what: "dimension",
            expected: poly.dim(),
            found: points.dim(),
        });
    }
    if w.len() != points.len() {
        return Err(BlendingError::CountMismatch {
            what: "weights",
            expected: points.len(),
            found: w.len(),
        });
    }
    let monomials = toric_monomials(poly, points, &vars)?;
    let beta_w = weighted_sum(&monomials, w, &vars);
    let functions = monomials
        .iter()
        .zip(w.as_slice())
        .map(|(b, wb)| RationalFunction::new(b.scale(wb), beta_w.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    BlendingSystem::new(
        points.clone(),
        w.clone(),
        functions,
        BlendingKind::Toric,
        vars,
    )
}

/// `beta_b = prod h_i^{h_i(b)}` for every point `b`.
pub fn toric_monomials(
    poly: &LatticePolytope,
    points: &PointConfiguration,
    vars: &[String],
) -> Result<Vec<Polynomial>, BlendingError> {
    let forms = lattice_distance_forms_in(poly, vars);
    let mut monomials = Vec::with_capacity(points.len());
    for (index, b) in points.points().iter().enumerate() {
        let mut beta = Polynomial::one(vars);
        for (facet, h) in poly.facets().iter().zip(&forms) {
            let e = facet.distance(b);
            if e < 0 {
                return Err(BlendingError::PointOutsidePolytope { index });
            }
            if e > 0 {
                beta = &beta * &h.pow(e as u32);
            }
        }
        monomials.push(beta);
    }
    Ok(monomials)
}

/// `beta_w = sum_b w_b beta_b`.
pub fn weighted_toric_sum(
    poly: &LatticePolytope,
    points: &PointConfiguration,
    w: &WeightVector,
    vars: &[String],
) -> Result<Polynomial, BlendingError> {
    Ok(weighted_sum(&toric_monomials(poly, points, vars)?, w, vars))
}

fn weighted_sum(monomials: &[Polynomial], w: &WeightVector, vars: &[String]) -> Polynomial {
    monomials
        .iter()
        .zip(w.as_slice())
        .fold(Polynomial::zero(vars), |acc, (b, wb)| &acc + &b.scale(wb))
}

/// Outcome of a single check, with a human-readable witness on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            passed: true,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict {
            passed: false,
            witness: Some(witness.into()),
        }
    }
}

/// How rational-function identities are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdentityMode {
    /// Exact cross-multiplication on the affine hull.
    #[default]
    Exact,
    /// Evaluation at random points of the hull (probabilistic).
    Sampled { points: usize, seed: u64 },
}

fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Decides `lhs == rhs` as functions on the affine hull of the configuration.
struct HullIdentity<'a> {
    hull: AffineHull,
    sys: &'a BlendingSystem,
    mode: IdentityMode,
}

impl<'a> HullIdentity<'a> {
    fn new(sys: &'a BlendingSystem, mode: IdentityMode) -> Self {
        HullIdentity {
            hull: AffineHull::of(sys.config()),
            sys,
            mode,
        }
    }

    fn restrict(&self, p: &Polynomial) -> Polynomial {
        self.hull.restrict(p, self.sys.vars())
    }

    /// `Ok(())` when the identity holds, otherwise a witness.
    fn check(&self, lhs: &RationalFunction, rhs: &RationalFunction) -> Result<(), String> {
        match self.mode {
            IdentityMode::Exact => {
                if self.restrict(lhs.den()).is_zero() || self.restrict(rhs.den()).is_zero() {
                    return Err("denominator vanishes identically on the affine hull".into());
                }
                let diff = &(lhs.num() * rhs.den()) - &(rhs.num() * lhs.den());
                if self.restrict(&diff).is_zero() {
                    Ok(())
                } else {
                    Err(format!("{lhs} differs from {rhs}"))
                }
            }
            IdentityMode::Sampled { points, seed } => {
                let samples = sample_hull_points(self.sys.config(), points, seed);
                for p in samples {
                    let l = lhs
                        .eval(&p)
                        .map_err(|e| format!("{e} at {}", fmt_point(&p)))?;
                    let r = rhs
                        .eval(&p)
                        .map_err(|e| format!("{e} at {}", fmt_point(&p)))?;
                    if l != r {
                        return Err(format!(
                            "values {} and {} differ at {}",
                            format_rational(&l),
                            format_rational(&r),
                            fmt_point(&p)
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Random points of the relative interior with large denominators, for
/// probabilistic identity testing.
fn sample_hull_points(config: &PointConfiguration, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1de7);
    (0..count)
        .map(|_| {
            let w: Vec<i64> = (0..config.len())
                .map(|_| rng.gen_range(1..=10_007))
                .collect();
            let total: i64 = w.iter().sum();
            (0..config.dim())
                .map(|k| {
                    let s: i64 = config.points().iter().zip(&w).map(|(p, c)| p[k] * c).sum();
                    Rational::new(s.into(), total.into())
                })
                .collect()
        })
        .collect()
}

pub fn verify_partition_of_unity(sys: &BlendingSystem) -> Verdict {
    verify_partition_of_unity_with(sys, IdentityMode::Exact)
}

/// Condition 1: the functions sum to one.
pub fn verify_partition_of_unity_with(sys: &BlendingSystem, mode: IdentityMode) -> Verdict {
    let id = HullIdentity::new(sys, mode);
    let total = ratfun::sum(sys.vars(), sys.functions());
    match id.check(&total, &RationalFunction::one(sys.vars())) {
        Ok(()) => Verdict::pass(),
        Err(w) => Verdict::fail(format!("sum of functions is not 1: {w}")),
    }
}

pub fn verify_linear_precision(sys: &BlendingSystem) -> Verdict {
    verify_linear_precision_with(sys, IdentityMode::Exact)
}

/// Condition 4: `sum_b f_b * b = x`, coordinate by coordinate.
pub fn verify_linear_precision_with(sys: &BlendingSystem, mode: IdentityMode) -> Verdict {
    let id = HullIdentity::new(sys, mode);
    for (c, var) in sys.vars().iter().enumerate() {
        let terms: Vec<RationalFunction> = sys
            .functions()
            .iter()
            .zip(sys.config().points())
            .filter(|(_, b)| b[c] != 0)
            .map(|(f, b)| f.scale(&Rational::from_integer(b[c].into())))
            .collect();
        let lhs = ratfun::sum(sys.vars(), &terms);
        let rhs = RationalFunction::from_polynomial(Polynomial::variable(sys.vars(), c));
        if let Err(w) = id.check(&lhs, &rhs) {
            return Verdict::fail(format!("coordinate {var}: {w}"));
        }
    }
    Verdict::pass()
}

/// Condition 3, sampled: every function is defined and nonnegative at
/// `samples` points of the relative interior.
pub fn verify_interior_positivity(sys: &BlendingSystem, samples: usize, seed: u64) -> Verdict {
    for p in sample_interior(sys.config(), samples, seed) {
        for (b, f) in sys.functions().iter().enumerate() {
            match f.eval(&p) {
                Err(_) => {
                    return Verdict::fail(format!(
                        "function {} has a pole at {}",
                        sys.config().label(b),
                        fmt_point(&p)
                    ))
                }
                Ok(v) if v.is_negative() => {
                    return Verdict::fail(format!(
                        "function {} is {} at {}",
                        sys.config().label(b),
                        format_rational(&v),
                        fmt_point(&p)
                    ))
                }
                Ok(_) => {}
            }
        }
    }
    Verdict::pass()
}

/// Integer kernel basis of the design matrix: the exponent vectors of the
/// binomials `prod t^{v+} - prod t^{v-}` vanishing on the toric variety.
pub fn kernel_binomials(config: &PointConfiguration) -> Vec<Vec<BigInt>> {
    let dm = design_matrix(config);
    linalg::integer_kernel(&dm.to_rational(), dm.ncols())
}

/// Condition 2, sampled: at interior points where no function vanishes, the
/// rescaled values `f_b / w_b` satisfy every kernel binomial relation.
pub fn verify_toric_membership(sys: &BlendingSystem, samples: usize, seed: u64) -> Verdict {
    let kernel = kernel_binomials(sys.config());
    let mut used = 0;
    for p in sample_interior(sys.config(), samples, seed) {
        let values = match sys.eval(&p) {
            Ok(v) => v,
            Err(e) => return Verdict::fail(format!("{e} at {}", fmt_point(&p))),
        };
        if values.iter().any(Zero::is_zero) {
            continue;
        }
        used += 1;
        let scaled: Vec<Rational> = values
            .iter()
            .zip(sys.weights().as_slice())
            .map(|(v, w)| v / w)
            .collect();
        for v in &kernel {
            let mut lhs = Rational::one();
            let mut rhs = Rational::one();
            for (t, e) in scaled.iter().zip(v) {
                let e = e.to_i64().expect("small kernel entry");
                if e > 0 {
                    lhs *= checked_pow(t, e).expect("nonzero base");
                } else if e < 0 {
                    rhs *= checked_pow(t, -e).expect("nonzero base");
                }
            }
            if lhs != rhs {
                let vs: Vec<String> = v.iter().map(ToString::to_string).collect();
                return Verdict::fail(format!(
                    "relation ({}) fails at {}: {} != {}",
                    vs.join(", "),
                    fmt_point(&p),
                    format_rational(&lhs),
                    format_rational(&rhs)
                ));
            }
        }
    }
    if used == 0 {
        return Verdict::fail("no sample point where all functions are nonzero");
    }
    Verdict::pass()
}

/// The patch map `p -> sum_b f_b(p) Q_b`.
pub fn toric_patch_eval(
    sys: &BlendingSystem,
    control: &[Vec<Rational>],
    p: &[Rational],
) -> Result<Vec<Rational>, BlendingError> {
    if control.len() != sys.len() {
        return Err(BlendingError::CountMismatch {
            what: "control points",
            expected: sys.len(),
            found: control.len(),
        });
    }
    let out_dim = control.first().map_or(0, Vec::len);
    if let Some(bad) = control.iter().find(|q| q.len() != out_dim) {
        return Err(BlendingError::CountMismatch {
            what: "control point coordinates",
            expected: out_dim,
            found: bad.len(),
        });
    }
    let values = sys.eval(p)?;
    let mut out = vec![Rational::zero(); out_dim];
    for (v, q) in values.iter().zip(control) {
        for (o, x) in out.iter_mut().zip(q) {
            *o += v * x;
        }
    }
    Ok(out)
}

/// Results of the four checks of rational linear precision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrecisionReport {
    pub partition_of_unity: Verdict,
    pub toric_membership: Verdict,
    pub interior_positivity: Verdict,
    pub linear_precision: Verdict,
}

impl PrecisionReport {
    pub fn all_passed(&self) -> bool {
        self.partition_of_unity.passed
            && self.toric_membership.passed
            && self.interior_positivity.passed
            && self.linear_precision.passed
    }
}

pub fn check_rational_linear_precision(
    sys: &BlendingSystem,
    samples: usize,
    seed: u64,
    mode: IdentityMode,
) -> PrecisionReport {
    PrecisionReport {
        partition_of_unity: verify_partition_of_unity_with(sys, mode),
        toric_membership: verify_toric_membership(sys, samples, seed),
        interior_positivity: verify_interior_positivity(sys, samples, seed),
        linear_precision: verify_linear_precision_with(sys, mode),
    }
}

/// The toric blending functions themselves satisfy all four conditions.
pub fn has_strict_linear_precision(sys: &BlendingSystem, samples: usize, seed: u64) -> bool {
    sys.kind() == BlendingKind::Toric
        && check_rational_linear_precision(sys, samples, seed, IdentityMode::Exact).all_passed()
}

/// Relative-interior sample points of a sub-configuration; used for faces.
pub fn sample_points_of(points: &[Vec<i64>], count: usize, seed: u64) -> Vec<Vec<Rational>> {
    sample_convex_combinations(points, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::geometry::convex_hull_facets;
    use crate::models;

    fn square_system() -> BlendingSystem {
        let c = models::square();
        let p = convex_hull_facets(&c).unwrap();
        toric_blending(&p, &c, &WeightVector::ones(4)).unwrap()
    }

    fn poly(vars: &[String], s: &[(i64, &[u32])]) -> Polynomial {
        Polynomial::from_terms(vars, s.iter().map(|(c, e)| (int(*c), e.to_vec()))).unwrap()
    }

    #[test]
    fn square_toric_functions_are_bernstein_products() {
        let sys = square_system();
        let v = sys.vars().to_vec();
        // (1-x1)(1-x2), x1(1-x2), x2(1-x1), x1 x2 in configuration order
        let expected = [
            poly(
                &v,
                &[(1, &[0, 0]), (-1, &[1, 0]), (-1, &[0, 1]), (1, &[1, 1])],
            ),
            poly(&v, &[(1, &[1, 0]), (-1, &[1, 1])]),
            poly(&v, &[(1, &[0, 1]), (-1, &[1, 1])]),
            poly(&v, &[(1, &[1, 1])]),
        ];
        for (f, e) in sys.functions().iter().zip(expected) {
            assert_eq!(f.den(), &Polynomial::one(&v));
            assert_eq!(f.num(), &e);
        }
    }

    #[test]
    fn trapezoid_beta_w_at_origin() {
        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let v = numbered_vars("x", 2);
        let beta_w = weighted_toric_sum(&p, &c, &models::trapezoid_weights(), &v).unwrap();
        assert_eq!(beta_w.eval(&[int(0), int(0)]).unwrap(), int(4));
    }

    #[test]
    fn segment_functions() {
        let c = models::segment();
        let p = convex_hull_facets(&c).unwrap();
        let sys = toric_blending(&p, &c, &WeightVector::ones(2)).unwrap();
        let v = sys.vars().to_vec();
        assert_eq!(
            sys.functions()[0].num(),
            &poly(&v, &[(1, &[0]), (-1, &[1])])
        );
        assert_eq!(sys.functions()[1].num(), &poly(&v, &[(1, &[1])]));
    }

    #[test]
    fn outside_point_rejected() {
        let c = models::square();
        let p = convex_hull_facets(&c).unwrap();
        let outside = PointConfiguration::new(2, vec![vec![0, 0], vec![2, 0]]).unwrap();
        assert_eq!(
            toric_blending(&p, &outside, &WeightVector::ones(2)).unwrap_err(),
            BlendingError::PointOutsidePolytope { index: 1 }
        );
    }

    #[test]
    fn weights_must_be_positive() {
        assert_eq!(
            WeightVector::new(vec![int(1), int(0)]).unwrap_err(),
            BlendingError::NonPositiveWeight { index: 1 }
        );
    }

    #[test]
    fn partition_of_unity_examples() {
        assert!(verify_partition_of_unity(&square_system()).passed);
        assert!(verify_partition_of_unity(&models::trapezoid_beta_tilde()).passed);

        let seg = models::segment();
        let v = numbered_vars("x", 1);
        let x = Polynomial::variable(&v, 0);
        // x1*x2 is not expressible over one variable; use x^2 and 1 - x
        let bad = BlendingSystem::new(
            seg,
            WeightVector::ones(2),
            vec![
                RationalFunction::from_polynomial(x.pow(2)),
                RationalFunction::from_polynomial(&Polynomial::one(&v) - &x),
            ],
            BlendingKind::Custom,
            v,
        )
        .unwrap();
        assert!(!verify_partition_of_unity(&bad).passed);
    }

    #[test]
    fn linear_precision_examples() {
        assert!(verify_linear_precision(&square_system()).passed);
        assert!(verify_linear_precision(&models::trapezoid_beta_tilde()).passed);

        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let toric = toric_blending(&p, &c, &models::trapezoid_weights()).unwrap();
        let v = verify_linear_precision(&toric);
        assert!(!v.passed);
        assert!(v.witness.unwrap().starts_with("coordinate"));
    }

    #[test]
    fn sampled_identity_mode_agrees() {
        let mode = IdentityMode::Sampled {
            points: FAST_IDENTITY_POINTS,
            seed: 1,
        };
        assert!(verify_linear_precision_with(&models::trapezoid_beta_tilde(), mode).passed);
        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let toric = toric_blending(&p, &c, &models::trapezoid_weights()).unwrap();
        assert!(!verify_linear_precision_with(&toric, mode).passed);
        assert!(verify_partition_of_unity_with(&toric, mode).passed);
    }

    #[test]
    fn positivity_examples() {
        assert!(verify_interior_positivity(&square_system(), 50, 0).passed);
        assert!(verify_interior_positivity(&models::trapezoid_beta_tilde(), 50, 0).passed);

        // {2x - 1, 2 - 2x} sums to 1 and has linear precision, but is negative near 0
        let v = numbered_vars("x", 1);
        let x = Polynomial::variable(&v, 0);
        let one = Polynomial::one(&v);
        let sys = BlendingSystem::new(
            models::segment(),
            WeightVector::ones(2),
            vec![
                RationalFunction::from_polynomial(&x.scale(&int(2)) - &one),
                RationalFunction::from_polynomial(&one.scale(&int(2)) - &x.scale(&int(2))),
            ],
            BlendingKind::Custom,
            v,
        )
        .unwrap();
        assert!(verify_partition_of_unity(&sys).passed);
        assert_eq!(sys.functions()[0].eval(&[rat(1, 4)]).unwrap(), rat(-1, 2));
        assert!(!verify_interior_positivity(&sys, 50, 0).passed);
    }

    #[test]
    fn toric_membership_examples() {
        assert!(verify_toric_membership(&square_system(), 50, 0).passed);
        assert!(verify_toric_membership(&models::trapezoid_beta_tilde(), 50, 0).passed);

        let tilde = models::trapezoid_beta_tilde();
        let wrong = BlendingSystem::new(
            tilde.config().clone(),
            WeightVector::ones(5),
            tilde.functions().to_vec(),
            BlendingKind::Custom,
            tilde.vars().to_vec(),
        )
        .unwrap();
        assert!(!verify_toric_membership(&wrong, 50, 0).passed);
    }

    #[test]
    fn square_kernel_relation() {
        let k = kernel_binomials(&models::square());
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(v == vec![1, -1, -1, 1] || v == vec![-1, 1, 1, -1]);
        let sys = square_system();
        let f = sys.functions();
        assert!((&f[0] * &f[3]).equals(&(&f[1] * &f[2])));
    }

    #[test]
    fn patch_examples() {
        let sys = square_system();
        let ctrl: Vec<Vec<Rational>> = (0..4).map(|i| sys.config().rational_point(i)).collect();
        let p = vec![rat(1, 3), rat(1, 3)];
        assert_eq!(toric_patch_eval(&sys, &ctrl, &p).unwrap(), p);

        let zero = vec![int(0), int(0)];
        let ctrl = vec![zero.clone(), zero.clone(), zero, vec![int(1), int(1)]];
        assert_eq!(
            toric_patch_eval(&sys, &ctrl, &[rat(1, 2), rat(1, 2)]).unwrap(),
            vec![rat(1, 4), rat(1, 4)]
        );

        let tilde = models::trapezoid_beta_tilde();
        let ctrl: Vec<Vec<Rational>> = (0..5).map(|i| tilde.config().rational_point(i)).collect();
        let p = vec![rat(4, 5), rat(2, 5)];
        assert_eq!(toric_patch_eval(&tilde, &ctrl, &p).unwrap(), p);

        assert!(toric_patch_eval(&sys, &ctrl[..2], &p).is_err());
    }

    #[test]
    fn strict_precision_dichotomy() {
        assert!(has_strict_linear_precision(&square_system(), 20, 0));
        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let toric = toric_blending(&p, &c, &models::trapezoid_weights()).unwrap();
        assert!(!has_strict_linear_precision(&toric, 20, 0));
    }

    #[test]
    fn linear_precision_invariant_under_relabeling() {
        let tilde = models::trapezoid_beta_tilde();
        let perm = [3, 0, 4, 2, 1];
        assert!(verify_linear_precision(&tilde.permuted(&perm)).passed);
        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let toric = toric_blending(&p, &c, &models::trapezoid_weights()).unwrap();
        assert!(!verify_linear_precision(&toric.permuted(&perm)).passed);
    }
}
