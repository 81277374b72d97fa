//! Multigraded configurations and their toric fiber products.
//!
//! Degree classes are 0-based in the API. Labels of product points are
//! `z[i][j][k]` with 1-based indices.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::rational::format_rational;
use crate::arith::{numbered_vars, ratfun, Polynomial, Rational, RationalFunction};
use crate::blending::{BlendingError, BlendingKind, BlendingSystem, Verdict, WeightVector};
use crate::geometry::{
    sample_convex_combinations, sample_interior, GeometryError, LatticePolytope, PointConfiguration,
};
use crate::linalg::{self, Solve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TfpError {
    #[error("degree points are linearly dependent (rank {rank} < {count})")]
    DependentDegrees { rank: usize, count: usize },
    #[error("no vector w with w.a = 1 for every degree a")]
    NoOmega,
    #[error("no affine degree map for {side}: {witness}")]
    NoDegreeMap { side: &'static str, witness: String },
    #[error("degree class {class} of {side} is empty")]
    EmptyDegreeClass { side: &'static str, class: usize },
    #[error("{side}: expected {expected} degree classes, found {found}")]
    ClassCountMismatch {
        side: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{side}: assignment has {found} entries for {expected} points")]
    AssignmentLength {
        side: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{side}: point {point} has degree index {class} out of range")]
    ClassOutOfRange {
        side: &'static str,
        point: usize,
        class: usize,
    },
    #[error("degree class {class} does not span a face")]
    NotAFace { class: usize },
    #[error(transparent)]
    Blending(#[from] BlendingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A configuration with every point assigned to a degree class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedConfiguration {
    config: PointConfiguration,
    assignment: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl GradedConfiguration {
    pub fn new(
        config: PointConfiguration,
        assignment: Vec<usize>,
        num_classes: usize,
    ) -> Result<Self, TfpError> {
        Self::new_for(config, assignment, num_classes, "B")
    }

    fn new_for(
        config: PointConfiguration,
        assignment: Vec<usize>,
        num_classes: usize,
        side: &'static str,
    ) -> Result<Self, TfpError> {
        if assignment.len() != config.len() {
            return Err(TfpError::AssignmentLength {
                side,
                expected: config.len(),
                found: assignment.len(),
            });
        }
        let mut classes = vec![Vec::new(); num_classes];
        for (point, &class) in assignment.iter().enumerate() {
            if class >= num_classes {
                return Err(TfpError::ClassOutOfRange { side, point, class });
            }
            classes[class].push(point);
        }
        if let Some(class) = classes.iter().position(Vec::is_empty) {
            return Err(TfpError::EmptyDegreeClass { side, class });
        }
        Ok(GradedConfiguration {
            config,
            assignment,
            classes,
        })
    }

    pub fn config(&self) -> &PointConfiguration {
        &self.config
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Point indices of each class, in configuration order.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// `(i, j)` of a point: its class and its position within the class.
    pub fn double_index(&self, point: usize) -> (usize, usize) {
        let i = self.assignment[point];
        let j = self.classes[i]
            .iter()
            .position(|&p| p == point)
            .expect("member");
        (i, j)
    }
}

/// A validated multigrading of two configurations by `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigrading {
    a: PointConfiguration,
    omega: Vec<Rational>,
    b: GradedConfiguration,
    c: GradedConfiguration,
    map_b: Vec<Vec<Rational>>,
    map_c: Vec<Vec<Rational>>,
}

impl Multigrading {
    pub fn degrees(&self) -> &PointConfiguration {
        &self.a
    }

    pub fn omega(&self) -> &[Rational] {
        &self.omega
    }

    pub fn num_classes(&self) -> usize {
        self.a.len()
    }

    pub fn graded_b(&self) -> &GradedConfiguration {
        &self.b
    }

    pub fn graded_c(&self) -> &GradedConfiguration {
        &self.c
    }

    pub fn assignment_b(&self) -> &[usize] {
        self.b.assignment()
    }

    pub fn assignment_c(&self) -> &[usize] {
        self.c.assignment()
    }

    /// Coordinates of the affine degree map of `B` as polynomials in `vars`.
    pub fn degree_map_b(&self, vars: &[String]) -> Vec<Polynomial> {
        affine_rows(&self.map_b, vars)
    }

    pub fn degree_map_c(&self, vars: &[String]) -> Vec<Polynomial> {
        affine_rows(&self.map_c, vars)
    }
}

fn affine_rows(map: &[Vec<Rational>], vars: &[String]) -> Vec<Polynomial> {
    map.iter()
        .map(|row| {
            let (lin, c) = row.split_at(row.len() - 1);
            Polynomial::affine(vars, lin, c[0].clone())
        })
        .collect()
}

/// Checks linear independence of `A`, solves for `omega` and for affine degree
/// maps on both sides.
pub fn validate_multigrading(
    b: &GradedConfiguration,
    c: &GradedConfiguration,
    a: &PointConfiguration,
) -> Result<Multigrading, TfpError> {
    let r = a.len();
    for (side, g) in [("B", b), ("C", c)] {
        if g.num_classes() != r {
            return Err(TfpError::ClassCountMismatch {
                side,
                expected: r,
                found: g.num_classes(),
            });
        }
    }
    let a_rows: linalg::Matrix = (0..r).map(|i| a.rational_point(i)).collect();
    let rank = linalg::rank(&a_rows, a.dim());
    if rank < r {
        return Err(TfpError::DependentDegrees { rank, count: r });
    }
    let omega = match linalg::solve(&a_rows, a.dim(), &vec![Rational::one(); r]) {
        Solve::Solution(x) => x,
        Solve::Infeasible(_) => return Err(TfpError::NoOmega),
    };
    let map_b = degree_map(b, a, "B")?;
    let map_c = degree_map(c, a, "C")?;
    Ok(Multigrading {
        a: a.clone(),
        omega,
        b: b.clone(),
        c: c.clone(),
        map_b,
        map_c,
    })
}

/// Rows `L_k` (linear part then constant) with `L_k . (p, 1) = a^{class(p)}_k`.
fn degree_map(
    g: &GradedConfiguration,
    a: &PointConfiguration,
    side: &'static str,
) -> Result<Vec<Vec<Rational>>, TfpError> {
    let cfg = g.config();
    let ncols = cfg.dim() + 1;
    let m: linalg::Matrix = (0..cfg.len())
        .map(|p| {
            let mut row = cfg.rational_point(p);
            row.push(Rational::one());
            row
        })
        .collect();
    let mut rows = Vec::with_capacity(a.dim());
    for k in 0..a.dim() {
        let target: Vec<Rational> = g
            .assignment()
            .iter()
            .map(|&i| Rational::from_integer(a.points()[i][k].into()))
            .collect();
        match linalg::solve(&m, ncols, &target) {
            Solve::Solution(x) => rows.push(x),
            Solve::Infeasible(y) => {
                return Err(TfpError::NoDegreeMap {
                    side,
                    witness: dependency_witness(g, &y, k),
                })
            }
        }
    }
    Ok(rows)
}

fn dependency_witness(g: &GradedConfiguration, y: &[Rational], k: usize) -> String {
    let terms: Vec<String> = y
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| format!("{}*{}", format_rational(c), g.config().label(p)))
        .collect();
    format!(
        "affine dependency {} = 0 is not respected by coordinate {} of the degrees",
        terms.join(" + "),
        k + 1
    )
}

/// The toric fiber product configuration with product weights.
#[derive(Debug, Clone)]
pub struct TfpConfiguration {
    pub config: PointConfiguration,
    pub weights: WeightVector,
    /// `(i, j, k)` of each point, 0-based.
    pub index: Vec<(usize, usize, usize)>,
    /// Originating point of `B` and of `C`.
    pub b_point: Vec<usize>,
    pub c_point: Vec<usize>,
}

pub fn tfp_label(i: usize, j: usize, k: usize) -> String {
    format!("z[{}][{}][{}]", i + 1, j + 1, k + 1)
}

/// One point of a product: its `(i, j, k)` and the factor points it joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub b: usize,
    pub c: usize,
}

/// Product points in `(i, j, k)` lexicographic order.
pub fn product_index(g: &Multigrading) -> Vec<ProductIndex> {
    let (gb, gc) = (g.graded_b(), g.graded_c());
    let mut out = Vec::new();
    for i in 0..g.num_classes() {
        for (j, &b) in gb.classes()[i].iter().enumerate() {
            for (k, &c) in gc.classes()[i].iter().enumerate() {
                out.push(ProductIndex { i, j, k, b, c });
            }
        }
    }
    out
}

pub fn tfp_configuration(
    wb: &WeightVector,
    wc: &WeightVector,
    g: &Multigrading,
) -> Result<TfpConfiguration, TfpError> {
    let (b, c) = (g.graded_b(), g.graded_c());
    for (w, cfg) in [(wb, b.config()), (wc, c.config())] {
        if w.len() != cfg.len() {
            return Err(BlendingError::CountMismatch {
                what: "weights",
                expected: cfg.len(),
                found: w.len(),
            }
            .into());
        }
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut index = Vec::new();
    let mut b_point = Vec::new();
    let mut c_point = Vec::new();
    for q in product_index(g) {
        let mut p = b.config().points()[q.b].clone();
        p.extend_from_slice(&c.config().points()[q.c]);
        points.push(p);
        labels.push(tfp_label(q.i, q.j, q.k));
        weights.push(&wb.as_slice()[q.b] * &wc.as_slice()[q.c]);
        index.push((q.i, q.j, q.k));
        b_point.push(q.b);
        c_point.push(q.c);
    }
    let config = PointConfiguration::new(b.config().dim() + c.config().dim(), points)?
        .with_labels(labels)?;
    Ok(TfpConfiguration {
        config,
        weights: WeightVector::new(weights)?,
        index,
        b_point,
        c_point,
    })
}

/// Which factor supplies the normalizing denominator of the product functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenominatorForm {
    #[default]
    B,
    C,
}

/// Sum of the functions of one degree class.
pub fn class_sum(sys: &BlendingSystem, graded: &GradedConfiguration, i: usize) -> RationalFunction {
    let members: Vec<&RationalFunction> = graded.classes()[i]
        .iter()
        .map(|&p| &sys.functions()[p])
        .collect();
    ratfun::sum(sys.vars(), members)
}

/// Product blending functions `f^i_j g^i_k / N^i` over variables
/// `x1.., y1..`.
pub fn tfp_blending(
    sys_b: &BlendingSystem,
    sys_c: &BlendingSystem,
    g: &Multigrading,
    form: DenominatorForm,
) -> Result<BlendingSystem, TfpError> {
    let tfp = tfp_configuration(sys_b.weights(), sys_c.weights(), g)?;
    let xb = numbered_vars("x", sys_b.config().dim());
    let yc = numbered_vars("y", sys_c.config().dim());
    let vars: Vec<String> = xb.iter().chain(&yc).cloned().collect();
    let fb = lift_functions(&sys_b.renamed(xb)?, &vars)?;
    let fc = lift_functions(&sys_c.renamed(yc)?, &vars)?;

    let denominators: Vec<RationalFunction> = (0..g.num_classes())
        .map(|i| {
            let (funcs, graded) = match form {
                DenominatorForm::B => (&fb, g.graded_b()),
                DenominatorForm::C => (&fc, g.graded_c()),
            };
            let members: Vec<&RationalFunction> =
                graded.classes()[i].iter().map(|&p| &funcs[p]).collect();
            ratfun::sum(&vars, members)
        })
        .collect();

    let functions = tfp
        .index
        .iter()
        .zip(tfp.b_point.iter().zip(&tfp.c_point))
        .map(|(&(i, _, _), (&pb, &pc))| {
            (&fb[pb] * &fc[pc])
                .checked_div(&denominators[i])
                .map(|f| f.simplified())
                .map_err(|e| TfpError::Blending(e.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlendingSystem::new(
        tfp.config,
        tfp.weights,
        functions,
        BlendingKind::Custom,
        vars,
    )?)
}

fn lift_functions(
    sys: &BlendingSystem,
    vars: &[String],
) -> Result<Vec<RationalFunction>, TfpError> {
    sys.functions()
        .iter()
        .map(|f| f.with_vars(vars).map_err(|e| TfpError::Blending(e.into())))
        .collect()
}

/// A degree class together with the facets cutting it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFace {
    pub points: PointConfiguration,
    pub point_indices: Vec<usize>,
    /// Facet indices of the polytope tight on exactly this class.
    pub facets: Vec<usize>,
}

pub fn graded_face(
    graded: &GradedConfiguration,
    poly: &LatticePolytope,
    i: usize,
) -> Result<GradedFace, TfpError> {
    let members = graded
        .classes()
        .get(i)
        .ok_or(TfpError::ClassOutOfRange {
            side: "B",
            point: 0,
            class: i,
        })?
        .clone();
    let cfg = graded.config();
    let facets: Vec<usize> = (0..poly.facets().len())
        .filter(|&f| {
            members
                .iter()
                .all(|&p| poly.facets()[f].distance(&cfg.points()[p]) == 0)
        })
        .collect();
    for p in 0..cfg.len() {
        let on_all = facets
            .iter()
            .all(|&f| poly.facets()[f].distance(&cfg.points()[p]) == 0);
        if on_all != members.contains(&p) {
            return Err(TfpError::NotAFace { class: i });
        }
    }
    let points = PointConfiguration::new(
        cfg.dim(),
        members.iter().map(|&p| cfg.points()[p].clone()).collect(),
    )?;
    Ok(GradedFace {
        points,
        point_indices: members,
        facets,
    })
}

/// On sampled relative-interior points of the face of class `i`, the
/// functions of that class sum to one.
pub fn verify_face_partition(
    sys: &BlendingSystem,
    graded: &GradedConfiguration,
    poly: &LatticePolytope,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<Verdict, TfpError> {
    let face = graded_face(graded, poly, i)?;
    let total = class_sum(sys, graded, i);
    for p in sample_convex_combinations(face.points.points(), samples, seed) {
        match total.eval(&p) {
            Ok(v) if v.is_one() => {}
            Ok(v) => {
                return Ok(Verdict::fail(format!(
                    "class sum is {} at {}",
                    format_rational(&v),
                    fmt(&p)
                )))
            }
            Err(e) => return Ok(Verdict::fail(format!("{e} at {}", fmt(&p)))),
        }
    }
    Ok(Verdict::pass())
}

/// Both denominator forms agree at sampled relative-interior points of the
/// product configuration.
pub fn verify_form_agreement(
    sys_b: &BlendingSystem,
    sys_c: &BlendingSystem,
    g: &Multigrading,
    samples: usize,
    seed: u64,
) -> Result<Verdict, TfpError> {
    let by_b = tfp_blending(sys_b, sys_c, g, DenominatorForm::B)?;
    let by_c = tfp_blending(sys_b, sys_c, g, DenominatorForm::C)?;
    for p in sample_interior(by_b.config(), samples, seed) {
        for (n, (f, h)) in by_b.functions().iter().zip(by_c.functions()).enumerate() {
            let (u, v) = match (f.eval(&p), h.eval(&p)) {
                (Ok(u), Ok(v)) => (u, v),
                _ => {
                    return Ok(Verdict::fail(format!(
                        "{} has a pole at {}",
                        by_b.config().label(n),
                        fmt(&p)
                    )))
                }
            };
            if u != v {
                return Ok(Verdict::fail(format!(
                    "{}: {} != {} at {}",
                    by_b.config().label(n),
                    format_rational(&u),
                    format_rational(&v),
                    fmt(&p)
                )));
            }
        }
    }
    Ok(Verdict::pass())
}

fn fmt(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Trivial grading `A = {1}` in dimension one: every point has degree 0.
pub fn trivial_grading(
    b: &PointConfiguration,
    c: &PointConfiguration,
) -> Result<Multigrading, TfpError> {
    let a = PointConfiguration::new(1, vec![vec![1]])?;
    let gb = GradedConfiguration::new_for(b.clone(), vec![0; b.len()], 1, "B")?;
    let gc = GradedConfiguration::new_for(c.clone(), vec![0; c.len()], 1, "C")?;
    validate_multigrading(&gb, &gc, &a)
}

/// Grades both configurations and validates the multigrading.
pub fn multigrading(
    b: &PointConfiguration,
    assignment_b: Vec<usize>,
    c: &PointConfiguration,
    assignment_c: Vec<usize>,
    a: &PointConfiguration,
) -> Result<Multigrading, TfpError> {
    let gb = GradedConfiguration::new_for(b.clone(), assignment_b, a.len(), "B")?;
    let gc = GradedConfiguration::new_for(c.clone(), assignment_c, a.len(), "C")?;
    validate_multigrading(&gb, &gc, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::blending::{
        toric_blending, verify_interior_positivity, verify_linear_precision,
        verify_partition_of_unity,
    };
    use crate::geometry::{convex_hull_facets, lattice_points};
    use crate::models;

    fn square_sys() -> BlendingSystem {
        let c = models::square();
        let p = convex_hull_facets(&c).unwrap();
        toric_blending(&p, &c, &WeightVector::ones(4)).unwrap()
    }

    fn fig_grading() -> Multigrading {
        multigrading(
            &models::square(),
            models::square_grading(),
            &models::trapezoid(),
            models::trapezoid_grading(),
            &models::grading_basis(),
        )
        .unwrap()
    }

    #[test]
    fn square_grading_is_valid() {
        let g = fig_grading();
        assert_eq!(g.omega(), &[int(1), int(1)]);
        let x = numbered_vars("x", 2);
        let map = g.degree_map_b(&x);
        let one = Polynomial::one(&x);
        let x2 = Polynomial::variable(&x, 1);
        assert_eq!(map, vec![&one - &x2, x2]);
    }

    #[test]
    fn dependent_degrees() {
        let a = PointConfiguration::new(2, vec![vec![1, 0], vec![2, 0]]).unwrap();
        let err = multigrading(
            &models::square(),
            models::square_grading(),
            &models::trapezoid(),
            models::trapezoid_grading(),
            &a,
        )
        .unwrap_err();
        assert!(matches!(err, TfpError::DependentDegrees { .. }));
    }

    #[test]
    fn diagonal_grading_has_no_degree_map() {
        let err = multigrading(
            &models::square(),
            vec![0, 1, 1, 0],
            &models::trapezoid(),
            models::trapezoid_grading(),
            &models::grading_basis(),
        )
        .unwrap_err();
        assert!(matches!(err, TfpError::NoDegreeMap { side: "B", .. }));
    }

    #[test]
    fn omega_exists_for_independent_degrees() {
        let a = PointConfiguration::new(1, vec![vec![0]]).unwrap();
        let s = models::segment();
        let err = multigrading(&s, vec![0, 0], &s, vec![0, 0], &a).unwrap_err();
        assert!(matches!(err, TfpError::DependentDegrees { .. }));
        let a = PointConfiguration::new(2, vec![vec![1, -1]]).unwrap();
        assert!(multigrading(&s, vec![0, 0], &s, vec![0, 0], &a).is_ok());
    }

    #[test]
    fn empty_class() {
        let err = multigrading(
            &models::square(),
            vec![0, 0, 0, 0],
            &models::trapezoid(),
            models::trapezoid_grading(),
            &models::grading_basis(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            TfpError::EmptyDegreeClass {
                side: "B",
                class: 1
            }
        );
    }

    #[test]
    fn square_times_trapezoid_configuration() {
        let g = fig_grading();
        let t =
            tfp_configuration(&WeightVector::ones(4), &models::trapezoid_weights(), &g).unwrap();
        assert_eq!(t.config.len(), 10);
        let at = |i, j, k| t.index.iter().position(|&x| x == (i, j, k)).unwrap();
        assert_eq!(t.config.points()[at(0, 1, 2)], vec![1, 0, 2, 0]);
        assert_eq!(t.config.points()[at(1, 1, 0)], vec![1, 1, 1, 1]);
        assert_eq!(t.config.points()[at(1, 1, 1)], vec![1, 1, 0, 1]);
        assert_eq!(t.config.label(at(0, 1, 2)), "z[1][2][3]");
        let expected: Vec<Rational> = [1, 2, 1, 1, 2, 1, 1, 1, 1, 1]
            .iter()
            .map(|&v| int(v))
            .collect();
        assert_eq!(t.weights.as_slice(), &expected[..]);
    }

    #[test]
    fn cartesian_product_of_segments() {
        let s = models::segment();
        let g = trivial_grading(&s, &s).unwrap();
        let t = tfp_configuration(&WeightVector::ones(2), &WeightVector::ones(2), &g).unwrap();
        assert_eq!(
            t.config.points(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn cube_by_iterated_products() {
        let s = models::segment();
        let g = trivial_grading(&s, &s).unwrap();
        let sq = tfp_configuration(&WeightVector::ones(2), &WeightVector::ones(2), &g).unwrap();
        let g2 = trivial_grading(&sq.config, &s).unwrap();
        let cube = tfp_configuration(&sq.weights, &WeightVector::ones(2), &g2).unwrap();
        let mut got = cube.config.points().to_vec();
        got.sort();
        let hull = convex_hull_facets(&cube.config).unwrap();
        assert_eq!(hull.facets().len(), 6);
        assert_eq!(got, lattice_points(&hull).points());
    }

    #[test]
    fn example_product_function() {
        let g = fig_grading();
        let sys = tfp_blending(
            &square_sys(),
            &models::trapezoid_beta_tilde(),
            &g,
            DenominatorForm::B,
        )
        .unwrap();
        let v = sys.vars().to_vec();
        assert_eq!(v, ["x1", "x2", "y1", "y2"]);
        let var = |n| Polynomial::variable(&v, n);
        let c = |n| Polynomial::constant(&v, int(n));
        let num = &(&(&var(0) * &(&c(1) - &var(1))) * &var(2).pow(2)) * &(&c(1) - &var(3));
        let den = &(&c(1) - &var(1)) * &(&c(2) - &var(3)).pow(2);
        let expected = RationalFunction::new(num, den).unwrap();
        let z123 = sys
            .config()
            .labels()
            .unwrap()
            .iter()
            .position(|l| l == "z[1][2][3]")
            .unwrap();
        assert!(sys.functions()[z123].equals(&expected));

        // x1 * y1 y2 / (2 - y2)
        let z221 = sys
            .config()
            .labels()
            .unwrap()
            .iter()
            .position(|l| l == "z[2][2][1]")
            .unwrap();
        let expected =
            RationalFunction::new(&var(0) * &(&var(2) * &var(3)), &c(2) - &var(3)).unwrap();
        assert!(sys.functions()[z221].equals(&expected));
    }

    #[test]
    fn product_has_rational_linear_precision() {
        let g = fig_grading();
        for form in [DenominatorForm::B, DenominatorForm::C] {
            let sys =
                tfp_blending(&square_sys(), &models::trapezoid_beta_tilde(), &g, form).unwrap();
            assert!(verify_partition_of_unity(&sys).passed);
            assert!(verify_linear_precision(&sys).passed);
            assert!(verify_interior_positivity(&sys, 20, 0).passed);
        }
    }

    #[test]
    fn graded_faces() {
        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let gc = GradedConfiguration::new(c.clone(), models::trapezoid_grading(), 2).unwrap();
        let f = graded_face(&gc, &p, 0).unwrap();
        assert_eq!(f.points.points(), &[vec![0, 0], vec![1, 0], vec![2, 0]]);
        assert_eq!(f.facets.len(), 1);
        assert_eq!(p.facets()[f.facets[0]].normal, vec![0, 1]);
        assert_eq!(p.facets()[f.facets[0]].offset, 0);

        let sq = models::square();
        let ps = convex_hull_facets(&sq).unwrap();
        let gs = GradedConfiguration::new(sq.clone(), models::square_grading(), 2).unwrap();
        let f = graded_face(&gs, &ps, 0).unwrap();
        assert_eq!(f.points.points(), &[vec![0, 0], vec![1, 0]]);
        assert_eq!(ps.facets()[f.facets[0]].normal, vec![0, 1]);

        let whole = GradedConfiguration::new(sq, vec![0; 4], 1).unwrap();
        let f = graded_face(&whole, &ps, 0).unwrap();
        assert!(f.facets.is_empty());
        assert_eq!(f.point_indices.len(), 4);

        let diag = GradedConfiguration::new(models::square(), vec![0, 1, 1, 0], 2).unwrap();
        assert_eq!(
            graded_face(&diag, &ps, 0).unwrap_err(),
            TfpError::NotAFace { class: 0 }
        );
    }

    #[test]
    fn face_partition() {
        let c = models::trapezoid();
        let p = convex_hull_facets(&c).unwrap();
        let gc = GradedConfiguration::new(c, models::trapezoid_grading(), 2).unwrap();
        let tilde = models::trapezoid_beta_tilde();
        let y = tilde.vars().to_vec();
        let one = Polynomial::one(&y);
        let y2 = Polynomial::variable(&y, 1);
        assert!(class_sum(&tilde, &gc, 0).equals(&RationalFunction::from_polynomial(&one - &y2)));
        assert!(class_sum(&tilde, &gc, 1).equals(&RationalFunction::from_polynomial(y2)));
        assert!(
            verify_face_partition(&tilde, &gc, &p, 0, 20, 0)
                .unwrap()
                .passed
        );
        assert!(
            verify_face_partition(&tilde, &gc, &p, 1, 20, 0)
                .unwrap()
                .passed
        );

        let sq = square_sys();
        let ps = convex_hull_facets(sq.config()).unwrap();
        let gs =
            GradedConfiguration::new(sq.config().clone(), models::square_grading(), 2).unwrap();
        let s = class_sum(&sq, &gs, 0);
        assert_eq!(s.eval(&[rat(1, 2), int(0)]).unwrap(), int(1));
        assert!(
            verify_face_partition(&sq, &gs, &ps, 0, 20, 0)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn form_agreement() {
        let g = fig_grading();
        let (sb, sc) = (square_sys(), models::trapezoid_beta_tilde());
        assert!(verify_form_agreement(&sb, &sc, &g, 30, 0).unwrap().passed);
        let by_b = tfp_blending(&sb, &sc, &g, DenominatorForm::B).unwrap();
        let by_c = tfp_blending(&sb, &sc, &g, DenominatorForm::C).unwrap();
        let z = by_b
            .config()
            .labels()
            .unwrap()
            .iter()
            .position(|l| l == "z[1][2][3]")
            .unwrap();
        assert!(!by_b.functions()[z].equals(&by_c.functions()[z]));
        let bary = sample_interior(by_b.config(), 1, 0).remove(0);
        assert_eq!(
            by_b.functions()[z].eval(&bary).unwrap(),
            by_c.functions()[z].eval(&bary).unwrap()
        );
    }

    #[test]
    fn cartesian_forms_are_identical() {
        let s = models::segment();
        let p = convex_hull_facets(&s).unwrap();
        let seg = toric_blending(&p, &s, &WeightVector::ones(2)).unwrap();
        let g = trivial_grading(&s, &s).unwrap();
        let by_b = tfp_blending(&seg, &seg, &g, DenominatorForm::B).unwrap();
        let by_c = tfp_blending(&seg, &seg, &g, DenominatorForm::C).unwrap();
        for (f, h) in by_b.functions().iter().zip(by_c.functions()) {
            assert!(f.equals(h));
            assert!(f.is_polynomial());
        }
    }
}
