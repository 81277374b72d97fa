//! Invariant checks shared by the `properties` and `acceptance` targets.
//! Each check panics on failure.

#![allow(dead_code)]

use std::fmt::Debug;

use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseResult, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_core::arith::{int, numbered_vars, rat, Polynomial, Rational, RationalFunction};
use toric_core::blending::{
    check_rational_linear_precision, toric_blending, verify_interior_positivity,
    verify_linear_precision, verify_partition_of_unity, BlendingSystem, IdentityMode, WeightVector,
};
use toric_core::geometry::{
    convex_hull_facets, design_matrix, lattice_points, sample_interior, LatticePolytope,
    PointConfiguration,
};
use toric_core::horn::{horn_parametrize, minimize_horn_pair, validate_horn_pair, HornPair};
use toric_core::mle::{
    birch_residual, class_marginals, ips_fit, log_likelihood_exact, marginalize, mle_closed_form,
    mle_horn, tfp_mle, tfp_mle_combine, DataVector,
};
use toric_core::models;
use toric_core::tfp::{
    graded_face, multigrading, tfp_blending, tfp_configuration, trivial_grading, DenominatorForm,
    GradedConfiguration, Multigrading,
};

/// Every check, by name.
pub const ALL: &[(&str, fn())] = &[
    ("canonical_form_is_idempotent", canonical_form_is_idempotent),
    ("equality_is_an_equivalence", equality_is_an_equivalence),
    ("evaluation_is_a_homomorphism", evaluation_is_a_homomorphism),
    (
        "polynomial_product_evaluates_pointwise",
        polynomial_product_evaluates_pointwise,
    ),
    ("lattice_points_round_trip", lattice_points_round_trip),
    (
        "normals_are_primitive_and_facets_irredundant",
        normals_are_primitive_and_facets_irredundant,
    ),
    (
        "toric_systems_of_random_polytopes",
        toric_systems_of_random_polytopes,
    ),
    (
        "toric_partition_of_unity_on_fixtures",
        toric_partition_of_unity_on_fixtures,
    ),
    (
        "linear_precision_is_invariant_under_relabeling",
        linear_precision_is_invariant_under_relabeling,
    ),
    (
        "tfp_systems_have_rational_linear_precision",
        tfp_systems_have_rational_linear_precision,
    ),
    (
        "positivity_of_product_on_fifty_samples",
        positivity_of_product_on_fifty_samples,
    ),
    (
        "tfp_configuration_counts_and_weights",
        tfp_configuration_counts_and_weights,
    ),
    (
        "graded_face_certificates_cut_out_classes",
        graded_face_certificates_cut_out_classes,
    ),
    (
        "cartesian_product_gives_bernstein_products",
        cartesian_product_gives_bernstein_products,
    ),
    (
        "horn_constructions_have_zero_column_sums_and_validate",
        horn_constructions_have_zero_column_sums_and_validate,
    ),
    ("horn_column_permutation", horn_column_permutation),
    (
        "minimization_preserves_parametrization",
        minimization_preserves_parametrization,
    ),
    (
        "tfp_horn_parametrization_is_the_product_formula",
        tfp_horn_parametrization_is_the_product_formula,
    ),
    (
        "closed_form_horn_and_ips_agree",
        closed_form_horn_and_ips_agree,
    ),
    (
        "product_formula_agrees_with_product_system",
        product_formula_agrees_with_product_system,
    ),
    (
        "closed_form_maximizes_the_likelihood",
        closed_form_maximizes_the_likelihood,
    ),
];

fn check<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> TestCaseResult)
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    if let Err(e) = TestRunner::new_with_rng(config, rng).run(&strategy, test) {
        panic!("{e}");
    }
}

fn vars2() -> Vec<String> {
    numbered_vars("x", 2)
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..=4).prop_map(|terms| {
        Polynomial::from_terms(
            &vars2(),
            terms.into_iter().map(|(c, a, b)| (int(c), vec![a, b])),
        )
        .unwrap()
    })
}

fn nonzero_poly() -> impl Strategy<Value = Polynomial> {
    poly_strategy().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun_strategy() -> impl Strategy<Value = RationalFunction> {
    (poly_strategy(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn point_strategy() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-20i64..=20, 1i64..=7), 2)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

pub fn square_sys() -> BlendingSystem {
    let c = models::square();
    let p = convex_hull_facets(&c).unwrap();
    toric_blending(&p, &c, &WeightVector::ones(4)).unwrap()
}

pub fn fig_grading() -> Multigrading {
    multigrading(
        &models::square(),
        models::square_grading(),
        &models::trapezoid(),
        models::trapezoid_grading(),
        &models::grading_basis(),
    )
    .unwrap()
}

pub fn tfp_sys(form: DenominatorForm) -> BlendingSystem {
    tfp_blending(
        &square_sys(),
        &models::trapezoid_beta_tilde(),
        &fig_grading(),
        form,
    )
    .unwrap()
}

fn sum(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |a, b| a + b)
}

pub fn canonical_form_is_idempotent() {
    check(100, ratfun_strategy(), |f| {
        let again = RationalFunction::new(f.num().clone(), f.den().clone()).unwrap();
        prop_assert_eq!(&again, &f);
        let s = f.simplified();
        prop_assert_eq!(s.simplified(), s.clone());
        prop_assert!(s.equals(&f));
        Ok(())
    });
}

pub fn equality_is_an_equivalence() {
    let triple = (
        ratfun_strategy(),
        nonzero_poly(),
        nonzero_poly(),
        ratfun_strategy(),
    );
    check(100, triple, |(f, h, k, g)| {
        let hh = RationalFunction::new(h.clone(), h).unwrap();
        let kk = RationalFunction::new(k.clone(), k).unwrap();
        let b = &f * &hh;
        let c = &b * &kk;
        prop_assert!(f.equals(&f));
        prop_assert!(f.equals(&b) && b.equals(&f));
        prop_assert!(b.equals(&c) && f.equals(&c));
        // an unrelated fraction: symmetry and transitivity still hold
        prop_assert_eq!(f.equals(&g), g.equals(&f));
        if f.equals(&g) {
            prop_assert!(c.equals(&g));
        }
        Ok(())
    });
}

pub fn evaluation_is_a_homomorphism() {
    check(
        100,
        (ratfun_strategy(), ratfun_strategy(), point_strategy()),
        |(f, g, x)| {
            if let (Ok(fx), Ok(gx)) = (f.eval(&x), g.eval(&x)) {
                prop_assert_eq!((&f + &g).eval(&x).unwrap(), &fx + &gx);
                prop_assert_eq!((&f * &g).eval(&x).unwrap(), &fx * &gx);
            }
            Ok(())
        },
    );
}

pub fn polynomial_product_evaluates_pointwise() {
    check(
        50,
        (poly_strategy(), poly_strategy(), point_strategy()),
        |(p, q, x)| {
            prop_assert_eq!(
                (&p * &q).eval(&x).unwrap(),
                p.eval(&x).unwrap() * q.eval(&x).unwrap()
            );
            Ok(())
        },
    );
}

pub fn toric_systems_of_random_polytopes() {
    let polytopes = (
        prop::collection::vec((0i64..=3, 0i64..=3), 3..=6),
        0u64..1000,
    );
    check(5, polytopes, |(pts, seed)| {
        let raw: Vec<Vec<i64>> = pts.into_iter().map(|(a, b)| vec![a, b]).collect();
        let c = PointConfiguration::new(2, raw).unwrap();
        prop_assume!(c.affine_dimension() == 2);
        let poly = convex_hull_facets(&c).unwrap();
        let all = lattice_points(&poly);
        let w: Vec<i64> = (0..all.len())
            .map(|i| 1 + ((seed as usize + 3 * i) % 5) as i64)
            .collect();
        let sys = toric_blending(&poly, &all, &WeightVector::from_integers(&w).unwrap()).unwrap();
        prop_assert!(verify_partition_of_unity(&sys).passed);
        prop_assert!(verify_interior_positivity(&sys, 10, seed).passed);
        for p in sample_interior(&all, 10, seed) {
            for f in poly.facets() {
                prop_assert!(f.distance_rational(&p) > Rational::zero());
            }
        }
        Ok(())
    });
}

pub fn linear_precision_is_invariant_under_relabeling() {
    let tilde = models::trapezoid_beta_tilde();
    let c = models::trapezoid();
    let p = convex_hull_facets(&c).unwrap();
    let toric = toric_blending(&p, &c, &models::trapezoid_weights()).unwrap();
    check(20, permutation(5), |perm| {
        prop_assert!(verify_linear_precision(&tilde.permuted(&perm)).passed);
        prop_assert!(!verify_linear_precision(&toric.permuted(&perm)).passed);
        Ok(())
    });
}

pub fn horn_column_permutation() {
    let pair = models::trapezoid_horn_pair();
    check(
        100,
        (permutation(5), prop::collection::vec(1i64..=30, 5)),
        |(perm, u)| {
            let u: Vec<Rational> = u.into_iter().map(int).collect();
            let pu: Vec<Rational> = perm.iter().map(|&c| u[c].clone()).collect();
            let a = horn_parametrize(&pair, &u).unwrap();
            let b = horn_parametrize(&pair.permuted_columns(&perm), &pu).unwrap();
            let expected: Vec<Rational> = perm.iter().map(|&c| a[c].clone()).collect();
            prop_assert_eq!(b, expected);
            Ok(())
        },
    );
}

pub fn minimization_preserves_parametrization() {
    let pair = models::tfp_horn_pair_example();
    let min = minimize_horn_pair(&pair, true).unwrap().pair;
    check(100, prop::collection::vec(1i64..=40, 10), |u| {
        let u: Vec<Rational> = u.into_iter().map(int).collect();
        prop_assert_eq!(
            horn_parametrize(&pair, &u).unwrap(),
            horn_parametrize(&min, &u).unwrap()
        );
        Ok(())
    });
}

fn fixture_polytopes() -> Vec<(PointConfiguration, LatticePolytope)> {
    [models::square(), models::trapezoid(), models::segment()]
        .into_iter()
        .map(|c| {
            let p = convex_hull_facets(&c).unwrap();
            (c, p)
        })
        .collect()
}

pub fn lattice_points_round_trip() {
    for (c, p) in fixture_polytopes() {
        let mut expected = c.points().to_vec();
        expected.sort();
        assert_eq!(lattice_points(&p).points(), expected.as_slice());
    }
    let sparse = PointConfiguration::new(2, vec![vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
    let all = lattice_points(&convex_hull_facets(&sparse).unwrap());
    assert!(sparse.points().iter().all(|p| all.points().contains(p)));
    assert_eq!(all.len(), 6);
}

pub fn normals_are_primitive_and_facets_irredundant() {
    use num_integer::Integer;
    for (c, p) in fixture_polytopes() {
        for f in p.facets() {
            assert_eq!(f.normal.iter().fold(0i64, |g, &x| g.gcd(&x)), 1);
        }
        // dropping any facet admits some lattice point of an enlarged box
        let d = c.dim();
        let lo = c.points().iter().flatten().min().unwrap() - 2;
        let hi = c.points().iter().flatten().max().unwrap() + 2;
        for skip in 0..p.facets().len() {
            let found = box_points(d, lo, hi).into_iter().any(|x| {
                p.facets()
                    .iter()
                    .enumerate()
                    .all(|(i, f)| i == skip || f.distance(&x) >= 0)
                    && !p.contains(&x)
            });
            assert!(found, "facet {skip} is redundant");
        }
    }
}

fn box_points(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn toric_partition_of_unity_on_fixtures() {
    for (c, p) in fixture_polytopes() {
        let sys = toric_blending(&p, &c, &WeightVector::ones(c.len())).unwrap();
        assert!(verify_partition_of_unity(&sys).passed);
    }
    let c = models::trapezoid();
    let p = convex_hull_facets(&c).unwrap();
    let sys = toric_blending(&p, &c, &models::trapezoid_weights()).unwrap();
    assert!(verify_partition_of_unity(&sys).passed);
}

pub fn tfp_systems_have_rational_linear_precision() {
    for form in [DenominatorForm::B, DenominatorForm::C] {
        let sys = tfp_sys(form);
        let report = check_rational_linear_precision(&sys, 50, 0, IdentityMode::Exact);
        assert!(report.all_passed(), "{report:?}");
    }
}

pub fn tfp_configuration_counts_and_weights() {
    let g = fig_grading();
    let t = tfp_configuration(&WeightVector::ones(4), &models::trapezoid_weights(), &g).unwrap();
    let expected: usize = (0..2)
        .map(|i| g.graded_b().classes()[i].len() * g.graded_c().classes()[i].len())
        .sum();
    assert_eq!(t.config.len(), expected);
    assert!(t.weights.as_slice().iter().all(|w| *w > Rational::zero()));
}

pub fn graded_face_certificates_cut_out_classes() {
    for (c, assignment) in [
        (models::square(), models::square_grading()),
        (models::trapezoid(), models::trapezoid_grading()),
    ] {
        let p = convex_hull_facets(&c).unwrap();
        let g = GradedConfiguration::new(c.clone(), assignment, 2).unwrap();
        for i in 0..2 {
            let face = graded_face(&g, &p, i).unwrap();
            for (b, point) in c.points().iter().enumerate() {
                let on_all = face
                    .facets
                    .iter()
                    .all(|&f| p.facets()[f].distance(point) == 0);
                assert_eq!(on_all, g.assignment()[b] == i);
            }
        }
    }
}

pub fn cartesian_product_gives_bernstein_products() {
    let s = models::segment();
    let p = convex_hull_facets(&s).unwrap();
    let seg = toric_blending(&p, &s, &WeightVector::ones(2)).unwrap();
    let g = trivial_grading(&s, &s).unwrap();
    let prod = tfp_blending(&seg, &seg, &g, DenominatorForm::B).unwrap();
    assert_eq!(
        prod.config().points(),
        &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
    );
    let v = prod.vars().to_vec();
    let x = Polynomial::variable(&v, 0);
    let y = Polynomial::variable(&v, 1);
    let one = Polynomial::one(&v);
    let expected = [
        &(&one - &x) * &(&one - &y),
        &(&one - &x) * &y,
        &x * &(&one - &y),
        &x * &y,
    ];
    for (f, e) in prod.functions().iter().zip(expected) {
        assert!(f.equals(&RationalFunction::from_polynomial(e)));
    }
}

pub fn horn_constructions_have_zero_column_sums_and_validate() {
    let pair = models::tfp_horn_pair_example();
    for c in 0..pair.ncols() {
        assert_eq!(pair.matrix().column(c).iter().sum::<i64>(), 0);
    }
    assert!(validate_horn_pair(&pair, 100, 0).passed());
}

/// `count` data vectors with entries drawn uniformly from 1..=20.
pub fn random_data(n: usize, count: usize, seed: u64) -> Vec<DataVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| DataVector::new((0..n).map(|_| rng.gen_range(1..=20)).collect()).unwrap())
        .collect()
}

pub fn tfp_horn_parametrization_is_the_product_formula() {
    let g = fig_grading();
    let pair = models::tfp_horn_pair_example();
    let (hb, hc) = (models::square_horn_pair(), models::trapezoid_horn_pair());
    for u in random_data(10, 50, 11) {
        let (ub, uc) = marginalize(&g, &u).unwrap();
        let pb = mle_horn(&hb, &ub).unwrap();
        let pc = mle_horn(&hc, &uc).unwrap();
        let combined = tfp_mle_combine(&pb, &pc, &g, &u).unwrap();
        assert_eq!(mle_horn(&pair, &u).unwrap(), combined);
    }
}

pub struct FixtureModel {
    pub sys: BlendingSystem,
    pub horn: HornPair,
}

pub fn fixture_models() -> Vec<FixtureModel> {
    vec![
        FixtureModel {
            sys: square_sys(),
            horn: models::square_horn_pair(),
        },
        FixtureModel {
            sys: models::trapezoid_beta_tilde(),
            horn: models::trapezoid_horn_pair(),
        },
        FixtureModel {
            sys: tfp_sys(DenominatorForm::B),
            horn: models::tfp_horn_pair_example(),
        },
    ]
}

pub fn closed_form_horn_and_ips_agree() {
    for (m, model) in fixture_models().iter().enumerate() {
        let n = model.sys.len();
        let dm = design_matrix(model.sys.config());
        for u in random_data(n, 20, 100 + m as u64) {
            let exact = mle_closed_form(&model.sys, &u).unwrap();
            assert_eq!(mle_horn(&model.horn, &u).unwrap(), exact);
            assert!(birch_residual(&dm, &u, &exact)
                .unwrap()
                .iter()
                .all(Zero::is_zero));
            let fit = ips_fit(&dm, model.sys.weights(), &u, 1e-10, 10_000).unwrap();
            for (a, b) in fit.probs.iter().zip(&exact) {
                let b = toric_core::arith::rational::to_f64(b);
                assert!((a - b).abs() < 1e-8, "model {m}: {a} vs {b}");
            }
        }
    }
}

pub fn product_formula_agrees_with_product_system() {
    let g = fig_grading();
    let sys = tfp_sys(DenominatorForm::B);
    let pair = models::tfp_horn_pair_example();
    for u in random_data(10, 20, 5) {
        let combined = tfp_mle(&square_sys(), &models::trapezoid_beta_tilde(), &g, &u).unwrap();
        assert_eq!(mle_closed_form(&sys, &u).unwrap(), combined);
        assert_eq!(mle_horn(&pair, &u).unwrap(), combined);
        assert_eq!(sum(&combined), Rational::one());
        let marg = class_marginals(&g, &u).unwrap();
        let mut class_sums = vec![Rational::zero(); 2];
        let layout = tfp_configuration(&WeightVector::ones(4), &WeightVector::ones(5), &g).unwrap();
        for (p, &(i, _, _)) in combined.iter().zip(&layout.index) {
            class_sums[i] += p;
        }
        assert_eq!(class_sums, marg);
    }
}

pub fn closed_form_maximizes_the_likelihood() {
    for model in fixture_models() {
        let u = random_data(model.sys.len(), 1, 9).remove(0);
        let best = log_likelihood_exact(&u, &mle_closed_form(&model.sys, &u).unwrap()).unwrap();
        for q in sample_interior(model.sys.config(), 51, 4).iter().skip(1) {
            let other = log_likelihood_exact(&u, &model.sys.eval(q).unwrap()).unwrap();
            assert!(best >= other, "{best} < {other}");
        }
    }
}

pub fn positivity_of_product_on_fifty_samples() {
    assert!(verify_interior_positivity(&tfp_sys(DenominatorForm::C), 50, 1).passed);
}
