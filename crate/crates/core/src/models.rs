//! The running examples: unit square, trapezoid and segment, with their
//! weights, gradings and the rational-linear-precision functions of the
//! trapezoid.

use crate::arith::{int, numbered_vars, Polynomial, RationalFunction};
use crate::blending::{BlendingKind, BlendingSystem, WeightVector};
use crate::geometry::PointConfiguration;
use crate::horn::{tfp_horn_pair, HornPair};

/// `(0,0), (1,0), (0,1), (1,1)`.
pub fn square() -> PointConfiguration {
    PointConfiguration::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
        .expect("valid square")
}

/// `(0,0), (1,0), (2,0), (1,1), (0,1)`.
pub fn trapezoid() -> PointConfiguration {
    PointConfiguration::new(
        2,
        vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![1, 1], vec![0, 1]],
    )
    .expect("valid trapezoid")
}

pub fn trapezoid_weights() -> WeightVector {
    WeightVector::from_integers(&[1, 2, 1, 1, 1]).expect("positive")
}

/// `{0, 1}` in dimension one.
pub fn segment() -> PointConfiguration {
    PointConfiguration::new(1, vec![vec![0], vec![1]]).expect("valid segment")
}

/// Degree classes of the square: bottom edge, then top edge.
pub fn square_grading() -> Vec<usize> {
    vec![0, 0, 1, 1]
}

/// Degree classes of the trapezoid: bottom edge, then top edge.
pub fn trapezoid_grading() -> Vec<usize> {
    vec![0, 0, 0, 1, 1]
}

/// Grading configuration `{e1, e2}`.
pub fn grading_basis() -> PointConfiguration {
    PointConfiguration::new(2, vec![vec![1, 0], vec![0, 1]]).expect("valid basis")
}

/// Blending functions of the trapezoid with rational linear precision for
/// weights `(1,2,1,1,1)`, in variables `y1, y2`.
pub fn trapezoid_beta_tilde() -> BlendingSystem {
    let y = numbered_vars("y", 2);
    let c = |v: i64| Polynomial::constant(&y, int(v));
    let y1 = Polynomial::variable(&y, 0);
    let y2 = Polynomial::variable(&y, 1);
    let h = &c(1) - &y2;
    let g = &(&c(2) - &y1) - &y2;
    let d = &c(2) - &y2;
    let d2 = d.pow(2);
    let f = |num: Polynomial, den: &Polynomial| {
        RationalFunction::new(num, den.clone()).expect("nonzero denominator")
    };
    let functions = vec![
        f(&h * &g.pow(2), &d2),
        f(&(&y1 * &h) * &g.scale(&int(2)), &d2),
        f(&y1.pow(2) * &h, &d2),
        f(&y1 * &y2, &d),
        f(&y2 * &g, &d),
    ];
    BlendingSystem::new(
        trapezoid(),
        trapezoid_weights(),
        functions,
        BlendingKind::Custom,
        y,
    )
    .expect("consistent system")
}

/// Horn pair of the independence model on the square.
pub fn square_horn_pair() -> HornPair {
    HornPair::from_integers(
        vec![
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![-1, -1, -1, -1],
            vec![-1, -1, -1, -1],
        ],
        &[1, 1, 1, 1],
    )
    .expect("valid pair")
}

/// Horn pair of the trapezoid model, columns in configuration order.
pub fn trapezoid_horn_pair() -> HornPair {
    HornPair::from_integers(
        vec![
            vec![0, 1, 2, 1, 0],
            vec![0, 0, 0, 1, 1],
            vec![2, 1, 0, 0, 1],
            vec![1, 1, 1, 0, 0],
            vec![-1, -1, -1, -1, -1],
            vec![-2, -2, -2, -1, -1],
        ],
        &[-1, -2, -1, 1, 1],
    )
    .expect("valid pair")
}

/// Horn pair of the square-trapezoid fiber product.
pub fn tfp_horn_pair_example() -> HornPair {
    tfp_horn_pair(
        &square_horn_pair(),
        &trapezoid_horn_pair(),
        2,
        &square_grading(),
        &trapezoid_grading(),
    )
    .expect("consistent blocks")
}
