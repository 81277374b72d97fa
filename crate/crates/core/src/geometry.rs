//! Lattice point configurations and the polytopes they span.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{numbered_vars, Polynomial, Rational};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("configuration has no points")]
    Empty,
    #[error("{found} labels given for {expected} points")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("points span an affine space of dimension {affine_dim}, expected {dim}")]
    NotFullDimensional { affine_dim: usize, dim: usize },
}

/// An ordered list of integer points, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfiguration {
    dim: usize,
    points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl PointConfiguration {
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(GeometryError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        Ok(PointConfiguration {
            dim,
            points,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GeometryError> {
        if labels.len() != self.points.len() {
            return Err(GeometryError::LabelCount {
                expected: self.points.len(),
                found: labels.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(GeometryError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Re-checks the invariants of a deserialized value.
    pub fn validate(self) -> Result<Self, GeometryError> {
        let labels = self.labels.clone();
        let c = Self::new(self.dim, self.points)?;
        match labels {
            Some(l) => c.with_labels(l),
            None => Ok(c),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The label of point `i`, or its coordinates when unlabelled.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("({})", self.points[i].iter().join(",")),
        }
    }

    pub fn rational_point(&self, i: usize) -> Vec<Rational> {
        self.points[i]
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    /// Dimension of the affine span of the points.
    pub fn affine_dimension(&self) -> usize {
        if self.points.is_empty() {
            return 0;
        }
        let base = &self.points[0];
        let diffs: Vec<Vec<i64>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        linalg::rank(&linalg::from_i64(&diffs), self.dim)
    }

    /// The same configuration with point `perm[i]` placed at position `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        PointConfiguration {
            dim: self.dim,
            points: perm.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| perm.iter().map(|&i| l[i].clone()).collect()),
        }
    }
}

/// Inequality `<p, normal> + offset >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    /// Lattice distance of an integer point to the facet hyperplane.
    pub fn distance(&self, p: &[i64]) -> i64 {
        self.normal.iter().zip(p).map(|(n, x)| n * x).sum::<i64>() + self.offset
    }

    pub fn distance_rational(&self, p: &[Rational]) -> Rational {
        let s: Rational = self
            .normal
            .iter()
            .zip(p)
            .map(|(n, x)| x * Rational::from_integer((*n).into()))
            .sum();
        s + Rational::from_integer(self.offset.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vec<i64>>,
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.facets.iter().all(|f| f.distance(p) >= 0)
    }

    /// Facet indices whose hyperplane contains `p`.
    pub fn tight_facets(&self, p: &[i64]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].distance(p) == 0)
            .collect()
    }
}

fn primitive_i64(v: &[Rational]) -> Vec<i64> {
    crate::arith::rational::primitive_integer_vector(v)
        .iter()
        .map(|x: &BigInt| x.to_i64().expect("normal fits in i64"))
        .collect()
}

/// Facets and vertices of the convex hull of a full-dimensional configuration.
///
/// Every `d`-subset of points spanning a hyperplane is tested as a supporting
/// hyperplane. Facets are sorted by offset, then by the absolute values of
/// the normal in decreasing lexicographic order (then by the normal itself),
/// which for the unit square gives `x1, x2, 1-x1, 1-x2`.
pub fn convex_hull_facets(config: &PointConfiguration) -> Result<LatticePolytope, GeometryError> {
    if config.is_empty() {
        return Err(GeometryError::Empty);
    }
    let d = config.dim();
    let affine_dim = config.affine_dimension();
    if affine_dim < d {
        return Err(GeometryError::NotFullDimensional { affine_dim, dim: d });
    }
    let pts: Vec<Vec<i64>> = config
        .points()
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut facets = BTreeSet::new();
    for subset in (0..pts.len()).combinations(d) {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<i64>> = subset[1..]
            .iter()
            .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let m = linalg::from_i64(&diffs);
        let ker = linalg::kernel(&m, d);
        if ker.len() != 1 {
            continue;
        }
        let normal = primitive_i64(&ker[0]);
        let offset = -normal.iter().zip(base).map(|(n, x)| n * x).sum::<i64>();
        let mut f = Facet { normal, offset };
        let dists: Vec<i64> = pts.iter().map(|p| f.distance(p)).collect();
        if dists.iter().all(|&x| x >= 0) {
        } else if dists.iter().all(|&x| x <= 0) {
            f = Facet {
                normal: f.normal.iter().map(|x| -x).collect(),
                offset: -f.offset,
            };
        } else {
            continue;
        }
        facets.insert(f);
    }
    let mut facets: Vec<Facet> = facets.into_iter().collect();
    facets.sort_by(|a, b| {
        let abs = |f: &Facet| f.normal.iter().map(|x| x.abs()).collect::<Vec<_>>();
        a.offset
            .cmp(&b.offset)
            .then_with(|| abs(b).cmp(&abs(a)))
            .then_with(|| b.normal.cmp(&a.normal))
    });

    let vertices = pts
        .iter()
        .filter(|p| {
            let tight: Vec<Vec<i64>> = facets
                .iter()
                .filter(|f| f.distance(p) == 0)
                .map(|f| f.normal.clone())
                .collect();
            linalg::rank(&linalg::from_i64(&tight), d) == d
        })
        .cloned()
        .collect();
    Ok(LatticePolytope {
        dim: d,
        facets,
        vertices,
    })
}

/// The affine forms `h_i(x) = <x, n_i> + a_i` over variables `x1..xd`.
pub fn lattice_distance_forms(poly: &LatticePolytope) -> Vec<Polynomial> {
    lattice_distance_forms_in(poly, &numbered_vars("x", poly.dim()))
}

pub fn lattice_distance_forms_in(poly: &LatticePolytope, vars: &[String]) -> Vec<Polynomial> {
    poly.facets()
        .iter()
        .map(|f| {
            let coeffs: Vec<Rational> = f
                .normal
                .iter()
                .map(|&n| Rational::from_integer(n.into()))
                .collect();
            Polynomial::affine(vars, &coeffs, Rational::from_integer(f.offset.into()))
        })
        .collect()
}

/// All integer points of the polytope, in lexicographic order.
pub fn lattice_points(poly: &LatticePolytope) -> PointConfiguration {
    let d = poly.dim();
    let lo: Vec<i64> = (0..d)
        .map(|k| poly.vertices().iter().map(|v| v[k]).min().unwrap_or(0))
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|k| poly.vertices().iter().map(|v| v[k]).max().unwrap_or(0))
        .collect();
    let points: Vec<Vec<i64>> = (0..d)
        .map(|k| lo[k]..=hi[k])
        .multi_cartesian_product()
        .filter(|p| poly.contains(p))
        .collect();
    PointConfiguration::new(d, points).expect("consistent dimension")
}

/// Strictly positive convex combinations of `points`. The first sample is
/// the barycenter; the rest use coefficients drawn uniformly from `1..=64`
/// and normalized, so the output depends only on `(points, count, seed)`.
pub fn sample_convex_combinations(
    points: &[Vec<i64>],
    count: usize,
    seed: u64,
) -> Vec<Vec<Rational>> {
    if points.is_empty() {
        return Vec::new();
    }
    let d = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|s| {
            let weights: Vec<i64> = if s == 0 {
                vec![1; points.len()]
            } else {
                (0..points.len()).map(|_| rng.gen_range(1..=64)).collect()
            };
            let total: i64 = weights.iter().sum();
            (0..d)
                .map(|k| {
                    let num: i64 = points.iter().zip(&weights).map(|(p, w)| p[k] * w).sum();
                    Rational::new(num.into(), total.into())
                })
                .collect()
        })
        .collect()
}

/// Points of the relative interior of `conv(config)`.
pub fn sample_interior(config: &PointConfiguration, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    sample_convex_combinations(config.points(), count, seed)
}

/// Integer matrix whose columns are the configuration points, with a leading
/// row of ones when the all-ones vector is not already in the row span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignMatrix {
    rows: Vec<Vec<i64>>,
    ones_added: bool,
}

impl DesignMatrix {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn ones_added(&self) -> bool {
        self.ones_added
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn to_rational(&self) -> Matrix {
        linalg::from_i64(&self.rows)
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.to_rational(), v)
    }
}

pub fn design_matrix(config: &PointConfiguration) -> DesignMatrix {
    let n = config.len();
    let coords: Vec<Vec<i64>> = (0..config.dim())
        .map(|k| config.points().iter().map(|p| p[k]).collect())
        .collect();
    let base_rank = linalg::rank(&linalg::from_i64(&coords), n);
    let mut with_ones = vec![vec![1; n]];
    with_ones.extend(coords.iter().cloned());
    let ones_in_span = linalg::rank(&linalg::from_i64(&with_ones), n) == base_rank;
    if ones_in_span {
        DesignMatrix {
            rows: coords,
            ones_added: false,
        }
    } else {
        DesignMatrix {
            rows: with_ones,
            ones_added: true,
        }
    }
}

/// The affine span of a configuration, solved for a subset of coordinates.
///
/// Each dependent coordinate is written as an affine function of the free
/// ones; full-dimensional configurations have no dependent coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHull {
    dim: usize,
    /// `(coordinate, coefficients over all coordinates, constant)`
    dependent: Vec<(usize, Vec<Rational>, Rational)>,
}

impl AffineHull {
    pub fn of(config: &PointConfiguration) -> Self {
        let d = config.dim();
        let rows: Vec<Vec<i64>> = config
            .points()
            .iter()
            .map(|p| {
                let mut r = p.clone();
                r.push(1);
                r
            })
            .collect();
        let eqs = linalg::kernel(&linalg::from_i64(&rows), d + 1);
        if eqs.is_empty() {
            return AffineHull {
                dim: d,
                dependent: Vec::new(),
            };
        }
        let (r, pivots) = linalg::rref(&eqs, d + 1);
        let dependent = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p < d)
            .map(|(i, &p)| {
                let coeffs: Vec<Rational> = (0..d)
                    .map(|j| {
                        if j == p {
                            Rational::zero()
                        } else {
                            -r[i][j].clone()
                        }
                    })
                    .collect();
                (p, coeffs, -r[i][d].clone())
            })
            .collect();
        AffineHull { dim: d, dependent }
    }

    pub fn is_full(&self) -> bool {
        self.dependent.is_empty()
    }

    pub fn codimension(&self) -> usize {
        self.dependent.len()
    }

    /// Images of the coordinate variables under restriction to the hull:
    /// free variables map to themselves, dependent ones to their affine form.
    pub fn substitution(&self, vars: &[String]) -> Vec<Polynomial> {
        let mut images: Vec<Polynomial> = (0..self.dim)
            .map(|i| Polynomial::variable(vars, i))
            .collect();
        for (p, coeffs, c) in &self.dependent {
            images[*p] = Polynomial::affine(vars, coeffs, c.clone());
        }
        images
    }

    /// Restriction of a polynomial in the coordinate variables to the hull.
    pub fn restrict(&self, p: &Polynomial, vars: &[String]) -> Polynomial {
        if self.is_full() {
            return p.clone();
        }
        let p = p
            .with_vars(vars)
            .expect("polynomial over coordinate variables");
        p.compose(&self.substitution(vars))
            .expect("one image per variable")
    }
}
