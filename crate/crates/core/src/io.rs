//! JSON file formats.
//!
//! Rationals are strings `"p/q"`. A polynomial is a list of
//! `[coefficient, exponents]` pairs, leading term first; a rational function is
//! `{"num": poly, "den": poly}` with `den` defaulting to 1.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::rational::{format_rational, parse_rational};
use crate::arith::{numbered_vars, Polynomial, Rational, RationalFunction};
use crate::blending::{toric_blending_in, BlendingKind, BlendingSystem, WeightVector};
use crate::geometry::{convex_hull_facets, LatticePolytope, PointConfiguration};
use crate::horn::{HornMatrix, HornPair};
use crate::tfp::{multigrading, GradedConfiguration, Multigrading};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },
}

fn schema(field: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Schema {
        field: field.into(),
        message: message.to_string(),
    }
}

fn typed<T: DeserializeOwned>(v: Value) -> Result<T, IoError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        schema(
            if path == "." { String::new() } else { path },
            e.into_inner(),
        )
    })
}

type RawPoly = Vec<(String, Vec<u32>)>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    dim: Option<usize>,
    points: Vec<Vec<i64>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRatFun {
    num: RawPoly,
    #[serde(default)]
    den: Option<RawPoly>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlending {
    config: RawConfig,
    weights: Vec<String>,
    #[serde(default)]
    functions: Option<Vec<RawRatFun>>,
    #[serde(default)]
    kind: Option<BlendingKind>,
    #[serde(default)]
    variables: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrading {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    assignment: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraded {
    config: RawConfig,
    #[serde(default)]
    weights: Option<Vec<String>>,
    grading: RawGrading,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGradingFile {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    assignment_b: Vec<usize>,
    assignment_c: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHorn {
    #[serde(rename = "H")]
    h: Vec<Vec<i64>>,
    lambda: Vec<String>,
    #[serde(default)]
    column_labels: Option<Vec<String>>,
}

/// A configuration with weights and a grading by the degrees `A`.
#[derive(Debug, Clone)]
pub struct GradedModel {
    pub config: PointConfiguration,
    pub weights: WeightVector,
    pub degrees: PointConfiguration,
    pub assignment: Vec<usize>,
}

impl GradedModel {
    pub fn graded(&self) -> Result<GradedConfiguration, crate::tfp::TfpError> {
        GradedConfiguration::new(
            self.config.clone(),
            self.assignment.clone(),
            self.degrees.len(),
        )
    }

    /// Toric blending functions of the model over `x1, x2, ...`.
    pub fn toric_system(&self) -> Result<BlendingSystem, crate::Error> {
        let poly = convex_hull_facets(&self.config)?;
        Ok(toric_blending_in(
            &poly,
            &self.config,
            &self.weights,
            numbered_vars("x", self.config.dim()),
        )?)
    }
}

/// Degrees and the class assignments of both factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingSpec {
    pub degrees: PointConfiguration,
    pub assignment_b: Vec<usize>,
    pub assignment_c: Vec<usize>,
}

impl GradingSpec {
    pub fn validate(
        &self,
        b: &PointConfiguration,
        c: &PointConfiguration,
    ) -> Result<Multigrading, crate::tfp::TfpError> {
        multigrading(
            b,
            self.assignment_b.clone(),
            c,
            self.assignment_c.clone(),
            &self.degrees,
        )
    }
}

/// Any of the supported input files, recognized by its keys.
#[derive(Debug, Clone)]
pub enum Model {
    Configuration(PointConfiguration),
    Graded(GradedModel),
    Blending(BlendingSystem),
    Horn(HornPair),
    Grading(GradingSpec),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Configuration(_) => "configuration",
            Model::Graded(_) => "graded model",
            Model::Blending(_) => "blending system",
            Model::Horn(_) => "Horn pair",
            Model::Grading(_) => "grading",
        }
    }

    pub fn config(&self) -> Option<&PointConfiguration> {
        match self {
            Model::Configuration(c) => Some(c),
            Model::Graded(g) => Some(&g.config),
            Model::Blending(s) => Some(s.config()),
            Model::Horn(_) | Model::Grading(_) => None,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_model(path: &Path) -> Result<Model, IoError> {
    parse_model(&read_text(path)?)
}

pub fn parse_model(text: &str) -> Result<Model, IoError> {
    let value: Value = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    model_from_value(value)
}

pub fn model_from_value(value: Value) -> Result<Model, IoError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("", "expected a JSON object"))?;
    let has = |k: &str| obj.contains_key(k);
    if has("H") {
        horn_from_value(value).map(Model::Horn)
    } else if has("assignment_b") {
        grading_from_value(value).map(Model::Grading)
    } else if has("grading") {
        graded_from_value(value).map(Model::Graded)
    } else if has("config") {
        blending_from_value(value).map(Model::Blending)
    } else if has("points") {
        configuration(typed(value)?, "").map(Model::Configuration)
    } else {
        Err(schema(
            "",
            "unrecognized file: expected keys `points`, `config`, `grading`, `H` or `assignment_b`",
        ))
    }
}

fn prefixed(prefix: &str, field: &str) -> String {
    if prefix.is_empty() {
        field.to_string()
    } else {
        format!("{prefix}.{field}")
    }
}

fn configuration(raw: RawConfig, at: &str) -> Result<PointConfiguration, IoError> {
    let dim = match raw.dim {
        Some(d) => d,
        None => raw
            .points
            .first()
            .map(Vec::len)
            .ok_or_else(|| schema(prefixed(at, "points"), "configuration has no points"))?,
    };
    let mut config = PointConfiguration::new(dim, raw.points).map_err(|e| {
        let field = match &e {
            crate::geometry::GeometryError::DimensionMismatch { index, .. } => {
                format!("points[{index}]")
            }
            crate::geometry::GeometryError::ZeroDimension => "dim".to_string(),
            _ => "points".to_string(),
        };
        schema(prefixed(at, &field), e)
    })?;
    if let Some(labels) = raw.labels {
        config = config
            .with_labels(labels)
            .map_err(|e| schema(prefixed(at, "labels"), e))?;
    }
    config
        .validate()
        .map_err(|e| schema(prefixed(at, "points"), e))
}

fn rationals(raw: &[String], field: &str) -> Result<Vec<Rational>, IoError> {
    raw.iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| schema(format!("{field}[{i}]"), e)))
        .collect()
}

fn weights(raw: &[String], n: usize, field: &str) -> Result<WeightVector, IoError> {
    let w = rationals(raw, field)?;
    if w.len() != n {
        return Err(schema(field, format!("{} weights for {n} points", w.len())));
    }
    WeightVector::new(w).map_err(|e| match e {
        crate::blending::BlendingError::NonPositiveWeight { index } => {
            schema(format!("{field}[{index}]"), "weight must be positive")
        }
        other => schema(field, other),
    })
}

fn polynomial(raw: &RawPoly, vars: &[String], field: &str) -> Result<Polynomial, IoError> {
    let mut terms = Vec::with_capacity(raw.len());
    for (i, (c, e)) in raw.iter().enumerate() {
        let c = parse_rational(c).map_err(|err| schema(format!("{field}[{i}][0]"), err))?;
        if e.len() != vars.len() {
            return Err(schema(
                format!("{field}[{i}][1]"),
                format!("{} exponents for {} variables", e.len(), vars.len()),
            ));
        }
        terms.push((c, e.clone()));
    }
    Polynomial::from_terms(vars, terms).map_err(|e| schema(field, e))
}

fn blending_from_value(value: Value) -> Result<BlendingSystem, IoError> {
    let raw: RawBlending = typed(value)?;
    let config = configuration(raw.config, "config")?;
    let w = weights(&raw.weights, config.len(), "weights")?;
    let vars = match raw.variables {
        Some(v) if v.len() == config.dim() => v,
        Some(v) => {
            return Err(schema(
                "variables",
                format!("{} names for dimension {}", v.len(), config.dim()),
            ))
        }
        None => numbered_vars("x", config.dim()),
    };
    let kind = raw.kind.unwrap_or(if raw.functions.is_some() {
        BlendingKind::Custom
    } else {
        BlendingKind::Toric
    });
    let Some(funcs) = raw.functions else {
        if kind != BlendingKind::Toric {
            return Err(schema("functions", "required for custom systems"));
        }
        let poly = convex_hull_facets(&config).map_err(|e| schema("config", e))?;
        return toric_blending_in(&poly, &config, &w, vars).map_err(|e| schema("config", e));
    };
    let functions = funcs
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let at = format!("functions[{i}]");
            let num = polynomial(&f.num, &vars, &format!("{at}.num"))?;
            let den = match &f.den {
                Some(d) => polynomial(d, &vars, &format!("{at}.den"))?,
                None => Polynomial::one(&vars),
            };
            RationalFunction::new(num, den).map_err(|e| schema(format!("{at}.den"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    BlendingSystem::new(config, w, functions, kind, vars).map_err(|e| schema("functions", e))
}

fn degrees(a: Vec<Vec<i64>>, field: &str) -> Result<PointConfiguration, IoError> {
    configuration(
        RawConfig {
            dim: None,
            points: a,
            labels: None,
        },
        "",
    )
    .map_err(|e| match e {
        IoError::Schema { message, .. } => schema(field, message),
        other => other,
    })
}

fn graded_from_value(value: Value) -> Result<GradedModel, IoError> {
    let raw: RawGraded = typed(value)?;
    let config = configuration(raw.config, "config")?;
    let weights = match raw.weights {
        Some(w) => weights(&w, config.len(), "weights")?,
        None => WeightVector::ones(config.len()),
    };
    let degrees = degrees(raw.grading.a, "grading.A")?;
    let model = GradedModel {
        config,
        weights,
        degrees,
        assignment: raw.grading.assignment,
    };
    model
        .graded()
        .map_err(|e| schema("grading.assignment", e))?;
    Ok(model)
}

fn grading_from_value(value: Value) -> Result<GradingSpec, IoError> {
    let raw: RawGradingFile = typed(value)?;
    Ok(GradingSpec {
        degrees: degrees(raw.a, "A")?,
        assignment_b: raw.assignment_b,
        assignment_c: raw.assignment_c,
    })
}

fn horn_from_value(value: Value) -> Result<HornPair, IoError> {
    let raw: RawHorn = typed(value)?;
    let lambda = rationals(&raw.lambda, "lambda")?;
    let h = HornMatrix::new(raw.h).map_err(|e| schema("H", e))?;
    let mut pair = HornPair::new(h, lambda).map_err(|e| schema("lambda", e))?;
    if let Some(labels) = raw.column_labels {
        pair = pair
            .with_labels(labels)
            .map_err(|e| schema("column_labels", e))?;
    }
    Ok(pair)
}

/// Typed loaders with a clear error when the file holds something else.
pub fn expect_blending(model: Model) -> Result<BlendingSystem, IoError> {
    match model {
        Model::Blending(s) => Ok(s),
        Model::Graded(g) => g.toric_system().map_err(|e| schema("", e)),
        other => Err(schema(
            "",
            format!("expected a blending system, found a {}", other.kind()),
        )),
    }
}

pub fn expect_horn(model: Model) -> Result<HornPair, IoError> {
    match model {
        Model::Horn(p) => Ok(p),
        other => Err(schema(
            "",
            format!("expected a Horn pair, found a {}", other.kind()),
        )),
    }
}

pub fn expect_grading(model: Model) -> Result<GradingSpec, IoError> {
    match model {
        Model::Grading(g) => Ok(g),
        other => Err(schema(
            "",
            format!("expected a grading, found a {}", other.kind()),
        )),
    }
}

pub fn configuration_json(config: &PointConfiguration) -> Value {
    let mut m = Map::new();
    m.insert("dim".into(), json!(config.dim()));
    m.insert("points".into(), json!(config.points()));
    if let Some(l) = config.labels() {
        m.insert("labels".into(), json!(l));
    }
    Value::Object(m)
}

pub fn polytope_json(poly: &LatticePolytope) -> Value {
    let facets: Vec<Value> = poly
        .facets()
        .iter()
        .map(|f| json!({"normal": f.normal, "offset": f.offset}))
        .collect();
    json!({"facets": facets, "vertices": poly.vertices()})
}

pub fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(
        v.iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
    )
}

pub fn polynomial_json(p: &Polynomial) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!([format_rational(c), m.exponents()]))
            .collect(),
    )
}

pub fn ratfun_json(f: &RationalFunction) -> Value {
    json!({"num": polynomial_json(f.num()), "den": polynomial_json(f.den())})
}

pub fn blending_json(sys: &BlendingSystem) -> Value {
    json!({
        "config": configuration_json(sys.config()),
        "weights": rationals_json(sys.weights().as_slice()),
        "functions": sys.functions().iter().map(ratfun_json).collect::<Vec<_>>(),
        "kind": sys.kind(),
        "variables": sys.vars(),
    })
}

pub fn horn_json(pair: &HornPair) -> Value {
    let mut m = Map::new();
    m.insert("H".into(), json!(pair.matrix().rows()));
    m.insert("lambda".into(), rationals_json(pair.lambda()));
    if let Some(l) = pair.matrix().column_labels() {
        m.insert("column_labels".into(), json!(l));
    }
    Value::Object(m)
}

pub fn grading_json(spec: &GradingSpec) -> Value {
    json!({
        "A": spec.degrees.points(),
        "assignment_b": spec.assignment_b,
        "assignment_c": spec.assignment_c,
    })
}

pub fn graded_json(model: &GradedModel) -> Value {
    json!({
        "config": configuration_json(&model.config),
        "weights": rationals_json(model.weights.as_slice()),
        "grading": {"A": model.degrees.points(), "assignment": model.assignment},
    })
}
