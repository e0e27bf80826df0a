//! Problem files: JSON input validated against `schema/problem.schema.json`.

use std::sync::OnceLock;

use jsonschema::JSONSchema;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use okounkov::exact::{format_rational, parse_rational};
use okounkov::{ExponentVector, LaurentPolynomial, Polytope, RationalFunction, TermOrder, VarietyModel};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const PROBLEM_SCHEMA: &str = include_str!("../../../schema/problem.schema.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub coef: String,
    pub exp: Vec<i64>,
}

pub type PolynomialSpec = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFunctionSpec {
    pub numerator: PolynomialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<PolynomialSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Torus { arity: usize },
    Affine { arity: usize },
    Parametrized { parameters: usize, coordinates: Vec<RationalFunctionSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SubspaceSpec {
    Monomials(Vec<Vec<i64>>),
    Polynomials(Vec<PolynomialSpec>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedOrder {
    Lex,
    Grlex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderSpec {
    Named(NamedOrder),
    Matrix { weights: Vec<Vec<i64>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDegrees {
    pub mapping_degree: u64,
    pub mu: u64,
}

/// Vertex list with rational coordinates.
pub type PolytopeSpec = Vec<Vec<String>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping_degree: Option<u64>,
    /// Curve: the point a of ord_{t=a}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<CurveDegrees>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bodies: Option<Vec<PolytopeSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supports: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<PolynomialSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
}

fn compiled(source: &'static str, cell: &'static OnceLock<JSONSchema>) -> &'static JSONSchema {
    cell.get_or_init(|| {
        let schema: Value = serde_json::from_str(source).expect("bundled schema is valid JSON");
        JSONSchema::compile(&schema).expect("bundled schema compiles")
    })
}

/// Validates `instance` against a bundled schema, collecting every violation.
pub fn validate(source: &'static str, cell: &'static OnceLock<JSONSchema>, instance: &Value) -> Result<(), CliError> {
    let schema = compiled(source, cell);
    if let Err(errors) = schema.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{}: {}", e.instance_path, e)).collect();
        return Err(CliError::Validation(format!("schema violation: {}", msgs.join("; "))));
    }
    Ok(())
}

static PROBLEM: OnceLock<JSONSchema> = OnceLock::new();

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("malformed JSON: {e}")))?;
        validate(PROBLEM_SCHEMA, &PROBLEM, &value)?;
        let p: ProblemFile = serde_json::from_value(value).map_err(|e| CliError::Validation(e.to_string()))?;
        if p.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!("unsupported schema_version {}", p.schema_version)));
        }
        Ok(p)
    }

    pub fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        field.as_ref().ok_or_else(|| CliError::Validation(format!("missing field `{name}`")))
    }

    pub fn model(&self) -> Result<VarietyModel, CliError> {
        match Self::require(&self.model, "model")? {
            ModelSpec::Torus { arity } => Ok(VarietyModel::Torus(*arity)),
            ModelSpec::Affine { arity } => Ok(VarietyModel::Affine(*arity)),
            ModelSpec::Parametrized { parameters, coordinates } => {
                let coords = coordinates.iter().map(|c| rational_function(c, *parameters)).collect::<Result<Vec<_>, _>>()?;
                Ok(VarietyModel::parametrized(*parameters, coords)?)
            }
        }
    }

    /// Spanning functions written in the model's coordinates.
    pub fn subspace(&self, model: &VarietyModel) -> Result<Vec<LaurentPolynomial>, CliError> {
        let arity = model.coordinate_count();
        match Self::require(&self.subspace, "subspace")? {
            SubspaceSpec::Monomials(exps) => exps
                .iter()
                .map(|e| {
                    check_len(e.len(), arity)?;
                    Ok(LaurentPolynomial::monomial(ExponentVector::from(e.clone()), BigRational::from_integer(1.into())))
                })
                .collect(),
            SubspaceSpec::Polynomials(polys) => polys.iter().map(|p| polynomial(p, arity)).collect(),
        }
    }

    /// Term order of the given arity; grlex when the file names none.
    pub fn order(&self, arity: usize) -> Result<TermOrder, CliError> {
        match &self.order {
            None | Some(OrderSpec::Named(NamedOrder::Grlex)) => Ok(TermOrder::grlex(arity)),
            Some(OrderSpec::Named(NamedOrder::Lex)) => Ok(TermOrder::lex(arity)),
            Some(OrderSpec::Matrix { weights }) => {
                let order = TermOrder::new(weights.clone())?;
                check_len(order.arity(), arity)?;
                Ok(order)
            }
        }
    }

    pub fn bodies(&self) -> Result<Vec<Polytope>, CliError> {
        Self::require(&self.bodies, "bodies")?.iter().map(polytope).collect()
    }
}

fn check_len(found: usize, expected: usize) -> Result<(), CliError> {
    if found != expected {
        return Err(okounkov::Error::ArityMismatch { expected, found }.into());
    }
    Ok(())
}

pub fn rational(s: &str) -> Result<BigRational, CliError> {
    Ok(parse_rational(s)?)
}

pub fn polynomial(spec: &PolynomialSpec, arity: usize) -> Result<LaurentPolynomial, CliError> {
    let terms = spec
        .iter()
        .map(|t| {
            check_len(t.exp.len(), arity)?;
            Ok((ExponentVector::from(t.exp.clone()), rational(&t.coef)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(LaurentPolynomial::from_terms(arity, terms)?)
}

fn rational_function(spec: &RationalFunctionSpec, arity: usize) -> Result<RationalFunction, CliError> {
    let num = polynomial(&spec.numerator, arity)?;
    match &spec.denominator {
        None => Ok(RationalFunction::from_polynomial(num)),
        Some(d) => Ok(RationalFunction::new(num, polynomial(d, arity)?)?),
    }
}

pub fn polytope(spec: &PolytopeSpec) -> Result<Polytope, CliError> {
    let pts = spec.iter().map(|v| v.iter().map(|c| rational(c)).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(Polytope::hull(&pts)?)
}

/// Term list of a polynomial, in the input format.
pub fn polynomial_spec(p: &LaurentPolynomial) -> PolynomialSpec {
    p.terms().map(|(e, c)| Term { coef: format_rational(c), exp: e.entries().to_vec() }).collect()
}
