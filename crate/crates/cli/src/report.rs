//! Report envelope, shared report pieces and CSV tables.

use std::path::Path;
use std::sync::OnceLock;

use jsonschema::JSONSchema;
use num_rational::BigRational;
use serde::Serialize;

use okounkov::exact::{format_rational, to_f64};
use okounkov::Polytope;

use crate::problem::{validate, SCHEMA_VERSION};
use crate::CliError;

pub const REPORT_SCHEMA: &str = include_str!("../../../schema/report.schema.json");

static REPORT: OnceLock<JSONSchema> = OnceLock::new();

/// Checks an emitted report against `schema/report.schema.json`.
pub fn validate_report(text: &str) -> Result<(), CliError> {
    let value = serde_json::from_str(text).map_err(|e| CliError::Validation(format!("malformed report: {e}")))?;
    validate(REPORT_SCHEMA, &REPORT, &value)
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema_version: u32,
    command: &'a str,
    report: &'a T,
}

/// A finished run: JSON text, CSV tables, a one-line summary and the verdict.
pub struct Output {
    pub json: String,
    pub tables: Vec<CsvTable>,
    pub summary: String,
    pub passed: bool,
}

impl Output {
    pub fn new<T: Serialize>(command: &str, report: &T, summary: String) -> Self {
        let envelope = Envelope { schema_version: SCHEMA_VERSION, command, report };
        let mut json = serde_json::to_string_pretty(&envelope).expect("reports serialize");
        json.push('\n');
        Output { json, tables: Vec::new(), summary, passed: true }
    }

    pub fn with_tables(mut self, tables: Vec<CsvTable>) -> Self {
        self.tables = tables;
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.passed = !failed;
        self
    }
}

pub fn q(x: &BigRational) -> String {
    format_rational(x)
}

pub fn point(p: &[BigRational]) -> Vec<String> {
    p.iter().map(q).collect()
}

#[derive(Serialize)]
pub struct PolytopeReport {
    pub arity: usize,
    pub affine_dimension: usize,
    pub vertices: Vec<Vec<String>>,
    pub volume: String,
    /// Volume normalized in the lattice of the affine span.
    pub lattice_volume: String,
}

impl PolytopeReport {
    pub fn new(p: &Polytope) -> Self {
        PolytopeReport {
            arity: p.arity(),
            affine_dimension: p.affine_dim(),
            vertices: p.vertices().iter().map(|v| point(v)).collect(),
            volume: q(p.volume()),
            lattice_volume: q(p.lattice_volume()),
        }
    }
}

pub struct CsvTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn write(&self, path: &Path) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Columns x, y (decimal) and x_exact, y_exact; y is empty on a line.
    /// Polygons are listed in cyclic order. None above dimension 2.
    pub fn vertices(name: impl Into<String>, p: &Polytope) -> Option<Self> {
        let verts = match p.arity() {
            1 => p.vertices().to_vec(),
            2 => p.polygon_cycle().unwrap_or_else(|| p.vertices().to_vec()),
            _ => return None,
        };
        let header = ["x", "y", "x_exact", "y_exact"].map(String::from).to_vec();
        let rows = verts
            .iter()
            .map(|v| {
                let y = v.get(1);
                vec![
                    to_f64(&v[0]).to_string(),
                    y.map(|c| to_f64(c).to_string()).unwrap_or_default(),
                    q(&v[0]),
                    y.map(q).unwrap_or_default(),
                ]
            })
            .collect();
        Some(CsvTable { name: name.into(), header, rows })
    }

    /// Columns d, h.
    pub fn hilbert(values: &[usize]) -> Self {
        CsvTable {
            name: "hilbert".into(),
            header: vec!["d".into(), "h".into()],
            rows: values.iter().enumerate().map(|(i, h)| vec![(i + 1).to_string(), h.to_string()]).collect(),
        }
    }
}
