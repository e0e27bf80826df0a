use num_rational::BigRational;

use super::Polytope;
use crate::error::{Error, Result};

/// Polytope with floating-point vertices, produced by offsetting facets.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPolytope {
    arity: usize,
    vertices: Vec<Vec<f64>>,
}

impl FloatPolytope {
    pub fn new(arity: usize, vertices: Vec<Vec<f64>>) -> Self {
        FloatPolytope { arity, vertices }
    }

    pub fn empty(arity: usize) -> Self {
        FloatPolytope { arity, vertices: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Exact hull of the (dyadic) vertex coordinates.
    pub fn to_exact(&self) -> Result<Option<Polytope>> {
        if self.vertices.is_empty() {
            return Ok(None);
        }
        let pts = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&x| BigRational::from_float(x).ok_or_else(|| Error::invalid("non-finite coordinate")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Polytope::hull(&pts).map(Some)
    }

    pub fn volume(&self) -> Result<f64> {
        Ok(match self.to_exact()? {
            None => 0.0,
            Some(p) => crate::exact::to_f64(p.volume()),
        })
    }

    /// Pairwise vertex sums (a superset of the vertices of the sum).
    pub fn minkowski_points(&self, other: &FloatPolytope) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                out.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        out
    }
}
