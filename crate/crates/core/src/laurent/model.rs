use super::{FunctionSubspace, LaurentPolynomial, RationalFunction};
use crate::error::{Error, Result};

/// Where the functions live.
///
/// Torus and affine models use their own coordinates. A parametrized model
/// is given by coordinate functions of `parameter_arity` parameters, and
/// functions written in those coordinates are pulled back to the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyModel {
    Torus(usize),
    Affine(usize),
    Parametrized { parameter_arity: usize, coordinates: Vec<RationalFunction> },
}

impl VarietyModel {
    pub fn parametrized(parameter_arity: usize, coordinates: Vec<RationalFunction>) -> Result<Self> {
        if coordinates.is_empty() {
            return Err(Error::invalid("a parametrized model needs at least one coordinate function"));
        }
        if let Some(f) = coordinates.iter().find(|f| f.arity() != parameter_arity) {
            return Err(Error::ArityMismatch { expected: parameter_arity, found: f.arity() });
        }
        Ok(VarietyModel::Parametrized { parameter_arity, coordinates })
    }

    /// Number of coordinates functions are written in.
    pub fn coordinate_count(&self) -> usize {
        match self {
            VarietyModel::Torus(n) | VarietyModel::Affine(n) => *n,
            VarietyModel::Parametrized { coordinates, .. } => coordinates.len(),
        }
    }

    /// Number of variables of pulled-back functions (the valuation arity).
    pub fn arity(&self) -> usize {
        match self {
            VarietyModel::Torus(n) | VarietyModel::Affine(n) => *n,
            VarietyModel::Parametrized { parameter_arity, .. } => *parameter_arity,
        }
    }

    pub fn requires_well_order(&self) -> bool {
        !matches!(self, VarietyModel::Torus(_))
    }

    pub fn pull_back(&self, expr: &LaurentPolynomial) -> Result<RationalFunction> {
        if expr.arity() != self.coordinate_count() {
            return Err(Error::ArityMismatch { expected: self.coordinate_count(), found: expr.arity() });
        }
        let coordinates = match self {
            VarietyModel::Torus(_) | VarietyModel::Affine(_) => return Ok(RationalFunction::from(expr.clone())),
            VarietyModel::Parametrized { coordinates, .. } => coordinates,
        };
        let m = self.arity();
        let c = coordinates.len();
        // x_i = p_i/q_i; clear denominators with prod p_i^{b_i} q_i^{a_i}
        let mut pos = vec![0i64; c];
        let mut neg = vec![0i64; c];
        for e in expr.support() {
            for (i, &k) in e.entries().iter().enumerate() {
                pos[i] = pos[i].max(k);
                neg[i] = neg[i].max(-k);
            }
        }
        for (i, f) in coordinates.iter().enumerate() {
            if neg[i] > 0 && f.is_zero() {
                return Err(Error::DivisionByZero);
            }
        }
        let power = |p: &LaurentPolynomial, k: i64| p.pow(u32::try_from(k).expect("exponent fits in u32"));
        let mut num = LaurentPolynomial::zero(m);
        for (e, coef) in expr.terms() {
            let mut t = LaurentPolynomial::constant(m, coef.clone());
            for (i, f) in coordinates.iter().enumerate() {
                let k = e.entries()[i];
                t = t.mul(&power(f.numerator(), k + neg[i])).mul(&power(f.denominator(), pos[i] - k));
            }
            num = num.add(&t);
        }
        let mut den = LaurentPolynomial::one(m);
        for (i, f) in coordinates.iter().enumerate() {
            den = den.mul(&power(f.numerator(), neg[i])).mul(&power(f.denominator(), pos[i]));
        }
        RationalFunction::new(num, den)
    }

    /// Pulls back every function and spans them.
    pub fn pull_back_subspace(&self, exprs: &[LaurentPolynomial]) -> Result<FunctionSubspace> {
        let fs = exprs.iter().map(|e| self.pull_back(e)).collect::<Result<Vec<_>>>()?;
        FunctionSubspace::new(self.arity(), fs)
    }

    /// Pulls back rational expressions P/Q in the coordinates.
    pub fn pull_back_rational(&self, f: &RationalFunction) -> Result<RationalFunction> {
        let num = self.pull_back(f.numerator())?;
        let den = self.pull_back(f.denominator())?;
        num.div(&den)
    }
}
