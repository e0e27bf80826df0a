//! Laurent polynomials, rational functions, function subspaces and variety models.

mod model;
mod rational;
mod subspace;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use model::VarietyModel;
pub use rational::RationalFunction;
pub use subspace::{FunctionSubspace, DEFAULT_DIMENSION_CAP};
pub(crate) use subspace::Echelon;

/// A point of Z^n, identified with the monomial x^m.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(arity: usize) -> Self {
        ExponentVector(vec![0; arity])
    }

    pub fn unit(arity: usize, i: usize) -> Self {
        let mut v = vec![0; arity];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.arity(), rhs.arity());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.arity(), rhs.arity());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        ExponentVector(v.to_vec())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Finite Q-combination of monomials in `arity` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    arity: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl LaurentPolynomial {
    pub fn zero(arity: usize) -> Self {
        LaurentPolynomial { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, BigRational::one())
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        Self::monomial(ExponentVector::zero(arity), c)
    }

    pub fn monomial(exp: ExponentVector, coef: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        let arity = exp.arity();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        LaurentPolynomial { arity, terms }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (ExponentVector, BigRational)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: e.arity() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_i64(arity: usize, terms: &[(i64, &[i64])]) -> Result<Self> {
        Self::from_terms(
            arity,
            terms.iter().map(|(c, e)| (ExponentVector::from(*e), BigRational::from_integer((*c).into()))),
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentVector> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExponentVector) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The only term of a monomial.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The largest exponent in the canonical (lexicographic) order.
    pub(crate) fn canonical_last(&self) -> Option<(&ExponentVector, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn canonical_first(&self) -> Option<(&ExponentVector, &BigRational)> {
        self.terms.iter().next()
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    /// `self -= c * other`, in place.
    pub(crate) fn sub_scaled(&mut self, c: &BigRational, other: &Self) {
        for (e, d) in &other.terms {
            self.add_term(e.clone(), -(c * d));
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.arity);
        }
        LaurentPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Multiplication by the monomial x^e.
    pub fn shift(&self, e: &ExponentVector) -> Self {
        LaurentPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Componentwise minimum over the support; `None` for zero.
    pub fn min_exponents(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.meet(e)))
    }

    /// Evaluation at a rational point with nonzero coordinates where needed.
    pub fn eval(&self, x: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: x.len() });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e.entries()) {
                if k < 0 && xi.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                t *= num_traits::pow::Pow::pow(xi, k as i32);
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.entries().iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn unit_times_inverse() {
        let x = LaurentPolynomial::from_i64(1, &[(1, &[1])]).unwrap();
        let xi = LaurentPolynomial::from_i64(1, &[(1, &[-1])]).unwrap();
        assert_eq!(x.mul(&xi), LaurentPolynomial::one(1));
    }

    #[test]
    fn difference_of_squares() {
        let a = LaurentPolynomial::from_i64(1, &[(1, &[0]), (1, &[1])]).unwrap();
        let b = LaurentPolynomial::from_i64(1, &[(1, &[0]), (-1, &[1])]).unwrap();
        let expected = LaurentPolynomial::from_i64(1, &[(1, &[0]), (-1, &[2])]).unwrap();
        assert_eq!(a.mul(&b), expected);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = LaurentPolynomial::from_i64(2, &[(2, &[1, 0]), (-2, &[1, 0]), (3, &[0, 1])]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&ExponentVector::from(vec![0, 1])), rat(3));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let p = LaurentPolynomial::from_i64(2, &[(1, &[0, 0]), (2, &[1, -1]), (-1, &[0, 2])]).unwrap();
        let mut r = LaurentPolynomial::one(2);
        for _ in 0..5 {
            r = r.mul(&p);
        }
        assert_eq!(p.pow(5), r);
    }

    #[test]
    fn arity_checked() {
        assert!(matches!(
            LaurentPolynomial::from_i64(2, &[(1, &[1])]),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn evaluation() {
        let p = LaurentPolynomial::from_i64(2, &[(3, &[2, -1]), (1, &[0, 0])]).unwrap();
        assert_eq!(p.eval(&[rat(2), rat(4)]).unwrap(), rat(4));
        assert_eq!(p.eval(&[rat(2), rat(0)]), Err(Error::DivisionByZero));
    }
}
