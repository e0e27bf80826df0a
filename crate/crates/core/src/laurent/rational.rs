use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{ExponentVector, LaurentPolynomial};
use crate::error::{Error, Result};

/// A quotient P/Q of Laurent polynomials.
///
/// Normal form: Q has no monomial factor (its componentwise minimum exponent
/// is zero) and its lexicographically largest coefficient is 1. A zero
/// numerator forces Q = 1. No polynomial gcd is taken, so equality is decided
/// by cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction {
    num: LaurentPolynomial,
    den: LaurentPolynomial,
}

impl RationalFunction {
    pub fn new(num: LaurentPolynomial, den: LaurentPolynomial) -> Result<Self> {
        if num.arity() != den.arity() {
            return Err(Error::ArityMismatch { expected: num.arity(), found: den.arity() });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_polynomial(p: LaurentPolynomial) -> Self {
        let arity = p.arity();
        RationalFunction { num: p, den: LaurentPolynomial::one(arity) }
    }

    pub fn monomial(e: ExponentVector) -> Self {
        Self::from_polynomial(LaurentPolynomial::monomial(e, BigRational::one()))
    }

    fn normalized(num: LaurentPolynomial, den: LaurentPolynomial) -> Self {
        let arity = num.arity();
        if num.is_zero() {
            return RationalFunction { num, den: LaurentPolynomial::one(arity) };
        }
        let m = -&den.min_exponents().expect("nonzero denominator");
        let (num, den) = if m.is_zero() { (num, den) } else { (num.shift(&m), den.shift(&m)) };
        let lead = den.canonical_last().expect("nonzero denominator").1.clone();
        if lead.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lead.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is the constant 1.
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den == LaurentPolynomial::one(self.arity())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        Self::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::normalized(self.num.scale(s), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let k = u32::try_from(k.unsigned_abs()).map_err(|_| Error::invalid("exponent too large"))?;
        Ok(Self::normalized(base.num.pow(k), base.den.pow(k)))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.arity() == other.arity()
            && (self.den == other.den && self.num == other.num
                || self.num.mul(&other.den) == other.num.mul(&self.den))
    }
}

impl Eq for RationalFunction {}

impl From<LaurentPolynomial> for RationalFunction {
    fn from(p: LaurentPolynomial) -> Self {
        Self::from_polynomial(p)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
