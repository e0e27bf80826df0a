use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use super::{ExponentVector, LaurentPolynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::valuation::TermOrder;

/// Cap on dim L^k unless the caller sets another.
pub const DEFAULT_DIMENSION_CAP: usize = 20_000;

/// Incremental semi-echelon form: every stored row has a distinct lead term.
///
/// The lead is the minimal term under `order`, or the lexicographically
/// smallest exponent when no order is given. Rows inserted earlier act as
/// pivots for rows inserted later.
pub(crate) struct Echelon<'a> {
    order: Option<&'a TermOrder>,
    rows: HashMap<ExponentVector, LaurentPolynomial>,
    leads: Vec<ExponentVector>,
}

impl<'a> Echelon<'a> {
    pub(crate) fn new(order: Option<&'a TermOrder>) -> Self {
        Echelon { order, rows: HashMap::new(), leads: Vec::new() }
    }

    fn lead(&self, p: &LaurentPolynomial) -> Option<(ExponentVector, BigRational)> {
        match self.order {
            Some(o) => o.min_term(p).map(|(e, c)| (e.clone(), c.clone())),
            None => p.canonical_first().map(|(e, c)| (e.clone(), c.clone())),
        }
    }

    /// Cancels leads against stored rows until the lead is new or `p` vanishes.
    pub(crate) fn reduce(&self, mut p: LaurentPolynomial) -> LaurentPolynomial {
        while let Some((e, c)) = self.lead(&p) {
            let Some(row) = self.rows.get(&e) else {
                break;
            };
            let f = c / row.coeff(&e);
            p.sub_scaled(&f, row);
        }
        p
    }

    /// Returns the new lead when `p` is independent of the stored rows.
    pub(crate) fn insert(&mut self, p: LaurentPolynomial) -> Option<ExponentVector> {
        let r = self.reduce(p);
        let (e, _) = self.lead(&r)?;
        self.rows.insert(e.clone(), r);
        self.leads.push(e.clone());
        Some(e)
    }

    /// (lead, reduced row) in insertion order.
    pub(crate) fn into_rows(mut self) -> Vec<(ExponentVector, LaurentPolynomial)> {
        self.leads
            .iter()
            .map(|e| {
                let row = self.rows.remove(e).expect("lead recorded with its row");
                (e.clone(), row)
            })
            .collect()
    }
}

/// A nonzero finite-dimensional space of rational functions.
///
/// Stored over one common denominator Q as span{N_1/Q, ..., N_k/Q} with
/// linearly independent numerators, so `dim` is just the length.
#[derive(Clone)]
pub struct FunctionSubspace {
    arity: usize,
    denominator: LaurentPolynomial,
    numerators: Vec<LaurentPolynomial>,
}

impl FunctionSubspace {
    /// Span of `functions`; zero functions are ignored, dependent ones dropped.
    pub fn new(arity: usize, functions: Vec<RationalFunction>) -> Result<Self> {
        let mut dens: Vec<LaurentPolynomial> = Vec::new();
        let mut owner = Vec::new();
        let mut nums = Vec::new();
        for f in functions {
            if f.arity() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: f.arity() });
            }
            if f.is_zero() {
                continue;
            }
            let idx = match dens.iter().position(|d| d == f.denominator()) {
                Some(i) => i,
                None => {
                    dens.push(f.denominator().clone());
                    dens.len() - 1
                }
            };
            owner.push(idx);
            nums.push(f.numerator().clone());
        }
        let denominator = dens.iter().fold(LaurentPolynomial::one(arity), |acc, d| acc.mul(d));
        let numerators: Vec<LaurentPolynomial> = nums
            .into_iter()
            .zip(owner)
            .map(|(n, own)| {
                dens.iter().enumerate().filter(|(j, _)| *j != own).fold(n, |acc, (_, d)| acc.mul(d))
            })
            .collect();
        Self::from_parts(arity, denominator, numerators, usize::MAX)
    }

    pub fn from_polynomials(arity: usize, polys: Vec<LaurentPolynomial>) -> Result<Self> {
        Self::new(arity, polys.into_iter().map(RationalFunction::from).collect())
    }

    /// L(M) = span of the monomials x^m, m in `exps`.
    pub fn from_monomials(arity: usize, exps: &[ExponentVector]) -> Result<Self> {
        Self::new(arity, exps.iter().cloned().map(RationalFunction::monomial).collect())
    }

    /// Greedy independent selection, keeping the original numerators.
    fn from_parts(
        arity: usize,
        denominator: LaurentPolynomial,
        candidates: impl IntoIterator<Item = LaurentPolynomial>,
        cap: usize,
    ) -> Result<Self> {
        let mut ech = Echelon::new(None);
        let mut numerators = Vec::new();
        for p in candidates {
            if p.is_zero() {
                continue;
            }
            if ech.insert(p.clone()).is_some() {
                numerators.push(p);
                if numerators.len() > cap {
                    return Err(Error::DimensionCap { dim: numerators.len(), cap });
                }
            }
        }
        if numerators.is_empty() {
            return Err(Error::ZeroSubspace);
        }
        Ok(FunctionSubspace { arity, denominator, numerators })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn denominator(&self) -> &LaurentPolynomial {
        &self.denominator
    }

    pub fn numerators(&self) -> &[LaurentPolynomial] {
        &self.numerators
    }

    pub fn basis(&self) -> Vec<RationalFunction> {
        self.numerators
            .iter()
            .map(|n| RationalFunction::new(n.clone(), self.denominator.clone()).expect("nonzero denominator"))
            .collect()
    }

    /// True when every basis element is a monomial (up to a constant).
    pub fn is_monomial(&self) -> bool {
        self.denominator.as_monomial().is_some() && self.numerators.iter().all(|n| n.as_monomial().is_some())
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.product_capped(other, DEFAULT_DIMENSION_CAP)
    }

    pub fn product_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let denominator = self.denominator.mul(&other.denominator);
        let products = self.numerators.iter().flat_map(|a| other.numerators.iter().map(move |b| a.mul(b)));
        Self::from_parts(self.arity, denominator, products, cap)
    }

    pub fn power(&self, k: usize) -> Result<Self> {
        self.power_capped(k, DEFAULT_DIMENSION_CAP)
    }

    pub fn power_capped(&self, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("power exponent must be at least 1"));
        }
        Ok(self.powers_capped(k, cap)?.pop().expect("k >= 1"))
    }

    /// [L, L^2, ..., L^k].
    pub fn powers_capped(&self, k: usize, cap: usize) -> Result<Vec<Self>> {
        let mut out: Vec<Self> = Vec::with_capacity(k);
        if k == 0 {
            return Ok(out);
        }
        if self.dim() > cap {
            return Err(Error::DimensionCap { dim: self.dim(), cap });
        }
        out.push(self.clone());
        for _ in 1..k {
            let next = out.last().unwrap().product_capped(self, cap)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Membership of a single function in the span.
    pub fn contains(&self, f: &RationalFunction) -> bool {
        if f.arity() != self.arity {
            return false;
        }
        if f.is_zero() {
            return true;
        }
        // f = P/D lies in span{N_i/Q} iff P*Q lies in span{D*N_i}
        let mut ech = Echelon::new(None);
        for n in &self.numerators {
            ech.insert(n.mul(f.denominator()));
        }
        ech.reduce(f.numerator().mul(&self.denominator)).is_zero()
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.dim() == other.dim() && other.basis().iter().all(|f| self.contains(f))
    }
}

impl fmt::Debug for FunctionSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.basis()).finish()
    }
}
