//! Matrix term orders and the Gröbner valuation they induce.
//!
//! The value of a polynomial is its minimal exponent; a rational function P/Q
//! gets v(P) - v(Q), which keeps v multiplicative.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::exact::{rref, RationalMatrix};
use crate::error::{Error, Result};
use crate::laurent::{Echelon, ExponentVector, FunctionSubspace, LaurentPolynomial, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Total on Z^n and a well-order on Z^n_+.
    WellOrder,
    TotalNotWell,
}

/// Classifies a weight matrix; rank below the column count is an error.
pub fn validate_order(rows: &[Vec<i64>]) -> Result<OrderKind> {
    let n = rows.first().map(Vec::len).ok_or_else(|| Error::InvalidOrder("empty weight matrix".into()))?;
    if n == 0 {
        return Err(Error::InvalidOrder("weight matrix has no columns".into()));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidOrder("weight matrix rows have different lengths".into()));
    }
    let m = RationalMatrix::from_i64(rows).expect("rectangular");
    let rank = rref(&m).rank;
    if rank < n {
        return Err(Error::InvalidOrder(format!("weight matrix has rank {rank} < {n}")));
    }
    let well = (0..n).all(|j| rows.iter().map(|r| r[j]).find(|&x| x != 0).is_some_and(|x| x > 0));
    Ok(if well { OrderKind::WellOrder } else { OrderKind::TotalNotWell })
}

/// Total order on Z^n: compare W*a and W*b lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TermOrder {
    weights: Vec<Vec<i64>>,
    kind: OrderKind,
}

impl TermOrder {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        let kind = validate_order(&weights)?;
        Ok(TermOrder { weights, kind })
    }

    /// Lexicographic order with x_1 most significant.
    pub fn lex(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        TermOrder::new(rows).expect("identity has full rank")
    }

    /// Total degree first, ties broken lexicographically.
    pub fn grlex(n: usize) -> Self {
        let mut rows = vec![vec![1; n]];
        rows.extend((0..n.saturating_sub(1)).map(|i| (0..n).map(|j| i64::from(i == j)).collect()));
        TermOrder::new(rows).expect("grlex matrix has full rank")
    }

    pub fn arity(&self) -> usize {
        self.weights[0].len()
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn is_well_order(&self) -> bool {
        self.kind == OrderKind::WellOrder
    }

    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        debug_assert_eq!(a.arity(), self.arity());
        debug_assert_eq!(b.arity(), self.arity());
        for row in &self.weights {
            let da: i128 = row.iter().zip(a.entries()).map(|(&w, &x)| i128::from(w) * i128::from(x)).sum();
            let db: i128 = row.iter().zip(b.entries()).map(|(&w, &x)| i128::from(w) * i128::from(x)).sum();
            match da.cmp(&db) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    pub fn min<'a>(&self, exps: impl IntoIterator<Item = &'a ExponentVector>) -> Option<&'a ExponentVector> {
        exps.into_iter().min_by(|a, b| self.compare(a, b))
    }

    pub fn max<'a>(&self, exps: impl IntoIterator<Item = &'a ExponentVector>) -> Option<&'a ExponentVector> {
        exps.into_iter().max_by(|a, b| self.compare(a, b))
    }

    /// The term with minimal exponent.
    pub fn min_term<'a>(&self, p: &'a LaurentPolynomial) -> Option<(&'a ExponentVector, &'a BigRational)> {
        p.terms().min_by(|a, b| self.compare(a.0, b.0))
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found });
        }
        Ok(())
    }

    /// v(f): the minimal point of supp(f).
    pub fn groebner_value(&self, f: &LaurentPolynomial) -> Result<ExponentVector> {
        self.check_arity(f.arity())?;
        self.min_term(f).map(|(e, _)| e.clone()).ok_or(Error::ZeroFunction)
    }

    /// v(P/Q) = v(P) - v(Q).
    pub fn value_of_rational(&self, r: &RationalFunction) -> Result<ExponentVector> {
        let vp = self.groebner_value(r.numerator())?;
        let vq = self.groebner_value(r.denominator())?;
        Ok(&vp - &vq)
    }

    /// Values of a subspace together with representatives having those values.
    ///
    /// Basis elements are processed in order; each one is reduced against the
    /// earlier pivots by cancelling minimal terms with equal values.
    pub fn echelonize(&self, l: &FunctionSubspace) -> Result<Vec<(ExponentVector, RationalFunction)>> {
        self.check_arity(l.arity())?;
        let vq = self.groebner_value(l.denominator())?;
        let mut ech = Echelon::new(Some(self));
        for n in l.numerators() {
            ech.insert(n.clone());
        }
        Ok(ech
            .into_rows()
            .into_iter()
            .map(|(lead, row)| {
                let f = RationalFunction::new(row, l.denominator().clone()).expect("nonzero denominator");
                (&lead - &vq, f)
            })
            .collect())
    }

    /// The value set v(L \ {0}), in echelon order.
    pub fn subspace_values(&self, l: &FunctionSubspace) -> Result<Vec<ExponentVector>> {
        self.check_arity(l.arity())?;
        let vq = self.groebner_value(l.denominator())?;
        let mut ech = Echelon::new(Some(self));
        let mut out = Vec::with_capacity(l.dim());
        for n in l.numerators() {
            if let Some(lead) = ech.insert(n.clone()) {
                out.push(&lead - &vq);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TermOrder({:?})", self.weights)
    }
}
