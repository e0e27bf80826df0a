//! Subduction against generators of a subalgebra and bounded SAGBI detection.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, FunctionSubspace, LaurentPolynomial};
use crate::valuation::TermOrder;

/// Largest degree bound accepted by `sagbi_check`.
pub const MAX_SAGBI_BOUND: usize = 12;
/// Subduction step limit.
pub const MAX_SUBDUCTION_STEPS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct SagbiInstance {
    generators: Vec<LaurentPolynomial>,
    values: Vec<ExponentVector>,
    order: TermOrder,
    degree_bound: usize,
}

impl SagbiInstance {
    pub fn new(generators: Vec<LaurentPolynomial>, order: TermOrder, degree_bound: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("a subalgebra needs at least one generator"));
        }
        if !order.is_well_order() {
            return Err(Error::InvalidOrder("subduction needs a well-order".into()));
        }
        for g in &generators {
            if g.arity() != order.arity() {
                return Err(Error::ArityMismatch { expected: order.arity(), found: g.arity() });
            }
        }
        let values = generators.iter().map(|g| order.groebner_value(g)).collect::<Result<Vec<_>>>()?;
        Ok(SagbiInstance { generators, values, order, degree_bound })
    }

    pub fn generators(&self) -> &[LaurentPolynomial] {
        &self.generators
    }

    /// v(g_i) for every generator.
    pub fn values(&self) -> &[ExponentVector] {
        &self.values
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Π g_i^{c_i}.
    pub fn product(&self, exps: &[u32]) -> LaurentPolynomial {
        let arity = self.order.arity();
        exps.iter().zip(&self.generators).fold(LaurentPolynomial::one(arity), |acc, (&c, g)| if c == 0 { acc } else { acc.mul(&g.pow(c)) })
    }

    fn nonnegative_values(&self) -> bool {
        self.values.iter().all(|v| v.is_nonnegative() && !v.is_zero())
    }

    /// First c (lexicographic) with Σ c_i v(g_i) = target and Σ c_i <= max_total.
    pub fn find_combination(&self, target: &ExponentVector, max_total: usize) -> Option<Vec<u32>> {
        let prune = self.nonnegative_values();
        let mut c = vec![0u32; self.values.len()];
        let zero = ExponentVector::zero(target.arity());
        if self.search(0, &zero, target, max_total, prune, &mut c) {
            Some(c)
        } else {
            None
        }
    }

    fn search(&self, i: usize, acc: &ExponentVector, target: &ExponentVector, left: usize, prune: bool, c: &mut [u32]) -> bool {
        if i == self.values.len() {
            return acc == target;
        }
        let mut cur = acc.clone();
        for k in 0..=left {
            if prune && cur.entries().iter().zip(target.entries()).any(|(a, t)| a > t) {
                break;
            }
            c[i] = k as u32;
            if self.search(i + 1, &cur, target, left - k, prune, c) {
                return true;
            }
            cur = &cur + &self.values[i];
        }
        c[i] = 0;
        false
    }

    /// Degree needed to rule out any ℕ-combination hitting target, when values are nonnegative.
    fn natural_bound(&self, target: &ExponentVector) -> Option<usize> {
        if !self.nonnegative_values() || !target.is_nonnegative() {
            return None;
        }
        let total: i64 = target.entries().iter().sum();
        let smallest = self.values.iter().map(|v| v.entries().iter().sum::<i64>()).min().unwrap();
        Some((total / smallest) as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubductionStatus {
    /// f reduced to 0.
    Member,
    /// The value of the remainder is not an ℕ-combination of generator values.
    Stuck,
    /// A match needs more than `degree_bound` generator factors, or the step limit was hit.
    BoundExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subduction {
    pub remainder: LaurentPolynomial,
    /// f − remainder = Σ coef · Π g_i^{c_i}.
    pub trace: Vec<(BigRational, Vec<u32>)>,
    pub status: SubductionStatus,
}

pub fn expand_trace(inst: &SagbiInstance, trace: &[(BigRational, Vec<u32>)]) -> LaurentPolynomial {
    trace.iter().fold(LaurentPolynomial::zero(inst.order.arity()), |acc, (c, e)| acc.add(&inst.product(e).scale(c)))
}

pub fn subduction(f: &LaurentPolynomial, inst: &SagbiInstance) -> Result<Subduction> {
    if f.arity() != inst.order.arity() {
        return Err(Error::ArityMismatch { expected: inst.order.arity(), found: f.arity() });
    }
    let mut rest = f.clone();
    let mut trace: Vec<(BigRational, Vec<u32>)> = Vec::new();
    let finish = |rest, trace, status| Ok(Subduction { remainder: rest, trace, status });
    for _ in 0..MAX_SUBDUCTION_STEPS {
        let Some((lead, coef)) = inst.order.min_term(&rest).map(|(e, c)| (e.clone(), c.clone())) else {
            return finish(rest, trace, SubductionStatus::Member);
        };
        let Some(c) = inst.find_combination(&lead, inst.degree_bound) else {
            let status = match inst.natural_bound(&lead) {
                Some(b) if b <= inst.degree_bound || inst.find_combination(&lead, b).is_none() => SubductionStatus::Stuck,
                _ => SubductionStatus::BoundExhausted,
            };
            return finish(rest, trace, status);
        };
        let prod = inst.product(&c);
        let scale = coef / prod.coeff(&lead);
        rest = rest.sub(&prod.scale(&scale));
        match trace.iter_mut().find(|(_, e)| *e == c) {
            Some(entry) => entry.0 += &scale,
            None => trace.push((scale, c)),
        }
        trace.retain(|(s, _)| !s.is_zero());
    }
    finish(rest, trace, SubductionStatus::BoundExhausted)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SagbiReport {
    pub degree_bound: usize,
    /// Every value of R_{<=bound} is an ℕ-combination of generator values.
    pub sagbi_up_to_bound: bool,
    /// Minimal generators of the truncated value semigroup v(R_{<=bound}).
    pub semigroup_generators: Vec<ExponentVector>,
    /// |v(R_d)| for d = 1..=bound.
    pub value_counts: Vec<usize>,
    /// A value outside the ℕ-span and an element of R realizing it (the next SAGBI candidate).
    pub witness: Option<(ExponentVector, LaurentPolynomial)>,
}

/// Compares v(R_d), R_d = span{1, g_1, ..., g_k}^d, with the ℕ-span of v(g_i) for d <= bound.
pub fn sagbi_check(inst: &SagbiInstance) -> Result<SagbiReport> {
    let bound = inst.degree_bound;
    if bound == 0 || bound > MAX_SAGBI_BOUND {
        return Err(Error::invalid(format!("sagbi degree bound must be in 1..={MAX_SAGBI_BOUND}")));
    }
    let arity = inst.order.arity();
    let mut polys = vec![LaurentPolynomial::one(arity)];
    polys.extend(inst.generators.iter().cloned());
    let l = FunctionSubspace::from_polynomials(arity, polys)?;
    let powers = l.powers_capped(bound, crate::laurent::DEFAULT_DIMENSION_CAP)?;
    let value_counts = powers.iter().map(FunctionSubspace::dim).collect();
    let top = inst.order.echelonize(&powers[bound - 1])?;
    let in_span = |v: &ExponentVector| {
        inst.find_combination(v, bound).is_some() || inst.natural_bound(v).is_some_and(|b| inst.find_combination(v, b).is_some())
    };
    let mut witness = None;
    for (v, f) in &top {
        if !in_span(v) {
            // powers of a span of Laurent polynomials have denominator 1
            debug_assert!(f.is_laurent_polynomial());
            witness = Some((v.clone(), f.numerator().clone()));
            break;
        }
    }
    let values: BTreeSet<ExponentVector> = top.iter().map(|(v, _)| v.clone()).collect();
    let nonzero: Vec<&ExponentVector> = values.iter().filter(|v| !v.is_zero()).collect();
    let semigroup_generators = nonzero
        .iter()
        .filter(|&&v| !nonzero.iter().any(|&a| a != v && values.contains(&(v - a)) && !(v - a).is_zero()))
        .map(|&v| v.clone())
        .collect();
    Ok(SagbiReport { degree_bound: bound, sagbi_up_to_bound: witness.is_none(), semigroup_generators, value_counts, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn lp(terms: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_i64(2, terms).unwrap()
    }

    fn symmetric(bound: usize) -> SagbiInstance {
        let e1 = lp(&[(1, &[1, 0]), (1, &[0, 1])]);
        let e2 = lp(&[(1, &[1, 1])]);
        SagbiInstance::new(vec![e1, e2], TermOrder::lex(2), bound).unwrap()
    }

    #[test]
    fn power_sum_subducts() {
        let inst = symmetric(8);
        let f = lp(&[(1, &[2, 0]), (1, &[0, 2])]);
        let s = subduction(&f, &inst).unwrap();
        assert_eq!(s.status, SubductionStatus::Member);
        assert!(s.remainder.is_zero());
        assert_eq!(s.trace, vec![(rat(1), vec![2, 0]), (rat(-2), vec![0, 1])]);
        assert_eq!(expand_trace(&inst, &s.trace), f);
    }

    #[test]
    fn x_is_not_symmetric() {
        let inst = symmetric(8);
        let f = lp(&[(1, &[1, 0])]);
        let s = subduction(&f, &inst).unwrap();
        assert_eq!(s.status, SubductionStatus::Stuck);
        assert!(!s.remainder.is_zero());
        assert_eq!(expand_trace(&inst, &s.trace), f.sub(&s.remainder));
    }

    #[test]
    fn generator_subducts_to_itself() {
        let inst = symmetric(4);
        let s = subduction(&inst.generators()[0].clone(), &inst).unwrap();
        assert_eq!(s.trace, vec![(rat(1), vec![1, 0])]);
    }

    #[test]
    fn bound_exhaustion_is_distinct() {
        let inst = symmetric(2);
        // (x + y)^3 needs three generator factors
        let f = inst.generators()[0].pow(3);
        assert_eq!(subduction(&f, &inst).unwrap().status, SubductionStatus::BoundExhausted);
    }

    #[test]
    fn symmetric_generators_are_sagbi() {
        let r = sagbi_check(&symmetric(8)).unwrap();
        assert!(r.sagbi_up_to_bound);
        assert_eq!(r.semigroup_generators, vec![ExponentVector::from(vec![0, 1]), ExponentVector::from(vec![1, 1])]);
        assert_eq!(r.value_counts[7], 45);
    }

    #[test]
    fn single_generator() {
        let inst = SagbiInstance::new(vec![lp(&[(1, &[1, 0])])], TermOrder::lex(2), 5).unwrap();
        assert!(sagbi_check(&inst).unwrap().sagbi_up_to_bound);
    }

    #[test]
    fn non_sagbi_witness() {
        // v(x) = (1,0), v(xy - y^2) = v(y^2) = (0,2); xy = (xy - y^2) + y^2 has value (1,1)
        let gens = vec![lp(&[(1, &[1, 0])]), lp(&[(1, &[1, 1]), (-1, &[0, 2])]), lp(&[(1, &[0, 2])])];
        let inst = SagbiInstance::new(gens, TermOrder::lex(2), 6).unwrap();
        let r = sagbi_check(&inst).unwrap();
        let (v, h) = r.witness.expect("value (1,1) is not a sum of generator values");
        assert_eq!(v, ExponentVector::from(vec![1, 1]));
        assert_eq!(h, lp(&[(1, &[1, 1])]));
        assert_eq!(inst.order().groebner_value(&h).unwrap(), v);
        assert!(inst.find_combination(&v, 64).is_none());
    }

    #[test]
    fn infinitely_generated_pattern() {
        // C[x+y, xy, xy^2]: every (k,1) shows up as a new semigroup generator
        let gens = vec![lp(&[(1, &[1, 0]), (1, &[0, 1])]), lp(&[(1, &[1, 1])]), lp(&[(1, &[1, 2])])];
        for bound in [4, 6] {
            let r = sagbi_check(&SagbiInstance::new(gens.clone(), TermOrder::lex(2), bound).unwrap()).unwrap();
            assert!(!r.sagbi_up_to_bound);
            let tail: Vec<ExponentVector> = (2..=bound as i64).map(|k| ExponentVector::from(vec![k, 1])).collect();
            assert!(tail.iter().all(|t| r.semigroup_generators.contains(t)));
        }
    }

    #[test]
    fn well_order_required() {
        let rev = TermOrder::new(vec![vec![-1, 0], vec![0, -1]]).unwrap();
        assert!(matches!(SagbiInstance::new(vec![lp(&[(1, &[1, 0])])], rev, 3), Err(Error::InvalidOrder(_))));
    }
}
