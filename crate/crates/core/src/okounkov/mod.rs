//! Counting pipelines: Newton bodies of G(L) against Hilbert growth,
//! Kushnirenko and Bernstein counts, and curve diagnostics.

mod curve;
pub mod resultant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, lattice_basis, lattice_index, to_f64, IntegerMatrix};
use crate::laurent::{ExponentVector, LaurentPolynomial, VarietyModel};
use crate::polytope::{mixed_volume, Polytope};
use crate::semigroup::{hilbert_fit, GradedSemigroup, HilbertFit};
use crate::valuation::TermOrder;

pub use curve::{curve_report, curve_report_capped, shift_parameter, CurveReport, DivisibilityCheck};
pub use resultant::{generic_root_count, random_polynomial, resultant_root_count};

/// Relative gap allowed between the Hilbert and volume routes.
pub const CONSISTENCY_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    /// rank k < n: the predicted self-intersection is 0.
    Degenerate,
    /// d_max too small for a Hilbert fit.
    Unfitted,
}

#[derive(Clone, Debug)]
pub struct OkounkovReport {
    pub model: String,
    pub subspace: String,
    pub arity: usize,
    pub d_max: usize,
    pub newton_body: Polytope,
    pub convergence_gap: f64,
    pub rank: usize,
    pub index: BigInt,
    pub fit: Option<HilbertFit>,
    pub mapping_degree: u64,
    /// n!·V_n(Δ)·p/ind.
    pub prediction: f64,
    /// Exact prediction, present when the Hilbert data was detected as polynomial.
    pub exact_prediction: Option<BigRational>,
    /// n!·c·p from the Hilbert route.
    pub hilbert_prediction: Option<f64>,
    /// |n!·c·ind − n!·V_n(Δ)| / (n!·V_n(Δ)).
    pub relative_gap: Option<f64>,
    pub verdict: Verdict,
}

pub fn describe_model(model: &VarietyModel) -> String {
    match model {
        VarietyModel::Torus(n) => format!("torus({n})"),
        VarietyModel::Affine(n) => format!("affine({n})"),
        VarietyModel::Parametrized { coordinates, .. } => {
            let parts: Vec<String> =
                coordinates.iter().map(|c| format!("({})/({})", c.numerator(), c.denominator())).collect();
            format!("parametrized[{}]", parts.join(", "))
        }
    }
}

/// Builds G(L) for L = span(exprs) pulled back through the model, and compares
/// the volume prediction with the Hilbert growth of L^d.
pub fn okounkov_pipeline(
    model: &VarietyModel,
    exprs: &[LaurentPolynomial],
    order: &TermOrder,
    d_max: usize,
    mapping_degree: Option<u64>,
) -> Result<OkounkovReport> {
    okounkov_pipeline_capped(model, exprs, order, d_max, mapping_degree, crate::laurent::DEFAULT_DIMENSION_CAP)
}

/// [`okounkov_pipeline`] with an explicit cap on dim L^d.
pub fn okounkov_pipeline_capped(
    model: &VarietyModel,
    exprs: &[LaurentPolynomial],
    order: &TermOrder,
    d_max: usize,
    mapping_degree: Option<u64>,
    dimension_cap: usize,
) -> Result<OkounkovReport> {
    if order.arity() != model.arity() {
        return Err(Error::ArityMismatch { expected: model.arity(), found: order.arity() });
    }
    if model.requires_well_order() && !order.is_well_order() {
        return Err(Error::InvalidOrder("the model needs a well-order on its valuation lattice".into()));
    }
    let l = model.pull_back_subspace(exprs)?;
    let g = GradedSemigroup::from_subspace_capped(&l, order, d_max, dimension_cap)?;
    let n = model.arity();
    let p = mapping_degree.unwrap_or(1);
    let body = g.newton_body()?;
    let lat = g.difference_lattice();
    let fit = if d_max >= 8 { Some(hilbert_fit(&g.hilbert_values())?) } else { None };
    let subspace = exprs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
    let mut report = OkounkovReport {
        model: describe_model(model),
        subspace: format!("span{{{subspace}}}"),
        arity: n,
        d_max,
        convergence_gap: g.convergence_gap()?,
        newton_body: body,
        rank: lat.rank,
        index: lat.index,
        fit,
        mapping_degree: p,
        prediction: 0.0,
        exact_prediction: None,
        hilbert_prediction: None,
        relative_gap: None,
        verdict: Verdict::Degenerate,
    };
    if lat.rank < n {
        report.exact_prediction = Some(BigRational::zero());
        return Ok(report);
    }
    let nf = BigRational::from_integer(factorial(n));
    let nvol = report.newton_body.volume() * &nf;
    let exact = &nvol * BigRational::from_integer(BigInt::from(p)) / BigRational::from_integer(report.index.clone());
    report.prediction = to_f64(&exact);
    let Some(fit) = &report.fit else {
        report.verdict = Verdict::Unfitted;
        return Ok(report);
    };
    if fit.exact_coefficient.is_some() {
        report.exact_prediction = Some(exact);
    }
    let nfac = nf.to_f64().unwrap();
    report.hilbert_prediction = Some(nfac * fit.leading_coefficient * p as f64);
    let hilbert_volume = nfac * fit.leading_coefficient * report.index.to_f64().unwrap();
    let gap = (hilbert_volume - to_f64(&nvol)).abs() / to_f64(&nvol);
    report.relative_gap = Some(gap);
    report.verdict = if fit.growth_degree == n && gap < CONSISTENCY_TOLERANCE { Verdict::Consistent } else { Verdict::Inconsistent };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KushnirenkoCount {
    /// n!·Vol(conv M).
    pub count: BigInt,
    /// Rank of the group generated by M − M.
    pub rank: usize,
    /// Index of that group in Z^n (the mapping degree of Φ_{L(M)}), when of full rank.
    pub index: Option<BigInt>,
}

fn support_polytope(m: &[ExponentVector]) -> Result<Polytope> {
    let pts: Vec<Vec<i64>> = m.iter().map(|e| e.entries().to_vec()).collect();
    Polytope::from_integer_points(&pts)
}

fn integral(q: BigRational) -> BigInt {
    assert!(q.is_integer(), "lattice count {q} is not an integer");
    q.to_integer()
}

pub fn kushnirenko_count(m: &[ExponentVector]) -> Result<KushnirenkoCount> {
    let body = support_polytope(m)?;
    let n = body.arity();
    let count = integral(body.volume() * BigRational::from_integer(factorial(n)));
    let rows: Vec<Vec<BigInt>> =
        m.iter().map(|e| (e - &m[0]).entries().iter().map(|&x| BigInt::from(x)).collect()).collect();
    let basis = lattice_basis(&IntegerMatrix::from_rows(rows, n)?);
    let li = lattice_index(&basis, n)?;
    Ok(KushnirenkoCount { count, rank: li.rank, index: li.index })
}

/// n!·V(conv M_1, ..., conv M_n).
pub fn bernstein_count(supports: &[Vec<ExponentVector>]) -> Result<BigInt> {
    let bodies = supports.iter().map(|m| support_polytope(m)).collect::<Result<Vec<_>>>()?;
    let n = bodies.len();
    Ok(integral(mixed_volume(&bodies)? * BigRational::from_integer(factorial(n))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::laurent::RationalFunction;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn mono(v: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::monomial(ev(v), rat(1))
    }

    #[test]
    fn torus_square() {
        let l: Vec<_> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|v| mono(v)).collect();
        let r = okounkov_pipeline(&VarietyModel::Torus(2), &l, &TermOrder::grlex(2), 16, None).unwrap();
        assert_eq!(r.newton_body, Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap());
        assert_eq!(r.index, BigInt::from(1));
        let fit = r.fit.unwrap();
        assert_eq!((fit.growth_degree, fit.leading_coefficient), (2, 1.0));
        assert_eq!(r.exact_prediction, Some(rat(2)));
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn affine_linear_system() {
        let l = vec![mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 1])];
        let r = okounkov_pipeline(&VarietyModel::Affine(2), &l, &TermOrder::grlex(2), 10, None).unwrap();
        assert_eq!(r.newton_body, Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap());
        assert_eq!(r.exact_prediction, Some(rat(1)));
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn cusp_curve() {
        let t = |k: i64| RationalFunction::monomial(ExponentVector::from(vec![k]));
        let model = VarietyModel::parametrized(1, vec![t(2), t(3)]).unwrap();
        let l = vec![mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 1])];
        let r = okounkov_pipeline(&model, &l, &TermOrder::lex(1), 12, None).unwrap();
        assert_eq!(r.newton_body, Polytope::from_i64(&[&[0], &[3]]).unwrap());
        assert_eq!((r.rank, r.index.clone()), (1, BigInt::from(1)));
        assert_eq!(r.exact_prediction, Some(rat(3)));
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn rank_deficient_predicts_zero() {
        let l = vec![mono(&[0, 0]), mono(&[1, 1])];
        let r = okounkov_pipeline(&VarietyModel::Torus(2), &l, &TermOrder::lex(2), 10, None).unwrap();
        assert_eq!((r.rank, r.verdict, r.prediction), (1, Verdict::Degenerate, 0.0));
        assert_eq!(r.fit.unwrap().growth_degree, 1);
    }

    #[test]
    fn non_well_order_rejected_on_affine() {
        let rev = TermOrder::new(vec![vec![-1, 0], vec![0, -1]]).unwrap();
        let l = vec![mono(&[0, 0]), mono(&[1, 0])];
        assert!(matches!(okounkov_pipeline(&VarietyModel::Affine(2), &l, &rev, 4, None), Err(Error::InvalidOrder(_))));
        assert!(okounkov_pipeline(&VarietyModel::Torus(2), &l, &rev, 4, None).is_ok());
    }

    #[test]
    fn kushnirenko_examples() {
        let k = kushnirenko_count(&[ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1])]).unwrap();
        assert_eq!((k.count, k.index), (BigInt::from(1), Some(BigInt::from(1))));
        let sq = kushnirenko_count(&[ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[1, 1])]).unwrap();
        assert_eq!(sq.count, BigInt::from(2));
        let even = kushnirenko_count(&[ev(&[0]), ev(&[2])]).unwrap();
        assert_eq!((even.count, even.index), (BigInt::from(2), Some(BigInt::from(2))));
        let flat = kushnirenko_count(&[ev(&[0, 0]), ev(&[1, 1])]).unwrap();
        assert_eq!((flat.count, flat.rank, flat.index), (BigInt::from(0), 1, None));
    }

    #[test]
    fn bernstein_examples() {
        let s1 = vec![ev(&[0, 0]), ev(&[1, 0])];
        let s2 = vec![ev(&[0, 0]), ev(&[0, 1])];
        assert_eq!(bernstein_count(&[s1, s2]).unwrap(), BigInt::from(1));
        let simplex = |d: i64| vec![ev(&[0, 0]), ev(&[d, 0]), ev(&[0, d])];
        assert_eq!(bernstein_count(&[simplex(2), simplex(3)]).unwrap(), BigInt::from(6));
        let square = vec![ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[1, 1])];
        assert_eq!(bernstein_count(&[simplex(1), square]).unwrap(), BigInt::from(2));
    }
}
