use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::rat;
use crate::laurent::{ExponentVector, FunctionSubspace, LaurentPolynomial, RationalFunction, VarietyModel};
use crate::semigroup::GradedSemigroup;
use crate::valuation::TermOrder;

fn compose_shift(p: &LaurentPolynomial, a: &BigRational) -> (LaurentPolynomial, i64) {
    // p(t) = t^-e · q(t) with q a polynomial; returns (q(t + a), e)
    let e = p.min_exponents().map_or(0, |m| (-m.entries()[0]).max(0));
    let binom = LaurentPolynomial::from_terms(1, [(ExponentVector::from(vec![1]), rat(1)), (ExponentVector::from(vec![0]), a.clone())])
        .expect("arity 1");
    let mut out = LaurentPolynomial::zero(1);
    for (exp, c) in p.terms() {
        let k = (exp.entries()[0] + e) as u32;
        out = out.add(&binom.pow(k).scale(c));
    }
    (out, e)
}

/// f(t) ↦ f(t + a) for one-parameter rational functions.
pub fn shift_parameter(f: &RationalFunction, a: &BigRational) -> Result<RationalFunction> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: f.arity() });
    }
    if a.is_zero() {
        return Ok(f.clone());
    }
    let (num, en) = compose_shift(f.numerator(), a);
    let (den, ed) = compose_shift(f.denominator(), a);
    let binom = LaurentPolynomial::from_terms(1, [(ExponentVector::from(vec![1]), rat(1)), (ExponentVector::from(vec![0]), a.clone())])?;
    RationalFunction::new(num.mul(&binom.pow(ed as u32)), den.mul(&binom.pow(en as u32)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisibilityCheck {
    pub mapping_degree: u64,
    pub mu: u64,
    /// Every stored section value is divisible by μ_a.
    pub values_divisible: bool,
    /// The value group has index exactly μ_a.
    pub index_matches: bool,
    /// length(Δ)·d/μ_a.
    pub degree_from_segment: BigRational,
    /// Hilbert slope·d.
    pub degree_from_hilbert: Option<BigRational>,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveReport {
    pub point: BigRational,
    pub d_max: usize,
    pub segment: (BigRational, BigRational),
    /// Exact slope of dim L^k once it is linear in k.
    pub hilbert_slope: Option<BigRational>,
    /// (C, k0) with dim L^k = k·slope + C for k0 <= k <= d_max.
    pub constant: Option<(BigRational, usize)>,
    /// Index in Z of the group generated by all values.
    pub value_group_index: u64,
    /// Missing points of (d·anchor + T) ∩ [d·s0, d·s1] per section d = 1..=d_max.
    pub gaps: Vec<Vec<i64>>,
    /// Smallest C0 such that every lower-half gap lies below C0.
    pub lower_gap_bound: i64,
    /// C1(k): every upper-half gap of section k lies above k·s1 − C1(k)
    /// (the upper bound is read as k·deg L − C1(k)).
    pub upper_gap_widths: Vec<i64>,
    /// First degree whose section touches the upper boundary ray m = d·s1.
    pub upper_ray_hit: Option<usize>,
    pub divisibility: Option<DivisibilityCheck>,
}

/// Valuation ord_{t=a} on a one-parameter model: Newton segment, Hilbert slope,
/// gap tables and the μ_a divisibility identities.
pub fn curve_report(
    model: &VarietyModel,
    exprs: &[LaurentPolynomial],
    point: &BigRational,
    d_max: usize,
    degrees: Option<(u64, u64)>,
) -> Result<CurveReport> {
    curve_report_capped(model, exprs, point, d_max, degrees, crate::laurent::DEFAULT_DIMENSION_CAP)
}

/// [`curve_report`] with an explicit cap on dim L^d.
pub fn curve_report_capped(
    model: &VarietyModel,
    exprs: &[LaurentPolynomial],
    point: &BigRational,
    d_max: usize,
    degrees: Option<(u64, u64)>,
    dimension_cap: usize,
) -> Result<CurveReport> {
    if model.arity() != 1 {
        return Err(Error::UnsupportedArity { arity: model.arity(), reason: "curve report needs a one-parameter model" });
    }
    let pulled = model.pull_back_subspace(exprs)?;
    let shifted = pulled.basis().iter().map(|f| shift_parameter(f, point)).collect::<Result<Vec<_>>>()?;
    let l = FunctionSubspace::new(1, shifted)?;
    let g = GradedSemigroup::from_subspace_capped(&l, &TermOrder::lex(1), d_max, dimension_cap)?;
    let body = g.newton_body()?;
    let s0 = body.vertices().first().unwrap()[0].clone();
    let s1 = body.vertices().last().unwrap()[0].clone();
    let h = g.hilbert_values();

    // exact linear tail of H
    let (hilbert_slope, constant) = if h.len() >= 3 {
        let dm = h.len();
        let slope = h[dm - 1] as i64 - h[dm - 2] as i64;
        let c = h[dm - 1] as i64 - slope * dm as i64;
        let mut k0 = dm;
        while k0 > 1 && h[k0 - 2] as i64 == slope * (k0 as i64 - 1) + c {
            k0 -= 1;
        }
        if dm - k0 >= 2 {
            (Some(rat(slope)), Some((rat(c), k0)))
        } else {
            (None, None)
        }
    } else {
        (None, None)
    };

    let step = g.difference_lattice().basis.to_rows().first().map_or(1, |r| r[0].abs().to_i64().unwrap().max(1));
    let anchor = g.anchor().entries()[0];
    let mut gaps = Vec::with_capacity(d_max);
    let mut lower_gap_bound = 0i64;
    let mut upper_gap_widths = Vec::with_capacity(d_max);
    let mut upper_ray_hit = None;
    let mut value_gcd = 0i64;
    for (i, sec) in g.sections().iter().enumerate() {
        let d = (i + 1) as i64;
        let lo = (&s0 * rat(d)).ceil().to_integer().to_i64().unwrap();
        let hi = (&s1 * rat(d)).floor().to_integer().to_i64().unwrap();
        let residue = (d * anchor).mod_floor(&step);
        let start = lo + (residue - lo).mod_floor(&step);
        let mid = (&s0 + &s1) * rat(d) / rat(2);
        let mut row = Vec::new();
        let mut width = 0i64;
        let mut m = start;
        while m <= hi {
            if !sec.contains(&ExponentVector::from(vec![m])) {
                row.push(m);
                if rat(m) < mid {
                    lower_gap_bound = lower_gap_bound.max(m + 1);
                } else {
                    width = width.max(hi - m + 1);
                }
            }
            m += step;
        }
        gaps.push(row);
        upper_gap_widths.push(width);
        let top = &s1 * rat(d);
        if upper_ray_hit.is_none() && top.is_integer() && sec.contains(&ExponentVector::from(vec![top.to_integer().to_i64().unwrap()])) {
            upper_ray_hit = Some(i + 1);
        }
        for v in sec {
            value_gcd = value_gcd.gcd(&v.entries()[0]);
        }
    }
    let value_group_index = value_gcd.unsigned_abs();

    let divisibility = degrees.map(|(d, mu)| {
        let values_divisible = g.sections().iter().flatten().all(|v| v.entries()[0] % mu as i64 == 0);
        let len = &s1 - &s0;
        let degree_from_segment = &len * rat(d as i64) / rat(mu as i64);
        let degree_from_hilbert = hilbert_slope.as_ref().map(|s| s * rat(d as i64));
        let identity_holds = degree_from_hilbert.as_ref() == Some(&degree_from_segment);
        DivisibilityCheck {
            mapping_degree: d,
            mu,
            values_divisible,
            index_matches: value_group_index == mu,
            degree_from_segment,
            degree_from_hilbert,
            identity_holds,
        }
    });

    Ok(CurveReport {
        point: point.clone(),
        d_max,
        segment: (s0, s1),
        hilbert_slope,
        constant,
        value_group_index,
        gaps,
        lower_gap_bound,
        upper_gap_widths,
        upper_ray_hit,
        divisibility,
    })
}
