use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{factorial, to_f64};

#[derive(Clone, Debug, PartialEq)]
pub struct HilbertFit {
    pub growth_degree: usize,
    pub leading_coefficient: f64,
    /// Exact leading coefficient when H was detected as eventually polynomial.
    pub exact_coefficient: Option<BigRational>,
    pub converged: bool,
}

/// Degree and leading coefficient of H(d) ~ c d^m from H(1..=D), D >= 8.
pub fn hilbert_fit(values: &[usize]) -> Result<HilbertFit> {
    let dm = values.len();
    if dm < 8 {
        return Err(Error::invalid("hilbert_fit needs at least 8 values"));
    }
    let mut diff: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
    for m in 0..=dm - 3 {
        let tail = diff.len().div_ceil(2).max(3);
        let window = &diff[diff.len() - tail..];
        if window.iter().all(|x| x == &window[0]) && window[0] != BigInt::from(0) {
            let c = BigRational::new(window[0].clone(), factorial(m));
            return Ok(HilbertFit {
                growth_degree: m,
                leading_coefficient: to_f64(&c),
                exact_coefficient: Some(c),
                converged: true,
            });
        }
        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // Richardson fallback on c(d) = H(d)/d^m
    let h = |d: usize| values[d - 1] as f64;
    let half = dm / 2;
    let m = ((h(dm) / h(half)).ln() / 2f64.ln()).round().max(0.0) as i32;
    let c_full = h(dm) / (dm as f64).powi(m);
    let c_half = h(half) / (half as f64).powi(m);
    Ok(HilbertFit {
        growth_degree: m as usize,
        leading_coefficient: 2.0 * c_full - c_half,
        exact_coefficient: None,
        converged: false,
    })
}
