//! Independent root counter for two Laurent polynomials in (C*)^2.

use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::upoly::UPoly;
use crate::exact::{rat, RationalMatrix};
use crate::laurent::{ExponentVector, LaurentPolynomial};
use crate::polytope::Polytope;

pub const RESAMPLE_ATTEMPTS: usize = 50;

/// Coefficients of y^0, y^1, ... as polynomials in x, after clearing negative exponents.
fn y_grid(p: &LaurentPolynomial) -> Vec<UPoly> {
    let low = p.min_exponents().expect("nonzero polynomial");
    let mut grid: Vec<Vec<BigRational>> = Vec::new();
    for (e, c) in p.terms() {
        let i = (e.entries()[0] - low.entries()[0]) as usize;
        let j = (e.entries()[1] - low.entries()[1]) as usize;
        if grid.len() <= j {
            grid.resize(j + 1, Vec::new());
        }
        if grid[j].len() <= i {
            grid[j].resize(i + 1, BigRational::zero());
        }
        grid[j][i] = c.clone();
    }
    grid.into_iter().map(UPoly::new).collect()
}

fn x_degree(grid: &[UPoly]) -> usize {
    grid.iter().filter_map(UPoly::degree).max().unwrap_or(0)
}

/// Determinant of the (sub)resultant matrix of f, g at x = x0.
/// `j = 0` gives Res_y, `j = 1` the first principal subresultant coefficient.
fn psc_at(f: &[UPoly], g: &[UPoly], j: usize, x0: &BigRational) -> Result<BigRational> {
    let p = f.len() - 1;
    let q = g.len() - 1;
    let size = p + q - 2 * j;
    if size == 0 {
        return Ok(BigRational::one());
    }
    let fv: Vec<BigRational> = f.iter().map(|c| c.eval(x0)).collect();
    let gv: Vec<BigRational> = g.iter().map(|c| c.eval(x0)).collect();
    let width = p + q - j;
    // columns indexed by y-degree width-1 .. 0; keep the first size-1 and the y^j column
    let mut columns: Vec<usize> = (0..size - 1).map(|c| width - 1 - c).collect();
    columns.push(j);
    let mut rows = Vec::with_capacity(size);
    let mut push = |coeffs: &[BigRational], shift: usize| {
        rows.push(
            columns
                .iter()
                .map(|&deg| if deg >= shift && deg - shift < coeffs.len() { coeffs[deg - shift].clone() } else { BigRational::zero() })
                .collect::<Vec<_>>(),
        );
    };
    for s in (0..q - j).rev() {
        push(&fv, s);
    }
    for s in (0..p - j).rev() {
        push(&gv, s);
    }
    RationalMatrix::from_rows(rows)?.determinant()
}

fn psc(f: &[UPoly], g: &[UPoly], j: usize) -> Result<UPoly> {
    let p = f.len() - 1;
    let q = g.len() - 1;
    let bound = (q - j) * x_degree(f) + (p - j) * x_degree(g);
    let samples = (1..=bound as i64 + 1)
        .map(|x| {
            let x0 = rat(x);
            psc_at(f, g, j, &x0).map(|v| (x0, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UPoly::interpolate(&samples))
}

fn coprime(a: &UPoly, b: &UPoly) -> bool {
    a.gcd(b).degree() == Some(0)
}

fn degenerate(msg: &str) -> Error {
    Error::Degenerate(msg.to_string())
}

/// Restriction of p to the face maximizing w, as a polynomial in the edge parameter.
fn initial_form(p: &LaurentPolynomial, w: &[i64]) -> UPoly {
    let dot = |e: &ExponentVector, v: &[i64]| e.entries()[0] * v[0] + e.entries()[1] * v[1];
    let top = p.support().map(|e| dot(e, w)).max().expect("nonzero polynomial");
    let u = [-w[1], w[0]];
    let step = u[0] * u[0] + u[1] * u[1];
    let face: Vec<_> = p.terms().filter(|(e, _)| dot(e, w) == top).collect();
    let low = face.iter().map(|(e, _)| dot(e, &u)).min().unwrap();
    let mut coeffs = Vec::new();
    for (e, c) in face {
        let k = ((dot(e, &u) - low) / step) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigRational::zero());
        }
        coeffs[k] = c.clone();
    }
    UPoly::new(coeffs)
}

/// Bernstein genericity: along every edge normal of N(f) + N(g) the initial
/// forms have no common root in C*.
fn boundary_generic(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<bool> {
    let pts: Vec<Vec<i64>> =
        f.support().flat_map(|a| g.support().map(move |b| (a + b).entries().to_vec())).collect();
    let sum = Polytope::from_integer_points(&pts)?;
    if !sum.is_full_dimensional() {
        return Ok(true);
    }
    for facet in sum.facets() {
        let w: Vec<i64> = facet.normal.iter().map(|x| x.to_i64().expect("small normal")).collect();
        let divisor = w[0].gcd(&w[1]);
        let w = [w[0] / divisor, w[1] / divisor];
        let (_, a) = initial_form(f, &w).strip_x();
        let (_, b) = initial_form(g, &w).strip_x();
        if a.gcd(&b).degree().is_some_and(|d| d > 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn y_derivative(g: &[UPoly]) -> Vec<UPoly> {
    g.iter().enumerate().skip(1).map(|(j, c)| c.scale(&rat(j as i64))).collect()
}

/// Number of common roots of f and g in (C*)^2 for generic coefficients, via
/// x-roots of Res_y(f, g) with single-point fibers certified by the first subresultant.
/// Systems whose edge initial forms share a root in C* lose roots to the boundary
/// and are reported as degenerate; fibers are certified in the first of a few
/// sheared monomial charts where that succeeds.
pub fn resultant_root_count(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<usize> {
    if f.arity() != 2 || g.arity() != 2 {
        return Err(Error::UnsupportedArity { arity: f.arity().max(g.arity()), reason: "resultant counting is bivariate" });
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if !boundary_generic(f, g)? {
        return Err(degenerate("initial forms share a root on an edge of the Newton polygon"));
    }
    // roots sharing an x-coordinate in one chart are separated in a sheared one
    let mut last = None;
    for shear in CHARTS {
        match count_in_chart(&monomial_change(f, shear), &monomial_change(g, shear)) {
            Err(e @ Error::Degenerate(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one chart"))
}

/// Unimodular exponent maps e ↦ A·e tried in order.
const CHARTS: [[[i64; 2]; 2]; 7] =
    [[[1, 0], [0, 1]], [[1, 1], [0, 1]], [[1, 0], [1, 1]], [[1, 2], [0, 1]], [[1, 0], [2, 1]], [[1, 3], [0, 1]], [[1, 0], [3, 1]]];

fn monomial_change(p: &LaurentPolynomial, a: [[i64; 2]; 2]) -> LaurentPolynomial {
    let map = |e: &ExponentVector| {
        let x = e.entries();
        ExponentVector::new(vec![a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]])
    };
    LaurentPolynomial::from_terms(2, p.terms().map(|(e, c)| (map(e), c.clone()))).expect("arity 2")
}

fn count_in_chart(f: &LaurentPolynomial, g: &LaurentPolynomial) -> Result<usize> {
    let (mut fg, mut gg) = (y_grid(f), y_grid(g));
    if fg.len() == 1 && gg.len() == 1 {
        return Err(degenerate("both polynomials are free of y"));
    }
    if gg.len() == 1 {
        std::mem::swap(&mut fg, &mut gg);
    }
    if fg.len() == 1 {
        // f = f0(x): roots are the fibers of g over the x-roots of f0
        let (_, h) = fg[0].strip_x();
        if !h.is_squarefree() {
            return Err(degenerate("x-polynomial has repeated roots"));
        }
        let q = gg.len() - 1;
        if !coprime(&h, &gg[q]) || !coprime(&h, &gg[0]) {
            return Err(degenerate("fiber polynomial loses degree or gains a zero root"));
        }
        if q >= 2 && !coprime(&h, &psc(&gg, &y_derivative(&gg), 0)?) {
            return Err(degenerate("fiber polynomial has repeated roots"));
        }
        return Ok(h.degree().unwrap() * q);
    }
    let res = psc(&fg, &gg, 0)?;
    if res.is_zero() {
        return Err(degenerate("resultant vanishes identically"));
    }
    let (_, r) = res.strip_x();
    if r.degree() == Some(0) {
        return Ok(0);
    }
    if !r.is_squarefree() {
        return Err(degenerate("resultant is not squarefree"));
    }
    let p = fg.len() - 1;
    if !coprime(&r, &fg[p]) {
        return Err(degenerate("root at infinity in y"));
    }
    if !coprime(&r, &fg[0]) {
        return Err(degenerate("common root with y = 0"));
    }
    if !coprime(&r, &psc(&fg, &gg, 1)?) {
        return Err(degenerate("fiber with several common roots"));
    }
    Ok(r.degree().unwrap())
}

/// Polynomial with the given support and random nonzero integer coefficients in [-bound, bound].
pub fn random_polynomial<R: Rng>(support: &[ExponentVector], bound: i64, rng: &mut R) -> Result<LaurentPolynomial> {
    let arity = support.first().ok_or_else(|| Error::invalid("empty support"))?.arity();
    LaurentPolynomial::from_terms(
        arity,
        support.iter().map(|e| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-bound..=bound);
            }
            (e.clone(), rat(c))
        }),
    )
}

/// Root count of a random system with supports m1, m2; resamples on degeneracy.
/// Returns the count and the number of samples drawn.
pub fn generic_root_count<R: Rng>(m1: &[ExponentVector], m2: &[ExponentVector], rng: &mut R) -> Result<(usize, usize)> {
    let mut last = degenerate("no samples drawn");
    for attempt in 1..=RESAMPLE_ATTEMPTS {
        let f = random_polynomial(m1, 20, rng)?;
        let g = random_polynomial(m2, 20, rng)?;
        match resultant_root_count(&f, &g) {
            Ok(n) => return Ok((n, attempt)),
            Err(e @ Error::Degenerate(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
