//! Brunn–Minkowski, isoperimetric and Alexandrov–Fenchel checks on lattice
//! polytopes, and their intersection-index analogues on torus models.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{factorial, rat, to_f64};
use crate::lattice::classify_cubes;
use crate::laurent::ExponentVector;
use crate::polytope::{mixed_volume, Polytope, MAX_ARITY};

pub const BM_TOLERANCE: f64 = 1e-9;
pub const HOMOTHETY_TOLERANCE: f64 = 1e-12;

/// Exact comparison `larger >= smaller`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactVerdict {
    pub larger: BigRational,
    pub smaller: BigRational,
    pub holds: bool,
    pub equality: bool,
}

impl ExactVerdict {
    pub fn new(larger: BigRational, smaller: BigRational) -> Self {
        let holds = larger >= smaller;
        let equality = larger == smaller;
        ExactVerdict { larger, smaller, holds, equality }
    }

    pub fn slack(&self) -> BigRational {
        &self.larger - &self.smaller
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BmVerdict {
    pub holds: bool,
    /// V(A+B)^{1/n} − V(A)^{1/n} − V(B)^{1/n}.
    pub slack: f64,
    /// Verdict was decided without roots.
    pub exact: bool,
    /// Float slack within the equality tolerance.
    pub equality: bool,
    /// A = λB + t for some λ > 0 (exact).
    pub homothetic: bool,
}

fn check_arity(bodies: &[&Polytope]) -> Result<usize> {
    let n = bodies[0].arity();
    if let Some(b) = bodies.iter().find(|b| b.arity() != n) {
        return Err(Error::ArityMismatch { expected: n, found: b.arity() });
    }
    if n > MAX_ARITY {
        return Err(Error::UnsupportedArity { arity: n, reason: "mixed volumes support arity at most 4" });
    }
    Ok(n)
}

fn mv(bodies: Vec<&Polytope>) -> Result<BigRational> {
    mixed_volume(&bodies.into_iter().cloned().collect::<Vec<_>>())
}

fn repeat<'a>(parts: &[(&'a Polytope, usize)], rest: &'a [Polytope]) -> Vec<&'a Polytope> {
    let mut out: Vec<&Polytope> = parts.iter().flat_map(|&(p, k)| std::iter::repeat_n(p, k)).collect();
    out.extend(rest.iter());
    out
}

/// V(A)·V(B) <= V(A, B)^2 in the plane.
pub fn isoperimetric_check(a: &Polytope, b: &Polytope) -> Result<ExactVerdict> {
    if check_arity(&[a, b])? != 2 {
        return Err(Error::UnsupportedArity { arity: a.arity(), reason: "isoperimetric form is planar" });
    }
    let m = mv(vec![a, b])?;
    Ok(ExactVerdict::new(&m * &m, a.volume() * b.volume()))
}

/// A = λB + t with λ > 0.
pub fn is_homothetic(a: &Polytope, b: &Polytope) -> bool {
    let (va, vb) = (a.vertices(), b.vertices());
    if va.len() != vb.len() || a.arity() != b.arity() {
        return false;
    }
    if va.len() == 1 {
        return true;
    }
    // lex order of vertices is preserved by positive homotheties
    let da: Vec<BigRational> = va.last().unwrap().iter().zip(&va[0]).map(|(x, y)| x - y).collect();
    let db: Vec<BigRational> = vb.last().unwrap().iter().zip(&vb[0]).map(|(x, y)| x - y).collect();
    let Some(j) = db.iter().position(|x| !x.is_zero()) else { return false };
    let lambda = &da[j] / &db[j];
    if !lambda.is_positive() {
        return false;
    }
    let t: Vec<BigRational> = va[0].iter().zip(&vb[0]).map(|(x, y)| x - &lambda * y).collect();
    va.iter().zip(vb).all(|(p, q)| p.iter().zip(q).zip(&t).all(|((x, y), s)| *x == &lambda * y + s))
}

pub fn brunn_minkowski_check(a: &Polytope, b: &Polytope) -> Result<BmVerdict> {
    let n = check_arity(&[a, b])?;
    let sum = a.minkowski_sum(b)?;
    let root = |v: &BigRational| to_f64(v).powf(1.0 / n as f64);
    let slack = root(sum.volume()) - root(a.volume()) - root(b.volume());
    let scale = root(sum.volume()).max(1.0);
    let homothetic = is_homothetic(a, b);
    let equality = slack.abs() <= HOMOTHETY_TOLERANCE * scale;
    let (holds, exact) = match n {
        1 => (sum.volume() >= &(a.volume() + b.volume()), true),
        2 => (isoperimetric_check(a, b)?.holds, true),
        _ => (slack >= -BM_TOLERANCE * scale, false),
    };
    Ok(BmVerdict { holds, slack, exact, equality, homothetic })
}

/// V(Δ1, Δ2, Δ3, ...)^2 >= V(Δ1, Δ1, Δ3, ...)·V(Δ2, Δ2, Δ3, ...).
pub fn alexandrov_fenchel_check(bodies: &[Polytope]) -> Result<ExactVerdict> {
    let n = bodies.len();
    if n < 2 {
        return Err(Error::invalid("Alexandrov-Fenchel needs at least two bodies"));
    }
    check_arity(&bodies.iter().collect::<Vec<_>>())?;
    let rest = &bodies[2..];
    let m12 = mv(repeat(&[(&bodies[0], 1), (&bodies[1], 1)], rest))?;
    let m11 = mv(repeat(&[(&bodies[0], 2)], rest))?;
    let m22 = mv(repeat(&[(&bodies[1], 2)], rest))?;
    Ok(ExactVerdict::new(&m12 * &m12, m11 * m22))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AfCorollaries {
    pub a: ExactVerdict,
    pub b: ExactVerdict,
    pub c: ExactVerdict,
    pub d: ExactVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorollaryParameters {
    /// Used by (a) and (c): 1 <= m <= n.
    pub m: usize,
    /// Used by (c): 0 <= i <= m.
    pub i: usize,
    /// Used by (d): k, l >= 1, k + l <= n.
    pub k: usize,
    pub l: usize,
}

fn pow(q: &BigRational, e: usize) -> BigRational {
    q.pow(e as i32)
}

/// Corollaries (a)–(d) in homogeneous form:
/// (a) V(Δ1..Δn)^m >= Π_{i<=m} V(Δi [m], Δ_{m+1}..);
/// (b) V(Δ1..Δn)^n >= Π Vol(Δi);
/// (c) V(P [i], Q [m−i], Δ_{m+1}..)^m >= V(P [m], ..)^i · V(Q [m], ..)^{m−i};
/// (d) V(P [k], Q [l], ..)^2 >= V(P [k−1], Q [l+1], ..)·V(P [k+1], Q [l−1], ..).
pub fn af_corollaries_check(p: &Polytope, q: &Polytope, deltas: &[Polytope], par: CorollaryParameters) -> Result<AfCorollaries> {
    let n = deltas.len();
    let mut all: Vec<&Polytope> = deltas.iter().collect();
    all.extend([p, q]);
    if check_arity(&all)? != n {
        return Err(Error::ArityMismatch { expected: n, found: p.arity() });
    }
    let CorollaryParameters { m, i, k, l } = par;
    if m == 0 || m > n || i > m || k == 0 || l == 0 || k + l > n {
        return Err(Error::invalid("corollary parameters need 1 <= m <= n, i <= m, k, l >= 1, k + l <= n"));
    }
    let full = mv(all[..n].to_vec())?;

    let mut prod = rat(1);
    for d in &deltas[..m] {
        prod *= mv(repeat(&[(d, m)], &deltas[m..]))?;
    }
    let a = ExactVerdict::new(pow(&full, m), prod);

    let vols = deltas.iter().fold(rat(1), |acc, d| acc * d.volume());
    let b = ExactVerdict::new(pow(&full, n), vols);

    let tail = &deltas[m..];
    let mixed = mv(repeat(&[(p, i), (q, m - i)], tail))?;
    let pm = mv(repeat(&[(p, m)], tail))?;
    let qm = mv(repeat(&[(q, m)], tail))?;
    let c = ExactVerdict::new(pow(&mixed, m), pow(&pm, i) * pow(&qm, m - i));

    let tail = &deltas[k + l..];
    let mid = mv(repeat(&[(p, k), (q, l)], tail))?;
    let lo = mv(repeat(&[(p, k - 1), (q, l + 1)], tail))?;
    let hi = mv(repeat(&[(p, k + 1), (q, l - 1)], tail))?;
    let d = ExactVerdict::new(&mid * &mid, lo * hi);
    Ok(AfCorollaries { a, b, c, d })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicAnalogues {
    pub arity: usize,
    /// [L1, ..., L1], [L2, ..., L2], [L1L2, ..., L1L2] as n!·volumes.
    pub self_index_1: BigInt,
    pub self_index_2: BigInt,
    pub self_index_product: BigInt,
    /// [L1, L2] on surfaces.
    pub mixed_index: Option<BigInt>,
    /// [L1,L1][L2,L2] <= [L1,L2]^2 on surfaces.
    pub hodge: Option<ExactVerdict>,
    /// [L1..]^{1/n} + [L2..]^{1/n} <= [L1L2..]^{1/n}.
    pub brunn_minkowski: BmVerdict,
    /// a_k = deg(L1^k L2^{m−k}) for k = 0..=m.
    pub degrees: Vec<BigInt>,
    /// a_k^2 >= a_{k−1}·a_{k+1} for every interior k.
    pub log_concave: bool,
}

fn support_polytope(m: &[ExponentVector]) -> Result<Polytope> {
    Polytope::from_integer_points(&m.iter().map(|e| e.entries().to_vec()).collect::<Vec<_>>())
}

fn count(q: BigRational) -> BigInt {
    assert!(q.is_integer(), "intersection index {q} is not an integer");
    q.to_integer()
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Intersection indices of monomial spaces L(M1), L(M2) on the torus, realized as
/// n!·mixed volumes, and the algebraic Brunn–Minkowski, Hodge and log-concavity checks.
pub fn algebraic_analogues_check(m1: &[ExponentVector], m2: &[ExponentVector], m: usize) -> Result<AlgebraicAnalogues> {
    let d1 = support_polytope(m1)?;
    let d2 = support_polytope(m2)?;
    let n = check_arity(&[&d1, &d2])?;
    if n > 3 {
        return Err(Error::UnsupportedArity { arity: n, reason: "algebraic analogues are checked for n <= 3" });
    }
    let nf = BigRational::from_integer(factorial(n));
    // V_j = V(Δ1 [j], Δ2 [n−j])
    let vj = (0..=n).map(|j| mv(repeat(&[(&d1, j), (&d2, n - j)], &[]))).collect::<Result<Vec<_>>>()?;
    let i1 = count(&vj[n] * &nf);
    let i2 = count(&vj[0] * &nf);
    let product = d1.minkowski_sum(&d2)?;
    let ip = count(product.volume() * &nf);
    let (mixed_index, hodge) = if n == 2 {
        let i12 = count(&vj[1] * &nf);
        let v = ExactVerdict::new(BigRational::from_integer(&i12 * &i12), BigRational::from_integer(&i1 * &i2));
        (Some(i12), Some(v))
    } else {
        (None, None)
    };
    let brunn_minkowski = match n {
        2 => {
            // (√a + √b)^2 <= c  ⟺  c − a − b >= 0 and 4ab <= (c − a − b)^2
            let rest = &ip - &i1 - &i2;
            let holds = !rest.is_negative() && BigInt::from(4) * &i1 * &i2 <= &rest * &rest;
            let r = |x: &BigInt| to_f64(&BigRational::from_integer(x.clone())).sqrt();
            let slack = r(&ip) - r(&i1) - r(&i2);
            BmVerdict {
                holds,
                slack,
                exact: true,
                equality: slack.abs() <= HOMOTHETY_TOLERANCE * r(&ip).max(1.0),
                homothetic: is_homothetic(&d1, &d2),
            }
        }
        _ => {
            let mut v = brunn_minkowski_check(&d1, &d2)?;
            let r = |x: &BigInt| to_f64(&BigRational::from_integer(x.clone())).powf(1.0 / n as f64);
            v.slack = r(&ip) - r(&i1) - r(&i2);
            v
        }
    };
    // deg(L1^k L2^{m−k}) = n!·Vol(kΔ1 + (m−k)Δ2) = n!·Σ_j C(n,j) k^j (m−k)^{n−j} V_j
    let degrees: Vec<BigInt> = (0..=m)
        .map(|k| {
            let total = (0..=n).fold(BigRational::zero(), |acc, j| {
                let coeff = binomial(n, j) * BigInt::from(k).pow(j as u32) * BigInt::from(m - k).pow((n - j) as u32);
                acc + BigRational::from_integer(coeff) * &vj[j]
            });
            count(total * &nf)
        })
        .collect();
    let log_concave = degrees.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2]);
    Ok(AlgebraicAnalogues {
        arity: n,
        self_index_1: i1,
        self_index_2: i2,
        self_index_product: ip,
        mixed_index,
        hodge,
        brunn_minkowski,
        degrees,
        log_concave,
    })
}

/// Hull of 3–8 uniform lattice points in [0, 6]^n; optionally retried until full-dimensional.
pub fn random_lattice_polytope<R: Rng>(n: usize, full_dimensional: bool, rng: &mut R) -> Polytope {
    loop {
        let k = rng.gen_range(3..=8);
        let pts: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..=6)).collect()).collect();
        let p = Polytope::from_integer_points(&pts).expect("points share the arity");
        if !full_dimensional || p.is_full_dimensional() {
            return p;
        }
    }
}

/// Support set of a random lattice polytope (its vertices).
pub fn random_support<R: Rng>(n: usize, rng: &mut R) -> Vec<ExponentVector> {
    random_lattice_polytope(n, true, rng)
        .vertices()
        .iter()
        .map(|v| ExponentVector::new(v.iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect()))
        .collect()
}

/// Deterministic per-sample generator so suites aggregate independently of order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub af: ExactVerdict,
    /// BM on a random pair (B, λB + t) with λ in 1..=4.
    pub bm_homothetic: BmVerdict,
    /// N1 <= Vol <= N1 + N2 on the first body.
    pub cube_chain: bool,
}

/// One randomized instance of the inequality suite in arity n.
pub fn inequality_sample(n: usize, seed: u64, index: u64) -> Result<SampleOutcome> {
    let mut rng = sample_rng(seed, index);
    let bodies: Vec<Polytope> = (0..n).map(|_| random_lattice_polytope(n, false, &mut rng)).collect();
    let af = alexandrov_fenchel_check(&bodies)?;
    let b = random_lattice_polytope(n, true, &mut rng);
    let lambda = rat(rng.gen_range(1..=4));
    let shift: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect();
    let hb = b.scale(&lambda)?.translate(&shift)?;
    let bm_homothetic = brunn_minkowski_check(&b, &hb)?;
    let cubes = classify_cubes(&bodies[0])?;
    let vol = bodies[0].volume();
    let cube_chain = &rat(cubes.n1 as i64) <= vol && vol <= &rat((cubes.n1 + cubes.n2) as i64);
    Ok(SampleOutcome { af, bm_homothetic, cube_chain })
}

/// Ratio V(A)·V(B_k) / V(A, B_k)^2 for B_k the regular 4k-gon inscribed in the unit circle.
pub fn isoperimetric_ball_ratio(a: &Polytope, k: usize) -> Result<f64> {
    let sides = 4 * k;
    let pts: Vec<Vec<BigRational>> = (0..sides)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / sides as f64;
            vec![BigRational::from_float(t.cos()).unwrap(), BigRational::from_float(t.sin()).unwrap()]
        })
        .collect();
    let ball = Polytope::hull(&pts)?;
    let v = isoperimetric_check(a, &ball)?;
    Ok(to_f64(&v.smaller) / to_f64(&v.larger))
}
