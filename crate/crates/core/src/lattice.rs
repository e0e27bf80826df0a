//! Lattice points of polytopes, unit-cube counts and Riemann sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, to_f64, Point, RationalMatrix};
use crate::laurent::LaurentPolynomial;
use crate::polytope::{metric, Polytope};

/// Upper bound on bounding-box points scanned unless configured otherwise.
pub const DEFAULT_POINT_CAP: u128 = 100_000_000;

/// Integer constraint a.x <= b (or = b).
struct IntConstraint {
    a: Vec<i128>,
    b: i128,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::invalid("coordinates too large for lattice enumeration"))
}

struct Scanner {
    lo: Vec<i64>,
    hi: Vec<i64>,
    ineqs: Vec<IntConstraint>,
    eqs: Vec<IntConstraint>,
    empty: bool,
}

impl Scanner {
    fn new(p: &Polytope, cap: u128) -> Result<Scanner> {
        let n = p.arity();
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for j in 0..n {
            let min = p.vertices().iter().map(|v| &v[j]).min().expect("nonempty");
            let max = p.vertices().iter().map(|v| &v[j]).max().expect("nonempty");
            lo[j] = min.ceil().to_integer().to_i64().ok_or_else(|| Error::invalid("coordinate out of range"))?;
            hi[j] = max.floor().to_integer().to_i64().ok_or_else(|| Error::invalid("coordinate out of range"))?;
        }
        let mut box_size: u128 = 1;
        for j in 0..n {
            let w = (hi[j] - lo[j] + 1).max(0) as u128;
            box_size = box_size.saturating_mul(w);
        }
        if box_size > cap {
            return Err(Error::PointCap { points: box_size, cap });
        }
        let mut empty = lo.iter().zip(&hi).any(|(l, h)| l > h);
        let ineqs = p
            .facets()
            .iter()
            .map(|f| {
                Ok(IntConstraint {
                    a: f.normal.iter().map(to_i128).collect::<Result<_>>()?,
                    b: to_i128(&f.offset.floor().to_integer())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut eqs = Vec::new();
        for e in p.equations() {
            if !e.offset.is_integer() {
                empty = true;
                continue;
            }
            eqs.push(IntConstraint {
                a: e.normal.iter().map(to_i128).collect::<Result<_>>()?,
                b: to_i128(&e.offset.to_integer())?,
            });
        }
        Ok(Scanner { lo, hi, ineqs, eqs, empty })
    }

    /// Calls `visit` for every lattice point, in lexicographic order.
    fn scan(&self, mut visit: impl FnMut(&[i64])) {
        if self.empty {
            return;
        }
        let n = self.lo.len();
        let mut x = self.lo.clone();
        loop {
            // the last coordinate is solved for directly
            let mut lo = i128::from(self.lo[n - 1]);
            let mut hi = i128::from(self.hi[n - 1]);
            let partial = |a: &[i128]| -> i128 { (0..n - 1).map(|j| a[j] * i128::from(x[j])).sum() };
            let mut ok = true;
            for c in &self.ineqs {
                let rest = c.b - partial(&c.a);
                let an = c.a[n - 1];
                if an == 0 {
                    if rest < 0 {
                        ok = false;
                        break;
                    }
                } else if an > 0 {
                    hi = hi.min(Integer::div_floor(&rest, &an));
                } else {
                    lo = lo.max(Integer::div_ceil(&rest, &an));
                }
            }
            if ok {
                for c in &self.eqs {
                    let rest = c.b - partial(&c.a);
                    let an = c.a[n - 1];
                    if an == 0 {
                        if rest != 0 {
                            ok = false;
                            break;
                        }
                    } else if rest % an != 0 {
                        ok = false;
                        break;
                    } else {
                        let v = rest / an;
                        lo = lo.max(v);
                        hi = hi.min(v);
                    }
                }
            }
            if ok {
                for v in lo..=hi {
                    x[n - 1] = v as i64;
                    visit(&x);
                }
            }
            // advance the outer odometer
            let mut j = n - 1;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if x[j] < self.hi[j] {
                    x[j] += 1;
                    x[j + 1..n].copy_from_slice(&self.lo[j + 1..n]);
                    break;
                }
            }
        }
    }
}

pub fn lattice_points(p: &Polytope) -> Result<Vec<Vec<i64>>> {
    lattice_points_capped(p, DEFAULT_POINT_CAP)
}

pub fn lattice_points_capped(p: &Polytope, cap: u128) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    Scanner::new(p, cap)?.scan(|x| out.push(x.to_vec()));
    Ok(out)
}

pub fn count_lattice_points(p: &Polytope, cap: u128) -> Result<u128> {
    let mut count = 0u128;
    Scanner::new(p, cap)?.scan(|_| count += 1);
    Ok(count)
}

/// Half-open unit cubes K_a = Π [a_i, a_i + 1) classified against P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeClassification {
    /// Cubes contained in P.
    pub n1: usize,
    /// Cubes meeting P without being contained in it.
    pub n2: usize,
    pub inside_anchors: Vec<Vec<i64>>,
    pub boundary_anchors: Vec<Vec<i64>>,
}

fn cross(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Projection data of P on a separating-axis candidate u.
struct Axis {
    u: Vec<i128>,
    /// Σ max(u_i, 0) and Σ min(u_i, 0): the cube's extent along u.
    pos: i128,
    neg: i128,
    min: BigRational,
    max: BigRational,
}

pub fn classify_cubes(p: &Polytope) -> Result<CubeClassification> {
    classify_cubes_capped(p, DEFAULT_POINT_CAP)
}

pub fn classify_cubes_capped(p: &Polytope, cap: u128) -> Result<CubeClassification> {
    let n = p.arity();
    if n > 3 {
        return Err(Error::UnsupportedArity { arity: n, reason: "cube classification needs n <= 3" });
    }
    let mut normals: Vec<Vec<BigInt>> = Vec::new();
    for f in p.facets().iter().chain(p.equations()) {
        normals.push(f.normal.clone());
    }
    let mut axes_big: Vec<Vec<BigInt>> = normals.clone();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        axes_big.push(e);
    }
    if n == 3 {
        // edge directions (superset when P is lower-dimensional) crossed with the cube's edges
        let mut dirs: Vec<Vec<BigInt>> = Vec::new();
        let all: Vec<&crate::polytope::Facet> = p.facets().iter().chain(p.equations()).collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if p.is_full_dimensional() {
                    let shared = p
                        .vertices()
                        .iter()
                        .filter(|v| all[i].value(v) == all[i].offset && all[j].value(v) == all[j].offset)
                        .count();
                    if shared < 2 {
                        continue;
                    }
                }
                let d = cross(&all[i].normal, &all[j].normal);
                if d.iter().any(|x| !x.is_zero()) {
                    dirs.push(d);
                }
            }
        }
        for d in &dirs {
            for i in 0..3 {
                let mut e = vec![BigInt::zero(); 3];
                e[i] = BigInt::one();
                let c = cross(d, &e);
                if c.iter().any(|x| !x.is_zero()) {
                    axes_big.push(c);
                }
            }
        }
    }
    axes_big.sort();
    axes_big.dedup();
    let axes = axes_big
        .iter()
        .map(|u| {
            let vals: Vec<BigRational> = p
                .vertices()
                .iter()
                .map(|v| u.iter().zip(v).fold(BigRational::zero(), |acc, (a, x)| acc + BigRational::from_integer(a.clone()) * x))
                .collect();
            let ui: Vec<i128> = u.iter().map(to_i128).collect::<Result<_>>()?;
            Ok(Axis {
                pos: ui.iter().filter(|&&x| x > 0).sum(),
                neg: ui.iter().filter(|&&x| x < 0).sum(),
                min: vals.iter().min().unwrap().clone(),
                max: vals.iter().max().unwrap().clone(),
                u: ui,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for j in 0..n {
        lo[j] = p.vertices().iter().map(|v| &v[j]).min().unwrap().floor().to_integer().to_i64().ok_or_else(|| Error::invalid("coordinate out of range"))?;
        hi[j] = p.vertices().iter().map(|v| &v[j]).max().unwrap().floor().to_integer().to_i64().ok_or_else(|| Error::invalid("coordinate out of range"))?;
    }
    let total: u128 = lo.iter().zip(&hi).map(|(l, h)| (h - l + 1) as u128).product();
    if total > cap {
        return Err(Error::PointCap { points: total, cap });
    }

    let mut out = CubeClassification { n1: 0, n2: 0, inside_anchors: Vec::new(), boundary_anchors: Vec::new() };
    let mut a = lo.clone();
    loop {
        let meets = !axes.iter().any(|ax| {
            let ua = ax.u.iter().zip(&a).map(|(u, x)| u * i128::from(*x)).sum::<i128>();
            // closed cube shrunk by ε: projection [ua + neg(1-ε), ua + pos(1-ε)]
            let top = BigRational::from_integer((ua + ax.pos).into());
            let bottom = BigRational::from_integer((ua + ax.neg).into());
            top < ax.min || (top == ax.min && ax.pos > 0) || bottom > ax.max || (bottom == ax.max && ax.neg < 0)
        });
        if meets {
            let inside = p.is_full_dimensional()
                && (0..1u32 << n).all(|m| {
                    let corner: Point =
                        (0..n).map(|i| BigRational::from_integer((a[i] + ((m >> i) & 1) as i64).into())).collect();
                    p.contains(&corner)
                });
            if inside {
                out.n1 += 1;
                out.inside_anchors.push(a.clone());
            } else {
                out.n2 += 1;
                out.boundary_anchors.push(a.clone());
            }
        }
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if a[j] < hi[j] {
                a[j] += 1;
                a[j + 1..n].copy_from_slice(&lo[j + 1..n]);
                break;
            }
        }
    }
}

fn check_polynomial(f: &LaurentPolynomial, n: usize) -> Result<()> {
    if f.arity() != n {
        return Err(Error::ArityMismatch { expected: n, found: f.arity() });
    }
    if f.support().any(|e| !e.is_nonnegative()) {
        return Err(Error::invalid("integrand must be a polynomial (non-negative exponents)"));
    }
    Ok(())
}

fn total_degree(e: &crate::laurent::ExponentVector) -> i64 {
    e.entries().iter().sum()
}

/// Σ f(x) over the lattice points of λP.
pub fn sum_over_lattice(p: &Polytope, f: &LaurentPolynomial, lambda: u64, cap: u128) -> Result<BigRational> {
    let n = p.arity();
    check_polynomial(f, n)?;
    if lambda == 0 {
        return Err(Error::invalid("dilation factor must be positive"));
    }
    let scaled = p.scale(&BigRational::from_integer(lambda.into()))?;
    let terms: Vec<(Vec<u32>, BigRational)> =
        f.terms().map(|(e, c)| (e.entries().iter().map(|&k| k as u32).collect(), c.clone())).collect();
    let mut sums = vec![BigInt::zero(); terms.len()];
    Scanner::new(&scaled, cap)?.scan(|x| {
        for (s, (e, _)) in sums.iter_mut().zip(&terms) {
            let mut m = BigInt::one();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(BigInt::from(*xi), k as usize);
                }
            }
            *s += m;
        }
    });
    Ok(sums
        .into_iter()
        .zip(&terms)
        .fold(BigRational::zero(), |acc, (s, (_, c))| acc + BigRational::from_integer(s) * c))
}

/// ∫_P f for polynomials of total degree <= 2, exactly.
///
/// Each simplex of the triangulation uses the rule exact for quadratics:
/// weight (2-n)/((n+1)(n+2)) at vertices and 4/((n+1)(n+2)) at edge midpoints.
pub fn integral_over_polytope(p: &Polytope, f: &LaurentPolynomial) -> Result<BigRational> {
    let n = p.arity();
    check_polynomial(f, n)?;
    if f.support().any(|e| total_degree(e) > 2) {
        return Err(Error::invalid("exact integration supports degree <= 2 only"));
    }
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { dim: p.affine_dim(), arity: n });
    }
    let nn = BigRational::from_integer(BigInt::from(n));
    let denom = (&nn + BigRational::one()) * (&nn + BigRational::from_integer(2.into()));
    let w_vertex = (BigRational::from_integer(2.into()) - &nn) / &denom;
    let w_edge = BigRational::from_integer(4.into()) / &denom;
    let half = BigRational::new(1.into(), 2.into());
    let nfact = BigRational::from_integer(factorial(n));
    let mut total = BigRational::zero();
    for s in p.simplices() {
        let rows: Vec<Vec<BigRational>> = s[1..].iter().map(|q| q.iter().zip(&s[0]).map(|(a, b)| a - b).collect()).collect();
        let vol = RationalMatrix::from_rows(rows)?.determinant()?.abs() / &nfact;
        let mut acc = BigRational::zero();
        for v in s {
            acc += &w_vertex * f.eval(v)?;
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                let mid: Point = s[i].iter().zip(&s[j]).map(|(a, b)| (a + b) * &half).collect();
                acc += &w_edge * f.eval(&mid)?;
            }
        }
        total += vol * acc;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiemannRow {
    pub lambda: u64,
    pub sum: BigRational,
    /// Σ / λ^{α+n}
    pub normalized: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiemannReport {
    pub degree: usize,
    pub integral: BigRational,
    pub rows: Vec<RiemannRow>,
    pub tolerance: f64,
    /// Gaps never increase along the schedule.
    pub monotone: bool,
    pub passed: bool,
}

/// Compares λ^{-(α+n)} Σ_{λP ∩ Z^n} f with ∫_P f for a homogeneous f of degree α.
///
/// The default tolerance is 3·|∂P|/λ_max (|∂P| = 2 on the line), a heuristic;
/// there is no finite-λ error constant to compare against.
pub fn riemann_limit_check(
    p: &Polytope,
    f: &LaurentPolynomial,
    lambdas: &[u64],
    tolerance: Option<f64>,
    cap: u128,
) -> Result<RiemannReport> {
    let n = p.arity();
    check_polynomial(f, n)?;
    let mut degrees = f.support().map(total_degree);
    let alpha = degrees.next().ok_or_else(|| Error::invalid("integrand is zero"))?;
    if degrees.any(|d| d != alpha) {
        return Err(Error::invalid("integrand must be homogeneous"));
    }
    if lambdas.is_empty() {
        return Err(Error::invalid("empty dilation schedule"));
    }
    let integral = integral_over_polytope(p, f)?;
    let exact = to_f64(&integral);
    let mut rows = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let sum = sum_over_lattice(p, f, l, cap)?;
        let scale = BigRational::from_integer(BigInt::from(l).pow((alpha as usize + n) as u32));
        let normalized = to_f64(&(&sum / scale));
        rows.push(RiemannRow { lambda: l, sum, normalized, gap: (normalized - exact).abs() });
    }
    let lmax = *lambdas.iter().max().unwrap() as f64;
    let tolerance = match tolerance {
        Some(t) => t,
        None => {
            let boundary = if n == 1 { 2.0 } else { metric::boundary_measure(p)? };
            3.0 * boundary / lmax
        }
    };
    let monotone = rows.windows(2).all(|w| w[1].gap <= w[0].gap + 1e-15);
    let passed = rows.last().unwrap().gap < tolerance;
    Ok(RiemannReport { degree: alpha as usize, integral, rows, tolerance, monotone, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn square() -> Polytope {
        Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    fn triangle() -> Polytope {
        Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap()
    }

    fn poly(arity: usize, terms: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_i64(arity, terms).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(lattice_points(&square()).unwrap().len(), 4);
        assert_eq!(lattice_points(&square().scale(&rat(10)).unwrap()).unwrap().len(), 121);
        let t = Polytope::from_i64(&[&[0, 0], &[3, 0], &[0, 3]]).unwrap();
        assert_eq!(lattice_points(&t).unwrap().len(), 10);
    }

    #[test]
    fn lower_dimensional_points() {
        let seg = Polytope::from_i64(&[&[0, 0, 0], &[4, 2, 6]]).unwrap();
        assert_eq!(lattice_points(&seg).unwrap(), vec![vec![0, 0, 0], vec![2, 1, 3], vec![4, 2, 6]]);
        let half = Polytope::hull(&[vec![ratio(1, 2), rat(0)], vec![ratio(1, 2), rat(3)]]).unwrap();
        assert!(lattice_points(&half).unwrap().is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..25 {
            let pts: Vec<Vec<i64>> = (0..rng.gen_range(2..7)).map(|_| (0..3).map(|_| rng.gen_range(-3..4)).collect()).collect();
            let p = Polytope::from_integer_points(&pts).unwrap();
            let mut brute = Vec::new();
            for x in -3..4 {
                for y in -3..4 {
                    for z in -3..4 {
                        if p.contains(&crate::exact::point(&[x, y, z])) {
                            brute.push(vec![x, y, z]);
                        }
                    }
                }
            }
            assert_eq!(lattice_points(&p).unwrap(), brute);
        }
    }

    #[test]
    fn point_cap() {
        let big = square().scale(&rat(20_000)).unwrap();
        assert!(matches!(lattice_points(&big), Err(Error::PointCap { .. })));
    }

    #[test]
    fn cube_examples() {
        let c = classify_cubes(&square()).unwrap();
        assert_eq!((c.n1, c.n2), (1, 3));
        assert_eq!(c.inside_anchors, vec![vec![0, 0]]);
        assert_eq!(c.boundary_anchors, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let pt = classify_cubes(&Polytope::from_i64(&[&[2, 3]]).unwrap()).unwrap();
        assert_eq!((pt.n1, pt.n2), (0, 1));
        let five = classify_cubes(&square().scale(&rat(5)).unwrap()).unwrap();
        assert_eq!((five.n1, five.n2), (25, 11));
    }

    /// Exact grid sampling of K_a. Edges of lattice polygons with coordinates
    /// in [0, 4] cross cube walls at denominators dividing 12.
    fn sampled_meets(p: &Polytope, a: &[i64], steps: i64) -> bool {
        let n = a.len();
        let total = steps.pow(n as u32);
        (0..total).any(|m| {
            let x: Point = (0..n)
                .map(|i| rat(a[i]) + ratio((m / steps.pow(i as u32)) % steps, steps))
                .collect();
            p.contains(&x)
        })
    }

    #[test]
    fn cube_classification_agrees_with_sampling() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let pts: Vec<Vec<i64>> = (0..rng.gen_range(3..6)).map(|_| (0..2).map(|_| rng.gen_range(0..5)).collect()).collect();
            let p = Polytope::from_integer_points(&pts).unwrap();
            let c = classify_cubes(&p).unwrap();
            for a in &c.boundary_anchors {
                assert!(sampled_meets(&p, a, 12), "{p:?} {a:?}");
            }
            for x in -1..6 {
                for y in -1..6 {
                    let a = vec![x, y];
                    let listed = c.inside_anchors.contains(&a) || c.boundary_anchors.contains(&a);
                    if !listed {
                        assert!(!sampled_meets(&p, &a, 12), "{p:?} missed {a:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_sums() {
        let seg = Polytope::from_i64(&[&[0], &[1]]).unwrap();
        assert_eq!(sum_over_lattice(&seg, &poly(1, &[(1, &[1])]), 100, DEFAULT_POINT_CAP).unwrap(), rat(5050));
        assert_eq!(sum_over_lattice(&square(), &poly(2, &[(1, &[0, 0])]), 10, DEFAULT_POINT_CAP).unwrap(), rat(121));
        assert_eq!(sum_over_lattice(&triangle(), &poly(2, &[(1, &[1, 0])]), 4, DEFAULT_POINT_CAP).unwrap(), rat(20));
    }

    #[test]
    fn integrals() {
        assert_eq!(integral_over_polytope(&square(), &poly(2, &[(1, &[0, 0])])).unwrap(), rat(1));
        assert_eq!(integral_over_polytope(&square(), &poly(2, &[(1, &[1, 0])])).unwrap(), ratio(1, 2));
        assert_eq!(integral_over_polytope(&triangle(), &poly(2, &[(1, &[1, 0])])).unwrap(), ratio(1, 6));
        // ∫_{[0,1]^2} x y = 1/4 and ∫ x^2 = 1/3
        assert_eq!(integral_over_polytope(&square(), &poly(2, &[(1, &[1, 1])])).unwrap(), ratio(1, 4));
        assert_eq!(integral_over_polytope(&square(), &poly(2, &[(1, &[2, 0])])).unwrap(), ratio(1, 3));
        assert!(integral_over_polytope(&square(), &poly(2, &[(1, &[3, 0])])).is_err());
    }

    #[test]
    fn integral_of_quadratic_on_tetrahedron() {
        // ∫ x^2 over the standard simplex in R^3 = 2!/5! = 1/60; ∫ x y = 1/120
        let t = Polytope::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(integral_over_polytope(&t, &poly(3, &[(1, &[2, 0, 0])])).unwrap(), ratio(1, 60));
        assert_eq!(integral_over_polytope(&t, &poly(3, &[(1, &[1, 1, 0])])).unwrap(), ratio(1, 120));
    }

    #[test]
    fn riemann_examples() {
        let r = riemann_limit_check(&square(), &poly(2, &[(1, &[0, 0])]), &[10, 50, 100], None, DEFAULT_POINT_CAP).unwrap();
        assert!((r.rows[2].gap - 0.0201).abs() < 1e-12);
        assert!(r.passed && r.monotone);

        let seg = Polytope::from_i64(&[&[0], &[1]]).unwrap();
        let r = riemann_limit_check(&seg, &poly(1, &[(1, &[1])]), &[100], None, DEFAULT_POINT_CAP).unwrap();
        assert!((r.rows[0].normalized - 0.505).abs() < 1e-12);

        let r = riemann_limit_check(&triangle(), &poly(2, &[(1, &[1, 0])]), &[10, 20, 50], None, DEFAULT_POINT_CAP).unwrap();
        assert!(r.rows[2].gap < 0.02);
        assert!(r.passed);
    }
}
