//! Rational polytopes in R^n for n <= 4.
//!
//! Hulls, volumes, Minkowski sums and mixed volumes are exact. Metric
//! quantities live in [`metric`] and use floats.

mod float;
mod hull;
pub mod metric;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, lcm_of_denominators, null_space, primitive_integer, rref, saturation_basis, IntegerMatrix, Point,
    RationalMatrix,
};

pub use float::FloatPolytope;
pub use metric::MetricReport;

pub const MAX_ARITY: usize = 4;

/// Half-space `normal . x <= offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigRational,
}

impl Facet {
    pub fn value(&self, x: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, b)| acc + BigRational::from_integer(a.clone()) * b)
    }

    /// offset - normal . x (non-negative inside).
    pub fn slack(&self, x: &[BigRational]) -> BigRational {
        &self.offset - self.value(x)
    }
}

/// Convex hull of finitely many rational points.
#[derive(Clone)]
pub struct Polytope {
    arity: usize,
    vertices: Vec<Point>,
    affine_dim: usize,
    facets: Vec<Facet>,
    equations: Vec<Facet>,
    volume: BigRational,
    lattice_volume: BigRational,
    simplices: Vec<Vec<Point>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<Vec<String>> = self.vertices.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "Polytope{vs:?}")
    }
}

fn dot_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

impl Polytope {
    pub fn hull(points: &[Point]) -> Result<Self> {
        let n = points.first().map(Vec::len).ok_or_else(|| Error::invalid("hull of an empty point set"))?;
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::ArityMismatch { expected: n, found: p.len() });
        }
        if n > MAX_ARITY {
            return Err(Error::UnsupportedArity { arity: n, reason: "exact hulls are limited to n <= 4" });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        Ok(Self::hull_of_distinct(n, pts))
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        Self::hull(&points.iter().map(|p| crate::exact::point(p)).collect::<Vec<_>>())
    }

    pub fn from_integer_points(points: &[Vec<i64>]) -> Result<Self> {
        Self::hull(&points.iter().map(|p| crate::exact::point(p)).collect::<Vec<_>>())
    }

    fn hull_of_distinct(n: usize, pts: Vec<Point>) -> Self {
        let p0 = pts[0].clone();
        let diffs: Vec<Point> = pts.iter().map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect()).collect();
        let rr = rref(&RationalMatrix::from_rows(diffs.clone()).expect("rectangular"));
        let k = rr.rank;

        // lattice basis W of Z^n ∩ span, and the pivot columns used for local coordinates
        let (w, piv): (Vec<Vec<BigRational>>, Vec<usize>) = if k == n {
            ((0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect(), (0..n).collect())
        } else if k == 0 {
            (Vec::new(), Vec::new())
        } else {
            let dirs: Vec<Vec<BigInt>> = (0..k).map(|i| primitive_integer(rr.reduced.row(i))).collect();
            let sat = saturation_basis(&IntegerMatrix::from_rows(dirs, n).expect("rectangular"));
            let wq = sat.to_rational();
            let piv = rref(&wq).pivot_columns;
            (wq.to_rows(), piv)
        };
        let w_piv_inv = if k == 0 {
            RationalMatrix::zeros(0, 0)
        } else {
            let sub: Vec<Vec<BigRational>> = w.iter().map(|r| piv.iter().map(|&j| r[j].clone()).collect()).collect();
            RationalMatrix::from_rows(sub).expect("square").inverse().expect("pivot minor is invertible")
        };
        let local_q: Vec<Vec<BigRational>> = diffs
            .iter()
            .map(|d| (0..k).map(|c| piv.iter().enumerate().fold(BigRational::zero(), |acc, (r, &j)| acc + &d[j] * &w_piv_inv[(r, c)])).collect())
            .collect();
        let s = lcm_of_denominators(local_q.iter().flatten());
        let sq = BigRational::from_integer(s.clone());
        let local: Vec<Vec<BigInt>> = local_q.iter().map(|y| y.iter().map(|x| (x * &sq).to_integer()).collect()).collect();

        // map a local point Y (scaled by s) back to ambient coordinates
        let to_ambient = |y: &[BigRational]| -> Point {
            (0..n).map(|j| (0..k).fold(p0[j].clone(), |acc, r| acc + &y[r] / &sq * &w[r][j])).collect()
        };
        // local facet a.Y <= b  ->  ambient c.x <= offset
        let to_ambient_facet = |a: &[BigInt], b: &BigRational| -> Facet {
            let mut c = vec![BigRational::zero(); n];
            for (r, &j) in piv.iter().enumerate() {
                c[j] = (0..k).fold(BigRational::zero(), |acc, col| acc + &w_piv_inv[(r, col)] * BigRational::from_integer(a[col].clone()));
            }
            let offset = b / &sq + dot_q(&c, &p0);
            let prim = primitive_integer(&c);
            let nz = c.iter().position(|x| !x.is_zero()).expect("nonzero normal");
            let factor = BigRational::from_integer(prim[nz].clone()) / &c[nz];
            Facet { normal: prim, offset: offset * factor }
        };

        let mut equations: Vec<Facet> = if k < n {
            let basis = if k == 0 { RationalMatrix::zeros(0, n) } else { RationalMatrix::from_rows(w.clone()).expect("rectangular") };
            let ns = if k == 0 {
                (0..n).map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
            } else {
                null_space(&basis)
            };
            ns.iter()
                .map(|v| {
                    let prim = primitive_integer(v);
                    let q: Vec<BigRational> = prim.iter().cloned().map(BigRational::from_integer).collect();
                    Facet { offset: dot_q(&q, &p0), normal: prim }
                })
                .collect()
        } else {
            Vec::new()
        };
        equations.sort();

        let (vertices, mut facets, local_volume, simplices) = match k {
            0 => (vec![p0.clone()], Vec::new(), BigRational::one(), vec![vec![p0.clone()]]),
            1 => {
                let (imin, imax) = (0..pts.len()).fold((0, 0), |(lo, hi), i| {
                    (if local[i][0] < local[lo][0] { i } else { lo }, if local[i][0] > local[hi][0] { i } else { hi })
                });
                let lo = BigRational::from_integer(local[imin][0].clone());
                let hi = BigRational::from_integer(local[imax][0].clone());
                let facets = vec![
                    to_ambient_facet(&[BigInt::one()], &hi),
                    to_ambient_facet(&[-BigInt::one()], &-lo.clone()),
                ];
                let mut vs = vec![pts[imin].clone(), pts[imax].clone()];
                vs.sort();
                (vs.clone(), facets, (&hi - &lo) / &sq, vec![vs])
            }
            _ => {
                let lh = hull::local_hull(&local, k);
                let facets = lh.facets.iter().map(|(a, b)| to_ambient_facet(a, b)).collect();
                let vertices = lh.vertices.iter().map(|&i| pts[i].clone()).collect();
                let denom = BigInt::from(k + 1).pow(k as u32) * factorial(k);
                let vol = BigRational::new(lh.scaled_volume.clone(), denom) / num_traits::pow(sq.clone(), k);
                let kk = BigRational::from_integer(BigInt::from(k + 1));
                let apex_local: Vec<BigRational> = lh.apex_sum.iter().map(|x| BigRational::from_integer(x.clone()) / &kk).collect();
                let apex = to_ambient(&apex_local);
                let simplices = lh
                    .boundary
                    .iter()
                    .map(|f| std::iter::once(apex.clone()).chain(f.iter().map(|&i| pts[i].clone())).collect())
                    .collect();
                (vertices, facets, vol, simplices)
            }
        };
        facets.sort();
        let volume = if k == n && n > 0 { local_volume.clone() } else { BigRational::zero() };
        Polytope {
            arity: n,
            vertices,
            affine_dim: k,
            facets,
            equations,
            volume,
            lattice_volume: local_volume,
            simplices,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Extreme points, sorted lexicographically.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.arity
    }

    /// Irredundant facet inequalities within the affine hull.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Equations cutting out the affine hull (empty when full-dimensional).
    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    /// Euclidean n-volume; zero for lower-dimensional bodies.
    pub fn volume(&self) -> &BigRational {
        &self.volume
    }

    /// k-volume inside the affine hull, measured against the lattice
    /// Z^n ∩ (direction space), so a fundamental cell has volume 1.
    pub fn lattice_volume(&self) -> &BigRational {
        &self.lattice_volume
    }

    /// Simplices (affine_dim + 1 points each) tiling the body.
    pub fn simplices(&self) -> &[Vec<Point>] {
        &self.simplices
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        x.len() == self.arity
            && self.equations.iter().all(|e| e.value(x) == e.offset)
            && self.facets.iter().all(|f| f.value(x) <= f.offset)
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn scale(&self, lambda: &BigRational) -> Result<Polytope> {
        if lambda.is_negative() {
            return Err(Error::invalid("negative dilation factor"));
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.iter().map(|x| x * lambda).collect()).collect();
        Polytope::hull(&pts)
    }

    pub fn translate(&self, t: &[BigRational]) -> Result<Polytope> {
        if t.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: t.len() });
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        Polytope::hull(&pts)
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Polytope::hull(&pts)
    }

    /// Vertices of a full-dimensional polygon in counterclockwise order,
    /// starting from the lexicographically smallest.
    pub fn polygon_cycle(&self) -> Option<Vec<Point>> {
        if self.arity != 2 || self.affine_dim != 2 {
            return None;
        }
        let start = self.vertices[0].clone();
        let mut rest: Vec<Point> = self.vertices[1..].to_vec();
        // angular sort around the lex-min vertex, which sees all others within a half-plane
        rest.sort_by(|a, b| {
            let (ax, ay) = (&a[0] - &start[0], &a[1] - &start[1]);
            let (bx, by) = (&b[0] - &start[0], &b[1] - &start[1]);
            let cross = &ax * &by - &ay * &bx;
            BigRational::zero().cmp(&cross)
        });
        let mut out = vec![start];
        out.extend(rest);
        Some(out)
    }
}

/// V(Δ_1, ..., Δ_n) by polarization over all nonempty subsets.
pub fn mixed_volume(bodies: &[Polytope]) -> Result<BigRational> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::invalid("mixed volume of an empty list"));
    }
    if let Some(b) = bodies.iter().find(|b| b.arity() != n) {
        return Err(Error::ArityMismatch { expected: n, found: b.arity() });
    }
    let mut sums: HashMap<usize, Polytope> = HashMap::new();
    let mut total = BigRational::zero();
    for mask in 1usize..(1 << n) {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        let body = if rest == 0 { bodies[top as usize].clone() } else { sums[&rest].minkowski_sum(&bodies[top as usize])? };
        let sign_negative = (n - mask.count_ones() as usize) % 2 == 1;
        if sign_negative {
            total -= body.volume();
        } else {
            total += body.volume();
        }
        sums.insert(mask, body);
    }
    Ok(total / BigRational::from_integer(factorial(n)))
}

/// Mixed volume with repeated arguments: V(A, ..., A [k times], B, ..., B).
pub fn mixed_volume_kl(a: &Polytope, k: usize, b: &Polytope) -> Result<BigRational> {
    let n = a.arity();
    if k > n {
        return Err(Error::invalid("repetition count exceeds the arity"));
    }
    let mut bodies = vec![a.clone(); k];
    bodies.extend(std::iter::repeat_n(b.clone(), n - k));
    mixed_volume(&bodies)
}

/// Lattice-normalized n-volume n!·Vol.
pub fn normalized_volume(p: &Polytope) -> BigRational {
    p.volume() * BigRational::from_integer(factorial(p.arity()))
}
