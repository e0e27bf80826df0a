//! Placing (beneath-beyond) hull of integer points spanning Z^k, k >= 2.
//!
//! Facets are kept as simplices; a point sees a facet only when it lies
//! strictly beyond its hyperplane, which makes coplanar inputs harmless.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use crate::exact::{rref, RationalMatrix};

pub(crate) trait HullNum: Clone + Ord + Num + Neg<Output = Self> + Debug {
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl HullNum for i128 {
    fn from_big(b: &BigInt) -> Self {
        b.to_i128().expect("coordinate checked against the i128 bound")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl HullNum for BigInt {
    fn from_big(b: &BigInt) -> Self {
        b.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Largest |coordinate| for which every determinant below fits in i128.
pub(crate) fn i128_bound(k: usize) -> BigInt {
    match k {
        0..=2 => BigInt::from(1u64 << 56),
        3 => BigInt::from(1u64 << 36),
        _ => BigInt::from(1u64 << 26),
    }
}

pub(crate) struct LocalHull {
    /// Primitive outer normals `a` with offsets: a.y <= b.
    pub facets: Vec<(Vec<BigInt>, BigRational)>,
    /// Indices of the input points that are vertices, ascending.
    pub vertices: Vec<usize>,
    /// Boundary simplices (k point indices each); cones over `apex` tile the hull.
    pub boundary: Vec<Vec<usize>>,
    /// Sum of the initial simplex; apex = apex_sum / (k+1).
    pub apex_sum: Vec<BigInt>,
    /// k! * (k+1)^k * volume.
    pub scaled_volume: BigInt,
}

struct Facet<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
}

fn dot<T: HullNum>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn det<T: HullNum>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => T::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        n => {
            let mut acc = T::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = m[0][j].clone() * det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Cofactor normal of the hyperplane through k points in Z^k.
fn hyperplane<T: HullNum>(pts: &[&Vec<T>]) -> Vec<T> {
    let k = pts[0].len();
    let rows: Vec<Vec<T>> =
        pts[1..].iter().map(|p| p.iter().zip(pts[0].iter()).map(|(a, b)| a.clone() - b.clone()).collect()).collect();
    (0..k)
        .map(|j| {
            let minor: Vec<Vec<T>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
            let d = det(&minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn initial_simplex(points: &[Vec<BigInt>], k: usize) -> Vec<usize> {
    let mut chosen = vec![0usize];
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff: Vec<BigRational> =
            p.iter().zip(&points[0]).map(|(a, b)| BigRational::from_integer(a - b)).collect();
        let mut trial = rows.clone();
        trial.push(diff);
        let m = RationalMatrix::from_rows(trial.clone()).expect("rectangular");
        if rref(&m).rank == trial.len() {
            rows = trial;
            chosen.push(i);
            if chosen.len() == k + 1 {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), k + 1, "points do not span Z^k");
    chosen
}

/// Hull of distinct points spanning Z^k (k >= 2).
pub(crate) fn local_hull(points: &[Vec<BigInt>], k: usize) -> LocalHull {
    let bound = i128_bound(k);
    if points.iter().flatten().all(|x| x.abs() <= bound) {
        run::<i128>(points, k)
    } else {
        run::<BigInt>(points, k)
    }
}

fn run<T: HullNum>(big: &[Vec<BigInt>], k: usize) -> LocalHull {
    let pts: Vec<Vec<T>> = big.iter().map(|p| p.iter().map(T::from_big).collect()).collect();
    let simplex = initial_simplex(big, k);
    let kk = T::from_big(&BigInt::from(k + 1));
    let apex: Vec<T> = (0..k).map(|j| simplex.iter().fold(T::zero(), |acc, &i| acc + pts[i][j].clone())).collect();

    let make = |verts: Vec<usize>| -> Facet<T> {
        let refs: Vec<&Vec<T>> = verts.iter().map(|&i| &pts[i]).collect();
        let mut normal = hyperplane(&refs);
        let mut offset = dot(&normal, refs[0]);
        // apex/(k+1) must lie strictly inside: a.apex < (k+1) b
        if dot(&normal, &apex) > kk.clone() * offset.clone() {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        Facet { verts, normal, offset }
    };

    let mut facets: Vec<Facet<T>> = (0..=k)
        .map(|skip| {
            let mut v: Vec<usize> = simplex.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &p)| p).collect();
            v.sort_unstable();
            make(v)
        })
        .collect();

    let in_simplex: std::collections::HashSet<usize> = simplex.iter().copied().collect();
    for (p, point) in pts.iter().enumerate() {
        if in_simplex.contains(&p) {
            continue;
        }
        let (visible, hidden): (Vec<Facet<T>>, Vec<Facet<T>>) =
            facets.into_iter().partition(|f| dot(&f.normal, point) > f.offset);
        facets = hidden;
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, u32> = HashMap::new();
        for f in &visible {
            for skip in 0..k {
                let ridge: Vec<usize> = f.verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort_unstable();
        for mut r in horizon {
            r.push(p);
            r.sort_unstable();
            facets.push(make(r));
        }
    }

    // merge coplanar simplices by primitive normal
    let mut merged: Vec<(Vec<BigInt>, BigRational)> = Vec::new();
    let mut index: HashMap<Vec<BigInt>, usize> = HashMap::new();
    for f in &facets {
        let a: Vec<BigInt> = f.normal.iter().map(T::to_big).collect();
        let g = a.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let prim: Vec<BigInt> = a.iter().map(|x| x / &g).collect();
        index.entry(prim.clone()).or_insert_with(|| {
            merged.push((prim, BigRational::new(f.offset.to_big(), g.clone())));
            merged.len() - 1
        });
    }
    merged.sort();

    let mut candidates: Vec<usize> = facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let vertices = candidates
        .into_iter()
        .filter(|&i| {
            let y: Vec<BigRational> = big[i].iter().cloned().map(BigRational::from_integer).collect();
            let tight: Vec<Vec<BigRational>> = merged
                .iter()
                .filter(|(a, b)| {
                    let v: BigRational =
                        a.iter().zip(&y).fold(BigRational::zero(), |acc, (x, z)| acc + BigRational::from_integer(x.clone()) * z);
                    &v == b
                })
                .map(|(a, _)| a.iter().cloned().map(BigRational::from_integer).collect())
                .collect();
            tight.len() >= k && rref(&RationalMatrix::from_rows(tight).expect("rectangular")).rank == k
        })
        .collect();

    let mut scaled_volume = BigInt::zero();
    for f in &facets {
        let m: Vec<Vec<T>> = f
            .verts
            .iter()
            .map(|&i| pts[i].iter().zip(&apex).map(|(x, s)| kk.clone() * x.clone() - s.clone()).collect())
            .collect();
        scaled_volume += det(&m).to_big().abs();
    }

    LocalHull {
        facets: merged,
        vertices,
        boundary: facets.into_iter().map(|f| f.verts).collect(),
        apex_sum: apex.iter().map(T::to_big).collect(),
        scaled_volume,
    }
}
