use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{hilbert_fit, sumsets, GradedSemigroup, HilbertFit, Section};
use crate::error::{Error, Result};
use crate::exact::{lattice_basis, rat, rref, to_f64, IntegerMatrix, Point, RationalMatrix};
use crate::lattice::{lattice_points_capped, DEFAULT_POINT_CAP};
use crate::laurent::ExponentVector;
use crate::polytope::{Facet, Polytope};

/// Affine chart x = origin + y·B for a lattice T with basis rows B.
#[derive(Clone, Debug)]
pub struct TCoordinates {
    origin: Vec<BigRational>,
    basis: IntegerMatrix,
    pivots: Vec<usize>,
    pivot_inverse: RationalMatrix,
}

impl TCoordinates {
    /// `basis` must have independent rows.
    pub fn new(origin: &[BigRational], basis: IntegerMatrix) -> Result<Self> {
        let k = basis.rows();
        let r = rref(&basis.to_rational());
        if r.rank != k {
            return Err(Error::invalid("lattice basis rows are dependent"));
        }
        let pivots = r.pivot_columns.clone();
        let sub = RationalMatrix::from_rows(
            (0..k).map(|i| pivots.iter().map(|&j| BigRational::from_integer(basis[(i, j)].clone())).collect()).collect(),
        )?;
        let pivot_inverse = if k == 0 { sub } else { sub.inverse().expect("pivot block is invertible") };
        Ok(TCoordinates { origin: origin.to_vec(), basis, pivots, pivot_inverse })
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Local coordinates of x, or None when x is off the affine span.
    pub fn to_local(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        let k = self.rank();
        let diff: Vec<BigRational> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        let y: Vec<BigRational> = (0..k)
            .map(|j| (0..k).fold(BigRational::zero(), |acc, i| acc + &diff[self.pivots[i]] * &self.pivot_inverse[(i, j)]))
            .collect();
        (self.to_ambient(&y) == x).then_some(y)
    }

    pub fn to_ambient(&self, y: &[BigRational]) -> Vec<BigRational> {
        let mut x = self.origin.clone();
        for (i, yi) in y.iter().enumerate() {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += yi * BigRational::from_integer(self.basis[(i, j)].clone());
            }
        }
        x
    }

    fn local_integer(&self, x: &[BigRational]) -> Result<Vec<i64>> {
        let y = self.to_local(x).ok_or_else(|| Error::invalid("point outside the lattice chart"))?;
        y.iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64().ok_or_else(|| Error::invalid("coordinate overflow"))
                } else {
                    Err(Error::invalid("point outside the lattice"))
                }
            })
            .collect()
    }

    fn local_polytope(&self, p: &Polytope) -> Result<Polytope> {
        let pts = p
            .vertices()
            .iter()
            .map(|v| self.to_local(v).ok_or_else(|| Error::invalid("polytope outside the lattice chart")))
            .collect::<Result<Vec<_>>>()?;
        Polytope::hull(&pts)
    }
}

fn int_point(y: &[i64]) -> Point {
    y.iter().map(|&c| rat(c)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularizationReport {
    /// Smallest P valid for every scanned k, or None when the maximal gap depth
    /// still grows in the upper half of the scan.
    pub p: Option<usize>,
    /// Max gap depth + 1 over the whole scan (0 without gaps).
    pub p_scanned: usize,
    /// (k, gap point, depth) for every gap found.
    pub witnesses: Vec<(usize, ExponentVector, u64)>,
    pub t_rank: usize,
}

fn depth(facets: &[Facet], k: usize, y: &Point) -> u64 {
    let kk = rat(k as i64);
    facets
        .iter()
        .map(|f| (&f.offset * &kk - f.value(y)).to_integer().to_u64().unwrap_or(0))
        .min()
        .unwrap_or(0)
}

/// Regularization scan: gaps of k*A inside kΔ ∩ (k·a0 + T), with
/// depth counted in lattice steps per primitive facet normal of Δ in T-coordinates.
pub fn regularization_constant(a: &[ExponentVector], k_max: usize) -> Result<RegularizationReport> {
    let set: BTreeSet<ExponentVector> = a.iter().cloned().collect();
    let a0 = set.iter().next().ok_or_else(|| Error::invalid("empty generator set"))?.clone();
    let n = a0.arity();
    if set.iter().any(|e| e.arity() != n) {
        return Err(Error::ArityMismatch { expected: n, found: set.iter().find(|e| e.arity() != n).unwrap().arity() });
    }
    if n > 2 {
        return Err(Error::UnsupportedArity { arity: n, reason: "regularization scan supports arity at most 2" });
    }
    if set.len() > 8 || k_max > 12 || k_max == 0 {
        return Err(Error::invalid("regularization scan needs |A| <= 8 and 1 <= k_max <= 12"));
    }
    let diffs: Vec<Vec<BigInt>> = set.iter().map(|e| (e - &a0).entries().iter().map(|&x| BigInt::from(x)).collect()).collect();
    let basis = lattice_basis(&IntegerMatrix::from_rows(diffs, n)?);
    let chart = TCoordinates::new(&vec![BigRational::zero(); n], basis)?;
    let r = chart.rank();
    if r == 0 {
        return Ok(RegularizationReport { p: Some(0), p_scanned: 0, witnesses: Vec::new(), t_rank: 0 });
    }
    let local: Section = set
        .iter()
        .map(|e| Ok(ExponentVector::new(chart.local_integer(&(e - &a0).to_rational())?)))
        .collect::<Result<_>>()?;
    let delta = Polytope::hull(&local.iter().map(|e| e.to_rational()).collect::<Vec<_>>())?;
    let sums = sumsets(&local, k_max, usize::MAX)?;
    let mut witnesses = Vec::new();
    let mut per_k = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let body = delta.scale(&rat(k as i64))?;
        let mut worst: Option<u64> = None;
        for y in lattice_points_capped(&body, DEFAULT_POINT_CAP)? {
            if sums[k - 1].contains(&ExponentVector::new(y.clone())) {
                continue;
            }
            let dep = depth(delta.facets(), k, &int_point(&y));
            worst = Some(worst.map_or(dep, |w| w.max(dep)));
            let ambient = chart.to_ambient(&int_point(&y));
            let x: Vec<i64> = ambient
                .iter()
                .zip(a0.entries())
                .map(|(c, &o)| c.to_integer().to_i64().unwrap() + k as i64 * o)
                .collect();
            witnesses.push((k, ExponentVector::new(x), dep));
        }
        per_k.push(worst.map_or(0, |w| w as usize + 1));
    }
    let p_scanned = per_k.iter().copied().max().unwrap_or(0);
    let half = k_max / 2;
    let early = per_k[..half.max(1)].iter().copied().max().unwrap_or(0);
    let stable = k_max < 2 || early >= p_scanned;
    Ok(RegularizationReport { p: stable.then_some(p_scanned), p_scanned, witnesses, t_rank: r })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub degree: usize,
    /// |M(d)| and |G(d)|.
    pub m_count: usize,
    pub g_count: usize,
    /// Minimal Euclidean distance from M(d) \ G(d) to the relative boundary of C(d); +∞ without gaps.
    pub residual: f64,
    /// Maximal such distance; 0 without gaps.
    pub max_gap_distance: f64,
}

fn projected_norms(p: &Polytope) -> Vec<f64> {
    // project facet normals onto the direction space of p
    let eqs: Vec<Vec<f64>> = {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for e in p.equations() {
            let mut v: Vec<f64> = e.normal.iter().map(|x| x.to_f64().unwrap()).collect();
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                basis.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        basis
    };
    p.facets()
        .iter()
        .map(|f| {
            let mut a: Vec<f64> = f.normal.iter().map(|x| x.to_f64().unwrap()).collect();
            for b in &eqs {
                let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                a.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
            a.iter().map(|x| x * x).sum::<f64>().sqrt()
        })
        .collect()
}

/// r(d) for G against M of type (cone over Δ(G), T, anchor).
pub fn approximation_residual(g: &GradedSemigroup, d: usize) -> Result<ResidualReport> {
    g.section(d)?;
    let delta = g.newton_body()?;
    let lat = g.difference_lattice();
    let dd = rat(d as i64);
    let origin: Vec<BigRational> = g.anchor().to_rational().iter().map(|c| c * &dd).collect();
    let chart = TCoordinates::new(&origin, lat.basis.clone())?;
    let cd = delta.scale(&dd)?;
    let section = g.section(d)?;
    let norms = projected_norms(&cd);
    let mut m_count = 0usize;
    let mut residual = f64::INFINITY;
    let mut max_gap = 0.0f64;
    let mut visit = |x: Point| {
        m_count += 1;
        let e = ExponentVector::new(x.iter().map(|c| c.to_integer().to_i64().unwrap()).collect());
        if section.contains(&e) {
            return;
        }
        let dist = cd
            .facets()
            .iter()
            .zip(&norms)
            .map(|(f, norm)| to_f64(&f.slack(&x)) / norm)
            .fold(f64::INFINITY, f64::min);
        residual = residual.min(dist);
        max_gap = max_gap.max(dist);
    };
    if chart.rank() == 0 {
        visit(origin.clone());
    } else {
        let local = chart.local_polytope(&cd)?;
        for y in lattice_points_capped(&local, DEFAULT_POINT_CAP)? {
            visit(chart.to_ambient(&int_point(&y)));
        }
    }
    Ok(ResidualReport { degree: d, m_count, g_count: section.len(), residual, max_gap_distance: max_gap })
}

#[derive(Clone, Debug)]
pub struct SemigroupDiagnostics {
    pub rank: usize,
    pub index: BigInt,
    pub anchor: ExponentVector,
    pub newton_body: Polytope,
    pub convergence_gap: f64,
    pub hilbert_fit: Option<HilbertFit>,
    /// Regularization constant of the semigroup generated by G(1), when the scan caps allow it.
    pub regularization_p: Option<RegularizationReport>,
}

impl SemigroupDiagnostics {
    pub fn compute(g: &GradedSemigroup) -> Result<Self> {
        let lat = g.difference_lattice();
        let first: Vec<ExponentVector> = g.section(1)?.iter().cloned().collect();
        let regularization_p = if g.arity() <= 2 && first.len() <= 8 {
            Some(regularization_constant(&first, g.d_max().min(12))?)
        } else {
            None
        };
        Ok(SemigroupDiagnostics {
            rank: lat.rank,
            index: lat.index,
            anchor: g.anchor().clone(),
            newton_body: g.newton_body()?,
            convergence_gap: g.convergence_gap()?,
            hilbert_fit: hilbert_fit(&g.hilbert_values()).ok(),
            regularization_p,
        })
    }
}
