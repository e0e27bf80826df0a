//! Diameter, inradius, inner parallel bodies and boundary measure.

use num_rational::BigRational;
use num_traits::Zero;

use super::{FloatPolytope, Polytope};
use crate::error::{Error, Result};
use crate::exact::to_f64;

pub const LP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub diameter: f64,
    pub inradius: f64,
    pub incenter: Vec<f64>,
    /// diameter / inradius
    pub stretch_ratio: f64,
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// (d)-dimensional volume of the unit sphere S^d ⊂ R^{d+1}.
pub fn unit_sphere_volume(d: usize) -> f64 {
    (d + 1) as f64 * unit_ball_volume(d + 1)
}

fn require_full(p: &Polytope) -> Result<()> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { dim: p.affine_dim(), arity: p.arity() });
    }
    Ok(())
}

fn float_facets(p: &Polytope) -> Vec<(Vec<f64>, f64)> {
    p.facets()
        .iter()
        .map(|f| (f.normal.iter().map(|a| to_f64(&BigRational::from_integer(a.clone()))).collect(), to_f64(&f.offset)))
        .collect()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Maximal Euclidean distance between vertices.
pub fn diameter(p: &Polytope) -> f64 {
    let vs = p.vertices();
    let mut best = BigRational::zero();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let d2 = vs[i].iter().zip(&vs[j]).fold(BigRational::zero(), |acc, (a, b)| acc + (a - b) * (a - b));
            if d2 > best {
                best = d2;
            }
        }
    }
    to_f64(&best).sqrt()
}

pub fn metric_report(p: &Polytope) -> Result<MetricReport> {
    require_full(p)?;
    let diameter = diameter(p);
    let (incenter, inradius) = chebyshev_center(p);
    Ok(MetricReport { diameter, inradius, incenter, stretch_ratio: diameter / inradius })
}

/// Largest inscribed ball: maximize t subject to a_i.x + |a_i| t <= b_i.
///
/// The origin is moved to the vertex centroid (an interior point), so the
/// all-slack basis is feasible. Dense tableau simplex with Bland's rule.
pub fn chebyshev_center(p: &Polytope) -> (Vec<f64>, f64) {
    let n = p.arity();
    let nv = p.vertices().len() as f64;
    let centroid: Vec<f64> = (0..n).map(|j| p.vertices().iter().map(|v| to_f64(&v[j])).sum::<f64>() / nv).collect();
    let facets = float_facets(p);
    let m = facets.len();
    // columns: z+ (n), z- (n), t, slacks (m), rhs
    let cols = 2 * n + 1 + m;
    let mut tab = vec![vec![0.0; cols + 1]; m + 1];
    for (i, (a, b)) in facets.iter().enumerate() {
        for j in 0..n {
            tab[i][j] = a[j];
            tab[i][n + j] = -a[j];
        }
        tab[i][2 * n] = norm(a);
        tab[i][2 * n + 1 + i] = 1.0;
        tab[i][cols] = b - a.iter().zip(&centroid).map(|(x, c)| x * c).sum::<f64>();
    }
    // objective row holds reduced costs of "minimize -t"
    tab[m][2 * n] = -1.0;
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + 1 + i).collect();
    loop {
        let Some(enter) = (0..cols).find(|&j| tab[m][j] < -LP_TOLERANCE) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if tab[i][enter] > LP_TOLERANCE {
                let ratio = tab[i][cols] / tab[i][enter];
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let best = tab[l][cols] / tab[l][enter];
                        if ratio < best - LP_TOLERANCE || (ratio <= best + LP_TOLERANCE && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        let Some(r) = leave else {
            break; // unbounded cannot happen for a bounded polytope
        };
        let piv = tab[r][enter];
        for x in tab[r].iter_mut() {
            *x /= piv;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r && row[enter] != 0.0 {
                let f = row[enter];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        basis[r] = enter;
    }
    let mut z = vec![0.0; 2 * n + 1];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n + 1 {
            z[b] = tab[i][cols];
        }
    }
    let center = (0..n).map(|j| centroid[j] + z[j] - z[n + j]).collect();
    (center, z[2 * n])
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    Some(x)
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Points at distance >= r from the boundary: facets pushed inward by r.
pub fn inner_parallel_body(p: &Polytope, r: f64) -> Result<FloatPolytope> {
    require_full(p)?;
    if r < 0.0 || !r.is_finite() {
        return Err(Error::invalid("offset radius must be finite and non-negative"));
    }
    let n = p.arity();
    if r == 0.0 {
        return Ok(FloatPolytope::new(n, p.vertices().iter().map(|v| v.iter().map(to_f64).collect()).collect()));
    }
    let half: Vec<(Vec<f64>, f64)> = float_facets(p).into_iter().map(|(a, b)| {
        let nb = b - r * norm(&a);
        (a, nb)
    }).collect();
    let scale = half.iter().map(|(_, b)| b.abs()).fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for idx in combinations(half.len(), n) {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| half[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| half[i].1).collect();
        let Some(x) = solve(a, b) else { continue };
        let feasible = half.iter().all(|(a, b)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>() <= b + tol * norm(a));
        if feasible && !verts.iter().any(|v| v.iter().zip(&x).all(|(u, w)| (u - w).abs() <= tol)) {
            verts.push(x);
        }
    }
    verts.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    Ok(FloatPolytope::new(n, verts))
}

/// Perimeter (n = 2) or surface area (n = 3).
pub fn boundary_measure(p: &Polytope) -> Result<f64> {
    require_full(p)?;
    match p.arity() {
        2 => {
            let cyc = p.polygon_cycle().expect("full-dimensional polygon");
            Ok((0..cyc.len())
                .map(|i| {
                    let (a, b) = (&cyc[i], &cyc[(i + 1) % cyc.len()]);
                    let d2 = (&a[0] - &b[0]) * (&a[0] - &b[0]) + (&a[1] - &b[1]) * (&a[1] - &b[1]);
                    to_f64(&d2).sqrt()
                })
                .sum())
        }
        3 => {
            let mut total = 0.0;
            for f in p.facets() {
                // project the facet along the coordinate where the normal is largest
                let j = (0..3).max_by_key(|&j| num_traits::Signed::abs(&f.normal[j])).unwrap();
                let pts: Vec<Vec<BigRational>> = p
                    .vertices()
                    .iter()
                    .filter(|v| f.value(v) == f.offset)
                    .map(|v| v.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let projected = Polytope::hull(&pts)?;
                let a: Vec<f64> = f.normal.iter().map(|x| to_f64(&BigRational::from_integer(x.clone()))).collect();
                total += to_f64(projected.volume()) * norm(&a) / a[j].abs();
            }
            Ok(total)
        }
        n => Err(Error::UnsupportedArity { arity: n, reason: "boundary measure needs n in {2, 3}" }),
    }
}
