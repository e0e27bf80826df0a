//! Property suites for polytopes, mixed volumes, metric bounds and lattice counts.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use okounkov::exact::{factorial, rat, to_f64};
use okounkov::inequalities::random_lattice_polytope;
use okounkov::lattice::{classify_cubes, count_lattice_points, DEFAULT_POINT_CAP};
use okounkov::polytope::metric::{boundary_measure, diameter, inner_parallel_body, metric_report, unit_ball_volume, unit_sphere_volume};
use okounkov::polytope::mixed_volume;
use okounkov::Polytope;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn full(n: usize, r: &mut ChaCha8Rng) -> Polytope {
    random_lattice_polytope(n, true, r)
}

fn f64_facets(p: &Polytope) -> Vec<(Vec<f64>, f64)> {
    p.facets()
        .iter()
        .map(|f| (f.normal.iter().map(|a| to_f64(&BigRational::from_integer(a.clone()))).collect(), to_f64(&f.offset)))
        .collect()
}

#[test]
fn mixed_volume_symmetric_and_multilinear() {
    let mut r = rng(10);
    for n in [2usize, 3] {
        let samples = if n == 2 { 60 } else { 8 };
        for _ in 0..samples {
            let bodies: Vec<Polytope> = (0..n).map(|_| random_lattice_polytope(n, false, &mut r)).collect();
            let v = mixed_volume(&bodies).unwrap();
            let mut rev = bodies.clone();
            rev.reverse();
            assert_eq!(mixed_volume(&rev).unwrap(), v);
            rev.rotate_left(1);
            assert_eq!(mixed_volume(&rev).unwrap(), v);

            let extra = random_lattice_polytope(n, false, &mut r);
            let mut summed = bodies.clone();
            summed[0] = bodies[0].minkowski_sum(&extra).unwrap();
            let mut other = bodies.clone();
            other[0] = extra;
            assert_eq!(mixed_volume(&summed).unwrap(), v + mixed_volume(&other).unwrap());
        }
    }
}

#[test]
fn mixed_volume_monotone_under_inclusion() {
    let mut r = rng(11);
    for n in [2usize, 3] {
        for _ in 0..if n == 2 { 60 } else { 8 } {
            let bodies: Vec<Polytope> = (0..n).map(|_| random_lattice_polytope(n, false, &mut r)).collect();
            let mut pts: Vec<Vec<BigRational>> = bodies[0].vertices().to_vec();
            pts.push((0..n).map(|_| rat(r.gen_range(-2..=8))).collect());
            let bigger = Polytope::hull(&pts).unwrap();
            assert!(bigger.contains_polytope(&bodies[0]));
            let mut grown = bodies.clone();
            grown[0] = bigger;
            assert!(mixed_volume(&bodies).unwrap() <= mixed_volume(&grown).unwrap());
        }
    }
}

#[test]
fn inner_parallel_sums_stay_inside() {
    // (A_r1 + B_r2) + (r1 + r2)·ball ⊆ A + B, checked at the vertices of A_r1 + B_r2
    let mut r = rng(12);
    let mut checked = 0;
    for _ in 0..100 {
        let a = full(2, &mut r);
        let b = full(2, &mut r);
        let (r1, r2) = (r.gen_range(0.0..0.8), r.gen_range(0.0..0.8));
        let ai = inner_parallel_body(&a, r1).unwrap();
        let bi = inner_parallel_body(&b, r2).unwrap();
        if ai.is_empty() || bi.is_empty() {
            continue;
        }
        checked += 1;
        let sum = a.minkowski_sum(&b).unwrap();
        for x in ai.minkowski_points(&bi) {
            for (normal, offset) in f64_facets(&sum) {
                let norm = normal.iter().map(|u| u * u).sum::<f64>().sqrt();
                let dist = (offset - normal.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>()) / norm;
                assert!(dist >= r1 + r2 - 1e-6, "distance {dist} < {}", r1 + r2);
            }
        }
    }
    assert!(checked >= 50, "only {checked} usable samples");
}

#[test]
fn inner_parallel_volume_loss_bounded_by_boundary() {
    let mut r = rng(13);
    for n in [2usize, 3] {
        for _ in 0..100 {
            let p = full(n, &mut r);
            let vol = to_f64(p.volume());
            let boundary = boundary_measure(&p).unwrap();
            for radius in [0.1, 0.5, 1.0] {
                let inner = inner_parallel_body(&p, radius).unwrap().volume().unwrap();
                assert!(vol - inner <= radius * boundary + 1e-6, "n = {n}, r = {radius}: {vol} - {inner} > {}", radius * boundary);
            }
        }
    }
}

#[test]
fn volume_bounded_below_by_diameter_and_inradius() {
    let mut r = rng(14);
    for n in [2usize, 3] {
        for _ in 0..100 {
            let p = full(n, &mut r);
            let m = metric_report(&p).unwrap();
            let fac = to_f64(&BigRational::from_integer(factorial(n - 1)));
            let bound = m.diameter * m.inradius.powi(n as i32 - 1) * unit_ball_volume(n - 1) / (2.0 * fac);
            assert!(to_f64(p.volume()) >= bound - 1e-6, "n = {n}: vol {} < {bound}", to_f64(p.volume()));
        }
    }
}

#[test]
fn cube_chains_hold_exactly() {
    let mut r = rng(15);
    for n in [1usize, 2, 3] {
        for _ in 0..100 {
            let p = random_lattice_polytope(n, false, &mut r);
            let c = classify_cubes(&p).unwrap();
            let points = count_lattice_points(&p, DEFAULT_POINT_CAP).unwrap() as i64;
            let (n1, n12) = (rat(c.n1 as i64), rat((c.n1 + c.n2) as i64));
            assert!(&n1 <= p.volume() && p.volume() <= &n12);
            assert!(c.n1 as i64 <= points && points <= (c.n1 + c.n2) as i64);
        }
    }
}

#[test]
fn boundary_cube_count_bounded_by_diameter() {
    let mut r = rng(16);
    for n in [2usize, 3] {
        for _ in 0..100 {
            let p = random_lattice_polytope(n, false, &mut r);
            let c = classify_cubes(&p).unwrap();
            let sn = (n as f64).sqrt();
            let bound = 2.0 * sn * unit_sphere_volume(n - 1) * (diameter(&p) + sn).powi(n as i32 - 1);
            assert!(c.n2 as f64 <= bound + 1e-6, "n = {n}: N2 = {} > {bound}", c.n2);
        }
    }
}

/// F(μ, n)·Vol^{-1/n} with the constants of the N2 bound and of the inscribed cone
/// of height D/2: F = 4n√n·ω(n−1)/Ω_{n−1}·(μ + √n)^{n−1}.
fn boundary_ratio_bound(n: usize, stretch: f64, vol: f64) -> f64 {
    let sn = (n as f64).sqrt();
    let c = 4.0 * n as f64 * sn * unit_sphere_volume(n - 1) / unit_ball_volume(n - 1);
    c * (stretch + sn).powi(n as i32 - 1) * vol.powf(-1.0 / n as f64)
}

#[test]
fn boundary_cube_ratio_on_bodies_with_unit_ball() {
    let mut r = rng(17);
    for n in [2usize, 3] {
        let mut checked = 0;
        while checked < 60 {
            let p = full(n, &mut r).scale(&rat(r.gen_range(1..=3))).unwrap();
            let m = metric_report(&p).unwrap();
            if m.inradius < 1.0 {
                continue;
            }
            checked += 1;
            let c = classify_cubes(&p).unwrap();
            let vol = to_f64(p.volume());
            let bound = boundary_ratio_bound(n, m.stretch_ratio, vol);
            assert!(c.n2 as f64 / vol <= bound, "n = {n}: N2/Vol = {} > {bound}", c.n2 as f64 / vol);
        }
    }
}

#[test]
fn boundary_cube_ratio_needs_its_constant() {
    // (μ + √n)^{n−1}·Vol^{-1/n} without a constant is exceeded here
    let p = Polytope::from_i64(&[&[0, 3], &[1, 2], &[4, 1], &[4, 6]]).unwrap();
    let m = metric_report(&p).unwrap();
    assert!(m.inradius >= 1.0);
    let vol = to_f64(p.volume());
    let ratio = classify_cubes(&p).unwrap().n2 as f64 / vol;
    assert!(ratio > (m.stretch_ratio + 2f64.sqrt()) * vol.powf(-0.5));
    assert!(ratio <= boundary_ratio_bound(2, m.stretch_ratio, vol));
}

#[test]
fn dilated_counts_approach_volume() {
    let mut r = rng(18);
    for n in [2usize, 3] {
        for _ in 0..if n == 2 { 40 } else { 15 } {
            let p = full(n, &mut r);
            let vol = to_f64(p.volume());
            let gap = |l: i64| {
                let count = count_lattice_points(&p.scale(&rat(l)).unwrap(), DEFAULT_POINT_CAP).unwrap();
                (count as f64 / (l as f64).powi(n as i32) - vol).abs()
            };
            let mut prev = gap(4);
            for l in [8, 16] {
                let g = gap(l);
                assert!(g < prev, "n = {n}: gap at {l} is {g}, previous {prev}");
                prev = g;
            }
        }
    }
}
