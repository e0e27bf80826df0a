//! End-to-end acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use okounkov::exact::{rat, ratio, to_f64};
use okounkov::inequalities::{algebraic_analogues_check, inequality_sample, random_support};
use okounkov::lattice::{count_lattice_points, sum_over_lattice, DEFAULT_POINT_CAP};
use okounkov::okounkov::{bernstein_count, generic_root_count, okounkov_pipeline, Verdict};
use okounkov::sagbi::{expand_trace, sagbi_check, subduction, SagbiInstance, SubductionStatus};
use okounkov::semigroup::regularization_constant;
use okounkov::{
    ExponentVector, FunctionSubspace, LaurentPolynomial, Polytope, RationalFunction, TermOrder, VarietyModel,
};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ev(v: &[i64]) -> ExponentVector {
    ExponentVector::from(v)
}

fn mono(v: &[i64]) -> LaurentPolynomial {
    LaurentPolynomial::monomial(ev(v), rat(1))
}

fn lp(terms: &[(i64, &[i64])]) -> LaurentPolynomial {
    LaurentPolynomial::from_i64(2, terms).unwrap()
}

fn square_support() -> Vec<ExponentVector> {
    [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|v| ev(v)).collect()
}

fn kushnirenko() -> Outcome {
    let l: Vec<_> = square_support().iter().map(|e| mono(e.entries())).collect();
    let r = okounkov_pipeline(&VarietyModel::Torus(2), &l, &TermOrder::grlex(2), 16, None).map_err(|e| e.to_string())?;
    let unit = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
    ensure(r.newton_body == unit, || format!("body {:?}", r.newton_body.vertices()))?;
    ensure(r.index == BigInt::from(1), || format!("index {}", r.index))?;
    let fit = r.fit.as_ref().ok_or("no Hilbert fit")?;
    ensure((fit.leading_coefficient - 1.0).abs() <= 0.05, || format!("c = {}", fit.leading_coefficient))?;
    ensure(r.exact_prediction == Some(rat(2)) && r.prediction == 2.0, || format!("prediction {}", r.prediction))?;
    ensure(r.verdict == Verdict::Consistent, || format!("verdict {:?}", r.verdict))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let m = square_support();
    let mut hits = 0;
    for _ in 0..20 {
        let (count, _) = generic_root_count(&m, &m, &mut rng).map_err(|e| e.to_string())?;
        hits += usize::from(count == 2);
    }
    ensure(hits == 20, || format!("resultant oracle agreed on {hits}/20"))
}

fn bezout() -> Outcome {
    let simplex = |d: i64| vec![ev(&[0, 0]), ev(&[d, 0]), ev(&[0, d])];
    for d1 in 1..=4 {
        for d2 in 1..=4 {
            let c = bernstein_count(&[simplex(d1), simplex(d2)]).map_err(|e| e.to_string())?;
            ensure(c == BigInt::from(d1 * d2), || format!("({d1}, {d2}) gave {c}"))?;
        }
    }
    Ok(())
}

fn cusp() -> Outcome {
    let t = |k: i64| RationalFunction::monomial(ev(&[k]));
    let model = VarietyModel::parametrized(1, vec![t(2), t(3)]).unwrap();
    let l = vec![mono(&[0, 0]), mono(&[1, 0]), mono(&[0, 1])];
    let r = okounkov_pipeline(&model, &l, &TermOrder::lex(1), 12, None).map_err(|e| e.to_string())?;
    let seg = Polytope::from_i64(&[&[0], &[3]]).unwrap();
    ensure(r.newton_body == seg, || format!("body {:?}", r.newton_body.vertices()))?;
    // dim L^k from the pulled-back spaces themselves
    let pulled = model.pull_back_subspace(&l).map_err(|e| e.to_string())?;
    for k in 1..=12 {
        let dim = pulled.power(k).map_err(|e| e.to_string())?.dim();
        ensure(dim == 3 * k, || format!("dim L^{k} = {dim}"))?;
    }
    ensure(r.exact_prediction == Some(rat(3)), || format!("prediction {:?}", r.exact_prediction))
}

/// 1 + max depth min(m, k·max − m) of a gap of k*A in [0, k·max], k ≤ k_max (A ⊂ N, 0 ∈ A, gcd 1).
fn brute_force_p(a: &[i64], k_max: usize) -> usize {
    let top = *a.iter().max().unwrap();
    let mut sums: BTreeSet<i64> = [0].into();
    let mut p = 0;
    for k in 1..=k_max as i64 {
        sums = sums.iter().flat_map(|s| a.iter().map(move |x| s + x)).collect();
        for m in 0..=k * top {
            if !sums.contains(&m) {
                p = p.max(m.min(k * top - m) as usize + 1);
            }
        }
    }
    p
}

fn regularization() -> Outcome {
    for (a, expect) in [(vec![0, 2, 3], 2), (vec![0, 1], 0)] {
        let oracle = brute_force_p(&a, 10);
        ensure(oracle == expect, || format!("oracle for {a:?} gave {oracle}"))?;
        let exps: Vec<_> = a.iter().map(|&x| ev(&[x])).collect();
        let r = regularization_constant(&exps, 10).map_err(|e| e.to_string())?;
        ensure(r.p == Some(expect), || format!("{a:?}: P = {:?}", r.p))?;
    }
    Ok(())
}

fn lattice_asymptotics() -> Outcome {
    let lambda = 100i64;
    let square = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap().scale(&rat(lambda)).unwrap();
    let n = count_lattice_points(&square, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    ensure(n == ((lambda + 1) * (lambda + 1)) as u128, || format!("square count {n}"))?;
    let normalized = ratio(n as i64, lambda * lambda);
    ensure(normalized == ratio(10201, 10000), || format!("count/λ² = {normalized}"))?;
    let gap = to_f64(&(normalized - rat(1)));
    ensure(gap < 0.03, || format!("square gap {gap}"))?;
    let tri = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap().scale(&rat(lambda)).unwrap();
    let n = count_lattice_points(&tri, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    ensure(n == ((lambda + 1) * (lambda + 2) / 2) as u128, || format!("triangle count {n}"))?;
    let gap = to_f64(&(ratio(n as i64, lambda * lambda) - ratio(1, 2))).abs();
    ensure(gap < 0.02, || format!("triangle gap {gap}"))
}

fn riemann() -> Outcome {
    let x1 = LaurentPolynomial::from_i64(1, &[(1, &[1])]).unwrap();
    let seg = Polytope::from_i64(&[&[0], &[1]]).unwrap();
    let s = sum_over_lattice(&seg, &x1, 100, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    ensure(s == rat(5050), || format!("segment sum {s}"))?;
    ensure(&s / rat(100 * 100) == ratio(505, 1000), || "Σ/λ² is not 0.505".into())?;
    let x = LaurentPolynomial::from_i64(2, &[(1, &[1, 0])]).unwrap();
    let tri = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
    let s = sum_over_lattice(&tri, &x, 50, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    let direct: i64 = (0..=50i64).flat_map(|i| (0..=50 - i).map(move |_| i)).sum();
    ensure(s == rat(direct), || format!("triangle sum {s} vs {direct}"))?;
    let gap = to_f64(&(s / rat(50 * 50 * 50) - ratio(1, 6))).abs();
    ensure(gap < 0.02, || format!("triangle Riemann gap {gap}"))
}

fn inequality_suites() -> Outcome {
    let mut homothetic = 0;
    for (n, samples) in [(2usize, 1000u64), (3, 100)] {
        for i in 0..samples {
            let s = inequality_sample(n, 7, i).map_err(|e| e.to_string())?;
            ensure(s.af.holds, || format!("AF violated: n = {n}, sample {i}, {:?}", s.af))?;
            ensure(s.cube_chain, || format!("N1 <= Vol <= N1 + N2 violated: n = {n}, sample {i}"))?;
            if homothetic < 50 {
                let bm = &s.bm_homothetic;
                ensure(bm.homothetic && bm.equality && bm.slack.abs() <= 1e-12, || {
                    format!("BM equality missed: n = {n}, sample {i}, {bm:?}")
                })?;
                homothetic += 1;
            }
        }
    }
    Ok(())
}

fn algebraic_analogues() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..200 {
        let m1 = random_support(2, &mut rng);
        let m2 = random_support(2, &mut rng);
        let r = algebraic_analogues_check(&m1, &m2, 6).map_err(|e| e.to_string())?;
        let hodge = r.hodge.as_ref().ok_or("no Hodge verdict in n = 2")?;
        ensure(hodge.holds, || format!("Hodge index violated on pair {i}: {hodge:?}"))?;
        ensure(r.brunn_minkowski.holds, || format!("algebraic BM violated on pair {i}"))?;
        for m in 2..=6 {
            let sub = if m == 6 { r.clone() } else { algebraic_analogues_check(&m1, &m2, m).map_err(|e| e.to_string())? };
            ensure(sub.log_concave, || format!("log-concavity violated on pair {i}, m = {m}: {:?}", sub.degrees))?;
        }
    }
    Ok(())
}

fn random_laurent<R: Rng>(rng: &mut R) -> LaurentPolynomial {
    loop {
        let terms: Vec<(ExponentVector, BigRational)> = (0..rng.gen_range(1..=4))
            .map(|_| (ev(&[rng.gen_range(-3..=3), rng.gen_range(-3..=3)]), ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))))
            .collect();
        let p = LaurentPolynomial::from_terms(2, terms).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_rational<R: Rng>(rng: &mut R) -> RationalFunction {
    RationalFunction::new(random_laurent(rng), random_laurent(rng)).unwrap()
}

fn valuation_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let orders = [TermOrder::lex(2), TermOrder::grlex(2), TermOrder::new(vec![vec![2, -1], vec![0, 1]]).unwrap()];
    for i in 0..500 {
        let ord = &orders[i % orders.len()];
        let f = random_rational(&mut rng);
        let g = random_rational(&mut rng);
        let v = |h: &RationalFunction| ord.value_of_rational(h).map_err(|e| e.to_string());
        let (vf, vg) = (v(&f)?, v(&g)?);
        ensure(v(&f.mul(&g))? == &vf + &vg, || format!("multiplicativity failed on pair {i}"))?;
        let sum = f.add(&g);
        if !sum.is_zero() {
            let low = if ord.compare(&vf, &vg).is_le() { &vf } else { &vg };
            ensure(ord.compare(&v(&sum)?, low).is_ge(), || format!("ultrametric failed on pair {i}"))?;
        }
    }
    for i in 0..200 {
        let ord = &orders[i % orders.len()];
        let fs: Vec<RationalFunction> = (0..rng.gen_range(1..=6)).map(|_| random_rational(&mut rng)).collect();
        // duplicate a combination so the spanning set is dependent
        let mut fs2 = fs.clone();
        if fs.len() >= 2 {
            fs2.push(fs[0].add(&fs[1].scale(&rat(3))));
        }
        let l = FunctionSubspace::new(2, fs2).map_err(|e| e.to_string())?;
        let ech = ord.echelonize(&l).map_err(|e| e.to_string())?;
        ensure(ech.len() == l.dim(), || format!("subspace {i}: {} values for dim {}", ech.len(), l.dim()))?;
        let distinct: BTreeSet<_> = ech.iter().map(|(e, _)| e.clone()).collect();
        ensure(distinct.len() == ech.len(), || format!("subspace {i}: repeated values"))?;
    }
    Ok(())
}

fn sagbi() -> Outcome {
    let gens = vec![lp(&[(1, &[1, 0]), (1, &[0, 1])]), lp(&[(1, &[1, 1])])];
    let inst = SagbiInstance::new(gens, TermOrder::lex(2), 8).map_err(|e| e.to_string())?;
    let r = sagbi_check(&inst).map_err(|e| e.to_string())?;
    ensure(r.sagbi_up_to_bound, || format!("witness {:?}", r.witness))?;
    let f = lp(&[(1, &[2, 0]), (1, &[0, 2])]);
    let s = subduction(&f, &inst).map_err(|e| e.to_string())?;
    ensure(s.status == SubductionStatus::Member && s.remainder.is_zero(), || format!("x²+y² left {}", s.remainder))?;
    ensure(expand_trace(&inst, &s.trace) == f, || "trace does not re-expand to x²+y²".into())?;
    let s = subduction(&lp(&[(1, &[1, 0])]), &inst).map_err(|e| e.to_string())?;
    ensure(!s.remainder.is_zero(), || "x subducted to zero".into())
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "1 Kushnirenko consistency", budget: secs(10), run: kushnirenko },
        Criterion { name: "2 Bernstein/Bezout", budget: secs(1), run: bezout },
        Criterion { name: "3 cusp curve", budget: secs(5), run: cusp },
        Criterion { name: "4 regularization", budget: secs(1), run: regularization },
        Criterion { name: "5 lattice asymptotics", budget: secs(5), run: lattice_asymptotics },
        Criterion { name: "6 Riemann sums", budget: secs(5), run: riemann },
        Criterion { name: "7 inequality suites", budget: secs(60), run: inequality_suites },
        Criterion { name: "8 algebraic analogues", budget: secs(30), run: algebraic_analogues },
        Criterion { name: "9 valuation laws", budget: secs(30), run: valuation_laws },
        Criterion { name: "10 SAGBI", budget: secs(10), run: sagbi },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(elapsed <= c.budget, || format!("took {elapsed:.2?}, budget {:?}", c.budget))
        });
        match &outcome {
            Ok(()) => println!("PASS  {:<28} {:>9.3?}", c.name, elapsed),
            Err(msg) => {
                println!("FAIL  {:<28} {:>9.3?}  {msg}", c.name, elapsed);
                failed.push(c.name);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

