//! One function per subcommand: build inputs, run the pipeline, shape the report.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use okounkov::exact::{factorial, rat};
use okounkov::inequalities::{inequality_sample, sample_rng};
use okounkov::lattice::{classify_cubes_capped, count_lattice_points};
use okounkov::okounkov::{
    bernstein_count, curve_report_capped, generic_root_count, kushnirenko_count, okounkov_pipeline_capped, Verdict,
};
use okounkov::polytope::mixed_volume;
use okounkov::sagbi::{sagbi_check, SagbiInstance};
use okounkov::semigroup::{hilbert_fit, HilbertFit};
use okounkov::{ExponentVector, GradedSemigroup};

use crate::problem::{polynomial, polynomial_spec, rational, PolynomialSpec, ProblemFile};
use crate::report::{q, CsvTable, Output, PolytopeReport};
use crate::{CliError, Command, Settings};

/// Largest semigroup dump (total points over all degrees) written into a report.
pub const MAX_SECTION_DUMP: usize = 10_000;
pub const DEFAULT_BKK_SAMPLES: usize = 20;
pub const DEFAULT_INEQUALITY_SAMPLES: usize = 100;
pub const DEFAULT_SAGBI_BOUND: usize = 8;

pub fn dispatch(cmd: &Command, p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    match cmd {
        Command::Body(_) => body(p, s),
        Command::Hilbert(_) => hilbert(p, s),
        Command::Mixedvol(_) => mixedvol(p),
        Command::Bkk(_) => bkk(p, s),
        Command::Curve(_) => curve(p, s),
        Command::Inequalities(_) => inequalities(p, s),
        Command::Sagbi(_) => sagbi(p),
        Command::Lattice(_) => lattice(p, s),
    }
}

fn exps(m: &[Vec<i64>]) -> Vec<ExponentVector> {
    m.iter().map(|e| ExponentVector::from(e.clone())).collect()
}

#[derive(Serialize)]
struct FitReport {
    growth_degree: usize,
    leading_coefficient_float: f64,
    exact_coefficient: Option<String>,
    converged: bool,
}

impl FitReport {
    fn new(f: &HilbertFit) -> Self {
        FitReport {
            growth_degree: f.growth_degree,
            leading_coefficient_float: f.leading_coefficient,
            exact_coefficient: f.exact_coefficient.as_ref().map(q),
            converged: f.converged,
        }
    }
}

#[derive(Serialize)]
struct BodyReport {
    model: String,
    subspace: String,
    arity: usize,
    d_max: usize,
    newton_body: PolytopeReport,
    convergence_gap_float: f64,
    rank: usize,
    index: String,
    fit: Option<FitReport>,
    mapping_degree: u64,
    prediction_float: f64,
    exact_prediction: Option<String>,
    hilbert_prediction_float: Option<f64>,
    relative_gap_float: Option<f64>,
    verdict: &'static str,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::Inconsistent => "inconsistent",
        Verdict::Degenerate => "degenerate",
        Verdict::Unfitted => "unfitted",
    }
}

fn body(p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    let model = p.model()?;
    let exprs = p.subspace(&model)?;
    let order = p.order(model.arity())?;
    let r = okounkov_pipeline_capped(&model, &exprs, &order, s.d_max, p.mapping_degree, s.cap_dim)?;
    let summary = format!(
        "body: {} vertices, volume {}, prediction {}, verdict {}",
        r.newton_body.vertices().len(),
        q(r.newton_body.volume()),
        r.exact_prediction.as_ref().map_or_else(|| r.prediction.to_string(), q),
        verdict_name(r.verdict)
    );
    let tables = CsvTable::vertices("vertices", &r.newton_body).into_iter().collect();
    let report = BodyReport {
        newton_body: PolytopeReport::new(&r.newton_body),
        model: r.model,
        subspace: r.subspace,
        arity: r.arity,
        d_max: r.d_max,
        convergence_gap_float: r.convergence_gap,
        rank: r.rank,
        index: r.index.to_string(),
        fit: r.fit.as_ref().map(FitReport::new),
        mapping_degree: r.mapping_degree,
        prediction_float: r.prediction,
        exact_prediction: r.exact_prediction.as_ref().map(q),
        hilbert_prediction_float: r.hilbert_prediction,
        relative_gap_float: r.relative_gap,
        verdict: verdict_name(r.verdict),
    };
    Ok(Output::new("body", &report, summary).with_tables(tables))
}

#[derive(Serialize)]
struct HilbertReport {
    arity: usize,
    d_max: usize,
    /// H(d) for d = 1..=d_max.
    values: Vec<usize>,
    fit: Option<FitReport>,
    /// Values v(L^d \ {0}) per degree, omitted when large.
    sections: Option<Vec<Vec<Vec<i64>>>>,
}

fn hilbert(p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    let model = p.model()?;
    let exprs = p.subspace(&model)?;
    let order = p.order(model.arity())?;
    let l = model.pull_back_subspace(&exprs)?;
    let g = GradedSemigroup::from_subspace_capped(&l, &order, s.d_max, s.cap_dim)?;
    let values = g.hilbert_values();
    let fit = if s.d_max >= 8 { Some(hilbert_fit(&values)?) } else { None };
    let total: usize = values.iter().sum();
    let sections = (total <= MAX_SECTION_DUMP)
        .then(|| g.sections().iter().map(|sec| sec.iter().map(|e| e.entries().to_vec()).collect()).collect());
    let summary = match &fit {
        Some(f) => format!("hilbert: H({}) = {}, growth degree {}, leading coefficient {}", s.d_max, values[s.d_max - 1], f.growth_degree, f.leading_coefficient),
        None => format!("hilbert: H({}) = {}, no fit below d_max = 8", s.d_max, values[s.d_max - 1]),
    };
    let report = HilbertReport { arity: model.arity(), d_max: s.d_max, fit: fit.as_ref().map(FitReport::new), sections, values };
    let tables = vec![CsvTable::hilbert(&report.values)];
    Ok(Output::new("hilbert", &report, summary).with_tables(tables))
}

#[derive(Serialize)]
struct MixedVolumeReport {
    arity: usize,
    bodies: Vec<PolytopeReport>,
    mixed_volume: String,
    /// n!·V(Δ1, ..., Δn).
    normalized: String,
}

fn mixedvol(p: &ProblemFile) -> Result<Output, CliError> {
    let bodies = p.bodies()?;
    let n = bodies.first().map_or(0, |b| b.arity());
    if bodies.len() != n {
        return Err(CliError::Validation(format!("mixed volume in R^{n} needs {n} bodies, got {}", bodies.len())));
    }
    let mv = mixed_volume(&bodies)?;
    let normalized = &mv * BigRational::from_integer(factorial(n));
    let summary = format!("mixedvol: V = {}, n!V = {}", q(&mv), q(&normalized));
    let tables = bodies.iter().enumerate().filter_map(|(i, b)| CsvTable::vertices(format!("vertices_{i}"), b)).collect();
    let report =
        MixedVolumeReport { arity: n, bodies: bodies.iter().map(PolytopeReport::new).collect(), mixed_volume: q(&mv), normalized: q(&normalized) };
    Ok(Output::new("mixedvol", &report, summary).with_tables(tables))
}

#[derive(Serialize)]
struct KushnirenkoReport {
    count: String,
    rank: usize,
    index: Option<String>,
}

#[derive(Serialize)]
struct OracleReport {
    seed: u64,
    samples: usize,
    /// Roots in (C*)^2 of each certified random system.
    counts: Vec<usize>,
    /// Draws needed per sample until a system passed the genericity checks.
    attempts: Vec<usize>,
    agree: bool,
}

#[derive(Serialize)]
struct BkkReport {
    arity: usize,
    supports: Vec<Vec<Vec<i64>>>,
    bernstein_count: String,
    kushnirenko: Option<KushnirenkoReport>,
    oracle: Option<OracleReport>,
}

fn bkk(p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    let raw = ProblemFile::require(&p.supports, "supports")?;
    let supports: Vec<Vec<ExponentVector>> = raw.iter().map(|m| exps(m)).collect();
    let n = supports.first().and_then(|m| m.first()).map_or(0, |e| e.arity());
    if supports.len() != n || supports.iter().any(|m| m.is_empty()) {
        return Err(CliError::Validation(format!("a system in {n} variables needs {n} nonempty supports")));
    }
    let count = bernstein_count(&supports)?;
    let same = supports.windows(2).all(|w| {
        let (mut a, mut b) = (w[0].clone(), w[1].clone());
        a.sort();
        b.sort();
        a.dedup();
        b.dedup();
        a == b
    });
    let kushnirenko = if same {
        let k = kushnirenko_count(&supports[0])?;
        Some(KushnirenkoReport { count: k.count.to_string(), rank: k.rank, index: k.index.map(|i| i.to_string()) })
    } else {
        None
    };
    let samples = p.samples.unwrap_or(if n == 2 { DEFAULT_BKK_SAMPLES } else { 0 });
    let oracle = if n == 2 && samples > 0 {
        let runs = (0..samples)
            .into_par_iter()
            .map(|i| generic_root_count(&supports[0], &supports[1], &mut sample_rng(s.seed, i as u64)))
            .collect::<Result<Vec<_>, _>>()?;
        let expected = count.to_usize();
        let counts: Vec<usize> = runs.iter().map(|r| r.0).collect();
        let agree = counts.iter().all(|&c| Some(c) == expected);
        Some(OracleReport { seed: s.seed, samples, attempts: runs.iter().map(|r| r.1).collect(), counts, agree })
    } else {
        None
    };
    let agree = oracle.as_ref().is_none_or(|o| o.agree);
    let summary = match &oracle {
        Some(o) => format!("bkk: count {count}, oracle {:?} on {} samples", o.counts, o.samples),
        None => format!("bkk: count {count}"),
    };
    let report = BkkReport { arity: n, supports: raw.clone(), bernstein_count: count.to_string(), kushnirenko, oracle };
    Ok(Output::new("bkk", &report, summary).failed_if(!agree))
}

#[derive(Serialize)]
struct DivisibilityReport {
    mapping_degree: u64,
    mu: u64,
    values_divisible: bool,
    index_matches: bool,
    degree_from_segment: String,
    degree_from_hilbert: Option<String>,
    identity_holds: bool,
}

#[derive(Serialize)]
struct CurveOutput {
    point: String,
    d_max: usize,
    segment: [String; 2],
    hilbert_slope: Option<String>,
    /// (C, k0): dim L^k = k·slope + C for k0 <= k <= d_max.
    hilbert_constant: Option<String>,
    linear_from: Option<usize>,
    value_group_index: u64,
    gaps: Vec<Vec<i64>>,
    lower_gap_bound: i64,
    upper_gap_widths: Vec<i64>,
    upper_ray_hit: Option<usize>,
    divisibility: Option<DivisibilityReport>,
}

fn curve(p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    let model = p.model()?;
    let exprs = p.subspace(&model)?;
    let a = p.point.as_deref().map_or(Ok(rat(0)), rational)?;
    let degrees = p.degrees.map(|d| (d.mapping_degree, d.mu));
    let r = curve_report_capped(&model, &exprs, &a, s.d_max, degrees, s.cap_dim)?;
    let segment = okounkov::Polytope::hull(&[vec![r.segment.0.clone()], vec![r.segment.1.clone()]])?;
    let summary = format!(
        "curve: segment [{}, {}], slope {}",
        q(&r.segment.0),
        q(&r.segment.1),
        r.hilbert_slope.as_ref().map_or_else(|| "undetermined".into(), q)
    );
    let report = CurveOutput {
        point: q(&r.point),
        d_max: r.d_max,
        segment: [q(&r.segment.0), q(&r.segment.1)],
        hilbert_slope: r.hilbert_slope.as_ref().map(q),
        hilbert_constant: r.constant.as_ref().map(|c| q(&c.0)),
        linear_from: r.constant.as_ref().map(|c| c.1),
        value_group_index: r.value_group_index,
        gaps: r.gaps,
        lower_gap_bound: r.lower_gap_bound,
        upper_gap_widths: r.upper_gap_widths,
        upper_ray_hit: r.upper_ray_hit,
        divisibility: r.divisibility.map(|d| DivisibilityReport {
            mapping_degree: d.mapping_degree,
            mu: d.mu,
            values_divisible: d.values_divisible,
            index_matches: d.index_matches,
            degree_from_segment: q(&d.degree_from_segment),
            degree_from_hilbert: d.degree_from_hilbert.as_ref().map(q),
            identity_holds: d.identity_holds,
        }),
    };
    let tables = CsvTable::vertices("vertices", &segment).into_iter().collect();
    Ok(Output::new("curve", &report, summary).with_tables(tables))
}

#[derive(Serialize)]
struct InequalityRow {
    index: usize,
    af_holds: bool,
    af_equality: bool,
    af_slack: String,
    bm_holds: bool,
    bm_equality: bool,
    bm_homothetic: bool,
    bm_slack_float: f64,
    cube_chain: bool,
}

#[derive(Serialize)]
struct SlackStats {
    af_min_slack: String,
    af_max_slack: String,
    bm_min_slack_float: f64,
    bm_max_slack_float: f64,
    bm_mean_abs_slack_float: f64,
}

#[derive(Serialize)]
struct InequalityReport {
    arity: usize,
    seed: u64,
    samples: usize,
    af_failures: usize,
    bm_failures: usize,
    cube_chain_failures: usize,
    passed: bool,
    stats: Option<SlackStats>,
    table: Vec<InequalityRow>,
}

fn inequalities(p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    let n = p.arity.unwrap_or(2);
    let samples = p.samples.unwrap_or(DEFAULT_INEQUALITY_SAMPLES);
    let outcomes =
        (0..samples).into_par_iter().map(|i| inequality_sample(n, s.seed, i as u64)).collect::<Result<Vec<_>, _>>()?;
    let table: Vec<InequalityRow> = outcomes
        .iter()
        .enumerate()
        .map(|(index, o)| InequalityRow {
            index,
            af_holds: o.af.holds,
            af_equality: o.af.equality,
            af_slack: q(&o.af.slack()),
            bm_holds: o.bm_homothetic.holds,
            bm_equality: o.bm_homothetic.equality,
            bm_homothetic: o.bm_homothetic.homothetic,
            bm_slack_float: o.bm_homothetic.slack,
            cube_chain: o.cube_chain,
        })
        .collect();
    let af_failures = table.iter().filter(|r| !r.af_holds).count();
    let bm_failures = table.iter().filter(|r| !r.bm_holds).count();
    let cube_chain_failures = table.iter().filter(|r| !r.cube_chain).count();
    let stats = (!outcomes.is_empty()).then(|| {
        let af: Vec<BigRational> = outcomes.iter().map(|o| o.af.slack()).collect();
        let bm: Vec<f64> = outcomes.iter().map(|o| o.bm_homothetic.slack).collect();
        SlackStats {
            af_min_slack: q(af.iter().min().unwrap()),
            af_max_slack: q(af.iter().max().unwrap()),
            bm_min_slack_float: bm.iter().copied().fold(f64::INFINITY, f64::min),
            bm_max_slack_float: bm.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            bm_mean_abs_slack_float: bm.iter().map(|x| x.abs()).sum::<f64>() / bm.len() as f64,
        }
    });
    let failed = af_failures + bm_failures + cube_chain_failures > 0;
    let summary = format!(
        "inequalities: {samples} samples in R^{n}, failures AF {af_failures}, BM {bm_failures}, cube chain {cube_chain_failures}"
    );
    let report =
        InequalityReport { arity: n, seed: s.seed, samples, af_failures, bm_failures, cube_chain_failures, passed: !failed, stats, table };
    Ok(Output::new("inequalities", &report, summary).failed_if(failed))
}

#[derive(Serialize)]
struct WitnessReport {
    value: Vec<i64>,
    element: PolynomialSpec,
}

#[derive(Serialize)]
struct SagbiOutput {
    arity: usize,
    order: Vec<Vec<i64>>,
    generators: Vec<PolynomialSpec>,
    generator_values: Vec<Vec<i64>>,
    degree_bound: usize,
    sagbi_up_to_bound: bool,
    semigroup_generators: Vec<Vec<i64>>,
    value_counts: Vec<usize>,
    witness: Option<WitnessReport>,
}

fn sagbi(p: &ProblemFile) -> Result<Output, CliError> {
    let specs = ProblemFile::require(&p.generators, "generators")?;
    let arity = match p.arity {
        Some(n) => n,
        None => specs
            .iter()
            .flatten()
            .next()
            .map(|t| t.exp.len())
            .ok_or_else(|| CliError::Validation("cannot infer the arity from zero generators; set `arity`".into()))?,
    };
    let gens = specs.iter().map(|g| polynomial(g, arity)).collect::<Result<Vec<_>, _>>()?;
    let order = p.order(arity)?;
    let bound = p.degree_bound.unwrap_or(DEFAULT_SAGBI_BOUND);
    let inst = SagbiInstance::new(gens, order, bound)?;
    let r = sagbi_check(&inst)?;
    let entries = |e: &ExponentVector| e.entries().to_vec();
    let summary = format!(
        "sagbi: {} up to degree {bound}, {} semigroup generators",
        if r.sagbi_up_to_bound { "SAGBI" } else { "not SAGBI" },
        r.semigroup_generators.len()
    );
    let report = SagbiOutput {
        arity,
        order: inst.order().weights().to_vec(),
        generators: inst.generators().iter().map(polynomial_spec).collect(),
        generator_values: inst.values().iter().map(entries).collect(),
        degree_bound: r.degree_bound,
        sagbi_up_to_bound: r.sagbi_up_to_bound,
        semigroup_generators: r.semigroup_generators.iter().map(entries).collect(),
        value_counts: r.value_counts,
        witness: r.witness.map(|(v, f)| WitnessReport { value: entries(&v), element: polynomial_spec(&f) }),
    };
    Ok(Output::new("sagbi", &report, summary))
}

#[derive(Serialize)]
struct CubeReport {
    inside: usize,
    boundary: usize,
}

#[derive(Serialize)]
struct LatticeReport {
    polytope: PolytopeReport,
    lambda: u64,
    count: u64,
    /// count / λ^n.
    normalized_count: String,
    /// |count / λ^n − Vol(P)|.
    gap: String,
    gap_float: f64,
    /// Unit cubes of λ·P (arity <= 3).
    cubes: Option<CubeReport>,
}

fn lattice(p: &ProblemFile, s: &Settings) -> Result<Output, CliError> {
    let bodies = p.bodies()?;
    let [body] = bodies.as_slice() else {
        return Err(CliError::Validation("lattice expects exactly one body".into()));
    };
    let lambda = p.lambda.unwrap_or(1);
    let scaled = body.scale(&BigRational::from_integer(BigInt::from(lambda)))?;
    let count = count_lattice_points(&scaled, s.cap_points)?;
    let n = body.arity();
    let normalized = BigRational::new(BigInt::from(count), BigInt::from(lambda).pow(n as u32));
    let gap = (&normalized - body.volume()).abs();
    let cubes = if n <= 3 {
        let c = classify_cubes_capped(&scaled, s.cap_points)?;
        Some(CubeReport { inside: c.n1, boundary: c.n2 })
    } else {
        None
    };
    let summary = format!("lattice: {count} points in {lambda}·P, count/λ^{n} = {}, gap {}", q(&normalized), q(&gap));
    let tables = CsvTable::vertices("vertices", body).into_iter().collect();
    let report = LatticeReport {
        polytope: PolytopeReport::new(body),
        lambda,
        count: count.to_u64().expect("counts are capped"),
        normalized_count: q(&normalized),
        gap_float: okounkov::exact::to_f64(&gap),
        gap: q(&gap),
        cubes,
    };
    Ok(Output::new("lattice", &report, summary).with_tables(tables))
}

