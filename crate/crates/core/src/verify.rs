//! Runtime self-verification: every analytic identity the crate relies on,
//! checked against an independent route and reported property by property.
//!
//! The quick level keeps every check under a few seconds. The full level
//! additionally brute-forces the three-loop pairing census (34 million
//! matchings) and widens the randomized trial counts.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::graph::{
    double_factorial, enumerate_graphs, OrientedGraph, TrivalentGraph,
};
use crate::lie::{lie_weight, su2_data, sun_data, LieData};
use crate::link::{
    hopf_pair, linking_number, linking_number_exact, parallel_curve, torus_link_pair, trefoil,
    writhe, writhe_projection_average, PolyCurve,
};
use crate::quadrature::gauss_legendre;
use crate::quotient::quotient_integral;
use crate::series::{
    euclidean_truncation_check, expand, expand_connected, pairing_oracle_coefficient, series_exp,
};
use crate::tensor::{CubicModel, CubicTensor, Tensor};
use crate::wick::{moment_gauss_hermite, moment_wick, visit_pairings, QuadraticForm, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

/// Runs every property check and returns one report per property.
pub fn run(level: VerifyLevel, cfg: &Config) -> Vec<PropertyReport> {
    let full = level == VerifyLevel::Full;
    let checks: Vec<(&'static str, Box<dyn FnOnce() -> Result<String>>)> = vec![
        ("one-loop-census", Box::new(one_loop_census)),
        (
            "double-factorial-identity",
            Box::new(move || double_factorial_identity(full)),
        ),
        ("wick-vs-quadrature", {
            let cfg = cfg.clone();
            Box::new(move || wick_vs_quadrature(&cfg, if full { 20 } else { 5 }))
        }),
        ("c1-pairing-oracle", {
            let cfg = cfg.clone();
            Box::new(move || c1_pairing_oracle(&cfg))
        }),
        ("exp-connected-consistency", {
            let cfg = cfg.clone();
            Box::new(move || exp_connected_consistency(&cfg, if full { 10 } else { 4 }))
        }),
        ("truncation-identity", {
            let cfg = cfg.clone();
            Box::new(move || truncation_identity(&cfg))
        }),
        ("lie-dumbbell-vanishes", {
            let cfg = cfg.clone();
            Box::new(move || lie_dumbbell_vanishes(&cfg, if full { 10 } else { 3 }))
        }),
        ("lie-theta-brute-force", Box::new(lie_theta_brute_force)),
        (
            "jacobi-residual",
            Box::new(move || jacobi_residual_check(if full { 4 } else { 3 })),
        ),
        ("ihx-relation", Box::new(ihx_relation)),
        ("hopf-and-split-links", {
            let cfg = cfg.clone();
            Box::new(move || hopf_and_split_links(&cfg))
        }),
        ("link-corpus-oracle", {
            let cfg = cfg.clone();
            Box::new(move || link_corpus_oracle(&cfg))
        }),
        ("writhe-planar-mirror", Box::new(writhe_planar_mirror)),
        ("writhe-projection-average", {
            let cfg = cfg.clone();
            Box::new(move || writhe_projection_average_check(&cfg))
        }),
        ("quotient-integrals", Box::new(quotient_integrals)),
    ];
    checks
        .into_iter()
        .map(|(name, check)| match check() {
            Ok(details) => PropertyReport {
                name,
                passed: true,
                details,
            },
            Err(err) => PropertyReport {
                name,
                passed: false,
                details: err.to_string(),
            },
        })
        .collect()
}

fn fail(msg: String) -> crate::error::Error {
    crate::error::Error::ParameterDomain(msg)
}

fn one_loop_census() -> Result<String> {
    let table = enumerate_graphs(1, 5)?;
    let mut auts: Vec<u64> = table.classes.iter().map(|c| c.aut_order).collect();
    auts.sort_unstable();
    let mut mults: Vec<u64> = table.classes.iter().map(|c| c.multiplicity).collect();
    mults.sort_unstable();
    if auts != [8, 12] || mults != [6, 9] || table.multiplicity_sum() != 15 {
        return Err(fail(format!(
            "expected aut orders [8, 12] and multiplicities [6, 9] summing to 15, got {auts:?} {mults:?}"
        )));
    }
    Ok("2 classes, |Aut| = 8 and 12, multiplicities 9 + 6 = 15".into())
}

fn double_factorial_identity(full: bool) -> Result<String> {
    let max_m = if full { 3 } else { 2 };
    let mut parts = Vec::new();
    for m in 1..=max_m {
        let table = enumerate_graphs(m, 5)?;
        let sum = table.multiplicity_sum();
        let want = double_factorial(6 * m as u64 - 1);
        if sum != want {
            return Err(fail(format!(
                "m={m}: class multiplicities sum to {sum}, double factorial is {want}"
            )));
        }
        // The multiplicities come from the orbit-stabilizer count; pin them
        // against a literal walk over every perfect matching.
        if 6 * m <= if full { 18 } else { 12 } {
            let mut visited = 0u64;
            visit_pairings(6 * m, |_| visited += 1);
            if visited != want {
                return Err(fail(format!(
                    "m={m}: enumerated {visited} matchings, expected {want}"
                )));
            }
        }
        parts.push(format!("m={m}: {sum}"));
    }
    Ok(parts.join(", "))
}

fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    &a * a.transpose() + DMatrix::identity(n, n) * 0.4
}

fn random_model(n: usize, coupling: f64, rng: &mut ChaCha8Rng) -> Result<CubicModel> {
    let q = QuadraticForm::new(random_spd(n, rng))?;
    let raw = Tensor::from_fn(&[n, n, n], |_| rng.random_range(-coupling..coupling));
    CubicModel::new(q, CubicTensor::from_dense(raw)?)
}

fn wick_vs_quadrature(cfg: &Config, trials: usize) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let n = 1 + trial % 3;
        let q = QuadraticForm::new(random_spd(n, &mut rng))?;
        let degree = 2 * (1 + rng.random_range(0..4usize));
        let indices: Vec<usize> = (0..degree).map(|_| rng.random_range(0..n)).collect();
        let wick = moment_wick(&q, &indices, Variant::Euclidean)?.re;
        let quad = moment_gauss_hermite(&q, &indices, 8)?;
        let rel = (wick - quad).abs() / wick.abs().max(quad.abs()).max(1e-10);
        worst = worst.max(rel);
        if rel > 1e-8 {
            return Err(fail(format!(
                "trial {trial}: wick {wick} vs quadrature {quad}, relative {rel:.2e}"
            )));
        }
    }
    Ok(format!(
        "{trials} seeded moments (N <= 3, degree <= 8), worst relative {worst:.2e}"
    ))
}

fn scalar_model(v: f64) -> Result<CubicModel> {
    let q = QuadraticForm::new(DMatrix::from_element(1, 1, 1.0))?;
    let cubic = CubicTensor::from_entries(1, &[(0, 0, 0, v)])?;
    CubicModel::new(q, cubic)
}

fn c1_pairing_oracle(cfg: &Config) -> Result<String> {
    let v = 2.0;
    let model = scalar_model(v)?;
    let series = expand(&model, 1, cfg)?;
    let c1 = series.coefficients[1];
    let expected = Complex64::new(0.0, 5.0 * v * v / 24.0);
    let oracle = pairing_oracle_coefficient(&model, 1, cfg)?;
    let rel_expected = (c1 - expected).norm() / expected.norm();
    let rel_oracle = (c1 - oracle).norm() / oracle.norm();
    if rel_expected > 1e-12 || rel_oracle > 1e-12 {
        return Err(fail(format!(
            "c1 = {c1}, closed form {expected}, pairing oracle {oracle}"
        )));
    }
    Ok(format!(
        "c1 = i 5v^2/24 reproduced by ledger and raw pairings (rel {rel_oracle:.1e})"
    ))
}

fn exp_connected_consistency(cfg: &Config, models: usize) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x5e5e);
    let mut worst = 0.0f64;
    for trial in 0..models {
        let n = 1 + trial % 3;
        let model = random_model(n, 0.4, &mut rng)?;
        let fullseries = expand(&model, 2, cfg)?;
        let connected = expand_connected(&model, 2, cfg)?;
        let rebuilt = series_exp(&connected.coefficients);
        for (order, (a, b)) in rebuilt
            .iter()
            .zip(fullseries.coefficients.iter())
            .enumerate()
        {
            let rel = (a - b).norm() / b.norm().max(1e-12);
            worst = worst.max(rel);
            if rel > 1e-10 {
                return Err(fail(format!(
                    "model {trial} order {order}: exp(log) {a} vs full {b}, relative {rel:.2e}"
                )));
            }
        }
    }
    Ok(format!(
        "exp of connected series equals full series through order 2 for {models} models, worst relative {worst:.2e}"
    ))
}

fn truncation_identity(cfg: &Config) -> Result<String> {
    let mut results = Vec::new();
    let scalar = scalar_model(0.1)?;
    let check1 = euclidean_truncation_check(&scalar, 1, 1.0, cfg)?;
    results.push(("N=1", check1.relative_error));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x77);
    let model = random_model(2, 0.05, &mut rng)?;
    let check2 = euclidean_truncation_check(&model, 1, 1.5, cfg)?;
    results.push(("N=2", check2.relative_error));

    for (name, rel) in &results {
        if *rel > 1e-6 {
            return Err(fail(format!(
                "{name}: truncated series vs quadrature relative error {rel:.2e}"
            )));
        }
    }
    Ok(results
        .iter()
        .map(|(name, rel)| format!("{name}: rel {rel:.2e}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn lie_dumbbell_vanishes(cfg: &Config, randoms: usize) -> Result<String> {
    let dumbbell = OrientedGraph::with_identity(TrivalentGraph::dumbbell());
    let mut datasets: Vec<(String, LieData)> = vec![
        ("su(2)".into(), su2_data()),
        ("su(3)".into(), sun_data(3)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0xA11);
    for t in 0..randoms {
        let d = 3 + t % 3;
        let mut entries = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    entries.push((i, j, k, rng.random_range(-1.0..1.0)));
                }
            }
        }
        let data = LieData::from_entries(DMatrix::identity(d, d), &entries)?;
        datasets.push((format!("random antisymmetric #{t} (dim {d})"), data));
    }
    let mut worst = 0.0f64;
    for (name, data) in &datasets {
        let w = lie_weight(data, &dumbbell)?;
        worst = worst.max(w.abs());
        if w.abs() > 1e-14 {
            return Err(fail(format!("{name}: dumbbell weight {w} is not zero")));
        }
    }
    Ok(format!(
        "{} structure tensors, largest |weight| {worst:.1e}",
        datasets.len()
    ))
}

fn lie_theta_brute_force() -> Result<String> {
    // Test normalization: c = epsilon, B = identity.
    let data = LieData::from_entries(DMatrix::identity(3, 3), &[(0, 1, 2, 1.0)])?;
    let theta = OrientedGraph::with_identity(TrivalentGraph::theta());
    let weight = lie_weight(&data, &theta)?;
    let mut brute = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                brute += data.structure_constant(a, b, c) * data.structure_constant(a, b, c);
            }
        }
    }
    if (weight - brute).abs() > 1e-12 {
        return Err(fail(format!(
            "theta weight {weight} vs brute-force contraction {brute}"
        )));
    }
    Ok(format!("theta weight {weight} equals brute-force {brute}"))
}

fn jacobi_residual_check(max_n: usize) -> Result<String> {
    let mut parts = vec![format!("su(2) hand-normalized: {:.1e}", su2_data().jacobi_residual())];
    if su2_data().jacobi_residual() > 1e-12 {
        return Err(fail("hand-normalized su(2) violates Jacobi".into()));
    }
    for n in 2..=max_n {
        let data = sun_data(n)?;
        let residual = data.jacobi_residual();
        if residual > 1e-10 {
            return Err(fail(format!("su({n}) Jacobi residual {residual:.2e}")));
        }
        parts.push(format!("su({n}): {residual:.1e}"));
    }
    Ok(parts.join(", "))
}

/// Four trivalent vertices with two fixed edges; the three completions I, H,
/// X differ only in how the four free half-edges of the outer vertices meet
/// the middle ones. Ad-invariance plus Jacobi forces b(I) - b(H) + b(X) = 0.
pub fn ihx_graphs() -> Result<[OrientedGraph; 3]> {
    let base = [(2usize, 3usize), (8, 11)];
    let orientation = vec![[0usize, 1, 2], [4, 5, 3], [6, 7, 8], [9, 10, 11]];
    let build = |extra: [(usize, usize); 4]| -> Result<OrientedGraph> {
        let pairs: Vec<(usize, usize)> =
            base.iter().copied().chain(extra.iter().copied()).collect();
        OrientedGraph::new(TrivalentGraph::new(4, pairs)?, orientation.clone())
    };
    Ok([
        build([(0, 6), (1, 7), (4, 9), (5, 10)])?,
        build([(0, 6), (1, 9), (4, 7), (5, 10)])?,
        build([(0, 7), (1, 9), (4, 6), (5, 10)])?,
    ])
}

fn ihx_relation() -> Result<String> {
    let [i_graph, h_graph, x_graph] = ihx_graphs()?;
    let data = su2_data();
    let wi = lie_weight(&data, &i_graph)?;
    let wh = lie_weight(&data, &h_graph)?;
    let wx = lie_weight(&data, &x_graph)?;
    let residual = (wi - wh + wx).abs();
    let scale = wi.abs().max(wh.abs()).max(wx.abs());
    if scale < 1e-6 {
        return Err(fail("IHX test is vacuous: all three weights are zero".into()));
    }
    if residual > 1e-10 * scale.max(1.0) {
        return Err(fail(format!(
            "I - H + X = {residual:.2e} (weights {wi}, {wh}, {wx})"
        )));
    }
    Ok(format!(
        "I = {wi}, H = {wh}, X = {wx}; I - H + X = {residual:.1e}"
    ))
}

fn hopf_and_split_links(cfg: &Config) -> Result<String> {
    let (c1, c2) = hopf_pair(64)?;
    let hopf = linking_number(&c1, &c2, cfg.link_tol)?;
    let hopf_exact = linking_number_exact(&c1, &c2)?;
    if hopf.nearest_integer.abs() != 1
        || hopf.estimate_error > 1e-3
        || hopf_exact != hopf.nearest_integer
    {
        return Err(fail(format!("hopf: {hopf:?} vs oracle {hopf_exact}")));
    }
    let far = PolyCurve::circle(
        Vector3::new(25.0, 0.0, 0.0),
        1.0,
        Vector3::x(),
        Vector3::z(),
        32,
    )?;
    let split = linking_number(&c1, &far, cfg.link_tol)?;
    if split.value.abs() > 1e-6 || linking_number_exact(&c1, &far)? != 0 {
        return Err(fail(format!("split link: {split:?}")));
    }
    Ok(format!(
        "hopf {:+.6} (err {:.1e}), split {:+.2e}",
        hopf.value, hopf.estimate_error, split.value
    ))
}

/// Ten disjoint curve pairs with a priori linking magnitudes where known.
pub fn link_corpus() -> Result<Vec<(String, PolyCurve, PolyCurve, Option<i64>)>> {
    let mut corpus = Vec::new();
    let (h1, h2) = hopf_pair(64)?;
    corpus.push(("hopf".to_string(), h1.clone(), h2.clone(), Some(1)));
    let reversed = PolyCurve::from_vectors(h2.points().iter().rev().copied().collect())?;
    corpus.push(("hopf-reversed".to_string(), h1.clone(), reversed, Some(1)));
    let far = PolyCurve::circle(
        Vector3::new(25.0, 0.0, 0.0),
        1.0,
        Vector3::x(),
        Vector3::z(),
        32,
    )?;
    corpus.push(("split-far".to_string(), h1.clone(), far, Some(0)));
    let (t1, t2) = torus_link_pair(48)?;
    corpus.push(("torus-2-4".to_string(), t1, t2, Some(2)));

    let sextic = |phase: f64| -> Result<PolyCurve> {
        let points = (0..72)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 72.0;
                let pol = 3.0 * t + phase;
                let radial = 2.0 + 0.5 * pol.cos();
                Vector3::new(radial * t.cos(), radial * t.sin(), 0.5 * pol.sin())
            })
            .collect();
        PolyCurve::from_vectors(points)
    };
    corpus.push((
        "torus-2-6".to_string(),
        sextic(0.0)?,
        sextic(std::f64::consts::PI)?,
        Some(3),
    ));

    let inner = PolyCurve::circle(Vector3::zeros(), 1.0, Vector3::x(), Vector3::y(), 32)?;
    let outer = PolyCurve::circle(Vector3::zeros(), 2.0, Vector3::x(), Vector3::y(), 32)?;
    corpus.push(("concentric-coplanar".to_string(), inner, outer, Some(0)));

    let knot = trefoil(12)?;
    let ribbon = parallel_curve(&knot, 0.05)?;
    corpus.push(("trefoil-parallel".to_string(), knot, ribbon, None));

    let rot = nalgebra::Rotation3::from_euler_angles(0.3, 1.2, -0.7);
    let moved = |c: &PolyCurve| c.map_points(|p| rot * (p * 1.7) + Vector3::new(5.0, -3.0, 2.0));
    corpus.push(("hopf-moved".to_string(), moved(&h1)?, moved(&h2)?, Some(1)));

    let big = PolyCurve::circle(Vector3::zeros(), 3.0, Vector3::x(), Vector3::y(), 48)?;
    let thread = PolyCurve::circle(
        Vector3::new(3.0, 0.0, 0.0),
        0.4,
        Vector3::x(),
        Vector3::z(),
        24,
    )?;
    corpus.push(("threaded-ring".to_string(), big.clone(), thread, Some(1)));

    let gap = PolyCurve::circle(
        Vector3::new(5.5, 0.0, 0.0),
        1.0,
        Vector3::x(),
        Vector3::z(),
        32,
    )?;
    corpus.push(("chain-gap".to_string(), big, gap, Some(0)));
    Ok(corpus)
}

fn link_corpus_oracle(cfg: &Config) -> Result<String> {
    let corpus = link_corpus()?;
    let count = corpus.len();
    let mut worst = 0.0f64;
    for (name, c1, c2, expected) in corpus {
        let result = linking_number(&c1, &c2, cfg.link_tol)?;
        let oracle = linking_number_exact(&c1, &c2)?;
        worst = worst.max(result.estimate_error);
        if result.nearest_integer != oracle || result.estimate_error > cfg.link_tol {
            return Err(fail(format!(
                "{name}: integral {result:?} vs crossing oracle {oracle}"
            )));
        }
        if let Some(magnitude) = expected {
            if oracle.abs() != magnitude {
                return Err(fail(format!(
                    "{name}: |lk| = {} but construction promises {magnitude}",
                    oracle.abs()
                )));
            }
        }
    }
    Ok(format!(
        "{count} pairs agree with the crossing oracle, worst integer distance {worst:.1e}"
    ))
}

fn writhe_planar_mirror() -> Result<String> {
    let hexagon = PolyCurve::circle(
        Vector3::new(1.0, 2.0, -0.5),
        1.5,
        Vector3::x(),
        Vector3::y(),
        6,
    )?;
    let planar = writhe(&hexagon)?;
    if planar.abs() > 1e-10 {
        return Err(fail(format!("planar hexagon writhe {planar}")));
    }
    let knot = trefoil(16)?;
    let mirrored = knot.map_points(|p| Vector3::new(p.x, p.y, -p.z))?;
    let w = writhe(&knot)?;
    let wm = writhe(&mirrored)?;
    if (w + wm).abs() > 1e-10 {
        return Err(fail(format!("mirror sum {w} + {wm} = {}", w + wm)));
    }
    Ok(format!(
        "planar {planar:.1e}, trefoil {w:+.4} vs mirror {wm:+.4}"
    ))
}

fn writhe_projection_average_check(cfg: &Config) -> Result<String> {
    let knot = trefoil(12)?;
    let exact = writhe(&knot)?;
    let averaged = writhe_projection_average(&knot, 192, cfg.rng_seed)?;
    let diff = (exact - averaged).abs();
    if diff > 1e-3 {
        return Err(fail(format!(
            "solid angle {exact} vs projection average {averaged}, diff {diff:.2e}"
        )));
    }
    Ok(format!(
        "solid angle {exact:.6} vs directional average {averaged:.6} (diff {diff:.1e})"
    ))
}

fn quotient_integrals() -> Result<String> {
    use std::f64::consts::PI;
    let narrow = quotient_integral(|r| (-r * r).exp(), 8.0)?;
    if (narrow - PI).abs() > 1e-10 {
        return Err(fail(format!("e^(-r^2) integrates to {narrow}, want pi")));
    }
    let disc = quotient_integral(|_| 1.0, 1.0)?;
    if (disc - PI).abs() > 1e-12 {
        return Err(fail(format!("unit disc area {disc}, want pi")));
    }
    let wide = quotient_integral(|r| (-0.5 * r * r).exp(), 10.0)?;
    if (wide - 2.0 * PI).abs() > 1e-10 {
        return Err(fail(format!("e^(-r^2/2) integrates to {wide}, want 2 pi")));
    }
    // Cross-check the wide gaussian against direct plane quadrature.
    let (nodes, weights) = gauss_legendre(96);
    let half = 10.0;
    let mut plane = 0.0;
    for (i, &wx) in weights.iter().enumerate() {
        let x = half * nodes[i];
        for (j, &wy) in weights.iter().enumerate() {
            let y = half * nodes[j];
            plane += wx * wy * (-0.5 * (x * x + y * y)).exp();
        }
    }
    plane *= half * half;
    if (wide - plane).abs() > 1e-9 {
        return Err(fail(format!(
            "radial route {wide} vs plane quadrature {plane}"
        )));
    }
    Ok(format!(
        "pi, pi, 2 pi reproduced; plane-quadrature cross-check diff {:.1e}",
        (wide - plane).abs()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_level_passes_every_property() {
        let cfg = Config::default();
        let reports = run(VerifyLevel::Quick, &cfg);
        assert_eq!(reports.len(), 15);
        for report in &reports {
            assert!(report.passed, "{}: {}", report.name, report.details);
        }
    }
}
