//! Acceptance sweeps for the headline identities.
//!
//! Each suite draws seeded cases, replays one factorization or determinant
//! identity end to end, and reports a single pass/fail verdict with the
//! worst observed error and its runtime. The CLI `verify` subcommand and
//! the `acceptance` integration test both call into this module, so the
//! shell and the test suite agree on what passing means.

use std::f64::consts::TAU;
use std::time::Instant;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::birkhoff::{
    birkhoff_factorization, counterexample_loop, triangular_factorization, tricondition_residual,
    WeylElement,
};
use crate::dets::{det_formula, det_report};
use crate::error::Error;
use crate::laurent::LaurentSeries;
use crate::loop2::{
    iwasawa_su11, polar_su11, sup_distance, winding_component, GroupKind, LoopMatrix,
};
use crate::par;
use crate::rootsub::{
    a_param, analyze_g2, dichotomy_g2, partial_rsf, synth_full, synth_g1, synth_g2,
    RootSubgroupData,
};
use crate::toeplitz::{
    det_aa, det_aa_dense, injectivity_section, lemma_matrices, singular_values_ascending,
    triangular_family,
};
use crate::Result;

/// One verdict line of the acceptance report.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Suite names accepted by [`run_suite`], in report order.
pub const SUITES: &[&str] = &[
    "products",
    "dets",
    "ratio",
    "lemma",
    "strata",
    "dichotomy",
    "counterexample",
    "partial-rsf",
    "properties",
];

/// Runs every suite with the given master seed.
pub fn run_all(seed: u64) -> Vec<CheckLine> {
    SUITES.iter().map(|s| run_suite(s, seed).expect("listed suite")).collect()
}

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64) -> Result<CheckLine> {
    match name {
        "products" => Ok(suite_products(seed)),
        "dets" => Ok(suite_dets(seed)),
        "ratio" => Ok(suite_ratio(seed)),
        "lemma" => Ok(suite_lemma(seed)),
        "strata" => Ok(suite_strata()),
        "dichotomy" => Ok(suite_dichotomy()),
        "counterexample" => Ok(suite_counterexample(seed)),
        "partial-rsf" => Ok(suite_partial_rsf(seed)),
        "properties" => Ok(suite_properties(seed)),
        _ => Err(Error::WrongShape { detail: format!("unknown suite {name:?}") }),
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

/// Independent stream per (suite, case) so parallel order cannot matter.
fn case_rng(seed: u64, tag: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ case.wrapping_mul(0xd134_2543_de82_ef95),
    )
}

fn disk_sample(rng: &mut ChaCha8Rng, max_mod: f64) -> Complex64 {
    Complex64::from_polar(max_mod * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
}

/// Σ cⱼzʲ − conj(cⱼ)z⁻ʲ over the given positive modes.
fn anti_series(modes: &[(i64, Complex64)]) -> LaurentSeries {
    let mut pairs = Vec::with_capacity(2 * modes.len());
    for (j, c) in modes {
        pairs.push((*j, *c));
        pairs.push((-*j, -c.conj()));
    }
    LaurentSeries::from_pairs(&pairs)
}

fn entry_gap(a: &LoopMatrix, b: &LoopMatrix) -> f64 {
    let ea = a.entries();
    let eb = b.entries();
    (0..4).map(|i| (ea[i] - eb[i]).norm_max()).fold(0.0, f64::max)
}

fn pad_gap(a: &[Complex64], b: &[Complex64]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|i| (a.get(i).copied().unwrap_or_default() - b.get(i).copied().unwrap_or_default()).norm())
        .fold(0.0, f64::max)
}

/// Folds per-case worst errors into a verdict line; any case error fails.
fn gate(
    name: &'static str,
    label: &str,
    results: Vec<std::result::Result<f64, String>>,
    tol: f64,
    t0: Instant,
    budget: f64,
) -> CheckLine {
    let dt = t0.elapsed().as_secs_f64();
    let mut worst = 0.0f64;
    for r in &results {
        match r {
            Ok(v) => worst = worst.max(*v),
            Err(e) => return CheckLine { name, pass: false, detail: format!("{label}: {e}") },
        }
    }
    let mut pass = worst <= tol;
    let mut detail = format!("{label}: worst {worst:.2e} (tol {tol:.0e})");
    if budget.is_finite() {
        pass = pass && dt <= budget;
        detail.push_str(&format!(", {dt:.2}s of {budget:.0}s"));
    } else {
        detail.push_str(&format!(", {dt:.2}s"));
    }
    CheckLine { name, pass, detail }
}

/// Criterion 1: the diagonal scale of a chain factorization is the product
/// of the pointwise scales, a₁ = Π a(ηᵢ) and a₂ = (Π a(ζₖ))⁻¹.
fn suite_products(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    let results = par::map_collect(500, |i| {
        let mut rng = case_rng(seed, 1, i as u64);
        let etas: Vec<Complex64> =
            (0..rng.random_range(0..=6)).map(|_| disk_sample(&mut rng, 0.8)).collect();
        let zetas: Vec<Complex64> =
            (0..rng.random_range(0..=6)).map(|_| disk_sample(&mut rng, 0.8)).collect();
        (|| -> Result<f64> {
            let a1 = triangular_factorization(&synth_g1(&etas)?)?.a0;
            let a2 = triangular_factorization(&synth_g2(&zetas)?)?.a0;
            let p1: f64 = etas.iter().map(|e| a_param(*e)).product();
            let p2: f64 = zetas.iter().map(|z| a_param(*z)).product();
            Ok(rel(a1, p1).max(rel(a2, 1.0 / p2)))
        })()
        .map_err(|e| format!("case {i}: {e}"))
    });
    gate("products", "a0 vs chain products on 500 draws (length <= 6, |params| <= 0.8)", results, 1e-9, t0, 10.0)
}

const DET_TRUNC: i64 = 28;
const DET_DENSE_N: i64 = 32;

/// Shared draw for the two determinant suites. Cases 0 and 1 are pinned:
/// the sharp single-η exponent and the pure Szegő–Widom torus loop.
fn det_case(seed: u64, i: usize) -> Result<RootSubgroupData> {
    if i == 0 {
        return RootSubgroupData::new(vec![c64(0.55, -0.2)], Vec::new(), LaurentSeries::zero(), 0.0);
    }
    if i == 1 {
        let chi = anti_series(&[(1, c64(0.12, 0.08)), (2, c64(0.0, -0.05)), (3, c64(0.03, 0.0))]);
        return RootSubgroupData::new(Vec::new(), Vec::new(), chi, 0.4);
    }
    let mut rng = case_rng(seed, 2, i as u64);
    let etas: Vec<Complex64> =
        (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.6)).collect();
    let zetas: Vec<Complex64> =
        (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.6)).collect();
    let deg = rng.random_range(0..=3i64);
    let modes: Vec<(i64, Complex64)> = (1..=deg).map(|j| (j, disk_sample(&mut rng, 0.1))).collect();
    let chi0 = rng.random_range(-3.0..3.0);
    RootSubgroupData::new(etas, zetas, anti_series(&modes), chi0)
}

/// Criterion 2: closed form, exact finite-rank determinant, and dense
/// section at N = 32 agree for both identities.
fn suite_dets(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    let results = par::map_collect(100, |i| {
        (|| -> Result<f64> {
            let data = det_case(seed, i)?;
            let g = synth_full(&data, DET_TRUNC)?;
            let g_inv = g.inverse()?;
            let mut worst = 0.0f64;
            for shifted in [false, true] {
                let f = det_formula(&data, shifted)?;
                let o = det_aa(&g, &g_inv, shifted)?;
                let d = det_aa_dense(&g, &g_inv, DET_DENSE_N, shifted)?;
                worst = worst.max(rel(f, o)).max(rel(f, d)).max(rel(o, d));
            }
            if i == 0 {
                // single η₀: the unshifted exponent is 0, so the determinant is 1
                worst = worst.max((det_formula(&data, false)? - 1.0).abs());
            }
            if i == 1 {
                let sw: f64 = data
                    .chi
                    .iter()
                    .filter(|(j, _)| *j > 0)
                    .map(|(j, c)| (-2.0 * j as f64 * c.norm_sqr()).exp())
                    .product();
                worst = worst.max(rel(det_formula(&data, false)?, sw));
            }
            Ok(worst)
        })()
        .map_err(|e| format!("case {i}: {e}"))
    });
    gate("dets", "three-way determinant agreement on 100 draws (dense N = 32)", results, 1e-6, t0, 30.0)
}

/// Criterion 3: the shifted/unshifted ratio equals a₀² and the closed form
/// Π(1−|ζ|²)/Π(1−|η|²), on the same draws as the determinant suite.
fn suite_ratio(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    let results = par::map_collect(100, |i| {
        (|| -> Result<f64> { Ok(det_report(&det_case(seed, i)?, DET_TRUNC)?.rel_err_a0) })()
            .map_err(|e| format!("case {i}: {e}"))
    });
    gate("ratio", "a0^2 ratio identity on the same 100 draws", results, 1e-6, t0, f64::INFINITY)
}

/// Coefficient draw for the invertibility-lemma suite. A slice of the draws
/// is engineered to be exactly singular so both directions of the
/// equivalence are exercised: geometric coefficients make both lemma
/// matrices rank one (n ≥ 2), and zeroing one Hardy side kills exactly one
/// of det A′, det A″.
fn lemma_case(seed: u64, n: usize, i: usize) -> Vec<Complex64> {
    let mut rng = case_rng(seed, 40 + n as u64, i as u64);
    let kind = rng.random::<f64>();
    let mut c: Vec<Complex64> = (0..2 * n)
        .map(|_| Complex64::from_polar(0.3 + rng.random::<f64>(), TAU * rng.random::<f64>()))
        .collect();
    let at = |k: i64| (k + n as i64 - 1) as usize;
    if kind < 0.15 {
        let alpha = Complex64::from_polar(0.4 + 0.6 * rng.random::<f64>(), TAU * rng.random::<f64>());
        let beta = Complex64::from_polar(0.4 + 0.5 * rng.random::<f64>(), TAU * rng.random::<f64>());
        for k in -(n as i64 - 1)..=n as i64 {
            c[at(k)] = alpha * beta.powi(k as i32);
        }
    } else if kind < 0.30 {
        if rng.random::<bool>() {
            for k in -(n as i64 - 1)..=0 {
                c[at(k)] = Complex64::default();
            }
        } else {
            for k in 1..=n as i64 {
                c[at(k)] = Complex64::default();
            }
        }
    }
    c
}

/// Criterion 4: section invertibility at N = 16 matches the n×n lemma
/// matrices, with a small margin band around zero excluded.
fn suite_lemma(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    let mut marginal = 0usize;
    let mut total = 0usize;
    let mut bad: Vec<String> = Vec::new();
    for n in 1..=3usize {
        let rows = par::map_collect(200, |i| {
            (|| -> Result<[(f64, f64); 2]> {
                let c = lemma_case(seed, n, i);
                let lm = lemma_matrices(&c, n)?;
                let tri = triangular_family(&c, n)?;
                let sv = singular_values_ascending(&injectivity_section(&tri, 16, false))[0];
                let sv_s = singular_values_ascending(&injectivity_section(&tri, 16, true))[0];
                let dp = lm.a_prime.clone().lu().determinant().norm();
                let dpp = lm.a_dprime.clone().lu().determinant().norm();
                Ok([(dp, sv), (dpp, sv_s)])
            })()
            .map_err(|e| format!("n={n} case {i}: {e}"))
        });
        for (i, row) in rows.into_iter().enumerate() {
            match row {
                Err(e) => bad.push(e),
                Ok(pairs) => {
                    for (which, (d, sv)) in pairs.into_iter().enumerate() {
                        total += 1;
                        if (1e-10..=1e-6).contains(&d) {
                            marginal += 1;
                            continue;
                        }
                        if (d > 1e-6) != (sv > 1e-8) {
                            let tag = if which == 0 { "A'" } else { "A''" };
                            bad.push(format!("n={n} case {i} {tag}: |det| {d:.2e} vs sv {sv:.2e}"));
                        }
                    }
                }
            }
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    let frac = marginal as f64 / total.max(1) as f64;
    let pass = bad.is_empty() && frac < 0.02 && dt <= 20.0;
    let mut detail = format!(
        "section (N = 16) vs lemma matrices, 3 x 200 draws: {} disagreements, {marginal}/{total} marginal, {dt:.2}s of 20s",
        bad.len()
    );
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    CheckLine { name: "lemma", pass, detail }
}

/// Criterion 5: the four-case stratum table of the degree-one triangular
/// family, with the factor matrices pinned entrywise.
fn suite_strata() -> CheckLine {
    let t0 = Instant::now();
    let one = LaurentSeries::one();
    let zero = LaurentSeries::zero();
    let mono = |d: i64, x: f64| LaurentSeries::monomial(d, c64(x, 0.0));
    let series = |p: &[(i64, f64)]| {
        LaurentSeries::from_pairs(&p.iter().map(|(d, x)| (*d, c64(*x, 0.0))).collect::<Vec<_>>())
    };
    let upper = |s: LaurentSeries| LoopMatrix::new(one.clone(), s, zero.clone(), one.clone());

    struct Table {
        c: [f64; 2],
        w: WeylElement,
        l: LoopMatrix,
        d: Complex64,
        u: LoopMatrix,
    }
    let cases = [
        Table {
            c: [2.0, 1.0],
            w: WeylElement::identity(),
            l: LoopMatrix::new(
                series(&[(-1, -2.0), (0, 1.0)]),
                mono(-1, 0.5),
                LaurentSeries::constant(c64(-4.0, 0.0)),
                one.clone(),
            ),
            d: c64(-0.5, 0.0),
            u: LoopMatrix::new(one.clone(), one.clone(), mono(1, -0.5), series(&[(0, 1.0), (1, -0.5)])),
        },
        Table {
            c: [1.0, 0.0],
            w: WeylElement::r1(),
            l: upper(mono(-1, 1.0)),
            d: c64(1.0, 0.0),
            u: upper(mono(1, 1.0)),
        },
        Table {
            c: [0.0, 1.0],
            w: WeylElement::r0(),
            l: upper(mono(-2, 1.0)),
            d: c64(1.0, 0.0),
            u: upper(one.clone()),
        },
        Table {
            c: [0.0, 0.0],
            w: WeylElement::translation(-1),
            l: LoopMatrix::identity(),
            d: c64(1.0, 0.0),
            u: LoopMatrix::identity(),
        },
    ];

    let mut worst = 0.0f64;
    let mut strata: Vec<String> = Vec::new();
    for case in &cases {
        let mut run = || -> Result<f64> {
            let g = triangular_family(&[c64(case.c[0], 0.0), c64(case.c[1], 0.0)], 1)?;
            let f = birkhoff_factorization(&g)?;
            if f.w != case.w {
                return Err(Error::WrongShape {
                    detail: format!(
                        "({}, {}): stratum ({}, {}) instead of ({}, {})",
                        case.c[0], case.c[1], f.w.n, f.w.flip, case.w.n, case.w.flip
                    ),
                });
            }
            strata.push(format!("({}, {})", f.w.n, f.w.flip));
            let mid = f.m0 * c64(f.a0, 0.0);
            let gap = entry_gap(&f.l, &case.l)
                .max(entry_gap(&f.u, &case.u))
                .max((mid - case.d).norm())
                .max((c64(1.0, 0.0) / mid - c64(1.0, 0.0) / case.d).norm());
            Ok(gap)
        };
        match run() {
            Ok(gap) => worst = worst.max(gap),
            Err(e) => return CheckLine { name: "strata", pass: false, detail: e.to_string() },
        }
    }
    // the (0,0) stratum really is the composite reflection r₀r₁
    let composite_ok = WeylElement::r0().compose(&WeylElement::r1()) == WeylElement::translation(-1);
    let dt = t0.elapsed().as_secs_f64();
    let pass = worst <= 1e-10 && composite_ok;
    CheckLine {
        name: "strata",
        pass,
        detail: format!(
            "strata {} with factors entrywise to {worst:.2e} (tol 1e-10), r0r1 = t(-1): {composite_ok}, {dt:.2}s",
            strata.join(", ")
        ),
    }
}

/// Criterion 6: the n = 2 dichotomy grid. Both signs positive builds a
/// chain, both negative builds a loop outside the image, mixed signs admit
/// no loop at all.
fn suite_dichotomy() -> CheckLine {
    let t0 = Instant::now();
    let pts: Vec<f64> = (0..21).map(|k| -2.1 + 0.21 * k as f64).collect();
    let rows = par::map_collect(441, |idx| {
        let (x1, x2) = (pts[idx / 21], pts[idx % 21]);
        let den = 1.0 - x2 * x2;
        let num = den * den - x1 * x1;
        let expected = if num > 0.0 && den > 0.0 {
            "chain"
        } else if num < 0.0 && den < 0.0 {
            "not-in-image"
        } else {
            "no-loop"
        };
        let got = match dichotomy_g2(c64(x1, 0.0), c64(x2, 0.0)) {
            Ok(g) => match analyze_g2(&g, 2) {
                Ok(zs) if zs.iter().all(|z| z.norm() < 1.0) => "chain",
                Ok(_) => "chain-outside-disk",
                Err(Error::NotInImage { .. }) => "not-in-image",
                Err(_) => "analyze-error",
            },
            Err(Error::WrongShape { .. }) => "no-loop",
            Err(_) => "build-error",
        };
        if got == expected {
            None
        } else {
            Some(format!("({x1:.2}, {x2:.2}): expected {expected}, got {got}"))
        }
    });
    let bad: Vec<String> = rows.into_iter().flatten().collect();
    let dt = t0.elapsed().as_secs_f64();
    let mut detail = format!("21 x 21 grid classified, {} mismatches, {dt:.2}s", bad.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    CheckLine { name: "dichotomy", pass: bad.is_empty(), detail }
}

/// Criterion 7: the non-factorizable loop. Membership, winding, and the
/// triple-condition residual pass while the Toeplitz section degenerates;
/// synthesized identity-component controls stay well-conditioned.
fn suite_counterexample(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    let head = (|| -> Result<(f64, i64, f64, f64)> {
        let g = counterexample_loop(32)?;
        let defect = g.membership_defect(GroupKind::SU11, 512);
        let winding = winding_component(&g, 512)?;
        let resid = tricondition_residual(32);
        let sv = singular_values_ascending(&injectivity_section(&g, 64, false))[0];
        Ok((defect, winding, resid, sv))
    })();
    let (defect, winding, resid, sv) = match head {
        Ok(h) => h,
        Err(e) => return CheckLine { name: "counterexample", pass: false, detail: e.to_string() },
    };
    let controls = par::map_collect(50, |i| {
        (|| -> Result<f64> {
            let mut rng = case_rng(seed, 7, i as u64);
            let etas: Vec<Complex64> =
                (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.5)).collect();
            let zetas: Vec<Complex64> =
                (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.5)).collect();
            let deg = rng.random_range(0..=2i64);
            let modes: Vec<(i64, Complex64)> =
                (1..=deg).map(|j| (j, disk_sample(&mut rng, 0.1))).collect();
            let data = RootSubgroupData::new(etas, zetas, anti_series(&modes), rng.random_range(-3.0..3.0))?;
            let g = synth_full(&data, 12)?;
            Ok(singular_values_ascending(&injectivity_section(&g, 64, false))[0])
        })()
        .map_err(|e| format!("control {i}: {e}"))
    });
    let mut ctrl_min = f64::INFINITY;
    for c in controls {
        match c {
            Ok(v) => ctrl_min = ctrl_min.min(v),
            Err(e) => return CheckLine { name: "counterexample", pass: false, detail: e },
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    let pass =
        defect <= 1e-6 && winding == 0 && resid < 1e-8 && sv < 1e-4 && ctrl_min >= 1e-2 && dt <= 60.0;
    CheckLine {
        name: "counterexample",
        pass,
        detail: format!(
            "defect {defect:.2e}, winding {winding}, residual {resid:.2e}, sv(N=64) {sv:.2e} vs 50 controls >= {ctrl_min:.2e}, {dt:.2}s of 60s"
        ),
    }
}

/// Criterion 8: partial root subgroup factorization roundtrip, plus the
/// starred-chain adversarial input that must hit the boundary condition.
fn suite_partial_rsf(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    let results = par::map_collect(100, |i| {
        (|| -> Result<f64> {
            let mut rng = case_rng(seed, 8, i as u64);
            let etas: Vec<Complex64> =
                (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.6)).collect();
            let zetas: Vec<Complex64> =
                (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.6)).collect();
            let deg = rng.random_range(0..=3i64);
            let modes: Vec<(i64, Complex64)> =
                (1..=deg).map(|j| (j, disk_sample(&mut rng, 0.12))).collect();
            let data = RootSubgroupData::new(etas, zetas, anti_series(&modes), rng.random_range(-3.0..3.0))?;
            let g = synth_full(&data, 32)?;
            let r = partial_rsf(&g, 32, 512)?;
            if !r.chains_recovered {
                return Err(Error::NumericalBreakdown { detail: "chain recovery flagged".into() });
            }
            Ok(r
                .defect
                .max((&r.data.chi - &data.chi).norm_max())
                .max((r.data.chi0_im - data.chi0_im).abs())
                .max(pad_gap(&r.data.etas, &data.etas))
                .max(pad_gap(&r.data.zetas, &data.zetas)))
        })()
        .map_err(|e| format!("case {i}: {e}"))
    });
    let adv = synth_g2(&[c64(0.9, 0.0), c64(0.95, 0.0)]).map(|g| g.star());
    let adv_rejected = matches!(
        adv.and_then(|g| partial_rsf(&g, 32, 512)),
        Err(Error::BoundaryConditionFails { .. })
    );
    let mut line = gate(
        "partial-rsf",
        "roundtrip on 100 draws (trunc 32, 512 samples)",
        results,
        1e-6,
        t0,
        120.0,
    );
    if adv_rejected {
        line.detail.push_str("; starred chain rejected at the boundary");
    } else {
        line.pass = false;
        line.detail.push_str("; starred chain was NOT rejected");
    }
    line
}

fn random_series(rng: &mut ChaCha8Rng, half_span: i64) -> LaurentSeries {
    let pairs: Vec<(i64, Complex64)> =
        (-half_span..=half_span).map(|d| (d, disk_sample(rng, 1.0))).collect();
    LaurentSeries::from_pairs(&pairs)
}

fn random_loop(rng: &mut ChaCha8Rng, half_span: i64) -> LoopMatrix {
    LoopMatrix::new(
        random_series(rng, half_span),
        random_series(rng, half_span),
        random_series(rng, half_span),
        random_series(rng, half_span),
    )
}

fn prop_involutions(seed: u64, i: usize) -> std::result::Result<f64, String> {
    let mut rng = case_rng(seed, 91, i as u64);
    if i % 2 == 0 {
        let g = random_loop(&mut rng, 3);
        let scale = g.norm_max().max(1.0);
        let worst = entry_gap(&g.sigma().sigma(), &g)
            .max(entry_gap(&g.theta().theta(), &g))
            .max(entry_gap(&g.star().star(), &g))
            .max(entry_gap(&g.sigma().theta(), &g.theta().sigma()))
            .max((&g.sigma().det() - &g.det().star()).norm_max())
            .max((&g.theta().det() - &g.det()).norm_max());
        Ok(worst / scale)
    } else {
        // on SU(1,1) chain loops the involutions interlock: Θ(g*) = σ(g⁻¹)
        (|| -> Result<f64> {
            let etas: Vec<Complex64> =
                (0..rng.random_range(0..=3)).map(|_| disk_sample(&mut rng, 0.7)).collect();
            let zetas: Vec<Complex64> =
                (0..rng.random_range(0..=3)).map(|_| disk_sample(&mut rng, 0.7)).collect();
            let g = synth_g1(&etas)?.inverse()?.sigma().mul(&synth_g2(&zetas)?);
            let scale = g.norm_max().max(1.0);
            Ok(entry_gap(&g.star().theta(), &g.inverse()?.sigma()) / scale)
        })()
        .map_err(|e| format!("case {i}: {e}"))
    }
}

fn prop_hardy(seed: u64, i: usize) -> std::result::Result<f64, String> {
    let mut rng = case_rng(seed, 92, i as u64);
    let f = random_series(&mut rng, 6);
    let h = random_series(&mut rng, 4);
    let scale = f.norm_max().max(1.0);
    if f.plus().min_deg() < 0 || f.strict_minus().max_deg() > -1 || f.minus().max_deg() > 0 {
        return Err(format!("case {i}: Hardy support leak"));
    }
    let worst = (&(&f.plus() + &f.strict_minus()) - &f)
        .norm_max()
        .max((&f.star().star() - &f).norm_max())
        .max((&(&f * &h).star() - &(&f.star() * &h.star())).norm_max())
        .max((&f.star().plus() - &f.minus().star()).norm_max());
    Ok(worst / scale)
}

fn prop_weyl(seed: u64, i: usize) -> std::result::Result<f64, String> {
    let mut rng = case_rng(seed, 93, i as u64);
    let rand_w = |rng: &mut ChaCha8Rng| WeylElement {
        n: rng.random_range(-20..=20),
        flip: rng.random::<bool>(),
    };
    let a = rand_w(&mut rng);
    let b = rand_w(&mut rng);
    let c = rand_w(&mut rng);
    if a.compose(&b).compose(&c) != a.compose(&b.compose(&c)) {
        return Err(format!("case {i}: associativity fails"));
    }
    if a.compose(&a.inverse()) != WeylElement::identity()
        || a.inverse().compose(&a) != WeylElement::identity()
    {
        return Err(format!("case {i}: inverse fails"));
    }
    if WeylElement::r0().compose(&WeylElement::r0()) != WeylElement::identity()
        || WeylElement::r1().compose(&WeylElement::r1()) != WeylElement::identity()
    {
        return Err(format!("case {i}: reflections are not involutions"));
    }
    // representatives multiply up to the sign of R² = −1
    let prod = a.representative().mul(&b.representative());
    let mut rep = a.compose(&b).representative();
    if a.flip && b.flip {
        rep = rep.mul(&LoopMatrix::from_const(&(Matrix2::identity() * c64(-1.0, 0.0))));
    }
    Ok(entry_gap(&prod, &rep))
}

fn prop_polar_iwasawa(seed: u64, i: usize) -> std::result::Result<f64, String> {
    let mut rng = case_rng(seed, 94, i as u64);
    if i % 2 == 0 {
        // assemble a big-cell matrix from known factors and take it apart
        let x = disk_sample(&mut rng, 2.0);
        let a = 0.5 + 1.5 * rng.random::<f64>();
        let t = 1.5 * rng.random::<f64>();
        let p = Complex64::from_polar(t.cosh(), TAU * rng.random::<f64>());
        let q = Complex64::from_polar(t.sinh(), TAU * rng.random::<f64>());
        let n_plus = Matrix2::new(c64(1.0, 0.0), x, c64(0.0, 0.0), c64(1.0, 0.0));
        let d = Matrix2::new(c64(a, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0 / a, 0.0));
        let g0 = Matrix2::new(p.conj(), q.conj(), q, p);
        let m = n_plus * d * g0;
        match iwasawa_su11(&m) {
            Err(e) => Err(format!("case {i}: {e}")),
            Ok(tr) => {
                let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
                let worst = (tr.reconstruct() - m)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
                    .max((tr.a_pos - a).abs())
                    .max((tr.n_plus - n_plus).iter().map(|z| z.norm()).fold(0.0, f64::max))
                    .max((tr.g0 - g0).iter().map(|z| z.norm()).fold(0.0, f64::max));
                Ok(worst / scale)
            }
        }
    } else {
        (|| -> Result<f64> {
            let etas: Vec<Complex64> =
                (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.5)).collect();
            let zetas: Vec<Complex64> =
                (0..rng.random_range(0..=2)).map(|_| disk_sample(&mut rng, 0.5)).collect();
            let deg = rng.random_range(0..=2i64);
            let modes: Vec<(i64, Complex64)> =
                (1..=deg).map(|j| (j, disk_sample(&mut rng, 0.05))).collect();
            let data = RootSubgroupData::new(etas, zetas, anti_series(&modes), rng.random_range(-3.0..3.0))?;
            let g = synth_full(&data, 10)?;
            let pp = polar_su11(&g, 256, 96)?;
            let scale = g.norm_max().max(1.0);
            let unimod = pp
                .lambda
                .eval_circle(128)
                .iter()
                .map(|v| (v.norm() - 1.0).abs())
                .fold(0.0, f64::max);
            let a0 = pp.core.e11.coeff(0);
            if a0.re <= 0.0 || a0.im.abs() > 1e-9 {
                return Err(Error::NumericalBreakdown { detail: "polar scale not positive".into() });
            }
            Ok((sup_distance(&pp.reconstruct(), &g, 256) / scale).max(unimod))
        })()
        .map_err(|e| format!("case {i}: {e}"))
    }
}

/// Criterion 9: structural property sweeps, 1000 seeded cases per family.
fn suite_properties(seed: u64) -> CheckLine {
    let t0 = Instant::now();
    type Prop = fn(u64, usize) -> std::result::Result<f64, String>;
    let families: [(&str, Prop); 4] = [
        ("involutions", prop_involutions),
        ("hardy", prop_hardy),
        ("weyl", prop_weyl),
        ("iwasawa/polar", prop_polar_iwasawa),
    ];
    let mut pass = true;
    let mut parts: Vec<String> = Vec::new();
    for (label, f) in families {
        let results = par::map_collect(1000, |i| f(seed, i));
        let mut worst = 0.0f64;
        let mut failed = false;
        for r in results {
            match r {
                Ok(v) => worst = worst.max(v),
                Err(e) => {
                    parts.push(format!("{label}: {e}"));
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            pass = false;
        } else {
            if worst > 1e-8 {
                pass = false;
            }
            parts.push(format!("{label} {worst:.1e}"));
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    pass = pass && dt <= 30.0;
    CheckLine {
        name: "properties",
        pass,
        detail: format!("4 x 1000 cases (tol 1e-8): {}; {dt:.2}s of 30s", parts.join(", ")),
    }
}
