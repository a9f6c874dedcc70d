//! Frozen arithmetic instances of the determinant identities and the
//! three-way (formula / operator / factorization) agreement checks.

use num_complex::Complex64;

use loopfact::dets::{a0_ratio_check, det_formula, det_report, szego_widom_check};
use loopfact::laurent::LaurentSeries;
use loopfact::rootsub::RootSubgroupData;
use loopfact::toeplitz::{det_aa, det_aa_dense};
use loopfact::rootsub::synth_full;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cr(re: f64) -> Complex64 {
    c(re, 0.0)
}

/// χ = Σ cⱼ zʲ − conj(cⱼ) z⁻ʲ.
fn anti_chi(coeffs: &[(i64, Complex64)]) -> LaurentSeries {
    let mut pairs = Vec::new();
    for &(j, cj) in coeffs {
        pairs.push((j, cj));
        pairs.push((-j, -cj.conj()));
    }
    LaurentSeries::from_pairs(&pairs)
}

fn chain_data(etas: &[Complex64], zetas: &[Complex64]) -> RootSubgroupData {
    RootSubgroupData::new(etas.to_vec(), zetas.to_vec(), LaurentSeries::zero(), 0.0).unwrap()
}

#[test]
fn single_zeta_has_the_worked_exponents() {
    let data = chain_data(&[], &[cr(0.5)]);
    assert!((det_formula(&data, false).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    assert!((det_formula(&data, true).unwrap() - 1.0).abs() < 1e-14);

    let r = a0_ratio_check(&data, 8).unwrap();
    assert!(r.rel_err_unshifted <= 1e-10, "unshifted rel err {}", r.rel_err_unshifted);
    assert!(r.rel_err_shifted <= 1e-10, "shifted rel err {}", r.rel_err_shifted);
    assert!((r.a0_sq_formula - 0.75).abs() < 1e-12);
    assert!(r.rel_err_a0 <= 1e-9, "a0 rel err {}", r.rel_err_a0);
}

#[test]
fn single_eta_exponent_is_sharp_at_zero() {
    // η₀ enters the unshifted product with exponent i = 0: the determinant
    // is exactly 1, while the shifted one picks up (1−|η₀|²)⁻¹.
    let data = chain_data(&[cr(0.5)], &[]);
    assert!((det_formula(&data, false).unwrap() - 1.0).abs() < 1e-14);
    assert!((det_formula(&data, true).unwrap() - 4.0 / 3.0).abs() < 1e-14);

    let r = a0_ratio_check(&data, 8).unwrap();
    assert!((r.operator_value - 1.0).abs() <= 1e-10, "operator {}", r.operator_value);
    assert!((r.shifted_operator - 4.0 / 3.0).abs() <= 1e-10);
    assert!((r.a0_sq_formula - 4.0 / 3.0).abs() < 1e-12);
    assert!(r.rel_err_a0 <= 1e-9);
}

#[test]
fn szego_widom_values_match_the_operator() {
    // χ₁ = 0.1 → e^{−2·1·0.01}.
    let r = szego_widom_check(&anti_chi(&[(1, cr(0.1))]), 32).unwrap();
    assert!((r.formula_value - (-0.02f64).exp()).abs() < 1e-14);
    assert!(r.rel_err_unshifted <= 1e-6, "rel err {}", r.rel_err_unshifted);
    assert!(r.rel_err_shifted <= 1e-6);
    assert!((r.a0_sq_formula - 1.0).abs() < 1e-12);

    // χ₁ = 0.1, χ₂ = 0.05i → e^{−2(0.01) − 4(0.0025)} = e^{−0.03}.
    let r = szego_widom_check(&anti_chi(&[(1, cr(0.1)), (2, c(0.0, 0.05))]), 32).unwrap();
    assert!((r.formula_value - (-0.03f64).exp()).abs() < 1e-14);
    assert!(r.rel_err_unshifted <= 1e-6);
    assert!(r.rel_err_shifted <= 1e-6);

    // A zero mode is unimodular and drops out.
    let with_zero = &anti_chi(&[(1, cr(0.1))]) + &LaurentSeries::constant(c(0.0, 0.4));
    let r2 = szego_widom_check(&with_zero, 32).unwrap();
    let r1 = szego_widom_check(&anti_chi(&[(1, cr(0.1))]), 32).unwrap();
    assert!((r1.operator_value - r2.operator_value).abs() < 1e-10);

    // χ = 0 → both determinants are 1.
    let r = szego_widom_check(&LaurentSeries::zero(), 4).unwrap();
    assert!((r.operator_value - 1.0).abs() < 1e-12);
    assert!((r.shifted_operator - 1.0).abs() < 1e-12);
}

#[test]
fn mixed_data_agrees_three_ways() {
    let data = RootSubgroupData::new(
        vec![c(0.4, 0.0), c(0.1, -0.2)],
        vec![c(0.0, 0.3)],
        anti_chi(&[(1, c(0.1, 0.05)), (2, c(0.0, -0.04))]),
        0.2,
    )
    .unwrap();
    let r = det_report(&data, 24).unwrap();
    assert!(r.rel_err_unshifted <= 1e-8, "unshifted {}", r.rel_err_unshifted);
    assert!(r.rel_err_shifted <= 1e-8, "shifted {}", r.rel_err_shifted);
    assert!(r.rel_err_a0 <= 1e-8, "a0 {}", r.rel_err_a0);

    // Closed form of the ratio.
    let want = (1.0 - 0.09) / ((1.0 - 0.16) * (1.0 - 0.05));
    assert!((r.a0_sq_formula - want).abs() < 1e-12);

    // The dense-section evaluation agrees with the exact finite-rank one.
    let g = synth_full(&data, 24).unwrap();
    let g_inv = g.inverse().unwrap();
    let n = g.span() + 4;
    for shifted in [false, true] {
        let exact = det_aa(&g, &g_inv, shifted).unwrap();
        let dense = det_aa_dense(&g, &g_inv, n, shifted).unwrap();
        assert!(
            (exact - dense).abs() <= 1e-8 * exact.abs().max(1.0),
            "dense {dense} vs exact {exact} (shifted = {shifted})"
        );
    }
}

#[test]
fn chain_determinants_stay_at_least_one() {
    // With χ = 0 every factor of the unshifted product is ≥ 1.
    for t in 1..8 {
        let s = 0.1 * t as f64;
        let data = chain_data(&[c(0.3 * s, 0.2 * s), cr(0.5 * s)], &[c(0.0, 0.6 * s), cr(0.4 * s)]);
        let v = det_formula(&data, false).unwrap();
        assert!(v >= 1.0);
        let g = synth_full(&data, 16).unwrap();
        let op = det_aa(&g, &g.inverse().unwrap(), false).unwrap();
        assert!(op >= 1.0 - 1e-10, "operator determinant {op}");
    }
}

#[test]
fn determinant_is_monotone_in_the_chain_moduli() {
    // Nondecreasing in each |η_i| (i ≥ 1) and |ζ_k| separately; the χ
    // factor by contrast is ≤ 1 and decreasing in |χ_j|.
    let mut last = 0.0;
    for t in 0..10 {
        let m = 0.09 * t as f64;
        let v = det_formula(&chain_data(&[cr(0.2), cr(m)], &[]), false).unwrap();
        assert!(v >= last);
        last = v;
    }
    last = 0.0;
    for t in 0..10 {
        let m = 0.09 * t as f64;
        let v = det_formula(&chain_data(&[], &[cr(0.3), cr(m)]), false).unwrap();
        assert!(v >= last);
        last = v;
    }
    let mut last = f64::INFINITY;
    for t in 0..10 {
        let m = 0.08 * t as f64;
        let data =
            RootSubgroupData::new(vec![], vec![], anti_chi(&[(2, cr(m))]), 0.0).unwrap();
        let v = det_formula(&data, false).unwrap();
        assert!(v <= last && v <= 1.0);
        last = v;
    }
}
