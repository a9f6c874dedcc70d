//! Oracle tests for Laurent series arithmetic, the star involution, Hardy
//! projections, circle evaluation, truncated exponentials, and the scalar
//! Birkhoff factorization.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use loopfact::laurent::{
    scalar_birkhoff, winding_number, BirkhoffKind, LaurentSeries, TriangularScalarFactors,
};
use loopfact::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cr(re: f64) -> Complex64 {
    c(re, 0.0)
}

fn series(pairs: &[(i64, Complex64)]) -> LaurentSeries {
    LaurentSeries::from_pairs(pairs)
}

fn assert_series_close(got: &LaurentSeries, want: &LaurentSeries, tol: f64, what: &str) {
    let d = (got - want).norm_max();
    assert!(d <= tol, "{what}: differs by {d:.3e}\n got {got:?}\nwant {want:?}");
}

/// Random series supported on [-half_span, half_span] with coefficients in
/// the disk of radius `scale`.
fn random_series(rng: &mut ChaCha8Rng, half_span: i64, scale: f64) -> LaurentSeries {
    let pairs: Vec<(i64, Complex64)> = (-half_span..=half_span)
        .map(|d| {
            (d, c(scale * (2.0 * rng.random::<f64>() - 1.0), scale * (2.0 * rng.random::<f64>() - 1.0)))
        })
        .collect();
    series(&pairs)
}

#[test]
fn multiplication_matches_hand_products() {
    let z = LaurentSeries::monomial(1, cr(1.0));
    let zi = LaurentSeries::monomial(-1, cr(1.0));
    assert_series_close(&(&z * &zi), &LaurentSeries::one(), 0.0, "z·z⁻¹");

    let one_plus = series(&[(0, cr(1.0)), (1, cr(1.0))]);
    let one_minus = series(&[(0, cr(1.0)), (1, cr(-1.0))]);
    let want = series(&[(0, cr(1.0)), (2, cr(-1.0))]);
    assert_series_close(&(&one_plus * &one_minus), &want, 0.0, "(1+z)(1−z)");

    let f = series(&[(-1, cr(-1.0)), (0, cr(3.0)), (1, cr(-1.0))]);
    assert_series_close(&(&f * &LaurentSeries::one()), &f, 0.0, "f·1");

    // Support of a product is the Minkowski sum of the supports.
    let g = series(&[(-2, c(0.5, 0.5)), (3, cr(2.0))]);
    let fg = &f * &g;
    assert_eq!(fg.min_deg(), -3);
    assert_eq!(fg.max_deg(), 4);
}

#[test]
fn star_conjugates_and_reflects() {
    let z = LaurentSeries::monomial(1, cr(1.0));
    assert_series_close(&z.star(), &LaurentSeries::monomial(-1, cr(1.0)), 0.0, "star z");
    let k = LaurentSeries::constant(c(2.0, 3.0));
    assert_series_close(&k.star(), &LaurentSeries::constant(c(2.0, -3.0)), 0.0, "star const");

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let f = random_series(&mut rng, 5, 1.0);
        let g = random_series(&mut rng, 3, 1.0);
        assert_series_close(&f.star().star(), &f, 0.0, "star involution");
        // Conjugate-linear ring anti-morphism (commutative scalars, so the
        // product order is immaterial).
        assert_series_close(&(&f * &g).star(), &(&f.star() * &g.star()), 1e-14, "star of product");
        let af = f.scale(c(0.3, -0.8));
        assert_series_close(&af.star(), &f.star().scale(c(0.3, 0.8)), 1e-15, "conjugate linear");
    }
}

#[test]
fn hardy_parts_partition_the_support() {
    let f = series(&[(-1, cr(1.0)), (0, cr(2.0)), (1, cr(1.0))]);
    assert_series_close(&f.plus(), &series(&[(0, cr(2.0)), (1, cr(1.0))]), 0.0, "plus part");
    assert_series_close(&f.strict_minus(), &series(&[(-1, cr(1.0))]), 0.0, "strict minus part");
    assert_series_close(&f.minus(), &series(&[(-1, cr(1.0)), (0, cr(2.0))]), 0.0, "minus part");

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let f = random_series(&mut rng, 6, 2.0);
        let resid = &(&f.plus() + &f.strict_minus()) - &f;
        assert!(resid.is_zero(), "plus + strict_minus must equal f exactly");
        assert!(f.plus().min_deg() >= 0 || f.plus().is_zero());
        assert!(f.strict_minus().max_deg() <= -1 || f.strict_minus().is_zero());
        assert!(f.minus().max_deg() <= 0 || f.minus().is_zero());
    }
}

#[test]
fn circle_evaluation_matches_hand_values() {
    let z = LaurentSeries::monomial(1, cr(1.0));
    let got = z.eval_circle(4);
    let want = [cr(1.0), c(0.0, 1.0), cr(-1.0), c(0.0, -1.0)];
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).norm() <= 1e-15, "z on 4th roots: got {g}, want {w}");
    }

    // 3 − 2cosθ at θ = 0, π.
    let f = series(&[(-1, cr(-1.0)), (0, cr(3.0)), (1, cr(-1.0))]);
    let got = f.eval_circle(2);
    assert!((got[0] - cr(1.0)).norm() <= 1e-15, "f(1) = 1");
    assert!((got[1] - cr(5.0)).norm() <= 1e-15, "f(−1) = 5");

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let f = random_series(&mut rng, 4, 1.0);
        let direct = f.eval_circle(16);
        let starred = f.star().eval_circle(16);
        for (s, d) in starred.iter().zip(&direct) {
            assert!((s - d.conj()).norm() <= 1e-13, "star is boundary conjugation");
        }
    }
}

#[test]
fn exp_trunc_matches_taylor_coefficients() {
    let zero = LaurentSeries::zero();
    assert_series_close(&zero.exp_trunc(10), &LaurentSeries::one(), 0.0, "exp 0");

    let z = LaurentSeries::monomial(1, cr(1.0));
    let want = series(&[(0, cr(1.0)), (1, cr(1.0)), (2, cr(0.5)), (3, cr(1.0 / 6.0))]);
    assert_series_close(&z.exp_trunc(3), &want, 1e-15, "exp z to degree 3");

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        // Low modes only: the dropped tail of a degree-16 exponential grows
        // quickly with the top degree of the exponent.
        let mut chi = random_series(&mut rng, 2, 0.2);
        let sup = chi.sup_circle(64);
        if sup > 0.5 {
            chi = chi.scale(cr(0.5 / sup));
        }
        let prod = &chi.exp_trunc(16) * &(-&chi).exp_trunc(16);
        let resid = &prod - &LaurentSeries::one();
        assert!(
            resid.norm_max() < 1e-10,
            "exp(χ)·exp(−χ) residual {:.3e} too large",
            resid.norm_max()
        );
    }
}

/// (α−βz)(α−βz⁻¹) with α² + β² = 3 and αβ = 1 expands to 3 − z − z⁻¹, so the
/// positive middle factor is e^{ψ₀} = α² = (3+√5)/2 (the square of the golden
/// ratio) and ψ₊ is the expansion of log(1 − z/α²).
#[test]
fn golden_ratio_symbol_has_the_worked_middle_factor() {
    let f = series(&[(-1, cr(-1.0)), (0, cr(3.0)), (1, cr(-1.0))]);
    let factors = scalar_birkhoff(&f, BirkhoffKind::Positive, 48).unwrap();

    let phi_sq = (3.0 + 5.0f64.sqrt()) / 2.0;
    assert!((factors.psi_zero.exp() - cr(phi_sq)).norm() < 1e-12, "e^{{ψ₀}} = (3+√5)/2");
    assert!(factors.psi_zero.im.abs() < 1e-13, "ψ₀ real for a positive symbol");
    assert_series_close(&factors.psi_minus, &factors.psi_plus.star(), 1e-13, "ψ₋ = ψ₊*");
    assert!(factors.psi_plus.min_deg() >= 1, "ψ₊ strictly analytic");

    // First coefficient of log(1 − z/α²) is −1/α² = −(3−√5)/2.
    let lead = factors.psi_plus.coeff(1);
    assert!((lead - cr(-(3.0 - 5.0f64.sqrt()) / 2.0)).norm() < 1e-12, "ψ₊ leading coefficient");

    let recon = factors.reconstruct(48);
    assert_series_close(&recon.window(-1, 1), &f, 1e-12, "reconstruction");
}

#[test]
fn unit_symbol_factors_trivially() {
    let factors = scalar_birkhoff(&LaurentSeries::one(), BirkhoffKind::Positive, 8).unwrap();
    assert!(factors.psi_minus.is_zero(), "ψ₋ = 0");
    assert!(factors.psi_plus.is_zero(), "ψ₊ = 0");
    assert!(factors.psi_zero.norm() < 1e-14, "ψ₀ = 0");
}

#[test]
fn exponential_symbol_recovers_its_exponent() {
    // f = e^{z − z⁻¹} is unimodular on the circle with exponent already in
    // triangular position: ψ₊ = z, ψ₋ = −z⁻¹, ψ₀ = 0.
    let chi = series(&[(-1, cr(-1.0)), (1, cr(1.0))]);
    let f = chi.exp_trunc(24);
    let factors = scalar_birkhoff(&f, BirkhoffKind::Unimodular, 24).unwrap();

    let z = LaurentSeries::monomial(1, cr(1.0));
    assert!((&factors.psi_plus - &z).norm_max() < 1e-9, "ψ₊ ≈ z");
    assert!(factors.psi_zero.norm() < 1e-9, "ψ₀ ≈ 0");
    assert!(factors.psi_zero.re.abs() < 1e-13, "ψ₀ imaginary for a unimodular symbol");
    assert_series_close(&factors.psi_minus, &(-&factors.psi_plus.star()), 1e-13, "ψ₋ = −ψ₊*");
}

#[test]
fn factorization_requires_winding_zero_and_a_nonvanishing_symbol() {
    let z = LaurentSeries::monomial(1, cr(1.0));
    assert_eq!(winding_number(&z, 64).unwrap(), 1);
    match scalar_birkhoff(&z, BirkhoffKind::Unimodular, 8) {
        Err(Error::WindingNonzero { winding: 1 }) => {}
        other => panic!("expected winding error, got {other:?}"),
    }

    // 1 − z vanishes at θ = 0.
    let f = series(&[(0, cr(1.0)), (1, cr(-1.0))]);
    match scalar_birkhoff(&f, BirkhoffKind::Positive, 8) {
        Err(Error::VanishesOnCircle { .. }) => {}
        other => panic!("expected vanishing error, got {other:?}"),
    }
}

/// Reconstruction stays within 1e−8 in relative sup norm at truncation 64
/// whenever the exponent is bounded by 2 on the circle, for both symmetry
/// classes.
#[test]
fn reconstruction_is_accurate_for_bounded_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let check = |f: &LaurentSeries, factors: &TriangularScalarFactors| {
        let recon = factors.reconstruct(64);
        let fs = f.eval_circle(256);
        let rs = recon.eval_circle(256);
        fs.iter()
            .zip(&rs)
            .map(|(fv, rv)| (fv - rv).norm() / fv.norm())
            .fold(0.0, f64::max)
    };
    for _ in 0..25 {
        let h = random_series(&mut rng, 4, 0.15);
        // Real part of the exponent on the circle: h + h* (positive class).
        let mut ex = &h + &h.star();
        let sup = ex.sup_circle(128);
        if sup > 2.0 {
            ex = ex.scale(cr(2.0 / sup));
        }
        let f = ex.exp_trunc(64);
        let factors = scalar_birkhoff(&f, BirkhoffKind::Positive, 64).unwrap();
        let worst = check(&f, &factors);
        assert!(worst <= 1e-8, "positive class reconstruction error {worst:.3e}");

        // Imaginary exponent: h − h* (unimodular class).
        let mut ex = &h - &h.star();
        let sup = ex.sup_circle(128);
        if sup > 2.0 {
            ex = ex.scale(cr(2.0 / sup));
        }
        let f = ex.exp_trunc(64);
        let factors = scalar_birkhoff(&f, BirkhoffKind::Unimodular, 64).unwrap();
        let worst = check(&f, &factors);
        assert!(worst <= 1e-8, "unimodular class reconstruction error {worst:.3e}");
    }
}

#[test]
fn series_serialize_as_min_deg_and_coefficient_pairs() {
    let f = series(&[(-1, c(0.0, -1.0)), (1, cr(2.5))]);
    let json = serde_json::to_value(&f).unwrap();
    assert_eq!(
        json,
        serde_json::json!({
            "min_deg": -1,
            "coeffs": [[0.0, -1.0], [0.0, 0.0], [2.5, 0.0]],
        })
    );
    let back: LaurentSeries = serde_json::from_value(json).unwrap();
    assert_series_close(&back, &f, 0.0, "roundtrip");

    let zero = serde_json::to_value(LaurentSeries::zero()).unwrap();
    assert_eq!(zero, serde_json::json!({"min_deg": 0, "coeffs": []}));
}

#[test]
fn normalization_keeps_explicit_degree_bounds() {
    let f = series(&[(-3, cr(0.0)), (-1, cr(1.0)), (2, cr(4.0)), (5, cr(0.0))]);
    assert_eq!(f.min_deg(), -1);
    assert_eq!(f.max_deg(), 2);
    assert_eq!(f.span(), 2);

    // Windows are inclusive and shifts relabel degrees.
    assert_eq!(f.window(0, 2).min_deg(), 2);
    assert_series_close(&f.shift(3), &series(&[(2, cr(1.0)), (5, cr(4.0))]), 0.0, "shift");
}
