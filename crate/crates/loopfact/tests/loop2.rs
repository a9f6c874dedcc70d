//! Oracle tests for matrix loops: group operations, the involutions σ and Θ,
//! membership, the pointwise polar and Iwasawa decompositions, and the
//! winding component.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use loopfact::laurent::LaurentSeries;
use loopfact::loop2::{
    iwasawa_su11, polar_su11, sup_distance, winding_component, GroupKind, LoopMatrix,
};
use loopfact::rootsub::{a_param, q_factor, synth_g1, synth_g2};
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

fn assert_loop_close(got: &LoopMatrix, want: &LoopMatrix, tol: f64, what: &str) {
    for (g, w) in got.entries().iter().zip(want.entries()) {
        let d = (*g - w).norm_max();
        assert!(d <= tol, "{what}: entry differs by {d:.3e}");
    }
}

/// The rank-one loop a(ζ)·[[1, ζz⁻ⁿ],[ζ̄zⁿ, 1]].
fn rank_one_loop(zeta: Complex64, n: i64) -> LoopMatrix {
    let a = cr(a_param(zeta));
    LoopMatrix::new(
        LaurentSeries::constant(a),
        LaurentSeries::monomial(-n, a * zeta),
        LaurentSeries::monomial(n, a * zeta.conj()),
        LaurentSeries::constant(a),
    )
}

/// Random SU(1,1) loop assembled from short root-subgroup chains.
fn random_su11(rng: &mut ChaCha8Rng) -> LoopMatrix {
    let draw = |rng: &mut ChaCha8Rng| {
        let m: f64 = rng.random::<f64>() * 0.7;
        Complex64::from_polar(m, std::f64::consts::TAU * rng.random::<f64>())
    };
    let etas: Vec<Complex64> = (0..rng.random_range(1..=3)).map(|_| draw(rng)).collect();
    let zetas: Vec<Complex64> = (0..rng.random_range(1..=3)).map(|_| draw(rng)).collect();
    let g1 = synth_g1(&etas).unwrap();
    let g2 = synth_g2(&zetas).unwrap();
    g1.inverse().unwrap().sigma().mul(&g2)
}

#[test]
fn inverses_match_diagonal_oracles() {
    let id = LoopMatrix::identity();
    assert_loop_close(&id.inverse().unwrap(), &id, 0.0, "inverse of identity");

    let zd = LoopMatrix::z_diag(1);
    let want = LoopMatrix::diag(
        LaurentSeries::monomial(-1, cr(1.0)),
        LaurentSeries::monomial(1, cr(1.0)),
    );
    assert_loop_close(&zd.inverse().unwrap(), &want, 0.0, "inverse of diag(z, z⁻¹)");

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..25 {
        let g = random_su11(&mut rng);
        let gi = g.inverse().unwrap();
        assert!(sup_distance(&g.mul(&gi), &LoopMatrix::identity(), 64) <= 1e-10);
        // The adjugate inverse agrees with pointwise numeric inversion.
        for (m, mi) in g.eval_circle(64).iter().zip(gi.eval_circle(64)) {
            let num = m.try_inverse().unwrap();
            assert!((num - mi).norm() <= 1e-10 * m.norm().max(1.0));
        }
    }

    let not_unimodular = LoopMatrix::diag(
        LaurentSeries::constant_re(2.0),
        LaurentSeries::constant_re(2.0),
    );
    assert!(matches!(not_unimodular.inverse(), Err(Error::DetNotOne { .. })));
}

#[test]
fn sigma_permutes_and_stars_entries() {
    let id = LoopMatrix::identity();
    assert_loop_close(&id.sigma(), &id, 0.0, "σ fixes the identity");

    // σ(diag(z, z⁻¹)) = diag(star(z⁻¹)*, ...) lands back on itself.
    let zd = LoopMatrix::z_diag(1);
    assert_loop_close(&zd.sigma(), &zd, 0.0, "σ fixes diag(z, z⁻¹)");

    // Loops of the shape [[a, b],[b*, a*]] are exactly the σ-fixed ones.
    let a = series(&[(0, cr(1.3)), (1, c(0.2, 0.1))]);
    let b = series(&[(-1, c(0.4, -0.3))]);
    let fixed = LoopMatrix::new(a.clone(), b.clone(), b.star(), a.star());
    assert_loop_close(&fixed.sigma(), &fixed, 0.0, "σ fixes the SU(1,1) shape");

    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..25 {
        let g = random_su11(&mut rng);
        assert_loop_close(&g.sigma().sigma(), &g, 0.0, "σ is an involution");
    }
}

#[test]
fn theta_negates_the_off_diagonal() {
    let id = LoopMatrix::identity();
    assert_loop_close(&id.theta(), &id, 0.0, "Θ fixes the identity");

    let g = LoopMatrix::new(
        series(&[(0, cr(1.0)), (1, cr(2.0))]),
        series(&[(-1, c(0.0, 3.0))]),
        series(&[(2, cr(-1.0))]),
        series(&[(0, cr(4.0))]),
    );
    let t = g.theta();
    let e = t.entries();
    assert!((e[0] - g.entries()[0]).is_zero(), "diagonal unchanged");
    assert!((e[3] - g.entries()[3]).is_zero(), "diagonal unchanged");
    assert!((e[1] + g.entries()[1]).is_zero(), "e12 negated");
    assert!((e[2] + g.entries()[2]).is_zero(), "e21 negated");
    assert_loop_close(&t.theta(), &g, 0.0, "Θ is an involution");

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..25 {
        let g = random_su11(&mut rng);
        let h = random_su11(&mut rng);
        assert_loop_close(&g.mul(&h).theta(), &g.theta().mul(&h.theta()), 1e-12, "Θ(gh) = Θg·Θh");
        assert_loop_close(&g.sigma().theta(), &g.theta().sigma(), 0.0, "σΘ = Θσ");
    }
}

#[test]
fn membership_classifies_the_worked_examples() {
    let g = rank_one_loop(c(0.3, 0.4), 2);
    let (ok, defect) = g.membership(GroupKind::SU11, 256);
    assert!(ok, "rank-one loop is SU(1,1), defect {defect:.3e}");
    assert!(g.membership(GroupKind::SL2C, 256).0, "and unimodular");

    let id = LoopMatrix::identity();
    for kind in [GroupKind::SU11, GroupKind::SU2, GroupKind::SL2C] {
        assert!(id.membership(kind, 16).0, "identity is in {kind:?}");
    }

    // diag(2, 1/2): g*Jg − J = diag(3, 3/4), so the worst defect is 3.
    let d = LoopMatrix::diag(
        LaurentSeries::constant_re(2.0),
        LaurentSeries::constant_re(0.5),
    );
    let (ok, defect) = d.membership(GroupKind::SU11, 64);
    assert!(!ok, "diag(2, 1/2) is not in SU(1,1)");
    assert!((defect - 3.0).abs() < 1e-12, "defect 3, got {defect}");
    assert!(d.membership(GroupKind::SL2C, 64).0, "but has determinant one");
    assert!(!d.membership(GroupKind::SU2, 64).0, "and is not unitary");
}

#[test]
fn polar_decomposition_matches_hand_values() {
    // Constant loop: λ = 1, a = (1 − 1/4)^{−1/2}, b = 1/2.
    let g = rank_one_loop(cr(0.5), 0);
    let p = polar_su11(&g, 64, 8).unwrap();
    assert!((&p.lambda - &LaurentSeries::one()).norm_max() < 1e-12, "λ = 1");
    let core = p.core.entries();
    assert!((core[0] - &LaurentSeries::constant_re(0.75f64.powf(-0.5))).norm_max() < 1e-12);
    assert!((core[1] - &LaurentSeries::constant_re(0.75f64.powf(-0.5) * 0.5)).norm_max() < 1e-12);

    let p = polar_su11(&LoopMatrix::identity(), 64, 8).unwrap();
    assert!((&p.lambda - &LaurentSeries::one()).norm_max() < 1e-13, "identity: λ = 1");
    assert!(p.core.entries()[1].is_zero(), "identity: b = 0");

    let p = polar_su11(&LoopMatrix::z_diag(1), 64, 8).unwrap();
    assert!((&p.lambda - &LaurentSeries::monomial(1, cr(1.0))).norm_max() < 1e-12, "λ = z");
    assert_loop_close(&p.core, &LoopMatrix::identity(), 1e-12, "core = identity");
}

#[test]
fn polar_reassembly_is_tight_for_moderate_spans() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..20 {
        let g = random_su11(&mut rng);
        assert!(g.span() <= 16, "chain draw stays within the stated span");
        let p = polar_su11(&g, 256, 96).unwrap();
        let d = sup_distance(&p.reconstruct(), &g, 256);
        assert!(d <= 1e-8, "reassembly defect {d:.3e}");
        // The core has the σ-fixed shape with positive constant diagonal.
        let core = p.core.entries();
        assert!((core[3] - &core[0].star()).norm_max() < 1e-9);
        assert!((core[2] - &core[1].star()).norm_max() < 1e-9);
    }
}

#[test]
fn winding_component_counts_the_diagonal_twist() {
    assert_eq!(winding_component(&LoopMatrix::z_diag(1), 128).unwrap(), 1);
    assert_eq!(winding_component(&LoopMatrix::identity(), 128).unwrap(), 0);
    assert_eq!(winding_component(&rank_one_loop(c(0.3, 0.4), 2), 128).unwrap(), 0);

    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..10 {
        let g = random_su11(&mut rng);
        let base = winding_component(&g, 512).unwrap();
        for k in [-2i64, 1, 3] {
            let shifted = g.mul(&LoopMatrix::z_diag(k));
            assert_eq!(
                winding_component(&shifted, 512).unwrap(),
                base + k,
                "winding adds under a diag(zᵏ, z⁻ᵏ) twist"
            );
        }
    }
}

#[test]
fn iwasawa_matches_the_worked_triangular_matrix() {
    let id = Matrix2::identity();
    let t = iwasawa_su11(&id).unwrap();
    assert!((t.n_plus - id).norm() < 1e-14);
    assert!((t.a_pos - 1.0).abs() < 1e-14);
    assert!((t.g0 - id).norm() < 1e-14);

    // Upper unipotent input: the bottom row (0, 1) forces a = 1, g0 = I.
    let m = Matrix2::new(cr(1.0), cr(1.0), cr(0.0), cr(1.0));
    let t = iwasawa_su11(&m).unwrap();
    assert!((t.n_plus - m).norm() < 1e-14, "n_plus is the input");
    assert!((t.a_pos - 1.0).abs() < 1e-14, "a = 1");
    assert!((t.g0 - id).norm() < 1e-14, "g0 = identity");

    // SU(1,1) input: nothing to peel.
    let m = q_factor(c(0.3, -0.5)).unwrap();
    let t = iwasawa_su11(&m).unwrap();
    assert!((t.n_plus - id).norm() < 1e-12);
    assert!((t.a_pos - 1.0).abs() < 1e-12);
    assert!((t.g0 - m).norm() < 1e-12);

    // |M21| ≥ |M22| leaves the big cell.
    let w = Matrix2::new(cr(0.0), cr(-1.0), cr(1.0), cr(0.0));
    assert!(matches!(iwasawa_su11(&w), Err(Error::NotInBigCell { .. })));
}

#[test]
fn iwasawa_reconstructs_random_big_cell_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..1000 {
        // n⁺·a·g0 with random parts is the generic big-cell element.
        let x = c(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0);
        let a = cr(0.5 + 1.5 * rng.random::<f64>());
        let q = q_factor(Complex64::from_polar(
            0.9 * rng.random::<f64>(),
            std::f64::consts::TAU * rng.random::<f64>(),
        ))
        .unwrap();
        let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>());
        let g0 = q * Matrix2::new(phase, cr(0.0), cr(0.0), phase.conj());
        let m = Matrix2::new(cr(1.0), x, cr(0.0), cr(1.0))
            * Matrix2::new(a, cr(0.0), cr(0.0), cr(1.0) / a)
            * g0;
        let t = iwasawa_su11(&m).unwrap();
        assert!((t.reconstruct() - m).norm() <= 1e-12 * m.norm().max(1.0));
        assert!(t.a_pos > 0.0);
        assert!((t.n_plus[(1, 0)].norm()) < 1e-14, "n⁺ lower-left vanishes");
        assert!((t.n_plus[(0, 0)] - cr(1.0)).norm() < 1e-14, "n⁺ unipotent");
        let p = t.g0[(1, 1)];
        let q21 = t.g0[(1, 0)];
        assert!((p.norm_sqr() - q21.norm_sqr() - 1.0).abs() < 1e-12, "|p|² − |q|² = 1");
    }
}

#[test]
fn sigma_fixed_points_are_exactly_the_su11_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..25 {
        let g = random_su11(&mut rng);
        let (ok, defect) = g.membership(GroupKind::SU11, 256);
        assert!(ok && defect <= 1e-9, "chain loops pass membership");
        assert!(sup_distance(&g.sigma(), &g, 256) <= 1e-9, "and are σ-fixed");

        // Breaking the symmetry in one entry breaks both characterizations.
        let [a, b, _, d] = g.entries().map(|s| s.clone());
        let broken = LoopMatrix::new(a, &b + &LaurentSeries::constant_re(0.25), b.star(), d);
        let (ok, _) = broken.membership(GroupKind::SU11, 256);
        assert!(!ok, "perturbed loop fails membership");
        assert!(sup_distance(&broken.sigma(), &broken, 256) > 1e-3, "and is not σ-fixed");
    }
}

#[test]
fn loops_serialize_with_entry_names_and_hint() {
    let g = rank_one_loop(cr(0.5), 1);
    let json = serde_json::to_value(&g).unwrap();
    assert!(json.get("e11").is_some() && json.get("e22").is_some());
    assert_eq!(json["group_hint"], serde_json::Value::Null);

    let hinted = g.with_hint(GroupKind::SU11);
    let json = serde_json::to_value(&hinted).unwrap();
    assert_eq!(json["group_hint"], serde_json::json!("SU11"));
    let back: LoopMatrix = serde_json::from_value(json).unwrap();
    assert_loop_close(&back, &hinted, 0.0, "roundtrip");
}
