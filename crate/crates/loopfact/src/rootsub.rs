//! Root subgroup synthesis and analysis for SU(1,1) loops.
//!
//! Two chains of rank-one factors generate the loops handled here: the
//! `g1` chain with parameters η₀, η₁, … (top row analytic) and the `g2`
//! chain with parameters ζ₁, ζ₂, … (bottom row analytic). [`synth_full`]
//! assembles σ(g₁⁻¹)·diag(e^χ, e^{−χ})·g₂ from a [`RootSubgroupData`], and
//! [`partial_rsf`] inverts that assembly for a loop in the identity
//! component whose triangular factors satisfy the boundary conditions
//! sup|l₂₁/l₁₁| < 1 and sup|u₂₁/u₂₂| < 1.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::birkhoff::triangular_factorization;
use crate::error::{Error, Result};
use crate::laurent::{
    continuous_log_samples, scalar_birkhoff_samples, BirkhoffKind, LaurentSeries,
};
use crate::loop2::{iwasawa_su11, winding_component, GroupKind, LoopMatrix};

/// Relative tolerance for the shape checks run before peeling a chain.
const SHAPE_TOL: f64 = 1e-6;

/// Relative tolerance on the residual left after peeling every factor.
const PEEL_TOL: f64 = 1e-6;

/// Parameters above this modulus are accepted but flagged: conditioning
/// degrades like Π(1−|ζ|²)⁻¹.
pub const NEAR_UNIT: f64 = 0.95;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// a(ζ) = (1−|ζ|²)^{−1/2}, the normalizing scale of a rank-one factor.
/// Only meaningful for |ζ| < 1; callers validate.
pub fn a_param(zeta: Complex64) -> f64 {
    (1.0 - zeta.norm_sqr()).powf(-0.5)
}

fn disk_check(params: &[Complex64], first_index: usize) -> Result<()> {
    for (i, p) in params.iter().enumerate() {
        if p.norm() >= 1.0 {
            return Err(Error::ParameterOnOrOutsideDisk {
                index: first_index + i,
                modulus: p.norm(),
            });
        }
    }
    Ok(())
}

/// The constant SU(1,1) factor q(ζ) = a(ζ)·[[1, ζ̄],[ζ, 1]].
pub fn q_factor(zeta: Complex64) -> Result<Matrix2<Complex64>> {
    disk_check(&[zeta], 0)?;
    let a = c64(a_param(zeta), 0.0);
    Ok(Matrix2::new(a, a * zeta.conj(), a * zeta, a))
}

/// j-th factor of the g1 chain: a(η)·[[1, η̄zʲ],[ηz⁻ʲ, 1]].
fn p_chain_factor(eta: Complex64, j: i64) -> LoopMatrix {
    let a = c64(a_param(eta), 0.0);
    LoopMatrix::new(
        LaurentSeries::constant(a),
        LaurentSeries::monomial(j, a * eta.conj()),
        LaurentSeries::monomial(-j, a * eta),
        LaurentSeries::constant(a),
    )
}

/// k-th factor of the g2 chain: a(ζ)·[[1, ζz⁻ᵏ],[ζ̄zᵏ, 1]].
fn q_chain_factor(zeta: Complex64, k: i64) -> LoopMatrix {
    let a = c64(a_param(zeta), 0.0);
    LoopMatrix::new(
        LaurentSeries::constant(a),
        LaurentSeries::monomial(-k, a * zeta),
        LaurentSeries::monomial(k, a * zeta.conj()),
        LaurentSeries::constant(a),
    )
}

/// g₁ = Pₙ(ηₙ)···P₀(η₀); top row polynomial in z with positive constant
/// term, e21 = star(e12), e22 = star(e11).
pub fn synth_g1(etas: &[Complex64]) -> Result<LoopMatrix> {
    disk_check(etas, 0)?;
    let mut g = LoopMatrix::identity();
    for (j, &eta) in etas.iter().enumerate() {
        g = p_chain_factor(eta, j as i64).mul(&g);
    }
    Ok(g.with_hint(GroupKind::SU11))
}

/// g₂ = Qₙ(ζₙ)···Q₁(ζ₁); bottom row polynomial in z, vanishing at 0 in the
/// corner and positive at 0 on the diagonal.
pub fn synth_g2(zetas: &[Complex64]) -> Result<LoopMatrix> {
    disk_check(zetas, 1)?;
    let mut g = LoopMatrix::identity();
    for (i, &zeta) in zetas.iter().enumerate() {
        g = q_chain_factor(zeta, i as i64 + 1).mul(&g);
    }
    Ok(g.with_hint(GroupKind::SU11))
}

/// Largest degree whose coefficient exceeds `floor` in magnitude.
fn effective_max_deg(s: &LaurentSeries, floor: f64) -> Option<i64> {
    s.iter().filter(|(_, c)| c.norm() > floor).map(|(d, _)| d).max()
}

fn mass_outside(s: &LaurentSeries, lo: i64, hi: i64) -> f64 {
    s.iter()
        .filter(|(d, _)| *d < lo || *d > hi)
        .map(|(_, c)| c.norm())
        .sum()
}

fn shape_err(detail: impl Into<String>) -> Error {
    Error::WrongShape { detail: detail.into() }
}

fn identity_residual(g: &LoopMatrix) -> f64 {
    let id = LoopMatrix::identity();
    [
        &g.e11 - &id.e11,
        &g.e12 - &id.e12,
        &g.e21 - &id.e21,
        &g.e22 - &id.e22,
    ]
    .iter()
    .map(|d| d.norm_l1())
    .fold(0.0, f64::max)
}

/// Checks the SU(1,1) entry symmetry e22 = star(e11), e21 = star(e12).
fn check_symmetry(g: &LoopMatrix, tol: f64) -> Result<()> {
    if (&g.e22 - &g.e11.star()).norm_max() > tol {
        return Err(shape_err("e22 is not star(e11)"));
    }
    if (&g.e21 - &g.e12.star()).norm_max() > tol {
        return Err(shape_err("e21 is not star(e12)"));
    }
    Ok(())
}

/// Recovers [η₀, …, η_{count−1}] from a g1-chain loop by peeling the
/// highest-index factor: ηⱼ = conj([zʲ]e12 / e11(0)), then left-multiply
/// by Pⱼ(ηⱼ)⁻¹ and recurse. Peeling a parameter with |η| ≥ 1 means the
/// loop is outside the image of the chain ([`Error::NotInImage`]).
pub fn analyze_g1(g1: &LoopMatrix, count: usize) -> Result<Vec<Complex64>> {
    let scale = g1.norm_max().max(1.0);
    let tol = SHAPE_TOL * scale;
    check_symmetry(g1, tol)?;
    let hi = count as i64 - 1;
    if mass_outside(&g1.e11, 0, hi.max(0)) > tol {
        return Err(shape_err(format!("e11 has mass outside degrees [0, {}]", hi.max(0))));
    }
    if mass_outside(&g1.e12, 0, hi) > tol {
        return Err(shape_err(format!("e12 has mass outside degrees [0, {hi}]")));
    }
    let a0 = g1.e11.coeff(0);
    if a0.im.abs() > tol || a0.re <= 0.0 {
        return Err(shape_err("constant term of e11 is not real positive"));
    }

    let mut r = g1.clone();
    let mut etas = vec![Complex64::default(); count];
    for j in (0..count).rev() {
        let denom = r.e11.coeff(0);
        if denom.norm() < 1e-12 * scale {
            return Err(shape_err("vanishing e11(0) while peeling"));
        }
        let eta = (r.e12.coeff(j as i64) / denom).conj();
        if eta.norm() >= 1.0 {
            return Err(Error::NotInImage { index: j, modulus: eta.norm() });
        }
        etas[j] = eta;
        // a(−η) = a(η), so the negated factor is exactly Pⱼ(η)⁻¹.
        r = p_chain_factor(-eta, j as i64).mul(&r);
    }
    let res = identity_residual(&r);
    if res > PEEL_TOL * scale {
        return Err(shape_err(format!("residual {res:.3e} after peeling the chain")));
    }
    Ok(etas)
}

/// Recovers [ζ₁, …, ζ_count] from a g2-chain loop, peeling from the top:
/// ζₖ = conj([zᵏ]e21 / e22(0)).
pub fn analyze_g2(g2: &LoopMatrix, count: usize) -> Result<Vec<Complex64>> {
    let scale = g2.norm_max().max(1.0);
    let tol = SHAPE_TOL * scale;
    check_symmetry(g2, tol)?;
    let hi = count as i64;
    if mass_outside(&g2.e21, 1, hi) > tol {
        return Err(shape_err(format!("e21 has mass outside degrees [1, {hi}]")));
    }
    if mass_outside(&g2.e22, 0, (hi - 1).max(0)) > tol {
        return Err(shape_err(format!("e22 has mass outside degrees [0, {}]", (hi - 1).max(0))));
    }
    let d0 = g2.e22.coeff(0);
    if d0.im.abs() > tol || d0.re <= 0.0 {
        return Err(shape_err("constant term of e22 is not real positive"));
    }

    let mut r = g2.clone();
    let mut zetas = vec![Complex64::default(); count];
    for k in (1..=count).rev() {
        let denom = r.e22.coeff(0);
        if denom.norm() < 1e-12 * scale {
            return Err(shape_err("vanishing e22(0) while peeling"));
        }
        let zeta = (r.e21.coeff(k as i64) / denom).conj();
        if zeta.norm() >= 1.0 {
            return Err(Error::NotInImage { index: k, modulus: zeta.norm() });
        }
        zetas[k - 1] = zeta;
        r = q_chain_factor(-zeta, k as i64).mul(&r);
    }
    let res = identity_residual(&r);
    if res > PEEL_TOL * scale {
        return Err(shape_err(format!("residual {res:.3e} after peeling the chain")));
    }
    Ok(zetas)
}

/// The n = 2 family g(x₁, x₂) of bottom-row-polynomial SU(1,1) loops:
///
///   [[1, x̄₁z⁻¹ + x̄₂z⁻²],[0, 1]] · diag(a₂, a₂⁻¹) · [[α₂, β₂],[γ₂, δ₂]]
///
/// with a₂² = ((1−|x₂|²)² − |x₁|²)/(1−|x₂|²). When numerator and
/// denominator have the same sign the loop exists and is SU(1,1)-valued;
/// when both are negative it lies outside the image of [`synth_g2`] and
/// peeling reports |ζ₂| = |x₂| ≥ 1. Mixed signs make a₂² < 0 and no such
/// loop exists ([`Error::WrongShape`]).
pub fn dichotomy_g2(x1: Complex64, x2: Complex64) -> Result<LoopMatrix> {
    let den = 1.0 - x2.norm_sqr();
    if den.abs() < 1e-12 {
        return Err(shape_err("|x2| = 1: the family is singular there"));
    }
    let num = den * den - x1.norm_sqr();
    let a2_sq = num / den;
    if a2_sq <= 0.0 {
        return Err(shape_err(format!(
            "a2^2 = {a2_sq:.6} <= 0 (numerator {num:.6}, denominator {den:.6})"
        )));
    }
    let a2 = a2_sq.sqrt();
    let dc = c64(1.0 / den, 0.0);
    let asc = c64(1.0 / a2_sq, 0.0);

    let upper = LoopMatrix::new(
        LaurentSeries::one(),
        &LaurentSeries::monomial(-1, x1.conj()) + &LaurentSeries::monomial(-2, x2.conj()),
        LaurentSeries::zero(),
        LaurentSeries::one(),
    );
    let mid = LoopMatrix::diag(
        LaurentSeries::constant(c64(a2, 0.0)),
        LaurentSeries::constant(c64(1.0 / a2, 0.0)),
    );
    let alpha = &LaurentSeries::one() - &LaurentSeries::monomial(1, asc * x1.conj() * x2);
    let beta = LaurentSeries::constant(-asc * dc * x1.conj() * x1.conj() * x2);
    let gamma = &LaurentSeries::monomial(1, dc * x1) + &LaurentSeries::monomial(2, x2);
    let delta = &LaurentSeries::one() + &LaurentSeries::monomial(1, dc * x1.conj() * x2);
    let right = LoopMatrix::new(alpha, beta, gamma, delta);
    Ok(upper.mul(&mid).mul(&right).with_hint(GroupKind::SU11))
}

mod c64_pairs {
    //! Vec<Complex64> as [[re, im], …] on the wire.
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// Parameters of a partial root subgroup factorization: the chain
/// parameters η₀..ηₙ and ζ₁..ζₙ, the star-antisymmetric exponent χ with
/// its zero mode held separately as an imaginary scalar (defined mod 2π,
/// reduced to (−π, π]).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootSubgroupData {
    #[serde(with = "c64_pairs")]
    pub etas: Vec<Complex64>,
    #[serde(with = "c64_pairs")]
    pub zetas: Vec<Complex64>,
    pub chi: LaurentSeries,
    pub chi0_im: f64,
}

/// Reduction of an angle to the branch (−π, π].
pub fn reduce_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(TAU);
    if y > PI {
        y -= TAU;
    }
    y
}

impl RootSubgroupData {
    pub fn new(
        etas: Vec<Complex64>,
        zetas: Vec<Complex64>,
        chi: LaurentSeries,
        chi0_im: f64,
    ) -> Result<Self> {
        let data = RootSubgroupData { etas, zetas, chi, chi0_im };
        data.validate()?;
        Ok(data)
    }

    pub fn empty() -> Self {
        RootSubgroupData {
            etas: Vec::new(),
            zetas: Vec::new(),
            chi: LaurentSeries::zero(),
            chi0_im: 0.0,
        }
    }

    /// All parameters strictly inside the disk, χ star-antisymmetric with
    /// no zero mode of its own (that lives in `chi0_im`).
    pub fn validate(&self) -> Result<()> {
        disk_check(&self.etas, 0)?;
        disk_check(&self.zetas, 1)?;
        let scale = self.chi.norm_max().max(1.0);
        if (&self.chi + &self.chi.star()).norm_max() > 1e-9 * scale {
            return Err(shape_err("chi is not star-antisymmetric"));
        }
        if self.chi.coeff(0).norm() > 1e-10 * scale {
            return Err(shape_err("chi has a zero mode; it belongs in chi0_im"));
        }
        Ok(())
    }

    /// χ as one series, zero mode included.
    pub fn chi_total(&self) -> LaurentSeries {
        &self.chi + &LaurentSeries::constant(c64(0.0, self.chi0_im))
    }

    /// True when some chain parameter exceeds [`NEAR_UNIT`] in modulus.
    pub fn is_near_unit(&self) -> bool {
        self.etas.iter().chain(self.zetas.iter()).any(|p| p.norm() > NEAR_UNIT)
    }

    /// Π(1−|η|²)⁻¹ · Π(1−|ζ|²)⁻¹, the conditioning penalty of the chains.
    pub fn condition_factor(&self) -> f64 {
        self.etas
            .iter()
            .chain(self.zetas.iter())
            .map(|p| 1.0 / (1.0 - p.norm_sqr()))
            .product()
    }
}

/// σ(g₁⁻¹)·diag(e^χ, e^{−χ})·g₂ with the exponentials truncated at `trunc`.
pub fn synth_full(data: &RootSubgroupData, trunc: i64) -> Result<LoopMatrix> {
    data.validate()?;
    if trunc < data.chi.span() {
        return Err(Error::TruncationTooSmall { trunc, span: data.chi.span() });
    }
    let g1 = synth_g1(&data.etas)?;
    let g2 = synth_g2(&data.zetas)?;
    let chi = data.chi_total();
    let middle = LoopMatrix::diag(chi.exp_trunc(trunc), (-&chi).exp_trunc(trunc));
    Ok(g1.inverse()?.sigma().mul(&middle).mul(&g2).with_hint(GroupKind::SU11))
}

/// Result of [`partial_rsf`]: the two chain-type factors, the recovered
/// parameter data, the boundary sups that were checked, and the sampled
/// reconstruction defect of σ(g₁⁻¹)·diag(e^χ, e^{−χ})·g₂ against the input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartialRsf {
    pub g1: LoopMatrix,
    pub g2: LoopMatrix,
    /// Chain parameters and χ. `etas`/`zetas` are filled only when the
    /// factors analyze as finite chains (`chains_recovered`); χ is always
    /// meaningful.
    pub data: RootSubgroupData,
    pub chains_recovered: bool,
    /// sup over samples of |l₂₁/l₁₁|.
    pub sup_l: f64,
    /// sup over samples of |u₂₁/u₂₂|.
    pub sup_u: f64,
    /// Relative sup distance between the reassembled product and the input.
    pub defect: f64,
}

impl PartialRsf {
    /// Reassembles σ(g₁⁻¹)·diag(e^χ, e^{−χ})·g₂ as a series product.
    pub fn reconstruct(&self, trunc: i64) -> Result<LoopMatrix> {
        let chi = self.data.chi_total();
        let middle = LoopMatrix::diag(chi.exp_trunc(trunc), (-&chi).exp_trunc(trunc));
        Ok(self.g1.inverse()?.sigma().mul(&middle).mul(&self.g2))
    }
}

fn pointwise_sigma(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    Matrix2::new(
        m[(1, 1)].conj(),
        m[(1, 0)].conj(),
        m[(0, 1)].conj(),
        m[(0, 0)].conj(),
    )
}

fn pointwise_inverse(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Matrix2::new(m[(1, 1)] / det, -m[(0, 1)] / det, -m[(1, 0)] / det, m[(0, 0)] / det)
}

/// Scales each sample to determinant one (the principal square root of a
/// determinant near 1 is well-defined).
fn normalize_det(samples: &mut [Matrix2<Complex64>]) -> Result<()> {
    for m in samples.iter_mut() {
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if (det - c64(1.0, 0.0)).norm() > 0.5 {
            return Err(Error::NumericalBreakdown {
                detail: format!("triangular factor determinant drifted to {det}"),
            });
        }
        let s = det.sqrt();
        for e in m.iter_mut() {
            *e /= s;
        }
    }
    Ok(())
}

fn sup_ratio(samples: &[Matrix2<Complex64>], num: (usize, usize), den: (usize, usize)) -> (f64, usize) {
    let mut sup = 0.0f64;
    let mut arg = 0usize;
    for (i, m) in samples.iter().enumerate() {
        let d = m[den].norm();
        let r = if d == 0.0 { f64::INFINITY } else { m[num].norm() / d };
        if r > sup {
            sup = r;
            arg = i;
        }
    }
    (sup, arg)
}

/// Partial root subgroup factorization g = σ(g₁⁻¹)·diag(e^χ, e^{−χ})·g₂.
///
/// The loop must be SU(1,1)-valued with winding zero and admit a
/// triangular factorization g = l·d·u whose factors satisfy the boundary
/// conditions sup|l₂₁/l₁₁| < 1 and sup|u₂₁/u₂₂| < 1 on the circle. The
/// factors are produced by pointwise big-cell decompositions of l⁻¹ and u,
/// a scalar Birkhoff split of the positive scales, and a unimodular
/// diagonal correction that makes one row of each factor analytic; χ is
/// then read off the diagonal torus values of Θ(g₁*)⁻¹·g·g₂⁻¹.
pub fn partial_rsf(g: &LoopMatrix, trunc: i64, num_samples: usize) -> Result<PartialRsf> {
    if trunc < 1 {
        return Err(shape_err("truncation degree must be positive"));
    }
    if (num_samples as i64) < 4 * trunc {
        return Err(shape_err(format!(
            "need at least {} samples for truncation {trunc}",
            4 * trunc
        )));
    }
    let winding = winding_component(g, num_samples)?;
    if winding != 0 {
        return Err(Error::NotIdentityComponent { winding });
    }
    let tri = triangular_factorization(g)?;

    let mut l_s = tri.l.eval_circle(num_samples);
    let mut u_s = tri.u.eval_circle(num_samples);
    normalize_det(&mut l_s)?;
    normalize_det(&mut u_s)?;

    let (sup_l, arg_l) = sup_ratio(&l_s, (1, 0), (0, 0));
    let (sup_u, arg_u) = sup_ratio(&u_s, (1, 0), (1, 1));
    if sup_l >= 1.0 {
        return Err(Error::BoundaryConditionFails { which: "l21/l11", sup: sup_l, sample: arg_l });
    }
    if sup_u >= 1.0 {
        return Err(Error::BoundaryConditionFails { which: "u21/u22", sup: sup_u, sample: arg_u });
    }

    // Pointwise big-cell decompositions: l⁻¹ = n⁺·diag(α₁, 1/α₁)·ġ₁ and
    // u = n⁺·diag(α₂, 1/α₂)·ġ₂.
    let mut alpha1 = Vec::with_capacity(num_samples);
    let mut base1 = Vec::with_capacity(num_samples);
    for m in &l_s {
        let inv = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
        let t = iwasawa_su11(&inv)?;
        alpha1.push(c64(t.a_pos, 0.0));
        base1.push(t.g0);
    }
    let mut alpha2 = Vec::with_capacity(num_samples);
    let mut base2 = Vec::with_capacity(num_samples);
    for m in &u_s {
        let t = iwasawa_su11(m)?;
        alpha2.push(c64(t.a_pos, 0.0));
        base2.push(t.g0);
    }

    // Birkhoff decompositions of the positive scales: α = e^{φ₋}e^{φ₀}e^{φ₊}
    // with φ₋ = star(φ₊). The correction diag(δ, δ̄) with δ = e^{±2i·Im φ₊}
    // turns the analytic row of each pointwise factor into boundary values
    // of an analytic function, which is what pins the factor uniquely.
    let phi1 = scalar_birkhoff_samples(&alpha1, BirkhoffKind::Positive, trunc)?;
    let phi2 = scalar_birkhoff_samples(&alpha2, BirkhoffKind::Positive, trunc)?;

    let mut g1_s = Vec::with_capacity(num_samples);
    let mut g2_s = Vec::with_capacity(num_samples);
    for k in 0..num_samples {
        let z = Complex64::from_polar(1.0, TAU * k as f64 / num_samples as f64);
        let d1 = c64(0.0, 2.0 * phi1.psi_plus.eval(z).im).exp();
        let d2 = c64(0.0, -2.0 * phi2.psi_plus.eval(z).im).exp();
        let m1 = base1[k];
        let m2 = base2[k];
        g1_s.push(Matrix2::new(
            d1 * m1[(0, 0)],
            d1 * m1[(0, 1)],
            d1.conj() * m1[(1, 0)],
            d1.conj() * m1[(1, 1)],
        ));
        g2_s.push(Matrix2::new(
            d2 * m2[(0, 0)],
            d2 * m2[(0, 1)],
            d2.conj() * m2[(1, 0)],
            d2.conj() * m2[(1, 1)],
        ));
    }
    let g1 = LoopMatrix::fit_circle(&g1_s, -trunc, trunc).with_hint(GroupKind::SU11);
    let g2 = LoopMatrix::fit_circle(&g2_s, -trunc, trunc).with_hint(GroupKind::SU11);

    // T = σ(g₁)·g·g₂⁻¹ takes values in the diagonal torus; χ is the
    // continuous logarithm of its upper-left entry.
    let g_s = g.eval_circle(num_samples);
    let g_sup = g_s
        .iter()
        .flat_map(|m| m.iter())
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut tvals = Vec::with_capacity(num_samples);
    let mut off_max = 0.0f64;
    let mut unimod_max = 0.0f64;
    for k in 0..num_samples {
        let t = pointwise_sigma(&g1_s[k]) * g_s[k] * pointwise_inverse(&g2_s[k]);
        off_max = off_max.max(t[(0, 1)].norm()).max(t[(1, 0)].norm());
        unimod_max = unimod_max.max((t[(0, 0)].norm() - 1.0).abs());
        tvals.push(t[(0, 0)]);
    }
    if off_max > 1e-3 * g_sup || unimod_max > 1e-3 {
        return Err(Error::NumericalBreakdown {
            detail: format!(
                "middle factor not in the torus (off-diagonal {off_max:.3e}, |T11|-1 = {unimod_max:.3e})"
            ),
        });
    }
    let (logs, chi_winding) = continuous_log_samples(&tvals)?;
    if chi_winding != 0 {
        return Err(Error::NotIdentityComponent { winding: chi_winding });
    }
    let chi_vals: Vec<Complex64> = logs.iter().map(|l| c64(0.0, l.im)).collect();
    let raw = LaurentSeries::fit_circle(&chi_vals, -trunc, trunc);
    let anti = (&raw - &raw.star()).scale(c64(0.5, 0.0));
    let zero = anti.coeff(0);
    let chi0_im = reduce_angle(zero.im);
    let chi = &anti - &LaurentSeries::constant(zero);

    // Best-effort chain recovery: finite chains show up as exactly
    // polynomial entries of the fitted factors.
    let deg_floor = 1e-7 * g_sup;
    let count1 = match effective_max_deg(&g1.e12, deg_floor) {
        Some(d) if d >= 0 => (d + 1) as usize,
        _ => 0,
    };
    let count2 = match effective_max_deg(&g2.e21, deg_floor) {
        Some(d) if d >= 1 => d as usize,
        _ => 0,
    };
    let etas = analyze_g1(&g1, count1);
    let zetas = analyze_g2(&g2, count2);
    let chains_recovered = etas.is_ok() && zetas.is_ok();
    let data = RootSubgroupData {
        etas: etas.unwrap_or_default(),
        zetas: zetas.unwrap_or_default(),
        chi,
        chi0_im,
    };

    // Sampled reconstruction defect of the returned objects.
    let chi_tot = data.chi_total();
    let mut defect = 0.0f64;
    for k in 0..num_samples {
        let z = Complex64::from_polar(1.0, TAU * k as f64 / num_samples as f64);
        let m1 = g1.eval(z);
        let m2 = g2.eval(z);
        let e = chi_tot.eval(z);
        let mid = Matrix2::new(e.exp(), Complex64::default(), Complex64::default(), (-e).exp());
        let recon = pointwise_sigma(&pointwise_inverse(&m1)) * mid * m2;
        let diff = recon - g_s[k];
        defect = defect.max(diff.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    defect /= g_sup;

    Ok(PartialRsf { g1, g2, data, chains_recovered, sup_l, sup_u, defect })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chains_are_the_identity() {
        assert_eq!(synth_g1(&[]).unwrap(), LoopMatrix::identity().with_hint(GroupKind::SU11));
        assert_eq!(synth_g2(&[]).unwrap(), LoopMatrix::identity().with_hint(GroupKind::SU11));
    }

    #[test]
    fn angles_reduce_to_the_principal_branch() {
        assert!((reduce_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((reduce_angle(-PI) - PI).abs() < 1e-15);
        assert!((reduce_angle(0.3) - 0.3).abs() < 1e-15);
    }
}
