//! Finitely supported Laurent series on the unit circle.
//!
//! A [`LaurentSeries`] stores the coefficients of f(z) = Σ fₙ zⁿ over an
//! explicit degree window. All arithmetic is exact on coefficients; the
//! only approximations in this module are the truncations of `exp_trunc`
//! and [`scalar_birkhoff`], both with explicit degree bounds.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Coefficients below this fraction of the largest one are trimmed from the
/// ends of the support during normalization.
const NORMALIZE_REL_EPS: f64 = 1e-14;

/// A symbol nearly vanishes if its smallest sampled modulus is below this
/// fraction of the largest.
const VANISH_REL_EPS: f64 = 1e-10;

/// Finitely supported two-sided sequence of complex coefficients.
///
/// `coeffs[j]` is the coefficient of z^(min_deg + j). The series is kept
/// normalized: the first and last stored coefficients are nonzero, and the
/// zero series is the empty list with `min_deg = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawSeries")]
pub struct LaurentSeries {
    min_deg: i64,
    coeffs: Vec<Complex64>,
}

/// Unvalidated mirror of the serialized form; converted through `new` so
/// deserialized series are always normalized.
#[derive(Deserialize)]
struct RawSeries {
    min_deg: i64,
    coeffs: Vec<Complex64>,
}

impl From<RawSeries> for LaurentSeries {
    fn from(raw: RawSeries) -> Self {
        LaurentSeries::new(raw.min_deg, raw.coeffs)
    }
}

impl LaurentSeries {
    /// Builds a series from a degree offset and ascending coefficients,
    /// normalizing the support.
    pub fn new(min_deg: i64, coeffs: Vec<Complex64>) -> Self {
        let mut s = LaurentSeries { min_deg, coeffs };
        s.normalize();
        s
    }

    pub fn zero() -> Self {
        LaurentSeries { min_deg: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn constant_re(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    /// c·zᵈᵉᵍ.
    pub fn monomial(deg: i64, c: Complex64) -> Self {
        Self::new(deg, vec![c])
    }

    /// Builds from (degree, coefficient) pairs; repeated degrees accumulate.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        if pairs.is_empty() {
            return Self::zero();
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap();
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut coeffs = vec![Complex64::default(); (hi - lo + 1) as usize];
        for &(d, c) in pairs {
            coeffs[(d - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    fn normalize(&mut self) {
        let max_abs = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max_abs == 0.0 {
            self.coeffs.clear();
            self.min_deg = 0;
            return;
        }
        let eps = NORMALIZE_REL_EPS * max_abs;
        let keep_from = self.coeffs.iter().position(|c| c.norm() > eps);
        let keep_to = self.coeffs.iter().rposition(|c| c.norm() > eps);
        match (keep_from, keep_to) {
            (Some(a), Some(b)) => {
                self.min_deg += a as i64;
                self.coeffs.drain(..a);
                self.coeffs.truncate(b - a + 1);
            }
            _ => {
                self.coeffs.clear();
                self.min_deg = 0;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Largest stored degree; equals `min_deg - 1` only for the zero series.
    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    /// Smallest s ≥ 0 with support contained in [-s, s].
    pub fn span(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.max_deg().max(-self.min_deg()).max(0)
        }
    }

    /// Coefficient of zᵏ (zero outside the stored window).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let idx = k - self.min_deg;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Complex64::default()
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Iterates (degree, coefficient) over the stored support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| (self.min_deg + j as i64, c))
    }

    /// f*(z) = Σ conj(fₙ) z⁻ⁿ; boundary values are the pointwise conjugate.
    pub fn star(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        Self::new(-self.max_deg(), coeffs)
    }

    /// Projection onto degrees ≥ 0.
    pub fn plus(&self) -> Self {
        self.window(0, i64::MAX)
    }

    /// Projection onto degrees ≤ 0.
    pub fn minus(&self) -> Self {
        self.window(i64::MIN, 0)
    }

    /// Projection onto degrees < 0; `plus() + strict_minus()` is the identity.
    pub fn strict_minus(&self) -> Self {
        self.window(i64::MIN, -1)
    }

    /// Keeps degrees in [lo, hi].
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        let pairs: Vec<_> = self.iter().filter(|&(d, _)| d >= lo && d <= hi).collect();
        Self::from_pairs(&pairs)
    }

    /// Keeps degrees in [-max_deg, max_deg].
    pub fn truncated(&self, max_deg: i64) -> Self {
        self.window(-max_deg, max_deg)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.min_deg, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by zᵏ.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            LaurentSeries { min_deg: self.min_deg + k, coeffs: self.coeffs.clone() }
        }
    }

    /// Horner evaluation at a point of the circle (or any nonzero z).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::default();
        }
        // Σ c_j z^(min_deg+j) = z^min_deg · Horner(coeffs, z); for negative
        // min_deg, evaluate the monomial prefix with 1/z to stay stable.
        let mut acc = Complex64::default();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        let mut pow = Complex64::new(1.0, 0.0);
        let (base, count) = if self.min_deg >= 0 {
            (z, self.min_deg)
        } else {
            (1.0 / z, -self.min_deg)
        };
        for _ in 0..count {
            pow *= base;
        }
        acc * pow
    }

    /// Values f(e^{iθ_k}) at θ_k = 2πk/n.
    pub fn eval_circle(&self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                self.eval(Complex64::from_polar(1.0, t))
            })
            .collect()
    }

    /// Max modulus over n circle samples.
    pub fn sup_circle(&self, n: usize) -> f64 {
        self.eval_circle(n).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Σ |cₙ| (dominates the sup norm on the circle).
    pub fn norm_l1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Max |cₙ|.
    pub fn norm_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Recovers the coefficients of degrees [lo, hi] from uniform circle
    /// samples by a discrete Fourier transform. Requires hi-lo < n; degrees
    /// outside the window are aliased into it, so the caller picks a window
    /// wide enough for the expected decay.
    pub fn fit_circle(samples: &[Complex64], lo: i64, hi: i64) -> Self {
        let n = samples.len();
        assert!(n > 0 && hi >= lo && (hi - lo) < n as i64, "window too wide for sample count");
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        // Forward FFT gives X_m = Σ_k f_k e^{-2πi mk/n}, so ĉ_m = X_{m mod n}/n.
        let pairs: Vec<_> = (lo..=hi)
            .map(|m| {
                let idx = (m.rem_euclid(n as i64)) as usize;
                (m, buf[idx] / n as f64)
            })
            .collect();
        Self::from_pairs(&pairs)
    }

    /// Power-series exponential with all degrees clamped to [-max_deg, max_deg].
    pub fn exp_trunc(&self, max_deg: i64) -> Self {
        let chi = self.truncated(max_deg);
        let mut result = Self::one();
        let mut term = Self::one();
        if chi.is_zero() {
            return result;
        }
        // Terms χᵏ/k! eventually shrink because each truncated product is
        // bounded by ‖χ‖₁ᵏ/k! on the clamped window.
        for k in 1..=400u64 {
            term = (&term * &chi).truncated(max_deg).scale(Complex64::new(1.0 / k as f64, 0.0));
            if term.is_zero() {
                break;
            }
            result = &result + &term;
            if term.norm_l1() < 1e-17 * result.norm_l1().max(1.0) {
                break;
            }
        }
        result
    }
}

impl Default for LaurentSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.min_deg.min(rhs.min_deg);
        let hi = self.max_deg().max(rhs.max_deg());
        let mut coeffs = vec![Complex64::default(); (hi - lo + 1) as usize];
        for (d, c) in self.iter() {
            coeffs[(d - lo) as usize] += c;
        }
        for (d, c) in rhs.iter() {
            coeffs[(d - lo) as usize] += c;
        }
        LaurentSeries::new(lo, coeffs)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &rhs.neg()
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries { min_deg: self.min_deg, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries::zero();
        }
        let lo = self.min_deg + rhs.min_deg;
        let mut coeffs =
            vec![Complex64::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentSeries::new(lo, coeffs)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        (&self).neg()
    }
}

/// Which Hardy projection to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HardyPart {
    Plus,
    Minus,
    StrictMinus,
}

/// Projection of f onto the requested degree range.
pub fn hardy_project(f: &LaurentSeries, part: HardyPart) -> LaurentSeries {
    match part {
        HardyPart::Plus => f.plus(),
        HardyPart::Minus => f.minus(),
        HardyPart::StrictMinus => f.strict_minus(),
    }
}

/// Symmetry class of a scalar symbol for [`scalar_birkhoff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirkhoffKind {
    /// Real positive boundary values: ψ₋ = star(ψ₊) and ψ₀ real.
    Positive,
    /// Unimodular boundary values: ψ₋ = -star(ψ₊) and ψ₀ imaginary.
    Unimodular,
}

/// The factors of f = exp(ψ₋)·exp(ψ₀)·exp(ψ₊).
#[derive(Debug, Clone)]
pub struct TriangularScalarFactors {
    /// Support in degrees ≤ -1.
    pub psi_minus: LaurentSeries,
    pub psi_zero: Complex64,
    /// Support in degrees ≥ 1.
    pub psi_plus: LaurentSeries,
}

impl TriangularScalarFactors {
    /// exp(ψ₋)·e^{ψ₀}·exp(ψ₊) with exponentials truncated at max_deg.
    pub fn reconstruct(&self, max_deg: i64) -> LaurentSeries {
        let lm = self.psi_minus.exp_trunc(max_deg);
        let lp = self.psi_plus.exp_trunc(max_deg);
        (&lm * &lp).scale(self.psi_zero.exp())
    }

    /// Factors of the square root f^{1/2} (halves every exponent).
    pub fn halved(&self) -> Self {
        let half = Complex64::new(0.5, 0.0);
        TriangularScalarFactors {
            psi_minus: self.psi_minus.scale(half),
            psi_zero: self.psi_zero * 0.5,
            psi_plus: self.psi_plus.scale(half),
        }
    }

    /// The full exponent ψ₋ + ψ₀ + ψ₊ as one series.
    pub fn exponent(&self) -> LaurentSeries {
        &(&self.psi_minus + &self.psi_plus) + &LaurentSeries::constant(self.psi_zero)
    }
}

/// Continuous branch of log f over uniform circle samples, starting from the
/// principal value at θ = 0. Returns the log samples and the winding number.
pub(crate) fn continuous_log_samples(samples: &[Complex64]) -> Result<(Vec<Complex64>, i64)> {
    let max_abs = samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let (min_idx, min_abs) = samples
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if max_abs == 0.0 || min_abs < VANISH_REL_EPS * max_abs {
        return Err(Error::VanishesOnCircle { min_abs, sample: min_idx });
    }
    let mut logs = Vec::with_capacity(samples.len());
    let mut arg = samples[0].arg();
    logs.push(Complex64::new(samples[0].norm().ln(), arg));
    for k in 1..samples.len() {
        arg += (samples[k] / samples[k - 1]).arg();
        logs.push(Complex64::new(samples[k].norm().ln(), arg));
    }
    let closing = arg + (samples[0] / samples[samples.len() - 1]).arg() - samples[0].arg();
    let winding = (closing / TAU).round() as i64;
    Ok((logs, winding))
}

/// Winding number of f around the origin from num_samples circle samples.
pub fn winding_number(f: &LaurentSeries, num_samples: usize) -> Result<i64> {
    let (_, w) = continuous_log_samples(&f.eval_circle(num_samples))?;
    Ok(w)
}

/// Scalar Birkhoff (triangular) factorization f = exp(ψ₋)·exp(ψ₀)·exp(ψ₊).
///
/// Samples log f along a continuous branch, Fourier-projects the modes, and
/// truncates the exponents at degree `trunc`. The symmetry dictated by
/// `kind` is enforced exactly on the output.
pub fn scalar_birkhoff(
    f: &LaurentSeries,
    kind: BirkhoffKind,
    trunc: i64,
) -> Result<TriangularScalarFactors> {
    let n = ((4 * (f.span() + trunc)).max(8) as usize).next_power_of_two();
    scalar_birkhoff_samples(&f.eval_circle(n), kind, trunc)
}

/// [`scalar_birkhoff`] on uniform circle samples of the symbol instead of a
/// series; used when the symbol is only known pointwise.
pub fn scalar_birkhoff_samples(
    samples: &[Complex64],
    kind: BirkhoffKind,
    trunc: i64,
) -> Result<TriangularScalarFactors> {
    assert!(trunc >= 1, "truncation degree must be positive");
    assert!(samples.len() as i64 > 2 * trunc, "not enough samples for the window");
    let (logs, winding) = continuous_log_samples(samples)?;
    if winding != 0 {
        return Err(Error::WindingNonzero { winding });
    }
    let psi = LaurentSeries::fit_circle(&logs, -trunc, trunc);
    let plus = psi.window(1, trunc);
    let minus = psi.window(-trunc, -1);
    let zero = psi.coeff(0);
    // Average the two halves into the symmetry class of the input; for data
    // genuinely of that class this only removes roundoff.
    let (psi_plus, psi_minus, psi_zero) = match kind {
        BirkhoffKind::Positive => {
            let p = (&plus + &minus.star()).scale(Complex64::new(0.5, 0.0));
            (p.clone(), p.star(), Complex64::new(zero.re, 0.0))
        }
        BirkhoffKind::Unimodular => {
            let p = (&plus - &minus.star()).scale(Complex64::new(0.5, 0.0));
            (p.clone(), -&p.star(), Complex64::new(0.0, zero.im))
        }
    };
    Ok(TriangularScalarFactors { psi_minus, psi_zero, psi_plus })
}
