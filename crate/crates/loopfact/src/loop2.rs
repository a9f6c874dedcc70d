//! 2×2 matrix loops and their pointwise decompositions.
//!
//! A [`LoopMatrix`] has Laurent series entries and represents a map from the
//! unit circle into 2×2 complex matrices. Group operations are exact on
//! coefficients (inverses via the adjugate, valid since det = 1); the
//! pointwise polar and Iwasawa decompositions sample the circle and refit.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{continuous_log_samples, LaurentSeries};

/// Default sample count for membership and reconstruction checks; finite
/// Fourier loops are entire in z, so sampling this densely is spectrally
/// accurate for every symbol the crate produces.
pub const DEFAULT_SAMPLES: usize = 256;

/// Absolute defect below which a sampled matrix identity is accepted.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Looser defect bound used as a precondition by the pointwise
/// decompositions, so truncated transcendental loops still qualify.
const PRECONDITION_TOL: f64 = 1e-5;

/// Which matrix group a loop is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    SU11,
    SU2,
    SL2C,
}

/// 2×2 matrix with Laurent series entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopMatrix {
    pub e11: LaurentSeries,
    pub e12: LaurentSeries,
    pub e21: LaurentSeries,
    pub e22: LaurentSeries,
    pub group_hint: Option<GroupKind>,
}

impl LoopMatrix {
    pub fn new(
        e11: LaurentSeries,
        e12: LaurentSeries,
        e21: LaurentSeries,
        e22: LaurentSeries,
    ) -> Self {
        LoopMatrix { e11, e12, e21, e22, group_hint: None }
    }

    pub fn identity() -> Self {
        Self::diag(LaurentSeries::one(), LaurentSeries::one())
    }

    pub fn diag(a: LaurentSeries, d: LaurentSeries) -> Self {
        Self::new(a, LaurentSeries::zero(), LaurentSeries::zero(), d)
    }

    /// diag(zⁿ, z⁻ⁿ).
    pub fn z_diag(n: i64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::diag(LaurentSeries::monomial(n, one), LaurentSeries::monomial(-n, one))
    }

    /// Embeds a constant matrix.
    pub fn from_const(m: &Matrix2<Complex64>) -> Self {
        Self::new(
            LaurentSeries::constant(m[(0, 0)]),
            LaurentSeries::constant(m[(0, 1)]),
            LaurentSeries::constant(m[(1, 0)]),
            LaurentSeries::constant(m[(1, 1)]),
        )
    }

    pub fn with_hint(mut self, hint: GroupKind) -> Self {
        self.group_hint = Some(hint);
        self
    }

    pub fn mul(&self, rhs: &LoopMatrix) -> LoopMatrix {
        LoopMatrix::new(
            &(&self.e11 * &rhs.e11) + &(&self.e12 * &rhs.e21),
            &(&self.e11 * &rhs.e12) + &(&self.e12 * &rhs.e22),
            &(&self.e21 * &rhs.e11) + &(&self.e22 * &rhs.e21),
            &(&self.e21 * &rhs.e12) + &(&self.e22 * &rhs.e22),
        )
    }

    pub fn det(&self) -> LaurentSeries {
        &(&self.e11 * &self.e22) - &(&self.e12 * &self.e21)
    }

    /// Inverse via the adjugate; requires det = 1 coefficient-wise.
    pub fn inverse(&self) -> Result<LoopMatrix> {
        let defect = (&self.det() - &LaurentSeries::one()).norm_max();
        if defect > 1e-8 {
            return Err(Error::DetNotOne { defect });
        }
        let mut inv = LoopMatrix::new(
            self.e22.clone(),
            -&self.e12,
            -&self.e21,
            self.e11.clone(),
        );
        inv.group_hint = self.group_hint;
        Ok(inv)
    }

    /// The anti-holomorphic involution σ([[a,b],[c,d]]) = [[d*, c*],[b*, a*]];
    /// its fixed points are the SU(1,1)-valued loops.
    pub fn sigma(&self) -> LoopMatrix {
        let mut s = LoopMatrix::new(
            self.e22.star(),
            self.e21.star(),
            self.e12.star(),
            self.e11.star(),
        );
        s.group_hint = self.group_hint;
        s
    }

    /// The Cartan involution Θ: negate the off-diagonal entries.
    pub fn theta(&self) -> LoopMatrix {
        let mut t = LoopMatrix::new(
            self.e11.clone(),
            -&self.e12,
            -&self.e21,
            self.e22.clone(),
        );
        t.group_hint = self.group_hint;
        t
    }

    /// Pointwise Hermitian conjugate loop: entry (i,j) is star of entry (j,i).
    pub fn star(&self) -> LoopMatrix {
        LoopMatrix::new(
            self.e11.star(),
            self.e21.star(),
            self.e12.star(),
            self.e22.star(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Matrix2<Complex64> {
        Matrix2::new(self.e11.eval(z), self.e12.eval(z), self.e21.eval(z), self.e22.eval(z))
    }

    /// Values at the n-th roots of unity.
    pub fn eval_circle(&self, n: usize) -> Vec<Matrix2<Complex64>> {
        (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                self.eval(Complex64::from_polar(1.0, t))
            })
            .collect()
    }

    /// Refits a loop from circle samples, keeping degrees in [lo, hi].
    pub fn fit_circle(samples: &[Matrix2<Complex64>], lo: i64, hi: i64) -> LoopMatrix {
        let entry = |i, j| {
            let vals: Vec<Complex64> = samples.iter().map(|m| m[(i, j)]).collect();
            LaurentSeries::fit_circle(&vals, lo, hi)
        };
        LoopMatrix::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
    }

    /// Smallest s ≥ 0 with all entry supports in [-s, s].
    pub fn span(&self) -> i64 {
        self.e11.span().max(self.e12.span()).max(self.e21.span()).max(self.e22.span())
    }

    pub fn entries(&self) -> [&LaurentSeries; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    /// Largest coefficient magnitude over all entries.
    pub fn norm_max(&self) -> f64 {
        self.entries().iter().map(|e| e.norm_max()).fold(0.0, f64::max)
    }

    /// Worst sampled defect of the group identity for `group`, and whether it
    /// is within [`MEMBERSHIP_TOL`].
    pub fn membership(&self, group: GroupKind, num_samples: usize) -> (bool, f64) {
        let defect = self.membership_defect(group, num_samples);
        (defect <= MEMBERSHIP_TOL, defect)
    }

    pub fn membership_defect(&self, group: GroupKind, num_samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for m in self.eval_circle(num_samples) {
            let d = match group {
                GroupKind::SU11 => {
                    let j = Matrix2::new(
                        Complex64::new(1.0, 0.0),
                        Complex64::default(),
                        Complex64::default(),
                        Complex64::new(-1.0, 0.0),
                    );
                    let r = m.adjoint() * j * m - j;
                    r.iter().map(|c| c.norm()).fold(0.0, f64::max)
                }
                GroupKind::SU2 => {
                    let r = m.adjoint() * m - Matrix2::identity();
                    r.iter().map(|c| c.norm()).fold(0.0, f64::max)
                }
                GroupKind::SL2C => {
                    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
                    (det - Complex64::new(1.0, 0.0)).norm()
                }
            };
            worst = worst.max(d);
        }
        worst
    }
}

/// Max entrywise distance between two loops over circle samples.
pub fn sup_distance(a: &LoopMatrix, b: &LoopMatrix, num_samples: usize) -> f64 {
    let diff = [
        &a.e11 - &b.e11,
        &a.e12 - &b.e12,
        &a.e21 - &b.e21,
        &a.e22 - &b.e22,
    ];
    diff.iter().map(|d| d.sup_circle(num_samples)).fold(0.0, f64::max)
}

/// Pointwise polar decomposition g = diag(λ, λ⁻¹)·[[a, b],[star(b), a]].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolarPair {
    /// Unimodular scalar carrying the phase of g₁₁.
    pub lambda: LaurentSeries,
    /// SU(1,1)-valued loop of the form [[a, b],[star(b), a]] with a > 0.
    pub core: LoopMatrix,
}

impl PolarPair {
    /// diag(λ, star(λ))·core (star(λ) = λ⁻¹ on the circle for unimodular λ).
    pub fn reconstruct(&self) -> LoopMatrix {
        LoopMatrix::diag(self.lambda.clone(), self.lambda.star()).mul(&self.core)
    }
}

/// Pointwise polar decomposition of an SU(1,1)-valued loop.
///
/// λ(θ) = g₁₁/|g₁₁|, a(θ) = |g₁₁|, b(θ) = conj(λ)·g₁₂, each refit to a
/// Laurent series with degrees in [-trunc, trunc].
pub fn polar_su11(g: &LoopMatrix, num_samples: usize, trunc: i64) -> Result<PolarPair> {
    let defect = g.membership_defect(GroupKind::SU11, num_samples);
    if defect > PRECONDITION_TOL {
        return Err(Error::NotSU11 { defect });
    }
    let samples = g.eval_circle(num_samples);
    let max_abs = samples.iter().map(|m| m[(0, 0)].norm()).fold(0.0, f64::max);
    let min_abs = samples.iter().map(|m| m[(0, 0)].norm()).fold(f64::INFINITY, f64::min);
    if min_abs < 1e-9 * max_abs.max(1e-300) {
        return Err(Error::E11Vanishes { min_abs });
    }
    let mut lam = Vec::with_capacity(num_samples);
    let mut a = Vec::with_capacity(num_samples);
    let mut b = Vec::with_capacity(num_samples);
    for m in &samples {
        let l = m[(0, 0)] / m[(0, 0)].norm();
        lam.push(l);
        a.push(Complex64::new(m[(0, 0)].norm(), 0.0));
        b.push(l.conj() * m[(0, 1)]);
    }
    let lambda = LaurentSeries::fit_circle(&lam, -trunc, trunc);
    let a = LaurentSeries::fit_circle(&a, -trunc, trunc);
    let b = LaurentSeries::fit_circle(&b, -trunc, trunc);
    let core = LoopMatrix::new(a.clone(), b.clone(), b.star(), a).with_hint(GroupKind::SU11);
    Ok(PolarPair { lambda, core })
}

/// Index of the connected component of an SU(1,1) loop: the winding number
/// of the polar phase λ = g₁₁/|g₁₁|.
pub fn winding_component(g: &LoopMatrix, num_samples: usize) -> Result<i64> {
    let defect = g.membership_defect(GroupKind::SU11, num_samples);
    if defect > PRECONDITION_TOL {
        return Err(Error::NotSU11 { defect });
    }
    let vals: Vec<Complex64> = g.eval_circle(num_samples).iter().map(|m| m[(0, 0)]).collect();
    let max_abs = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let min_abs = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if min_abs < 1e-9 * max_abs.max(1e-300) {
        return Err(Error::E11Vanishes { min_abs });
    }
    let (_, winding) = continuous_log_samples(&vals)?;
    Ok(winding)
}

/// Pointwise Ṅ⁺ȦĠ₀ decomposition M = n_plus·diag(a_pos, 1/a_pos)·g0.
#[derive(Debug, Clone)]
pub struct IwasawaTriple {
    /// Upper unipotent factor.
    pub n_plus: Matrix2<Complex64>,
    /// Positive diagonal scale.
    pub a_pos: f64,
    /// SU(1,1) factor, uniquely determined by the bottom row of M.
    pub g0: Matrix2<Complex64>,
}

impl IwasawaTriple {
    pub fn reconstruct(&self) -> Matrix2<Complex64> {
        let a = Complex64::new(self.a_pos, 0.0);
        let d = Matrix2::new(a, Complex64::default(), Complex64::default(), 1.0 / a);
        self.n_plus * d * self.g0
    }
}

/// Decomposes a determinant-one matrix in the big cell Ṅ⁺ȦĠ₀.
///
/// The bottom row of M fixes g0 = [[conj(p), conj(q)],[q, p]] with
/// (q, p) = a_pos·(M₂₁, M₂₂) and a_pos = (|M₂₂|² - |M₂₁|²)^{-1/2}; the
/// positive-a convention makes the decomposition unique.
pub fn iwasawa_su11(m: &Matrix2<Complex64>) -> Result<IwasawaTriple> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let defect = (det - Complex64::new(1.0, 0.0)).norm();
    if defect > 1e-10 {
        return Err(Error::DetNotOne { defect });
    }
    let r = m[(1, 0)].norm();
    let s = m[(1, 1)].norm();
    if r >= s {
        return Err(Error::NotInBigCell { m21: r, m22: s });
    }
    let a_pos = (s * s - r * r).powf(-0.5);
    let q = m[(1, 0)] * a_pos;
    let p = m[(1, 1)] * a_pos;
    let g0 = Matrix2::new(p.conj(), q.conj(), q, p);
    // g0⁻¹ = [[p, -conj(q)],[-q, conj(p)]] since det g0 = |p|² - |q|² = 1.
    let g0_inv = Matrix2::new(p, -q.conj(), -q, p.conj());
    let ai = Complex64::new(1.0 / a_pos, 0.0);
    let d_inv = Matrix2::new(ai, Complex64::default(), Complex64::default(), 1.0 / ai);
    let n_plus = m * g0_inv * d_inv;
    Ok(IwasawaTriple { n_plus, a_pos, g0 })
}
