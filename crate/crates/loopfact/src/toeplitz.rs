//! Finite sections of the multiplication operator in the Hardy polarization.
//!
//! The basis of H₊ is mode-major: z⁰e₁, z⁰e₂, z¹e₁, z¹e₂, …; the shifted
//! space H₁ deletes z⁰e₂. Block (j,k) of a section is the matrix Fourier
//! coefficient ĝ(j-k).
//!
//! Determinants of A(g)A(g⁻¹) are computed two independent ways: exactly on
//! the finite block where I - A(g)A(g⁻¹) is supported (a product of two
//! finite-rank Hankel operators), and as the principal block of a product of
//! enlarged dense sections. The two routes share no code past the Fourier
//! coefficients, so they cross-check each other.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loop2::LoopMatrix;

/// Matrix Fourier coefficient ĝ(k).
pub fn fourier_block(g: &LoopMatrix, k: i64) -> Matrix2<Complex64> {
    Matrix2::new(g.e11.coeff(k), g.e12.coeff(k), g.e21.coeff(k), g.e22.coeff(k))
}

/// Dense finite section of the Toeplitz operator A(g) (or the shifted A₁(g)).
#[derive(Debug, Clone)]
pub struct ToeplitzSection {
    pub matrix: DMatrix<Complex64>,
    pub trunc: i64,
    pub shifted: bool,
}

/// Basis index of (mode q, component i) with the shifted deletion applied.
/// Returns None for the deleted z⁰e₂ vector.
fn basis_index(q: i64, comp: usize, shifted: bool) -> Option<usize> {
    let raw = 2 * q as usize + comp;
    if shifted {
        if raw == 1 {
            None
        } else if raw == 0 {
            Some(0)
        } else {
            Some(raw - 1)
        }
    } else {
        Some(raw)
    }
}

/// Compression of multiplication by g to modes 0..=N (minus z⁰e₂ if shifted).
pub fn section(g: &LoopMatrix, n: i64, shifted: bool) -> Result<ToeplitzSection> {
    let span = g.span();
    if n < span {
        return Err(Error::TruncationTooSmall { trunc: n, span });
    }
    let dim = 2 * (n as usize + 1) - usize::from(shifted);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for q in 0..=n {
        for p in (q - span).max(0)..=(q + span).min(n) {
            let block = fourier_block(g, q - p);
            for i in 0..2 {
                for j in 0..2 {
                    if let (Some(r), Some(c)) =
                        (basis_index(q, i, shifted), basis_index(p, j, shifted))
                    {
                        m[(r, c)] = block[(i, j)];
                    }
                }
            }
        }
    }
    Ok(ToeplitzSection { matrix: m, trunc: n, shifted })
}

/// Rectangular section testing injectivity: domain modes 0..=N, range modes
/// 0..=N+span, so every image of a domain vector is represented exactly.
/// A near-zero smallest singular value certifies a kernel vector supported
/// in the window, without the spurious zero rows a square section has for
/// symbols with diagonal winding.
pub fn injectivity_section(g: &LoopMatrix, n: i64, shifted: bool) -> DMatrix<Complex64> {
    let span = g.span();
    let rows_n = n + span;
    let nrows = 2 * (rows_n as usize + 1) - usize::from(shifted);
    let ncols = 2 * (n as usize + 1) - usize::from(shifted);
    let mut m = DMatrix::<Complex64>::zeros(nrows, ncols);
    for q in 0..=rows_n {
        for p in (q - span).max(0)..=(q + span).min(n) {
            let block = fourier_block(g, q - p);
            for i in 0..2 {
                for j in 0..2 {
                    if let (Some(r), Some(c)) =
                        (basis_index(q, i, shifted), basis_index(p, j, shifted))
                    {
                        m[(r, c)] = block[(i, j)];
                    }
                }
            }
        }
    }
    m
}

/// Singular values of a dense matrix, ascending.
pub fn singular_values_ascending(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    sv
}

impl ToeplitzSection {
    pub fn det(&self) -> Complex64 {
        self.matrix.clone().lu().determinant()
    }

    /// The four smallest singular values, ascending.
    pub fn kernel_svd(&self) -> Vec<f64> {
        let sv = singular_values_ascending(&self.matrix);
        sv.into_iter().take(4).collect()
    }

    /// Dense dump as [[re, im]] rows for external inspection.
    pub fn dump(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.matrix.nrows())
            .map(|r| (0..self.matrix.ncols()).map(|c| [self.matrix[(r, c)].re, self.matrix[(r, c)].im]).collect())
            .collect()
    }
}

/// The n×n Toeplitz matrices of the invertibility lemma for the triangular
/// family [[z⁻ⁿ, 0],[c(z), zⁿ]]: A'[j][k] = c_{j-k}, A''[j][k] = c_{j-k+1}.
#[derive(Debug, Clone)]
pub struct LemmaMatrices {
    pub a_prime: DMatrix<Complex64>,
    pub a_dprime: DMatrix<Complex64>,
}

/// Builds the lemma matrices from the 2n coefficients c_{-n+1}, …, c_n.
pub fn lemma_matrices(c: &[Complex64], n: usize) -> Result<LemmaMatrices> {
    if n == 0 || c.len() != 2 * n {
        return Err(Error::WrongLength { expected: 2 * n, got: c.len() });
    }
    // c[k + n - 1] holds c_k for k in [-n+1, n].
    let at = |k: i64| c[(k + n as i64 - 1) as usize];
    let a_prime = DMatrix::from_fn(n, n, |j, k| at(j as i64 - k as i64));
    let a_dprime = DMatrix::from_fn(n, n, |j, k| at(j as i64 - k as i64 + 1));
    Ok(LemmaMatrices { a_prime, a_dprime })
}

/// Checks that `tri` is exactly [[z⁻ⁿ, 0],[c(z), zⁿ]] with c supported in
/// [-n+1, n], and returns its coefficient list.
pub fn triangular_family_coeffs(tri: &LoopMatrix, n: usize) -> Result<Vec<Complex64>> {
    let nn = n as i64;
    if n == 0 {
        return Err(Error::WrongShape { detail: "family needs n >= 1".into() });
    }
    let one = Complex64::new(1.0, 0.0);
    let scale = tri.norm_max().max(1.0);
    let shape_tol = 1e-12 * scale;
    let d11 = (&tri.e11 - &crate::laurent::LaurentSeries::monomial(-nn, one)).norm_max();
    let d22 = (&tri.e22 - &crate::laurent::LaurentSeries::monomial(nn, one)).norm_max();
    if d11 > shape_tol || d22 > shape_tol || tri.e12.norm_max() > shape_tol {
        return Err(Error::WrongShape {
            detail: format!("diagonal must be (z^-{n}, z^{n}) with zero upper-right"),
        });
    }
    if !tri.e21.is_zero() && (tri.e21.min_deg() < -nn + 1 || tri.e21.max_deg() > nn) {
        return Err(Error::WrongShape {
            detail: format!("lower-left support must lie in [{}, {}]", -nn + 1, nn),
        });
    }
    Ok(((-nn + 1)..=nn).map(|k| tri.e21.coeff(k)).collect())
}

/// Builds [[z⁻ⁿ, 0],[c(z), zⁿ]] from the 2n coefficients c_{-n+1}, …, c_n.
pub fn triangular_family(c: &[Complex64], n: usize) -> Result<LoopMatrix> {
    if n == 0 || c.len() != 2 * n {
        return Err(Error::WrongLength { expected: 2 * n, got: c.len() });
    }
    let nn = n as i64;
    let one = Complex64::new(1.0, 0.0);
    let pairs: Vec<(i64, Complex64)> =
        c.iter().enumerate().map(|(i, &ck)| (i as i64 - nn + 1, ck)).collect();
    let lower = crate::laurent::LaurentSeries::from_pairs(&pairs);
    Ok(LoopMatrix::new(
        crate::laurent::LaurentSeries::monomial(-nn, one),
        crate::laurent::LaurentSeries::zero(),
        lower,
        crate::laurent::LaurentSeries::monomial(nn, one),
    ))
}

/// Lemma criterion: (A invertible, A₁ invertible) as (det A' ≠ 0, det A'' ≠ 0),
/// judged by the smallest singular value against an absolute 1e-10 threshold.
pub fn lemma_invertibility(tri: &LoopMatrix, n: usize) -> Result<(bool, bool)> {
    let c = triangular_family_coeffs(tri, n)?;
    let lm = lemma_matrices(&c, n)?;
    let s1 = singular_values_ascending(&lm.a_prime)[0];
    let s2 = singular_values_ascending(&lm.a_dprime)[0];
    Ok((s1 > 1e-10, s2 > 1e-10))
}

fn check_inverse(g: &LoopMatrix, g_inv: &LoopMatrix) -> Result<()> {
    let prod = g.mul(g_inv);
    let id = LoopMatrix::identity();
    let defect = prod
        .entries()
        .iter()
        .zip(id.entries())
        .map(|(a, b)| (*a - b).norm_max())
        .fold(0.0, f64::max);
    if defect > 1e-8 * g.norm_max().max(1.0) {
        return Err(Error::NotInverse { defect });
    }
    Ok(())
}

fn real_part_checked(det: Complex64) -> Result<f64> {
    if det.im.abs() > 1e-10 * det.norm().max(1.0) {
        return Err(Error::NonrealDeterminant { imag: det.im, abs: det.norm() });
    }
    Ok(det.re)
}

/// det(A(g)·A(g⁻¹)) (or the shifted variant), evaluated exactly.
///
/// From M_g M_{g⁻¹} = I in the polarization, A(g)A(g⁻¹) = I - K with
/// K = (Hankel of g)·(Hankel of g⁻¹) supported on modes < max span, so the
/// determinant is a finite one. The shifted operator picks up one more
/// finite-rank term, the conjugated projection g·E·g⁻¹ with E the z⁰e₂
/// projector.
pub fn det_aa(g: &LoopMatrix, g_inv: &LoopMatrix, shifted: bool) -> Result<f64> {
    check_inverse(g, g_inv)?;
    let r = g.span().max(g_inv.span());
    let g_hi = r;
    let ginv_lo = -r;
    let dim = 2 * (r as usize + 1) - usize::from(shifted);
    let mut m = DMatrix::<Complex64>::identity(dim, dim);
    for q in 0..=r {
        for p in 0..=r {
            // K_{(q,i),(p,j)} = Σ_{s≥1} ĝ(q+s)_{i·} ĝ⁻¹(-s-p)_{·j}.
            let mut block = Matrix2::<Complex64>::zeros();
            let s_max = (g_hi - q).min(-ginv_lo - p);
            for s in 1..=s_max.max(0) {
                block += fourier_block(g, q + s) * fourier_block(g_inv, -s - p);
            }
            if shifted {
                // (g·E·g⁻¹)_{(q,i),(p,j)} = ĝ(q)_{i2} ĝ⁻¹(-p)_{2j}.
                let gq = fourier_block(g, q);
                let gp = fourier_block(g_inv, -p);
                for i in 0..2 {
                    for j in 0..2 {
                        block[(i, j)] += gq[(i, 1)] * gp[(1, j)];
                    }
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    if let (Some(rr), Some(cc)) =
                        (basis_index(q, i, shifted), basis_index(p, j, shifted))
                    {
                        m[(rr, cc)] -= block[(i, j)];
                    }
                }
            }
        }
    }
    real_part_checked(m.lu().determinant())
}

/// Independent dense-section evaluation of det(A(g)A(g⁻¹)).
///
/// Multiplies two sections enlarged to modes ≤ n + span(g) + span(g⁻¹); on
/// the principal block of modes ≤ n the product then agrees entry-wise with
/// the operator product, and for n ≥ max span the block determinant equals
/// the operator determinant.
pub fn det_aa_dense(g: &LoopMatrix, g_inv: &LoopMatrix, n: i64, shifted: bool) -> Result<f64> {
    check_inverse(g, g_inv)?;
    let span = g.span().max(g_inv.span());
    if n < span {
        return Err(Error::TruncationTooSmall { trunc: n, span });
    }
    let big = n + g.span() + g_inv.span();
    let sa = section(g, big, shifted)?;
    let sb = section(g_inv, big, shifted)?;
    let prod = sa.matrix * sb.matrix;
    let dim = 2 * (n as usize + 1) - usize::from(shifted);
    let block = prod.view((0, 0), (dim, dim)).into_owned();
    real_part_checked(block.lu().determinant())
}
