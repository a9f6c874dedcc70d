//! Error taxonomy for the factorization pipeline.
//!
//! Three broad classes, mirrored by the CLI exit codes:
//! invalid input data (bad parameters, wrong shapes), mathematical
//! preconditions that genuinely fail (a loop outside the big cell, a
//! winding obstruction), and numerical breakdown (ill-conditioning near
//! a stratum boundary).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input has nonzero winding, so no continuous logarithm exists.
    #[error("winding number {winding} is nonzero; no continuous logarithm")]
    WindingNonzero { winding: i64 },

    /// A scalar symbol (nearly) vanishes somewhere on the sampled circle.
    #[error("symbol vanishes on the circle (min |f| = {min_abs:.3e} at sample {sample})")]
    VanishesOnCircle { min_abs: f64, sample: usize },

    /// A loop that must have determinant one does not.
    #[error("determinant differs from 1 by {defect:.3e}")]
    DetNotOne { defect: f64 },

    /// A loop fails the SU(1,1) membership test.
    #[error("not an SU(1,1) loop (J-unitarity defect {defect:.3e})")]
    NotSU11 { defect: f64 },

    /// Polar decomposition requires a nonvanishing upper-left entry.
    #[error("e11 vanishes on the circle (min |e11| = {min_abs:.3e})")]
    E11Vanishes { min_abs: f64 },

    /// A constant matrix lies outside the pointwise N+ A G0 big cell.
    #[error("matrix outside the big cell: |m21| = {m21:.6} >= |m22| = {m22:.6}")]
    NotInBigCell { m21: f64, m22: f64 },

    /// Section truncation order is smaller than the symbol's degree span.
    #[error("truncation {trunc} smaller than symbol degree span {span}")]
    TruncationTooSmall { trunc: i64, span: i64 },

    /// The alleged inverse loop is not an inverse.
    #[error("g * g_inv differs from the identity by {defect:.3e}")]
    NotInverse { defect: f64 },

    /// A determinant that must be real came out complex.
    #[error("determinant has nonreal part {imag:.3e} (|det| = {abs:.3e})")]
    NonrealDeterminant { imag: f64, abs: f64 },

    /// Coefficient list has the wrong length.
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },

    /// A loop does not have the required triangular/chain shape.
    #[error("input does not have the required shape: {detail}")]
    WrongShape { detail: String },

    /// Triangular factorization requested for a loop outside the top stratum.
    #[error("loop is not in the top stratum (best residual {residual:.3e})")]
    NotInTopStratum { residual: f64 },

    /// Conditioning too poor to certify a result.
    #[error("numerical breakdown: {detail}")]
    NumericalBreakdown { detail: String },

    /// Stratum scan exhausted its translation bound.
    #[error("stratum search exhausted at |n| <= {bound}")]
    SearchExhausted { bound: i64 },

    /// A root subgroup parameter must lie strictly inside the unit disk.
    #[error("parameter {index} has modulus {modulus:.6} >= 1")]
    ParameterOnOrOutsideDisk { index: usize, modulus: f64 },

    /// Peeling produced a parameter outside the disk: the loop is not in
    /// the image of the root subgroup chain.
    #[error("not in the image of the chain: peeled parameter {index} has modulus {modulus:.6} >= 1")]
    NotInImage { index: usize, modulus: f64 },

    /// Theorem-style boundary condition |ratio| < 1 on the circle fails.
    #[error("boundary condition fails: sup |{which}| = {sup:.6} at sample {sample}")]
    BoundaryConditionFails {
        which: &'static str,
        sup: f64,
        sample: usize,
    },

    /// The loop lies outside the identity component.
    #[error("loop not in the identity component (winding {winding})")]
    NotIdentityComponent { winding: i64 },
}

impl Error {
    /// CLI exit code class: 2 invalid input, 3 mathematical precondition,
    /// 4 numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            WrongLength { .. }
            | WrongShape { .. }
            | ParameterOnOrOutsideDisk { .. }
            | TruncationTooSmall { .. } => 2,
            WindingNonzero { .. }
            | VanishesOnCircle { .. }
            | DetNotOne { .. }
            | NotSU11 { .. }
            | E11Vanishes { .. }
            | NotInBigCell { .. }
            | NotInverse { .. }
            | NotInTopStratum { .. }
            | NotInImage { .. }
            | BoundaryConditionFails { .. }
            | NotIdentityComponent { .. } => 3,
            NonrealDeterminant { .. } | NumericalBreakdown { .. } | SearchExhausted { .. } => 4,
        }
    }
}
