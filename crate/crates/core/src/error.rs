//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported group family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter { family: String, message: String },

    #[error("dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("matrix exponential rejected: |X|_F = {norm:.3e} exceeds 1e3")]
    ExpOverflow { norm: f64 },

    #[error("projection failed: corrected matrix has membership residual {residual:.3e}")]
    ProjectionFailed { residual: f64 },

    #[error("map does not define an automorphism of the group: residual {residual:.3e}")]
    NotAnAutomorphism { residual: f64 },

    #[error("lattice matrix must have determinant +-1, got {det}")]
    NotUnimodular { det: i64 },

    #[error("lattice automorphisms are only defined on plain torus groups")]
    LatticeOnNonTorus,

    #[error("differential image leaves the Lie algebra: residual {residual:.3e}")]
    DifferentialNotInAlgebra { residual: f64 },

    #[error("automorphism order exceeds 24 with no infinite-order certificate")]
    OrderUndetermined,

    #[error(
        "ambiguous numerical rank: singular value {value:.3e} within a factor of 10 of threshold {threshold:.3e}"
    )]
    IllConditioned { value: f64, threshold: f64 },

    #[error("automorphism is not 1-semisimple")]
    NotOneSemisimple,

    #[error("no generic element found after {attempts} attempts")]
    GenericityFailure { attempts: usize },

    #[error("weight {value} is not within tolerance of a rational with denominator <= {max_den}")]
    WeightReconstructionFailed { value: f64, max_den: i64 },

    #[error("enumeration of {count} torsion points exceeds the 10^6 cap")]
    EnumerationTooLarge { count: u128 },

    #[error("spectral invariants are not defined for lattice automorphisms")]
    UnsupportedKind,

    #[error("permutation closure exceeded {bound} elements")]
    ClosureExplosion { bound: usize },

    #[error("cyclic order {n} is not divisible by the automorphism order {order}")]
    OrderDoesNotDivide { n: u32, order: u32 },

    #[error(
        "composition of holomorphic/antiholomorphic and lattice automorphisms is not supported"
    )]
    MixedComposition,

    #[error("integer overflow in exact lattice arithmetic")]
    IntegerOverflow,

    #[error("unknown verification suite: {0}")]
    UnknownSuite(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
