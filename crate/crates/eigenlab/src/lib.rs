//! Numerical laboratory for the eigenvalue-list calculus of normal states.
//!
//! A normal state on a matrix algebra is described up to unitary equivalence
//! by its *eigenvalue list*: the spectrum of its density operator, written in
//! nonincreasing order and padded with zeros. This crate implements that
//! calculus at finite dimension and uses it to verify, numerically and at
//! stated tolerances, a family of structural results about quantum dynamical
//! semigroups and two-sided product states:
//!
//! - [`eigenlist`]: the lists themselves with their l1 metric, direct sums,
//!   tensor products (eager and lazily certified top-k prefixes), and moment
//!   functionals `sum(lambda_k^n)` that determine a list.
//! - [`densop`]: density operators, partial traces over tensor factors, the
//!   trace-norm domination `l1(Lambda(A), Lambda(B)) <= trace|A - B|` (Weyl),
//!   and spectral utilities (support projections, fidelity, random states).
//! - [`intertwiner`]: a finite model of a unital *-endomorphism built from
//!   isometric intertwiners, its correlation operator, the defect operator
//!   `L v = R^{1/2} v` with its Gram and bilinear identities, sandwich
//!   operators `T -> A T B`, and a weak-convergence to trace-norm checker.
//! - [`cpsemigroup`]: Lindblad generators, the semigroups they generate via
//!   superoperator exponentials, detailed-balance constructions with a
//!   prescribed absorbing state, and compressions of unital CP maps to the
//!   support corner of an invariant state.
//! - [`interaction`]: two-sided chains of product states with a local core,
//!   trace-norm distances of finite-window restrictions, and the eigenvalue
//!   list lower bound `||omega_minus_bar - omega_plus_bar|| >=
//!   l1(Lambda(w- (x) w-), Lambda(w+ (x) w+))` with its closed form
//!   `2 - 2 p^2/q^2` for uniform lists.
//! - [`suites`] and [`cli`]: seeded verification sweeps behind a small
//!   command line (`tensor`, `verify`, `interaction`) with deterministic
//!   JSON reports.
//!
//! Everything is dense and double precision; dimensions are capped well
//! before numerics degrade. All randomness flows through seeded ChaCha
//! streams so every sweep, report, and example is reproducible.

#![forbid(unsafe_code)]

pub mod cli;
pub mod cpsemigroup;
pub mod densop;
pub mod eigenlist;
pub mod interaction;
pub mod intertwiner;
pub mod io;
pub mod linalg;
pub mod suites;

pub use densop::{DensityOperator, FactorShape, HermitianMatrix};
pub use eigenlist::{CertifiedPrefix, EigenvalueList};

/// Crate-wide error type. Variants name the violated precondition.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A list entry was more negative than the clamp tolerance.
    #[error("entry {value:e} at position {index} is below the negativity tolerance")]
    NegativeEntry { index: usize, value: f64 },
    /// An eager product would exceed the in-memory size cap.
    #[error("operation would produce {size} entries, above the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    /// A matrix expected to be Hermitian deviated from its adjoint.
    #[error("matrix deviates from its adjoint by {deviation:e}")]
    NotHermitian { deviation: f64 },
    /// A matrix expected positive semidefinite had a real negative eigenvalue.
    #[error("matrix has eigenvalue {min_eigenvalue:e} below the PSD tolerance")]
    NotPsd { min_eigenvalue: f64 },
    /// Two operands live on spaces of different dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    /// A factor shape does not multiply out to the ambient dimension.
    #[error("factor shape {shape:?} does not match total dimension {dim}")]
    ShapeMismatch { shape: Vec<usize>, dim: usize },
    /// A list or diagonal required to be a state does not sum to one.
    #[error("entries sum to {sum} but a state must sum to 1")]
    NotAState { sum: f64 },
    /// A prescribed spectrum cannot be realized at the requested dimension.
    #[error("bad spectrum: {reason}")]
    BadSpectrum { reason: String },
    /// A construction requires strictly positive weights everywhere.
    #[error("weight {index} vanishes; construction needs a faithful state")]
    NotFaithful { index: usize },
    /// A dimension argument is out of the supported range.
    #[error("dimension {dim} unsupported: {reason}")]
    BadDim { dim: usize, reason: String },
    /// A state claimed invariant moves under the dynamics.
    #[error("state moves by {deviation:e} under the dynamics; not invariant")]
    NotInvariant { deviation: f64 },
    /// A map claimed unital does not fix the identity.
    #[error("map moves the identity by {deviation:e}; not unital")]
    NotUnital { deviation: f64 },
    /// Members of a family that must share a trace do not.
    #[error("trace {actual} differs from required trace {expected}")]
    TraceMismatch { expected: f64, actual: f64 },
    /// A spanning set fails to span the full space.
    #[error("test vectors span a subspace of rank {rank} < {dim}")]
    SpanDeficient { rank: usize, dim: usize },
    /// A shifted observable window left the modeled extent of the chain.
    #[error("window [{lo}, {hi}] leaves the modeled chain extent")]
    WindowOutOfRange { lo: i64, hi: i64 },
    /// Arguments violate a documented precondition.
    #[error("bad arguments: {reason}")]
    BadArgs { reason: String },
    /// A file could not be read or written.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// A list or matrix file failed to parse; the line is 1-based.
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Named tolerances shared across modules. Each constant documents the
/// contract it guards; the CLI accepts overrides by the same names.
pub mod tol {
    /// Entries below this are trimmed from canonical eigenvalue lists.
    pub const ZERO_TRIM: f64 = 1e-14;
    /// Eigensolver output in `[-NEG_CLAMP, 0)` is clamped to zero.
    pub const NEG_CLAMP: f64 = 1e-12;
    /// Hermitian matrices may deviate from their adjoint by at most this.
    pub const HERMITIAN_DEV: f64 = 1e-12;
    /// Positive semidefinite means every eigenvalue is at least `-PSD_EIG`.
    pub const PSD_EIG: f64 = 1e-10;
    /// Density operators must have trace within this of one.
    pub const TRACE_ONE: f64 = 1e-10;
    /// Unit-sum checks on probability lists.
    pub const UNIT_SUM: f64 = 1e-9;
    /// Slack allowed when asserting the trace-norm domination of l1 gaps.
    pub const WEYL_SLACK: f64 = 1e-9;
    /// Gap allowed between two routes to the same eigenvalue list.
    pub const SPECTRUM_GAP: f64 = 1e-9;
    /// Entrywise gap allowed between two routes to the same small matrix.
    pub const ENTRYWISE: f64 = 1e-10;
    /// Deviation allowed in semigroup and duality identities.
    pub const SEMIGROUP_DEV: f64 = 1e-9;
    /// Trace-norm motion allowed for a state claimed invariant.
    pub const INVARIANCE: f64 = 1e-10;
    /// Distance to the absorbing state required at the time horizon.
    pub const ABSORB_FINAL: f64 = 1e-6;
    /// Jitter allowed when asserting a column of values is nonincreasing.
    pub const MONOTONE_JITTER: f64 = 1e-8;
}
