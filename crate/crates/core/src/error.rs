//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter violates its invariant.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// Two objects that must share a lattice or basis do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Bra and ket in a matrix element come from different Bloch wavevectors.
    #[error("mismatched Bloch wavevectors: ({0:e}, {1:e}) vs ({2:e}, {3:e})")]
    MismatchedWavevector(f64, f64, f64, f64),

    /// The dense eigensolver failed to converge.
    #[error("eigensolver did not converge for a {dim}x{dim} matrix")]
    EigensolverFailure { dim: usize },

    /// A subspace handed to the classifier is not closed under the group
    /// action; usually a degeneracy-cluster tolerance problem.
    #[error("subspace not invariant under C4v (projector commutator residual {residual:e} > {tolerance:e})")]
    NonInvariantSubspace { residual: f64, tolerance: f64 },

    /// Irrep classification produced an inconsistent multiplicity pattern.
    #[error("classification failed: {0}")]
    ClassificationFailed(String),

    /// Band-edge configuration outside the validity of the k·p model.
    #[error("outside k·p validity: {0}")]
    KpValidity(String),

    /// Finite-difference curvature is below the numerical noise floor.
    #[error("band curvature {curvature:e} below noise floor {floor:e}")]
    CurvatureBelowNoise { curvature: f64, floor: f64 },

    /// A zero effective mass was passed where a finite one is required.
    #[error("zero effective mass in {0}")]
    ZeroMass(&'static str),

    /// Unknown Brillouin-zone vertex label.
    #[error("unknown BZ path label `{0}` (expected G/Gamma, X or T)")]
    UnknownPathLabel(String),

    /// Requested more bands than the basis supports.
    #[error("requested {requested} bands from a basis of dimension {dim}")]
    TooManyBands { requested: usize, dim: usize },

    /// The paraxial expansion does not apply to the supplied state.
    #[error("paraxial validity violated: rms transverse wavenumber {k_rms:e} exceeds {limit:e}")]
    ParaxialViolation { k_rms: f64, limit: f64 },
}
