//! Photonic band engine for a rotating square lattice of coupled microcavities.
//!
//! The crate models a Fabry-Perot cavity whose top mirror carries a weak
//! periodic phase pattern (square pixels of relative phase `Δφ` on a grid of
//! phase 0). The transverse photon dynamics reduce to a 2D Schrödinger-like
//! eigenproblem with photon mass `m0 = nħk_z/c`, solved here two ways:
//!
//! * [`pwe`] — plane-wave expansion of the non-rotating Hamiltonian, giving
//!   band structures, eigenvectors and momentum matrix elements;
//! * [`kp`] — the 8×8 k·p model around the `T` point (zone corner), including
//!   the first-order rotation perturbation that produces the Coriolis-Zeeman
//!   spin and orbital splittings.
//!
//! [`symmetry`] classifies degenerate subspaces at `T` into C4v irreducible
//! representations (labelled `T1..T5` as in the source literature; the
//! Mulliken dictionary is T1=A1, T2=A2, T3=B1, T4=B2, T5=E), and
//! [`observables`] collects the splitting formulas, the orbital parameters
//! `M±`, modal-size relations, the longitudinal profile `η(z)` and field
//! reconstruction utilities.
//!
//! All frequencies are reduced: the constant paraxial offset `ω_z = c k_z/n`
//! is subtracted once and band energies are reported as `Δω = ω − ω_z` in
//! rad/s. Internal units are SI throughout.

pub mod error;
pub mod kp;
pub mod observables;
pub mod params;
pub mod pattern;
pub mod pwe;
pub mod report;
pub mod symmetry;

pub use error::Error;
pub use kp::{
    build_kp_matrix, edge_shifts, extract_kp_parameters, kp_bands, kp_levels, KpMatrix,
    KpParameters,
};
pub use observables::{
    alpha_overlap, analytic_m, effective_mass, effective_refractive_index, eta_profile,
    mean_square_radius, orbital_splitting, pwe_mass_route, reconstruct_fields, spin_splitting,
    splitting_from_modal_size, splitting_report, EtaProfile, Handedness, SplittingReport,
};
pub use params::{derive_constants, DerivedConstants, PhysicalParameters, ReducedEnergy};
pub use pattern::{bz_path, reciprocal_vectors, BzPath, PathLabel, PhasePattern, ReciprocalSet};
pub use pwe::{
    assemble_hamiltonian, band_structure, empty_lattice_bands, momentum_matrix_element, solve_at_k,
    BandSolution, BandTable, PweHamiltonian,
};
pub use symmetry::{
    analyze_t_quadruplet, classification_report, classify_irrep, photonic_harmonics,
    symmetry_adapted_basis, Irrep, Multiplicities, TPointAction, TQuadruplet,
};

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
