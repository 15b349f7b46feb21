//! Shared fixtures for the solver benchmarks.

use corioband_core::*;

/// Reference lattice with a configurable contrast.
pub fn reference(contrast: f64) -> (PhysicalParameters, DerivedConstants, PhasePattern) {
    let params = PhysicalParameters {
        phase_contrast: contrast,
        ..Default::default()
    };
    let dc = derive_constants(&params).unwrap();
    let pattern = PhasePattern::from_parameters(&params).unwrap();
    (params, dc, pattern)
}

/// Extracted k·p parameters of the reference lattice at a given cutoff.
pub fn reference_kp(contrast: f64, cutoff: i32) -> KpParameters {
    let (params, dc, pattern) = reference(contrast);
    let recip = reciprocal_vectors(params.pitch, cutoff).unwrap();
    let h = assemble_hamiltonian(PathLabel::T.k(params.pitch), &pattern, &recip, &dc).unwrap();
    let sol = solve_at_k(&h, 4).unwrap();
    let action = TPointAction::new(&recip);
    extract_kp_parameters(&sol, &action, &recip, &params, &dc).unwrap()
}
