//! The 8×8 k·p model around the T point, including the first-order
//! rotation perturbation.
//!
//! In the photonic-harmonic basis (see [`crate::symmetry::KP_BASIS_TAGS`])
//! the Hamiltonian is block diagonal: the upper 4×4 block carries the
//! left-handed spin states, the lower block their right-handed partners
//! with conjugated k·p coupling and negated-conjugated rotation term,
//!
//! `H = diag(H0 + Hkp + HΩ + ħ²k²/2m0, H0 + Hkp* − HΩ* + ħ²k²/2m0)`.
//!
//! All matrix entries are stored in reduced angular-frequency units
//! (divided by ħ). Band edges, the momentum element P and the orbital
//! parameters M± are extracted from a plane-wave solution at T;
//! rotation enters only here, never in the plane-wave solver.
//!
//! Splittings at the band edge are evaluated from the first-order level
//! shifts ([`edge_shifts`]): at δk = 0 the rotation term is diagonal in
//! this basis, so the shifts are exact to a few ulps, whereas differencing
//! full eigenvalues of magnitude ~1e12 rad/s would drown splittings of a
//! few rad/s in representation error. The full diagonalization
//! ([`kp_bands`]) is for dispersion away from the edge.

use crate::error::Error;
use crate::observables::analytic_m;
use crate::params::{DerivedConstants, PhysicalParameters, ReducedEnergy, HBAR};
use crate::pattern::ReciprocalSet;
use crate::pwe::{momentum_matrix_element, BandSolution};
use crate::symmetry::{analyze_t_quadruplet, TPointAction};
use crate::Result;
use nalgebra::Matrix4;
use num_complex::Complex64;

/// Relative edge-gap threshold below which k·p extraction refuses.
pub const EDGE_GAP_TOLERANCE: f64 = 1e-6;

/// Parameters of the 8×8 model: the three distinct band edges at T, the
/// interband momentum element and the orbital parameters.
#[derive(Debug, Clone, Copy)]
pub struct KpParameters {
    /// Edge of the vector T5' quadrupole pair: the scalar XY (T4) band.
    pub edge_t5_prime: ReducedEnergy,
    /// Edge of the vector T1..T4 quadruplet: the scalar (iX, iY) doublet.
    pub edge_t1: ReducedEnergy,
    /// Edge of the vector T5 pair: the scalar S (T1) band.
    pub edge_t5: ReducedEnergy,
    /// Interband momentum element P (kg·m/s), positive.
    pub momentum_p: f64,
    /// Orbital parameter M₊ (dimensionless).
    pub m_plus: f64,
    /// Orbital parameter M₋ (dimensionless).
    pub m_minus: f64,
    /// Photon mass m0 (kg).
    pub photon_mass: f64,
    /// Refractive index n.
    pub refractive_index: f64,
    /// Lattice pitch Λ (m), kept for validity checks.
    pub pitch: f64,
}

impl KpParameters {
    /// Total orbital parameter M = M₊ + M₋.
    pub fn m(&self) -> f64 {
        self.m_plus + self.m_minus
    }

    /// Band-edge frequencies on the diagonal of each 4×4 block:
    /// (ω_{T5'}, ω_{T1}, ω_{T1}, ω_{T5}).
    pub fn edge_frequencies(&self) -> [f64; 4] {
        [
            self.edge_t5_prime.0,
            self.edge_t1.0,
            self.edge_t1.0,
            self.edge_t5.0,
        ]
    }

    fn smallest_edge_gap(&self) -> f64 {
        let a = (self.edge_t1.0 - self.edge_t5.0).abs();
        let b = (self.edge_t5_prime.0 - self.edge_t1.0).abs();
        a.min(b)
    }
}

/// Extract the k·p parameters from a classified plane-wave solution at T.
///
/// Band edges are the (cluster-averaged) plane-wave energies; P is the
/// rotation-invariant combination of the momentum elements between the
/// S-like singlet and the doublet partners; M± come from the analytic
/// square-pixel expressions (the effective-mass route in `observables`
/// provides the independent cross-check).
pub fn extract_kp_parameters(
    sol: &BandSolution,
    action: &TPointAction,
    recip: &ReciprocalSet,
    params: &PhysicalParameters,
    dc: &DerivedConstants,
) -> Result<KpParameters> {
    let omega_scale = dc.kinetic_scale(params.pitch);
    let quad = analyze_t_quadruplet(action, sol, omega_scale)?;
    let energies = sol.delta_omega();
    let edge_t5 = energies[quad.s_band];
    let edge_t5_prime = energies[quad.xy_band];
    let edge_t1 = 0.5 * (energies[quad.doublet_bands.0] + energies[quad.doublet_bands.1]);

    let gap_lower = (edge_t1 - edge_t5).abs();
    let gap_upper = (edge_t5_prime - edge_t1).abs();
    if gap_lower < EDGE_GAP_TOLERANCE * omega_scale || gap_upper < EDGE_GAP_TOLERANCE * omega_scale
    {
        return Err(Error::KpValidity(format!(
            "band edges at T are not distinct (gaps {gap_lower:e}, {gap_upper:e} rad/s); \
             the k-dot-p expansion needs a finite contrast"
        )));
    }

    // |<S|p̂x|iX>|² + |<S|p̂y|iY>|² summed over both partners and both
    // components equals 4P² independent of the doublet phase convention.
    let mut sum_sq = 0.0;
    for band in [quad.doublet_bands.0, quad.doublet_bands.1] {
        let p = momentum_matrix_element(sol, quad.s_band, sol, band, recip)?;
        sum_sq += p[0].norm_sqr() + p[1].norm_sqr();
    }
    let momentum_p = 0.5 * sum_sq.sqrt();

    let (m_plus, m_minus) = analytic_m(params, dc)?;

    Ok(KpParameters {
        edge_t5_prime: ReducedEnergy(edge_t5_prime),
        edge_t1: ReducedEnergy(edge_t1),
        edge_t5: ReducedEnergy(edge_t5),
        momentum_p,
        m_plus,
        m_minus,
        photon_mass: dc.photon_mass,
        refractive_index: params.refractive_index,
        pitch: params.pitch,
    })
}

/// The assembled 8×8 Hamiltonian at `δk` from T, as its two 4×4 blocks
/// (entries in rad/s).
#[derive(Debug, Clone)]
pub struct KpMatrix {
    pub delta_k: [f64; 2],
    pub omega_rot: f64,
    pub upper: Matrix4<Complex64>,
    pub lower: Matrix4<Complex64>,
}

impl KpMatrix {
    /// Largest Hermiticity defect over both blocks; zero by construction.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for block in [&self.upper, &self.lower] {
            for r in 0..4 {
                for c in 0..4 {
                    worst = worst.max((block[(r, c)] - block[(c, r)].conj()).norm());
                }
            }
        }
        worst
    }
}

/// Assemble the k·p Hamiltonian at `δk` (1/m, measured from T) and
/// rotation rate `omega_rot` (rad/s). Hermitian by construction.
pub fn build_kp_matrix(delta_k: [f64; 2], omega_rot: f64, params: &KpParameters) -> KpMatrix {
    let k_lim = 0.5 * std::f64::consts::PI / params.pitch;
    let k_norm = (delta_k[0] * delta_k[0] + delta_k[1] * delta_k[1]).sqrt();
    if k_norm > k_lim {
        log::warn!(
            "k-dot-p evaluated at |δk| = {k_norm:e} 1/m, beyond half the zone-corner distance; \
             the four-band expansion is unreliable there"
        );
    }
    let coupling = HBAR * params.momentum_p * k_norm / params.photon_mass;
    let rotation_shift = params.m().abs() * omega_rot.abs()
        / (params.refractive_index * params.refractive_index);
    let gap = params.smallest_edge_gap();
    if coupling.max(rotation_shift) > 0.25 * gap {
        log::warn!(
            "first-order k-dot-p shifts ({:e} rad/s) exceed 25% of the smallest edge gap ({gap:e})",
            coupling.max(rotation_shift)
        );
    }

    let kp = Complex64::new(delta_k[0], delta_k[1]); // k₊
    let km = kp.conj(); // k₋
    let zero = Complex64::new(0.0, 0.0);

    let edges = params.edge_frequencies();
    let kinetic = 0.5 * HBAR * k_norm * k_norm / params.photon_mass;

    // ħP/m0 · k± in rad/s
    let v = HBAR * params.momentum_p / (params.photon_mass * HBAR); // = P/m0
    let ckp = kp * v;
    let ckm = km * v;
    #[rustfmt::skip]
    let h_kp = Matrix4::from_row_slice(&[
        zero, ckm,  ckp,  zero,
        ckp,  zero, zero, ckm,
        ckm,  zero, zero, -ckp,
        zero, ckp,  -ckm, zero,
    ]);

    // −(Ω/n²)·[[1, −M₋b₋, M₋b₊, 0], ...] with b± = ħk±/(2P) dimensionless
    let w = omega_rot / (params.refractive_index * params.refractive_index);
    let b_plus = kp * (HBAR / (2.0 * params.momentum_p));
    let b_minus = km * (HBAR / (2.0 * params.momentum_p));
    let m = params.m();
    let (mp, mm) = (params.m_plus, params.m_minus);
    let one = Complex64::new(1.0, 0.0);
    #[rustfmt::skip]
    let h_rot_over_minus_w = Matrix4::from_row_slice(&[
        one,              -b_minus * mm,              b_plus * mm,               zero,
        -b_plus * mm,     Complex64::new(1.0 - m, 0.0), zero,                    -b_minus * mp,
        b_minus * mm,     zero,                      Complex64::new(1.0 + m, 0.0), -b_plus * mp,
        zero,             -b_plus * mp,              -b_minus * mp,              one,
    ]);
    let h_rot = h_rot_over_minus_w * Complex64::new(-w, 0.0);

    let mut upper = h_kp + h_rot;
    let mut lower = h_kp.map(|z| z.conj()) - h_rot.map(|z| z.conj());
    for (i, &edge) in edges.iter().enumerate() {
        let diag = Complex64::new(edge + kinetic, 0.0);
        upper[(i, i)] += diag;
        lower[(i, i)] += diag;
    }
    KpMatrix {
        delta_k,
        omega_rot,
        upper,
        lower,
    }
}

/// Spin block of a k·p level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinBlock {
    /// Left-handed polarization states (upper 4×4 block).
    Upper,
    /// Right-handed polarization states (lower block).
    Lower,
}

/// One eigenlevel of the 8×8 model with its pairing metadata.
#[derive(Debug, Clone, Copy)]
pub struct KpLevel {
    /// Reduced frequency (rad/s).
    pub delta_omega: f64,
    pub block: SpinBlock,
    /// Index of the dominant photonic-harmonic basis state within the
    /// block (0..4), used to pair levels across Ω without relying on
    /// sorted order.
    pub dominant: usize,
    /// Squared overlap with that basis state.
    pub weight: f64,
}

fn solve_block(
    matrix: &Matrix4<Complex64>,
    block: SpinBlock,
    levels: &mut Vec<KpLevel>,
) -> Result<()> {
    let eig = nalgebra::SymmetricEigen::try_new(*matrix, f64::EPSILON, 10_000)
        .ok_or(Error::EigensolverFailure { dim: 4 })?;
    for i in 0..4 {
        let mut dominant = 0;
        let mut weight = 0.0;
        for r in 0..4 {
            let w = eig.eigenvectors[(r, i)].norm_sqr();
            if w > weight {
                weight = w;
                dominant = r;
            }
        }
        levels.push(KpLevel {
            delta_omega: eig.eigenvalues[i],
            block,
            dominant,
            weight,
        });
    }
    Ok(())
}

/// Diagonalize the 8×8 model; levels sorted ascending, each labelled by
/// its block and dominant basis state.
pub fn kp_levels(
    delta_k: [f64; 2],
    omega_rot: f64,
    params: &KpParameters,
) -> Result<Vec<KpLevel>> {
    let matrix = build_kp_matrix(delta_k, omega_rot, params);
    let mut levels = Vec::with_capacity(8);
    solve_block(&matrix.upper, SpinBlock::Upper, &mut levels)?;
    solve_block(&matrix.lower, SpinBlock::Lower, &mut levels)?;
    levels.sort_by(|a, b| a.delta_omega.total_cmp(&b.delta_omega));
    Ok(levels)
}

/// The 8 ascending eigenfrequencies of the k·p Hamiltonian (rad/s).
pub fn kp_bands(delta_k: [f64; 2], omega_rot: f64, params: &KpParameters) -> Result<[f64; 8]> {
    let levels = kp_levels(delta_k, omega_rot, params)?;
    let mut out = [0.0; 8];
    for (slot, level) in levels.iter().enumerate() {
        out[slot] = level.delta_omega;
    }
    Ok(out)
}

/// First-order rotation-induced level shifts at the band edge (δk = 0),
/// where the rotation term is diagonal in the photonic-harmonic basis.
///
/// `upper[i]` and `lower[i]` are the shifts of basis state `i` in the
/// respective block (rad/s); the full edge level is
/// `edge_frequencies()[i] + shift`. Exact to a few ulps, which is what
/// makes rad/s-scale splittings on top of 1e12 rad/s edges resolvable.
#[derive(Debug, Clone, Copy)]
pub struct EdgeShifts {
    pub upper: [f64; 4],
    pub lower: [f64; 4],
}

pub fn edge_shifts(omega_rot: f64, params: &KpParameters) -> EdgeShifts {
    let w = omega_rot / (params.refractive_index * params.refractive_index);
    let m = params.m();
    let upper = [-w, (m - 1.0) * w, -(m + 1.0) * w, -w];
    let lower = [w, (1.0 - m) * w, (m + 1.0) * w, w];
    EdgeShifts { upper, lower }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_constants;
    use crate::pattern::{reciprocal_vectors, PathLabel, PhasePattern};
    use crate::pwe::{assemble_hamiltonian, solve_at_k};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn extract_for(contrast: f64, cutoff: i32) -> Result<KpParameters> {
        let params = PhysicalParameters {
            phase_contrast: contrast,
            ..Default::default()
        };
        let dc = derive_constants(&params).unwrap();
        let pat = PhasePattern::from_parameters(&params).unwrap();
        let recip = reciprocal_vectors(params.pitch, cutoff).unwrap();
        let h = assemble_hamiltonian(PathLabel::T.k(params.pitch), &pat, &recip, &dc).unwrap();
        let sol = solve_at_k(&h, 4).unwrap();
        let action = TPointAction::new(&recip);
        extract_kp_parameters(&sol, &action, &recip, &params, &dc)
    }

    fn sample_params() -> KpParameters {
        // representative magnitudes; not tied to an extraction
        KpParameters {
            edge_t5_prime: ReducedEnergy(9.0e11),
            edge_t1: ReducedEnergy(2.0e11),
            edge_t5: ReducedEnergy(-8.0e11),
            momentum_p: 5.5536e5 * HBAR,
            m_plus: 403.6,
            m_minus: 639.1,
            photon_mass: 2.869e-35,
            refractive_index: 3.53,
            pitch: 4e-6,
        }
    }

    #[test]
    fn zero_k_zero_rotation_is_the_edge_diagonal() {
        let p = sample_params();
        let m = build_kp_matrix([0.0, 0.0], 0.0, &p);
        let edges = p.edge_frequencies();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { edges[i] } else { 0.0 };
                assert_abs_diff_eq!(m.upper[(i, j)].re, expect, epsilon = 1e-3);
                assert_abs_diff_eq!(m.upper[(i, j)].im, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(m.lower[(i, j)].re, expect, epsilon = 1e-3);
            }
        }
    }

    #[test]
    fn rotation_shifts_the_edge_diagonal() {
        let p = sample_params();
        let omega = 1e4;
        let w = omega / (p.refractive_index * p.refractive_index);
        let m = build_kp_matrix([0.0, 0.0], omega, &p);
        let edges = p.edge_frequencies();
        let pattern = [1.0, 1.0 - p.m(), 1.0 + p.m(), 1.0];
        for i in 0..4 {
            assert_relative_eq!(
                m.upper[(i, i)].re,
                edges[i] - w * pattern[i],
                max_relative = 1e-12
            );
            assert_relative_eq!(
                m.lower[(i, i)].re,
                edges[i] + w * pattern[i],
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn kp_coupling_pattern_along_x() {
        let p = sample_params();
        let k = 1e4;
        let m = build_kp_matrix([k, 0.0], 0.0, &p);
        let v = p.momentum_p * k / p.photon_mass;
        // with k_y = 0, k± = k: all coupling entries are ±(ħPk/m0)/ħ
        let sign = [
            [0.0, 1.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, -1.0],
            [0.0, 1.0, -1.0, 0.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                if r == c {
                    continue;
                }
                assert_abs_diff_eq!(m.upper[(r, c)].re, sign[r][c] * v, epsilon = 1e-6 * v);
                assert_abs_diff_eq!(m.upper[(r, c)].im, 0.0, epsilon = 1e-12 * v);
            }
        }
    }

    #[test]
    fn blocks_are_hermitian_for_generic_arguments() {
        let p = sample_params();
        for (dk, omega) in [
            ([3.0e4, -1.2e4], 0.0),
            ([1.0e4, 2.0e4], 1e5),
            ([-2.0e4, 1.0e4], -3e4),
        ] {
            let m = build_kp_matrix(dk, omega, &p);
            assert_eq!(m.hermiticity_defect(), 0.0);
        }
    }

    #[test]
    fn edge_spectrum_is_two_four_two() {
        let p = sample_params();
        let bands = kp_bands([0.0, 0.0], 0.0, &p).unwrap();
        let e = p.edge_frequencies();
        assert_relative_eq!(bands[0], e[3], max_relative = 1e-12);
        assert_relative_eq!(bands[1], e[3], max_relative = 1e-12);
        for b in &bands[2..6] {
            assert_relative_eq!(*b, e[1], max_relative = 1e-12);
        }
        assert_relative_eq!(bands[6], e[0], max_relative = 1e-12);
        assert_relative_eq!(bands[7], e[0], max_relative = 1e-12);
    }

    #[test]
    fn rotation_splits_quadruplet_and_pairs() {
        let p = sample_params();
        let omega = 1e3;
        let w = omega / (p.refractive_index * p.refractive_index);
        let shifts = edge_shifts(omega, &p);
        // quadruplet: ω_{T1} ± (M−1)w and ± (M+1)w
        assert_relative_eq!(shifts.upper[1], (p.m() - 1.0) * w, max_relative = 1e-14);
        assert_relative_eq!(shifts.lower[1], -(p.m() - 1.0) * w, max_relative = 1e-14);
        assert_relative_eq!(shifts.upper[2], -(p.m() + 1.0) * w, max_relative = 1e-14);
        assert_relative_eq!(shifts.lower[2], (p.m() + 1.0) * w, max_relative = 1e-14);
        // T5 and T5' pairs split by exactly 2Ω/n²
        assert_relative_eq!(shifts.lower[3] - shifts.upper[3], 2.0 * w, max_relative = 1e-14);
        assert_relative_eq!(shifts.lower[0] - shifts.upper[0], 2.0 * w, max_relative = 1e-14);
        // and the full diagonalization agrees at the edge to f64 resolution
        let bands = kp_bands([0.0, 0.0], omega, &p).unwrap();
        let mut expected: Vec<f64> = Vec::new();
        let edges = p.edge_frequencies();
        for i in 0..4 {
            expected.push(edges[i] + shifts.upper[i]);
            expected.push(edges[i] + shifts.lower[i]);
        }
        expected.sort_by(f64::total_cmp);
        for (got, want) in bands.iter().zip(&expected) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-2);
        }
    }

    #[test]
    fn fitted_slopes_match_the_analytic_set() {
        let p = sample_params();
        let n2 = p.refractive_index * p.refractive_index;
        let omegas = [1.0, 1e2, 1e4];
        // least-squares slope through the origin per (block, state)
        let mut slopes = Vec::new();
        for block in 0..2 {
            for state in 0..4 {
                let mut num = 0.0;
                let mut den = 0.0;
                for &omega in &omegas {
                    let s = edge_shifts(omega, &p);
                    let shift = if block == 0 {
                        s.upper[state]
                    } else {
                        s.lower[state]
                    };
                    num += shift * omega;
                    den += omega * omega;
                }
                slopes.push(num / den);
            }
        }
        slopes.sort_by(f64::total_cmp);
        let m = p.m();
        let mut expected = vec![
            -(m + 1.0) / n2,
            -(m - 1.0) / n2,
            -1.0 / n2,
            -1.0 / n2,
            1.0 / n2,
            1.0 / n2,
            (m - 1.0) / n2,
            (m + 1.0) / n2,
        ];
        expected.sort_by(f64::total_cmp);
        for (got, want) in slopes.iter().zip(&expected) {
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn conjugate_block_property() {
        let p = sample_params();
        // Ω = 0: the two blocks have identical spectra
        let levels = kp_levels([2.0e4, 1.0e4], 0.0, &p).unwrap();
        let upper: Vec<f64> = levels
            .iter()
            .filter(|l| l.block == SpinBlock::Upper)
            .map(|l| l.delta_omega)
            .collect();
        let lower: Vec<f64> = levels
            .iter()
            .filter(|l| l.block == SpinBlock::Lower)
            .map(|l| l.delta_omega)
            .collect();
        for (a, b) in upper.iter().zip(&lower) {
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
        // time reversal of the rotation: spectrum(−Ω) = spectrum(+Ω)
        let plus = kp_bands([2.0e4, 1.0e4], 5e3, &p).unwrap();
        let minus = kp_bands([2.0e4, 1.0e4], -5e3, &p).unwrap();
        for (a, b) in plus.iter().zip(&minus) {
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn extraction_refuses_the_empty_lattice() {
        assert!(matches!(extract_for(0.0, 6), Err(Error::KpValidity(_))));
    }

    #[test]
    fn extraction_at_reference_contrast() {
        let p = extract_for(0.02, 10).unwrap();
        // computed ordering for attractive pixels: S lowest, XY highest
        assert!(p.edge_t5.0 < p.edge_t1.0);
        assert!(p.edge_t1.0 < p.edge_t5_prime.0);
        assert!(p.momentum_p > 0.0);
        assert!(p.m_plus > 0.0 && p.m_minus > 0.0);
    }

    #[test]
    fn weak_contrast_momentum_element_approaches_free_value() {
        let p = extract_for(1e-4, 10).unwrap();
        let free = HBAR * std::f64::consts::PI / (std::f64::consts::SQRT_2 * 4e-6);
        assert_relative_eq!(p.momentum_p, free, max_relative = 1e-2);
    }

    #[test]
    fn kp_matches_pwe_exactly_at_the_edge() {
        let params = PhysicalParameters::default();
        let dc = derive_constants(&params).unwrap();
        let pat = PhasePattern::from_parameters(&params).unwrap();
        let recip = reciprocal_vectors(params.pitch, 10).unwrap();
        let h = assemble_hamiltonian(PathLabel::T.k(params.pitch), &pat, &recip, &dc).unwrap();
        let sol = solve_at_k(&h, 4).unwrap();
        let action = TPointAction::new(&recip);
        let kp = extract_kp_parameters(&sol, &action, &recip, &params, &dc).unwrap();

        let bands = kp_bands([0.0, 0.0], 0.0, &kp).unwrap();
        // spin-doubled scalar spectrum
        let mut pwe: Vec<f64> = Vec::new();
        for &w in sol.delta_omega() {
            pwe.push(w);
            pwe.push(w);
        }
        pwe.sort_by(f64::total_cmp);
        let tol = 1e-10 * dc.kinetic_scale(params.pitch);
        for (a, b) in bands.iter().zip(&pwe) {
            assert_abs_diff_eq!(a, b, epsilon = tol);
        }
    }
}
