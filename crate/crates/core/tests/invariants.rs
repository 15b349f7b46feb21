//! Cross-module invariants: solver-vs-oracle equivalences, variational
//! behaviour, symmetry commutation and the two-route consistency checks
//! that tie the plane-wave and k·p descriptions together.

use corioband_core::*;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fig1() -> (PhysicalParameters, DerivedConstants) {
    let p = PhysicalParameters::default();
    let dc = derive_constants(&p).unwrap();
    (p, dc)
}

fn t_point(pitch: f64) -> [f64; 2] {
    PathLabel::T.k(pitch)
}

#[test]
fn empty_lattice_solver_matches_folded_parabolas_at_random_k() {
    let (p, dc) = fig1();
    let pat = PhasePattern::new(p.pitch, p.fill_factor, 0.0).unwrap();
    let recip = reciprocal_vectors(p.pitch, 10).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u = std::f64::consts::PI / p.pitch;
    for _ in 0..20 {
        let k = [rng.random_range(-u..u), rng.random_range(-u..u)];
        let h = assemble_hamiltonian(k, &pat, &recip, &dc).unwrap();
        let sol = solve_at_k(&h, 8).unwrap();
        let oracle = empty_lattice_bands(k, &recip, &dc, 8);
        for (got, want) in sol.delta_omega().iter().zip(&oracle) {
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                "band mismatch at k = {k:?}: {got:e} vs {want:e}"
            );
        }
    }
}

#[test]
fn enlarging_the_basis_never_raises_low_eigenvalues() {
    let (p, dc) = fig1();
    let pat = PhasePattern::from_parameters(&p).unwrap();
    let u = std::f64::consts::PI / p.pitch;
    for k in [[0.31 * u, -0.62 * u], t_point(p.pitch)] {
        let mut previous: Option<Vec<f64>> = None;
        for cutoff in [8, 10, 12] {
            let recip = reciprocal_vectors(p.pitch, cutoff).unwrap();
            let h = assemble_hamiltonian(k, &pat, &recip, &dc).unwrap();
            let sol = solve_at_k(&h, 8).unwrap();
            if let Some(prev) = &previous {
                for (small, large) in prev.iter().zip(sol.delta_omega()) {
                    assert!(
                        *large <= small + 1e-12 * small.abs().max(dc.kinetic_scale(p.pitch)),
                        "eigenvalue rose from {small:e} to {large:e} when enlarging N"
                    );
                }
            }
            previous = Some(sol.delta_omega().to_vec());
        }
    }
}

#[test]
fn c4v_transformed_eigenvectors_keep_their_eigenvalue() {
    let (p, dc) = fig1();
    let pat = PhasePattern::from_parameters(&p).unwrap();
    let recip = reciprocal_vectors(p.pitch, 10).unwrap();
    let h = assemble_hamiltonian(t_point(p.pitch), &pat, &recip, &dc).unwrap();
    let sol = solve_at_k(&h, 8).unwrap();
    let action = TPointAction::new(&recip);

    let rayleigh = |v: &DVector<f64>| -> f64 { v.dot(&(h.matrix() * v)) / v.dot(v) };
    for band in 0..8 {
        let col = sol.coefficients(band);
        let raw = DVector::from_fn(sol.basis_dim(), |r, _| col[r].re);
        let (core, _) = action.project_to_core(&raw);
        let rq_raw = rayleigh(&raw);
        let rq_core = rayleigh(&core);
        for g in 0..8 {
            // exact statement on the symmetric core
            let rq_image = rayleigh(&action.apply(g, &core));
            assert!(
                (rq_image - rq_core).abs() <= 1e-10 * rq_core.abs(),
                "band {band}, element {g}: {rq_image:e} vs {rq_core:e}"
            );
            // Window-truncation bound on the raw eigenvector: the wrapped
            // permutation sends the ~1e-5-amplitude shell coefficients to
            // aliased positions with ~1e15 rad/s kinetic energies, so the
            // raw Rayleigh quotient moves by |c_shell|²·E_alias ~ 1e-6
            // relative at N=10.
            let rq_raw_image = rayleigh(&action.apply(g, &raw));
            assert!(
                (rq_raw_image - rq_raw).abs() <= 1e-4 * rq_raw.abs(),
                "band {band}, element {g}: raw defect {:e}",
                (rq_raw_image - rq_raw).abs() / rq_raw.abs()
            );
        }
    }
}

#[test]
fn kp_tracks_pwe_bands_near_the_zone_corner() {
    let (p, dc) = fig1();
    let pat = PhasePattern::from_parameters(&p).unwrap();
    let recip = reciprocal_vectors(p.pitch, 10).unwrap();
    let t = t_point(p.pitch);
    let h = assemble_hamiltonian(t, &pat, &recip, &dc).unwrap();
    let sol = solve_at_k(&h, 4).unwrap();
    let action = TPointAction::new(&recip);
    let params = extract_kp_parameters(&sol, &action, &recip, &p, &dc).unwrap();

    let u = std::f64::consts::PI / p.pitch;
    for direction in [[1.0, 0.0], [0.0, 1.0]] {
        for step in [-0.1, -0.05, 0.025, 0.075, 0.1] {
            let dk = [step * u * direction[0], step * u * direction[1]];
            let k = [t[0] + dk[0], t[1] + dk[1]];
            let hk = assemble_hamiltonian(k, &pat, &recip, &dc).unwrap();
            let pwe = solve_at_k(&hk, 4).unwrap();
            let mut doubled = Vec::with_capacity(8);
            for &w in pwe.delta_omega() {
                doubled.push(w);
                doubled.push(w);
            }
            doubled.sort_by(f64::total_cmp);
            let spread = doubled[7] - doubled[0];
            let kp = kp_bands(dk, 0.0, &params).unwrap();
            for (a, b) in kp.iter().zip(&doubled) {
                assert!(
                    (a - b).abs() <= 0.02 * spread,
                    "|δk| = {step}·π/Λ along {direction:?}: kp {a:e} vs pwe {b:e}, spread {spread:e}"
                );
            }
        }
    }
}

#[test]
fn mass_route_agrees_with_analytic_m_over_the_contrast_range() {
    let (p, dc) = fig1();
    for contrast in [3e-5, 1e-4, 3e-4, 1e-3] {
        let params = PhysicalParameters {
            phase_contrast: contrast,
            ..p
        };
        let pat = PhasePattern::from_parameters(&params).unwrap();
        let recip = reciprocal_vectors(params.pitch, 10).unwrap();
        let route = pwe_mass_route(&params, &dc, &pat, &recip).unwrap();
        let (m_plus, m_minus) = analytic_m(&params, &dc).unwrap();
        let m_mass = route.m_plus + route.m_minus;
        let m_analytic = m_plus + m_minus;
        assert!(
            (m_mass - m_analytic).abs() <= 0.10 * m_analytic,
            "Δφ = {contrast:e}: mass route M = {m_mass}, analytic M = {m_analytic}"
        );
    }
}

#[test]
fn t5_pair_splitting_carries_no_orbital_contribution() {
    // the T5/T5' rows of the rotation term have no M on the diagonal: their
    // pair splitting is 2Ω/n² for wildly different orbital parameters
    let (p, dc) = fig1();
    let pat = PhasePattern::from_parameters(&p).unwrap();
    let recip = reciprocal_vectors(p.pitch, 10).unwrap();
    let h = assemble_hamiltonian(t_point(p.pitch), &pat, &recip, &dc).unwrap();
    let sol = solve_at_k(&h, 4).unwrap();
    let action = TPointAction::new(&recip);
    let base = extract_kp_parameters(&sol, &action, &recip, &p, &dc).unwrap();
    let mut inflated = base;
    inflated.m_plus *= 1e3;
    inflated.m_minus *= 17.0;
    let omega = 123.0;
    for params in [&base, &inflated] {
        let shifts = edge_shifts(omega, params);
        let expected = spin_splitting(omega, p.refractive_index);
        for index in [0usize, 3] {
            let split = shifts.lower[index] - shifts.upper[index];
            assert!(
                (split - expected).abs() <= 1e-14 * expected,
                "pair {index}: {split:e} vs {expected:e}"
            );
        }
    }
}

#[test]
fn band_structure_along_the_high_symmetry_triangle_is_consistent() {
    // the profile of the reference configuration: four low bands at T well
    // separated from the rest, continuous along Γ-X-T-Γ
    let (p, dc) = fig1();
    let pat = PhasePattern::from_parameters(&p).unwrap();
    let recip = reciprocal_vectors(p.pitch, 8).unwrap();
    let path = bz_path(
        p.pitch,
        &[PathLabel::Gamma, PathLabel::X, PathLabel::T, PathLabel::Gamma],
        16,
    )
    .unwrap();
    let table = band_structure(&path, &pat, &recip, &dc, 8).unwrap();
    // locate the T vertex row
    let t_index = path.vertices()[2].1;
    let row = &table.rows[t_index];
    let gap_within = row[3] - row[0];
    let gap_above = row[4] - row[3];
    assert!(
        gap_above > 2.0 * gap_within,
        "lowest quadruplet not separated: {row:?}"
    );
}
