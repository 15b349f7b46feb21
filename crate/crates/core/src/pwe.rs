//! Plane-wave expansion of the non-rotating lattice Hamiltonian.
//!
//! In the orthogonal-plane-wave basis `e^{i(k+G)·r}` the Hamiltonian has a
//! diagonal kinetic part `ħ²|k+G|²/(2m0)` and the pattern potential
//! `−(cħ/2nl_z)·φ_{G'−G}`. Both are real and the potential block is
//! symmetric (`φ_G = φ_{−G}`), so the matrix is real symmetric for every
//! Bloch wavevector and eigenvectors can be taken real.
//!
//! The rotation term of the equation of motion contains the unbounded
//! operator `r⊥` and is not representable in a periodic plane-wave basis;
//! rotation is handled entirely by the k·p module on top of the solutions
//! computed here.
//!
//! Matrices and eigenvalues are stored in reduced angular-frequency units
//! (entries divided by ħ, i.e. rad/s); multiply by ħ for Joules.

use crate::error::Error;
use crate::params::{DerivedConstants, HBAR, SPEED_OF_LIGHT};
use crate::pattern::{BzPath, PhasePattern, ReciprocalSet};
use crate::Result;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

/// Every scalar band of the spin-independent problem is doubly
/// spin-degenerate; vector states are scalar ⊗ spin.
pub const SPIN_DEGENERACY: usize = 2;

/// Relative tolerance defining a degenerate cluster of eigenvalues.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;

/// Dense real-symmetric Hamiltonian at one Bloch wavevector.
#[derive(Debug, Clone)]
pub struct PweHamiltonian {
    k: [f64; 2],
    /// Matrix entries in rad/s (Joules divided by ħ). Symmetric to the bit.
    matrix: DMatrix<f64>,
}

impl PweHamiltonian {
    pub fn k(&self) -> [f64; 2] {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Largest absolute off-symmetry defect; zero by construction.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in (r + 1)..n {
                worst = worst.max((self.matrix[(r, c)] - self.matrix[(c, r)]).abs());
            }
        }
        worst
    }

    /// Test hook: add `eps` to a single off-diagonal entry, breaking the
    /// symmetry. Used by validation negative controls.
    pub fn inject_asymmetry(&mut self, eps: f64) {
        if self.matrix.nrows() > 1 {
            self.matrix[(0, 1)] += eps;
        }
    }
}

/// Assemble the Hamiltonian at Bloch wavevector `k` (1/m).
pub fn assemble_hamiltonian(
    k: [f64; 2],
    pattern: &PhasePattern,
    recip: &ReciprocalSet,
    dc: &DerivedConstants,
) -> Result<PweHamiltonian> {
    if (pattern.pitch() - recip.pitch()).abs() > f64::EPSILON * pattern.pitch() {
        return Err(Error::DimensionMismatch(format!(
            "pattern pitch {:e} differs from reciprocal-set pitch {:e}",
            pattern.pitch(),
            recip.pitch()
        )));
    }
    let dim = recip.len();
    let refractive_index = 1.0 / dc.impedance;
    // −(cħ/2nl_z)φ / ħ = −(c/2nl_z)φ
    let potential_rate = SPEED_OF_LIGHT / (2.0 * refractive_index * dc.cavity_length);
    let kinetic = 0.5 * HBAR / dc.photon_mass;
    let unit = 2.0 * std::f64::consts::PI / recip.pitch();

    let mut matrix = DMatrix::<f64>::zeros(dim, dim);
    for row in 0..dim {
        let (ri, rj) = recip.indices(row);
        for col in row..dim {
            let (ci, cj) = recip.indices(col);
            // Canonical |Δi|,|Δj| representative keeps the fill exactly
            // symmetric and exploits φ_G = φ_{-G}.
            let di = (ri - ci).abs() as f64;
            let dj = (rj - cj).abs() as f64;
            let phi = pattern.fourier_coefficient([unit * di, unit * dj]);
            let value = -potential_rate * phi;
            matrix[(row, col)] = value;
            matrix[(col, row)] = value;
        }
    }
    for (flat, g) in recip.vectors().iter().enumerate() {
        let qx = k[0] + g[0];
        let qy = k[1] + g[1];
        matrix[(flat, flat)] += kinetic * (qx * qx + qy * qy);
    }
    Ok(PweHamiltonian { k, matrix })
}

/// Eigensolution at one Bloch wavevector: the lowest bands in ascending
/// order with their plane-wave coefficients (columns, unit 2-norm).
#[derive(Debug, Clone)]
pub struct BandSolution {
    k: [f64; 2],
    delta_omega: Vec<f64>,
    coefficients: DMatrix<Complex64>,
    spectral_norm: f64,
}

impl BandSolution {
    pub fn k(&self) -> [f64; 2] {
        self.k
    }

    pub fn n_bands(&self) -> usize {
        self.delta_omega.len()
    }

    pub fn basis_dim(&self) -> usize {
        self.coefficients.nrows()
    }

    /// Reduced band frequencies Δω (rad/s), ascending.
    pub fn delta_omega(&self) -> &[f64] {
        &self.delta_omega
    }

    /// Plane-wave coefficients of band `band` (unit 2-norm).
    pub fn coefficients(&self, band: usize) -> nalgebra::DVectorView<'_, Complex64> {
        self.coefficients.column(band)
    }

    /// Spectral norm of the Hamiltonian this solution came from (rad/s).
    pub fn spectral_norm(&self) -> f64 {
        self.spectral_norm
    }

    /// Group the bands into numerically degenerate clusters.
    pub fn clusters(&self, omega_scale: f64) -> Vec<std::ops::Range<usize>> {
        degenerate_clusters(&self.delta_omega, omega_scale)
    }
}

/// Cluster ascending values: neighbours closer than
/// `CLUSTER_TOLERANCE · max(|value|, omega_scale)` belong together.
pub fn degenerate_clusters(values: &[f64], omega_scale: f64) -> Vec<std::ops::Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = if i == values.len() {
            true
        } else {
            let tol = CLUSTER_TOLERANCE * values[i].abs().max(omega_scale);
            values[i] - values[i - 1] > tol
        };
        if split {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters
}

/// Diagonalize and keep the lowest `n_bands` eigenpairs.
///
/// Deterministic up to unitary mixing inside numerically degenerate
/// clusters; each eigenvector's largest-magnitude coefficient is made
/// real-positive. The residual `‖Hc − Δω c‖ ≤ 1e-10·‖H‖₂` is enforced, and
/// solver non-convergence is surfaced as an error.
pub fn solve_at_k(hamiltonian: &PweHamiltonian, n_bands: usize) -> Result<BandSolution> {
    let dim = hamiltonian.dim();
    if n_bands == 0 || n_bands > dim {
        return Err(Error::TooManyBands {
            requested: n_bands,
            dim,
        });
    }
    let eig = nalgebra::SymmetricEigen::try_new(hamiltonian.matrix.clone(), f64::EPSILON, 100_000)
        .ok_or(Error::EigensolverFailure { dim })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let spectral_norm = order
        .iter()
        .map(|&i| eig.eigenvalues[i].abs())
        .fold(0.0_f64, f64::max);

    let mut delta_omega = Vec::with_capacity(n_bands);
    let mut coefficients = DMatrix::<Complex64>::zeros(dim, n_bands);
    for (band, &src) in order.iter().take(n_bands).enumerate() {
        let value = eig.eigenvalues[src];
        let column = eig.eigenvectors.column(src);
        // sign convention: largest-|coefficient| entry real-positive
        let mut lead = 0;
        for r in 1..dim {
            if column[r].abs() > column[lead].abs() {
                lead = r;
            }
        }
        let sign = if column[lead] < 0.0 { -1.0 } else { 1.0 };

        let residual = {
            let v = DVector::from_fn(dim, |r, _| sign * column[r]);
            let mut res = &hamiltonian.matrix * &v;
            res.axpy(-value, &v, 1.0);
            res.norm()
        };
        if residual > 1e-10 * spectral_norm.max(f64::MIN_POSITIVE) {
            return Err(Error::EigensolverFailure { dim });
        }

        delta_omega.push(value);
        for r in 0..dim {
            coefficients[(r, band)] = Complex64::new(sign * column[r], 0.0);
        }
    }
    Ok(BandSolution {
        k: hamiltonian.k,
        delta_omega,
        coefficients,
        spectral_norm,
    })
}

/// Exact folded free-photon energies `ħ|k+G|²/(2m0)`, ascending; the
/// empty-lattice oracle (no diagonalization involved).
pub fn empty_lattice_bands(
    k: [f64; 2],
    recip: &ReciprocalSet,
    dc: &DerivedConstants,
    count: usize,
) -> Vec<f64> {
    let kinetic = 0.5 * HBAR / dc.photon_mass;
    let mut values: Vec<f64> = recip
        .vectors()
        .iter()
        .map(|g| {
            let qx = k[0] + g[0];
            let qy = k[1] + g[1];
            kinetic * (qx * qx + qy * qy)
        })
        .collect();
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    values
}

/// Interband momentum matrix element
/// `p_mn = Σ_G c_m*(G) c_n(G) ħ(k+G)` (kg·m/s, 2-vector).
pub fn momentum_matrix_element(
    bra: &BandSolution,
    band_m: usize,
    ket: &BandSolution,
    band_n: usize,
    recip: &ReciprocalSet,
) -> Result<[Complex64; 2]> {
    if bra.k != ket.k {
        return Err(Error::MismatchedWavevector(
            bra.k[0], bra.k[1], ket.k[0], ket.k[1],
        ));
    }
    if bra.basis_dim() != recip.len() || ket.basis_dim() != recip.len() {
        return Err(Error::DimensionMismatch(
            "band solutions and reciprocal set have different basis sizes".to_owned(),
        ));
    }
    let cm = bra.coefficients(band_m);
    let cn = ket.coefficients(band_n);
    let mut px = Complex64::new(0.0, 0.0);
    let mut py = Complex64::new(0.0, 0.0);
    for (flat, g) in recip.vectors().iter().enumerate() {
        let w = cm[flat].conj() * cn[flat];
        px += w * (bra.k[0] + g[0]);
        py += w * (bra.k[1] + g[1]);
    }
    Ok([px * HBAR, py * HBAR])
}

/// Band energies tabulated along a BZ path.
#[derive(Debug, Clone)]
pub struct BandTable {
    /// Path samples (k and cumulative arc length), one per row.
    pub points: Vec<crate::pattern::PathPoint>,
    /// `rows[i][b]` = Δω of band `b` at path sample `i` (rad/s).
    pub rows: Vec<Vec<f64>>,
}

impl BandTable {
    pub fn n_bands(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Solve the lowest `n_bands` along a path. K-points are solved in
/// parallel; rows come out in path order.
pub fn band_structure(
    path: &BzPath,
    pattern: &PhasePattern,
    recip: &ReciprocalSet,
    dc: &DerivedConstants,
    n_bands: usize,
) -> Result<BandTable> {
    let rows: Result<Vec<Vec<f64>>> = path
        .points()
        .par_iter()
        .map(|pt| {
            let h = assemble_hamiltonian(pt.k, pattern, recip, dc)?;
            let sol = solve_at_k(&h, n_bands)?;
            Ok(sol.delta_omega().to_vec())
        })
        .collect();
    Ok(BandTable {
        points: path.points().to_vec(),
        rows: rows?,
    })
}
