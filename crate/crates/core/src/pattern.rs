//! The periodic mirror phase pattern, its Fourier coefficients, the
//! reciprocal lattice and Brillouin-zone paths.
//!
//! The pattern is a square pixel of side `a = √FF·Λ` centered on the unit
//! cell origin, carrying phase `Δφ`, on a grid of phase 0, extended
//! Λ-periodically in x and y. Centering the pixel on the origin makes the
//! cos/sin combinations at the zone corner exact C4v symmetry carriers.

use crate::error::Error;
use crate::params::PhysicalParameters;
use crate::Result;
use std::f64::consts::PI;

/// sin(x)/x with the removable singularity filled in.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // |x| < 1e-4 keeps the truncation below 1e-17 relative.
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Periodic mirror phase pattern φ(x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePattern {
    pitch: f64,
    pixel_side: f64,
    contrast: f64,
}

impl PhasePattern {
    pub fn new(pitch: f64, fill_factor: f64, contrast: f64) -> Result<Self> {
        if !(pitch.is_finite() && pitch > 0.0) {
            return Err(Error::InvalidParameter {
                name: "pitch",
                message: format!("must be finite and > 0, got {pitch:e}"),
            });
        }
        if !(fill_factor > 0.0 && fill_factor < 1.0) {
            return Err(Error::InvalidParameter {
                name: "fill_factor",
                message: format!("must lie strictly in (0, 1), got {fill_factor:e}"),
            });
        }
        Ok(Self {
            pitch,
            pixel_side: fill_factor.sqrt() * pitch,
            contrast,
        })
    }

    pub fn from_parameters(p: &PhysicalParameters) -> Result<Self> {
        p.validate()?;
        Self::new(p.pitch, p.fill_factor, p.phase_contrast)
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Pixel side a = √FF·Λ.
    pub fn pixel_side(&self) -> f64 {
        self.pixel_side
    }

    pub fn contrast(&self) -> f64 {
        self.contrast
    }

    pub fn fill_factor(&self) -> f64 {
        (self.pixel_side / self.pitch).powi(2)
    }

    /// φ at a point: Δφ strictly inside the pixel, 0 on the grid; periodic
    /// in both coordinates.
    pub fn phase_at(&self, r: [f64; 2]) -> f64 {
        let half = 0.5 * self.pixel_side;
        let x = wrap_to_cell(r[0], self.pitch);
        let y = wrap_to_cell(r[1], self.pitch);
        if x.abs() < half && y.abs() < half {
            self.contrast
        } else {
            0.0
        }
    }

    /// Analytic Fourier coefficient of the pattern:
    /// `φ_G = Δφ·FF·sinc(Gx a/2)·sinc(Gy a/2)`.
    ///
    /// Real because the pattern is even; invariant under all C4v
    /// permutations and sign flips of (Gx, Gy).
    pub fn fourier_coefficient(&self, g: [f64; 2]) -> f64 {
        let half = 0.5 * self.pixel_side;
        self.contrast * self.fill_factor() * sinc(g[0] * half) * sinc(g[1] * half)
    }
}

/// Map a coordinate into the centered unit cell [-Λ/2, Λ/2).
fn wrap_to_cell(x: f64, pitch: f64) -> f64 {
    x - pitch * (x / pitch).round()
}

/// Square-truncated reciprocal lattice `G_ij = (2π/Λ)(i, j)`, `|i|,|j| ≤ N`,
/// in row-major (i, j) order. The square cutoff keeps the set closed under
/// the C4v point group.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocalSet {
    pitch: f64,
    cutoff: i32,
    vectors: Vec<[f64; 2]>,
}

/// Build the reciprocal set for cutoff `N ≥ 1`; `(2N+1)²` vectors.
pub fn reciprocal_vectors(pitch: f64, cutoff: i32) -> Result<ReciprocalSet> {
    if cutoff < 1 {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            message: format!("must be >= 1, got {cutoff}"),
        });
    }
    let unit = 2.0 * PI / pitch;
    let mut vectors = Vec::with_capacity(((2 * cutoff + 1) * (2 * cutoff + 1)) as usize);
    for i in -cutoff..=cutoff {
        for j in -cutoff..=cutoff {
            vectors.push([unit * i as f64, unit * j as f64]);
        }
    }
    Ok(ReciprocalSet {
        pitch,
        cutoff,
        vectors,
    })
}

impl ReciprocalSet {
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vectors(&self) -> &[[f64; 2]] {
        &self.vectors
    }

    /// Flat index of the integer pair (i, j), if inside the cutoff.
    pub fn index_of(&self, i: i32, j: i32) -> Option<usize> {
        let n = self.cutoff;
        if i.abs() > n || j.abs() > n {
            return None;
        }
        let side = (2 * n + 1) as usize;
        Some((i + n) as usize * side + (j + n) as usize)
    }

    /// Integer pair (i, j) of a flat index.
    pub fn indices(&self, flat: usize) -> (i32, i32) {
        let side = (2 * self.cutoff + 1) as usize;
        ((flat / side) as i32 - self.cutoff, (flat % side) as i32 - self.cutoff)
    }
}

/// High-symmetry vertices of the square-lattice Brillouin zone. The zone
/// corner (π/Λ, π/Λ) is labelled `T` here; standard square-lattice
/// literature calls the same point `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLabel {
    Gamma,
    X,
    T,
}

impl PathLabel {
    pub fn k(self, pitch: f64) -> [f64; 2] {
        let u = PI / pitch;
        match self {
            PathLabel::Gamma => [0.0, 0.0],
            PathLabel::X => [u, 0.0],
            PathLabel::T => [u, u],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PathLabel::Gamma => "Gamma",
            PathLabel::X => "X",
            PathLabel::T => "T",
        }
    }
}

impl std::str::FromStr for PathLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" | "Gamma" | "gamma" | "Γ" => Ok(PathLabel::Gamma),
            "X" | "x" => Ok(PathLabel::X),
            "T" | "t" | "M" | "m" => Ok(PathLabel::T),
            other => Err(Error::UnknownPathLabel(other.to_owned())),
        }
    }
}

/// One sample along a BZ path: wavevector and cumulative arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    pub k: [f64; 2],
    /// Cumulative arc length from the path start (1/m), for plotting.
    pub arc_length: f64,
}

/// Piecewise-linear path through the Brillouin zone.
#[derive(Debug, Clone, PartialEq)]
pub struct BzPath {
    pitch: f64,
    vertices: Vec<(PathLabel, usize)>,
    points: Vec<PathPoint>,
}

/// Sample a path through the given vertices with `samples_per_segment`
/// points per segment (both endpoints included; junction points shared).
pub fn bz_path(pitch: f64, labels: &[PathLabel], samples_per_segment: usize) -> Result<BzPath> {
    if labels.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "labels",
            message: "need at least two vertices".to_owned(),
        });
    }
    if samples_per_segment < 2 {
        return Err(Error::InvalidParameter {
            name: "samples_per_segment",
            message: "need at least two samples per segment".to_owned(),
        });
    }
    for w in labels.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidParameter {
                name: "labels",
                message: format!("consecutive vertices must differ, got {} twice", w[0].name()),
            });
        }
    }

    let mut points: Vec<PathPoint> = Vec::new();
    let mut vertices = Vec::with_capacity(labels.len());
    let mut arc = 0.0;
    for (seg, w) in labels.windows(2).enumerate() {
        let a = w[0].k(pitch);
        let b = w[1].k(pitch);
        let seg_len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        if seg == 0 {
            vertices.push((w[0], 0));
            points.push(PathPoint {
                k: a,
                arc_length: 0.0,
            });
        }
        for m in 1..samples_per_segment {
            let t = m as f64 / (samples_per_segment - 1) as f64;
            points.push(PathPoint {
                k: [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
                arc_length: arc + t * seg_len,
            });
        }
        arc += seg_len;
        vertices.push((w[1], points.len() - 1));
    }
    Ok(BzPath {
        pitch,
        vertices,
        points,
    })
}

impl BzPath {
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn points(&self) -> &[PathPoint] {
        &self.points
    }

    /// Vertex labels with the indices of their samples.
    pub fn vertices(&self) -> &[(PathLabel, usize)] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
