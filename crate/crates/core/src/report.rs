//! Deterministic CSV and text serialization of result tables.
//!
//! All CSV output is UTF-8, comma-separated, with `#`-prefixed metadata
//! header lines. Floats are printed in scientific notation with 17
//! significant digits so byte-identical reruns are checkable.

use crate::observables::{EtaProfile, SplittingReport};
use crate::pwe::BandTable;
use crate::symmetry::ClassifiedBand;
use std::fmt::Write as _;

/// Canonical float formatting: scientific, 17 significant digits, with
/// negative zero normalized.
pub fn fmt_float(value: f64) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.16e}")
}

/// Render `#`-prefixed metadata lines.
pub fn meta_lines(meta: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (key, value) in meta {
        let _ = writeln!(out, "# {key}: {value}");
    }
    out
}

impl BandTable {
    /// SI units: arc length and wavevectors in 1/m, bands in rad/s.
    pub fn to_csv(&self, meta: &[(&str, String)]) -> String {
        let mut out = meta_lines(meta);
        out.push_str("s,kx,ky");
        for b in 1..=self.n_bands() {
            let _ = write!(out, ",band{b}");
        }
        out.push('\n');
        for (pt, row) in self.points.iter().zip(&self.rows) {
            let _ = write!(
                out,
                "{},{},{}",
                fmt_float(pt.arc_length),
                fmt_float(pt.k[0]),
                fmt_float(pt.k[1])
            );
            for value in row {
                let _ = write!(out, ",{}", fmt_float(*value));
            }
            out.push('\n');
        }
        out
    }

    /// Reduced units: arc length and wavevectors in π/Λ, bands in THz
    /// (Δω/2π · 1e-12).
    pub fn to_reduced_csv(&self, pitch: f64, meta: &[(&str, String)]) -> String {
        let unit = std::f64::consts::PI / pitch;
        let thz = 1e-12 / (2.0 * std::f64::consts::PI);
        let mut out = meta_lines(meta);
        out.push_str("s,kx,ky");
        for b in 1..=self.n_bands() {
            let _ = write!(out, ",band{b}");
        }
        out.push('\n');
        for (pt, row) in self.points.iter().zip(&self.rows) {
            let _ = write!(
                out,
                "{},{},{}",
                fmt_float(pt.arc_length / unit),
                fmt_float(pt.k[0] / unit),
                fmt_float(pt.k[1] / unit)
            );
            for value in row {
                let _ = write!(out, ",{}", fmt_float(value * thz));
            }
            out.push('\n');
        }
        out
    }
}

/// k·p band table: the pwe schema plus an `omega_rot` column.
pub fn kp_table_csv(
    rows: &[(f64, [f64; 2], [f64; 8])],
    omega_rot: f64,
    meta: &[(&str, String)],
) -> String {
    let mut out = meta_lines(meta);
    out.push_str("s,kx,ky");
    for b in 1..=8 {
        let _ = write!(out, ",band{b}");
    }
    out.push_str(",omega_rot\n");
    for (s, k, bands) in rows {
        let _ = write!(
            out,
            "{},{},{}",
            fmt_float(*s),
            fmt_float(k[0]),
            fmt_float(k[1])
        );
        for value in bands {
            let _ = write!(out, ",{}", fmt_float(*value));
        }
        let _ = writeln!(out, ",{}", fmt_float(omega_rot));
    }
    out
}

/// Splitting reports over a rotation sweep.
pub fn splitting_csv(reports: &[SplittingReport], meta: &[(&str, String)]) -> String {
    let mut out = meta_lines(meta);
    out.push_str(
        "omega_rot,delta_omega_s,delta_omega_l,m,m_plus,m_minus,r_squared,eq_modal_value,consistency_ratio\n",
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_float(r.omega_rot),
            fmt_float(r.spin),
            fmt_float(r.orbital),
            fmt_float(r.m),
            fmt_float(r.m_plus),
            fmt_float(r.m_minus),
            fmt_float(r.r_squared),
            fmt_float(r.eq_modal_value),
            fmt_float(r.consistency_ratio)
        );
    }
    out
}

/// Human-readable block for one splitting report.
pub fn splitting_text(r: &SplittingReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rotation rate        {} rad/s", fmt_float(r.omega_rot));
    let _ = writeln!(out, "spin splitting       {} rad/s", fmt_float(r.spin));
    let _ = writeln!(out, "orbital splitting    {} rad/s", fmt_float(r.orbital));
    let _ = writeln!(out, "M = M+ + M-          {}", fmt_float(r.m));
    let _ = writeln!(out, "M+                   {}", fmt_float(r.m_plus));
    let _ = writeln!(out, "M-                   {}", fmt_float(r.m_minus));
    let _ = writeln!(out, "<r^2>                {} m^2", fmt_float(r.r_squared));
    let _ = writeln!(out, "modal-size estimate  {} (dw_L/Omega)", fmt_float(r.eq_modal_value));
    let _ = writeln!(out, "consistency ratio    {}", fmt_float(r.consistency_ratio));
    out
}

/// Classification report rows for one k-point.
pub fn classification_csv(rows: &[ClassifiedBand], meta: &[(&str, String)]) -> String {
    let mut out = meta_lines(meta);
    out.push_str("band,delta_omega,irrep\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            row.band,
            fmt_float(row.delta_omega),
            row.label
        );
    }
    out
}

/// Longitudinal profile: z, Re/Im of 1+η, modulus and phase.
pub fn eta_csv(profile: &EtaProfile, meta: &[(&str, String)]) -> String {
    let mut out = meta_lines(meta);
    out.push_str("z,re,im,abs,arg\n");
    for (z, v) in profile.z.iter().zip(&profile.one_plus_eta) {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_float(*z),
            fmt_float(v.re),
            fmt_float(v.im),
            fmt_float(v.norm()),
            fmt_float(v.arg())
        );
    }
    out
}
