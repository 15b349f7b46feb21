//! Command implementations. Every command writes the echoed configuration
//! and a tool-version stamp into the output directory alongside its CSVs;
//! identical configurations produce byte-identical outputs.

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::svg::{Plot, Series};
use corioband_core::report::{
    classification_csv, eta_csv, fmt_float, kp_table_csv, splitting_csv, splitting_text,
};
use corioband_core::*;
use rayon::prelude::*;
use std::path::{Path, PathBuf};

pub const TOOL_NAME: &str = "corioband";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output-directory handle; creating it writes the reproducibility
/// artifacts (config echo + version stamp).
pub struct Emitter {
    dir: PathBuf,
}

impl Emitter {
    pub fn prepare(config: &RunConfig) -> CliResult<Self> {
        let dir = config.output.directory.clone();
        std::fs::create_dir_all(&dir)?;
        let emitter = Self { dir };
        emitter.write("config_echo.toml", &config.echo_toml())?;
        emitter.write("VERSION", &format!("{TOOL_NAME} {TOOL_VERSION}\n"))?;
        Ok(emitter)
    }

    pub fn write(&self, name: &str, contents: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        Ok(path)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

fn base_meta(config: &RunConfig, command: &str) -> Vec<(&'static str, String)> {
    vec![
        ("tool", format!("{TOOL_NAME} {TOOL_VERSION}")),
        ("command", command.to_owned()),
        ("wavelength", fmt_float(config.physical.wavelength)),
        ("refractive_index", fmt_float(config.physical.refractive_index)),
        ("pitch", fmt_float(config.physical.pitch)),
        ("fill_factor", fmt_float(config.physical.fill_factor)),
        ("phase_contrast", fmt_float(config.physical.phase_contrast)),
        ("rotation_rate", fmt_float(config.physical.rotation_rate)),
        ("pwe_cutoff", config.pwe.cutoff.to_string()),
        ("bands", config.pwe.bands.to_string()),
        ("seed", config.seed.to_string()),
    ]
}

fn to_meta_refs(meta: &[(&'static str, String)]) -> Vec<(&'static str, String)> {
    meta.to_vec()
}

/// Solve at the zone corner and extract the k·p parameters.
fn extract_at_t(config: &RunConfig) -> CliResult<(BandSolution, TPointAction, KpParameters)> {
    let params = config.parameters();
    let dc = config.derived()?;
    let pattern = config.pattern()?;
    let recip = config.reciprocal()?;
    let t = PathLabel::T.k(params.pitch);
    let h = assemble_hamiltonian(t, &pattern, &recip, &dc)?;
    let sol = solve_at_k(&h, 4)?;
    let action = TPointAction::new(&recip);
    let kp = extract_kp_parameters(&sol, &action, &recip, &params, &dc)?;
    Ok((sol, action, kp))
}

/// One k·p table row: arc length, wavevector and the 8 band values.
pub type KpRow = (f64, [f64; 2], [f64; 8]);

pub struct BandsOutcome {
    pub table: BandTable,
    pub kp_rows: Option<Vec<KpRow>>,
    pub kp_params: Option<KpParameters>,
}

/// `bands`: plane-wave band structure along the configured path, with an
/// optional k·p overlay near the zone corner.
pub fn cmd_bands(config: &RunConfig, with_kp: bool) -> CliResult<BandsOutcome> {
    let emitter = Emitter::prepare(config)?;
    let dc = config.derived()?;
    let pattern = config.pattern()?;
    let recip = config.reciprocal()?;
    let labels = config.path_labels()?;
    let path = bz_path(config.physical.pitch, &labels, config.path.samples_per_segment)?;
    let table = band_structure(&path, &pattern, &recip, &dc, config.pwe.bands)?;

    let meta = base_meta(config, "bands");
    emitter.write("bands.csv", &table.to_csv(&to_meta_refs(&meta)))?;
    emitter.write(
        "bands_reduced.csv",
        &table.to_reduced_csv(config.physical.pitch, &to_meta_refs(&meta)),
    )?;

    let mut outcome = BandsOutcome {
        table,
        kp_rows: None,
        kp_params: None,
    };

    if with_kp {
        let (_, _, kp) = extract_at_t(config)?;
        let t = PathLabel::T.k(config.physical.pitch);
        let window = 0.5 * std::f64::consts::PI / config.physical.pitch;
        let mut rows = Vec::new();
        for pt in path.points() {
            let dk = [pt.k[0] - t[0], pt.k[1] - t[1]];
            if (dk[0] * dk[0] + dk[1] * dk[1]).sqrt() <= window {
                rows.push((pt.arc_length, pt.k, kp_bands(dk, config.physical.rotation_rate, &kp)?));
            }
        }
        let mut kp_meta = base_meta(config, "bands --kp");
        kp_meta.push(("edge_t5_prime", fmt_float(kp.edge_t5_prime.0)));
        kp_meta.push(("edge_t1", fmt_float(kp.edge_t1.0)));
        kp_meta.push(("edge_t5", fmt_float(kp.edge_t5.0)));
        kp_meta.push(("momentum_p", fmt_float(kp.momentum_p)));
        kp_meta.push(("m_plus", fmt_float(kp.m_plus)));
        kp_meta.push(("m_minus", fmt_float(kp.m_minus)));
        emitter.write(
            "kp_bands.csv",
            &kp_table_csv(&rows, config.physical.rotation_rate, &to_meta_refs(&kp_meta)),
        )?;
        outcome.kp_rows = Some(rows);
        outcome.kp_params = Some(kp);
    }

    if config.wants_svg() {
        let mut series: Vec<Series> = (0..outcome.table.n_bands())
            .map(|b| Series {
                label: if b == 0 { "pwe".into() } else { String::new() },
                color: "black",
                points: outcome
                    .table
                    .points
                    .iter()
                    .zip(&outcome.table.rows)
                    .map(|(pt, row)| (pt.arc_length, row[b]))
                    .collect(),
            })
            .collect();
        if let Some(rows) = &outcome.kp_rows {
            for b in 0..8 {
                series.push(Series {
                    label: if b == 0 { "kp".into() } else { String::new() },
                    color: "gray",
                    points: rows.iter().map(|(s, _, bands)| (*s, bands[b])).collect(),
                });
            }
        }
        let plot = Plot {
            title: "band structure".into(),
            x_label: "arc length (1/m)".into(),
            y_label: "reduced frequency (rad/s)".into(),
            log_x: false,
            log_y: false,
            series,
        };
        emitter.write("bands.svg", &plot.render())?;
    }
    Ok(outcome)
}

pub struct SplittingOutcome {
    pub reports: Vec<SplittingReport>,
    /// Worst |full-diagonalization − first-order| disagreement at δk = 0
    /// over the sweep, in rad/s.
    pub crosscheck_residual: f64,
}

/// `splitting`: Coriolis-Zeeman splittings over the rotation sweep.
pub fn cmd_splitting(config: &RunConfig) -> CliResult<SplittingOutcome> {
    let emitter = Emitter::prepare(config)?;
    let params = config.parameters();
    let dc = config.derived()?;
    let (_, _, kp) = extract_at_t(config)?;

    let omegas = config.omega_grid();
    let mut reports = Vec::with_capacity(omegas.len());
    let mut crosscheck = 0.0_f64;
    for &omega in &omegas {
        reports.push(splitting_report(omega, &kp, &params, &dc));
        // the full 8×8 spectrum must agree with edge + first-order shift to
        // within f64 resolution of the edges
        let shifts = edge_shifts(omega, &kp);
        let edges = kp.edge_frequencies();
        let mut expected: Vec<f64> = (0..4)
            .flat_map(|i| [edges[i] + shifts.upper[i], edges[i] + shifts.lower[i]])
            .collect();
        expected.sort_by(f64::total_cmp);
        let full = kp_bands([0.0, 0.0], omega, &kp)?;
        for (a, b) in full.iter().zip(&expected) {
            crosscheck = crosscheck.max((a - b).abs());
        }
    }

    let mut meta = base_meta(config, "splitting");
    meta.push(("crosscheck_residual", fmt_float(crosscheck)));
    emitter.write("splitting.csv", &splitting_csv(&reports, &to_meta_refs(&meta)))?;
    let mut text = String::new();
    for report in &reports {
        text.push_str(&splitting_text(report));
        text.push('\n');
    }
    emitter.write("splitting.txt", &text)?;

    if config.wants_svg() {
        let spin: Vec<(f64, f64)> = reports.iter().map(|r| (r.omega_rot, r.spin)).collect();
        let orbital: Vec<(f64, f64)> = reports.iter().map(|r| (r.omega_rot, r.orbital)).collect();
        let plot = Plot {
            title: "Coriolis-Zeeman splitting".into(),
            x_label: "rotation rate (rad/s)".into(),
            y_label: "splitting (rad/s)".into(),
            log_x: true,
            log_y: true,
            series: vec![
                Series {
                    label: "spin".into(),
                    color: "steelblue",
                    points: spin,
                },
                Series {
                    label: "orbital".into(),
                    color: "crimson",
                    points: orbital,
                },
            ],
        };
        emitter.write("splitting.svg", &plot.render())?;
    }
    Ok(SplittingOutcome {
        reports,
        crosscheck_residual: crosscheck,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub pitch: f64,
    pub contrast: f64,
    pub m_analytic: f64,
    pub dwl_over_omega_analytic: f64,
    pub rms_radius_analytic: f64,
    pub m_pwe: f64,
    pub dwl_over_omega_pwe: f64,
    pub rms_radius_pwe: f64,
}

/// `sweep`: relative orbital splitting and modal size versus contrast, for
/// each configured pitch, through both the analytic and the effective-mass
/// route.
pub fn cmd_sweep(config: &RunConfig) -> CliResult<Vec<SweepRow>> {
    let emitter = Emitter::prepare(config)?;
    let contrasts = config.contrast_grid();
    let mut jobs = Vec::new();
    for &pitch in &config.contrast_sweep.pitches {
        for &contrast in &contrasts {
            jobs.push((pitch, contrast));
        }
    }

    let base = config.parameters();
    let cutoff = config.pwe.cutoff;
    let rows: corioband_core::Result<Vec<SweepRow>> = jobs
        .par_iter()
        .map(|&(pitch, contrast)| {
            let params = PhysicalParameters {
                pitch,
                phase_contrast: contrast,
                ..base
            };
            let dc = derive_constants(&params)?;
            let n2 = params.refractive_index * params.refractive_index;
            let (m_plus, m_minus) = analytic_m(&params, &dc)?;
            let pattern = PhasePattern::from_parameters(&params)?;
            let recip = reciprocal_vectors(pitch, cutoff)?;
            let route = pwe_mass_route(&params, &dc, &pattern, &recip)?;
            Ok(SweepRow {
                pitch,
                contrast,
                m_analytic: m_plus + m_minus,
                dwl_over_omega_analytic: 2.0 * (m_plus + m_minus) / n2,
                rms_radius_analytic: mean_square_radius(m_plus, m_minus, dc.momentum_element)
                    .sqrt(),
                m_pwe: route.m_plus + route.m_minus,
                dwl_over_omega_pwe: 2.0 * (route.m_plus + route.m_minus) / n2,
                rms_radius_pwe: mean_square_radius(route.m_plus, route.m_minus, dc.momentum_element)
                    .sqrt(),
            })
        })
        .collect();
    let rows = rows?;

    let meta = base_meta(config, "sweep");
    let mut csv = corioband_core::report::meta_lines(&to_meta_refs(&meta));
    csv.push_str(
        "pitch,delta_phi,m_analytic,dwl_over_omega_analytic,rms_radius_analytic,m_pwe,dwl_over_omega_pwe,rms_radius_pwe\n",
    );
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_float(r.pitch),
            fmt_float(r.contrast),
            fmt_float(r.m_analytic),
            fmt_float(r.dwl_over_omega_analytic),
            fmt_float(r.rms_radius_analytic),
            fmt_float(r.m_pwe),
            fmt_float(r.dwl_over_omega_pwe),
            fmt_float(r.rms_radius_pwe)
        ));
    }
    emitter.write("sweep.csv", &csv)?;

    if config.wants_svg() {
        let colors = ["black", "gray", "crimson", "steelblue"];
        let mut splitting_series = Vec::new();
        let mut radius_series = Vec::new();
        for (i, &pitch) in config.contrast_sweep.pitches.iter().enumerate() {
            let of_pitch: Vec<&SweepRow> = rows.iter().filter(|r| r.pitch == pitch).collect();
            splitting_series.push(Series {
                label: format!("analytic, pitch {:.1e} m", pitch),
                color: colors[(2 * i) % colors.len()],
                points: of_pitch
                    .iter()
                    .map(|r| (r.contrast, r.dwl_over_omega_analytic))
                    .collect(),
            });
            splitting_series.push(Series {
                label: format!("mass route, pitch {:.1e} m", pitch),
                color: colors[(2 * i + 1) % colors.len()],
                points: of_pitch
                    .iter()
                    .map(|r| (r.contrast, r.dwl_over_omega_pwe))
                    .collect(),
            });
            radius_series.push(Series {
                label: format!("pitch {:.1e} m", pitch),
                color: colors[i % colors.len()],
                points: of_pitch
                    .iter()
                    .map(|r| (r.contrast, r.rms_radius_analytic))
                    .collect(),
            });
        }
        emitter.write(
            "sweep_splitting.svg",
            &Plot {
                title: "relative orbital splitting".into(),
                x_label: "phase contrast".into(),
                y_label: "dw_L / Omega".into(),
                log_x: true,
                log_y: true,
                series: splitting_series,
            }
            .render(),
        )?;
        emitter.write(
            "sweep_radius.svg",
            &Plot {
                title: "modal size".into(),
                x_label: "phase contrast".into(),
                y_label: "rms radius (m)".into(),
                log_x: true,
                log_y: true,
                series: radius_series,
            }
            .render(),
        )?;
    }
    Ok(rows)
}

pub struct EtaOutcome {
    pub alpha: f64,
    pub profile: EtaProfile,
}

/// `eta`: longitudinal profile of one lattice period. The phase step α
/// defaults to the overlap of the Γ-point ground state with the pattern.
pub fn cmd_eta(
    config: &RunConfig,
    alpha_override: Option<f64>,
    z_samples: usize,
) -> CliResult<EtaOutcome> {
    let emitter = Emitter::prepare(config)?;
    let dc = config.derived()?;
    let alpha = match alpha_override {
        Some(a) => a,
        None => {
            let pattern = config.pattern()?;
            let recip = config.reciprocal()?;
            let h = assemble_hamiltonian([0.0, 0.0], &pattern, &recip, &dc)?;
            let sol = solve_at_k(&h, 1)?;
            alpha_overlap(&sol, 0, &pattern, &recip)
        }
    };
    let profile = eta_profile(alpha, dc.cavity_length, z_samples)?;
    let mut meta = base_meta(config, "eta");
    meta.push(("alpha", fmt_float(alpha)));
    meta.push(("cavity_length", fmt_float(dc.cavity_length)));
    meta.push(("mean_modulus", fmt_float(profile.mean_modulus())));
    meta.push((
        "mean_modulus_exact",
        fmt_float(corioband_core::observables::eta_mean_modulus_exact(alpha)),
    ));
    emitter.write("eta.csv", &eta_csv(&profile, &to_meta_refs(&meta)))?;

    if config.wants_svg() {
        let eta = profile.eta();
        let plot = Plot {
            title: "longitudinal profile".into(),
            x_label: "z (m)".into(),
            y_label: "eta".into(),
            log_x: false,
            log_y: false,
            series: vec![
                Series {
                    label: "Re".into(),
                    color: "steelblue",
                    points: profile.z.iter().zip(&eta).map(|(z, v)| (*z, v.re)).collect(),
                },
                Series {
                    label: "Im".into(),
                    color: "crimson",
                    points: profile.z.iter().zip(&eta).map(|(z, v)| (*z, v.im)).collect(),
                },
            ],
        };
        emitter.write("eta.svg", &plot.render())?;
    }
    Ok(EtaOutcome { alpha, profile })
}

/// `classify`: C4v labels of the band clusters at the zone corner.
pub fn cmd_classify(config: &RunConfig) -> CliResult<Vec<corioband_core::symmetry::ClassifiedBand>> {
    let emitter = Emitter::prepare(config)?;
    let dc = config.derived()?;
    let pattern = config.pattern()?;
    let recip = config.reciprocal()?;
    let t = PathLabel::T.k(config.physical.pitch);
    let h = assemble_hamiltonian(t, &pattern, &recip, &dc)?;
    let sol = solve_at_k(&h, config.pwe.bands)?;
    let action = TPointAction::new(&recip);
    let rows = classification_report(&action, &sol, dc.kinetic_scale(config.physical.pitch))?;
    let mut meta = base_meta(config, "classify");
    meta.push(("k_point", "T".to_owned()));
    emitter.write("classification.csv", &classification_csv(&rows, &to_meta_refs(&meta)))?;
    Ok(rows)
}
