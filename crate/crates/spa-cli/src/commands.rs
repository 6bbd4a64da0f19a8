//! Subcommand implementations: each resolves the configuration into a
//! scenario, runs the scan, and writes the output files.

use anyhow::Context;

use spa_core::atomref;
use spa_core::scan;

use crate::config::Config;
use crate::output::{fmt, CsvSink};

/// Photon angular distribution over the (Θ, Φ) grid at a single
/// (energy, entry angle, band), plus the screen projection.
pub fn run_angular_distribution(cfg: &Config) -> anyhow::Result<()> {
    let scenario = cfg.scenario()?;
    let thetas = scan::linspace(cfg.theta_min_rad, cfg.theta_max_rad, cfg.theta_steps);
    let phis = scan::linspace(0.0, 2.0 * std::f64::consts::PI, cfg.phi_steps);

    let points = scan::angular_grid(
        &scenario,
        cfg.e_par_mev,
        cfg.k_fraction,
        cfg.band,
        &thetas,
        &phis,
    )
    .context("angular scan failed")?;

    let resolved = cfg.resolved();
    let sink = CsvSink {
        dir: &cfg.output_dir,
        config_lines: &resolved,
        json: cfg.json,
    };

    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                fmt(p.theta),
                fmt(p.phi),
                fmt(p.dsigma_domega),
                fmt(p.homega_mev),
            ]
        })
        .collect();
    let path = sink.write(
        "angular",
        &["theta_rad", "phi_rad", "dsigma_barn_sr", "homega_mev"],
        &rows,
    )?;
    eprintln!("wrote {}", path.display());

    // Projection onto a screen perpendicular to the beam at the configured
    // distance (relative units): the photon at (Θ, Φ) lands at
    // distance·tanΘ·(cosΦ, sinΦ).
    let screen_rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            let r = cfg.screen_distance * p.theta.tan();
            vec![
                fmt(r * p.phi.cos()),
                fmt(r * p.phi.sin()),
                fmt(p.dsigma_domega),
            ]
        })
        .collect();
    let path = sink.write(
        "screen",
        &["x_rel", "y_rel", "dsigma_barn_sr"],
        &screen_rows,
    )?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// dσ_max/dΩ over the (energy, entry angle, band) grid plus the
/// exponential fit of each (k, band) curve.
pub fn run_sigma_max_scan(cfg: &Config) -> anyhow::Result<()> {
    let scenario = cfg.scenario()?;
    let energies = scan::linspace(cfg.e_par_mev_min, cfg.e_par_mev_max, cfg.e_par_steps);

    let rows = scan::sigma_max_scan(
        &scenario,
        &energies,
        &cfg.k_fractions,
        &cfg.bands,
        cfg.phi_fixed_rad,
    )
    .context("sigma-max scan failed")?;

    let resolved = cfg.resolved();
    let sink = CsvSink {
        dir: &cfg.output_dir,
        config_lines: &resolved,
        json: cfg.json,
    };

    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt(r.e_par_mev),
                fmt(r.k_fraction),
                r.band.to_string(),
                fmt(r.theta_max_rad),
                fmt(r.dsigma_max_barn_sr),
                r.n_subbarrier_bands.to_string(),
                (r.population_limit as u8).to_string(),
            ]
        })
        .collect();
    let path = sink.write(
        "sigma_max",
        &[
            "E_par_mev",
            "k",
            "band_i",
            "theta_max_rad",
            "dsigma_max_barn_sr",
            "n_subbarrier_bands",
            "population_limit",
        ],
        &csv_rows,
    )?;
    eprintln!("wrote {}", path.display());

    // Exponential fit per (k, band) curve over the energy axis.
    let mut fit_rows: Vec<Vec<String>> = Vec::new();
    for &k in &cfg.k_fractions {
        for &band in &cfg.bands {
            let points: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.k_fraction == k && r.band == band && r.dsigma_max_barn_sr > 0.0)
                .map(|r| {
                    (
                        r.e_par_mev * 1.0e6 / spa_core::constants::ELECTRON_MASS_EV,
                        r.dsigma_max_barn_sr,
                    )
                })
                .collect();
            match atomref::fit_exponential(&points) {
                Ok(fit) => fit_rows.push(vec![
                    fmt(k),
                    band.to_string(),
                    fmt(fit.sigma0),
                    fmt(fit.eta),
                    fmt(fit.max_relative_error),
                ]),
                Err(err) => {
                    eprintln!("fit skipped for k={k} band={band}: {err}");
                }
            }
        }
    }
    let path = sink.write(
        "fit",
        &["k", "band_i", "sigma0_barn_sr", "eta", "max_rel_error"],
        &fit_rows,
    )?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Free-atom reference maxima over the configured γ range.
pub fn run_atom_reference(cfg: &Config) -> anyhow::Result<()> {
    let gammas = scan::linspace(cfg.gamma_min, cfg.gamma_max, cfg.gamma_steps);
    let rows = scan::atom_reference_scan(&gammas, cfg.z).context("free-atom scan failed")?;

    let resolved = cfg.resolved();
    let sink = CsvSink {
        dir: &cfg.output_dir,
        config_lines: &resolved,
        json: cfg.json,
    };
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt(r.gamma),
                fmt(r.theta_max_rad),
                fmt(r.dsigma1_max_barn_sr),
                fmt(r.dsigma_born_max_barn_sr),
            ]
        })
        .collect();
    let path = sink.write(
        "atom_ref",
        &[
            "gamma",
            "theta_max_rad",
            "dsigma1_max_barn_sr",
            "dsigmaB_max_barn_sr",
        ],
        &csv_rows,
    )?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Transverse band diagram at the configured beam energy.
pub fn run_band_diagram(cfg: &Config) -> anyhow::Result<()> {
    let scenario = cfg.scenario()?;
    let rows = scan::band_diagram(&scenario, cfg.e_par_mev).context("band solve failed")?;

    let resolved = cfg.resolved();
    let sink = CsvSink {
        dir: &cfg.output_dir,
        config_lines: &resolved,
        json: cfg.json,
    };
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.band.to_string(),
                r.subband.to_string(),
                fmt(r.k_inv_angstrom),
                fmt(r.e_perp_ev),
                (r.subbarrier as u8).to_string(),
            ]
        })
        .collect();
    let path = sink.write(
        "bands",
        &[
            "i",
            "i_n",
            "k_inv_angstrom",
            "E_perp_eV",
            "subbarrier_flag",
        ],
        &csv_rows,
    )?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
