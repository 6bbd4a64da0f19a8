//! Scan drivers: fixed-configuration sweeps over photon angles, beam
//! energies, and entry angles, producing plain rows for the CLI writers.
//!
//! Grid points are independent; the drivers dispatch them through
//! [`crate::exec`] and assemble results in grid order, so output is
//! deterministic regardless of the worker count. The `*_seq` variants run
//! the same computation strictly sequentially for benchmarking.

use crate::bands::{self, BandStructure, PopulationTable};
use crate::crystal::{self, CrystalPlane, PlanarPotential};
use crate::kshell::SlaterOrbital;
use crate::xsection::{self, CrossSectionPoint, PositronBeam};
use crate::{exec, opt, Result};

/// Everything fixed across one scan: crystal, potential, orbital, solver
/// settings.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub plane: CrystalPlane,
    pub potential: PlanarPotential,
    pub orbital: SlaterOrbital,
    pub n_sub: usize,
    pub m_cutoff: usize,
    pub n_bands: usize,
    /// K-shell binding energy in eV.
    pub binding_ev: f64,
}

impl Scenario {
    /// Si(110) with the solver defaults: n_sub = 10 subbands, plane-wave
    /// cutoff M = 20 (41×41 matrices), potential cutoff 2M.
    pub fn si110_default() -> Result<Self> {
        Self::si110_with(10, 20)
    }

    pub fn si110_with(n_sub: usize, m_cutoff: usize) -> Result<Self> {
        let plane = crystal::si110_preset();
        let potential = crystal::fourier_coefficients(&plane, 2 * m_cutoff)?;
        Ok(Self {
            plane,
            potential,
            orbital: crate::kshell::si_1s_default(),
            n_sub,
            m_cutoff,
            n_bands: (2 * m_cutoff).min(30),
            binding_ev: xsection::default_binding(),
        })
    }

    pub fn solve(&self, beam: &PositronBeam) -> Result<BandStructure> {
        bands::solve_bands(
            &self.potential,
            beam.gamma,
            self.n_sub,
            self.m_cutoff,
            self.n_bands,
        )
    }

    pub fn critical_angle(&self, gamma: f64) -> Result<f64> {
        crystal::critical_angle_from_barrier(self.potential.well_depth(), gamma)
    }
}

/// Photon angular distribution of one band at fixed beam settings.
pub fn angular_grid(
    scenario: &Scenario,
    e_par_mev: f64,
    k_fraction: f64,
    band: usize,
    thetas: &[f64],
    phis: &[f64],
) -> Result<Vec<CrossSectionPoint>> {
    angular_grid_impl(scenario, e_par_mev, k_fraction, band, thetas, phis, false)
}

/// Sequential twin of [`angular_grid`] for the benchmark comparison.
pub fn angular_grid_seq(
    scenario: &Scenario,
    e_par_mev: f64,
    k_fraction: f64,
    band: usize,
    thetas: &[f64],
    phis: &[f64],
) -> Result<Vec<CrossSectionPoint>> {
    angular_grid_impl(scenario, e_par_mev, k_fraction, band, thetas, phis, true)
}

fn angular_grid_impl(
    scenario: &Scenario,
    e_par_mev: f64,
    k_fraction: f64,
    band: usize,
    thetas: &[f64],
    phis: &[f64],
    sequential: bool,
) -> Result<Vec<CrossSectionPoint>> {
    let (beam, bs, pops) = prepare(scenario, e_par_mev, k_fraction)?;

    let mut grid = Vec::with_capacity(thetas.len() * phis.len());
    for &theta in thetas {
        for &phi in phis {
            grid.push((theta, phi));
        }
    }

    let orbital = &scenario.orbital;
    let binding = scenario.binding_ev;
    let eval = |&(theta, phi): &(f64, f64)| {
        xsection::dsigma_band(&beam, theta, phi, &bs, orbital, &pops, band, binding)
            .map(|(p, _)| p)
    };
    let results = if sequential {
        exec::map_seq(&grid, eval)
    } else {
        exec::map(&grid, eval)
    };
    results.into_iter().collect()
}

fn prepare(
    scenario: &Scenario,
    e_par_mev: f64,
    k_fraction: f64,
) -> Result<(PositronBeam, BandStructure, PopulationTable)> {
    let mut beam = PositronBeam::new(e_par_mev, 0.0)?;
    let theta_c = scenario.critical_angle(beam.gamma)?;
    beam.entry_angle = k_fraction * theta_c;
    let bs = scenario.solve(&beam)?;
    let pops = bands::populations(&bs, beam.entry_angle, beam.gamma)?;
    Ok((beam, bs, pops))
}

/// One row of the dσ_max energy/angle scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaMaxRow {
    pub e_par_mev: f64,
    pub k_fraction: f64,
    pub band: usize,
    pub theta_max_rad: f64,
    pub dsigma_max_barn_sr: f64,
    pub n_subbarrier_bands: usize,
    /// The band population vanished and the matched-subband limit was used.
    pub population_limit: bool,
    pub boundary_warning: bool,
}

/// Scans dσ_max/dΩ over (E_∥, entry-angle fraction, band) at fixed Φ.
/// Band structures are solved once per energy and shared.
pub fn sigma_max_scan(
    scenario: &Scenario,
    e_par_mevs: &[f64],
    k_fractions: &[f64],
    band_list: &[usize],
    phi: f64,
) -> Result<Vec<SigmaMaxRow>> {
    let mut rows = Vec::new();
    for &e_par_mev in e_par_mevs {
        let beam0 = PositronBeam::new(e_par_mev, 0.0)?;
        let bs = scenario.solve(&beam0)?;
        let n_subbarrier = bands::count_subbarrier_bands(&bs);
        let theta_c = scenario.critical_angle(beam0.gamma)?;
        for &k in k_fractions {
            let mut beam = beam0;
            beam.entry_angle = k * theta_c;
            let pops = bands::populations(&bs, beam.entry_angle, beam.gamma)?;
            for &band in band_list {
                let peak = xsection::find_theta_max(
                    &beam,
                    &bs,
                    &scenario.orbital,
                    &pops,
                    band,
                    phi,
                    scenario.binding_ev,
                )?;
                rows.push(SigmaMaxRow {
                    e_par_mev,
                    k_fraction: k,
                    band,
                    theta_max_rad: peak.theta_max,
                    dsigma_max_barn_sr: peak.dsigma_max,
                    n_subbarrier_bands: n_subbarrier,
                    population_limit: peak.population_limit,
                    boundary_warning: peak.boundary_warning,
                });
            }
        }
    }
    Ok(rows)
}

/// One row of the free-atom reference scan. The peak angle reported is the
/// one maximizing dσ¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomRefRow {
    pub gamma: f64,
    pub theta_max_rad: f64,
    pub dsigma1_max_barn_sr: f64,
    pub dsigma_born_max_barn_sr: f64,
}

/// Search window for the free-atom peak angle: the lobes sit well forward
/// of 0.5 rad for the γ range of interest.
const ATOMREF_THETA_HI: f64 = 0.5;

/// Maxima of the two free-atom references over the photon angle.
pub fn atom_reference_scan(gammas: &[f64], z: u32) -> Result<Vec<AtomRefRow>> {
    gammas
        .iter()
        .map(|&gamma| {
            let m1 = opt::maximize(
                |t| crate::atomref::dsigma1(gamma, t, z).unwrap_or(f64::NAN),
                1e-6,
                ATOMREF_THETA_HI,
                2000,
                1e-7,
            );
            let mb = opt::maximize(
                |t| crate::atomref::dsigma_born(gamma, t, z).unwrap_or(f64::NAN),
                1e-6,
                ATOMREF_THETA_HI,
                2000,
                1e-7,
            );
            if !m1.value.is_finite() || !mb.value.is_finite() {
                return Err(crate::SpaError::Domain(format!(
                    "free-atom reference undefined at gamma={gamma}"
                )));
            }
            Ok(AtomRefRow {
                gamma,
                theta_max_rad: m1.x,
                dsigma1_max_barn_sr: m1.value,
                dsigma_born_max_barn_sr: mb.value,
            })
        })
        .collect()
}

/// One row of the band-diagram dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandRow {
    pub band: usize,
    pub subband: usize,
    pub k_inv_angstrom: f64,
    pub e_perp_ev: f64,
    pub subbarrier: bool,
}

/// Band diagram at one beam energy.
pub fn band_diagram(scenario: &Scenario, e_par_mev: f64) -> Result<Vec<BandRow>> {
    let beam = PositronBeam::new(e_par_mev, 0.0)?;
    let bs = scenario.solve(&beam)?;
    let mut rows = Vec::new();
    for band in 0..bs.n_bands() {
        let band_max = (0..bs.n_sub())
            .map(|i_n| bs.state(band, i_n).energy)
            .fold(f64::NEG_INFINITY, f64::max);
        for i_n in 0..bs.n_sub() {
            let s = bs.state(band, i_n);
            rows.push(BandRow {
                band,
                subband: i_n,
                k_inv_angstrom: s.k,
                e_perp_ev: s.energy,
                subbarrier: band_max < bs.barrier_top(),
            });
        }
    }
    Ok(rows)
}

/// Uniformly spaced grid, inclusive of both ends.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// The default entry-angle fractions: eight values uniform over
/// [0, 0.825].
pub fn default_k_fractions() -> Vec<f64> {
    (0..8).map(|i| 0.825 * i as f64 / 7.0).collect()
}
