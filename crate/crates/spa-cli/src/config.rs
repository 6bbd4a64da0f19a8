//! Key-value configuration with paper-reproduction defaults.
//!
//! Every key can come from a `key = value` text file (`#` comments allowed)
//! and can be overridden on the command line with `--set key=value`. The
//! fully resolved configuration is echoed into the header of every output
//! file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

#[derive(Debug, Clone)]
pub struct Config {
    // Crystal
    pub lattice_constant_angstrom: f64,
    pub z: u32,
    pub m_pot: usize,
    pub plane_images: usize,
    // Solver
    pub n_sub: usize,
    pub m_cutoff: usize,
    pub n_bands: usize,
    pub binding_kev: f64,
    pub slater_file: Option<PathBuf>,
    // Beam / scan
    pub e_par_mev: f64,
    pub e_par_mev_min: f64,
    pub e_par_mev_max: f64,
    pub e_par_steps: usize,
    pub k_fraction: f64,
    pub k_fractions: Vec<f64>,
    pub band: usize,
    pub bands: Vec<usize>,
    pub phi_fixed_rad: f64,
    // Angular grid
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub screen_distance: f64,
    // Free-atom reference
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_steps: usize,
    // Output
    pub output_dir: PathBuf,
    pub threads: Option<usize>,
    pub json: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            lattice_constant_angstrom: 5.431,
            z: 14,
            m_pot: 40,
            plane_images: 5,
            n_sub: 10,
            m_cutoff: 20,
            n_bands: 30,
            binding_kev: 1.839,
            slater_file: None,
            e_par_mev: 60.0,
            e_par_mev_min: 50.0,
            e_par_mev_max: 100.0,
            e_par_steps: 6,
            k_fraction: 0.5,
            k_fractions: spa_core::scan::default_k_fractions(),
            band: 1,
            bands: vec![1],
            phi_fixed_rad: 0.0,
            theta_min_rad: 0.0,
            theta_max_rad: 0.3,
            theta_steps: 61,
            phi_steps: 25,
            screen_distance: 5.0,
            gamma_min: 100.0,
            gamma_max: 200.0,
            gamma_steps: 11,
            output_dir: PathBuf::from("."),
            threads: None,
            json: false,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>, overrides: &[String]) -> anyhow::Result<Self> {
        let mut cfg = Config::default();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .with_context(|| format!("line {}: expected key = value", idx + 1))?;
                cfg.set(key.trim(), value.trim())
                    .with_context(|| format!("line {}", idx + 1))?;
            }
        }
        for item in overrides {
            let (key, value) = item
                .split_once('=')
                .with_context(|| format!("--set {item}: expected key=value"))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        match key {
            "lattice_constant_angstrom" => self.lattice_constant_angstrom = parse(key, value)?,
            "Z" | "z" => self.z = parse(key, value)?,
            "M_pot" | "m_pot" => self.m_pot = parse(key, value)?,
            "plane_images" => self.plane_images = parse(key, value)?,
            "n_sub" => self.n_sub = parse(key, value)?,
            "M" | "m_cutoff" => self.m_cutoff = parse(key, value)?,
            "n_bands" => self.n_bands = parse(key, value)?,
            "binding_kev" => self.binding_kev = parse(key, value)?,
            "slater_file" => self.slater_file = Some(PathBuf::from(value)),
            "e_par_mev" => self.e_par_mev = parse(key, value)?,
            "e_par_mev_min" => self.e_par_mev_min = parse(key, value)?,
            "e_par_mev_max" => self.e_par_mev_max = parse(key, value)?,
            "e_par_steps" => self.e_par_steps = parse(key, value)?,
            "k_fraction" => self.k_fraction = parse(key, value)?,
            "k_fractions" => self.k_fractions = parse_list(key, value)?,
            "band" => self.band = parse(key, value)?,
            "bands" => self.bands = parse_list(key, value)?,
            "phi_fixed_rad" => self.phi_fixed_rad = parse(key, value)?,
            "theta_min_rad" => self.theta_min_rad = parse(key, value)?,
            "theta_max_rad" => self.theta_max_rad = parse(key, value)?,
            "theta_steps" => self.theta_steps = parse(key, value)?,
            "phi_steps" => self.phi_steps = parse(key, value)?,
            "screen_distance" => self.screen_distance = parse(key, value)?,
            "gamma_min" => self.gamma_min = parse(key, value)?,
            "gamma_max" => self.gamma_max = parse(key, value)?,
            "gamma_steps" => self.gamma_steps = parse(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "threads" => self.threads = Some(parse(key, value)?),
            "json" => self.json = parse(key, value)?,
            _ => bail!("unknown configuration key `{key}`"),
        }
        Ok(())
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.theta_steps == 0 {
            bail!("theta_steps must be at least 1 (empty photon-angle grid)");
        }
        if self.phi_steps == 0 {
            bail!("phi_steps must be at least 1");
        }
        if self.e_par_steps < 2 && self.e_par_mev_min != self.e_par_mev_max {
            bail!("e_par_steps must be at least 2 for a ranged scan");
        }
        if self.gamma_steps < 2 {
            bail!("gamma_steps must be at least 2");
        }
        if self.k_fractions.is_empty() || self.bands.is_empty() {
            bail!("k_fractions and bands must be non-empty");
        }
        if self.k_fractions.iter().any(|k| *k < 0.0) {
            bail!("entry-angle fractions must be nonnegative");
        }
        if self.m_pot < 2 * self.m_cutoff {
            bail!(
                "M_pot = {} too small for plane-wave cutoff M = {} (need 2M)",
                self.m_pot,
                self.m_cutoff
            );
        }
        Ok(())
    }

    /// Builds the scan scenario (crystal, potential, orbital) from the
    /// resolved configuration.
    pub fn scenario(&self) -> anyhow::Result<spa_core::scan::Scenario> {
        let plane = spa_core::crystal::CrystalPlane::from_diamond_110_lattice(
            self.lattice_constant_angstrom,
            self.z,
        )?;
        let potential = spa_core::crystal::fourier_coefficients_with_images(
            &plane,
            self.m_pot,
            self.plane_images,
        )?;
        let orbital = match &self.slater_file {
            Some(path) => spa_core::kshell::load_slater_params(path)?,
            None => spa_core::kshell::si_1s_default(),
        };
        let n_bands = self.n_bands.min(2 * self.m_cutoff);
        Ok(spa_core::scan::Scenario {
            plane,
            potential,
            orbital,
            n_sub: self.n_sub,
            m_cutoff: self.m_cutoff,
            n_bands,
            binding_ev: self.binding_kev * 1000.0,
        })
    }

    /// The resolved configuration as sorted key/value pairs for the output
    /// headers.
    pub fn resolved(&self) -> Vec<(String, String)> {
        let mut map = BTreeMap::new();
        map.insert("lattice_constant_angstrom", self.lattice_constant_angstrom.to_string());
        map.insert("Z", self.z.to_string());
        map.insert("M_pot", self.m_pot.to_string());
        map.insert("plane_images", self.plane_images.to_string());
        map.insert("n_sub", self.n_sub.to_string());
        map.insert("M", self.m_cutoff.to_string());
        map.insert("n_bands", self.n_bands.to_string());
        map.insert("binding_kev", self.binding_kev.to_string());
        map.insert(
            "slater_file",
            self.slater_file
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "builtin:si_1s".into()),
        );
        map.insert("e_par_mev", self.e_par_mev.to_string());
        map.insert("e_par_mev_min", self.e_par_mev_min.to_string());
        map.insert("e_par_mev_max", self.e_par_mev_max.to_string());
        map.insert("e_par_steps", self.e_par_steps.to_string());
        map.insert("k_fraction", self.k_fraction.to_string());
        map.insert("k_fractions", join(&self.k_fractions));
        map.insert("band", self.band.to_string());
        map.insert(
            "bands",
            self.bands.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
        );
        map.insert("phi_fixed_rad", self.phi_fixed_rad.to_string());
        map.insert("theta_min_rad", self.theta_min_rad.to_string());
        map.insert("theta_max_rad", self.theta_max_rad.to_string());
        map.insert("theta_steps", self.theta_steps.to_string());
        map.insert("phi_steps", self.phi_steps.to_string());
        map.insert("screen_distance", self.screen_distance.to_string());
        map.insert("gamma_min", self.gamma_min.to_string());
        map.insert("gamma_max", self.gamma_max.to_string());
        map.insert("gamma_steps", self.gamma_steps.to_string());
        map.into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> anyhow::Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow::anyhow!("key `{key}`: cannot parse `{value}`: {e}"))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
