//! K-shell electron wavefunction as a Slater-type-orbital expansion.
//!
//! The 1s orbital is a fitted sum of Slater terms
//!
//! ```text
//! Ψ_K(r) = (4π)^(−1/2) · Σ_p C_p (2ζ_p)^(nλ_p + 1/2) r^(nλ_p − 1)
//!          e^(−ζ_p r) / √((2nλ_p)!)
//! ```
//!
//! normalized so that ∫|Ψ_K|² 4πr² dr = 1. The expansion parameters are
//! *data*, never hardcoded: they are read from a text file with one term per
//! line (`C_p  nlambda_p  zeta_p_per_bohr`, `#` comments allowed), exponents
//! in inverse Bohr radii as published in the Roothaan–Hartree–Fock tables.
//! A Si 1s parameter file ships with the crate as the default.

use crate::constants::{BOHR_RADIUS_ANGSTROM, FACTORIAL};
use crate::{Result, SpaError};

/// One Slater term of a K-shell expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlaterTerm {
    /// Expansion coefficient C_p.
    pub coefficient: f64,
    /// Principal exponent nλ_p ≥ 1 (the p-th term behaves as r^(nλ_p−1)).
    pub n_lambda: u32,
    /// Screening exponent ζ_p in Å⁻¹ (converted from a_B⁻¹ on load).
    pub zeta: f64,
}

/// K-shell wavefunction as a sum of Slater terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterOrbital {
    terms: Vec<SlaterTerm>,
}

/// Largest supported principal exponent (the kernel derivative order is
/// nλ − 1 and tops out at 6).
pub const MAX_N_LAMBDA: u32 = 7;

const SI_1S_DATA: &str = include_str!("../data/si_1s.slater");

impl SlaterOrbital {
    pub fn terms(&self) -> &[SlaterTerm] {
        &self.terms
    }

    /// Builds an orbital from terms with exponents in a_B⁻¹, validating the
    /// term parameters and the overall normalization.
    pub fn from_terms_per_bohr(terms_per_bohr: &[(f64, u32, f64)]) -> Result<Self> {
        if terms_per_bohr.is_empty() {
            return Err(SpaError::Data("orbital needs at least one term".into()));
        }
        let mut terms = Vec::with_capacity(terms_per_bohr.len());
        for &(c, n_lambda, zeta_bohr) in terms_per_bohr {
            if n_lambda == 0 || n_lambda > MAX_N_LAMBDA {
                return Err(SpaError::Data(format!(
                    "principal exponent must be in 1..={MAX_N_LAMBDA}, got {n_lambda}"
                )));
            }
            if zeta_bohr <= 0.0 {
                return Err(SpaError::Data(format!(
                    "screening exponent must be positive, got {zeta_bohr}"
                )));
            }
            terms.push(SlaterTerm {
                coefficient: c,
                n_lambda,
                zeta: zeta_bohr / BOHR_RADIUS_ANGSTROM,
            });
        }
        let orbital = Self { terms };
        let norm = orbital.norm_integral();
        if !(0.99..=1.01).contains(&norm) {
            return Err(SpaError::Data(format!(
                "orbital normalization {norm:.6} outside [0.99, 1.01]"
            )));
        }
        Ok(orbital)
    }

    /// ∫₀^∞ |Ψ_K|² 4πr² dr from the analytic Slater overlap
    /// ∫ r^n e^{−ζr} dr = n!/ζ^(n+1).
    pub fn norm_integral(&self) -> f64 {
        let mut norm = 0.0;
        for a in &self.terms {
            for b in &self.terms {
                let na = a.n_lambda as usize;
                let nb = b.n_lambda as usize;
                let prefactor = a.coefficient
                    * b.coefficient
                    * (2.0 * a.zeta).powf(na as f64 + 0.5)
                    * (2.0 * b.zeta).powf(nb as f64 + 0.5)
                    / (FACTORIAL[2 * na] * FACTORIAL[2 * nb]).sqrt();
                norm += prefactor * FACTORIAL[na + nb] / (a.zeta + b.zeta).powi(na as i32 + nb as i32 + 1);
            }
        }
        norm
    }
}

/// Loads a Slater parameter file (`C nlambda zeta_per_bohr` per line).
pub fn load_slater_params(path: impl AsRef<std::path::Path>) -> Result<SlaterOrbital> {
    let text = std::fs::read_to_string(path)?;
    parse_slater_params(&text)
}

/// Parses Slater parameters from text; see the module docs for the format.
pub fn parse_slater_params(text: &str) -> Result<SlaterOrbital> {
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(SpaError::Parse {
                line,
                message: format!("expected 3 fields `C nlambda zeta`, got {}", fields.len()),
            });
        }
        let c: f64 = fields[0].parse().map_err(|e| SpaError::Parse {
            line,
            message: format!("bad coefficient `{}`: {e}", fields[0]),
        })?;
        let n_lambda: u32 = fields[1].parse().map_err(|e| SpaError::Parse {
            line,
            message: format!("bad principal exponent `{}`: {e}", fields[1]),
        })?;
        let zeta: f64 = fields[2].parse().map_err(|e| SpaError::Parse {
            line,
            message: format!("bad screening exponent `{}`: {e}", fields[2]),
        })?;
        terms.push((c, n_lambda, zeta));
    }
    if terms.is_empty() {
        return Err(SpaError::Parse {
            line: 0,
            message: "file contains no Slater terms".into(),
        });
    }
    SlaterOrbital::from_terms_per_bohr(&terms)
}

/// The Si 1s orbital shipped with the crate.
pub fn si_1s_default() -> SlaterOrbital {
    parse_slater_params(SI_1S_DATA).expect("bundled Si 1s data is valid")
}

/// Evaluates Ψ_K(r) in Å^(−3/2); the K-shell function carries no angular
/// dependence.
pub fn psi_k(orbital: &SlaterOrbital, r: f64) -> f64 {
    debug_assert!(r >= 0.0, "radius must be nonnegative");
    let mut sum = 0.0;
    for t in &orbital.terms {
        let n = t.n_lambda as usize;
        let amplitude = (2.0 * t.zeta).powf(1.5) * t.coefficient / FACTORIAL[2 * n].sqrt();
        sum += amplitude * (2.0 * t.zeta * r).powi(n as i32 - 1) * (-t.zeta * r).exp();
    }
    sum / (4.0 * std::f64::consts::PI).sqrt()
}
