//! Free-atom SPA reference cross-sections and the exponential-fit utility.
//!
//! Two references for annihilation on a K-shell electron of an isolated
//! atom: a textbook-style expression whose positron wavefunction accounts
//! for the atomic field, and a plain Born approximation with a
//! hydrogen-like K-shell and a plane-wave positron. Their maxima trend
//! oppositely with the relativistic factor, which is the point of the
//! comparison with the channeled results.

use crate::constants::{
    BARN_PER_ANGSTROM_SQ, ELECTRON_MASS_EV, FINE_STRUCTURE, HBARC_EV_ANGSTROM,
};
use crate::{Result, SpaError};

/// Reduced Compton wavelength squared (ħ/mc)², in barn.
fn compton_sq_barn() -> f64 {
    let lambda = HBARC_EV_ANGSTROM / ELECTRON_MASS_EV;
    lambda * lambda * BARN_PER_ANGSTROM_SQ
}

/// Differential cross-section of SPA on a K-shell electron with the
/// positron-atom interaction folded in, barn/sr.
///
/// The expression used is
///
/// ```text
/// dσ¹/dΩ = (α⁶ Z⁵ ħ²/2c²m²) (γ²−1) sin²Θ [4 + γ(1+γ)(3+γ)(1−βcosΘ)]
///          / (γ³ (1+γ)⁵ (1−βcosΘ)⁴)
/// ```
///
/// carrying the α⁶Z⁵ prefactor, the (γ²−1) threshold factor, the (3+γ)
/// bracket and the fourth-power forward denominator.
pub fn dsigma1(gamma: f64, theta: f64, z: u32) -> Result<f64> {
    if gamma <= 1.0 {
        return Err(SpaError::Domain(format!(
            "Lorentz factor must exceed 1, got {gamma}"
        )));
    }
    let beta = (1.0 - 1.0 / (gamma * gamma)).sqrt();
    let u = 1.0 - beta * theta.cos();
    let bracket = 4.0 + gamma * (1.0 + gamma) * (3.0 + gamma) * u;
    let prefactor = FINE_STRUCTURE.powi(6) * (z as f64).powi(5) * compton_sq_barn() / 2.0;
    Ok(prefactor * (gamma * gamma - 1.0) * theta.sin().powi(2) * bracket
        / (gamma.powi(3) * (1.0 + gamma).powi(5) * u.powi(4)))
}

/// Born-approximation differential cross-section with a hydrogen-like
/// K-shell electron and a plane-wave positron, barn/sr.
///
/// Algebraically reduced to dimensionless form: with
/// D = (2/α²)(γ+1)(γ − √(γ²−1)cosΘ) + Z²,
///
/// ```text
/// dσᴮ/dΩ = 32π (γ²−1) Z⁵ sin²Θ (ħ/mc)² / (α² γ D⁴) .
/// ```
pub fn dsigma_born(gamma: f64, theta: f64, z: u32) -> Result<f64> {
    if gamma <= 1.0 {
        return Err(SpaError::Domain(format!(
            "Lorentz factor must exceed 1, got {gamma}"
        )));
    }
    let alpha_sq = FINE_STRUCTURE * FINE_STRUCTURE;
    let d = 2.0 / alpha_sq * (gamma + 1.0) * (gamma - (gamma * gamma - 1.0).sqrt() * theta.cos())
        + (z as f64).powi(2);
    Ok(32.0 * std::f64::consts::PI * (gamma * gamma - 1.0) * (z as f64).powi(5)
        * theta.sin().powi(2)
        * compton_sq_barn()
        / (alpha_sq * gamma * d.powi(4)))
}

/// Exponential fit dσ_max = σ₀ e^(−ηγ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// σ₀ in barn/sr.
    pub sigma0: f64,
    /// Decay constant η (positive for a falling curve).
    pub eta: f64,
    /// Largest relative deviation of the fit over the input points.
    pub max_relative_error: f64,
}

/// Least-squares fit of ln(dσ_max) = ln σ₀ − ηγ over (γ, dσ_max) points.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(SpaError::Domain(format!(
            "exponential fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some((g, s)) = points.iter().find(|(_, s)| *s <= 0.0) {
        return Err(SpaError::Domain(format!(
            "exponential fit requires positive values, got {s} at gamma={g}"
        )));
    }

    let n = points.len() as f64;
    let mean_g = points.iter().map(|(g, _)| g).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, s)| s.ln()).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (g, s) in points {
        cov += (g - mean_g) * (s.ln() - mean_y);
        var += (g - mean_g) * (g - mean_g);
    }
    if var == 0.0 {
        return Err(SpaError::Domain(
            "exponential fit needs at least two distinct gamma values".into(),
        ));
    }
    let slope = cov / var;
    let eta = -slope;
    let sigma0 = (mean_y + eta * mean_g).exp();

    let max_relative_error = points
        .iter()
        .map(|(g, s)| ((sigma0 * (-eta * g).exp() - s) / s).abs())
        .fold(0.0, f64::max);

    Ok(FitResult {
        sigma0,
        eta,
        max_relative_error,
    })
}
