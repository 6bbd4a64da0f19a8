//! Crystal geometry and the continuum planar potential.
//!
//! A channeled positron sees the crystal planes through the plane-averaged
//! (continuum) potential: the atomic Moliere potential averaged over a plane
//! of areal density `n_p` and summed over neighboring plane images. For a
//! single plane at distance `x` this averaging has a closed form,
//!
//! ```text
//! V_pl(x) = 2π n_p Z e² a_TF · Σ_i (α_i/β_i) exp(−β_i |x| / a_TF)
//! ```
//!
//! with the Moliere screening coefficients α = (0.1, 0.55, 0.35) and
//! β = (6.0, 1.2, 0.3). The periodic channel potential is the superposition
//! of plane images; positrons are repelled from the planes, so the potential
//! is maximal at a plane (x = 0) and minimal at the channel center (x = d/2).
//!
//! The model is static (no thermal vibrations) and validated for Si(110)
//! only, although the data types permit other planes.

use crate::constants::{BOHR_RADIUS_ANGSTROM, E2_EV_ANGSTROM, ELECTRON_MASS_EV};
use crate::quad;
use crate::{Result, SpaError};

/// Moliere screening-function amplitudes.
pub const MOLIERE_ALPHAS: [f64; 3] = [0.1, 0.55, 0.35];
/// Moliere screening-function exponents.
pub const MOLIERE_BETAS: [f64; 3] = [6.0, 1.2, 0.3];

/// Number of plane images summed on each side of the central plane.
pub const DEFAULT_PLANE_IMAGES: usize = 5;

/// A set of equivalent crystal planes seen by a channeled particle.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalPlane {
    /// Conventional cubic lattice constant in Å.
    pub lattice_constant: f64,
    /// Interplanar distance d in Å.
    pub interplanar_distance: f64,
    /// Atomic number of the crystal atoms.
    pub atomic_number: u32,
    /// Atoms per unit plane area in Å⁻².
    pub planar_atom_density: f64,
    /// Thomas–Fermi screening radius in Å.
    pub screening_radius: f64,
}

impl CrystalPlane {
    /// Builds a diamond-structure (110) plane set from the cubic lattice
    /// constant: d = a/(2√2), 8 atoms per conventional cell distributed
    /// over planes of density 8d/a³, and the Thomas–Fermi screening radius
    /// a_TF = 0.8853·a_B·Z^(−1/3).
    pub fn from_diamond_110_lattice(lattice_constant: f64, atomic_number: u32) -> Result<Self> {
        if lattice_constant <= 0.0 {
            return Err(SpaError::Domain("lattice constant must be positive".into()));
        }
        if atomic_number == 0 {
            return Err(SpaError::Domain("atomic number must be at least 1".into()));
        }
        let d = lattice_constant / (2.0 * std::f64::consts::SQRT_2);
        let density = 8.0 * d / lattice_constant.powi(3);
        let a_tf = 0.8853 * BOHR_RADIUS_ANGSTROM * (atomic_number as f64).powf(-1.0 / 3.0);
        Ok(Self {
            lattice_constant,
            interplanar_distance: d,
            atomic_number,
            planar_atom_density: density,
            screening_radius: a_tf,
        })
    }
}

/// The Si(110) plane set used throughout: Z = 14, a = 5.431 Å.
pub fn si110_preset() -> CrystalPlane {
    CrystalPlane::from_diamond_110_lattice(5.431, 14).expect("Si(110) preset parameters are valid")
}

/// Continuum potential of a single plane at signed distance `u` from it, eV.
fn single_plane_potential(plane: &CrystalPlane, u: f64) -> f64 {
    let a = plane.screening_radius;
    let prefactor = 2.0
        * std::f64::consts::PI
        * plane.planar_atom_density
        * plane.atomic_number as f64
        * E2_EV_ANGSTROM
        * a;
    let r = u.abs() / a;
    let mut sum = 0.0;
    for (alpha, beta) in MOLIERE_ALPHAS.iter().zip(MOLIERE_BETAS.iter()) {
        sum += alpha / beta * (-beta * r).exp();
    }
    prefactor * sum
}

/// Periodic continuum planar potential at transverse coordinate `x` (Å),
/// as the superposition of `images` plane images on each side.
pub fn moliere_potential_with_images(plane: &CrystalPlane, x: f64, images: usize) -> f64 {
    let d = plane.interplanar_distance;
    // Fold onto [0, d/2] using periodicity and the mirror symmetry about
    // the plane, so parity and periodicity hold exactly whatever the image
    // truncation.
    let mut x0 = x.rem_euclid(d);
    if x0 > 0.5 * d {
        x0 = d - x0;
    }
    let mut v = 0.0;
    let n = images as i64;
    for j in -n..=n {
        v += single_plane_potential(plane, x0 - j as f64 * d);
    }
    v
}

/// Periodic continuum planar potential with the default image count.
pub fn moliere_potential(plane: &CrystalPlane, x: f64) -> f64 {
    moliere_potential_with_images(plane, x, DEFAULT_PLANE_IMAGES)
}

/// Fourier decomposition of the periodic planar potential.
///
/// The coefficients are real because the potential is real and even about
/// each plane; only m ≥ 0 is stored and `coeff` mirrors negative indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPotential {
    d: f64,
    /// V_m in eV for m = 0..=m_pot.
    coeffs: Vec<f64>,
    /// Maximum of the potential over one period (at the planes), eV.
    well_depth: f64,
}

impl PlanarPotential {
    /// Assembles a potential directly from coefficients (mainly for tests
    /// and model studies, e.g. the V = 0 free-particle limit).
    pub fn from_coefficients(d: f64, coeffs: Vec<f64>, well_depth: f64) -> Result<Self> {
        if d <= 0.0 {
            return Err(SpaError::Domain("period d must be positive".into()));
        }
        if coeffs.is_empty() {
            return Err(SpaError::Domain("at least V_0 required".into()));
        }
        Ok(Self {
            d,
            coeffs,
            well_depth,
        })
    }

    /// Interplanar period d in Å.
    pub fn period(&self) -> f64 {
        self.d
    }

    /// Largest stored Fourier index.
    pub fn m_pot(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Maximum of the potential over one period (the barrier top for
    /// channeled positrons), eV.
    pub fn well_depth(&self) -> f64 {
        self.well_depth
    }

    /// Fourier coefficient V_m (V_{−m} = V_m).
    pub fn coeff(&self, m: i64) -> f64 {
        let idx = m.unsigned_abs() as usize;
        assert!(
            idx < self.coeffs.len(),
            "Fourier index {m} beyond stored cutoff {}",
            self.m_pot()
        );
        self.coeffs[idx]
    }

    /// Real-space reconstruction V(x) = Σ_m V_m e^{i2πmx/d}.
    pub fn value(&self, x: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * x / self.d;
        let mut v = self.coeffs[0];
        for (m, c) in self.coeffs.iter().enumerate().skip(1) {
            v += 2.0 * c * (w * m as f64).cos();
        }
        v
    }
}

/// Computes the Fourier coefficients V_m = (1/d)∫₀^d V(x) e^{−i2πmx/d} dx of
/// the continuum potential by adaptive quadrature (absolute tolerance
/// 1e-6 eV per coefficient), together with the potential maximum.
pub fn fourier_coefficients(plane: &CrystalPlane, m_pot: usize) -> Result<PlanarPotential> {
    fourier_coefficients_with_images(plane, m_pot, DEFAULT_PLANE_IMAGES)
}

/// As [`fourier_coefficients`] with an explicit plane-image count.
pub fn fourier_coefficients_with_images(
    plane: &CrystalPlane,
    m_pot: usize,
    images: usize,
) -> Result<PlanarPotential> {
    if m_pot < 10 {
        return Err(SpaError::Precondition(format!(
            "m_pot must be at least 10, got {m_pot}"
        )));
    }
    let d = plane.interplanar_distance;
    let mut coeffs = Vec::with_capacity(m_pot + 1);
    for m in 0..=m_pot {
        let w = 2.0 * std::f64::consts::PI * m as f64 / d;
        // The sine part vanishes by parity; integrate the cosine projection.
        let integrand = |x: f64| moliere_potential_with_images(plane, x, images) * (w * x).cos();
        let splits = quad::oscillation_splits(w, d);
        let res = quad::integrate_real(&integrand, 0.0, d, 1e-6 * d, splits)?;
        coeffs.push(res.value / d);
    }

    // The image sum is even about every plane, so the maximum sits exactly
    // on a plane; a scan guards against surprises from potential overrides.
    let mut v_max = moliere_potential_with_images(plane, 0.0, images);
    let n_scan = 2048;
    for i in 1..n_scan {
        let v = moliere_potential_with_images(plane, d * i as f64 / n_scan as f64, images);
        if v > v_max {
            v_max = v;
        }
    }

    PlanarPotential::from_coefficients(d, coeffs, v_max)
}

/// Critical (Lindhard) channeling angle θ_C = √(2 V_max / (γ m_e c² β²)).
pub fn critical_angle(plane: &CrystalPlane, gamma: f64) -> Result<f64> {
    if gamma <= 1.0 {
        return Err(SpaError::Domain(format!(
            "Lorentz factor must exceed 1, got {gamma}"
        )));
    }
    let v_max = moliere_potential(plane, 0.0);
    critical_angle_from_barrier(v_max, gamma)
}

/// Critical angle from a precomputed barrier top.
pub fn critical_angle_from_barrier(v_max: f64, gamma: f64) -> Result<f64> {
    if gamma <= 1.0 {
        return Err(SpaError::Domain(format!(
            "Lorentz factor must exceed 1, got {gamma}"
        )));
    }
    let beta_sq = 1.0 - 1.0 / (gamma * gamma);
    Ok((2.0 * v_max / (gamma * ELECTRON_MASS_EV * beta_sq)).sqrt())
}
