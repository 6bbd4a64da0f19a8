//! Annihilation spatial integrals.
//!
//! Integrating the K-shell orbital against the photon and positron plane
//! waves over the coordinates parallel to the crystal plane leaves, for each
//! Slater term, a screened transverse kernel
//!
//! ```text
//! DI_p(x) = ∂^p/∂ζ^p [ ζ (x√(q_yz²+ζ²) + 1) e^(−x√(q_yz²+ζ²)) / (q_yz²+ζ²)^(3/2) ]
//! ```
//!
//! whose ζ-derivative order p = nλ − 1 absorbs the r^(nλ−1) power of the
//! term. The derivatives are evaluated with truncated-Taylor jets — exact to
//! machine precision in the order — rather than transcribed closed forms.
//! The transverse integral weights the kernel with the residual phase
//! between the Bloch component and the photon,
//!
//! ```text
//! IDI(q_x) = ∫₀^d e^(i q_x x) DI_p(x) dx ,
//! ```
//!
//! and the Slater-weighted sum over terms assembles the Io table over the
//! Bloch indices (m, i_n). The atom sits at x = 0 (on the plane) and
//! contributions beyond one interplanar distance are neglected, consistent
//! with the K-shell localization ζ⁻¹ ≪ d.

use num_complex::Complex64;

use crate::bands::BandStructure;
use crate::constants::FACTORIAL;
use crate::jet::Jet;
use crate::kshell::SlaterOrbital;
use crate::quad;
use crate::{Result, SpaError};

/// Momentum transfer components in Å⁻¹: q = p/ħ − κ, with q_x resolved per
/// Bloch component as G_{m,i_n} − κ_x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QVector {
    pub q_x: f64,
    pub q_y: f64,
    pub q_z: f64,
    q_yz: f64,
}

impl QVector {
    pub fn new(q_x: f64, q_y: f64, q_z: f64) -> Self {
        Self {
            q_x,
            q_y,
            q_z,
            q_yz: q_y.hypot(q_z),
        }
    }

    /// In-plane magnitude √(q_y² + q_z²).
    pub fn q_yz(&self) -> f64 {
        self.q_yz
    }
}

/// Maximum supported ζ-derivative order (Slater nλ ≤ 7).
pub const MAX_ORDER: usize = 6;

/// Screened kernel with the ζ-independent parts of the jet prepared once.
struct DiKernel {
    zeta: Jet,
    s: Jet,
    inv_s3: Jet,
    order: usize,
}

impl DiKernel {
    fn new(order: usize, q_yz: f64, zeta: f64) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(SpaError::UnsupportedOrder(order));
        }
        if zeta <= 0.0 {
            return Err(SpaError::Domain(format!(
                "screening exponent must be positive, got {zeta}"
            )));
        }
        let n = order + 1;
        let zeta_jet = Jet::variable(zeta, n);
        let s = zeta_jet.mul(&zeta_jet).add_scalar(q_yz * q_yz).sqrt();
        let s3 = s.mul(&s).mul(&s);
        let inv_s3 = Jet::constant(1.0, n).div(&s3);
        Ok(Self {
            zeta: zeta_jet,
            s,
            inv_s3,
            order,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        let xs = self.s.scale(x);
        let f = self
            .zeta
            .mul(&xs.add_scalar(1.0))
            .mul(&xs.scale(-1.0).exp())
            .mul(&self.inv_s3);
        f.derivative(self.order)
    }

    fn s_value(&self) -> f64 {
        self.s.value()
    }

    /// The kernel factorizes as DI_p(x) = Q_p(x)·e^{−sx} with Q_p a
    /// polynomial of degree p+1; this recovers Q_p in Newton form from
    /// kernel samples near the plane (exact up to roundoff, since the
    /// quotient *is* that polynomial).
    fn envelope_poly(&self) -> NewtonPoly {
        let s = self.s_value();
        let n = self.order + 2;
        let mut nodes = [0.0; 8];
        let mut coeffs = [0.0; 8];
        let span = (self.order as f64 + 1.0) / s;
        for k in 0..n {
            nodes[k] = span * k as f64 / (n - 1).max(1) as f64;
            coeffs[k] = self.eval(nodes[k]) * (s * nodes[k]).exp();
        }
        // Divided differences in place.
        for level in 1..n {
            for k in (level..n).rev() {
                coeffs[k] = (coeffs[k] - coeffs[k - 1]) / (nodes[k] - nodes[k - level]);
            }
        }
        NewtonPoly { nodes, coeffs, n }
    }
}

/// Interpolating polynomial in Newton form.
struct NewtonPoly {
    nodes: [f64; 8],
    coeffs: [f64; 8],
    n: usize,
}

impl NewtonPoly {
    fn eval(&self, x: f64) -> f64 {
        let mut acc = self.coeffs[self.n - 1];
        for k in (0..self.n - 1).rev() {
            acc = acc * (x - self.nodes[k]) + self.coeffs[k];
        }
        acc
    }
}

/// p-th ζ-derivative of the screened transverse kernel at offset `x` from
/// the plane.
pub fn di_kernel(order: usize, q_yz: f64, zeta: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(SpaError::Domain(format!("offset must be nonnegative, got {x}")));
    }
    Ok(DiKernel::new(order, q_yz, zeta)?.eval(x))
}

/// Phase-weighted transverse integral ∫₀^d e^(i q_x x) DI_p(x) dx.
///
/// Evaluated by adaptive Gauss–Kronrod quadrature pre-split by the
/// oscillation count of the phase factor; the absolute tolerance is tied to
/// the kernel scale (well below the documented 1e-10 of the integrand
/// scale).
pub fn idi_integral(order: usize, q_x: f64, q_yz: f64, zeta: f64, d: f64) -> Result<Complex64> {
    if d <= 0.0 {
        return Err(SpaError::Domain(format!("period must be positive, got {d}")));
    }
    let kernel = DiKernel::new(order, q_yz, zeta)?;

    let mut scale: f64 = 0.0;
    for i in 0..=8 {
        scale = scale.max(kernel.eval(d * i as f64 / 8.0).abs());
    }
    let abs_tol = 1e-12 * scale * d;

    // The integrand factorizes as Q_p(x)·e^{(iq_x − s)x}; pre-split by both
    // the phase oscillation count and the envelope decay before the
    // adaptive refinement.
    let poly = kernel.envelope_poly();
    let w = Complex64::new(-kernel.s_value(), q_x);
    let env_splits = ((kernel.s_value() * d / 8.0).ceil() as usize).clamp(1, 2048);
    let splits = quad::oscillation_splits(q_x, d).max(env_splits);
    Ok(quad::integrate_exp_poly(&|x| poly.eval(x), w, 0.0, d, abs_tol, splits)?.value)
}

/// Io values over the Bloch indices at fixed photon kinematics.
///
/// Rows are per subband; a table may hold a single row when only one
/// subband is being evaluated.
#[derive(Debug, Clone)]
pub struct IoTable {
    m_cutoff: i64,
    rows: Vec<Option<Vec<Complex64>>>,
}

impl IoTable {
    pub fn m_cutoff(&self) -> i64 {
        self.m_cutoff
    }

    pub fn get(&self, m: i64, subband: usize) -> Result<Complex64> {
        if m.abs() > self.m_cutoff {
            return Err(SpaError::Inconsistent(format!(
                "Fourier index {m} outside table cutoff {}",
                self.m_cutoff
            )));
        }
        let row = self
            .rows
            .get(subband)
            .and_then(|r| r.as_ref())
            .ok_or_else(|| {
                SpaError::Inconsistent(format!("no Io row for subband {subband}"))
            })?;
        Ok(row[(m + self.m_cutoff) as usize])
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().flatten().flatten().all(|v| v.is_finite())
    }
}

/// Slater-weighted Io value at a single momentum transfer: the 2π from the
/// in-plane angular integration times the orbital normalization, summed
/// over terms with the (−2ζ)^(nλ−1) derivative weights.
pub fn slater_io(orbital: &SlaterOrbital, q_x: f64, q_yz: f64, d: f64) -> Result<Complex64> {
    let mut io = Complex64::new(0.0, 0.0);
    for t in orbital.terms() {
        let order = (t.n_lambda - 1) as usize;
        let weight = (2.0 * t.zeta).powf(1.5) * t.coefficient
            / FACTORIAL[2 * t.n_lambda as usize].sqrt()
            * (-2.0 * t.zeta).powi(order as i32);
        io += weight * idi_integral(order, q_x, q_yz, t.zeta, d)?;
    }
    Ok(io * (2.0 * std::f64::consts::PI / (4.0 * std::f64::consts::PI).sqrt()))
}

/// One subband row of the Io table: entries for m ∈ [−M, M] at
/// q_x = G_{m,i_n} − κ_x.
pub fn io_subband_row(
    orbital: &SlaterOrbital,
    q_yz: f64,
    kappa_x: f64,
    bands: &BandStructure,
    subband: usize,
) -> Result<Vec<Complex64>> {
    let m_cutoff = bands.m_cutoff() as i64;
    let mut row = Vec::with_capacity(2 * m_cutoff as usize + 1);
    for m in -m_cutoff..=m_cutoff {
        let q_x = bands.g_vector(m, subband) - kappa_x;
        row.push(slater_io(orbital, q_x, q_yz, bands.period())?);
    }
    Ok(row)
}

/// Assembles the Io table over all (m, i_n) present in the band structure.
pub fn io_assemble(
    orbital: &SlaterOrbital,
    q: &QVector,
    kappa_x: f64,
    bands: &BandStructure,
) -> Result<IoTable> {
    let mut rows = Vec::with_capacity(bands.n_sub());
    for i_n in 0..bands.n_sub() {
        rows.push(Some(io_subband_row(orbital, q.q_yz(), kappa_x, bands, i_n)?));
    }
    Ok(IoTable {
        m_cutoff: bands.m_cutoff() as i64,
        rows,
    })
}

/// Table holding a single subband row (the others absent).
pub fn io_single_subband(
    orbital: &SlaterOrbital,
    q_yz: f64,
    kappa_x: f64,
    bands: &BandStructure,
    subband: usize,
) -> Result<IoTable> {
    let mut rows = vec![None; bands.n_sub()];
    rows[subband] = Some(io_subband_row(orbital, q_yz, kappa_x, bands, subband)?);
    Ok(IoTable {
        m_cutoff: bands.m_cutoff() as i64,
        rows,
    })
}
