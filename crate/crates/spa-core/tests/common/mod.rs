//! Shared oracles for the integration and acceptance suites.
//!
//! Everything here is derived independently of the library's computational
//! path: closed-form antiderivatives instead of quadrature, finite
//! differences instead of jets, a plain Jacobi rotation eigensolver instead
//! of the library solver.

use num_complex::Complex64;

/// Moment integrals Iₙ = ∫₀^δ xⁿ e^{wx} dx by the recurrence
/// Iₙ = (δⁿ e^{wδ} − n·Iₙ₋₁)/w.
pub fn moment_integrals(w: Complex64, delta: f64, n_max: usize) -> Vec<Complex64> {
    let e = (w * delta).exp();
    let mut out = vec![(e - 1.0) / w];
    for n in 1..=n_max {
        let prev = out[n - 1];
        out.push((delta.powi(n as i32) * e - n as f64 * prev) / w);
    }
    out
}

/// Closed-form ∫₀^d e^{iq_x x}·DI_p(x) dx for p < 3.
///
/// With s = √(q_yz² + ζ²), w = iq_x − s and F = s·I₁ + I₀, differentiating
/// ζ·F/s³ under the integral sign gives
///
/// ```text
/// IDI₀ = ζF/s³
/// IDI₁ = F/s³ − 3ζ²F/s⁵ − ζ²I₂/s³
/// IDI₂ = −3ζI₂/s³ − 9ζF/s⁵ + 6ζ³I₂/s⁵ + 15ζ³F/s⁷ + ζ³I₃/s⁴
/// ```
///
/// using dF/dζ = −ζI₂ and dIₙ/dζ = −(ζ/s)Iₙ₊₁.
pub fn idi_closed_form(order: usize, q_x: f64, q_yz: f64, zeta: f64, d: f64) -> Complex64 {
    assert!(order < 3, "closed forms derived for p < 3 only");
    let s = (q_yz * q_yz + zeta * zeta).sqrt();
    let w = Complex64::new(-s, q_x);
    let moments = moment_integrals(w, d, 3);
    let f = s * moments[1] + moments[0];
    let s3 = s.powi(3);
    let s5 = s.powi(5);
    match order {
        0 => zeta * f / s3,
        1 => f / s3 - 3.0 * zeta * zeta * f / s5 - zeta * zeta * moments[2] / s3,
        _ => {
            -3.0 * zeta * moments[2] / s3 - 9.0 * zeta * f / s5
                + 6.0 * zeta.powi(3) * moments[2] / s5
                + 15.0 * zeta.powi(3) * f / s.powi(7)
                + zeta.powi(3) * moments[3] / s.powi(4)
        }
    }
}

/// The kernel base function ζ(x·s + 1)e^{−xs}/s³ in plain arithmetic.
pub fn di_base(q_yz: f64, zeta: f64, x: f64) -> f64 {
    let s = (q_yz * q_yz + zeta * zeta).sqrt();
    zeta * (x * s + 1.0) * (-x * s).exp() / (s * s * s)
}

/// Cyclic Jacobi eigensolver for a small real-symmetric matrix; returns
/// (eigenvalues, eigenvectors as columns), ascending.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}
