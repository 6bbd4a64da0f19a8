//! Truncated Taylor ("jet") arithmetic for forward-mode derivatives of
//! order up to six.
//!
//! A jet stores the coefficients of a function's Taylor expansion about the
//! evaluation point; propagating jets through arithmetic yields derivatives
//! exact to machine precision in the derivative order, with no step-size
//! trade-off. Orders are small and fixed here, so coefficients live in an
//! inline array and all operations are allocation-free.

/// Maximum number of Taylor coefficients (order ≤ 6 ⇒ 7 coefficients).
pub const MAX_COEFFS: usize = 8;

/// Taylor expansion of a scalar function, truncated after `len` coefficients.
///
/// `c[k]` is the k-th Taylor *coefficient*, i.e. f⁽ᵏ⁾/k!.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    c: [f64; MAX_COEFFS],
    len: usize,
}

impl Jet {
    /// Jet of the identity function x ↦ x at `value`.
    pub fn variable(value: f64, n_coeffs: usize) -> Self {
        assert!((1..=MAX_COEFFS).contains(&n_coeffs));
        let mut c = [0.0; MAX_COEFFS];
        c[0] = value;
        if n_coeffs > 1 {
            c[1] = 1.0;
        }
        Self { c, len: n_coeffs }
    }

    /// Jet of a constant.
    pub fn constant(value: f64, n_coeffs: usize) -> Self {
        assert!((1..=MAX_COEFFS).contains(&n_coeffs));
        let mut c = [0.0; MAX_COEFFS];
        c[0] = value;
        Self { c, len: n_coeffs }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative, i.e. k!·c[k].
    pub fn derivative(&self, k: usize) -> f64 {
        assert!(k < self.len);
        self.c[k] * crate::constants::FACTORIAL[k]
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = *self;
        for k in 0..self.len {
            out.c[k] += rhs.c[k];
        }
        out
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = *self;
        out.c[0] += s;
        out
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = *self;
        for k in 0..self.len {
            out.c[k] *= s;
        }
        out
    }

    /// Cauchy product.
    pub fn mul(&self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = Jet::constant(0.0, self.len);
        for i in 0..self.len {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..self.len - i {
                out.c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        out
    }

    /// Quotient by recurrence; the divisor's leading coefficient must be
    /// nonzero.
    pub fn div(&self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = Jet::constant(0.0, self.len);
        for k in 0..self.len {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * out.c[k - j];
            }
            out.c[k] = acc / rhs.c[0];
        }
        out
    }

    /// Square root; the leading coefficient must be positive.
    pub fn sqrt(&self) -> Jet {
        let mut out = Jet::constant(0.0, self.len);
        out.c[0] = self.c[0].sqrt();
        for k in 1..self.len {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= out.c[j] * out.c[k - j];
            }
            out.c[k] = acc / (2.0 * out.c[0]);
        }
        out
    }

    /// Exponential via the standard convolution recurrence
    /// k·e_k = Σ_{j=1..k} j·a_j·e_{k−j}.
    pub fn exp(&self) -> Jet {
        let mut out = Jet::constant(0.0, self.len);
        out.c[0] = self.c[0].exp();
        for k in 1..self.len {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * out.c[k - j];
            }
            out.c[k] = acc / k as f64;
        }
        out
    }
}
