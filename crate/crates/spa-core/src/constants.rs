//! Physical constants in the crate's internal unit system (eV, Å).

/// ħc in eV·Å.
pub const HBARC_EV_ANGSTROM: f64 = 1973.269804;

/// Electron rest energy m_e c² in eV.
pub const ELECTRON_MASS_EV: f64 = 510_998.95;

/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Squared elementary charge e² = α·ħc in eV·Å (Gaussian units).
pub const E2_EV_ANGSTROM: f64 = FINE_STRUCTURE * HBARC_EV_ANGSTROM;

/// Bohr radius in Å.
pub const BOHR_RADIUS_ANGSTROM: f64 = 0.529_177_210_903;

/// 1 Å² = 10⁸ barn.
pub const BARN_PER_ANGSTROM_SQ: f64 = 1.0e8;

/// Si K-shell binding energy in eV (K-edge).
pub const SI_K_BINDING_EV: f64 = 1839.0;

/// Exact factorials up to 14!, enough for (2nλ)! with nλ ≤ 7.
pub const FACTORIAL: [f64; 15] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
];
