//! Single-photon annihilation (SPA) of planar-channeled relativistic
//! positrons on K-shell electrons of crystal atoms.
//!
//! A positron channeled between the (110) planes of a Si crystal occupies
//! quantized transverse-energy bands. When it annihilates with a K-shell
//! electron of a plane atom, the crystal absorbs the recoil momentum and a
//! *single* photon can be emitted. This crate computes the
//! angular-differential cross-section of that process, plus the free-atom
//! reference cross-sections used for comparison.
//!
//! The pipeline:
//!
//! 1. [`crystal`] — Si(110) geometry and the continuum (plane-averaged)
//!    Moliere potential with its Fourier coefficients.
//! 2. [`bands`] — transverse Bloch bands of the channeled positron from the
//!    plane-wave central-equation eigenproblem, plus entry-angle-dependent
//!    level populations.
//! 3. [`kshell`] — the K-shell electron wavefunction as a Slater-type
//!    orbital expansion loaded from a data file.
//! 4. [`integrals`] — the annihilation spatial integrals (screened kernel,
//!    its high-order screening-parameter derivatives via Taylor jets, and
//!    the phase-weighted transverse integrals).
//! 5. [`xsection`] — photon kinematics, the polarization-summed matrix
//!    element, phase space and flux factors, band averaging, and peak-angle
//!    extraction.
//! 6. [`atomref`] — free-atom SPA reference cross-sections and the
//!    exponential-fit utility.
//!
//! Scans over photon angles, beam energies, and entry angles are
//! embarrassingly parallel; the `parallel` feature (default) dispatches them
//! through rayon, and disabling it yields a bit-identical sequential build.
//!
//! Internal units are eV and Å throughout; cross-sections convert to barn/sr
//! only at the output boundary.

pub mod atomref;
pub mod bands;
pub mod constants;
pub mod crystal;
mod error;
pub mod exec;
pub mod integrals;
pub mod jet;
pub mod kshell;
pub mod opt;
pub mod quad;
pub mod scan;
pub mod xsection;

pub use error::{Result, SpaError};
