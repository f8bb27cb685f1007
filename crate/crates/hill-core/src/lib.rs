//! Spectral analysis of the Hill operator
//!
//! ```text
//!     L y = -y'' + q(x) y,      q(x + 1) = q(x),  q real-valued,
//! ```
//!
//! on the unit period with periodic (`y(1) = y(0)`, `y'(1) = y'(0)`) and
//! anti-periodic (`y(1) = -y(0)`, `y'(1) = -y'(0)`) boundary conditions.
//!
//! The crate computes, at desk scale:
//!
//! * periodic and anti-periodic eigenvalue lists via two independent routes —
//!   shooting on the Floquet discriminant ([`floquet`]) and a truncated
//!   Fourier–Galerkin matrix ([`galerkin`]);
//! * instability-interval ("gap") endpoints and lengths;
//! * the coefficient-space correction sums that tie pair centers and gap
//!   lengths to the Fourier coefficients of `q` ([`asymptotics`]), together
//!   with recovery estimates for `c_0` and `∫q²`;
//! * dyadic decay classification of gap-length and coefficient sequences and
//!   the two verification harnesses built on it ([`decay`]).
//!
//! Everything here is pure computation over `alloc`; file formats, CLI and
//! parallel orchestration live in the companion `hillspec` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod asymptotics;
pub mod decay;
mod fft;
pub mod floquet;
pub mod galerkin;
pub mod potential;

pub use num_complex::Complex64;

/// Crate version, exported so downstream tooling can stamp provenance
/// blocks without a build-script dependency.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Boundary-condition family selector used across all modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Parity {
    /// `y(1) = y(0)`, `y'(1) = y'(0)`; eigenvalues `λ_0 < λ_1 ≤ λ_2 < …`
    Periodic,
    /// `y(1) = -y(0)`, `y'(1) = -y'(0)`; eigenvalues `μ_0 ≤ μ_1 < μ_2 ≤ …`
    Antiperiodic,
}

impl Parity {
    /// Frequency integer of the `m`-th eigenvalue pair: the pair
    /// `(λ_{2m+1}, λ_{2m+2})` clusters near `(2m+2)²π²`, the pair
    /// `(μ_{2m}, μ_{2m+1})` near `(2m+1)²π²`.
    pub fn pair_frequency(self, m: usize) -> i64 {
        match self {
            Parity::Periodic => 2 * m as i64 + 2,
            Parity::Antiperiodic => 2 * m as i64 + 1,
        }
    }

    /// Positions of the `m`-th pair inside the ascending eigenvalue list.
    pub fn pair_positions(self, m: usize) -> (usize, usize) {
        match self {
            Parity::Periodic => (2 * m + 1, 2 * m + 2),
            Parity::Antiperiodic => (2 * m, 2 * m + 1),
        }
    }
}
