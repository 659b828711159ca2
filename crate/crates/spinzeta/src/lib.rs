//! Numerics for the Dirichlet-series apparatus attached to a degree-2 Siegel
//! Hecke eigenform: normalized Satake data at each prime, the five local
//! factors (spinor inverse, eigenvalue series, Rankin-Selberg inverse,
//! squared-eigenvalue series and the degree-15 correction polynomial),
//! multiplicative expansion of global coefficients, archimedean gamma-factor
//! bounds, and a truncated-Perron partial-sum experiment with an explicit
//! error budget.
//!
//! Everything is built from the four unit-modulus spinor parameters
//! `β_1..β_4` at each prime (`β_4 = 1/β_1`, `β_3 = 1/β_2`), either recovered
//! from a table of normalized eigenvalues `(λ_p, λ_{p²})` or drawn
//! synthetically from seeded angles. All identities the construction is
//! supposed to satisfy are exposed as checkable numbers, not assumptions:
//! series tails, quadrature errors and polynomiality defects are computed
//! and returned alongside every value.
//!
//! See the `guide` module (the rendered book under `book/`) for a narrative
//! walk-through with runnable examples.

pub mod archimedean;
pub mod arith;
pub mod asymptotics;
pub mod dirichlet;
pub mod gamma;
pub mod guide;
pub mod ingest;
pub mod local;
pub mod perron;
pub mod quad;
pub mod report;
pub mod satake;
pub mod zeta;

pub use num_complex::Complex64;

/// Tolerances shared across the crate. Every check reports its achieved
/// defect; these are the pass/fail thresholds.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Tolerances {
    /// Ramanujan unit-modulus tolerance `τ_unit` on `||β_i| − 1|`.
    pub unit: f64,
    /// Unit defects in `(unit, unit_warn_ceiling]` produce a warning rather
    /// than an error, to tolerate low-precision ingested tables.
    pub unit_warn_ceiling: f64,
    /// Polynomiality tolerance `τ_poly` for the correction polynomial,
    /// measured relative to the magnitude of the cancelling terms.
    pub poly: f64,
    /// Tolerance for "this complex number should be real".
    pub real: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit: 1e-9,
            unit_warn_ceiling: 1e-3,
            poly: 1e-9,
            real: 1e-10,
        }
    }
}
