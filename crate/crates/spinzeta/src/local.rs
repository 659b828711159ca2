//! The five local objects at a prime, as dense polynomials / truncated power
//! series in `X = p^{−s}`:
//!
//! * `SpinorInv`  — `∏_i (1 − β_i X)`, degree 4;
//! * `D1Series`   — `Σ λ_{p^δ} X^δ = (1 − X²/p) ∏ (1 − β_i X)^{−1}`;
//! * `RankinInv`  — `∏_{i,j} (1 − β_i β_j X)`, degree 16 over ordered pairs;
//! * `D2Series`   — `Σ λ²_{p^δ} X^δ`;
//! * `HPoly`      — the correction polynomial `RankinInv · D2Series`, a
//!   polynomial of degree ≤ 15 with vanishing linear coefficient.
//!
//! Series are computed by the order-4 linear recurrence from the spinor
//! polynomial, never by partial fractions: the recurrence has no pole
//! problem at repeated `β` (the partial-fraction closed form lives only in
//! test code as a cross-check on distinct-root draws).

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::satake::SatakeLocal;
use crate::Tolerances;

/// Which of the five local objects a factor is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    SpinorInv,
    D1Series,
    RankinInv,
    D2Series,
    HPoly,
}

/// Polynomial (exact degree) or series truncated at `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Polynomial,
    TruncatedSeries { order: usize },
}

/// Dense local factor: `coeffs[d]` is the coefficient of `X^d`.
#[derive(Debug, Clone)]
pub struct LocalFactor {
    pub p: u64,
    pub role: Role,
    pub kind: Kind,
    pub coeffs: Vec<Complex64>,
}

#[derive(Debug, Error)]
pub enum LocalFactorError {
    /// A coefficient of the defining product beyond degree 15 failed to
    /// cancel. `defect` is the worst residue, `scale` the magnitude of the
    /// terms that were supposed to cancel.
    #[error(
        "polynomiality violation at p = {p}: degree-{degree} coefficient {defect:.3e} \
         (cancellation scale {scale:.3e})"
    )]
    PolynomialityViolation {
        p: u64,
        degree: usize,
        defect: f64,
        scale: f64,
    },
    /// A coefficient expected to be real carries too much imaginary part.
    #[error("imaginary residue {defect:.3e} in {role:?} at p = {p}")]
    ImaginaryResidue { p: u64, role: Role, defect: f64 },
}

impl LocalFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> Complex64 {
        self.coeffs.get(d).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Real parts of the coefficients, verifying the imaginary parts are
    /// below `tol` relative to the coefficient scale.
    pub fn real_coeffs(&self, tol: f64) -> Result<Vec<f64>, LocalFactorError> {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.norm())
            .fold(1.0f64, f64::max);
        let defect = self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if defect > tol * scale {
            return Err(LocalFactorError::ImaginaryResidue {
                p: self.p,
                role: self.role,
                defect,
            });
        }
        Ok(self.coeffs.iter().map(|c| c.re).collect())
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64], cap: usize) -> Vec<Complex64> {
    let len = (a.len() + b.len() - 1).min(cap + 1);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate() {
        if i >= len {
            break;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `1/P(X)` to the given order, for `P(0) = 1`, by the
/// linear recurrence `h_n = −Σ_{j≥1} c_j h_{n−j}`.
fn series_inverse(poly: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); order + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for n in 1..=order {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..poly.len().min(n + 1) {
            acc += poly[j] * h[n - j];
        }
        h[n] = -acc;
    }
    h
}

/// `∏_i (1 − β_i X)`: degree 4, coefficients `(1, −e_1, e_2, −e_1, 1)`.
pub fn spinor_inverse(s: &SatakeLocal) -> LocalFactor {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for b in &s.betas {
        coeffs = poly_mul(&coeffs, &[Complex64::new(1.0, 0.0), -b], 4);
    }
    LocalFactor {
        p: s.p,
        role: Role::SpinorInv,
        kind: Kind::Polynomial,
        coeffs,
    }
}

/// The spinor series `∏_i (1 − β_i X)^{−1}` (local coefficients of the
/// normalized spinor zeta), truncated at `order`.
pub fn spinor_series(s: &SatakeLocal, order: usize) -> LocalFactor {
    let inv = spinor_inverse(s);
    LocalFactor {
        p: s.p,
        role: Role::SpinorInv,
        kind: Kind::TruncatedSeries { order },
        coeffs: series_inverse(&inv.coeffs, order),
    }
}

/// `Σ_δ λ_{p^δ} X^δ` to the given order: spinor series times `(1 − X²/p)`.
pub fn d1_local(s: &SatakeLocal, order: usize) -> LocalFactor {
    let h = spinor_series(s, order).coeffs;
    let invp = 1.0 / s.p as f64;
    let mut coeffs = h.clone();
    for d in 2..=order {
        coeffs[d] = h[d] - h[d - 2] * invp;
    }
    LocalFactor {
        p: s.p,
        role: Role::D1Series,
        kind: Kind::TruncatedSeries { order },
        coeffs,
    }
}

/// `∏_{i,j} (1 − β_i β_j X)` over all 16 ordered pairs: degree 16.
pub fn rankin_inverse(s: &SatakeLocal) -> LocalFactor {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for bi in &s.betas {
        for bj in &s.betas {
            coeffs = poly_mul(&coeffs, &[Complex64::new(1.0, 0.0), -bi * bj], 16);
        }
    }
    LocalFactor {
        p: s.p,
        role: Role::RankinInv,
        kind: Kind::Polynomial,
        coeffs,
    }
}

/// Rankin-Selberg local series `∏_{i,j} (1 − β_i β_j X)^{−1}` to `order`.
pub fn rankin_series(s: &SatakeLocal, order: usize) -> LocalFactor {
    let inv = rankin_inverse(s);
    LocalFactor {
        p: s.p,
        role: Role::RankinInv,
        kind: Kind::TruncatedSeries { order },
        coeffs: series_inverse(&inv.coeffs, order),
    }
}

/// `Σ_δ λ²_{p^δ} X^δ`: the squared coefficients of `d1_local`.
pub fn d2_local(s: &SatakeLocal, order: usize) -> LocalFactor {
    let d1 = d1_local(s, order);
    LocalFactor {
        p: s.p,
        role: Role::D2Series,
        kind: Kind::TruncatedSeries { order },
        coeffs: d1.coeffs.iter().map(|c| c * c).collect(),
    }
}

/// Order used for the vanishing check behind `h_local`.
pub const H_CHECK_ORDER: usize = 32;

/// The correction polynomial `H_p(X)`.
///
/// Computes `RankinInv × D2Series` to order 32, verifies every coefficient
/// of degree 16..=32 cancels (Lemma-H polynomiality, degree ≤ 15), verifies
/// the linear coefficient cancels, and truncates to degree 15.
///
/// Cancellation defects are measured against the magnitude of the terms
/// being cancelled, so exactly-degenerate β (all equal) pass at any prime;
/// a genuine violation signals invalid Satake data or a bug.
pub fn h_local(s: &SatakeLocal, tol: &Tolerances) -> Result<LocalFactor, LocalFactorError> {
    let d2 = d2_local(s, H_CHECK_ORDER);
    let rank = rankin_inverse(s);
    let prod = poly_mul(&rank.coeffs, &d2.coeffs, H_CHECK_ORDER);

    for degree in 16..=H_CHECK_ORDER {
        let defect = prod[degree].norm();
        let scale = cancellation_scale(&rank.coeffs, &d2.coeffs, degree);
        if defect > tol.poly * scale.max(1.0) {
            return Err(LocalFactorError::PolynomialityViolation {
                p: s.p,
                degree,
                defect,
                scale,
            });
        }
    }
    let lin_defect = prod[1].norm();
    let lin_scale = cancellation_scale(&rank.coeffs, &d2.coeffs, 1);
    if lin_defect > tol.poly * lin_scale.max(1.0) {
        return Err(LocalFactorError::PolynomialityViolation {
            p: s.p,
            degree: 1,
            defect: lin_defect,
            scale: lin_scale,
        });
    }

    Ok(LocalFactor {
        p: s.p,
        role: Role::HPoly,
        kind: Kind::Polynomial,
        coeffs: prod[..16].to_vec(),
    })
}

fn cancellation_scale(a: &[Complex64], b: &[Complex64], degree: usize) -> f64 {
    let mut scale = 0.0f64;
    for (i, ai) in a.iter().enumerate() {
        if i > degree {
            break;
        }
        if degree - i < b.len() {
            scale += ai.norm() * b[degree - i].norm();
        }
    }
    scale
}

/// `H_p` evaluated at `X = 1/p`: the local contribution to the residue
/// product `H(1) = ∏_p H_p(1/p)`. Real for valid Satake data; since the
/// linear coefficient vanishes, `H_p(1/p) = 1 + O(1/p²)`.
pub fn h_value_at_one(s: &SatakeLocal, tol: &Tolerances) -> Result<Complex64, LocalFactorError> {
    let h = h_local(s, tol)?;
    Ok(h.eval(Complex64::new(1.0 / s.p as f64, 0.0)))
}
