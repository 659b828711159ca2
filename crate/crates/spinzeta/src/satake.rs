//! Normalized Satake data at a prime.
//!
//! The four spinor parameters at `p` are `β_1 = α_0`, `β_2 = α_0 α_1`,
//! `β_3 = α_0 α_2`, `β_4 = α_0 α_1 α_2`; after the weight normalization the
//! multiset is closed under inversion (`β_4 = 1/β_1`, `β_3 = 1/β_2`) and all
//! four lie on the unit circle. Writing `e_j` for the elementary symmetric
//! functions this forces `e_3 = e_1`, `e_4 = 1`, so the local data is the
//! palindromic quartic
//!
//! ```text
//! ∏_i (1 − β_i X) = 1 − e_1 X + e_2 X² − e_1 X³ + X⁴ .
//! ```
//!
//! Matching coefficients of `X`, `X²` in
//! `(1 − X²/p) ∏ (1 − β_i X)^{−1} = Σ λ_{p^δ} X^δ` gives the recovery
//! algebra used here:
//!
//! ```text
//! e_1 = λ_p ,   e_2 = λ_p² − λ_{p²} − 1/p .
//! ```
//!
//! Roots are extracted through the palindromic substitution `Y = X + 1/X`
//! (two quadratics) rather than a general quartic solver: the substitution
//! bakes in the self-inverse pairing, keeps each reciprocal pair exactly
//! reciprocal, and recovers repeated roots (an entirely legal input, e.g.
//! `β = (1,1,1,1)`) without the `ε^{1/4}` blow-up a generic eigenvalue or
//! radical method suffers at a quadruple root.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_prime_u64;
use crate::Tolerances;

/// Where a set of Satake parameters came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Recovered,
    Synthetic,
    Ingested,
}

/// The four normalized spinor parameters at a prime.
#[derive(Debug, Clone, Serialize)]
pub struct SatakeLocal {
    pub p: u64,
    #[serde(serialize_with = "crate::satake::serialize_betas")]
    pub betas: [Complex64; 4],
    pub source: Source,
}

pub(crate) fn serialize_betas<S: serde::Serializer>(
    betas: &[Complex64; 4],
    ser: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(4))?;
    for b in betas {
        seq.serialize_element(&[b.re, b.im])?;
    }
    seq.end()
}

/// A pair of normalized Hecke eigenvalues `(λ_p, λ_{p²})` at a prime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeckePair {
    pub p: u64,
    pub lambda_p: f64,
    pub lambda_p2: f64,
}

#[derive(Debug, Error)]
pub enum SatakeError {
    /// Some recovered `|β_i|` is too far from 1: Saito-Kurokawa-type input
    /// or corrupt data. Carries all four moduli for diagnosis.
    #[error("roots off the unit circle (moduli {moduli:?}, worst defect {worst:.3e})")]
    RootsOffUnitCircle { moduli: [f64; 4], worst: f64 },
    /// The quartic solve produced non-finite values or failed to reproduce
    /// the input eigenvalues.
    #[error("quartic solve failure: {reason}")]
    QuarticSolveFailure { reason: String },
    #[error("invalid Hecke pair at p = {p}: {reason}")]
    InvalidInput { p: u64, reason: String },
}

/// Outcome of a recovery: the local data plus its achieved defects.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub local: SatakeLocal,
    /// `max_i ||β_i| − 1|`.
    pub unit_defect: f64,
    /// Defect of re-expanding `(λ_p, λ_{p²})` from the recovered roots.
    pub roundtrip_defect: f64,
    /// Set when `unit_defect` lies in the warn band `(τ_unit, ceiling]`.
    pub warned: bool,
}

/// Report of the Ramanujan-condition checks on a `SatakeLocal`.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub p: u64,
    /// `max_i ||β_i| − 1|`.
    pub max_unit_defect: f64,
    /// `max_i min_j |1/β_i − β_j|`: closure of the multiset under inversion.
    pub inversion_defect: f64,
    /// `max(|Im e_1|, |e_1 − e_3|, |e_4 − 1|)`.
    pub symmetry_defect: f64,
    pub pass: bool,
}

impl SatakeLocal {
    pub fn new(p: u64, betas: [Complex64; 4], source: Source) -> Self {
        SatakeLocal { p, betas, source }
    }

    /// Elementary symmetric functions `(e_1, e_2, e_3, e_4)` of the betas.
    pub fn elementary_symmetric(&self) -> [Complex64; 4] {
        let b = &self.betas;
        let e1 = b[0] + b[1] + b[2] + b[3];
        let e2 = b[0] * b[1]
            + b[0] * b[2]
            + b[0] * b[3]
            + b[1] * b[2]
            + b[1] * b[3]
            + b[2] * b[3];
        let e3 = b[0] * b[1] * b[2] + b[0] * b[1] * b[3] + b[0] * b[2] * b[3] + b[1] * b[2] * b[3];
        let e4 = b[0] * b[1] * b[2] * b[3];
        [e1, e2, e3, e4]
    }

    /// The normalized eigenvalues this local datum induces:
    /// `λ_p = e_1`, `λ_{p²} = e_1² − e_2 − 1/p`.
    pub fn hecke_pair(&self) -> HeckePair {
        let [e1, e2, _, _] = self.elementary_symmetric();
        HeckePair {
            p: self.p,
            lambda_p: e1.re,
            lambda_p2: (e1 * e1 - e2).re - 1.0 / self.p as f64,
        }
    }
}

/// Synthetic unitary Satake data from two angles:
/// `β = (e^{ia}, e^{i(a+b)}, e^{−i(a+b)}, e^{−ia})`.
pub fn synthetic_satake(p: u64, a: f64, b: f64) -> SatakeLocal {
    let b1 = Complex64::from_polar(1.0, a);
    let b2 = Complex64::from_polar(1.0, a + b);
    SatakeLocal::new(p, [b1, b2, b2.conj(), b1.conj()], Source::Synthetic)
}

/// Recover the β multiset from `(λ_p, λ_{p²})`.
///
/// Solves the palindromic quartic `1 − e_1 X + e_2 X² − e_1 X³ + X⁴` through
/// the resolvent quadratic `Y² − e_1 Y + (e_2 − 2)` with `Y = X + 1/X`.
/// Discriminants within rounding distance of zero are snapped to zero so
/// that exactly-degenerate inputs recover exactly.
pub fn recover_satake(pair: &HeckePair, tol: &Tolerances) -> Result<Recovery, SatakeError> {
    if !pair.lambda_p.is_finite() || !pair.lambda_p2.is_finite() {
        return Err(SatakeError::InvalidInput {
            p: pair.p,
            reason: "non-finite eigenvalue".into(),
        });
    }
    if !is_prime_u64(pair.p) {
        return Err(SatakeError::InvalidInput {
            p: pair.p,
            reason: "p is not prime".into(),
        });
    }
    let p = pair.p as f64;
    let e1 = pair.lambda_p;
    let e2 = pair.lambda_p * pair.lambda_p - pair.lambda_p2 - 1.0 / p;

    // Resolvent quadratic for Y = X + 1/X.
    let disc1 = e1 * e1 - 4.0 * (e2 - 2.0);
    let scale1 = (e1 * e1).max(4.0 * (e2 - 2.0).abs()).max(1.0);
    let disc1 = snap(disc1, scale1);
    let sq1 = Complex64::new(disc1, 0.0).sqrt();
    let ys = [
        (Complex64::new(e1, 0.0) + sq1) / 2.0,
        (Complex64::new(e1, 0.0) - sq1) / 2.0,
    ];

    let mut betas = [Complex64::new(0.0, 0.0); 4];
    for (i, &y) in ys.iter().enumerate() {
        let disc2 = y * y - 4.0;
        let scale2 = (y.norm_sqr()).max(1.0);
        let disc2 = if disc2.im == 0.0 {
            Complex64::new(snap(disc2.re, scale2), 0.0)
        } else {
            disc2
        };
        let sq2 = disc2.sqrt();
        // Larger root for stability; its partner is exactly the inverse.
        let r_plus = (y + sq2) / 2.0;
        let r_minus = (y - sq2) / 2.0;
        let r = if r_plus.norm_sqr() >= r_minus.norm_sqr() { r_plus } else { r_minus };
        let r = if r.norm_sqr() == 0.0 {
            return Err(SatakeError::QuarticSolveFailure {
                reason: "vanishing root".into(),
            });
        } else {
            r
        };
        betas[i] = r;
        betas[3 - i] = r.inv();
    }

    if betas.iter().any(|b| !b.re.is_finite() || !b.im.is_finite()) {
        return Err(SatakeError::QuarticSolveFailure {
            reason: "non-finite roots".into(),
        });
    }

    let local = SatakeLocal::new(pair.p, betas, Source::Recovered);

    let mut moduli = [0.0f64; 4];
    for (m, b) in moduli.iter_mut().zip(betas.iter()) {
        *m = b.norm();
    }
    let unit_defect = moduli.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);
    if unit_defect > tol.unit_warn_ceiling {
        return Err(SatakeError::RootsOffUnitCircle {
            moduli,
            worst: unit_defect,
        });
    }

    let back = local.hecke_pair();
    let rt_scale = pair.lambda_p.abs().max(pair.lambda_p2.abs()).max(1.0);
    let roundtrip_defect = ((back.lambda_p - pair.lambda_p).abs())
        .max((back.lambda_p2 - pair.lambda_p2).abs());
    if roundtrip_defect > 1e-6 * rt_scale {
        return Err(SatakeError::QuarticSolveFailure {
            reason: format!("re-expansion defect {roundtrip_defect:.3e}"),
        });
    }

    Ok(Recovery {
        warned: unit_defect > tol.unit,
        local,
        unit_defect,
        roundtrip_defect,
    })
}

fn snap(x: f64, scale: f64) -> f64 {
    if x.abs() <= 1e-12 * scale {
        0.0
    } else {
        x
    }
}

/// Ramanujan-condition report; always returns, never fails.
pub fn validate_ramanujan(s: &SatakeLocal, tol: &Tolerances) -> ValidationReport {
    let max_unit_defect = s
        .betas
        .iter()
        .map(|b| (b.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let inversion_defect = s
        .betas
        .iter()
        .map(|b| {
            let inv = b.inv();
            s.betas
                .iter()
                .map(|c| (inv - c).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let [e1, _, e3, e4] = s.elementary_symmetric();
    let symmetry_defect = e1
        .im
        .abs()
        .max((e1 - e3).norm())
        .max((e4 - Complex64::new(1.0, 0.0)).norm());
    ValidationReport {
        p: s.p,
        max_unit_defect,
        inversion_defect,
        symmetry_defect,
        pass: max_unit_defect <= tol.unit
            && inversion_defect <= tol.unit
            && symmetry_defect <= tol.unit,
    }
}

/// Sort key for comparing β multisets up to permutation.
pub fn sorted_betas(betas: &[Complex64; 4]) -> [Complex64; 4] {
    let mut v = *betas;
    v.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite betas")
    });
    v
}

/// Largest distance between the two multisets after sorting.
pub fn beta_multiset_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let sa = sorted_betas(a);
    let sb = sorted_betas(b);
    sa.iter()
        .zip(sb.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    const TAU: f64 = 2.0 * PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn all_ones_point() {
        // (λ_p, λ_{p²}) = (4, 10 − 1/p) is the all-ones Satake point:
        // (1−X)^{−4} has coefficients 1, 4, 10.
        for p in [2u64, 3, 5, 7, 11, 101, 10007] {
            let pair = HeckePair {
                p,
                lambda_p: 4.0,
                lambda_p2: 10.0 - 1.0 / p as f64,
            };
            let rec = recover_satake(&pair, &tol()).unwrap();
            for b in rec.local.betas {
                assert!((b - Complex64::new(1.0, 0.0)).norm() < 1e-8, "p = {p}, {b}");
            }
        }
    }

    #[test]
    fn quartic_x4_x2_1_point() {
        // (λ_p, λ_{p²}) = (0, −1 − 1/p) gives e_1 = 0, e_2 = 1, i.e. the
        // quartic X⁴ + X² + 1 = (X²+X+1)(X²−X+1) with roots e^{±iπ/3},
        // e^{±2iπ/3}.
        let pair = HeckePair {
            p: 5,
            lambda_p: 0.0,
            lambda_p2: -1.0 - 0.2,
        };
        let rec = recover_satake(&pair, &tol()).unwrap();
        let expected = [
            Complex64::from_polar(1.0, PI / 3.0),
            Complex64::from_polar(1.0, -PI / 3.0),
            Complex64::from_polar(1.0, 2.0 * PI / 3.0),
            Complex64::from_polar(1.0, -2.0 * PI / 3.0),
        ];
        assert!(beta_multiset_distance(&rec.local.betas, &expected) < 1e-10);
    }

    #[test]
    fn synthetic_examples() {
        let s = synthetic_satake(2, 0.0, 0.0);
        for b in s.betas {
            assert_eq!(b, Complex64::new(1.0, 0.0));
        }
        let s = synthetic_satake(3, PI, 0.0);
        for b in s.betas {
            assert!((b - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        }
        let s = synthetic_satake(5, PI / 3.0, PI / 3.0);
        assert!((s.betas[1] - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
        assert!((s.betas[2] - Complex64::from_polar(1.0, -2.0 * PI / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn roundtrip_random_draws() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        for i in 0..1000 {
            let p = [2u64, 3, 5, 7, 11, 101, 10007][i % 7];
            let a = rng.random::<f64>() * TAU;
            let b = rng.random::<f64>() * TAU;
            let s = synthetic_satake(p, a, b);
            let rec = recover_satake(&s.hecke_pair(), &tol()).unwrap();
            let dist = beta_multiset_distance(&rec.local.betas, &s.betas);
            assert!(dist < 1e-8, "p={p} a={a} b={b} dist={dist:.3e}");
            assert!(!rec.warned);
        }
    }

    #[test]
    fn e2_identity_on_synthetic_draws() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        for _ in 0..200 {
            let p = 7u64;
            let s = synthetic_satake(p, rng.random::<f64>() * TAU, rng.random::<f64>() * TAU);
            let pair = s.hecke_pair();
            let [_, e2, _, _] = s.elementary_symmetric();
            let lhs = pair.lambda_p * pair.lambda_p - pair.lambda_p2 - 1.0 / p as f64;
            assert!((lhs - e2.re).abs() < 1e-10);
            assert!(e2.im.abs() < 1e-10);
        }
    }

    #[test]
    fn hecke_values_real() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for _ in 0..200 {
            let s = synthetic_satake(11, rng.random::<f64>() * TAU, rng.random::<f64>() * TAU);
            let [e1, e2, _, _] = s.elementary_symmetric();
            assert!(e1.im.abs() < 1e-10);
            assert!(e2.im.abs() < 1e-10);
        }
    }

    #[test]
    fn validation_passes_synthetic() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(4);
        for _ in 0..100 {
            let s = synthetic_satake(13, rng.random::<f64>() * TAU, rng.random::<f64>() * TAU);
            let rep = validate_ramanujan(&s, &tol());
            assert!(rep.pass);
            assert!(rep.max_unit_defect < 1e-12);
        }
    }

    #[test]
    fn validation_reports_bad_data() {
        let s = SatakeLocal::new(
            2,
            [
                Complex64::new(2.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            Source::Ingested,
        );
        let rep = validate_ramanujan(&s, &tol());
        assert!(!rep.pass);
        assert!((rep.max_unit_defect - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_point_validates_clean() {
        let s = SatakeLocal::new(
            3,
            [Complex64::new(1.0, 0.0); 4],
            Source::Ingested,
        );
        let rep = validate_ramanujan(&s, &tol());
        assert!(rep.pass);
        assert_eq!(rep.max_unit_defect, 0.0);
    }

    #[test]
    fn off_circle_input_rejected_with_moduli() {
        // A Saito-Kurokawa-flavoured pair: eigenvalues too large for four
        // unit betas.
        let pair = HeckePair {
            p: 2,
            lambda_p: 5.0,
            lambda_p2: 12.0,
        };
        match recover_satake(&pair, &tol()) {
            Err(SatakeError::RootsOffUnitCircle { worst, .. }) => assert!(worst > 1e-3),
            other => panic!("expected RootsOffUnitCircle, got {other:?}"),
        }
    }

    #[test]
    fn nonprime_rejected() {
        let pair = HeckePair {
            p: 6,
            lambda_p: 0.0,
            lambda_p2: 0.0,
        };
        assert!(matches!(
            recover_satake(&pair, &tol()),
            Err(SatakeError::InvalidInput { .. })
        ));
    }
}
