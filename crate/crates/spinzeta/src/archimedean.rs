//! The archimedean factor of the Rankin-Selberg convolution and the
//! convexity-bound apparatus built on it.
//!
//! For weight `k` the factor is
//!
//! ```text
//! L_∞(s) = (Γ_R(s) Γ_R(s+1))² (Γ_C(s+k−1) Γ_C(s+k−2))² Γ_C(s+1) Γ_C(s+2k−3)
//! ```
//!
//! with `Γ_R(s) = π^{−s/2} Γ(s/2)` and `Γ_C(s) = 2(2π)^{−s} Γ(s)`. The
//! functional equation pairs `s ↔ 1−s`, so `|L(1−s)| =
//! |L_∞(s)/L_∞(1−s)| · |L(s)|`; the ratio of gamma factors grows like
//! `k^{5(2σ−1)}` in the weight and `|t|^{8(2σ−1)}` in the height, and the
//! slope-fit experiments here measure both exponents. Note the `t`-exponent
//! is a `t ≫ k` asymptotic: five of the ten atoms are shifted by `≈ k`, so
//! fits at `t ≲ k` come out shallow.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::gamma::log_gamma;

const LN_PI: f64 = 1.1447298858494001741434273513531;
const LN_TWO_PI: f64 = 1.837877066409345483560659472811;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AtomKind {
    GammaR,
    GammaC,
}

/// One shifted `Γ_R`/`Γ_C` factor.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Atom {
    pub kind: AtomKind,
    pub shift: f64,
}

/// The archimedean factor for weight `k`, as a list of atoms.
#[derive(Debug, Clone, Serialize)]
pub struct GammaFactor {
    pub k: u32,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Error)]
pub enum GammaError {
    #[error("argument {arg} of a constituent gamma is within {dist:.2e} of a pole")]
    PoleHit { arg: Complex64, dist: f64 },
    #[error("parameter domain violated: {0}")]
    ParameterDomain(String),
}

impl GammaFactor {
    pub fn new(k: u32) -> Result<Self, GammaError> {
        if k < 10 {
            return Err(GammaError::ParameterDomain(format!(
                "weight k = {k} below 10"
            )));
        }
        let kf = k as f64;
        let atoms = vec![
            Atom { kind: AtomKind::GammaR, shift: 0.0 },
            Atom { kind: AtomKind::GammaR, shift: 0.0 },
            Atom { kind: AtomKind::GammaR, shift: 1.0 },
            Atom { kind: AtomKind::GammaR, shift: 1.0 },
            Atom { kind: AtomKind::GammaC, shift: kf - 1.0 },
            Atom { kind: AtomKind::GammaC, shift: kf - 1.0 },
            Atom { kind: AtomKind::GammaC, shift: kf - 2.0 },
            Atom { kind: AtomKind::GammaC, shift: kf - 2.0 },
            Atom { kind: AtomKind::GammaC, shift: 1.0 },
            Atom { kind: AtomKind::GammaC, shift: 2.0 * kf - 3.0 },
        ];
        Ok(GammaFactor { k, atoms })
    }

    /// `log L_∞(s)`, assembled in log space (no overflow for weights up to
    /// ~1e5 and heights up to ~1e6).
    pub fn log_eval(&self, s: Complex64) -> Result<Complex64, GammaError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for atom in &self.atoms {
            let arg = s + atom.shift;
            match atom.kind {
                AtomKind::GammaR => {
                    check_pole(arg / 2.0)?;
                    acc += -arg / 2.0 * LN_PI + log_gamma(arg / 2.0);
                }
                AtomKind::GammaC => {
                    check_pole(arg)?;
                    acc += Complex64::new(2.0f64.ln(), 0.0) - arg * LN_TWO_PI + log_gamma(arg);
                }
            }
        }
        Ok(acc)
    }

    /// `|L_∞(s)/L_∞(1−s)|`.
    pub fn completed_ratio(&self, s: Complex64) -> Result<f64, GammaError> {
        let a = self.log_eval(s)?;
        let b = self.log_eval(Complex64::new(1.0, 0.0) - s)?;
        Ok((a.re - b.re).exp())
    }
}

fn check_pole(arg: Complex64) -> Result<(), GammaError> {
    if arg.re <= 0.5 {
        let nearest = arg.re.round().min(0.0);
        let dist = (arg - nearest).norm();
        if dist < 1e-12 {
            return Err(GammaError::PoleHit { arg, dist });
        }
    }
    Ok(())
}

/// The convexity-type bound
/// `k^{5(σ−δ)} (σ/(σ−1))^{16} |δ+it|^{8(σ−δ)}`
/// (without its unspecified δ-dependent constant).
pub fn convexity_bound(k: u32, sigma: f64, delta: f64, t: f64) -> Result<f64, GammaError> {
    if !(1.0 < sigma && sigma < 2.0) {
        return Err(GammaError::ParameterDomain(format!(
            "need 1 < σ < 2, got σ = {sigma}"
        )));
    }
    if !(1.0 - sigma < delta && delta < sigma) {
        return Err(GammaError::ParameterDomain(format!(
            "need 1−σ < δ < σ, got δ = {delta}"
        )));
    }
    let kf = k as f64;
    let height = (delta * delta + t * t).sqrt();
    Ok(kf.powf(5.0 * (sigma - delta))
        * (sigma / (sigma - 1.0)).powi(16)
        * height.powf(8.0 * (sigma - delta)))
}

/// The trivial half-plane bound `(σ/(σ−1))^{16}`, valid for `σ > 1`.
pub fn trivial_l_bound(sigma: f64) -> Result<f64, GammaError> {
    if sigma <= 1.0 {
        return Err(GammaError::ParameterDomain(format!(
            "need σ > 1, got {sigma}"
        )));
    }
    Ok((sigma / (sigma - 1.0)).powi(16))
}

/// One point of a slope-fit experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopePoint {
    /// The abscissa (`k` or `t`).
    pub at: f64,
    pub log_ratio: f64,
}

/// Least-squares fit of `log ratio` against `log abscissa`.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    pub points: Vec<SlopePoint>,
    pub slope: f64,
    pub intercept: f64,
    pub predicted_slope: f64,
    /// `slope/predicted − 1`.
    pub relative_error: f64,
}

fn fit(points: Vec<SlopePoint>, predicted: f64) -> SlopeFit {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for p in &points {
        let x = p.at.ln();
        sx += x;
        sy += p.log_ratio;
        sxx += x * x;
        sxy += x * p.log_ratio;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    SlopeFit {
        points,
        slope,
        intercept,
        predicted_slope: predicted,
        relative_error: slope / predicted - 1.0,
    }
}

/// Measure the weight exponent: `log completed_ratio` against `log k` at
/// fixed `s = σ` (t = 0). Predicted slope `5(2σ−1)`.
pub fn k_slope_experiment(sigma: f64, ks: &[u32]) -> Result<SlopeFit, GammaError> {
    let mut pts = Vec::with_capacity(ks.len());
    for &k in ks {
        let g = GammaFactor::new(k)?;
        let r = g.completed_ratio(Complex64::new(sigma, 0.0))?;
        pts.push(SlopePoint {
            at: k as f64,
            log_ratio: r.ln(),
        });
    }
    Ok(fit(pts, 5.0 * (2.0 * sigma - 1.0)))
}

/// Measure the height exponent: `log completed_ratio` against `log t` at
/// fixed weight. Predicted slope `8(2σ−1)`, a `t ≫ k` asymptotic.
pub fn t_slope_experiment(sigma: f64, k: u32, ts: &[f64]) -> Result<SlopeFit, GammaError> {
    let g = GammaFactor::new(k)?;
    let mut pts = Vec::with_capacity(ts.len());
    for &t in ts {
        let r = g.completed_ratio(Complex64::new(sigma, t))?;
        pts.push(SlopePoint {
            at: t,
            log_ratio: r.ln(),
        });
    }
    Ok(fit(pts, 8.0 * (2.0 * sigma - 1.0)))
}

/// CSV export of a slope experiment: `(abscissa, log_ratio, fitted, predicted)`.
pub fn write_slope_csv<W: std::io::Write>(
    label: &str,
    fit: &SlopeFit,
    w: &mut W,
) -> std::io::Result<()> {
    writeln!(w, "{label},log_ratio,fitted_slope,predicted_slope")?;
    for p in &fit.points {
        writeln!(w, "{},{},{},{}", p.at, p.log_ratio, fit.slope, fit.predicted_slope)?;
    }
    Ok(())
}
