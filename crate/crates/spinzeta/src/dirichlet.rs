//! Global Dirichlet coefficients by multiplicativity, series evaluation with
//! computed tail bounds, and partial sums.
//!
//! A `CoefficientTable` holds `a_1..a_N` for one of the five series (`D1`,
//! `D2`, `Z`, `L`, `H`), expanded from per-prime local factors:
//! `a_n = ∏_{p^e ∥ n} a_{p^e}`. Two coverage modes exist:
//!
//! * `Full` — a local factor must exist for every prime dividing any `n ≤ N`
//!   (missing primes are an error);
//! * `SmoothModel` — the series is the finite Euler product over the model's
//!   primes, so `a_n = 0` whenever `n` has a prime factor outside the model.
//!
//! For small smooth models the tail beyond `N` is bounded sharply by
//! enumerating the model-supported integers in `(N, M]` and closing with a
//! Rankin-type bound beyond `M`; the generic
//! `C·N^{1+ε−σ}/(σ−1−ε)` bound from the coefficient growth is always
//! computed alongside.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::arith::SpfSieve;
use crate::local::{self, LocalFactorError};
use crate::satake::SatakeLocal;
use crate::Tolerances;

/// Which of the five series a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    /// `Σ λ_n n^{−s}`.
    D1,
    /// `Σ λ²_n n^{−s}`.
    D2,
    /// The normalized spinor zeta `Σ b_n n^{−s}`.
    Z,
    /// The Rankin-Selberg convolution.
    L,
    /// The Euler product of the correction polynomials.
    H,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::D1 => "D1",
            SeriesKind::D2 => "D2",
            SeriesKind::Z => "Z",
            SeriesKind::L => "L",
            SeriesKind::H => "H",
        }
    }

    /// `(degree, offset)` of a polynomial majorant `(e + offset)^degree`
    /// for `|a_{p^e}|`, used by tail remainders. `None` for the polynomial
    /// kind `H` (coefficients vanish beyond degree 15).
    fn growth_majorant(self) -> Option<(f64, f64)> {
        match self {
            SeriesKind::D1 | SeriesKind::Z => Some((3.0, 3.0)),
            SeriesKind::D2 => Some((6.0, 3.0)),
            SeriesKind::L => Some((15.0, 15.0)),
            SeriesKind::H => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coverage {
    /// Every prime up to the table bound contributes a local factor.
    Full,
    /// Finite-prime model: coefficients vanish off the smooth support.
    SmoothModel,
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("no local factor for prime {0}")]
    MissingPrime(u64),
    #[error("local series at p = {p} stored to order {have}, need {need}")]
    InsufficientOrder { p: u64, need: usize, have: usize },
    #[error("Re(s) = {sigma} below the convergence margin {min}")]
    OutsideConvergence { sigma: f64, min: f64 },
    #[error("x = {x} exceeds the table bound N = {n_max}")]
    TruncationExceeded { x: f64, n_max: usize },
    #[error("local factor error: {0}")]
    Local(#[from] LocalFactorError),
    #[error("table holds no data")]
    Empty,
}

/// All five local coefficient arrays at one prime.
#[derive(Debug, Clone)]
pub struct PrimeLocal {
    pub satake: SatakeLocal,
    /// `λ_{p^e}`.
    pub d1: Vec<f64>,
    /// `λ²_{p^e}`.
    pub d2: Vec<f64>,
    /// Spinor series `b_{p^e}`.
    pub z: Vec<f64>,
    /// Rankin-Selberg series.
    pub l: Vec<f64>,
    /// Correction polynomial, 16 coefficients.
    pub h: Vec<f64>,
}

impl PrimeLocal {
    pub fn build(s: &SatakeLocal, order: usize, tol: &Tolerances) -> Result<Self, SeriesError> {
        let d1 = local::d1_local(s, order).real_coeffs(tol.real)?;
        let d2: Vec<f64> = d1.iter().map(|x| x * x).collect();
        let z = local::spinor_series(s, order).real_coeffs(tol.real)?;
        let l = local::rankin_series(s, order).real_coeffs(tol.real)?;
        let h = local::h_local(s, tol)?.real_coeffs(tol.real)?;
        Ok(PrimeLocal {
            satake: s.clone(),
            d1,
            d2,
            z,
            l,
            h,
        })
    }

    fn series(&self, kind: SeriesKind) -> &[f64] {
        match kind {
            SeriesKind::D1 => &self.d1,
            SeriesKind::D2 => &self.d2,
            SeriesKind::Z => &self.z,
            SeriesKind::L => &self.l,
            SeriesKind::H => &self.h,
        }
    }

    /// `a_{p^e}` or an order error; `H` is a polynomial, zero beyond 15.
    pub fn coeff(&self, kind: SeriesKind, e: u32) -> Result<f64, SeriesError> {
        let arr = self.series(kind);
        if let Some(&v) = arr.get(e as usize) {
            return Ok(v);
        }
        if kind == SeriesKind::H {
            return Ok(0.0);
        }
        Err(SeriesError::InsufficientOrder {
            p: self.satake.p,
            need: e as usize,
            have: arr.len() - 1,
        })
    }
}

/// Per-prime local data for a whole dataset.
#[derive(Debug, Clone)]
pub struct ModelLocals {
    map: BTreeMap<u64, PrimeLocal>,
}

impl ModelLocals {
    /// Build local data for every prime, each to the order needed for
    /// tables up to `n_max` (and deep enough for tail enumeration when the
    /// prime set is small).
    pub fn build(
        satake: &[SatakeLocal],
        n_max: usize,
        tol: &Tolerances,
    ) -> Result<Self, SeriesError> {
        let deep = satake.len() <= MAX_ENUMERABLE_PRIMES;
        let mut map = BTreeMap::new();
        for s in satake {
            let needed = (n_max as f64).ln() / (s.p as f64).ln();
            let mut order = needed.floor() as usize + 1;
            if deep {
                let tail_depth = (TAIL_ENUM_CUTOFF as f64).ln() / (s.p as f64).ln();
                order = order.max(tail_depth.floor() as usize + 1);
            }
            map.insert(s.p, PrimeLocal::build(s, order, tol)?);
        }
        Ok(ModelLocals { map })
    }

    pub fn primes(&self) -> Vec<u64> {
        self.map.keys().copied().collect()
    }

    pub fn get(&self, p: u64) -> Option<&PrimeLocal> {
        self.map.get(&p)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &PrimeLocal)> {
        self.map.iter()
    }
}

/// Global coefficients `a_1..a_N` of one series.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTable {
    pub kind: SeriesKind,
    pub n_max: usize,
    pub coverage: Coverage,
    pub prime_set: Vec<u64>,
    #[serde(skip)]
    pub coeffs: Vec<f64>,
}

pub const MAX_ENUMERABLE_PRIMES: usize = 16;
const TAIL_ENUM_CUTOFF: u64 = 10_000_000_000_000; // 1e13

/// Expand a coefficient table from local data.
pub fn expand_coefficients(
    locals: &ModelLocals,
    kind: SeriesKind,
    n_max: usize,
    sieve: &SpfSieve,
    coverage: Coverage,
) -> Result<CoefficientTable, SeriesError> {
    assert!(sieve.limit() >= n_max, "sieve too small for N");
    if n_max == 0 {
        return Err(SeriesError::Empty);
    }
    let mut coeffs = vec![0.0f64; n_max];
    coeffs[0] = 1.0;
    for n in 2..=n_max {
        let mut val = 1.0f64;
        let mut supported = true;
        for (p, e) in sieve.factorize(n as u64) {
            match locals.get(p) {
                Some(loc) => val *= loc.coeff(kind, e)?,
                None => match coverage {
                    Coverage::Full => return Err(SeriesError::MissingPrime(p)),
                    Coverage::SmoothModel => {
                        supported = false;
                        break;
                    }
                },
            }
        }
        coeffs[n - 1] = if supported { val } else { 0.0 };
    }
    Ok(CoefficientTable {
        kind,
        n_max,
        coverage,
        prime_set: locals.primes(),
        coeffs,
    })
}

/// Value plus tail bounds of a series evaluation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesEval {
    pub value_re: f64,
    pub value_im: f64,
    /// Best available bound on the omitted tail `Σ_{n>N} a_n n^{−s}`.
    pub tail_bound: f64,
    /// The growth-bound form `C·N^{1+ε−σ}/(σ−1−ε)` with measured `C`.
    pub formula_bound: f64,
    pub formula_eps: f64,
    pub formula_c: f64,
}

impl SeriesEval {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// Convergence margin below which evaluation is refused.
pub const CONVERGENCE_MARGIN: f64 = 0.1;

impl CoefficientTable {
    pub fn a(&self, n: usize) -> f64 {
        self.coeffs[n - 1]
    }

    /// `Σ_{n ≤ x} a_n` (exact finite sum).
    pub fn partial_sum(&self, x: f64) -> Result<f64, SeriesError> {
        if x > self.n_max as f64 {
            return Err(SeriesError::TruncationExceeded {
                x,
                n_max: self.n_max,
            });
        }
        let top = x.floor().max(0.0) as usize;
        Ok(self.coeffs[..top].iter().sum())
    }

    /// Partial sums at every integer (index `n`, value `Σ_{m≤n} a_m`).
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.coeffs
            .iter()
            .map(|&a| {
                acc += a;
                acc
            })
            .collect()
    }

    /// Evaluate `Σ_{n≤N} a_n n^{−s}` with tail bounds. `locals` enables the
    /// sharp smooth-model tail; without it only the growth-formula bound is
    /// available.
    pub fn eval(
        &self,
        s: Complex64,
        locals: Option<&ModelLocals>,
    ) -> Result<SeriesEval, SeriesError> {
        let min_sigma = 1.0 + CONVERGENCE_MARGIN;
        if s.re < min_sigma {
            return Err(SeriesError::OutsideConvergence {
                sigma: s.re,
                min: min_sigma,
            });
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a != 0.0 {
                let n = (i + 1) as f64;
                value += a * (-s * n.ln()).exp();
            }
        }
        let (formula_bound, formula_eps, formula_c) = self.formula_tail(s.re);
        let mut tail_bound = formula_bound;
        if self.coverage == Coverage::SmoothModel {
            if let Some(locals) = locals {
                if let Some(sharp) = smooth_tail_bound(locals, self.kind, self.n_max as u64, s.re)
                {
                    tail_bound = tail_bound.min(sharp);
                }
            }
        }
        Ok(SeriesEval {
            value_re: value.re,
            value_im: value.im,
            tail_bound,
            formula_bound,
            formula_eps,
            formula_c,
        })
    }

    /// `min_ε C(ε)·N^{1+ε−σ}/(σ−1−ε)` with `C(ε) = max_n |a_n|/n^ε`
    /// measured over the table.
    fn formula_tail(&self, sigma: f64) -> (f64, f64, f64) {
        let n = self.n_max as f64;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for k in 1..20 {
            let eps = (sigma - 1.0) * k as f64 / 20.0;
            if sigma - 1.0 - eps < 1e-6 {
                break;
            }
            let c = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &a)| a.abs() / ((i + 1) as f64).powf(eps))
                .fold(0.0, f64::max);
            let bound = c * n.powf(1.0 + eps - sigma) / (sigma - 1.0 - eps);
            if bound < best.0 {
                best = (bound, eps, c);
            }
        }
        best
    }

    /// Worst multiplicativity defect `|a_{mn} − a_m a_n|/max(1, |a_m a_n|)`
    /// over coprime pairs with `mn ≤ limit`.
    pub fn multiplicativity_defect(&self, limit: usize) -> f64 {
        let limit = limit.min(self.n_max);
        let mut worst = 0.0f64;
        for m in 2..=limit / 2 {
            for n in m..=limit / m {
                if gcd(m as u64, n as u64) != 1 {
                    continue;
                }
                let lhs = self.a(m * n);
                let rhs = self.a(m) * self.a(n);
                let defect = (lhs - rhs).abs() / rhs.abs().max(1.0);
                worst = worst.max(defect);
            }
        }
        worst
    }

    /// CSV export: a metadata header line, then `n,a_n` rows.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "name,N,primes")?;
        let primes = self
            .prime_set
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "{},{},\"{}\"", self.kind.name(), self.n_max, primes)?;
        writeln!(w, "n,a_n")?;
        for (i, &a) in self.coeffs.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, a)?;
        }
        Ok(())
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Dirichlet convolution `(f * g)(n) = Σ_{de=n} f_d g_e` of two tables up
/// to `limit`.
pub fn dirichlet_convolution(f: &CoefficientTable, g: &CoefficientTable, limit: usize) -> Vec<f64> {
    let limit = limit.min(f.n_max).min(g.n_max);
    let mut out = vec![0.0f64; limit];
    for d in 1..=limit {
        let fd = f.a(d);
        if fd == 0.0 {
            continue;
        }
        let mut n = d;
        let mut e = 1;
        while n <= limit {
            out[n - 1] += fd * g.a(e);
            n += d;
            e += 1;
        }
    }
    out
}

/// Sharp tail bound for a smooth-model series:
/// exact enumeration of the model support in `(n_from, M]` plus a
/// Rankin-type closure beyond `M`. `None` when the prime set is too large
/// to enumerate or the local depth is insufficient.
pub fn smooth_tail_bound(
    locals: &ModelLocals,
    kind: SeriesKind,
    n_from: u64,
    sigma: f64,
) -> Option<f64> {
    if locals.len() > MAX_ENUMERABLE_PRIMES || locals.is_empty() {
        return None;
    }
    let m_cut = TAIL_ENUM_CUTOFF.max(n_from.saturating_mul(2));
    let primes = locals.primes();
    // |a_{p^e}| to the depth reachable under m_cut.
    let mut abs_coeffs: Vec<Vec<f64>> = Vec::new();
    for &p in &primes {
        let depth = ((m_cut as f64).ln() / (p as f64).ln()).floor() as usize + 1;
        let arr = locals.get(p).unwrap().series(kind);
        if arr.len() < depth && kind != SeriesKind::H {
            return None;
        }
        abs_coeffs.push(arr.iter().map(|a| a.abs()).collect());
    }
    let mut enumerated = 0.0f64;
    dfs_smooth(
        &primes,
        &abs_coeffs,
        0,
        1,
        1.0,
        n_from,
        m_cut,
        sigma,
        &mut enumerated,
    );
    let rankin = rankin_remainder(locals, kind, m_cut, sigma)?;
    Some(enumerated + rankin)
}

#[allow(clippy::too_many_arguments)]
fn dfs_smooth(
    primes: &[u64],
    abs_coeffs: &[Vec<f64>],
    idx: usize,
    n: u64,
    weight: f64,
    n_from: u64,
    m_cut: u64,
    sigma: f64,
    acc: &mut f64,
) {
    if idx == primes.len() {
        if n > n_from && weight != 0.0 {
            *acc += weight * (n as f64).powf(-sigma);
        }
        return;
    }
    let p = primes[idx];
    let mut pe = 1u64;
    let mut e = 0usize;
    loop {
        let w = if e == 0 {
            weight
        } else {
            match abs_coeffs[idx].get(e) {
                Some(&c) => weight * c,
                None => 0.0,
            }
        };
        dfs_smooth(primes, abs_coeffs, idx + 1, n * pe, w, n_from, m_cut, sigma, acc);
        match pe.checked_mul(p) {
            Some(next) if n.checked_mul(next).map(|v| v <= m_cut).unwrap_or(false) => {
                pe = next;
                e += 1;
            }
            _ => break,
        }
    }
}

/// `Σ_{model n > M} |a_n| n^{−σ} ≤ min_ε M^{−ε} ∏_p S_p(σ−ε)` where each
/// local sum carries a rigorous polynomial-growth remainder.
fn rankin_remainder(
    locals: &ModelLocals,
    kind: SeriesKind,
    m_cut: u64,
    sigma: f64,
) -> Option<f64> {
    let m = m_cut as f64;
    let mut best = f64::INFINITY;
    for k in 1..40 {
        let eps = sigma * k as f64 / 40.0;
        let x = sigma - eps;
        if x <= 0.02 {
            break;
        }
        let mut prod = 1.0f64;
        let mut ok = true;
        for (_, loc) in locals.iter() {
            match local_abs_sum(loc, kind, x) {
                Some(s) => prod *= s,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = best.min(m.powf(-eps) * prod);
        }
    }
    if best.is_finite() {
        Some(best)
    } else {
        None
    }
}

/// `Σ_e |a_{p^e}| p^{−ex}` with a closed-form remainder from the
/// polynomial coefficient majorant.
fn local_abs_sum(loc: &PrimeLocal, kind: SeriesKind, x: f64) -> Option<f64> {
    let arr = loc.series(kind);
    let p = loc.satake.p as f64;
    let q = p.powf(-x);
    let mut sum = 0.0f64;
    let mut qe = 1.0f64;
    for &a in arr {
        sum += a.abs() * qe;
        qe *= q;
    }
    let e_next = arr.len() as f64;
    match kind.growth_majorant() {
        None => Some(sum), // polynomial: nothing beyond the stored range
        Some((d, off)) => {
            // Σ_{e ≥ E} (e+off)^d q^e ≤ q^E (E+off)^d / (1 − q e^{d/(E+off)})
            let growth = (d / (e_next + off)).exp();
            if q * growth >= 0.999 {
                return None;
            }
            let rem = qe * (e_next + off).powf(d) / (1.0 - q * growth);
            Some(sum + rem)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satake::synthetic_satake;
    use rand::Rng;
    use rand::SeedableRng;

    const TAU: f64 = std::f64::consts::TAU;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn small_model(seed: u64, primes: &[u64], n_max: usize) -> ModelLocals {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let sats: Vec<_> = primes
            .iter()
            .map(|&p| synthetic_satake(p, rng.random::<f64>() * TAU, rng.random::<f64>() * TAU))
            .collect();
        ModelLocals::build(&sats, n_max, &tol()).unwrap()
    }

    #[test]
    fn expansion_multiplicative_all_ones() {
        // all-ones β at p = 2, 3: a_6 = a_2 · a_3 = 16 for D1.
        let sats = vec![synthetic_satake(2, 0.0, 0.0), synthetic_satake(3, 0.0, 0.0)];
        let locals = ModelLocals::build(&sats, 6, &tol()).unwrap();
        let sieve = SpfSieve::new(6);
        let t =
            expand_coefficients(&locals, SeriesKind::D1, 6, &sieve, Coverage::SmoothModel).unwrap();
        assert_eq!(t.a(1), 1.0);
        assert!((t.a(2) - 4.0).abs() < 1e-12);
        assert!((t.a(3) - 4.0).abs() < 1e-12);
        assert!((t.a(6) - 16.0).abs() < 1e-12);
        assert_eq!(t.a(5), 0.0); // off-support
    }

    #[test]
    fn expansion_n_equals_one() {
        let locals = small_model(1, &[2], 1);
        let sieve = SpfSieve::new(2);
        let t =
            expand_coefficients(&locals, SeriesKind::D2, 1, &sieve, Coverage::SmoothModel).unwrap();
        assert_eq!(t.coeffs, vec![1.0]);
    }

    #[test]
    fn missing_prime_under_full_coverage() {
        let locals = small_model(2, &[2, 3], 100);
        let sieve = SpfSieve::new(100);
        match expand_coefficients(&locals, SeriesKind::D1, 100, &sieve, Coverage::Full) {
            Err(SeriesError::MissingPrime(5)) => {}
            other => panic!("expected MissingPrime(5), got {other:?}"),
        }
    }

    #[test]
    fn d2_is_square_of_d1_everywhere() {
        let locals = small_model(3, &[2, 3, 5, 7], 2000);
        let sieve = SpfSieve::new(2000);
        let d1 =
            expand_coefficients(&locals, SeriesKind::D1, 2000, &sieve, Coverage::SmoothModel)
                .unwrap();
        let d2 =
            expand_coefficients(&locals, SeriesKind::D2, 2000, &sieve, Coverage::SmoothModel)
                .unwrap();
        for n in 1..=2000 {
            assert!((d2.a(n) - d1.a(n) * d1.a(n)).abs() < 1e-9 * d2.a(n).abs().max(1.0));
            assert!(d2.a(n) >= -1e-10);
        }
    }

    #[test]
    fn multiplicativity_sweep() {
        let locals = small_model(4, &[2, 3, 5, 7, 11, 13], 10_000);
        let sieve = SpfSieve::new(10_000);
        for kind in [
            SeriesKind::D1,
            SeriesKind::D2,
            SeriesKind::Z,
            SeriesKind::L,
            SeriesKind::H,
        ] {
            let t = expand_coefficients(&locals, kind, 10_000, &sieve, Coverage::SmoothModel)
                .unwrap();
            let defect = t.multiplicativity_defect(10_000);
            assert!(defect < 1e-9, "{kind:?}: {defect:.3e}");
        }
    }

    #[test]
    fn partial_sum_examples() {
        let ones = CoefficientTable {
            kind: SeriesKind::D1,
            n_max: 2000,
            coverage: Coverage::Full,
            prime_set: vec![],
            coeffs: vec![1.0; 2000],
        };
        assert_eq!(ones.partial_sum(1000.5).unwrap(), 1000.0);
        assert_eq!(ones.partial_sum(0.5).unwrap(), 0.0);
        assert!(matches!(
            ones.partial_sum(5000.0),
            Err(SeriesError::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn d2_partial_sums_monotone() {
        let locals = small_model(5, &[2, 3, 5], 3000);
        let sieve = SpfSieve::new(3000);
        let d2 =
            expand_coefficients(&locals, SeriesKind::D2, 3000, &sieve, Coverage::SmoothModel)
                .unwrap();
        let cum = d2.cumulative();
        for w in cum.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn eval_zeta_table_reference() {
        // all a_n = 1: partial ζ(2) plus tail bound must bracket π²/6.
        let ones = CoefficientTable {
            kind: SeriesKind::D1,
            n_max: 100_000,
            coverage: Coverage::Full,
            prime_set: vec![],
            coeffs: vec![1.0; 100_000],
        };
        let ev = ones.eval(Complex64::new(2.0, 0.0), None).unwrap();
        let target = std::f64::consts::PI.powi(2) / 6.0;
        assert!((ev.value().re - target).abs() <= ev.tail_bound);
        assert!(ev.value().im.abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_low_sigma() {
        let ones = CoefficientTable {
            kind: SeriesKind::D1,
            n_max: 10,
            coverage: Coverage::Full,
            prime_set: vec![],
            coeffs: vec![1.0; 10],
        };
        assert!(matches!(
            ones.eval(Complex64::new(1.05, 0.0), None),
            Err(SeriesError::OutsideConvergence { .. })
        ));
    }

    #[test]
    fn eval_real_on_real_axis() {
        let locals = small_model(6, &[2, 3, 5, 7], 5000);
        let sieve = SpfSieve::new(5000);
        let d1 =
            expand_coefficients(&locals, SeriesKind::D1, 5000, &sieve, Coverage::SmoothModel)
                .unwrap();
        let ev = d1.eval(Complex64::new(1.7, 0.0), Some(&locals)).unwrap();
        assert!(ev.value().im.abs() < 1e-10);
    }

    #[test]
    fn smooth_tail_bound_dominates_true_remainder() {
        // The enumerated bound must dominate the series change when the
        // table is extended.
        let locals = small_model(7, &[2, 3, 5], 40_000);
        let sieve = SpfSieve::new(40_000);
        let short =
            expand_coefficients(&locals, SeriesKind::D1, 2_000, &sieve, Coverage::SmoothModel)
                .unwrap();
        let long = expand_coefficients(
            &locals,
            SeriesKind::D1,
            40_000,
            &sieve,
            Coverage::SmoothModel,
        )
        .unwrap();
        let s = Complex64::new(1.4, 0.3);
        let ev_short = short.eval(s, Some(&locals)).unwrap();
        let ev_long = long.eval(s, Some(&locals)).unwrap();
        let moved = (ev_long.value() - ev_short.value()).norm();
        assert!(
            moved <= ev_short.tail_bound,
            "moved {moved:.3e} > bound {:.3e}",
            ev_short.tail_bound
        );
        assert!(ev_short.tail_bound < ev_short.formula_bound);
    }

    #[test]
    fn z_coefficients_below_d4() {
        let locals = small_model(8, &[2, 3, 5, 7, 11], 10_000);
        let sieve = SpfSieve::new(10_000);
        let z = expand_coefficients(&locals, SeriesKind::Z, 10_000, &sieve, Coverage::SmoothModel)
            .unwrap();
        for n in 1..=10_000u64 {
            let bound = crate::arith::divisor_d4(n, &sieve) as f64;
            assert!(z.a(n as usize).abs() <= bound + 1e-6, "n = {n}");
        }
    }

    #[test]
    fn convolution_identity_d2_h_l() {
        let locals = small_model(9, &[2, 3, 5, 7, 11, 13], 10_000);
        let sieve = SpfSieve::new(10_000);
        let d2 =
            expand_coefficients(&locals, SeriesKind::D2, 10_000, &sieve, Coverage::SmoothModel)
                .unwrap();
        let h = expand_coefficients(&locals, SeriesKind::H, 10_000, &sieve, Coverage::SmoothModel)
            .unwrap();
        let l = expand_coefficients(&locals, SeriesKind::L, 10_000, &sieve, Coverage::SmoothModel)
            .unwrap();
        let conv = dirichlet_convolution(&h, &l, 10_000);
        for n in 1..=10_000 {
            let scale = d2.a(n).abs().max(1.0);
            assert!(
                (conv[n - 1] - d2.a(n)).abs() < 1e-8 * scale,
                "n = {n}: {} vs {}",
                conv[n - 1],
                d2.a(n)
            );
        }
    }

    #[test]
    fn csv_roundtrip_shape() {
        let locals = small_model(10, &[2, 3], 50);
        let sieve = SpfSieve::new(50);
        let t = expand_coefficients(&locals, SeriesKind::D1, 50, &sieve, Coverage::SmoothModel)
            .unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "name,N,primes");
        assert_eq!(lines.next().unwrap(), "D1,50,\"2 3\"");
        assert_eq!(lines.next().unwrap(), "n,a_n");
        assert_eq!(lines.next().unwrap(), "1,1");
        assert_eq!(text.lines().count(), 3 + 50);
    }
}
