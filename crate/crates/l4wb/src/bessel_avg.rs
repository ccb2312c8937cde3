//! Numerical experiments on weighted averages of J-Bessel functions
//! over the weight k: the single average against a smooth bump, the
//! pair average J_{k-1}(4 pi x) J_{2k-1}(4 pi y) with its predicted
//! amplitude/phase/support footprint, and the associated upper-bound
//! regimes. All sums run exactly over even (or 4 | k) weights with
//! k/K in (1,2), which is lossless because the weight vanishes outside.

use crate::bessel::bessel_j_orders;
use crate::kloosterman::e;
use crate::poisson::bump;
use crate::{Error, Result};
use num_complex::Complex64;

/// Support-window constants for the pair average: inside the window,
/// c1 K^2/y^2 <= 1 - y/4x <= c2 K^2/y^2. Fitted once by oracle sweep.
pub const SUPPORT_C1: f64 = 1.0 / 20.0;
pub const SUPPORT_C2: f64 = 20.0;

/// Pinned epsilon used in all regime inequalities (K^{2-eps} etc).
pub const REGIME_EPS: f64 = 0.2;

/// Smooth weight on (1,2), peak 1: exp(-1/(u-1) - 1/(2-u)) normalized.
pub fn weight_h(u: f64) -> f64 {
    bump(u)
}

#[derive(Debug, Clone, Copy)]
pub struct BesselAvgConfig {
    /// The scale K of the weight average; the sums run over k/K in (1,2).
    pub k_scale: f64,
}

impl BesselAvgConfig {
    pub fn new(k_scale: f64) -> Result<Self> {
        if !(k_scale >= 20.0) {
            return Err(Error::invalid(format!(
                "bessel average scale must satisfy K >= 20, got {k_scale}"
            )));
        }
        Ok(Self { k_scale })
    }

    /// Even weights strictly inside (K, 2K), optionally 4 | k.
    fn weights(&self, modulus: u64) -> Vec<u64> {
        let k = self.k_scale;
        let mut out = Vec::new();
        let mut m = (k.floor() as u64 / modulus + 1) * modulus;
        while (m as f64) < 2.0 * k {
            if m as f64 > k {
                out.push(m);
            }
            m += modulus;
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SingleAvgResult {
    /// 4 sum_{k = 0 mod 4} h(k/K) J_{k-1}(y)
    pub value: f64,
    /// the predicted main term h(y/K)
    pub reference: f64,
    /// value - reference
    pub residual: f64,
}

/// The single Bessel average over weights divisible by 4.
pub fn bessel_avg_single(cfg: &BesselAvgConfig, y: f64) -> Result<SingleAvgResult> {
    let big_k = cfg.k_scale;
    if !(y > 0.0 && y < big_k.powf(2.0 + REGIME_EPS)) {
        return Err(Error::invalid(format!(
            "bessel_avg_single needs 0 < y < K^(2+eps), got y={y}, K={big_k}"
        )));
    }
    let ks = cfg.weights(4);
    let max_order = ks.last().map(|k| *k as usize - 1).unwrap_or(0);
    let j = bessel_j_orders(y, max_order);
    let mut value = 0.0;
    for &k in &ks {
        value += weight_h(k as f64 / big_k) * j[k as usize - 1];
    }
    value *= 4.0;
    let reference = weight_h(y / big_k);
    Ok(SingleAvgResult {
        value,
        reference,
        residual: value - reference,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct PairAvgResult {
    /// sum_{k even} i^k h(k/K) J_{k-1}(4 pi x) J_{2k-1}(4 pi y)
    pub value: Complex64,
    /// value * sqrt(x) * e(-(y^2/4x + 2x))
    pub phase_removed: Complex64,
    /// whether (x,y) lies in the predicted support window
    pub support_flag: bool,
}

/// Whether (x,y) lies in the predicted support window of the pair
/// average: y < 4x and c1 K^2/y^2 <= 1 - y/4x <= c2 K^2/y^2.
pub fn in_support_window(k_scale: f64, x: f64, y: f64) -> bool {
    if y >= 4.0 * x {
        return false;
    }
    let t = 1.0 - y / (4.0 * x);
    let s = k_scale * k_scale / (y * y);
    SUPPORT_C1 * s <= t && t <= SUPPORT_C2 * s
}

/// Raw pair sum over even k in (K, 2K); i^k enters as the exact sign
/// (-1)^{k/2}.
fn pair_sum(cfg: &BesselAvgConfig, arg1: f64, arg2: f64) -> f64 {
    let ks = cfg.weights(2);
    let max_k = ks.last().copied().unwrap_or(2) as usize;
    let j1 = bessel_j_orders(arg1, max_k - 1);
    let j2 = bessel_j_orders(arg2, 2 * max_k - 1);
    let mut value = 0.0;
    for &k in &ks {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        value += sign
            * weight_h(k as f64 / cfg.k_scale)
            * j1[k as usize - 1]
            * j2[2 * k as usize - 1];
    }
    value
}

/// The pair Bessel average with the predicted phase removed.
pub fn bessel_avg_pair(cfg: &BesselAvgConfig, x: f64, y: f64) -> Result<PairAvgResult> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::invalid("bessel_avg_pair needs x, y > 0"));
    }
    let value = pair_sum(cfg, 4.0 * std::f64::consts::PI * x, 4.0 * std::f64::consts::PI * y);
    let value = Complex64::new(value, 0.0);
    let phase_removed = value * x.sqrt() * e(-(y * y / (4.0 * x) + 2.0 * x));
    Ok(PairAvgResult {
        value,
        phase_removed,
        support_flag: in_support_window(cfg.k_scale, x, y),
    })
}

/// Pinned constant in |pair sum| <= C K / sqrt(xy). Fitted by oracle
/// sweep over the admissible regime and pinned with margin (measured
/// ratio 3e-4 at K=60, x=y=K^1.5).
pub const DOUBLEBOUND1_C: f64 = 1.0;
/// Pinned constant in |plain-argument pair sum| <= C K^{-5/6} for
/// x > K^{2-eps}. Fitted by oracle sweep and pinned with margin.
pub const BIGX_C: f64 = 1.0;
/// Decay threshold asserted when |1 - y/4x| > K^{2+eps}/x^2. Fitted:
/// the direct sum at K=60, x=K^1.5 measures 1.8e-5 on the resonant
/// line y=2x and 3.9e-5 at y=x; pinned with ~3x margin.
pub const FURTH_DECAY: f64 = 1e-4;
/// Pinned constant for the single-average residual |value - h(y/K)|
/// <= C K^{-0.9} (measured 2.24 at K=100, 2.28 at K=200).
pub const NOIK_RESIDUAL_C: f64 = 3.0;
/// Pinned constant for the single-average tail bound
/// |value| <= C (K^{-0.9} + y K^{-2.9}) outside the window (measured
/// sup ratio 20.8 over 2.2K <= y <= K^2.19 at K=100).
pub const NOIK_TAIL_C: f64 = 30.0;
/// Pinned uniform bound on |phase_removed| inside the support window
/// (measured sup 2.4e-2 over x in [2K, 2K^1.35] at K=60).
pub const PAIR_AMP_C: f64 = 0.05;
/// Pinned minimal per-step decay factor of the local-sup amplitude
/// along the lower support edge, per K^0.1 step in the violation
/// factor (measured 3.5-8.0 at K=60, x=4K).
pub const EDGE_DECAY_MIN: f64 = 2.5;

#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: &'static str,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct PairBoundReport {
    pub value: f64,
    pub checks: Vec<BoundCheck>,
}

/// Evaluate the pair sum in one of the upper-bound regimes and check
/// the applicable bounds. Regimes (eps pinned at 0.1):
///  - transition: K^{4/3-eps} < x < K^{2-eps}, x K^{-eps} < y < x K^{eps}:
///    |sum(4 pi x, 4 pi y)| <= C K/sqrt(xy); if additionally
///    |1 - y/4x| > K^{2+eps}/x^2, the sum decays rapidly;
///  - large-x: x > K^{2-eps}, 0 < y < K^{2+eps}: the plain-argument sum
///    satisfies |sum(x, y)| <= C K^{-5/6}.
pub fn pair_bound_checks(cfg: &BesselAvgConfig, x: f64, y: f64) -> Result<PairBoundReport> {
    let big_k = cfg.k_scale;
    let eps = REGIME_EPS;
    let mut checks = Vec::new();
    if x > big_k.powf(2.0 - eps) && y > 0.0 && y < big_k.powf(2.0 + eps) {
        // large-x lemma uses plain arguments
        let value = pair_sum(cfg, x, y);
        let bound = BIGX_C * big_k.powf(-5.0 / 6.0);
        checks.push(BoundCheck {
            name: "large_x",
            bound,
            pass: value.abs() <= bound,
        });
        return Ok(PairBoundReport { value, checks });
    }
    let in_transition = x > big_k.powf(4.0 / 3.0 - eps)
        && x < big_k.powf(2.0 - eps)
        && y > x * big_k.powf(-eps)
        && y < x * big_k.powf(eps);
    if !in_transition {
        return Err(Error::invalid(format!(
            "(x,y)=({x},{y}) fits no bound regime at K={big_k}"
        )));
    }
    let value = pair_sum(cfg, 4.0 * std::f64::consts::PI * x, 4.0 * std::f64::consts::PI * y);
    let bound = DOUBLEBOUND1_C * big_k / (x * y).sqrt();
    checks.push(BoundCheck {
        name: "transition",
        bound,
        pass: value.abs() <= bound,
    });
    if (1.0 - y / (4.0 * x)).abs() > big_k.powf(2.0 + eps) / (x * x) {
        checks.push(BoundCheck {
            name: "off_window_decay",
            bound: FURTH_DECAY,
            pass: value.abs() <= FURTH_DECAY,
        });
    }
    Ok(PairBoundReport { value, checks })
}
