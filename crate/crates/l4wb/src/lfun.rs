//! L-values at the edge and at the center: the symmetric-square value
//! L(1, sym^2 f) through smoothed Dirichlet series with functional-
//! equation residue corrections, its Moebius-inverted reciprocal
//! series, the central values L(1/2, g) and L(1/2, sym^2 f x g) via the
//! approximate functional equation, Bump's double-Dirichlet-series
//! identity, the main-term identity, and an Euler-Maclaurin zeta.

use crate::afe::{afe_weights, AFEWeights};
use crate::arith::{moebius_table, spf_table, tau};
use crate::gamma::log_gamma_real;
use crate::hecke::Eigenform;
use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// ln cutoff for e^{-m/X} truncation: terms below 1e-16 are dropped.
const EXP_CUT: f64 = 36.85;

/// Conservative recorded error model C X^{-1/2} for the smoothed-series
/// edge values; the residue-corrected estimator lands far inside it
/// (measured ~1e-9 at the default smoothing scale).
pub const EDGE_TAIL_MODEL_C: f64 = 1e-3;

/// Error model coefficient for the reciprocal (Moebius-inverted)
/// series: |value - 1/L(1,sym^2 f)| <= C X^{-1/2}.
pub const INV_TAIL_MODEL_C: f64 = 1.0;

// ---------------------------------------------------------------------------
// zeta

const BERNOULLI_2J: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

fn zeta_em(s: f64) -> f64 {
    let n = 20.0f64.max(2.0 * s.abs()) as usize;
    let nf = n as f64;
    let mut sum = 0.0;
    for m in 1..n {
        sum += (m as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    // tail: sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut fact = 2.0; // (2j)!
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let tj = 2 * (j + 1);
        sum += b / fact * rising * nf.powf(-s - tj as f64 + 1.0);
        rising *= (s + tj as f64 - 1.0) * (s + tj as f64);
        fact *= (tj as f64 + 1.0) * (tj as f64 + 2.0);
    }
    sum
}

/// Riemann zeta for real s > 1, relative error below 1e-12.
pub fn zeta(s: f64) -> Result<f64> {
    if s == 1.0 {
        return Err(Error::invalid("zeta pole at s = 1"));
    }
    if !(s > 1.0) {
        return Err(Error::invalid(format!("zeta requires s > 1, got {s}")));
    }
    Ok(zeta_em(s))
}

// ---------------------------------------------------------------------------
// coefficient tables

/// a_f(m^2) for 1 <= m <= m_max, by multiplicativity and the Hecke
/// recursion at prime powers (needs lambda_f(p) for p <= m_max only).
pub fn a_squared_table(f: &Eigenform, m_max: usize) -> Result<Vec<f64>> {
    if m_max > f.budget() {
        return Err(Error::budget(format!(
            "a_f(m^2) table to {m_max} exceeds coefficient budget {}",
            f.budget()
        )));
    }
    let spf = spf_table(m_max);
    let mut a2 = vec![0.0f64; m_max + 1];
    if m_max >= 1 {
        a2[1] = 1.0;
    }
    for j in 2..=m_max {
        let p = spf[j] as usize;
        let mut u = p;
        let mut v = j / p;
        let mut e = 1u32;
        while v % p == 0 {
            u *= p;
            v /= p;
            e += 1;
        }
        a2[j] = if v > 1 {
            a2[u] * a2[v]
        } else {
            f.a_prime_power(p as u64, 2 * e)?
        };
    }
    Ok(a2)
}

/// A_f(n, 1) = sum_{d^2 m = n} a_f(m^2) for 1 <= n <= n_max: the
/// Dirichlet coefficients of L(s, sym^2 f) itself.
pub fn sym2_a1_table(f: &Eigenform, n_max: usize) -> Result<Vec<f64>> {
    let a2 = a_squared_table(f, n_max)?;
    let mut a1 = vec![0.0f64; n_max + 1];
    let mut d = 1usize;
    while d * d <= n_max {
        let dd = d * d;
        for q in 1..=n_max / dd {
            a1[dd * q] += a2[q];
        }
        d += 1;
    }
    Ok(a1)
}

// ---------------------------------------------------------------------------
// symmetric-square L at and right of the edge

/// gamma(s)/gamma(1-s) for the completed sym^2 L-function, s in
/// {1, 3, 5}, where gamma(u) = pi^{-3u/2} G((u+1)/2) G((u+k-1)/2)
/// G((u+k)/2); the reflected first factor hits Gamma at half-integers
/// (sqrt(pi), -2 sqrt(pi), 4 sqrt(pi)/3).
fn sym2_gamma_ratio(k: u32, s: u32) -> f64 {
    assert!(matches!(s, 1 | 3 | 5) && k >= 12);
    let kf = k as f64;
    let sf = s as f64;
    let first_den = match s {
        1 => PI.sqrt(),
        3 => -2.0 * PI.sqrt(),
        _ => 4.0 * PI.sqrt() / 3.0,
    };
    let log = log_gamma_real((sf + 1.0) / 2.0).unwrap()
        + log_gamma_real((sf + kf - 1.0) / 2.0).unwrap()
        + log_gamma_real((sf + kf) / 2.0).unwrap()
        - log_gamma_real((kf - sf) / 2.0).unwrap()
        - log_gamma_real((kf + 1.0 - sf) / 2.0).unwrap();
    PI.powf(1.5 - 3.0 * sf) * log.exp() / first_den
}

/// Sharp partial sum for L(s, sym^2 f) = zeta(2s) sum_m a_f(m^2) m^{-s},
/// adequate in the absolutely convergent range s >= 3.
fn sym2_l_sharp(f: &Eigenform, s: f64, m_max: usize) -> Result<f64> {
    let a2 = a_squared_table(f, f.budget().min(m_max))?;
    let mut sum = 0.0;
    for (m, a) in a2.iter().enumerate().skip(1) {
        sum += a * (m as f64).powf(-s);
    }
    Ok(zeta_em(2.0 * s) * sum)
}

/// The kinds of L-value the workbench produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LKind {
    CentralG,
    CentralSym2xG,
    EdgeSym2,
    EdgeSym2Inverse,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LValue {
    pub kind: LKind,
    pub value: f64,
    /// number of Dirichlet/series terms actually summed
    pub truncation: usize,
    pub tail_bound: f64,
}

/// L(1, sym^2 f) from the smoothed series S(X) = sum_n A_f(n,1) n^{-1}
/// e^{-n/X}. Shifting the Mellin contour gives
///   S(X) = L(1) - L(0)/X - L(-2)/(6X^3) - L(-4)/(120X^5) + O(X^{-7})
/// (odd negative points are trivial zeros), and the functional equation
/// turns every correction into a multiple of L(1), L(3) or L(5); we
/// solve the resulting linear relation for L(1). The smoothing scale is
/// capped at budget/25 so the summed terms cover all but e^{-25} of the
/// smoothed mass.
pub fn edge_sym2(f: &Eigenform, x: f64) -> Result<LValue> {
    if !(x >= 100.0) {
        return Err(Error::invalid("edge_sym2 needs smoothing scale X >= 100"));
    }
    let k = f.weight;
    let x_eff = x.min(f.budget() as f64 / 25.0);
    if x_eff < 100.0 {
        return Err(Error::budget(format!(
            "edge_sym2 needs coefficient budget >= 2500, have {}",
            f.budget()
        )));
    }
    let n_max = f.budget().min((EXP_CUT * x_eff).ceil() as usize);
    let a1 = sym2_a1_table(f, n_max)?;
    let mut s_raw = 0.0;
    for (n, a) in a1.iter().enumerate().skip(1) {
        s_raw += a / n as f64 * (-(n as f64) / x_eff).exp();
    }
    let l3 = sym2_l_sharp(f, 3.0, 4000)?;
    let l5 = sym2_l_sharp(f, 5.0, 4000)?;
    let l_m2 = sym2_gamma_ratio(k, 3) * l3;
    let l_m4 = sym2_gamma_ratio(k, 5) * l5;
    let c0 = sym2_gamma_ratio(k, 1); // L(0)/L(1) = (k-1)/(2 pi^2)
    let value =
        (s_raw + l_m2 / (6.0 * x_eff.powi(3)) + l_m4 / (120.0 * x_eff.powi(5)))
            / (1.0 - c0 / x_eff);
    Ok(LValue {
        kind: LKind::EdgeSym2,
        value,
        truncation: n_max,
        tail_bound: EDGE_TAIL_MODEL_C * x_eff.powf(-0.5),
    })
}

/// L(1, sym^2 f) at the form's natural smoothing scale budget/25.
pub fn edge_sym2_default(f: &Eigenform) -> Result<LValue> {
    edge_sym2(f, (f.budget() as f64 / 25.0).max(100.0))
}

/// The Moebius-inverted series for 1/L(1, sym^2 f):
/// sum over squarefree pairwise-coprime (d1, d2, d3) of
/// mu(d1) mu(d3) a_f(d1^2) a_f(d2^2) (d1 d2^2 d3^3)^{-1} e^{-d1 d2^2 d3^3 / X}
/// (mu(d1 d2 d3) mu(d2) collapses to mu(d1) mu(d3) on the support).
/// Terms with exponential below 1e-16 are dropped; the d1, d2 ranges
/// are additionally capped by the coefficient budget.
pub fn edge_sym2_inverse(f: &Eigenform, x: f64) -> Result<LValue> {
    if !(x >= 100.0) {
        return Err(Error::invalid(
            "edge_sym2_inverse needs smoothing scale X >= 100",
        ));
    }
    let m_cut = (EXP_CUT * x) as u64;
    let cap = f.budget().min(m_cut as usize);
    let a2 = a_squared_table(f, cap)?;
    let mu = moebius_table(cap.max((m_cut as f64).cbrt() as usize + 2));
    let mut sum = 0.0f64;
    let mut terms = 0usize;
    let mut d3 = 1u64;
    while d3 * d3 * d3 <= m_cut {
        if mu[d3 as usize] != 0 {
            let m3 = d3 * d3 * d3;
            let mut d2 = 1u64;
            while d2 * d2 * m3 <= m_cut && d2 as usize <= cap {
                if mu[d2 as usize] != 0 && crate::arith::gcd(d2, d3) == 1 {
                    let m23 = d2 * d2 * m3;
                    let d23 = d2 * d3;
                    let base = a2[d2 as usize] * mu[d3 as usize] as f64 / m23 as f64;
                    let d1_top = (m_cut / m23).min(cap as u64);
                    for d1 in 1..=d1_top {
                        let m1 = mu[d1 as usize];
                        if m1 == 0 || crate::arith::gcd(d1, d23) != 1 {
                            continue;
                        }
                        let m = d1 * m23;
                        sum += m1 as f64 * base * a2[d1 as usize] / d1 as f64
                            * (-(m as f64) / x).exp();
                        terms += 1;
                    }
                }
                d2 += 1;
            }
        }
        d3 += 1;
    }
    Ok(LValue {
        kind: LKind::EdgeSym2Inverse,
        value: sum,
        truncation: terms,
        tail_bound: INV_TAIL_MODEL_C * x.powf(-0.5),
    })
}

/// L(s, sym^2 f) for real s >= 1. s = 1 routes through the
/// residue-corrected solve; s = 2 through the smoothed series with the
/// two known correction values
///   D(1) = L(1)/zeta(2), D(0) = L(0)/zeta(0) = -2 L(0)
/// for D(s) = L(s, sym^2 f)/zeta(2s); s >= 3 through the sharp sum.
pub fn sym2_l(f: &Eigenform, s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::invalid("sym2_l supports s >= 1 only"));
    }
    if s == 1.0 {
        return Ok(edge_sym2_default(f)?.value);
    }
    if s >= 3.0 {
        return sym2_l_sharp(f, s, 4000);
    }
    if (s - 2.0).abs() > 1e-12 {
        // no certified corrections available off the integers; the
        // sharp sum is the best effort here
        return sym2_l_sharp(f, s, f.budget().min(10_000));
    }
    let y = f.budget() as f64 / 25.0;
    let m_max = f.budget().min((EXP_CUT * y).ceil() as usize);
    let a2 = a_squared_table(f, m_max)?;
    let mut raw = 0.0;
    for (m, a) in a2.iter().enumerate().skip(1) {
        let mf = m as f64;
        raw += a / (mf * mf) * (-mf / y).exp();
    }
    let l1 = edge_sym2_default(f)?.value;
    let d1 = l1 / zeta_em(2.0);
    let d0 = -2.0 * sym2_gamma_ratio(f.weight, 1) * l1; // L(0)/zeta(0)
    let d2 = raw + d1 / y - d0 / (2.0 * y * y);
    Ok(zeta_em(4.0) * d2)
}

// ---------------------------------------------------------------------------
// central values

/// Upper bound used for the (vbound)-style tails: |V_{k,j}(xi)| <=
/// VB (1 + xi/k^j)^{-3} over the verified range.
const VBOUND_C: f64 = 60.0;

fn central_g_sum(g: &Eigenform, weights: &AFEWeights, m_top: usize) -> Result<f64> {
    let mut sum = 0.0;
    for m in 1..=m_top {
        sum += g.a(m as u64)? * (m as f64).powf(-0.5) * weights.eval(m as f64);
    }
    Ok(2.0 * sum)
}

/// L(1/2, g) = 2 sum_m a_g(m) m^{-1/2} V_{k,1}(m) for g of weight 2k.
pub fn central_value_g(g: &Eigenform, k: u32) -> Result<LValue> {
    central_value_g_with_m(g, k, 40 * k as usize)
}

pub fn central_value_g_with_m(g: &Eigenform, k: u32, m_top: usize) -> Result<LValue> {
    if g.weight != 2 * k {
        return Err(Error::invalid(format!(
            "central_value_g: form has weight {}, expected {}",
            g.weight,
            2 * k
        )));
    }
    if m_top > g.budget() {
        return Err(Error::budget(format!(
            "central_value_g needs {m_top} coefficients, budget is {}",
            g.budget()
        )));
    }
    let weights = afe_weights(k, 1)?;
    let value = central_g_sum(g, &weights, m_top)?;
    // tail: |a_g(m)| <= tau(m) against the decay of V_{k,1}
    let kf = k as f64;
    let mut tail = 0.0;
    for m in (m_top + 1)..=(40 * m_top) {
        let mf = m as f64;
        tail += 2.0 * tau(m as u64) as f64 * mf.powf(-0.5) * VBOUND_C
            / (1.0 + mf / kf).powi(3);
    }
    Ok(LValue {
        kind: LKind::CentralG,
        value,
        truncation: m_top,
        tail_bound: tail,
    })
}

/// Independent evaluation of L(1/2, g) through the Gaussian-damped
/// approximate functional equation (different smoothing, same value).
pub fn central_value_g_oracle(g: &Eigenform, k: u32) -> Result<f64> {
    if g.weight != 2 * k {
        return Err(Error::invalid("oracle: weight mismatch"));
    }
    let weights = AFEWeights::gaussian(k, 1)?;
    central_g_sum(g, &weights, (40 * k as usize).min(g.budget()))
}

fn sym2xg_sum(
    f: &Eigenform,
    g: &Eigenform,
    weights: &AFEWeights,
    n2: usize,
) -> Result<f64> {
    let a1 = sym2_a1_table(f, n2)?;
    let mu = moebius_table((n2 as f64).sqrt() as usize + 1);
    let mut sum = 0.0;
    let mut r = 1usize;
    while r * r <= n2 {
        let divs_r = crate::arith::divisors(r as u64);
        let rr = r * r;
        for n in 1..=n2 / rr {
            // A_f(n, r) = sum_{d | (n, r)} mu(d) A_f(n/d, 1) A_f(r/d, 1)
            let mut a = 0.0;
            for &d in &divs_r {
                let du = d as usize; // d | r <= sqrt(N2), inside the mu table
                if n % du == 0 && mu[du] != 0 {
                    a += mu[du] as f64 * a1[n / du] * a1[r / du];
                }
            }
            if a != 0.0 {
                let xi = (n * rr) as f64;
                sum += a * g.a(n as u64)? * xi.powf(-0.5) * weights.eval(xi);
            }
        }
        r += 1;
    }
    Ok(2.0 * sum)
}

/// L(1/2, sym^2 f x g) = 2 sum_{n r^2 <= N2} A_f(n,r) a_g(n)
/// (n r^2)^{-1/2} V_{k,2}(n r^2), N2 = 40 k^2.
pub fn central_value_sym2xg(f: &Eigenform, g: &Eigenform) -> Result<LValue> {
    let k = f.weight;
    if g.weight != 2 * k {
        return Err(Error::invalid(format!(
            "central_value_sym2xg: weights ({}, {}) are not (k, 2k)",
            f.weight, g.weight
        )));
    }
    let n2 = 40 * (k as usize) * (k as usize);
    if f.budget() < n2 || g.budget() < n2 {
        return Err(Error::budget(format!(
            "central_value_sym2xg needs budgets >= {n2}, have ({}, {})",
            f.budget(),
            g.budget()
        )));
    }
    let weights = afe_weights(k, 2)?;
    let value = sym2xg_sum(f, g, &weights, n2)?;
    // tail: |A_f(n,r) a_g(n)| <= tau3-style majorant tau(m)^2 at
    // m = n r^2, against the V_{k,2} decay
    let k2 = (k as f64).powi(2);
    let mut tail = 0.0;
    for m in (n2 + 1)..=(8 * n2) {
        let mf = m as f64;
        tail += 2.0 * (tau(m as u64) as f64).powi(2) * mf.powf(-0.5) * VBOUND_C
            / (1.0 + mf / k2).powi(3);
    }
    Ok(LValue {
        kind: LKind::CentralSym2xG,
        value,
        truncation: n2,
        tail_bound: tail,
    })
}

/// Gaussian-smoothed independent evaluation of L(1/2, sym^2 f x g).
pub fn central_value_sym2xg_oracle(f: &Eigenform, g: &Eigenform) -> Result<f64> {
    let k = f.weight;
    if g.weight != 2 * k {
        return Err(Error::invalid("oracle: weight mismatch"));
    }
    let n2 = 40 * (k as usize) * (k as usize);
    let weights = AFEWeights::gaussian(k, 2)?;
    sym2xg_sum(f, g, &weights, n2.min(f.budget()).min(g.budget()))
}

// ---------------------------------------------------------------------------
// Bump's identity and the main term

#[derive(Debug, Clone, serde::Serialize)]
pub struct BumpReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Bump's identity: sum_{n,r} A_f(n,r) n^{-s} r^{-w} =
/// L(s, sym^2 f) L(w, sym^2 f) / zeta(s+w), checked at truncation N.
/// The left side is folded through A_f(n,r) = sum_{d | (n,r)} mu(d)
/// A_f(n/d,1) A_f(r/d,1) into a single d-sum over products of prefix
/// sums, so the N x N grid costs O(N log N).
pub fn bump_check(f: &Eigenform, s: f64, w: f64, n: usize) -> Result<BumpReport> {
    if !(s > 1.0 && w > 1.0) {
        return Err(Error::invalid("bump_check needs s, w > 1"));
    }
    if n < 1 || n > f.budget() {
        return Err(Error::budget(format!(
            "bump_check truncation {n} outside budget {}",
            f.budget()
        )));
    }
    let a1 = sym2_a1_table(f, n)?;
    let mut prefix_s = vec![0.0f64; n + 1];
    let mut prefix_w = vec![0.0f64; n + 1];
    for m in 1..=n {
        let mf = m as f64;
        prefix_s[m] = prefix_s[m - 1] + a1[m] * mf.powf(-s);
        prefix_w[m] = prefix_w[m - 1] + a1[m] * mf.powf(-w);
    }
    let mu = moebius_table(n);
    let mut lhs = 0.0;
    for d in 1..=n {
        if mu[d] != 0 {
            let t = n / d;
            lhs += mu[d] as f64 * (d as f64).powf(-(s + w)) * prefix_s[t] * prefix_w[t];
        }
    }
    let rhs = sym2_l(f, s)? * sym2_l(f, w)? / zeta_em(s + w);
    Ok(BumpReport {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MainTermReport {
    pub sum: f64,
    pub target: f64,
    pub gap: f64,
    /// gap normalized by the target: both sides of the identity scale
    /// with L(1, sym^2 f)^2, which varies by more than an order of
    /// magnitude across forms of the same weight, so the k^{-1/2}
    /// error profile is only visible after normalizing it away
    pub rel_gap: f64,
}

/// The diagonal main term sum_{n,r} A_f(n,r) V_{k,1}(n) V_{k,2}(n r^2)
/// / (n r) against its limit (6/pi^2) L(1, sym^2 f)^2; the paper's
/// error term is O(k^{-1/2}).
pub fn main_term_sum(f: &Eigenform) -> Result<MainTermReport> {
    let k = f.weight;
    let v1 = afe_weights(k, 1)?;
    let v2 = afe_weights(k, 2)?;
    // adaptive cutoffs where the weights are certifiably negligible
    let mut n_max = k as usize;
    while v1.eval(n_max as f64).abs() > 1e-13 {
        n_max += k as usize;
    }
    let mut xi2_max = (k as f64).powi(2);
    while v2.eval(xi2_max).abs() * xi2_max > 1e-12 {
        xi2_max *= 1.3;
    }
    let table_top = n_max.max(xi2_max.sqrt() as usize + 1);
    let a1 = sym2_a1_table(f, table_top)?;
    let mu = moebius_table(table_top);
    let mut sum = 0.0;
    for n in 1..=n_max {
        let v1n = v1.eval(n as f64);
        if v1n.abs() < 1e-15 {
            continue;
        }
        let mut r = 1usize;
        while (n as f64) * (r as f64) * (r as f64) <= xi2_max {
            let mut a = 0.0;
            for &d in &crate::arith::divisors(crate::arith::gcd(n as u64, r as u64)) {
                let du = d as usize;
                if mu[du] != 0 {
                    a += mu[du] as f64 * a1[n / du] * a1[r / du];
                }
            }
            if a != 0.0 {
                let xi = (n * r * r) as f64;
                sum += a * v1n * v2.eval(xi) / (n as f64 * r as f64);
            }
            r += 1;
        }
    }
    let l1 = edge_sym2_default(f)?.value;
    let target = 6.0 / (PI * PI) * l1 * l1;
    let gap = (sum - target).abs();
    Ok(MainTermReport {
        sum,
        target,
        gap,
        rel_gap: gap / target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{eigenforms_for_weight, eigenforms_with_budget};

    #[test]
    fn zeta_classical_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12 * 1.6449);
        assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12 * 1.0823);
        assert!(zeta(1.0).is_err());
        assert!(zeta(0.5).is_err());
    }

    /// Cohen–Rodriguez Villegas–Zagier acceleration of the alternating
    /// zeta series: an independent oracle for zeta off the integers.
    fn zeta_alternating_oracle(s: f64) -> f64 {
        let n = 40usize;
        let mut d = (3.0 + 8.0f64.sqrt()).powi(n as i32);
        d = (d + 1.0 / d) / 2.0;
        let mut b = -1.0f64;
        let mut c = -d;
        let mut sum = 0.0;
        for kk in 0..n {
            c = b - c;
            sum += c * (kk as f64 + 1.0).powf(-s);
            b *= (kk as f64 + n as f64) * (kk as f64 - n as f64)
                / ((kk as f64 + 0.5) * (kk as f64 + 1.0));
        }
        sum / d / (1.0 - 2.0f64.powf(1.0 - s))
    }

    #[test]
    fn zeta_near_one_matches_acceleration_oracle() {
        for s in [1.1, 1.5, 2.7, 3.3] {
            let em = zeta(s).unwrap();
            let acc = zeta_alternating_oracle(s);
            assert!((em - acc).abs() < 1e-11 * em.abs(), "s={s}: {em} vs {acc}");
        }
    }

    #[test]
    fn gamma_ratio_edge_point() {
        // L(0)/L(1) = (k-1)/(2 pi^2), exactly, for every weight
        for k in [12u32, 20, 36] {
            let want = (k as f64 - 1.0) / (2.0 * PI * PI);
            assert!((sym2_gamma_ratio(k, 1) - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn a1_table_matches_direct() {
        let forms = eigenforms_for_weight(12).unwrap();
        let f = &forms[0];
        let a1 = sym2_a1_table(f, 60).unwrap();
        for n in 1..=60u64 {
            let direct = crate::hecke::gl3_coeff(f, n, 1).unwrap();
            assert!((a1[n as usize] - direct).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn edge_value_positive_and_scale_stable() {
        let forms = eigenforms_with_budget(12, 20_000).unwrap();
        let f = &forms[0];
        let v1 = edge_sym2(f, 200.0).unwrap();
        let v2 = edge_sym2(f, 800.0).unwrap();
        assert!(v1.value > 0.0);
        assert!(
            (v1.value - v2.value).abs() < 1e-8,
            "{} vs {}",
            v1.value,
            v2.value
        );
        // default-budget forms agree with the large-budget computation
        let small = eigenforms_for_weight(12).unwrap();
        let v3 = edge_sym2_default(&small[0]).unwrap();
        assert!((v3.value - v2.value).abs() < 1e-8);
    }

    #[test]
    fn edge_positivity_all_weights() {
        for k in (12..=40).step_by(2) {
            if crate::hecke::dim_cusp(k) == 0 {
                continue;
            }
            for f in eigenforms_for_weight(k).unwrap().iter() {
                assert!(edge_sym2_default(f).unwrap().value > 0.0, "k={k}");
            }
        }
    }

    #[test]
    fn edge_trivial_check_at_s2() {
        // in the absolutely convergent regime a huge smoothing scale is
        // indistinguishable from the sharp truncation
        let forms = eigenforms_for_weight(12).unwrap();
        let a1 = sym2_a1_table(&forms[0], 4000).unwrap();
        let (mut smoothed, mut sharp) = (0.0, 0.0);
        for n in 1..=4000usize {
            let nf = n as f64;
            sharp += a1[n] / (nf * nf);
            smoothed += a1[n] / (nf * nf) * (-nf / 1e9).exp();
        }
        assert!((smoothed - sharp).abs() < 1e-8);
    }

    #[test]
    fn inverse_leading_term_and_product() {
        let forms = eigenforms_with_budget(12, 20_000).unwrap();
        let f = &forms[0];
        let inv = edge_sym2_inverse(f, 10_000.0).unwrap();
        assert!(inv.truncation > 1000);
        let edge = edge_sym2(f, 10_000.0).unwrap();
        let product = edge.value * inv.value;
        assert!((product - 1.0).abs() < 1e-2, "product = {product}");
    }

    #[test]
    fn sym2_l_consistent_between_routes() {
        let forms = eigenforms_with_budget(12, 20_000).unwrap();
        let f = &forms[0];
        // at s = 3 the smoothed-correction machinery is bypassed; check
        // the s = 2 smoothed value against a long sharp sum
        let smoothed = sym2_l(f, 2.0).unwrap();
        let sharp = sym2_l_sharp(f, 2.0, 20_000).unwrap();
        assert!(
            (smoothed - sharp).abs() < 1e-4,
            "{smoothed} vs {sharp}"
        );
    }

    #[test]
    fn central_g_real_and_dual_oracle() {
        let gs = eigenforms_for_weight(24).unwrap();
        let v = central_value_g(&gs[0], 12).unwrap();
        assert!(v.value.is_finite());
        let dual = central_value_g_oracle(&gs[0], 12).unwrap();
        assert!((v.value - dual).abs() < 1e-6, "{} vs {dual}", v.value);
        // doubling the truncation moves the value by less than the
        // recorded tail bound
        let v2 = central_value_g_with_m(&gs[0], 12, 960).unwrap();
        assert!((v.value - v2.value).abs() <= v.tail_bound.max(1e-12));
    }

    #[test]
    fn central_sym2xg_dual_oracle() {
        let n2 = 40 * 144;
        let fs = eigenforms_with_budget(12, n2).unwrap();
        let gs = eigenforms_with_budget(24, n2).unwrap();
        let v = central_value_sym2xg(&fs[0], &gs[0]).unwrap();
        assert!(v.value.is_finite());
        let dual = central_value_sym2xg_oracle(&fs[0], &gs[0]).unwrap();
        assert!((v.value - dual).abs() < 1e-5, "{} vs {dual}", v.value);
    }

    #[test]
    fn gl3_symmetry() {
        let forms = eigenforms_for_weight(12).unwrap();
        let f = &forms[0];
        for (n, r) in [(4u64, 6u64), (9, 3), (12, 8), (5, 7)] {
            let a = crate::hecke::gl3_coeff(f, n, r).unwrap();
            let b = crate::hecke::gl3_coeff(f, r, n).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_identity_at_2_2() {
        let forms = eigenforms_with_budget(12, 20_000).unwrap();
        let f = &forms[0];
        let r1 = bump_check(f, 2.0, 2.0, 10_000).unwrap();
        assert!(r1.gap <= 1e-6, "gap = {}", r1.gap);
        let r2 = bump_check(f, 2.0, 2.0, 20_000).unwrap();
        assert!(r1.gap / r2.gap >= 1.5, "{} -> {}", r1.gap, r2.gap);
        // s, w large: only (n, r) = (1, 1) survives
        let r8 = bump_check(f, 8.0, 8.0, 2000).unwrap();
        assert!((r8.lhs - 1.0).abs() < 1e-2 && (r8.rhs - 1.0).abs() < 1e-2);
        assert!(bump_check(f, 1.0, 2.0, 100).is_err());
    }

    #[test]
    fn main_term_runs_and_is_close() {
        let forms = eigenforms_for_weight(12).unwrap();
        let rep = main_term_sum(&forms[0]).unwrap();
        assert!(rep.sum.is_finite() && rep.target > 0.0);
        // the paper-scale error at k = 12 is O(k^{-1/2}) ~ 0.3
        assert!(rep.gap < 1.0, "gap = {}", rep.gap);
    }
}
