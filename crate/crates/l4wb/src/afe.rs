//! Approximate-functional-equation machinery: completed-L-factor
//! ratios and the cutoff weights V_{k,j}, computed as truncated
//! contour integrals with all Gamma arithmetic in log space.
//!
//! With Lambda_{k,1}(s) = (2 pi)^{-s} Gamma(s + k - 1/2) and
//! Lambda_{k,2}(s) = 8 (2 pi)^{-3s-3k+3/2} Gamma(s+2k-3/2)
//! Gamma(s+k-1/2) Gamma(s+1/2), the ratios at 1/2 + s reduce to
//!   j=1: (2 pi)^{-s}  Gamma(s+k) / Gamma(k)
//!   j=2: (2 pi)^{-3s} Gamma(s+2k-1) Gamma(s+k) Gamma(s+1)
//!         / (Gamma(2k-1) Gamma(k))
//! and the constant prefactor of Lambda_{k,2} cancels entirely.

use crate::gamma::log_gamma;
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

const LN_2PI: f64 = 1.837877066409345483560659472811;

/// Lambda_{k,j}(1/2 + s) / Lambda_{k,j}(1/2) via log-gamma differences.
pub fn lambda_ratio(k: u32, j: u8, s: Complex64) -> Result<Complex64> {
    if !(12..=100).contains(&k) || !(j == 1 || j == 2) {
        return Err(Error::invalid(format!("lambda_ratio: bad (k,j)=({k},{j})")));
    }
    let kf = k as f64;
    let log = match j {
        1 => {
            log_gamma(s + kf)? - log_gamma(Complex64::new(kf, 0.0))? - s * LN_2PI
        }
        _ => {
            log_gamma(s + (2.0 * kf - 1.0))? + log_gamma(s + kf)? + log_gamma(s + 1.0)?
                - log_gamma(Complex64::new(2.0 * kf - 1.0, 0.0))?
                - log_gamma(Complex64::new(kf, 0.0))?
                - s * (3.0 * LN_2PI)
        }
    };
    Ok(log.exp())
}

/// Precomputed contour data for V_{k,j}: samples of
/// ratio(sigma + i t) / (sigma + i t) on a uniform t-grid, so that each
/// evaluation V(xi) is a single weighted sum of phases xi^{-i t}.
#[derive(Debug, Clone)]
pub struct AFEWeights {
    pub k: u32,
    pub j: u8,
    pub sigma: f64,
    pub t_max: f64,
    pub step: f64,
    /// nodes[m] = ratio(sigma + i m step) / (sigma + i m step)
    nodes: Vec<Complex64>,
}

impl AFEWeights {
    pub fn new(k: u32, j: u8) -> Result<Self> {
        Self::with_sigma(k, j, 1.5)
    }

    pub fn with_sigma(k: u32, j: u8, sigma: f64) -> Result<Self> {
        Self::build(k, j, sigma, false)
    }

    /// Same contour integral with the even entire damping factor
    /// e^{s^2/4} inserted (value 1 at s=0, so the residue is
    /// unchanged). The resulting cutoff weight is a genuinely different
    /// smoothing of the same central value, used as an independent
    /// cross-check; its tail decays like e^{-ln^2 xi}, which the
    /// truncation ranges must respect.
    pub fn gaussian(k: u32, j: u8) -> Result<Self> {
        Self::build(k, j, 1.5, true)
    }

    fn build(k: u32, j: u8, sigma: f64, gaussian: bool) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::invalid("contour abscissa must be positive"));
        }
        let t_max = 30.0 + 10.0 * (k as f64).ln();
        let step = 0.02;
        let n = (t_max / step).ceil() as usize;
        let mut nodes = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let s = Complex64::new(sigma, m as f64 * step);
            let mut node = lambda_ratio(k, j, s)? / s;
            if gaussian {
                node *= (s * s * 0.25).exp();
            }
            nodes.push(node);
        }
        // the integrand decays super-exponentially in t through the
        // Gamma factors; certify that the retained tail is negligible
        let last = nodes[n].norm();
        let prev = nodes[n - (1.0 / step) as usize].norm();
        if last > 1e-30 {
            let rate = (prev / last).ln().max(0.1);
            if last / rate > 1e-12 {
                return Err(Error::budget(format!(
                    "V_{{{k},{j}}} contour truncated at T={t_max} leaves tail ~{:.2e}",
                    last / rate
                )));
            }
        }
        Ok(Self {
            k,
            j,
            sigma,
            t_max,
            step,
            nodes,
        })
    }

    /// V_{k,j}(xi) = (1/2 pi i) int_(sigma) ratio(s) xi^{-s} ds / s,
    /// evaluated by the trapezoid rule on the symmetric contour (the
    /// integrand at -t is the conjugate of the one at t).
    pub fn eval(&self, xi: f64) -> f64 {
        assert!(xi > 0.0, "V_{{k,j}} requires xi > 0");
        let lx = xi.ln();
        // phase rotation per node: xi^{-i t} = e^{-i t ln xi}
        let rot = Complex64::new(0.0, -self.step * lx).exp();
        let mut phase = Complex64::new(1.0, 0.0);
        let mut sum = 0.5 * self.nodes[0].re;
        for node in &self.nodes[1..] {
            phase *= rot;
            sum += (node * phase).re;
        }
        sum * self.step / std::f64::consts::PI * xi.powf(-self.sigma)
    }
}

type VKey = (u32, u8);
static V_CACHE: OnceLock<Mutex<HashMap<VKey, Arc<AFEWeights>>>> = OnceLock::new();

/// Shared default-contour weights for (k, j).
pub fn afe_weights(k: u32, j: u8) -> Result<Arc<AFEWeights>> {
    let cache = V_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    if let Some(w) = map.get(&(k, j)) {
        return Ok(Arc::clone(w));
    }
    let w = Arc::new(AFEWeights::new(k, j)?);
    map.insert((k, j), Arc::clone(&w));
    Ok(w)
}

/// The cutoff weight V_{k,j}(xi) at the default contour.
pub fn v_weight(k: u32, j: u8, xi: f64) -> Result<f64> {
    Ok(afe_weights(k, j)?.eval(xi))
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a),
/// the closed form of V_{k,1}: V_{k,1}(xi) = Q(k, 2 pi xi).
pub fn reg_gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    let lg = crate::gamma::log_gamma_real(a).unwrap();
    let lpre = a * x.ln() - x - lg;
    if x < a + 1.0 {
        // lower series P(a,x), Q = 1 - P
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = 1.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= x / (a + n);
            sum += term;
            n += 1.0;
        }
        1.0 - lpre.exp() * sum
    } else {
        // continued fraction for Q (modified Lentz)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        lpre.exp() * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_examples() {
        // coincident points
        for (k, j) in [(12u32, 1u8), (12, 2), (40, 1), (40, 2)] {
            let r = lambda_ratio(k, j, Complex64::new(0.0, 0.0)).unwrap();
            assert!((r - 1.0).norm() < 1e-13, "k={k} j={j}");
        }
        // exact shift: ratio(2) = (2 pi)^{-2} (k+1) k for j=1
        let r = lambda_ratio(12, 1, Complex64::new(2.0, 0.0)).unwrap();
        let want = (2.0 * std::f64::consts::PI).powi(-2) * 13.0 * 12.0;
        assert!((r.re - want).abs() < 1e-12 * want && r.im.abs() < 1e-12);
        // growth on Re s = A stays under C k^{jA}
        for k in [12u32, 24, 40] {
            for j in [1u8, 2] {
                for t in [0.0, 3.0, 11.0] {
                    let a = 2.0;
                    let r = lambda_ratio(k, j, Complex64::new(a, t)).unwrap();
                    let cap = 2.0 * (k as f64).powf(j as f64 * a);
                    assert!(r.norm() <= cap, "k={k} j={j} t={t}: {} > {cap}", r.norm());
                }
            }
        }
    }

    #[test]
    fn v1_matches_incomplete_gamma() {
        // V_{k,1}(xi) = Q(k, 2 pi xi): independent closed-form oracle
        for k in [12u32, 20, 40] {
            let w = AFEWeights::new(k, 1).unwrap();
            for xi in [0.1, 1.0, 2.0, (k as f64) / 6.28, k as f64, 3.0 * k as f64] {
                let v = w.eval(xi);
                let q = reg_gamma_q(k as f64, 2.0 * std::f64::consts::PI * xi);
                assert!((v - q).abs() < 1e-9, "k={k} xi={xi}: v={v} q={q}");
            }
        }
    }

    #[test]
    fn v_small_and_large_xi() {
        let w = AFEWeights::new(12, 1).unwrap();
        assert!((w.eval(1e-6) - 1.0).abs() < 1e-4);
        assert!(w.eval(1e4).abs() < 1e-6);
        let w2 = AFEWeights::new(12, 2).unwrap();
        assert!((w2.eval(1e-6) - 1.0).abs() < 1e-4);
        assert!(w2.eval(1e6).abs() < 1e-6);
    }

    #[test]
    fn sigma_invariance() {
        for j in [1u8, 2] {
            let a = AFEWeights::with_sigma(16, j, 0.5).unwrap();
            let b = AFEWeights::with_sigma(16, j, 1.5).unwrap();
            let c = AFEWeights::with_sigma(16, j, 3.0).unwrap();
            for xi in [0.5, 3.0, 16.0, 160.0, 2000.0] {
                let (va, vb, vc) = (a.eval(xi), b.eval(xi), c.eval(xi));
                assert!((va - vb).abs() < 1e-8, "j={j} xi={xi}: {va} vs {vb}");
                assert!((vc - vb).abs() < 1e-8, "j={j} xi={xi}: {vc} vs {vb}");
            }
        }
    }

    #[test]
    fn vbound_decay_profile() {
        // xi -> V_{k,j}(xi) (1 + xi/k^j)^3 bounded by a pinned constant
        for (k, j) in [(12u32, 1u8), (12, 2), (36, 1), (36, 2)] {
            let w = AFEWeights::new(k, j).unwrap();
            let kj = (k as f64).powi(j as i32);
            let mut i = 0;
            while (1.4f64).powi(i) <= 100.0 * kj {
                let xi = (1.4f64).powi(i);
                let val = w.eval(xi).abs() * (1.0 + xi / kj).powi(3);
                assert!(val <= 60.0, "k={k} j={j} xi={xi}: {val}");
                i += 1;
            }
        }
    }

    #[test]
    fn incomplete_gamma_sanity() {
        // Q(1, x) = e^{-x}
        for x in [0.1, 1.0, 5.0, 30.0] {
            assert!((reg_gamma_q(1.0, x) - (-x).exp()).abs() < 1e-14);
        }
        // Q(2, x) = (1 + x) e^{-x}
        for x in [0.5, 2.0, 10.0] {
            assert!((reg_gamma_q(2.0, x) - (1.0 + x) * (-x).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn shared_cache() {
        let a = afe_weights(18, 2).unwrap();
        let b = afe_weights(18, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert!((v_weight(18, 2, 1.0).unwrap() - a.eval(1.0)).abs() == 0.0);
    }
}
