//! J-Bessel functions of integer order. `bessel_j` dispatches over
//! three regimes (power series, oscillatory quadrature, uniform
//! asymptotic past the turning point); `bessel_j_orders` produces all
//! orders at a fixed argument by downward (Miller) recurrence, which is
//! what the averaging routines use.

use crate::gamma::log_gamma_real;

/// Certified small-argument bound |J_l(x)| <= (x/2)^l / l!.
pub fn bessel_j_small_bound(ell: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    let log = ell as f64 * (x / 2.0).ln() - log_gamma_real(ell as f64 + 1.0).unwrap();
    log.exp()
}

/// Ascending series; all terms decrease in magnitude when x^2/4 < l+1,
/// so we only use it for x <= sqrt(l) (and for small l where it still
/// converges without cancellation growth).
fn series(ell: u32, x: f64) -> f64 {
    let l = ell as f64;
    let log_pref = l * (x / 2.0).ln() - log_gamma_real(l + 1.0).unwrap();
    if log_pref < -745.0 {
        return 0.0;
    }
    let pref = log_pref.exp();
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..400 {
        term *= -q / (m as f64 * (l + m as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    pref * sum
}

/// Bessel's integral J_l(x) = (1/pi) int_0^pi cos(l t - x sin t) dt,
/// exact for integer l. The integrand extends to an even 2pi-periodic
/// function, so the trapezoid rule converges spectrally; we take at
/// least 20 nodes per oscillation of the phase.
fn quadrature(ell: u32, x: f64) -> f64 {
    let l = ell as f64;
    let n = (10.0 * (l + x)).ceil().max(256.0) as usize;
    let h = std::f64::consts::PI / n as f64;
    // endpoints: g(0) = 1, g(pi) = cos(l pi) = (-1)^l
    let mut sum = 0.5 * (1.0 + if ell % 2 == 0 { 1.0 } else { -1.0 });
    for i in 1..n {
        let t = i as f64 * h;
        sum += (l * t - x * t.sin()).cos();
    }
    sum * h / std::f64::consts::PI
}

/// First correction polynomial in the uniform (Debye) expansion,
/// u1(t) = (3t - 5t^3)/24.
fn debye_u1(t: f64) -> f64 {
    (3.0 * t - 5.0 * t.powi(3)) / 24.0
}

/// Uniform asymptotic form past the turning point: with
/// w = sqrt(x^2/l^2 - 1) and z = l (w - arctan w),
/// J_l(x) ~ sqrt(2/(pi l w)) (cos(z - pi/4) + u1(1/w)/l sin(z - pi/4)).
/// The correction sign matches the large-x expansion
/// J_l(x) ~ sqrt(2/(pi x)) (cos w0 - (4l^2-1)/(8x) sin w0).
fn langer(ell: u32, x: f64) -> f64 {
    let l = ell as f64;
    let r = x / l;
    let w = (r * r - 1.0).sqrt();
    let z = l * (w - w.atan());
    let amp = (2.0 / (std::f64::consts::PI * l * w)).sqrt();
    let phase = z - std::f64::consts::FRAC_PI_4;
    amp * (phase.cos() + debye_u1(1.0 / w) / l * phase.sin())
}

/// J_l(x) for integer order l >= 0 and x >= 0.
pub fn bessel_j(ell: u32, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_j requires x >= 0");
    if x == 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    let l = ell as f64;
    if x * x <= l.max(25.0) {
        series(ell, x)
    } else if ell < 20 || x < l * (1.0 + l.powf(-1.0 / 3.0)) {
        // low orders stay on the (spectrally accurate) quadrature; the
        // uniform asymptotic only takes over for large orders past the
        // turning point, where its error is O(l^{-4/3})
        quadrature(ell, x)
    } else {
        langer(ell, x)
    }
}

/// All of J_0(x) .. J_{max_order}(x) by downward recurrence with
/// normalization J_0 + 2 sum_{m>=1} J_{2m} = 1.
pub fn bessel_j_orders(x: f64, max_order: usize) -> Vec<f64> {
    assert!(x >= 0.0, "bessel_j_orders requires x >= 0");
    let mut out = vec![0.0; max_order + 1];
    if x < 1e-300 {
        out[0] = 1.0;
        return out;
    }
    // start well above both the top requested order and the turning point
    let start = {
        let base = max_order.max(x.ceil() as usize);
        let pad = (15.0 * x.powf(1.0 / 3.0)) as usize + 40;
        let m = base + pad;
        m + (m & 1) // even
    };
    let mut jp1 = 0.0f64; // J_{m+1} (unnormalized)
    let mut jm = 1e-280f64; // J_m
    let mut norm = 0.0f64; // accumulates J_0 + 2 sum J_{2m}
    let mut m = start;
    loop {
        if m <= max_order {
            out[m] = jm;
        }
        if m == 0 {
            norm += jm;
            break;
        }
        if m % 2 == 0 {
            norm += 2.0 * jm;
        }
        let jm1 = (2.0 * m as f64 / x) * jm - jp1;
        jp1 = jm;
        jm = jm1;
        m -= 1;
        if jm.abs() > 1e250 {
            let scale = 1e-250;
            jm *= scale;
            jp1 *= scale;
            norm *= scale;
            for v in out.iter_mut() {
                *v *= scale;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
