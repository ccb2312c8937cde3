//! Principal-branch log-gamma via Stirling's series with upward shifts,
//! and reflection for Re s < 1/2. All completed-L-factor arithmetic
//! goes through log differences, never raw Gamma values.

use crate::{Error, Result};
use num_complex::Complex64;

/// Stirling tail coefficients B_{2n} / (2n (2n-1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

const LN_2PI_HALF: f64 = 0.918938533204672741780329736406; // ln(2 pi)/2

fn stirling(s: Complex64) -> Complex64 {
    let mut acc = (s - 0.5) * s.ln() - s + LN_2PI_HALF;
    let inv2 = 1.0 / (s * s);
    let mut pw = 1.0 / s;
    for c in STIRLING {
        acc += pw * c;
        pw *= inv2;
    }
    acc
}

/// log Gamma(s), principal branch; relative error below 1e-12 for
/// Re s >= 1/2, reflection formula otherwise.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re <= 0.0 && (s.re - s.re.round()).abs() < 1e-12 {
        return Err(Error::invalid(format!(
            "log_gamma pole at non-positive integer {}",
            s.re
        )));
    }
    if s.re < 0.5 {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        let pi = std::f64::consts::PI;
        let refl = Complex64::new(pi, 0.0).ln() - (s * pi).sin().ln();
        return Ok(refl - log_gamma(Complex64::new(1.0, 0.0) - s)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut z = s;
    while z.norm() < 12.0 {
        shift += z.ln();
        z += 1.0;
    }
    Ok(stirling(z) - shift)
}

/// log Gamma(x) for real x > 0.
pub fn log_gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::invalid(format!("log_gamma_real needs x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}
