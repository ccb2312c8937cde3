//! Poisson-summation comparator: for a c-periodic arithmetic function S
//! and a smooth bump Psi supported in (1, 2), the smoothed sum
//! sum_n S(n) Psi(n/N) equals Psihat(0) * (N/c) * sum_{a mod c} S(a)
//! up to an error decaying faster than any power of N.

use num_complex::Complex64;

/// Smooth bump on (1, 2): exp(-1/(u-1) - 1/(2-u)), scaled to peak 1
/// at u = 3/2. Vanishes to all orders at both endpoints.
pub fn bump(u: f64) -> f64 {
    if u <= 1.0 || u >= 2.0 {
        return 0.0;
    }
    (4.0 - 1.0 / (u - 1.0) - 1.0 / (2.0 - u)).exp()
}

/// Integral over [1, 2] of a smooth function vanishing to all orders at
/// the endpoints; the trapezoid rule converges super-algebraically here,
/// so we double the grid until the value stabilizes.
pub fn flat_integral(f: impl Fn(f64) -> f64) -> f64 {
    let mut m = 16usize;
    let mut prev = f64::NAN;
    loop {
        let h = 1.0 / m as f64;
        let mut s = 0.0;
        for i in 1..m {
            s += f(1.0 + i as f64 * h);
        }
        let cur = s * h; // endpoint terms vanish
        if (cur - prev).abs() <= 1e-14 * cur.abs().max(1e-300) || m >= 1 << 22 {
            return cur;
        }
        prev = cur;
        m *= 2;
    }
}

/// Result of [`poisson_compare`].
#[derive(Debug, Clone, Copy)]
pub struct PoissonComparison {
    pub direct: Complex64,
    pub main: Complex64,
    pub error: f64,
}

/// Compare the smoothed sum of a c-periodic function against its
/// Poisson main term. `s` is evaluated at integers (only its residue
/// mod c matters), `psi` is a smooth bump supported in (1, 2).
pub fn poisson_compare(
    s: impl Fn(u64) -> Complex64,
    psi: impl Fn(f64) -> f64 + Copy,
    n_scale: u64,
    c: u64,
) -> PoissonComparison {
    assert!(n_scale >= 1 && c >= 1);
    let mut direct = Complex64::new(0.0, 0.0);
    for n in n_scale..=2 * n_scale {
        let w = psi(n as f64 / n_scale as f64);
        if w != 0.0 {
            direct += s(n) * w;
        }
    }
    let psi_hat0 = flat_integral(psi);
    let mut residue_sum = Complex64::new(0.0, 0.0);
    for a in 0..c {
        residue_sum += s(a);
    }
    let main = residue_sum * (psi_hat0 * n_scale as f64 / c as f64);
    PoissonComparison {
        direct,
        main,
        error: (direct - main).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::{e, kloosterman};

    #[test]
    fn bump_shape() {
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(2.0), 0.0);
        assert!((bump(1.5) - 1.0).abs() < 1e-15);
        assert!(bump(1.2) > 0.0 && bump(1.2) < 1.0);
    }

    #[test]
    fn constant_function_matches_integral() {
        let r = poisson_compare(|_| Complex64::new(1.0, 0.0), bump, 1000, 1);
        assert!(r.error <= 1e-9, "error = {}", r.error);
    }

    #[test]
    fn additive_character_cancels() {
        let c = 7u64;
        let r = poisson_compare(|n| e((n % c) as f64 / c as f64), bump, 1000, c);
        assert!(r.main.norm() <= 1e-12, "main = {}", r.main);
        assert!(r.direct.norm() <= 1e-9, "direct = {}", r.direct);
    }

    #[test]
    fn kloosterman_valued_function() {
        let c = 7u64;
        let vals: Vec<f64> = (0..c)
            .map(|a| kloosterman((a * a % c) as i64, 1, c))
            .collect();
        let r = poisson_compare(
            |n| Complex64::new(vals[(n % c) as usize], 0.0),
            bump,
            2000,
            c,
        );
        assert!(r.error <= 1e-9, "error = {}", r.error);
    }
}
