//! Kloosterman sums S(n, m; c) = sum over units b mod c of
//! e((nb + m b^{-1})/c), by direct enumeration of units with
//! extended-gcd inverses. O(c) per sum; correctness over speed.

use crate::arith::{gcd, gcd3, mod_inv, reduce_mod, tau};
use crate::{Error, Result};
use num_complex::Complex64;

/// e(x) = exp(2 pi i x).
pub fn e(x: f64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * x;
    Complex64::new(t.cos(), t.sin())
}

/// Units mod c with their inverses, for reuse across many sums at fixed c.
pub struct UnitTable {
    pub c: u64,
    pub units: Vec<(u64, u64)>,
}

impl UnitTable {
    pub fn new(c: u64) -> Self {
        assert!(c >= 1);
        let mut units = Vec::new();
        if c == 1 {
            // single trivial residue; empty-condition sum is e(0) = 1
            units.push((0, 0));
        } else {
            for b in 1..c {
                if gcd(b, c) == 1 {
                    units.push((b, mod_inv(b, c).expect("unit has inverse")));
                }
            }
        }
        Self { c, units }
    }

    /// S(n, m; c) as a complex number (imaginary part is numerical noise).
    pub fn sum(&self, n: i64, m: i64) -> Complex64 {
        let c = self.c;
        if c == 1 {
            return Complex64::new(1.0, 0.0);
        }
        let nr = reduce_mod(n, c);
        let mr = reduce_mod(m, c);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(b, binv) in &self.units {
            let r = (nr as u128 * b as u128 + mr as u128 * binv as u128) % c as u128;
            acc += e(r as f64 / c as f64);
        }
        acc
    }
}

/// Complex-valued S(n, m; c); used internally where phases recombine.
pub fn kloosterman_complex(n: i64, m: i64, c: u64) -> Complex64 {
    UnitTable::new(c).sum(n, m)
}

/// S(n, m; c), returned as its real part.
///
/// The sum is real (b -> -b pairs conjugate terms); the imaginary part
/// must stay below 1e-10 * max(1, sqrt(c)) and is asserted to.
pub fn kloosterman(n: i64, m: i64, c: u64) -> f64 {
    let s = kloosterman_complex(n, m, c);
    debug_assert!(
        s.im.abs() <= 1e-10 * (c as f64).sqrt().max(1.0),
        "S({n},{m};{c}) imaginary part {} too large",
        s.im
    );
    s.re
}

/// Split S(n, m; c1 c2) along coprime moduli:
/// returns (S(n, m c2bar^2; c1), S(n, m c1bar^2; c2)).
pub fn kloosterman_split(n: i64, m: i64, c1: u64, c2: u64) -> Result<(f64, f64)> {
    if gcd(c1, c2) != 1 {
        return Err(Error::invalid(format!(
            "kloosterman_split requires coprime moduli, got ({c1}, {c2})"
        )));
    }
    let part = |ca: u64, cb: u64| -> f64 {
        if ca == 1 {
            return 1.0;
        }
        let inv = mod_inv(cb % ca, ca).expect("coprime moduli");
        let m2 = (reduce_mod(m, ca) as u128 * inv as u128 % ca as u128 * inv as u128
            % ca as u128) as i64;
        kloosterman(n, m2, ca)
    };
    Ok((part(c1, c2), part(c2, c1)))
}

/// Weil's bound: |S(n, m; c)| <= tau(c) sqrt(c) sqrt((n, m, c)).
pub fn weil_check(n: i64, m: i64, c: u64) -> bool {
    let s = kloosterman(n, m, c).abs();
    // gcd(n mod c, m mod c, c) = gcd(n, m, c), with gcd(0, x) = x
    let g = gcd3(reduce_mod(n, c), reduce_mod(m, c), c);
    s <= tau(c) as f64 * (c as f64).sqrt() * (g as f64).sqrt() + 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_modulus_is_one() {
        assert_eq!(kloosterman(1, 1, 1), 1.0);
        assert_eq!(kloosterman(7, -3, 1), 1.0);
    }

    #[test]
    fn enumeration_cases() {
        // c=3: b in {1,2}, inverses {1,2}: e(2/3) + e(4/3) = 2 cos(2pi/3) = -1
        assert!((kloosterman(1, 1, 3) + 1.0).abs() < 1e-12);
        // c=2: b=1 only: e((1+1)/2) = e(1) = 1
        assert!((kloosterman(1, 1, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_case() {
        // S(0,0;c) = phi(c)
        let phi6 = 2.0;
        assert!((kloosterman(0, 0, 6) - phi6).abs() < 1e-10);
    }

    #[test]
    fn split_multiplicativity() {
        for (c1, c2) in [(2u64, 3u64), (3, 5), (4, 9), (5, 8), (7, 11)] {
            for n in 1..=3i64 {
                for m in 1..=3i64 {
                    let (a, b) = kloosterman_split(n, m, c1, c2).unwrap();
                    let whole = kloosterman(n, m, c1 * c2);
                    assert!(
                        (a * b - whole).abs() < 1e-8,
                        "S({n},{m};{}) = {whole} vs split {a}*{b}",
                        c1 * c2
                    );
                }
            }
        }
        // unit modulus factor
        let (a, b) = kloosterman_split(2, 5, 1, 7).unwrap();
        assert_eq!(a, 1.0);
        assert!((b - kloosterman(2, 5, 7)).abs() < 1e-12);
    }

    #[test]
    fn split_rejects_common_factor() {
        assert!(kloosterman_split(1, 1, 6, 9).is_err());
    }

    #[test]
    fn symmetry_and_reality() {
        for c in 1..=60u64 {
            for n in 1..=4i64 {
                for m in 1..=4i64 {
                    let a = kloosterman_complex(n, m, c);
                    let b = kloosterman_complex(m, n, c);
                    assert!((a.re - b.re).abs() < 1e-10);
                    assert!(a.im.abs() <= 1e-10 * (c as f64).sqrt());
                }
            }
        }
    }

    #[test]
    fn weil_bound_sweep() {
        for c in 1..=500u64 {
            for n in 1..=10i64 {
                for m in 1..=10i64 {
                    assert!(weil_check(n, m, c), "Weil fails at ({n},{m},{c})");
                }
            }
        }
        assert!(weil_check(0, 0, 12));
    }
}
