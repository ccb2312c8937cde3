//! Exact q-expansions with rational coefficients: arithmetic is exact
//! on all retained coefficients, and products of series with
//! truncations N1, N2 retain min(N1, N2) terms.

use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// A modular form's q-expansion sum c(n) q^n, truncated after N terms.
#[derive(Debug, Clone, PartialEq)]
pub struct QSeries {
    pub weight: u32,
    /// coeffs[n] = c(n) for 0 <= n <= truncation
    pub coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(weight: u32, coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        Self { weight, coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        assert_eq!(self.weight, other.weight, "weights must match to add");
        let n = self.truncation().min(other.truncation());
        let coeffs = (0..=n)
            .map(|i| Rational::from(&self.coeffs[i] + &other.coeffs[i]))
            .collect();
        QSeries::new(self.weight, coeffs)
    }

    pub fn scale(&self, r: &Rational) -> QSeries {
        let coeffs = self.coeffs.iter().map(|c| Rational::from(c * r)).collect();
        QSeries::new(self.weight, coeffs)
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.truncation().min(other.truncation());
        let mut coeffs = vec![Rational::new(); n + 1];
        for i in 0..=n {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j] != 0 {
                    coeffs[i + j] += Rational::from(&self.coeffs[i] * &other.coeffs[j]);
                }
            }
        }
        QSeries::new(self.weight + other.weight, coeffs)
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::new(0, {
            let mut v = vec![Rational::new(); self.truncation() + 1];
            v[0] = Rational::from(1);
            v
        });
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc
    }
}

/// Bernoulli number B_n (B_1 = -1/2 convention), by the standard
/// recurrence sum_{j<=m} C(m+1, j) B_j = 0.
pub fn bernoulli(n: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let mut s = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            s += bj * Rational::from(Integer::from(m + 1).binomial(j as u32));
        }
        let bm = if m == 0 {
            Rational::from(1)
        } else {
            -s / Rational::from(m + 1)
        };
        b.push(bm);
    }
    b.pop().unwrap()
}

/// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
pub fn eisenstein(k: u32, n_trunc: usize) -> Result<QSeries> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::invalid(format!(
            "Eisenstein series requires even weight >= 4, got {k}"
        )));
    }
    let factor = Rational::from(-2 * k as i64) / bernoulli(k);
    let mut coeffs = vec![Rational::new(); n_trunc + 1];
    coeffs[0] = Rational::from(1);
    for n in 1..=n_trunc as u64 {
        let mut s = Integer::new();
        for d in crate::arith::divisors(n) {
            s += Integer::from(d).pow(k - 1);
        }
        coeffs[n as usize] = Rational::from(&factor * Rational::from(s));
    }
    Ok(QSeries::new(k, coeffs))
}

/// Euler's product prod (1 - q^n), expanded by the pentagonal number
/// theorem: sum_j (-1)^j q^{j(3j-1)/2}.
pub fn euler_product(n_trunc: usize) -> Vec<Integer> {
    let mut coeffs = vec![Integer::new(); n_trunc + 1];
    let mut j: i64 = 0;
    loop {
        let mut hit = false;
        for jj in [j, -j] {
            let e = jj * (3 * jj - 1) / 2;
            if e >= 0 && (e as usize) <= n_trunc {
                hit = true;
                coeffs[e as usize] += if jj.rem_euclid(2) == 0 { 1 } else { -1 };
            }
            if j == 0 {
                break;
            }
        }
        if !hit && j > 0 {
            break;
        }
        j += 1;
    }
    coeffs
}

/// The discriminant form Delta = q prod (1 - q^n)^24, weight 12.
pub fn delta(n_trunc: usize) -> QSeries {
    let p = euler_product(n_trunc);
    let mul = |a: &[Integer], b: &[Integer]| -> Vec<Integer> {
        let n = n_trunc;
        let mut out = vec![Integer::new(); n + 1];
        for i in 0..=n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..=n - i {
                if b[j] != 0 {
                    out[i + j] += Integer::from(&a[i] * &b[j]);
                }
            }
        }
        out
    };
    let p2 = mul(&p, &p);
    let p4 = mul(&p2, &p2);
    let p8 = mul(&p4, &p4);
    let p16 = mul(&p8, &p8);
    let p24 = mul(&p16, &p8);
    let mut coeffs = vec![Rational::new(); n_trunc + 1];
    for n in 1..=n_trunc {
        coeffs[n] = Rational::from(p24[n - 1].clone());
    }
    QSeries::new(12, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(6), Rational::from((1, 42)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }

    #[test]
    fn eisenstein_examples() {
        let e4 = eisenstein(4, 2).unwrap();
        let want: Vec<Rational> = vec![1.into(), 240.into(), 2160.into()];
        assert_eq!(e4.coeffs, want);
        let e6 = eisenstein(6, 1).unwrap();
        let want: Vec<Rational> = vec![1.into(), (-504).into()];
        assert_eq!(e6.coeffs, want);
        for k in [8u32, 10, 14, 16] {
            assert_eq!(*eisenstein(k, 3).unwrap().coeff(0), 1);
        }
        assert!(eisenstein(5, 3).is_err());
        assert!(eisenstein(2, 3).is_err());
    }

    #[test]
    fn delta_tau_values() {
        let d = delta(6);
        let tau: Vec<i64> = [1i64, -24, 252, -1472, 4830, -6048]
            .iter()
            .copied()
            .collect();
        for (n, t) in tau.iter().enumerate() {
            assert_eq!(*d.coeff(n + 1), *t);
        }
        assert_eq!(*d.coeff(0), 0);
    }

    #[test]
    fn delta_from_eisenstein_identity() {
        // Delta = (E4^3 - E6^2) / 1728, checked exactly to 30 terms
        let n = 30;
        let e4 = eisenstein(4, n).unwrap();
        let e6 = eisenstein(6, n).unwrap();
        let diff = e4.pow(3).add(&e6.pow(2).scale(&Rational::from(-1)));
        let d = diff.scale(&Rational::from((1, 1728)));
        assert_eq!(d.coeffs, delta(n).coeffs);
        assert_eq!(d.weight, 12);
    }

    #[test]
    fn mul_truncation_rule() {
        let a = eisenstein(4, 10).unwrap();
        let b = eisenstein(6, 7).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.truncation(), 7);
        assert_eq!(p.weight, 10);
        // exactness on retained range: compare against wider product
        let wide = eisenstein(4, 20).unwrap().mul(&eisenstein(6, 20).unwrap());
        assert_eq!(&wide.coeffs[..=7], &p.coeffs[..]);
    }
}
