//! Elementary arithmetic functions: divisor count/power sums, Moebius,
//! gcd/modular inverses and a small prime sieve. All exact, by trial
//! factorization; inputs stay far below the range where that matters.

/// Factor `n` into (prime, exponent) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of divisors tau(n).
pub fn tau(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Moebius function mu(n): 0 on square divisors, else (-1)^{#primes}.
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Divisor power sum sigma_k(n) = sum_{d|n} d^k.
pub fn sigma(k: u32, n: u64) -> u128 {
    let mut s: u128 = 0;
    for d in divisors(n) {
        s += (d as u128).pow(k);
    }
    s
}

/// All divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of three values, used by the Weil bound (n, m, c).
pub fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    gcd(gcd(a, b), c)
}

/// Modular inverse of a mod m, when gcd(a, m) = 1.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Euclid-style reduction of any integer into [0, m).
pub fn reduce_mod(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Primes up to and including `limit`, by Eratosthenes.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut is_comp = vec![false; limit + 1];
    let mut out = Vec::new();
    for p in 2..=limit {
        if !is_comp[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= limit {
                is_comp[q] = true;
                q += p;
            }
        }
    }
    out
}

/// Smallest-prime-factor table up to `limit`, for fast repeated factoring.
pub fn moebius_table(limit: usize) -> Vec<i8> {
    let spf = spf_table(limit);
    let mut mu = vec![0i8; limit + 1];
    if limit >= 1 {
        mu[1] = 1;
    }
    for n in 2..=limit {
        let p = spf[n] as usize;
        let m = n / p;
        mu[n] = if m % p == 0 { 0 } else { -mu[m] };
    }
    mu
}

pub fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = (0..=limit as u32).collect();
    let mut p = 2usize;
    while p * p <= limit {
        if spf[p] == p as u32 {
            let mut q = p * p;
            while q <= limit {
                if spf[q] == q as u32 {
                    spf[q] = p as u32;
                }
                q += p;
            }
        }
        p += 1;
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_small() {
        // divisors of 4 are 1, 2, 4
        assert_eq!(tau(4), 3);
        assert_eq!(tau(1), 1);
        assert_eq!(tau(12), 6);
        assert_eq!(tau(36), 9);
    }

    #[test]
    fn moebius_small() {
        assert_eq!(moebius(12), 0); // 4 | 12
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(2), -1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn sigma_small() {
        assert_eq!(sigma(3, 2), 9); // 1 + 8
        assert_eq!(sigma(1, 6), 12);
        assert_eq!(sigma(0, 8), 4);
        // sigma_3 oracle by direct divisor enumeration
        for n in 1..=50u64 {
            let direct: u128 = (1..=n).filter(|d| n % d == 0).map(|d| (d as u128).pow(3)).sum();
            assert_eq!(sigma(3, n), direct);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for m in 2..200u64 {
            for a in 1..m {
                if gcd(a, m) == 1 {
                    let inv = mod_inv(a, m).unwrap();
                    assert_eq!(a * inv % m, 1 % m, "a={a} m={m}");
                } else {
                    assert!(mod_inv(a, m).is_none());
                }
            }
        }
    }

    #[test]
    fn primes_and_spf_agree() {
        let ps = primes_up_to(1000);
        assert_eq!(ps.len(), 168);
        let spf = spf_table(1000);
        for p in &ps {
            assert_eq!(spf[*p as usize] as u64, *p);
        }
        assert_eq!(spf[91], 7);
    }
}
