//! Number-theoretic transforms over 62-bit primes p = c*2^22 + 1,
//! used to multiply long integer q-expansions in residue form; exact
//! coefficients are recovered afterwards by CRT. Also hosts the
//! deterministic Miller-Rabin test and Pollard rho factorizer the
//! prime search needs.

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b; // both < m < 2^62, no overflow
    if s >= m {
        s - m
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the twelve-base certificate).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho (Brent variant) factorization of a u64 into primes.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    fn rho(n: u64, seed: u64) -> u64 {
        let f = |x: u64| add_mod(mul_mod(x, x, n), seed, n);
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = crate::arith::gcd(x.abs_diff(y), n);
        }
        d
    }
    fn split(n: u64, out: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime_u64(n) {
            out.push(n);
            return;
        }
        let mut seed = 1;
        loop {
            let d = rho(n, seed);
            if d != n {
                split(d, out);
                split(n / d, out);
                return;
            }
            seed += 1;
        }
    }
    let mut n = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    if n > 1 {
        split(n, &mut primes);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// An NTT-friendly prime with a certified root of 2-power order.
#[derive(Debug, Clone, Copy)]
pub struct NttPrime {
    pub p: u64,
    /// element of exact multiplicative order 2^TWO_ADIC
    pub w: u64,
}

/// Every generated prime has p = c*2^22 + 1, so transforms up to
/// length 2^22 (q-expansions past 2*10^6 terms) are supported.
pub const TWO_ADIC: u32 = 22;

impl NttPrime {
    /// The `count` largest primes of the form c*2^22 + 1 below 2^62.
    pub fn generate(count: usize) -> Vec<NttPrime> {
        let mut out = Vec::new();
        let mut c = (1u64 << 40) - 1;
        while out.len() < count && c > 0 {
            let p = (c << TWO_ADIC) | 1;
            if is_prime_u64(p) {
                let g = primitive_root(p);
                let w = pow_mod(g, (p - 1) >> TWO_ADIC, p);
                debug_assert_ne!(pow_mod(w, 1 << (TWO_ADIC - 1), p), 1);
                out.push(NttPrime { p, w });
            }
            c -= 1;
        }
        assert_eq!(out.len(), count, "not enough NTT primes below 2^62");
        out
    }

    /// In-place radix-2 transform; `invert` applies the inverse
    /// (including the 1/n scaling).
    pub fn ntt(&self, a: &mut [u64], invert: bool) {
        let n = a.len();
        assert!(n.is_power_of_two() && n.trailing_zeros() <= TWO_ADIC);
        let p = self.p;
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2usize;
        while len <= n {
            let mut wlen = pow_mod(self.w, 1u64 << (TWO_ADIC - len.trailing_zeros()), p);
            if invert {
                wlen = pow_mod(wlen, p - 2, p);
            }
            for start in (0..n).step_by(len) {
                let mut wc = 1u64;
                for i in start..start + len / 2 {
                    let u = a[i];
                    let v = mul_mod(a[i + len / 2], wc, p);
                    a[i] = add_mod(u, v, p);
                    a[i + len / 2] = sub_mod(u, v, p);
                    wc = mul_mod(wc, wlen, p);
                }
            }
            len <<= 1;
        }
        if invert {
            let ninv = pow_mod(n as u64, p - 2, p);
            for x in a.iter_mut() {
                *x = mul_mod(*x, ninv, p);
            }
        }
    }

    /// First `out_len` coefficients of the product of two residue
    /// series (coefficients past out_len in the inputs are ignored;
    /// they cannot influence the retained range).
    pub fn convolve_trunc(&self, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        let la = a.len().min(out_len);
        let lb = b.len().min(out_len);
        if la == 0 || lb == 0 {
            return vec![0; out_len];
        }
        if la.min(lb) <= 32 {
            let mut out = vec![0u64; out_len];
            let (short, long, ls) = if la <= lb { (a, b, la) } else { (b, a, lb) };
            for i in 0..ls {
                if short[i] == 0 {
                    continue;
                }
                let top = (out_len - i).min(long.len().min(out_len));
                for jj in 0..top {
                    out[i + jj] =
                        add_mod(out[i + jj], mul_mod(short[i], long[jj], self.p), self.p);
                }
            }
            return out;
        }
        let size = (la + lb - 1).next_power_of_two();
        let mut fa = vec![0u64; size];
        fa[..la].copy_from_slice(&a[..la]);
        let mut fb = vec![0u64; size];
        fb[..lb].copy_from_slice(&b[..lb]);
        self.ntt(&mut fa, false);
        self.ntt(&mut fb, false);
        for i in 0..size {
            fa[i] = mul_mod(fa[i], fb[i], self.p);
        }
        self.ntt(&mut fa, true);
        fa.truncate(out_len);
        fa.resize(out_len, 0);
        fa
    }
}

fn primitive_root(p: u64) -> u64 {
    let factors = factor_u64(p - 1);
    'cand: for g in 2..p {
        for &(q, _) in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("no primitive root found for prime {p}")
}

/// Garner mixed-radix CRT digits for one coefficient: given residues
/// r_i mod p_i, returns digits d_i with
/// value = d_0 + d_1 p_0 + d_2 p_0 p_1 + ... and 0 <= d_i < p_i.
pub fn garner_digits(residues: &[u64], primes: &[NttPrime], digits: &mut Vec<u64>) {
    digits.clear();
    for i in 0..residues.len() {
        let pi = primes[i].p;
        // x = (r_i - partial value) / (p_0 ... p_{i-1}) mod p_i
        let mut x = residues[i] % pi;
        let mut base = 1u64;
        for j in 0..i {
            x = sub_mod(x, mul_mod(digits[j] % pi, base, pi), pi);
            base = mul_mod(base, primes[j].p % pi, pi);
        }
        x = mul_mod(x, pow_mod(base, pi - 2, pi), pi);
        digits.push(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(104729));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to 2,3,5,7
        assert!(is_prime_u64((1u64 << 61) - 1)); // Mersenne prime
    }

    #[test]
    fn factor_roundtrip() {
        let mut st = 7u64;
        for _ in 0..50 {
            let n = splitmix(&mut st) >> 20 | 1;
            let f = factor_u64(n);
            let mut prod = 1u64;
            for (p, e) in f {
                assert!(is_prime_u64(p));
                prod *= p.pow(e);
            }
            assert_eq!(prod, n);
        }
        assert_eq!(factor_u64(2u64.pow(22) * 3), vec![(2, 22), (3, 1)]);
    }

    #[test]
    fn prime_generation() {
        let ps = NttPrime::generate(8);
        for q in &ps {
            assert!(is_prime_u64(q.p));
            assert_eq!((q.p - 1) % (1 << TWO_ADIC), 0);
            assert_eq!(pow_mod(q.w, 1 << TWO_ADIC, q.p), 1);
            assert_ne!(pow_mod(q.w, 1 << (TWO_ADIC - 1), q.p), 1);
        }
    }

    #[test]
    fn convolution_matches_naive() {
        let q = &NttPrime::generate(1)[0];
        let mut st = 42u64;
        for (la, lb) in [(1usize, 1usize), (5, 9), (64, 64), (200, 123), (513, 40)] {
            let a: Vec<u64> = (0..la).map(|_| splitmix(&mut st) % q.p).collect();
            let b: Vec<u64> = (0..lb).map(|_| splitmix(&mut st) % q.p).collect();
            let out_len = la + lb - 1;
            let fast = q.convolve_trunc(&a, &b, out_len);
            let mut naive = vec![0u64; out_len];
            for i in 0..la {
                for j in 0..lb {
                    naive[i + j] = add_mod(naive[i + j], mul_mod(a[i], b[j], q.p), q.p);
                }
            }
            assert_eq!(fast, naive, "mismatch at ({la},{lb})");
        }
    }

    #[test]
    fn truncated_convolution_ignores_tail() {
        let q = &NttPrime::generate(1)[0];
        let a: Vec<u64> = (1..=100).collect();
        let b: Vec<u64> = (1..=100).map(|x| x * x).collect();
        let full = q.convolve_trunc(&a, &b, 199);
        let trunc = q.convolve_trunc(&a, &b, 40);
        assert_eq!(&full[..40], &trunc[..]);
    }

    #[test]
    fn garner_reconstructs() {
        let primes = NttPrime::generate(3);
        // pick a value needing more than one prime
        let value = rug::Integer::from(1u64 << 62) * rug::Integer::from(12345677u64) + 99u64;
        let residues: Vec<u64> = primes
            .iter()
            .map(|q| (value.clone() % rug::Integer::from(q.p)).to_u64().unwrap())
            .collect();
        let mut digits = Vec::new();
        garner_digits(&residues, &primes, &mut digits);
        let mut acc = rug::Integer::new();
        for i in (0..digits.len()).rev() {
            acc *= rug::Integer::from(primes[i].p);
            acc += digits[i];
        }
        // Horner above multiplies digit i by p_0..p_{i-1} in reverse order
        assert_eq!(acc, value);
    }
}
