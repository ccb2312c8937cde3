//! Exact cusp-form spaces on SL2(Z): Victor Miller bases, Hecke
//! matrices, eigenforms with Deligne-normalized coefficients, and
//! GL(3) symmetric-square coefficients A_f(n, r).
//!
//! Long basis expansions are built in residue form modulo 62-bit NTT
//! primes (products Delta^i E4^a E6^b, echelonized with unit pivots)
//! and reconstructed exactly by CRT; the reconstruction is certified
//! by checking the exact T_2 coefficient relations at the top of the
//! retained range, which link coefficients across scales and fail
//! loudly if the prime product were too small.

use crate::arith::gcd;
use crate::ntt::{factor_u64, garner_digits, sub_mod, NttPrime};
use crate::qseries::QSeries;
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Working precision (bits) for eigen-solves and the high tier of
/// eigenform coefficients: comfortably past 30 decimal digits.
pub const HI_PREC: u32 = 320;

/// Coefficients up to this index are kept at high precision.
pub const HI_BUDGET: usize = 2500;

/// Default coefficient budget per eigenform.
pub fn default_budget(k: u32) -> usize {
    (4 * (k as usize) * (k as usize)).max(5000)
}

/// dim S_k(SL2(Z)) for even k: floor(k/12), minus one when k = 2 mod 12.
pub fn dim_cusp(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        return 0;
    }
    (k as usize / 12) - usize::from(k % 12 == 2)
}

/// A cusp-form space with its echelonized (Victor Miller) basis
/// g_i = q^i + O(q^{d+1}), exact integer coefficients.
#[derive(Debug, Clone)]
pub struct CuspSpace {
    pub weight: u32,
    pub truncation: usize,
    pub basis: Vec<QSeries>,
}

impl CuspSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }
}

// ---------------------------------------------------------------------------
// residue-form construction

/// sigma_{w-1}(n) mod p for all n <= n_trunc, by a divisor sieve.
fn sigma_residues(w: u32, n_trunc: usize, q: &NttPrime) -> Vec<u64> {
    let mut out = vec![0u64; n_trunc + 1];
    for d in 1..=n_trunc as u64 {
        let pd = crate::ntt::pow_mod(d, (w - 1) as u64, q.p);
        let mut m = d as usize;
        while m <= n_trunc {
            out[m] = crate::ntt::add_mod(out[m], pd, q.p);
            m += d as usize;
        }
    }
    out
}

fn eisenstein_residues(w: u32, n_trunc: usize, q: &NttPrime) -> Vec<u64> {
    // only E4 and E6 occur in basis products; both have integer series
    let c: i64 = match w {
        4 => 240,
        6 => -504,
        _ => unreachable!("only E4/E6 residues are needed"),
    };
    let cr = crate::arith::reduce_mod(c, q.p);
    let mut out = sigma_residues(w, n_trunc, q);
    for x in out.iter_mut().skip(1) {
        *x = crate::ntt::mul_mod(*x, cr, q.p);
    }
    out[0] = 1;
    out
}

/// Delta mod p: Delta = q * f^8 with f = sum (-1)^m (2m+1) q^{m(m+1)/2}
/// (Jacobi's cube of the Euler product), so three squarings suffice.
fn delta_residues(n_trunc: usize, q: &NttPrime) -> Vec<u64> {
    let inner = n_trunc.saturating_sub(1);
    let mut f = vec![0u64; inner + 1];
    let mut m = 0u64;
    loop {
        let e = (m * (m + 1) / 2) as usize;
        if e > inner {
            break;
        }
        let v = (2 * m + 1) % q.p;
        f[e] = if m % 2 == 0 { v } else { q.p - v };
        m += 1;
    }
    let f2 = q.convolve_trunc(&f, &f, inner + 1);
    let f4 = q.convolve_trunc(&f2, &f2, inner + 1);
    let f8 = q.convolve_trunc(&f4, &f4, inner + 1);
    let mut out = vec![0u64; n_trunc + 1];
    out[1..].copy_from_slice(&f8[..n_trunc]);
    out
}

/// Echelonized basis of S_k mod p, coefficients 0..=n_trunc.
fn basis_residues(k: u32, n_trunc: usize, q: &NttPrime) -> Vec<Vec<u64>> {
    let d = dim_cusp(k);
    if d == 0 {
        return Vec::new();
    }
    let delta = delta_residues(n_trunc, q);
    let e4 = eisenstein_residues(4, n_trunc, q);
    let e6 = eisenstein_residues(6, n_trunc, q);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d);
    let mut delta_pow = delta.clone();
    for i in 1..=d {
        if i > 1 {
            delta_pow = q.convolve_trunc(&delta_pow, &delta, n_trunc + 1);
        }
        let w = k - 12 * i as u32; // >= 0 and never 2, by the dimension cap
        let b = u32::from(w % 4 == 2);
        let a = (w - 6 * b) / 4;
        let mut row = delta_pow.clone();
        for _ in 0..a {
            row = q.convolve_trunc(&row, &e4, n_trunc + 1);
        }
        if b == 1 {
            row = q.convolve_trunc(&row, &e6, n_trunc + 1);
        }
        rows.push(row);
    }
    // rows[i-1] = q^i + ...; clear columns i+1..=d working upward.
    // All pivots are exactly 1, so the exact integer elimination has the
    // same multipliers and commutes with reduction mod p.
    for i in (0..d).rev() {
        for m in i + 1..d {
            let t = rows[i][m + 1];
            if t != 0 {
                let (head, tail) = rows.split_at_mut(m);
                let src = &tail[0];
                let dst = &mut head[i];
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    *x = sub_mod(*x, crate::ntt::mul_mod(t, *y, q.p), q.p);
                }
            }
        }
    }
    rows
}

/// Exact Victor Miller basis of S_k, truncated at n_trunc.
pub fn victor_miller_basis(k: u32, n_trunc: usize) -> Result<CuspSpace> {
    if k % 2 != 0 || k < 12 {
        return Err(Error::invalid(format!(
            "cusp spaces need even weight >= 12, got {k}"
        )));
    }
    let d = dim_cusp(k);
    if d == 0 {
        return Ok(CuspSpace {
            weight: k,
            truncation: n_trunc,
            basis: Vec::new(),
        });
    }
    if n_trunc <= d {
        return Err(Error::invalid(format!(
            "truncation {n_trunc} too small to echelonize dimension {d}"
        )));
    }
    // coefficient-size heuristic tau(n) n^{(k-1)/2} plus a wide margin;
    // the T_2 relation check below certifies the reconstruction.
    let bits_needed =
        ((k as f64 - 1.0) / 2.0 + 1.0) * (n_trunc as f64).log2() + 64.0;
    let mut count = 1usize;
    let primes = loop {
        let ps = NttPrime::generate(count);
        let have: f64 = ps.iter().map(|q| (q.p as f64).log2()).sum();
        if have > bits_needed {
            break ps;
        }
        count += 1;
    };
    let per_prime: Vec<Vec<Vec<u64>>> = primes
        .iter()
        .map(|q| basis_residues(k, n_trunc, q))
        .collect();
    let mut modulus = Integer::from(1);
    for q in &primes {
        modulus *= q.p;
    }
    let half = Integer::from(&modulus >> 1);
    let mut basis = Vec::with_capacity(d);
    let mut digits = Vec::new();
    let mut residues = vec![0u64; primes.len()];
    for i in 0..d {
        let mut coeffs = Vec::with_capacity(n_trunc + 1);
        for n in 0..=n_trunc {
            for (t, pp) in per_prime.iter().enumerate() {
                residues[t] = pp[i][n];
            }
            garner_digits(&residues, &primes, &mut digits);
            let mut acc = Integer::new();
            for t in (0..digits.len()).rev() {
                acc *= primes[t].p;
                acc += digits[t];
            }
            if acc > half {
                acc -= &modulus;
            }
            coeffs.push(Rational::from(acc));
        }
        basis.push(QSeries::new(k, coeffs));
    }
    let space = CuspSpace {
        weight: k,
        truncation: n_trunc,
        basis,
    };
    certify_t2_relations(&space)?;
    Ok(space)
}

/// Check T_2 g_i = sum_j M[j][i] g_j at the top of the retained range.
/// The relation couples c(m), c(2m) and c(m/2); a CRT modulus that was
/// too small would corrupt large-n coefficients and break it.
fn certify_t2_relations(space: &CuspSpace) -> Result<()> {
    let d = space.dim();
    let n_trunc = space.truncation();
    if n_trunc < 4 * d {
        return Ok(()); // nothing nontrivial to check at tiny truncations
    }
    let m2 = hecke_matrix(space, 2)?;
    let two_pow = Rational::from(Integer::from(2).pow(space.weight - 1));
    let top = n_trunc / 2;
    for m in (top.saturating_sub(16).max(d + 1))..=top {
        for i in 0..d {
            let ci = &space.basis[i].coeffs;
            let mut lhs = ci[2 * m].clone();
            if m % 2 == 0 {
                lhs += Rational::from(&ci[m / 2] * &two_pow);
            }
            let mut rhs = Rational::new();
            for j in 0..d {
                rhs += Rational::from(&m2[j][i] * &space.basis[j].coeffs[m]);
            }
            if lhs != rhs {
                return Err(Error::convergence(format!(
                    "T2 relation failed at (m={m}, i={i}) in weight {}; \
                     CRT modulus too small",
                    space.weight
                )));
            }
        }
    }
    Ok(())
}

/// Exact matrix of T_n on the Victor Miller basis: column i holds the
/// first d coefficients of T_n g_i, computed from the classical action
/// b_m = sum_{d | (n,m)} d^{k-1} c(n m / d^2).
pub fn hecke_matrix(space: &CuspSpace, n: u64) -> Result<Vec<Vec<Rational>>> {
    if n == 0 {
        return Err(Error::invalid("Hecke index must be >= 1"));
    }
    let d = space.dim();
    let k = space.weight;
    if space.truncation() < (n as usize) * d {
        return Err(Error::budget(format!(
            "truncation {} < n*d = {} for T_{n}",
            space.truncation(),
            n as usize * d
        )));
    }
    let mut mat = vec![vec![Rational::new(); d]; d];
    for i in 0..d {
        let c = &space.basis[i].coeffs;
        for m in 1..=d as u64 {
            let mut b = Rational::new();
            for dd in crate::arith::divisors(gcd(n, m)) {
                let idx = (n * m / (dd * dd)) as usize;
                b += Rational::from(&c[idx] * Rational::from(Integer::from(dd).pow(k - 1)));
            }
            mat[m as usize - 1][i] = b;
        }
    }
    Ok(mat)
}

// ---------------------------------------------------------------------------
// eigenforms

/// A Hecke eigenform with Deligne-normalized coefficients
/// a_f(n) = lambda_f(n) / n^{(k-1)/2}.
#[derive(Debug)]
pub struct Eigenform {
    pub weight: u32,
    /// 1-based index after sorting conjugates by lambda_f(2) ascending
    pub label: usize,
    /// exact characteristic polynomial of T_2, ascending coefficients, monic
    pub charpoly2: Vec<Integer>,
    /// a_f(n) for 0 <= n <= budget (entry 0 unused)
    a_lo: Vec<f64>,
    /// high-precision a_f(n) for n <= min(budget, HI_BUDGET)
    a_hi: Vec<Float>,
}

impl Eigenform {
    /// Largest n with a directly stored coefficient.
    pub fn budget(&self) -> usize {
        self.a_lo.len() - 1
    }

    /// High-precision a_f(n), n within the high tier.
    pub fn a_hi(&self, n: usize) -> Result<&Float> {
        self.a_hi
            .get(n)
            .filter(|_| n >= 1)
            .ok_or_else(|| Error::budget(format!("a_hi({n}) beyond high tier")))
    }

    /// Unnormalized eigenvalue lambda_f(n) = a_f(n) n^{(k-1)/2},
    /// high precision, n within the high tier.
    pub fn lambda(&self, n: usize) -> Result<Float> {
        let a = self.a_hi(n)?;
        let scale = Float::with_val(HI_PREC, n).pow(self.weight - 1).sqrt();
        Ok(Float::with_val(HI_PREC, a * scale))
    }

    /// a_f at a prime power, extending beyond the stored budget by the
    /// Hecke recursion a(p^{e+1}) = a(p) a(p^e) - a(p^{e-1}).
    pub fn a_prime_power(&self, p: u64, e: u32) -> Result<f64> {
        if let Some(pe) = p.checked_pow(e) {
            if (pe as usize) <= self.budget() {
                return Ok(self.a_lo[pe as usize]);
            }
        }
        if p as usize > self.budget() {
            return Err(Error::budget(format!(
                "a_f(p^e) needs a_f({p}) beyond budget {}",
                self.budget()
            )));
        }
        let ap = self.a_lo[p as usize];
        let (mut prev, mut cur) = (1.0f64, ap);
        for _ in 1..e {
            (prev, cur) = (cur, ap * cur - prev);
        }
        Ok(cur)
    }

    /// a_f(n) for any n >= 1, multiplicatively.
    pub fn a(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("coefficient index must be >= 1"));
        }
        if (n as usize) <= self.budget() {
            return Ok(self.a_lo[n as usize]);
        }
        let mut out = 1.0;
        for (p, e) in factor_u64(n) {
            out *= self.a_prime_power(p, e)?;
        }
        Ok(out)
    }

    /// a_f(n^2), from the factorization of n (avoids factoring n^2).
    pub fn a_squared(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::invalid("coefficient index must be >= 1"));
        }
        if let Some(n2) = n.checked_mul(n) {
            if (n2 as usize) <= self.budget() {
                return Ok(self.a_lo[n2 as usize]);
            }
        }
        let mut out = 1.0;
        for (p, e) in factor_u64(n) {
            out *= self.a_prime_power(p, 2 * e)?;
        }
        Ok(out)
    }
}

/// All eigenforms of a space, sorted by lambda_f(2) ascending.
pub fn eigenforms(space: &CuspSpace) -> Result<Vec<Eigenform>> {
    let d = space.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let k = space.weight;
    let m2r = hecke_matrix(space, 2)?;
    let mut m2 = vec![vec![Integer::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            assert!(*m2r[i][j].denom() == 1, "T2 must be integral on the VM basis");
            m2[i][j] = m2r[i][j].numer().clone();
        }
    }
    let charpoly = charpoly_small(&m2);
    let roots = real_roots(&charpoly)?;
    // distinctness: repeated T2 eigenvalues would break the eigenbasis
    for w in roots.windows(2) {
        let gap = Float::with_val(HI_PREC, &w[1] - &w[0]);
        if gap < 1e-6 {
            return Err(Error::invalid(format!(
                "repeated T2 eigenvalue in weight {k}"
            )));
        }
    }
    let n_trunc = space.truncation();
    let hi_top = n_trunc.min(HI_BUDGET);
    let mut forms = Vec::with_capacity(d);
    for (idx, lam) in roots.iter().enumerate() {
        let v = null_vector(&m2, lam)?;
        // normalize so the q^1 coefficient (echelon: = v[0]) is 1
        let v0 = v[0].clone();
        if v0 == 0 {
            return Err(Error::convergence("eigenvector has vanishing q^1 term"));
        }
        let v: Vec<Float> = v.iter().map(|x| Float::with_val(HI_PREC, x / &v0)).collect();
        // consistency: combined q^2 coefficient must reproduce lambda(2)
        let mut c2 = Float::with_val(HI_PREC, 0);
        for i in 0..d {
            c2 += Float::with_val(HI_PREC, &v[i] * space.basis[i].coeffs[2].numer());
        }
        let dev = Float::with_val(HI_PREC, &c2 - lam).abs();
        let scale = Float::with_val(HI_PREC, lam.clone().abs()).max(&Float::with_val(HI_PREC, 1));
        assert!(
            dev / scale < 1e-60,
            "eigenvector q^2 coefficient disagrees with the T2 root"
        );
        let mut a_lo = vec![0.0f64; n_trunc + 1];
        let mut a_hi = vec![Float::new(HI_PREC); hi_top + 1];
        for n in 1..=n_trunc {
            let mut c = Float::with_val(HI_PREC, 0);
            for i in 0..d {
                let gi = space.basis[i].coeffs[n].numer();
                if *gi != 0 {
                    c += Float::with_val(HI_PREC, &v[i] * gi);
                }
            }
            let norm = Float::with_val(HI_PREC, n).pow(k - 1).sqrt();
            let a = c / norm;
            a_lo[n] = a.to_f64();
            if n <= hi_top {
                a_hi[n] = a;
            }
        }
        forms.push((idx, a_lo, a_hi));
    }
    // residuals for T3 and T5: simultaneous diagonalization check on the
    // high-precision eigenvector (v = coefficients c(1)..c(d) of the form)
    if space.truncation() >= 5 * d {
        for (idx, _, a_hi) in &forms {
            let scale = |n: usize| Float::with_val(HI_PREC, n).pow(k - 1).sqrt();
            let cvec: Vec<Float> = (1..=d)
                .map(|n| Float::with_val(HI_PREC, &a_hi[n] * scale(n)))
                .collect();
            for tn in [3usize, 5] {
                let mtn = hecke_matrix(space, tn as u64)?;
                let lam_n = Float::with_val(HI_PREC, &a_hi[tn] * scale(tn));
                let mut res = Float::with_val(HI_PREC, 0);
                let mut nv = Float::with_val(HI_PREC, 0);
                for i in 0..d {
                    let mut r = Float::with_val(HI_PREC, -&lam_n) * &cvec[i];
                    for j in 0..d {
                        r += Float::with_val(HI_PREC, mtn[i][j].numer()) * &cvec[j];
                    }
                    res += r.square();
                    nv += cvec[i].clone().square();
                }
                let rel = Float::with_val(HI_PREC, res / nv).sqrt()
                    / lam_n.clone().abs().max(&Float::with_val(HI_PREC, 1));
                assert!(
                    rel < 1e-20,
                    "T{tn} residual {rel} too large for form {idx} in weight {k}"
                );
            }
        }
    }
    forms.sort_by(|a, b| a.1[2].partial_cmp(&b.1[2]).unwrap());
    Ok(forms
        .into_iter()
        .enumerate()
        .map(|(label, (_, a_lo, a_hi))| Eigenform {
            weight: k,
            label: label + 1,
            charpoly2: charpoly.clone(),
            a_lo,
            a_hi,
        })
        .collect())
}

/// Characteristic polynomial of a d x d integer matrix, d <= 3,
/// ascending coefficients, monic.
fn charpoly_small(m: &[Vec<Integer>]) -> Vec<Integer> {
    match m.len() {
        1 => vec![Integer::from(-&m[0][0]), Integer::from(1)],
        2 => {
            let tr = Integer::from(&m[0][0] + &m[1][1]);
            let det = Integer::from(&m[0][0] * &m[1][1]) - Integer::from(&m[0][1] * &m[1][0]);
            vec![det, -tr, Integer::from(1)]
        }
        3 => {
            let tr = Integer::from(&m[0][0] + &m[1][1]) + &m[2][2];
            let minor = |a: usize, b: usize| {
                Integer::from(&m[a][a] * &m[b][b]) - Integer::from(&m[a][b] * &m[b][a])
            };
            let m2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
            let det = Integer::from(&m[0][0] * &minor(1, 2))
                - Integer::from(
                    &m[0][1]
                        * &(Integer::from(&m[1][0] * &m[2][2])
                            - Integer::from(&m[1][2] * &m[2][0])),
                )
                + Integer::from(
                    &m[0][2]
                        * &(Integer::from(&m[1][0] * &m[2][1])
                            - Integer::from(&m[1][1] * &m[2][0])),
                );
            vec![-det, m2, -tr, Integer::from(1)]
        }
        d => unreachable!("dimension {d} exceeds desk scale"),
    }
}

fn poly_eval(p: &[Integer], x: &Float) -> Float {
    let mut acc = Float::with_val(HI_PREC, 0);
    for c in p.iter().rev() {
        acc = acc * x + Float::with_val(HI_PREC, c);
    }
    acc
}

fn poly_deriv_eval(p: &[Integer], x: &Float) -> Float {
    let mut acc = Float::with_val(HI_PREC, 0);
    for (i, c) in p.iter().enumerate().rev() {
        if i == 0 {
            break;
        }
        acc = acc * x + Float::with_val(HI_PREC, c) * Float::with_val(HI_PREC, i as u32);
    }
    acc
}

/// Real roots of a monic integer polynomial of degree <= 3 whose roots
/// are known to be real (T_2 is self-adjoint for the Petersson inner
/// product): f64 seeds, then Newton-polished at HI_PREC. Ascending.
fn real_roots(p: &[Integer]) -> Result<Vec<Float>> {
    let deg = p.len() - 1;
    let pf: Vec<f64> = p.iter().map(|c| c.to_f64()).collect();
    let mut seeds: Vec<f64> = match deg {
        1 => vec![-pf[0]],
        2 => {
            let (c, b) = (pf[0], pf[1]);
            let disc = b * b - 4.0 * c;
            if disc <= 0.0 {
                return Err(Error::invalid("complex T2 eigenvalues"));
            }
            let r = disc.sqrt();
            vec![(-b - r) / 2.0, (-b + r) / 2.0]
        }
        3 => {
            // depressed cubic, trigonometric form (three real roots)
            let (d0, c0, b0) = (pf[0], pf[1], pf[2]);
            let pp = c0 - b0 * b0 / 3.0;
            let qq = 2.0 * b0 * b0 * b0 / 27.0 - b0 * c0 / 3.0 + d0;
            if pp >= 0.0 {
                return Err(Error::invalid("cubic without three real roots"));
            }
            let m = 2.0 * (-pp / 3.0).sqrt();
            let arg = (3.0 * qq / (pp * m)).clamp(-1.0, 1.0);
            let theta = arg.acos();
            (0..3)
                .map(|j| m * ((theta - 2.0 * std::f64::consts::PI * j as f64) / 3.0).cos() - b0 / 3.0)
                .collect()
        }
        d => return Err(Error::invalid(format!("unsupported degree {d}"))),
    };
    seeds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::with_capacity(deg);
    for s in seeds {
        let mut x = Float::with_val(HI_PREC, s);
        for it in 0..200 {
            let fx = poly_eval(p, &x);
            let dfx = poly_deriv_eval(p, &x);
            if dfx == 0 {
                return Err(Error::convergence("Newton hit a critical point"));
            }
            let step = fx / dfx;
            let done = step.clone().abs()
                <= Float::with_val(HI_PREC, x.clone().abs() + 1) >> 300u32;
            x -= step;
            if done {
                break;
            }
            if it == 199 {
                return Err(Error::convergence("Newton failed to converge"));
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Null vector of (M - lambda I) for a simple eigenvalue, d <= 3, by
/// adjugate rows / cross products; picks the best-conditioned choice.
fn null_vector(m: &[Vec<Integer>], lam: &Float) -> Result<Vec<Float>> {
    let d = m.len();
    let a = |i: usize, j: usize| -> Float {
        let mut x = Float::with_val(HI_PREC, &m[i][j]);
        if i == j {
            x -= lam;
        }
        x
    };
    match d {
        1 => Ok(vec![Float::with_val(HI_PREC, 1)]),
        2 => {
            // rows of A are both orthogonal complements of the null space
            let c1 = vec![a(0, 1), -a(0, 0)];
            let c2 = vec![a(1, 1), -a(1, 0)];
            let n1 = Float::with_val(HI_PREC, c1[0].clone().square() + c1[1].clone().square());
            let n2 = Float::with_val(HI_PREC, c2[0].clone().square() + c2[1].clone().square());
            Ok(if n1 >= n2 { c1 } else { c2 })
        }
        3 => {
            let row = |i: usize| [a(i, 0), a(i, 1), a(i, 2)];
            let cross = |u: &[Float; 3], v: &[Float; 3]| -> Vec<Float> {
                vec![
                    Float::with_val(HI_PREC, &u[1] * &v[2]) - Float::with_val(HI_PREC, &u[2] * &v[1]),
                    Float::with_val(HI_PREC, &u[2] * &v[0]) - Float::with_val(HI_PREC, &u[0] * &v[2]),
                    Float::with_val(HI_PREC, &u[0] * &v[1]) - Float::with_val(HI_PREC, &u[1] * &v[0]),
                ]
            };
            let rows = [row(0), row(1), row(2)];
            let mut best: Option<(Float, Vec<Float>)> = None;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let c = cross(&rows[i], &rows[j]);
                let n: Float = c
                    .iter()
                    .fold(Float::with_val(HI_PREC, 0), |acc, x| acc + x.clone().square());
                if best.as_ref().map(|(bn, _)| n > *bn).unwrap_or(true) {
                    best = Some((n, c));
                }
            }
            let (n, c) = best.unwrap();
            if n == 0 {
                return Err(Error::convergence("degenerate null space"));
            }
            Ok(c)
        }
        _ => Err(Error::invalid("unsupported dimension")),
    }
}

/// GL(3) symmetric-square coefficient A_f(n, r):
/// A_f(n, 1) = sum_{d^2 m = n} a_f(m^2) and
/// A_f(n, r) = sum_{d | (n, r)} mu(d) A_f(n/d, 1) A_f(r/d, 1).
pub fn gl3_coeff(f: &Eigenform, n: u64, r: u64) -> Result<f64> {
    if n == 0 || r == 0 {
        return Err(Error::invalid("GL(3) indices must be >= 1"));
    }
    let a1 = |n: u64| -> Result<f64> {
        let mut s = 0.0;
        let mut d = 1u64;
        while d * d <= n {
            if n % (d * d) == 0 {
                s += f.a_squared(n / (d * d))?;
            }
            d += 1;
        }
        Ok(s)
    };
    if r == 1 {
        return a1(n);
    }
    let mut s = 0.0;
    for d in crate::arith::divisors(gcd(n, r)) {
        let mu = crate::arith::moebius(d);
        if mu != 0 {
            s += mu as f64 * a1(n / d)? * a1(r / d)?;
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// in-process registry

type Registry = Mutex<HashMap<(u32, usize), Arc<Vec<Eigenform>>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Eigenforms of S_k at an explicit coefficient budget, memoized
/// process-wide (construction is expensive; the forms are immutable).
pub fn eigenforms_with_budget(k: u32, n_trunc: usize) -> Result<Arc<Vec<Eigenform>>> {
    if let Some(hit) = registry().lock().unwrap().get(&(k, n_trunc)) {
        return Ok(hit.clone());
    }
    let space = victor_miller_basis(k, n_trunc)?;
    let forms = Arc::new(eigenforms(&space)?);
    registry()
        .lock()
        .unwrap()
        .insert((k, n_trunc), forms.clone());
    Ok(forms)
}

/// Eigenforms of S_k at the default budget max(4k^2, 5000).
pub fn eigenforms_for_weight(k: u32) -> Result<Arc<Vec<Eigenform>>> {
    eigenforms_with_budget(k, default_budget(k))
}
