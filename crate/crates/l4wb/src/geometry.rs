//! Quadrature over the SL2(Z) fundamental domain and everything built
//! on it: L^2-normalized forms F(z) = y^{k/2} f(z), L^p norms, triple
//! products <F^2, G>, Watson's formula and the spectral decomposition
//! of the fourth power of the L^4 norm.
//!
//! The substitution u = 1/y turns the hyperbolic measure dx dy / y^2
//! into the flat measure dx du and maps the full domain (cusp
//! included) onto { |x| <= 1/2, 0 < u <= 1/sqrt(1-x^2) }, so the
//! hyperbolic volume integral becomes int dx / sqrt(1-x^2) = pi/3
//! exactly and no truncation height is needed.

use crate::hecke::Eigenform;
use crate::lfun;
use crate::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

const PI: f64 = std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // P_n(x) and P_n'(x)
            let (mut p0, mut p1) = (1.0f64, x);
            for m in 2..=n {
                let mf = m as f64;
                (p0, p1) = (p1, ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf);
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for m in 2..=n {
            let mf = m as f64;
            (p0, p1) = (p1, ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf);
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

fn gl24() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(24))
}

// ---------------------------------------------------------------------------
// domain grid

/// Tensor-product Gauss-Legendre layout on the (x, u)-rectangle image
/// of the fundamental domain: nx panels in x over [-1/2, 1/2], and for
/// each x node, nu panels in u over (0, 1/sqrt(1-x^2)].
#[derive(Debug, Clone, Copy)]
pub struct DomainGrid {
    /// Gauss-Legendre points per panel
    pub order: usize,
    pub nx: usize,
    pub nu: usize,
}

impl Default for DomainGrid {
    fn default() -> Self {
        Self {
            order: 24,
            nx: 4,
            nu: 4,
        }
    }
}

impl DomainGrid {
    pub fn refined(&self) -> Self {
        Self {
            order: self.order,
            nx: self.nx * 2,
            nu: self.nu * 2,
        }
    }

    /// Integral of g over the fundamental domain against dx dy / y^2.
    pub fn integrate<G: Fn(Complex64) -> Complex64>(&self, g: &G) -> Complex64 {
        let (nodes, weights) = if self.order == 24 {
            gl24().clone()
        } else {
            gauss_legendre(self.order)
        };
        let mut total = Complex64::new(0.0, 0.0);
        let hx = 1.0 / self.nx as f64;
        for ix in 0..self.nx {
            let x0 = -0.5 + ix as f64 * hx;
            for (xn, xw) in nodes.iter().zip(&weights) {
                let x = x0 + hx * 0.5 * (xn + 1.0);
                let u_top = 1.0 / (1.0 - x * x).sqrt();
                let hu = u_top / self.nu as f64;
                let mut col = Complex64::new(0.0, 0.0);
                for iu in 0..self.nu {
                    let u0 = iu as f64 * hu;
                    for (un, uw) in nodes.iter().zip(&weights) {
                        let u = u0 + hu * 0.5 * (un + 1.0);
                        col += uw * g(Complex64::new(x, 1.0 / u));
                    }
                }
                total += xw * col * (hu * 0.5);
            }
        }
        total * (hx * 0.5)
    }

    /// Hyperbolic volume of the domain as seen by the grid.
    pub fn volume(&self) -> f64 {
        self.integrate(&|_| Complex64::new(1.0, 0.0)).re
    }

    /// Refine (halving panels in both directions) until the integral's
    /// relative change is below tol; errors out if 7 refinements do not
    /// converge.
    pub fn integrate_converged<G: Fn(Complex64) -> Complex64>(
        &self,
        g: &G,
        tol: f64,
    ) -> Result<Complex64> {
        self.integrate_converged_scaled(g, tol, 1e-30)
    }

    /// As `integrate_converged`, but convergence is judged relative to
    /// max(|integral|, scale_floor) — needed when the true value can be
    /// zero (e.g. inner products of orthogonal forms).
    pub fn integrate_converged_scaled<G: Fn(Complex64) -> Complex64>(
        &self,
        g: &G,
        tol: f64,
        scale_floor: f64,
    ) -> Result<Complex64> {
        let mut grid = *self;
        let mut value = grid.integrate(g);
        for _ in 0..7 {
            let next = grid.refined();
            let refined = next.integrate(g);
            if (refined - value).norm() <= tol * refined.norm().max(scale_floor) {
                return Ok(refined);
            }
            grid = next;
            value = refined;
        }
        Err(Error::convergence(
            "domain quadrature did not stabilize under panel halving",
        ))
    }
}

// ---------------------------------------------------------------------------
// normalized forms

/// F(z) = scale * y^{k/2} * sum_n lambda_f(n) e(nz), with scale fixed
/// so that the L^2 norm over the fundamental domain is 1.
#[derive(Debug, Clone)]
pub struct NormalizedForm {
    pub k: u32,
    pub scale: f64,
    /// classical Fourier coefficients lambda_f(n) = a_f(n) n^{(k-1)/2}
    coeffs: Vec<f64>,
}

/// Number of q-series terms that certifiably bury the tail below
/// 1e-20 relative at the domain floor y = sqrt(3)/2 for k <= 40.
fn series_length(k: u32) -> usize {
    40 + 3 * k as usize
}

fn raw_form(f: &Eigenform) -> Result<NormalizedForm> {
    let n = series_length(f.weight).min(f.budget());
    let half = (f.weight as f64 - 1.0) / 2.0;
    let mut coeffs = vec![0.0; n + 1];
    for m in 1..=n {
        coeffs[m] = f.a(m as u64)? * (m as f64).powf(half);
    }
    Ok(NormalizedForm {
        k: f.weight,
        scale: 1.0,
        coeffs,
    })
}

impl NormalizedForm {
    /// F(z) for Im z at or above the domain floor. Returns exactly 0
    /// deep in the cusp where every term underflows.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let y = z.im;
        if y < 3.0f64.sqrt() / 2.0 - 1e-12 {
            return Err(Error::invalid(format!(
                "eval below the fundamental-domain floor: Im z = {y}"
            )));
        }
        // ln(y^{k/2} e^{-2 pi y}) < -650 already for k <= 40, y >= 120
        if y >= 120.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            acc = acc * q + c;
        }
        Ok(self.scale * y.powf(self.k as f64 / 2.0) * q * acc)
    }
}

/// Build F = y^{k/2} f / ||y^{k/2} f||_2 by quadrature, after the grid
/// passes its volume self-test.
pub fn l2_normalize(f: &Eigenform, grid: DomainGrid) -> Result<NormalizedForm> {
    if (grid.volume() - PI / 3.0).abs() > 1e-8 {
        return Err(Error::invalid("grid fails the pi/3 volume self-test"));
    }
    let mut nf = raw_form(f)?;
    let norm2 = grid
        .integrate_converged(
            &|z| {
                let v = nf.eval(z).unwrap();
                Complex64::new(v.norm_sqr(), 0.0)
            },
            1e-7,
        )?
        .re;
    if !(norm2 > 0.0) {
        return Err(Error::convergence("vanishing L2 norm from quadrature"));
    }
    nf.scale = 1.0 / norm2.sqrt();
    Ok(nf)
}

/// Independent Rankin-Selberg evaluation of the unnormalized Petersson
/// norm: <f, f> = (2/pi) Gamma(k) (4 pi)^{-k} L(1, sym^2 f)
/// (unfolding against the level-1 Eisenstein series, residue 3/pi).
pub fn petersson_norm_oracle(f: &Eigenform) -> Result<f64> {
    let k = f.weight as f64;
    let log = crate::gamma::log_gamma_real(k)? - k * (4.0 * PI).ln();
    Ok(2.0 / PI * log.exp() * lfun::edge_sym2_default(f)?.value)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LpNorm {
    pub p: u32,
    /// int |F|^p dmu
    pub integral: f64,
    pub norm: f64,
}

/// L^p norm of a normalized form, p in {2, 4}.
pub fn lp_norm(nf: &NormalizedForm, p: u32, grid: DomainGrid) -> Result<LpNorm> {
    if p != 2 && p != 4 {
        return Err(Error::invalid("lp_norm supports p in {2, 4}"));
    }
    let integral = grid
        .integrate_converged(
            &|z| {
                let v = nf.eval(z).unwrap().norm_sqr();
                Complex64::new(if p == 2 { v } else { v * v }, 0.0)
            },
            1e-7,
        )?
        .re;
    Ok(LpNorm {
        p,
        integral,
        norm: integral.powf(1.0 / p as f64),
    })
}

/// <F^2, G> = int F(z)^2 conj(G(z)) dmu for F of weight k and G of
/// weight 2k (F^2 transforms with weight 2k, so the integrand is
/// invariant).
pub fn triple_inner(
    nf: &NormalizedForm,
    ng: &NormalizedForm,
    grid: DomainGrid,
) -> Result<Complex64> {
    if ng.k != 2 * nf.k {
        return Err(Error::invalid(format!(
            "triple_inner weights ({}, {}) are not (k, 2k)",
            nf.k, ng.k
        )));
    }
    grid.integrate_converged(
        &|z| {
            let fv = nf.eval(z).unwrap();
            fv * fv * ng.eval(z).unwrap().conj()
        },
        1e-7,
    )
}

/// Petersson inner product <G1, G2> of two normalized forms of the
/// same weight.
pub fn inner_product(
    ng1: &NormalizedForm,
    ng2: &NormalizedForm,
    grid: DomainGrid,
) -> Result<Complex64> {
    if ng1.k != ng2.k {
        return Err(Error::invalid("inner_product needs equal weights"));
    }
    // Cauchy-Schwarz bounds the true value by 1, so judge convergence
    // on that scale: orthogonal pairs integrate to ~0
    grid.integrate_converged_scaled(
        &|z| ng1.eval(z).unwrap() * ng2.eval(z).unwrap().conj(),
        1e-7,
        1.0,
    )
}

// ---------------------------------------------------------------------------
// Watson's formula and the spectral decomposition

#[derive(Debug, Clone, serde::Serialize)]
pub struct WatsonReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_gap: f64,
    pub l_half_g: f64,
    pub l_half_sym2xg: f64,
    pub l_one_sym2_f: f64,
    pub l_one_sym2_g: f64,
}

/// Watson's formula: |<F^2, G>|^2 = pi^3 / (2 (2k-1)) *
/// L(1/2, g) L(1/2, sym^2 f x g) / (L(1, sym^2 f)^2 L(1, sym^2 g)),
/// with the left side by quadrature and the right side from the
/// L-value machinery.
pub fn watson_check(f: &Eigenform, g: &Eigenform, grid: DomainGrid) -> Result<WatsonReport> {
    let k = f.weight;
    if g.weight != 2 * k {
        return Err(Error::invalid("watson_check needs weights (k, 2k)"));
    }
    let nf = l2_normalize(f, grid)?;
    let ng = l2_normalize(g, grid)?;
    let lhs = triple_inner(&nf, &ng, grid)?.norm_sqr();
    let l_half_g = lfun::central_value_g(g, k)?.value;
    let l_half_sym2xg = lfun::central_value_sym2xg(f, g)?.value;
    let l_one_sym2_f = lfun::edge_sym2_default(f)?.value;
    let l_one_sym2_g = lfun::edge_sym2_default(g)?.value;
    let rhs = PI.powi(3) / (2.0 * (2.0 * k as f64 - 1.0)) * l_half_g * l_half_sym2xg
        / (l_one_sym2_f * l_one_sym2_f * l_one_sym2_g);
    if rhs < -1e-10 {
        return Err(Error::invalid(format!(
            "Watson right side is negative ({rhs:.3e}): L-value normalization bug"
        )));
    }
    Ok(WatsonReport {
        lhs,
        rhs,
        rel_gap: (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-30),
        l_half_g,
        l_half_sym2xg,
        l_one_sym2_f,
        l_one_sym2_g,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralReport {
    pub l4_fourth: f64,
    pub sum_squares: f64,
    pub rel_gap: f64,
    /// |<F^2, G>|^2 per weight-2k eigenform, by label
    pub terms: Vec<f64>,
}

/// Spectral decomposition of the L^4 norm: since F^2 is a weight-2k
/// cusp form, ||F||_4^4 = <F^2, F^2> = sum_{g in B_{2k}} |<F^2, G>|^2.
pub fn spectral_check(f: &Eigenform, grid: DomainGrid) -> Result<SpectralReport> {
    let nf = l2_normalize(f, grid)?;
    let l4_fourth = lp_norm(&nf, 4, grid)?.integral;
    let gs = crate::hecke::eigenforms_for_weight(2 * f.weight)?;
    let mut terms = Vec::with_capacity(gs.len());
    for g in gs.iter() {
        let ng = l2_normalize(g, grid)?;
        terms.push(triple_inner(&nf, &ng, grid)?.norm_sqr());
    }
    let sum_squares: f64 = terms.iter().sum();
    Ok(SpectralReport {
        l4_fourth,
        sum_squares,
        rel_gap: (l4_fourth - sum_squares).abs() / l4_fourth.max(1e-30),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{eigenforms_for_weight, eigenforms_with_budget};

    #[test]
    fn legendre_nodes_sane() {
        let (xs, ws) = gauss_legendre(24);
        let total: f64 = ws.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x2: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x * x).sum();
        assert!((x2 - 2.0 / 3.0).abs() < 1e-14);
        // degree-47 polynomial is still integrated exactly
        let hi: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(46)).sum();
        assert!((hi - 2.0 / 47.0).abs() < 1e-13);
    }

    #[test]
    fn volume_is_pi_over_three() {
        let grid = DomainGrid::default();
        assert!((grid.volume() - PI / 3.0).abs() < 1e-8);
        // and stays put under refinement
        assert!((grid.refined().volume() - PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn eval_periodic_and_modular() {
        let forms = eigenforms_for_weight(12).unwrap();
        let nf = raw_form(&forms[0]).unwrap();
        let z = Complex64::new(0.2, 1.1);
        let a = nf.eval(z).unwrap();
        let b = nf.eval(z + 1.0).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
        // |F| is SL2(Z)-invariant: compare z with -1/z
        let w = -1.0 / z;
        let c = nf.eval(w).unwrap();
        assert!(
            (a.norm() - c.norm()).abs() < 1e-8 * a.norm(),
            "{} vs {}",
            a.norm(),
            c.norm()
        );
        // deep cusp decay
        let far = nf.eval(Complex64::new(0.0, 10.0)).unwrap();
        assert!(far.norm() <= 10.0f64.powi(6) * (-20.0 * PI).exp() * 1.01);
        assert!(nf.eval(Complex64::new(0.0, 0.5)).is_err());
    }

    #[test]
    fn l2_normalization_and_petersson_oracle() {
        let forms = eigenforms_for_weight(12).unwrap();
        let grid = DomainGrid::default();
        let nf = l2_normalize(&forms[0], grid).unwrap();
        let n2 = lp_norm(&nf, 2, grid).unwrap();
        assert!((n2.norm - 1.0).abs() < 1e-6, "norm = {}", n2.norm);
        // the quadrature norm against the Rankin-Selberg route
        let quad = 1.0 / (nf.scale * nf.scale);
        let oracle = petersson_norm_oracle(&forms[0]).unwrap();
        assert!(
            (quad - oracle).abs() < 1e-4 * oracle,
            "quadrature {quad:.8e} vs oracle {oracle:.8e}"
        );
    }

    #[test]
    fn power_mean_inequality() {
        let grid = DomainGrid::default();
        for k in [12u32, 16, 20] {
            let forms = eigenforms_for_weight(k).unwrap();
            let nf = l2_normalize(&forms[0], grid).unwrap();
            let l4 = lp_norm(&nf, 4, grid).unwrap();
            assert!(PI / 3.0 * l4.integral >= 1.0 - 1e-9, "k={k}");
        }
    }

    #[test]
    fn weight24_forms_are_orthogonal() {
        let grid = DomainGrid::default();
        let gs = eigenforms_for_weight(24).unwrap();
        let g1 = l2_normalize(&gs[0], grid).unwrap();
        let g2 = l2_normalize(&gs[1], grid).unwrap();
        let ip = inner_product(&g1, &g2, grid).unwrap();
        assert!(ip.norm() < 1e-6, "<G1,G2> = {ip}");
        let self_ip = inner_product(&g1, &g1, grid).unwrap();
        assert!((self_ip.re - 1.0).abs() < 1e-6 && self_ip.im.abs() < 1e-10);
    }

    #[test]
    fn spectral_decomposition_k12() {
        let forms = eigenforms_for_weight(12).unwrap();
        let rep = spectral_check(&forms[0], DomainGrid::default()).unwrap();
        assert_eq!(rep.terms.len(), 2);
        assert!(
            rep.rel_gap < 1e-4,
            "l4^4 = {}, spectral sum = {}",
            rep.l4_fourth,
            rep.sum_squares
        );
    }

    #[test]
    fn watson_k12() {
        let n2 = 40 * 144;
        let fs = eigenforms_with_budget(12, n2).unwrap();
        let gs = eigenforms_with_budget(24, n2).unwrap();
        for g in gs.iter() {
            let rep = watson_check(&fs[0], g, DomainGrid::default()).unwrap();
            assert!(
                rep.rel_gap <= 1e-3,
                "g label {}: lhs {:.8e} rhs {:.8e} rel_gap {:.3e}",
                g.label,
                rep.lhs,
                rep.rhs,
                rep.rel_gap
            );
        }
    }

    #[test]
    fn triple_inner_weight_check() {
        let grid = DomainGrid::default();
        let fs = eigenforms_for_weight(12).unwrap();
        let nf = l2_normalize(&fs[0], grid).unwrap();
        assert!(triple_inner(&nf, &nf, grid).is_err());
    }
}
