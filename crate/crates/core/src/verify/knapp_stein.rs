//! Quadrature-backed checks: intertwining of the Riesz-type operator `J_λ`
//! and the weak form of the Fourier transform of `h_s`.

use std::f64::consts::PI;

use super::report::{rel_err, CheckReport, ErrorTracker};
use super::sampling::{self, GeneratorKind};
use crate::conformal::{ConformalMap, TestFunction};
use crate::quadrature::{integrate, integrate_periodic, QuadOptions};
use crate::special::gamma_real;
use crate::{Error, Result};

/// Quadrature settings for [`riesz_convolution`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsOptions {
    /// Target accuracy of each convolution value (relative).
    pub quad_tol: f64,
    /// Multiplier on the truncation radius (1 = default radius).
    pub radius_scale: f64,
}

impl Default for KsOptions {
    fn default() -> Self {
        KsOptions { quad_tol: 1e-6, radius_scale: 1.0 }
    }
}

/// `J_λ u(ξ) = Γ(λ−n/2)⁻¹ ∫ |ξ−η|^{2λ−2n} u(η) dη` for `n ∈ {1, 2}` and
/// `λ > n/2`, where `|u(η)|` is dominated by a Gaussian of the given center
/// and width. Polar coordinates around `ξ`; the radial variable is
/// substituted `r = R v^k` so the weight `r^{2λ−n−1}` becomes a polynomial in `v`.
pub fn riesz_convolution(
    n: usize,
    lambda: f64,
    xi: &[f64],
    u: &dyn Fn(&[f64]) -> f64,
    center: &[f64],
    width: f64,
    opts: &KsOptions,
) -> Result<f64> {
    if !(1..=2).contains(&n) || xi.len() != n {
        return Err(Error::OutOfRange(format!("convolution quadrature implemented for n ∈ {{1, 2}}, got {n}")));
    }
    let a = 2.0 * lambda - n as f64;
    if a <= 0.0 {
        return Err(Error::OutOfRange(format!("need λ > n/2 for absolute convergence, got λ = {lambda}")));
    }
    let tail = opts.quad_tol / 10.0;
    let dist = xi.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum::<f64>().sqrt();
    let radius = opts.radius_scale * (dist + width * ((1.0 / tail).ln() + 4.0).sqrt());
    let m = (2.0 * a).ceil().max(1.0);
    let k = m / a;
    let weight = radius.powf(a) * k;
    let inner = QuadOptions { abs_tol: 1e-300, rel_tol: (opts.quad_tol * 1e-3).max(1e-13), max_evals: 100_000 };
    let radial = |dir: &[f64]| -> Result<f64> {
        let mut p = vec![0.0; n];
        let r = integrate(
            |v: f64| {
                let r = radius * v.powf(k);
                for j in 0..n {
                    p[j] = xi[j] + r * dir[j];
                }
                v.powi(m as i32 - 1) * u(&p)
            },
            0.0,
            1.0,
            &inner,
        )?;
        Ok(weight * r.value)
    };
    let integral = if n == 1 {
        radial(&[1.0])? + radial(&[-1.0])?
    } else {
        integrate_periodic(
            |th| radial(&[th.cos(), th.sin()]),
            2.0 * PI,
            16,
            (opts.quad_tol * 1e-2).max(1e-13),
            1e-300,
            1 << 14,
        )?
        .value
    };
    let norm = gamma_real(lambda - n as f64 / 2.0)
        .ok_or_else(|| Error::PoleAtLambda(format!("{lambda} (normalization)")))?;
    Ok(integral / norm)
}

fn gaussian_envelope(f: &TestFunction) -> Result<(Vec<f64>, f64)> {
    match f {
        TestFunction::GaussianBump { center, width, .. } => Ok((center.clone(), *width)),
        TestFunction::Polynomial(_) => Err(Error::OutOfRange("convolution needs a Gaussian test function".into())),
    }
}

/// Relative error of `J_λ(ρ_λ(g)f)(ξ) = ρ_{n−λ}(g)(J_λ f)(ξ)` at one point;
/// `g` is a word of translations, rotations and dilations.
pub fn ks_error(lambda: f64, g: &ConformalMap, f: &TestFunction, xi: &[f64], opts: &KsOptions) -> Result<f64> {
    if g.contains_inversion() {
        return Err(Error::InvalidGenerator("the quadrature check takes similarities only".into()));
    }
    let n = g.dim();
    let nf = n as f64;
    let (m, width) = gaussian_envelope(f)?;
    let ginv = g.inverse();
    let moved = |eta: &[f64]| -> f64 {
        let (y, kappa) = ginv.act_with_kappa(eta).expect("similarities are defined everywhere");
        kappa.powf(lambda) * f.eval(&y).expect("dimension checked")
    };
    let (gm, scale) = g.act_with_kappa(&m)?;
    let lhs = riesz_convolution(n, lambda, xi, &moved, &gm, width * scale, opts)?;
    let plain = |eta: &[f64]| f.eval(eta).expect("dimension checked");
    let (y, kappa) = ginv.act_with_kappa(xi)?;
    let rhs = kappa.powf(nf - lambda) * riesz_convolution(n, lambda, &y, &plain, &m, width, opts)?;
    Ok(rel_err(lhs, rhs, 0.0))
}

pub fn check_ks_intertwine(
    lambda: f64,
    g: &ConformalMap,
    f: &TestFunction,
    points: &[Vec<f64>],
    opts: &KsOptions,
    tol: f64,
) -> Result<CheckReport> {
    let mut t = ErrorTracker::new();
    for xi in points {
        t.record(ks_error(lambda, g, f, xi, opts)?, || format!("λ={lambda} ξ={xi:?} word={:?}", g.word()));
    }
    Ok(t.finish("knapp_stein", tol))
}

/// Seeded run over `n ∈ dims`, `λ ∈ {0.8n, 1.1n}` and one dilation, one
/// translation and one rotation, with `points` evaluation points each.
pub fn sampled_ks(dims: &[usize], points: usize, seed: u64, opts: &KsOptions, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "knapp_stein");
    let mut t = ErrorTracker::new();
    for &n in dims {
        for lambda in [0.8 * n as f64, 1.1 * n as f64] {
            for kind in [GeneratorKind::Dilation, GeneratorKind::Translation, GeneratorKind::Rotation] {
                let g = ConformalMap::from_word(n, vec![sampling::generator(&mut rng, n, kind, false)])?;
                let f = TestFunction::gaussian(sampling::point(&mut rng, n, 1.0), sampling::uniform(&mut rng, 0.7, 1.3))?;
                let center = g.act(f.center().expect("Gaussian"))?;
                for _ in 0..points {
                    let xi: Vec<f64> = center.iter().map(|c| c + sampling::uniform(&mut rng, -1.0, 1.0)).collect();
                    let err = ks_error(lambda, &g, &f, &xi, opts)?;
                    t.record(err, || format!("n={n} λ={lambda} ξ={xi:?} word={:?} f={f:?}", g.word()));
                }
            }
        }
    }
    Ok(t.finish("knapp_stein", tol))
}

/// `J_1 e^{−ξ²} ≡ 1` in dimension one (kernel exponent 0, `∫e^{−η²} = √π = Γ(1/2)`).
pub fn check_j1_gaussian(points: &[f64], opts: &KsOptions, tol: f64) -> Result<CheckReport> {
    let f = |eta: &[f64]| (-eta[0] * eta[0]).exp();
    let mut t = ErrorTracker::new();
    for &x in points {
        let v = riesz_convolution(1, 1.0, &[x], &f, &[0.0], 1.0, opts)?;
        t.record(rel_err(v, 1.0, 0.0), || format!("ξ={x} value={v}"));
    }
    Ok(t.finish("j1_gaussian", tol))
}

/// `∫_0^∞ r^{a−1} e^{−r²/c} dr` by quadrature (`a > 0`).
fn radial_moment(a: f64, c: f64) -> Result<f64> {
    let radius = (c * 50.0).sqrt();
    let m = (2.0 * a).ceil().max(1.0);
    let k = m / a;
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-13, max_evals: 100_000 };
    let r = integrate(
        |v: f64| {
            let r = radius * v.powf(k);
            v.powi(m as i32 - 1) * (-r * r / c).exp()
        },
        0.0,
        1.0,
        &opts,
    )?;
    Ok(radius.powf(a) * k * r.value)
}

/// The three quantities of the pairing `⟨h_s, ĝ⟩ = ⟨ĥ_s, g⟩` for
/// `g = e^{−|ξ|²}`: left side, right side (both by radial quadrature), and
/// the closed form `ω π^{n/2} 2^{n+s−1}` with `ω = |S^{n−1}|`.
pub fn hs_pairing_values(n: usize, s: f64) -> Result<(f64, f64, f64)> {
    let nf = n as f64;
    if !(s > -nf && s < 0.0) {
        return Err(Error::OutOfRange(format!("pairing needs −n < s < 0, got s = {s}")));
    }
    let g = |z: f64| gamma_real(z).ok_or_else(|| Error::PoleAtLambda(format!("Γ({z})")));
    let omega = 2.0 * PI.powf(nf / 2.0) / g(nf / 2.0)?;
    let pi_half_n = PI.powf(nf / 2.0);
    // ĝ(η) = π^{n/2} e^{−|η|²/4}
    let lhs = pi_half_n * omega / g((nf + s) / 2.0)? * radial_moment(s + nf, 4.0)?;
    // ĥ_s = 2^{n+s} π^{n/2} h_{−n−s}, h_{−n−s}(ξ) = |ξ|^{−n−s} / Γ(−s/2)
    let rhs = 2f64.powf(nf + s) * pi_half_n * omega / g(-s / 2.0)? * radial_moment(-s, 1.0)?;
    let closed = omega * pi_half_n * 2f64.powf(nf + s - 1.0);
    Ok((lhs, rhs, closed))
}

pub fn check_hs_fourier_pairing(n: usize, s: f64, tol: f64) -> Result<CheckReport> {
    let (lhs, rhs, closed) = hs_pairing_values(n, s)?;
    let mut t = ErrorTracker::new();
    let err = rel_err(lhs, rhs, 0.0).max(rel_err(lhs, closed, 0.0)).max(rel_err(rhs, closed, 0.0));
    t.record(err, || format!("n={n} s={s} lhs={lhs} rhs={rhs} closed={closed}"));
    Ok(t.finish("hs_pairing", tol))
}

/// All `(n, s)` pairs in one report.
pub fn check_hs_fourier_pairings(cases: &[(usize, f64)], tol: f64) -> Result<CheckReport> {
    let mut t = ErrorTracker::new();
    for &(n, s) in cases {
        let (lhs, rhs, closed) = hs_pairing_values(n, s)?;
        let err = rel_err(lhs, rhs, 0.0).max(rel_err(lhs, closed, 0.0)).max(rel_err(rhs, closed, 0.0));
        t.record(err, || format!("n={n} s={s} lhs={lhs} rhs={rhs} closed={closed}"));
    }
    Ok(t.finish("hs_pairing", tol))
}
