//! Identities of the conformal geometry: cocycle, conformal factor versus
//! Jacobian, the hyperplane relation `g(ξ)_n = κ(g,ξ)ξ_n`, conformality of
//! the chart, the chord formula on the sphere and the intertwining property
//! of multiplication by `ξ_n`.

use rand::Rng;

use super::report::{rel_err, CheckReport, ErrorTracker};
use super::sampling::{self, GeneratorKind, ALL_KINDS, INVERSION_GUARD};
use crate::conformal::{chart_c, chart_c_jet, kappa_c, rho_jet, ConformalMap, Jet};
use crate::Result;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dim_for(k: usize, n_min: usize, n_max: usize) -> usize {
    n_min + k % (n_max - n_min + 1)
}

/// A word and a point at which every inversion in it is evaluated at
/// distance ≥ the guard from the origin.
fn guarded_sample(
    rng: &mut impl Rng,
    n: usize,
    forced: GeneratorKind,
    tangential: bool,
) -> Result<(ConformalMap, Vec<f64>)> {
    loop {
        let g = sampling::word(rng, n, 3, forced, tangential)?;
        let xi = sampling::point(rng, n, 2.0);
        if g.min_inversion_radius(&xi)? >= INVERSION_GUARD {
            return Ok((g, xi));
        }
    }
}

/// `κ(g₁g₂, ξ) = κ(g₁, g₂ξ) κ(g₂, ξ)` for random words in the full group.
pub fn check_cocycle(samples: usize, n_min: usize, n_max: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "cocycle");
    let mut t = ErrorTracker::new();
    for k in 0..samples {
        let n = dim_for(k, n_min, n_max);
        let (g2, xi) = guarded_sample(&mut rng, n, ALL_KINDS[k % 4], false)?;
        let y = g2.act(&xi)?;
        let g1 = loop {
            let g = sampling::word(&mut rng, n, 3, ALL_KINDS[(k / 4) % 4], false)?;
            if g.min_inversion_radius(&y)? >= INVERSION_GUARD {
                break g;
            }
        };
        let composite = g2.then(&g1)?.kappa(&xi)?;
        let product = g1.kappa(&y)? * g2.kappa(&xi)?;
        t.record(rel_err(composite, product, 0.0), || format!("n={n} ξ={xi:?} g1={:?} g2={:?}", g1.word(), g2.word()));
    }
    Ok(t.finish("cocycle", tol))
}

/// `‖Dg(ξ)η‖ / ‖η‖ = κ(g, ξ)` with `Dg` from first-order jets.
pub fn check_conformal_factor(samples: usize, n_min: usize, n_max: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "conformal_factor");
    let mut t = ErrorTracker::new();
    for k in 0..samples {
        let n = dim_for(k, n_min, n_max);
        let (g, xi) = guarded_sample(&mut rng, n, ALL_KINDS[k % 4], false)?;
        let jac = g.jacobian(&xi)?;
        let kappa = g.kappa(&xi)?;
        let eta = sampling::unit_vector(&mut rng, n);
        let img = &jac * nalgebra::DVector::from_vec(eta);
        t.record(rel_err(img.norm(), kappa, 0.0), || format!("n={n} ξ={xi:?} word={:?}", g.word()));
    }
    Ok(t.finish("conformal_factor_jet", tol))
}

/// `g(ξ)_n = κ(g, ξ) ξ_n` for words preserving the hyperplane.
pub fn check_hyperplane_factor(samples: usize, n_min: usize, n_max: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "hyperplane_factor");
    let mut t = ErrorTracker::new();
    for k in 0..samples {
        let n = dim_for(k, n_min, n_max);
        let (g, xi) = guarded_sample(&mut rng, n, ALL_KINDS[k % 4], true)?;
        let (img, kappa) = g.act_with_kappa(&xi)?;
        t.record(rel_err(img[n - 1], kappa * xi[n - 1], 0.0), || format!("n={n} ξ={xi:?} word={:?}", g.word()));
    }
    Ok(t.finish("hyperplane_factor", tol))
}

/// `‖Dc(ξ)η‖ = κ_c(ξ)‖η‖` for the stereographic chart.
pub fn check_chart_conformality(samples: usize, n_min: usize, n_max: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "chart_conformality");
    let mut t = ErrorTracker::new();
    for k in 0..samples {
        let n = dim_for(k, n_min, n_max);
        let xi = sampling::point(&mut rng, n, 3.0);
        let c = chart_c_jet(&Jet::coordinates(&xi, 1));
        let eta = sampling::unit_vector(&mut rng, n);
        let img: Vec<f64> = c.iter().map(|cj| cj.grad().iter().zip(&eta).map(|(a, b)| a * b).sum()).collect();
        t.record(rel_err(norm(&img), kappa_c(&xi), 0.0), || format!("n={n} ξ={xi:?} η={eta:?}"));
    }
    Ok(t.finish("chart_conformality", tol))
}

/// `|c(ξ) − c(η)|² = κ_c(ξ) |ξ − η|² κ_c(η)`.
pub fn check_chart_distance(samples: usize, n_min: usize, n_max: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "chart_distance");
    let mut t = ErrorTracker::new();
    for k in 0..samples {
        let n = dim_for(k, n_min, n_max);
        let xi = sampling::point(&mut rng, n, 3.0);
        let eta = sampling::point(&mut rng, n, 3.0);
        let (cx, ce) = (chart_c(&xi), chart_c(&eta));
        let lhs: f64 = cx.iter().zip(&ce).map(|(a, b)| (a - b) * (a - b)).sum();
        let d2: f64 = xi.iter().zip(&eta).map(|(a, b)| (a - b) * (a - b)).sum();
        let rhs = kappa_c(&xi) * d2 * kappa_c(&eta);
        t.record(rel_err(lhs, rhs, 0.0), || format!("n={n} ξ={xi:?} η={eta:?}"));
    }
    Ok(t.finish("chart_distance", tol))
}

/// `ξ_n ρ_λ(g)f(ξ) = ρ_{λ−1}(g)(ξ_n f)(ξ)` for `g` preserving the hyperplane.
pub fn check_m_intertwining(samples: usize, n_min: usize, n_max: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "m_intertwining");
    let mut t = ErrorTracker::new();
    for k in 0..samples {
        let n = dim_for(k, n_min, n_max);
        let lambda = sampling::uniform(&mut rng, -2.0, 3.0);
        let f = sampling::gaussian(&mut rng, n)?;
        let (g, _) = guarded_sample(&mut rng, n, ALL_KINDS[k % 4], true)?;
        let ginv = g.inverse();
        let xi = sampling::point_near_image(&mut rng, &g, f.center().expect("Gaussian"), 0.8)?;
        let lhs = xi[n - 1] * rho_jet(lambda, &g, &f, &xi, 0)?.value();
        let (y, kappa) = ginv.act_with_kappa(&xi)?;
        let rhs = kappa.powf(lambda - 1.0) * y[n - 1] * f.eval(&y)?;
        t.record(rel_err(lhs, rhs, 0.0), || format!("n={n} λ={lambda} ξ={xi:?} word={:?}", g.word()));
    }
    Ok(t.finish("m_intertwining", tol))
}
