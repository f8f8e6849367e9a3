//! Covariance of `E_λ` under `ρ_λ` and of the restricted operators `E_N(λ)`
//! under `(ρ_λ, ρ′_{λ+N})`, evaluated with exact Taylor jets.

use super::report::{rel_err, CheckReport, ErrorTracker};
use super::sampling::{self, ALL_KINDS};
use crate::conformal::{rho_jet, ConformalMap, Jet, TestFunction};
use crate::diffop::DiffOp;
use crate::juhl::{build_e, build_en_family};
use crate::{Error, Result};

/// Relative error of `E_λ(ρ_λ(g)f)(ξ) = ρ_{λ+1}(g)(E_λ f)(ξ)` at one point.
pub fn covariance_e_error(e: &DiffOp, lambda: f64, g: &ConformalMap, f: &TestFunction, xi: &[f64]) -> Result<f64> {
    let lhs_jet = rho_jet(lambda, g, f, xi, 2)?;
    let (lhs, lhs_scale) = e.apply_jet_with_scale(lambda, xi, &lhs_jet)?;
    let (y, kappa) = g.inverse().act_with_kappa(xi)?;
    let (ef, ef_scale) = e.apply_jet_with_scale(lambda, &y, &f.eval_jet(&Jet::coordinates(&y, 2))?)?;
    let factor = kappa.powf(lambda + 1.0);
    Ok(rel_err(lhs, factor * ef, lhs_scale.max(factor * ef_scale)))
}

/// `E_λ∘ρ_λ(g) = ρ_{λ+1}(g)∘E_λ` at the given points; `g` must preserve the hyperplane.
pub fn check_covariance_e(
    n: usize,
    lambda: f64,
    g: &ConformalMap,
    f: &TestFunction,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<CheckReport> {
    require_tangential(g)?;
    let e = build_e(n);
    let mut t = ErrorTracker::new();
    for xi in points {
        t.record(covariance_e_error(&e, lambda, g, f, xi)?, || format!("ξ={xi:?}"));
    }
    Ok(t.finish("covariance_E", tol))
}

fn require_tangential(g: &ConformalMap) -> Result<()> {
    if g.preserves_hyperplane() {
        Ok(())
    } else {
        Err(Error::InvalidGenerator("covariance needs a map preserving ξ_n = 0".into()))
    }
}

/// Seeded run: for each dimension, `samples` draws of `(λ, g, f, ξ)` with
/// words of length ≤ 3 cycling through the four generator kinds.
pub fn sampled_covariance_e(dims: &[usize], samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "covariance_E");
    let mut t = ErrorTracker::new();
    for &n in dims {
        let e = build_e(n);
        for k in 0..samples {
            let lambda = sampling::uniform(&mut rng, -1.5, 2.5);
            let f = sampling::gaussian(&mut rng, n)?;
            let g = sampling::word(&mut rng, n, 3, ALL_KINDS[k % 4], true)?;
            let xi = sampling::point_near_image(&mut rng, &g, f.center().expect("Gaussian"), 0.8)?;
            let err = covariance_e_error(&e, lambda, &g, &f, &xi)?;
            t.record(err, || format!("n={n} λ={lambda} ξ={xi:?} word={:?} f={f:?}", g.word()));
        }
    }
    Ok(t.finish("covariance_E", tol))
}

/// Relative error of `res E_{λ,N}(ρ_λ(g)f)(ξ′) = ρ′_{λ+N}(g)(res E_{λ,N} f)(ξ′)`.
/// `restricted` is `E_{λ,N}` with `ξ_n = 0` substituted; all its terms have
/// order exactly `N` and constant coefficients, so jets of order `N` suffice.
pub fn covariance_en_error(
    restricted: &DiffOp,
    order: u32,
    lambda: f64,
    g: &ConformalMap,
    f: &TestFunction,
    xi_prime: &[f64],
) -> Result<f64> {
    let n = restricted.dim();
    let mut p = xi_prime.to_vec();
    p.push(0.0);
    let lhs_jet = rho_jet(lambda, g, f, &p, order)?;
    let (lhs, lhs_scale) = restricted.apply_jet_with_scale(lambda, &p, &lhs_jet)?;
    let gp = g.restrict_to_hyperplane()?;
    let (mut y, kappa) = gp.inverse().act_with_kappa(xi_prime)?;
    y.push(0.0);
    let (ef, ef_scale) = restricted.apply_jet_with_scale(lambda, &y, &f.eval_jet(&Jet::coordinates(&y, order))?)?;
    debug_assert_eq!(y.len(), n);
    let factor = kappa.powf(lambda + order as f64);
    Ok(rel_err(lhs, factor * ef, lhs_scale.max(factor * ef_scale)))
}

pub fn check_covariance_en(
    n: usize,
    order: u32,
    lambda: f64,
    g: &ConformalMap,
    f: &TestFunction,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<CheckReport> {
    if !(1..=4).contains(&order) {
        return Err(Error::OutOfRange(format!("numeric restricted covariance supports N ≤ 4, got {order}")));
    }
    require_tangential(g)?;
    let restricted = build_en_family(n, order).pop().expect("order ≥ 1").restrict();
    let mut t = ErrorTracker::new();
    for xi in points {
        t.record(covariance_en_error(&restricted, order, lambda, g, f, xi)?, || format!("ξ′={xi:?}"));
    }
    Ok(t.finish("covariance_EN", tol))
}

/// Seeded run over `dims × orders` with `samples` draws each.
pub fn sampled_covariance_en(dims: &[usize], orders: &[u32], samples: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "covariance_EN");
    let mut t = ErrorTracker::new();
    let max_order = orders.iter().copied().max().unwrap_or(0);
    if max_order > 4 {
        return Err(Error::OutOfRange(format!("numeric restricted covariance supports N ≤ 4, got {max_order}")));
    }
    for &n in dims {
        if n < 2 {
            return Err(Error::OutOfRange("restricted covariance needs n ≥ 2".into()));
        }
        let family: Vec<DiffOp> = build_en_family(n, max_order).iter().map(DiffOp::restrict).collect();
        for &order in orders {
            let restricted = &family[order as usize - 1];
            for k in 0..samples {
                let lambda = sampling::uniform(&mut rng, -1.5, 2.5);
                let f = sampling::gaussian(&mut rng, n)?;
                let g = sampling::word(&mut rng, n, 3, ALL_KINDS[k % 4], true)?;
                let gp = g.restrict_to_hyperplane()?;
                let center = &f.center().expect("Gaussian")[..n - 1];
                let xi = sampling::point_near_image(&mut rng, &gp, center, 0.8)?;
                let err = covariance_en_error(restricted, order, lambda, &g, &f, &xi)?;
                t.record(err, || format!("n={n} N={order} λ={lambda} ξ′={xi:?} word={:?} f={f:?}", g.word()));
            }
        }
    }
    Ok(t.finish("covariance_EN", tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::rho;

    fn gauss3() -> TestFunction {
        TestFunction::gaussian(vec![0.3, -0.2, 0.4], 0.9).unwrap()
    }

    #[test]
    fn dilation_closed_form() {
        // LHS equals r^{−(λ+1)} (E_λ f)(ξ/r) by homogeneity
        let (r, lambda) = (1.7, 0.37);
        let g = ConformalMap::dilation(3, r).unwrap();
        let f = gauss3();
        let e = build_e(3);
        let xi = [0.5, 0.1, -0.3];
        let lhs = e.apply_jet(lambda, &xi, &rho(lambda, &g, &f, &xi).unwrap()).unwrap();
        let y: Vec<f64> = xi.iter().map(|v| v / r).collect();
        let ef = e.apply_jet(lambda, &y, &f.eval_jet(&Jet::coordinates(&y, 2)).unwrap()).unwrap();
        assert!((lhs - r.powf(-lambda - 1.0) * ef).abs() <= 1e-13 * ef.abs());
    }

    #[test]
    fn tangential_translation_exact() {
        let g = ConformalMap::tangential_translation(vec![0.4, -0.7, 0.0]).unwrap();
        let pts = vec![vec![0.1, 0.2, 0.3], vec![-0.5, 0.0, 0.8]];
        let rep = check_covariance_e(3, 1.3, &g, &gauss3(), &pts, 1e-14).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn inversion_dimension_three() {
        let g = ConformalMap::inversion(3);
        let f = gauss3();
        let mut rng = sampling::rng(11, "test");
        let pts: Vec<Vec<f64>> =
            (0..50).map(|_| sampling::point_near_image(&mut rng, &g, &[0.3, -0.2, 0.4], 0.8).unwrap()).collect();
        let rep = check_covariance_e(3, 0.37, &g, &f, &pts, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    /// `E_λ u` with all derivatives by central differences of the value alone.
    fn e_by_differences(n: usize, lambda: f64, u: &dyn Fn(&[f64]) -> f64, xi: &[f64]) -> f64 {
        let h = 1e-3;
        let at = |shifts: &[(usize, f64)]| {
            let mut p = xi.to_vec();
            for &(k, s) in shifts {
                p[k] += s;
            }
            u(&p)
        };
        let m = n - 1;
        // fourth-order stencils
        let d_n = (-at(&[(m, 2.0 * h)]) + 8.0 * at(&[(m, h)]) - 8.0 * at(&[(m, -h)]) + at(&[(m, -2.0 * h)])) / (12.0 * h);
        let lap: f64 = (0..n)
            .map(|k| {
                (-at(&[(k, 2.0 * h)]) + 16.0 * at(&[(k, h)]) - 30.0 * at(&[]) + 16.0 * at(&[(k, -h)])
                    - at(&[(k, -2.0 * h)]))
                    / (12.0 * h * h)
            })
            .sum();
        (2.0 * lambda - n as f64 + 2.0) * d_n + xi[m] * lap
    }

    #[test]
    fn finite_difference_spot_checks() {
        let (n, lambda) = (3, 0.37);
        let g = ConformalMap::inversion(3);
        let f = gauss3();
        let e = build_e(n);
        for xi in [[0.6, -0.3, 0.7], [-0.2, 0.5, 1.1], [1.0, 0.4, -0.6]] {
            let u = |p: &[f64]| rho_jet(lambda, &g, &f, p, 0).unwrap().value();
            let fd = e_by_differences(n, lambda, &u, &xi);
            let jet = e.apply_jet(lambda, &xi, &rho(lambda, &g, &f, &xi).unwrap()).unwrap();
            assert!((fd - jet).abs() <= 1e-7 * jet.abs().max(1.0), "fd {fd} jet {jet}");
            let (y, kappa) = g.inverse().act_with_kappa(&xi).unwrap();
            let rhs = kappa.powf(lambda + 1.0) * e_by_differences(n, lambda, &|p: &[f64]| f.eval(p).unwrap(), &y);
            assert!((fd - rhs).abs() <= 1e-6 * rhs.abs().max(1.0), "fd {fd} rhs {rhs}");
        }
    }

    #[test]
    fn restricted_order_one_matches_unrestricted() {
        let n = 3;
        let lambda = 0.8;
        let g = ConformalMap::inversion(n).then(&ConformalMap::dilation(n, 1.4).unwrap()).unwrap();
        let f = gauss3();
        let xi = [0.7, -0.4];
        let restricted = build_en_family(n, 1).pop().unwrap().restrict();
        let err = covariance_en_error(&restricted, 1, lambda, &g, &f, &xi).unwrap();
        assert!(err <= 1e-12);
        let full = covariance_e_error(&build_e(n), lambda, &g, &f, &[0.7, -0.4, 0.0]).unwrap();
        assert!(full <= 1e-12);
    }

    #[test]
    fn restricted_dilation_order_two() {
        let g = ConformalMap::dilation(3, 0.6).unwrap();
        let pts = vec![vec![0.2, 0.3], vec![-0.4, 0.1]];
        let rep = check_covariance_en(3, 2, 1.1, &g, &gauss3(), &pts, 1e-12).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn rejects_maps_leaving_the_hyperplane() {
        let g = ConformalMap::translation(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            check_covariance_e(3, 1.0, &g, &gauss3(), &[vec![0.0, 0.0, 0.0]], 1e-9),
            Err(Error::InvalidGenerator(_))
        ));
    }
}
