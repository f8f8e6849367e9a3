//! Geometry of the non-compact picture: conformal maps of ℝⁿ built from
//! translations, rotations, dilations and the chart-change inversion, their
//! conformal factors, the stereographic chart onto Sⁿ, Schwartz test
//! functions, and the twisted actions `ρ_λ`, `ρ′_μ` evaluated on jets.

mod chart;
mod jet;
mod map;
mod testfn;

pub use chart::{chart_c, chart_c_jet, chart_inverse, kappa_c, kappa_c_jet};
pub use jet::Jet;
pub use map::{ConformalMap, Generator, SINGULAR_EPS};
pub use testfn::{RealPoly, TestFunction};

use crate::scalar::Scalar;
use crate::Result;

/// `ρ_λ(g)f` as a Taylor jet of the given order at `xi`:
/// `ρ_λ(g)f(ξ) = κ(g⁻¹, ξ)^λ f(g⁻¹(ξ))`.
pub fn rho_jet<T: Scalar>(
    lambda: T,
    g: &ConformalMap,
    f: &TestFunction,
    xi: &[f64],
    order: u32,
) -> Result<Jet<T>> {
    let coords = Jet::coordinates(xi, order);
    let (image, kappa) = g.inverse().act_jet(&coords)?;
    let fval = f.eval_jet(&image)?;
    Ok(&kappa.cast::<T>().pow(lambda) * &fval.cast::<T>())
}

/// Second-order jet (value, gradient, Hessian) of `ρ_λ(g)f` at `xi`.
pub fn rho<T: Scalar>(lambda: T, g: &ConformalMap, f: &TestFunction, xi: &[f64]) -> Result<Jet<T>> {
    rho_jet(lambda, g, f, xi, 2)
}

/// `ρ′_μ(g)f′` on ℝⁿ⁻¹ for `g` preserving the hyperplane `ξ_n = 0`.
pub fn rho_prime_jet<T: Scalar>(
    mu: T,
    g: &ConformalMap,
    f: &TestFunction,
    xi: &[f64],
    order: u32,
) -> Result<Jet<T>> {
    let gp = g.restrict_to_hyperplane()?;
    rho_jet(mu, &gp, f, xi, order)
}

pub fn rho_prime<T: Scalar>(mu: T, g: &ConformalMap, f: &TestFunction, xi: &[f64]) -> Result<Jet<T>> {
    rho_prime_jet(mu, g, f, xi, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn gauss(m: &[f64]) -> TestFunction {
        TestFunction::gaussian(m.to_vec(), 0.9).unwrap()
    }

    #[test]
    fn identity_action_is_f() {
        let f = gauss(&[0.2, -0.1, 0.4]);
        let xi = [0.3, 0.1, 0.5];
        let j: Jet<f64> = rho(1.3, &ConformalMap::identity(3), &f, &xi).unwrap();
        let direct = f.eval_jet(&Jet::coordinates(&xi, 2)).unwrap();
        for a in [[0u32, 0, 0], [1, 0, 0], [0, 1, 1], [0, 0, 2]] {
            assert_relative_eq!(j.derivative(&a), direct.derivative(&a), max_relative = 1e-14);
        }
    }

    #[test]
    fn dilation_action_closed_form() {
        let f = gauss(&[0.2, 0.5]);
        let (r, lambda) = (2.0, 0.7);
        let g = ConformalMap::dilation(2, r).unwrap();
        let xi = [0.6, 0.8];
        let j: Jet<f64> = rho(lambda, &g, &f, &xi).unwrap();
        let want = r.powf(-lambda) * f.eval(&[xi[0] / r, xi[1] / r]).unwrap();
        assert_relative_eq!(j.value(), want, max_relative = 1e-14);
    }

    #[test]
    fn inversion_action_at_unit_vector() {
        let f = gauss(&[1.0, 0.0]);
        let g = ConformalMap::inversion(2);
        let xi = [1.0, 0.0];
        let j: Jet<f64> = rho(2.0, &g, &f, &xi).unwrap();
        assert_relative_eq!(j.value(), f.eval(&[-1.0, 0.0]).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn complex_lambda_matches_real_part_when_kappa_is_one() {
        let f = gauss(&[0.0, 0.3]);
        let g = ConformalMap::tangential_translation(vec![0.4, 0.0]).unwrap();
        let xi = [0.1, 0.2];
        let j: Jet<Complex64> = rho(Complex64::new(0.5, 2.0), &g, &f, &xi).unwrap();
        assert_relative_eq!(j.value().re, f.eval(&[-0.3, 0.2]).unwrap(), max_relative = 1e-14);
        assert!(j.value().im.abs() < 1e-15);
    }

    #[test]
    fn rho_prime_dilation() {
        let f = TestFunction::gaussian(vec![0.3], 1.1).unwrap();
        let g = ConformalMap::dilation(2, 3.0).unwrap();
        let j: Jet<f64> = rho_prime(0.4, &g, &f, &[0.9]).unwrap();
        let want = 3.0f64.powf(-0.4) * f.eval(&[0.3]).unwrap();
        assert_relative_eq!(j.value(), want, max_relative = 1e-14);
    }

    #[test]
    fn restriction_commutes_with_action() {
        let f = TestFunction::gaussian(vec![0.3, -0.2, 0.5], 1.2).unwrap();
        let g = ConformalMap::from_word(
            3,
            vec![
                Generator::Dilation(1.5),
                Generator::InversionS,
                Generator::Translation(vec![0.2, -0.1, 0.0]),
            ],
        )
        .unwrap();
        let xi = [0.7, 0.4, 0.0];
        let full: Jet<f64> = rho(0.8, &g, &f, &xi).unwrap();
        let res = f.restrict_hyperplane().unwrap();
        let part: Jet<f64> = rho_prime(0.8, &g, &res, &xi[..2]).unwrap();
        assert_relative_eq!(full.value(), part.value(), max_relative = 1e-13);
    }
}
