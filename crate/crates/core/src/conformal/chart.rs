use super::Jet;
use crate::{Error, Result};

/// Inverse stereographic chart `ℝⁿ → Sⁿ ⊂ ℝⁿ⁺¹` with source at `−𝟏`.
pub fn chart_c(xi: &[f64]) -> Vec<f64> {
    let r2: f64 = xi.iter().map(|x| x * x).sum();
    let d = 1.0 + r2;
    let mut out = Vec::with_capacity(xi.len() + 1);
    out.push((1.0 - r2) / d);
    out.extend(xi.iter().map(|x| 2.0 * x / d));
    out
}

/// Conformal factor of the chart, `2 / (1 + |ξ|²)`.
pub fn kappa_c(xi: &[f64]) -> f64 {
    2.0 / (1.0 + xi.iter().map(|x| x * x).sum::<f64>())
}

pub fn chart_c_jet(xi: &[Jet<f64>]) -> Vec<Jet<f64>> {
    let r2 = norm_sq(xi);
    let inv = r2.add_const(1.0).recip();
    let mut out = Vec::with_capacity(xi.len() + 1);
    out.push(&(-&r2).add_const(1.0) * &inv);
    out.extend(xi.iter().map(|x| (x * &inv).scale(2.0)));
    out
}

pub fn kappa_c_jet(xi: &[Jet<f64>]) -> Jet<f64> {
    norm_sq(xi).add_const(1.0).recip().scale(2.0)
}

/// Back from the sphere: `x ↦ (x_1, …, x_n) / (1 + x_0)`.
pub fn chart_inverse(x: &[f64]) -> Result<Vec<f64>> {
    let d = 1.0 + x[0];
    if d.abs() < 1e-12 {
        return Err(Error::ChartDomain(format!("x_0 = {} is the chart pole", x[0])));
    }
    Ok(x[1..].iter().map(|v| v / d).collect())
}

fn norm_sq(xi: &[Jet<f64>]) -> Jet<f64> {
    let mut acc = &xi[0] * &xi[0];
    for x in &xi[1..] {
        acc = &acc + &(x * x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn origin_maps_to_north_point() {
        assert_eq!(chart_c(&[0.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(kappa_c(&[0.0, 0.0]), 2.0);
    }

    #[test]
    fn unit_vector_lands_on_equator() {
        let c = chart_c(&[1.0, 0.0]);
        assert_relative_eq!(c[0], 0.0);
        assert_relative_eq!(c[1], 1.0);
        assert_relative_eq!(c[2], 0.0);
        assert_relative_eq!(kappa_c(&[0.0, 1.0]), 1.0);
    }

    #[test]
    fn far_points_approach_south_pole() {
        let c = chart_c(&[3e4, -4e4]);
        assert_relative_eq!(c[0], -1.0, epsilon = 1e-8);
        assert!(c[1].abs() < 1e-4 && c[2].abs() < 1e-4);
    }

    #[test]
    fn chart_lands_on_sphere_and_inverts() {
        let xi = [0.3, -1.2, 0.7];
        let c = chart_c(&xi);
        assert_relative_eq!(c.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-15);
        let back = chart_inverse(&c).unwrap();
        for (a, b) in back.iter().zip(xi) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
        assert!(chart_inverse(&[-1.0, 0.0]).is_err());
    }
}
