//! The operator families: the one-step operator `E_λ = (2λ−n+2)∂_n + ξ_n Δ`,
//! its compositions `E_{λ,N} = E_{λ+N−1} ∘ ⋯ ∘ E_λ`, the restricted operators
//! `E_N(λ) = res ∘ E_{λ,N}` with their tangential coefficients, and the
//! Γ-factor normalization data.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{factorial, int, lambda_vars, operator_vars, rational_to_f64, rational_to_string, Poly, Rational};
use crate::diffop::{DiffOp, TangentialOp};
use crate::special::gamma;
use crate::{Error, Result};

/// `E_λ` in dimension `n`, λ symbolic.
pub fn build_e(n: usize) -> DiffOp {
    assert!(n >= 1, "dimension must be at least 1");
    let vars = operator_vars(n);
    let first = Poly::affine(vars.clone(), 0, int(2 - n as i64), int(2));
    let xi_n = Poly::var_at(vars, n);
    let transversal = DiffOp::partial(n, n - 1, 1).mul_poly(&first).expect("same ring");
    let radial = DiffOp::laplacian(n).mul_poly(&xi_n).expect("same ring");
    transversal.checked_add(&radial).expect("same dimension")
}

/// `E_{λ,N}`; `N = 0` gives the identity.
pub fn build_en(n: usize, order: u32) -> DiffOp {
    build_en_family(n, order).pop().unwrap_or_else(|| DiffOp::identity(n))
}

/// `[E_{λ,1}, …, E_{λ,N}]`, each obtained from the previous one by one more
/// left factor `E_{λ+k}`.
pub fn build_en_family(n: usize, max_order: u32) -> Vec<DiffOp> {
    let e = build_e(n);
    let mut out: Vec<DiffOp> = Vec::with_capacity(max_order as usize);
    for k in 0..max_order {
        let next = match out.last() {
            None => e.clone(),
            Some(prev) => e.shift_lambda(&int(k as i64)).compose(prev).expect("same dimension"),
        };
        out.push(next);
    }
    out
}

/// Tangential coefficients of `E_N(λ) = res ∘ E_{λ,N}`.
pub fn juhl_coeffs(n: usize, order: u32) -> Result<TangentialOp> {
    if order == 0 {
        return Err(Error::OutOfRange("order N must be at least 1".into()));
    }
    coeffs_of(&build_en(n, order), order)
}

/// Tangential coefficients for every order `1..=max_order`.
pub fn juhl_coeffs_family(n: usize, max_order: u32) -> Result<Vec<TangentialOp>> {
    build_en_family(n, max_order)
        .iter()
        .enumerate()
        .map(|(k, op)| coeffs_of(op, k as u32 + 1))
        .collect()
}

pub(crate) fn coeffs_of(en: &DiffOp, order: u32) -> Result<TangentialOp> {
    let t = en.restrict().decompose_tangential(order)?;
    let expected = a0_closed_form(en.dim(), order);
    let a0 = t.coeffs()[0].as_poly().ok_or_else(|| Error::NonTangentialForm("a_0 not polynomial".into()))?;
    if a0 != expected {
        return Err(Error::NonTangentialForm(format!(
            "a_0 = {a0} differs from the closed form {expected}"
        )));
    }
    Ok(t)
}

/// The affine factors `2λ − n + m`, `m = N+1..=2N`, whose product is `a_0(λ, N)`.
pub fn a0_factors(n: usize, order: u32) -> Vec<Poly> {
    (order + 1..=2 * order)
        .map(|m| Poly::affine(lambda_vars(), 0, int(m as i64 - n as i64), int(2)))
        .collect()
}

/// `a_0(λ, N) = ∏_{m=N+1}^{2N} (2λ − n + m)` as a polynomial in λ.
pub fn a0_closed_form(n: usize, order: u32) -> Poly {
    a0_factors(n, order)
        .iter()
        .fold(Poly::one(lambda_vars()), |acc, f| &acc * f)
}

/// `E_μ ξ_n^k = k(2μ − n + 1 + k) ξ_n^{k−1}`, over the operator variables with μ ≡ λ.
pub fn power_image(n: usize, k: u32) -> Poly {
    let vars = operator_vars(n);
    if k == 0 {
        return Poly::zero(vars);
    }
    let c = Poly::affine(vars.clone(), 0, int(1 + k as i64 - n as i64), int(2)).scale(&int(k as i64));
    let mut e = vec![0; n + 1];
    e[n] = k - 1;
    let mono = Poly::term(vars, e, Rational::one()).expect("length matches");
    &c * &mono
}

/// `E_{λ,N}(ξ_n^N) = N! a_0(λ, N)`, over the operator variables.
pub fn top_constant(n: usize, order: u32) -> Poly {
    let vars = operator_vars(n);
    a0_closed_form(n, order)
        .embed(&vars)
        .expect("λ is an operator variable")
        .scale(&Rational::from_integer(factorial(order)))
}

/// `Γ(slope·λ + offset)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFactor {
    pub slope: i64,
    pub offset: i64,
    pub exponent: i32,
}

impl GammaFactor {
    fn new(slope: i64, offset: i64) -> Self {
        GammaFactor { slope, offset, exponent: 1 }
    }

    fn argument(&self, lambda: Complex64) -> Complex64 {
        lambda * self.slope as f64 + self.offset as f64
    }

    fn describe(&self) -> String {
        let lam = match self.slope {
            1 => "λ".to_string(),
            -1 => "-λ".to_string(),
            s => format!("{s}λ"),
        };
        let arg = match self.offset {
            0 => lam,
            o if self.slope < 0 => format!("{o}{lam}"),
            o if o > 0 => format!("{lam}+{o}"),
            o => format!("{lam}{o}"),
        };
        if self.exponent == 1 {
            format!("Γ({arg})")
        } else {
            format!("Γ({arg})^{}", self.exponent)
        }
    }
}

/// `π^pi_power ∏ Γ(…)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaProduct {
    pub pi_power: i64,
    pub factors: Vec<GammaFactor>,
}

impl GammaProduct {
    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(std::f64::consts::PI.powi(self.pi_power as i32), 0.0);
        for f in &self.factors {
            let z = f.argument(lambda);
            let g = gamma(z).ok_or_else(|| Error::PoleAtLambda(format!("{lambda} ({} at {z})", f.describe())))?;
            acc *= g.powi(f.exponent);
        }
        Ok(acc)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("π^{}", self.pi_power);
        for f in &self.factors {
            s.push('·');
            s.push_str(&f.describe());
        }
        s
    }

    fn to_json(&self) -> Value {
        json!({
            "pi_power": self.pi_power,
            "gamma": self.factors.iter().map(|f| json!({
                "slope": f.slope, "offset": f.offset, "exponent": f.exponent
            })).collect::<Vec<_>>(),
            "display": self.describe(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `prefactor · ∏ (2λ + offset)`: the factor turning Juhl's normalization into `E_N(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuhlRatio {
    pub parity: Parity,
    pub prefactor: Rational,
    pub offsets: Vec<i64>,
}

impl JuhlRatio {
    pub fn poly(&self) -> Poly {
        self.offsets.iter().fold(Poly::constant(lambda_vars(), self.prefactor.clone()), |acc, &o| {
            &acc * &Poly::affine(lambda_vars(), 0, int(o), int(2))
        })
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        self.offsets
            .iter()
            .fold(Complex64::new(rational_to_f64(&self.prefactor), 0.0), |acc, &o| acc * (lambda * 2.0 + o as f64))
    }

    pub fn describe(&self) -> String {
        let mut s = rational_to_string(&self.prefactor);
        for o in &self.offsets {
            match o.cmp(&0) {
                std::cmp::Ordering::Less => s.push_str(&format!("(2λ{o})")),
                std::cmp::Ordering::Equal => s.push_str("(2λ)"),
                std::cmp::Ordering::Greater => s.push_str(&format!("(2λ+{o})")),
            }
        }
        s
    }
}

/// Analytic normalization data attached to `(n, N)`. Γ-factors are never
/// expanded into the polynomial ring; they only carry numeric evaluators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationMeta {
    pub n: usize,
    pub order: u32,
    /// `π^{n(N−1)} Γ(λ+N) Γ(n−λ−N)` relating the two composite families.
    pub dtilde_factor: GammaProduct,
    /// `π^{n(N−1)} Γ(λ+N) Γ(n−λ)`: the same ratio recomputed by telescoping
    /// the one-step factors `Γ(λ+j+1)Γ(n−λ−j)` against `I_{λ+j}∘I_{n−λ−j}`.
    pub composed_factor: GammaProduct,
    /// One-step normalization `Γ(λ+1)Γ(n−λ)`.
    pub step_factor: GammaProduct,
    pub juhl_ratio: JuhlRatio,
}

impl NormalizationMeta {
    pub fn parity(&self) -> Parity {
        self.juhl_ratio.parity
    }

    pub fn eval_dtilde(&self, lambda: Complex64) -> Result<Complex64> {
        self.dtilde_factor.eval(lambda)
    }

    pub fn eval_juhl_ratio(&self, lambda: Complex64) -> Complex64 {
        self.juhl_ratio.eval(lambda)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "N": self.order,
            "dtilde_factor": self.dtilde_factor.to_json(),
            "composed_factor": self.composed_factor.to_json(),
            "step_factor": self.step_factor.to_json(),
            "juhl_ratio": {
                "parity": match self.juhl_ratio.parity { Parity::Even => "even", Parity::Odd => "odd" },
                "prefactor": rational_to_string(&self.juhl_ratio.prefactor),
                "linear_factor_offsets": self.juhl_ratio.offsets,
                "display": self.juhl_ratio.describe(),
            },
        })
    }
}

pub fn normalization_meta(n: usize, order: u32) -> Result<NormalizationMeta> {
    if order == 0 {
        return Err(Error::OutOfRange("order N must be at least 1".into()));
    }
    let (ni, oi) = (n as i64, order as i64);
    let pi_power = ni * (oi - 1);
    let dtilde_factor = GammaProduct {
        pi_power,
        factors: vec![GammaFactor::new(1, oi), GammaFactor::new(-1, ni - oi)],
    };
    let composed_factor = GammaProduct {
        pi_power,
        factors: vec![GammaFactor::new(1, oi), GammaFactor::new(-1, ni)],
    };
    let step_factor = GammaProduct { pi_power: 0, factors: vec![GammaFactor::new(1, 1), GammaFactor::new(-1, ni)] };
    let fact = |k: u32| Rational::from_integer(factorial(k));
    let two_pow = |e: i64| {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as usize)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    let juhl_ratio = if order.is_multiple_of(2) {
        let h = order / 2;
        JuhlRatio {
            parity: Parity::Even,
            prefactor: fact(order) / fact(h) * two_pow(h as i64 - 1),
            offsets: (1..=h as i64).map(|j| -ni + oi + 2 * j).collect(),
        }
    } else {
        let h = (order - 1) / 2;
        JuhlRatio {
            parity: Parity::Odd,
            prefactor: fact(order) / fact(h) * two_pow((oi + 1) / 2),
            offsets: (0..=h as i64).map(|j| -ni + oi + 1 + 2 * j).collect(),
        }
    };
    debug_assert!(!juhl_ratio.prefactor.is_zero());
    Ok(NormalizationMeta { n, order, dtilde_factor, composed_factor, step_factor, juhl_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RationalFunction;

    fn lam_affine(c0: i64, c1: i64) -> Poly {
        Poly::affine(lambda_vars(), 0, int(c0), int(c1))
    }

    #[test]
    fn e_in_dimension_two() {
        let n = 2;
        let vars = operator_vars(n);
        let e = build_e(n);
        let two_lambda = Poly::affine(vars.clone(), 0, int(0), int(2));
        let xi2 = Poly::var_at(vars, 2);
        assert_eq!(e.len(), 3);
        assert_eq!(e.coeff(&[0, 1]), two_lambda);
        assert_eq!(e.coeff(&[2, 0]), xi2);
        assert_eq!(e.coeff(&[0, 2]), xi2);
    }

    #[test]
    fn e_in_dimension_one() {
        let vars = operator_vars(1);
        let e = build_e(1);
        assert_eq!(e.len(), 2);
        assert_eq!(e.coeff(&[1]), Poly::affine(vars.clone(), 0, int(1), int(2)));
        assert_eq!(e.coeff(&[2]), Poly::var_at(vars, 1));
    }

    #[test]
    fn e_on_xi_n() {
        for n in 1..=6 {
            let vars = operator_vars(n);
            let got = build_e(n).apply(&Poly::var_at(vars.clone(), n)).unwrap();
            assert_eq!(got, Poly::affine(vars, 0, int(2 - n as i64), int(2)));
        }
    }

    #[test]
    fn e_kills_constants() {
        let vars = operator_vars(3);
        assert!(build_e(3).apply(&Poly::one(vars)).unwrap().is_zero());
    }

    #[test]
    fn composite_on_top_powers() {
        let n = 4;
        let vars = operator_vars(n);
        let x2 = Poly::var_at(vars.clone(), n).pow(2);
        let got = build_en(n, 2).apply(&x2).unwrap();
        let want = (&lam_affine(3 - 4, 2) * &lam_affine(4 - 4, 2)).scale(&int(2)).embed(&vars).unwrap();
        assert_eq!(got, want);
        let x3 = Poly::var_at(vars.clone(), n).pow(3);
        let got = build_en(n, 3).apply(&x3).unwrap();
        let want = (&(&lam_affine(0, 2) * &lam_affine(1, 2)) * &lam_affine(2, 2)).scale(&int(6)).embed(&vars).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn order_one_and_two_coefficients() {
        for n in 2..=5 {
            let ni = n as i64;
            let t1 = juhl_coeffs(n, 1).unwrap();
            assert_eq!(t1.coeffs(), &[RationalFunction::from_poly(lam_affine(2 - ni, 2)).unwrap()]);
            let t2 = juhl_coeffs(n, 2).unwrap();
            let a0 = &lam_affine(3 - ni, 2) * &lam_affine(4 - ni, 2);
            assert_eq!(t2.coeffs()[0], RationalFunction::from_poly(a0).unwrap());
            // hand Leibniz: the Δ′ coefficient of res(E_{λ+1}∘E_λ) is (2λ+2−n+2)·1
            assert_eq!(t2.coeffs()[1], RationalFunction::from_poly(lam_affine(4 - ni, 2)).unwrap());
        }
    }

    #[test]
    fn closed_form_instances() {
        assert_eq!(a0_closed_form(3, 1), lam_affine(-1, 2));
        let want = &(&lam_affine(1, 2) * &lam_affine(2, 2)) * &lam_affine(3, 2);
        assert_eq!(a0_closed_form(3, 3), want);
    }

    #[test]
    fn composite_term_count_dimension_two() {
        assert_eq!(build_en(2, 2).len(), 7);
    }

    #[test]
    fn normalization_examples() {
        let m = normalization_meta(4, 2).unwrap();
        assert_eq!(m.parity(), Parity::Even);
        assert_eq!(m.eval_juhl_ratio(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let m = normalization_meta(3, 1).unwrap();
        assert_eq!(m.parity(), Parity::Odd);
        assert!((m.eval_juhl_ratio(Complex64::new(1.0, 0.0)) - 2.0).norm() < 1e-15);
        let m = normalization_meta(2, 1).unwrap();
        assert_eq!(m.dtilde_factor.pi_power, 0);
        assert_eq!(m.dtilde_factor.describe(), "π^0·Γ(λ+1)·Γ(1-λ)");
    }

    #[test]
    fn composed_factor_reduces_to_step_factor() {
        for n in 1..=6 {
            let m = normalization_meta(n, 1).unwrap();
            assert_eq!(m.composed_factor, m.step_factor);
            // the displayed relation carries Γ(n−λ−1) at N = 1 instead
            assert_ne!(m.dtilde_factor, m.step_factor);
        }
    }

    #[test]
    fn composed_factor_telescopes() {
        // ∏_{j<N} Γ(λ+j+1)Γ(n−λ−j) · π^{n(N−1)} / ∏_{1≤j<N} Γ(λ+j)Γ(n−λ−j)
        let lam = Complex64::new(0.31, 0.2);
        for n in 2..=4usize {
            for order in 1..=4u32 {
                let m = normalization_meta(n, order).unwrap();
                let mut want = Complex64::new(std::f64::consts::PI.powi((n as i32) * (order as i32 - 1)), 0.0);
                for j in 0..order {
                    let jf = j as f64;
                    want *= gamma(lam + jf + 1.0).unwrap() * gamma(-lam + n as f64 - jf).unwrap();
                }
                for j in 1..order {
                    let jf = j as f64;
                    want /= gamma(lam + jf).unwrap() * gamma(-lam + n as f64 - jf).unwrap();
                }
                let got = m.composed_factor.eval(lam).unwrap();
                assert!((got - want).norm() / want.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dtilde_pole() {
        let m = normalization_meta(3, 2).unwrap();
        assert!(matches!(m.eval_dtilde(Complex64::new(-2.0, 0.0)), Err(Error::PoleAtLambda(_))));
        assert!(m.eval_dtilde(Complex64::new(0.25, 0.0)).is_ok());
    }

    #[test]
    fn juhl_ratio_matches_polynomial() {
        for order in 1..=6 {
            let m = normalization_meta(4, order).unwrap();
            let p = m.juhl_ratio.poly();
            let z = Complex64::new(0.7, 0.0);
            let v: Complex64 = p.eval(&[z]);
            assert!((v - m.eval_juhl_ratio(z)).norm() <= 1e-9 * v.norm().max(1.0));
        }
    }
}
