//! Exact checks: the symbol identity relating `M∘J_λ` and `J_{λ+1}∘E_λ`, the
//! closed form of `a_0`, the top constant `E_{λ,N} ξ_n^N`, the tangential
//! structure of `E_N(λ)`, the power rule for `E_μ`, and the symbol-level
//! product `J_λ J_{n−λ}` at sampled λ.

use num_complex::Complex64;
use num_traits::One;

use super::report::{CheckReport, ErrorTracker};
use super::sampling;
use crate::algebra::{operator_vars, Poly, Rational};
use crate::juhl::{a0_closed_form, build_e, build_en_family, power_image, top_constant};
use crate::special::is_gamma_pole;
use crate::symbolcalc::{check_mi, inverse_j_error};
use crate::Result;

/// `M∘J_λ = 1/(4(λ−n+1)) J_{λ+1}∘E_λ` as an exact symbol identity, `n ∈ dims`.
pub fn check_mi_range(dims: impl IntoIterator<Item = usize>) -> CheckReport {
    let mut failures = Vec::new();
    let mut samples = 0;
    for n in dims {
        samples += 1;
        match check_mi(n) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("n={n}: symbols differ")),
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    CheckReport::exact("mi_symbol", samples, &failures)
}

fn xi_n_power(n: usize, k: u32) -> Poly {
    let mut e = vec![0; n + 1];
    e[n] = k;
    Poly::term(operator_vars(n), e, Rational::one()).expect("length matches")
}

/// Reports for the `a_0` closed form, the top constant `E_{λ,N}ξ_n^N = N! a_0`
/// and the zero residual of the tangential decomposition, over `n ∈ dims` and
/// `N = 1..=max_order`. Each family is built once and shared by the three checks.
pub fn check_family(dims: impl IntoIterator<Item = usize>, max_order: u32) -> [CheckReport; 3] {
    let (mut a0_fail, mut top_fail, mut struct_fail) = (Vec::new(), Vec::new(), Vec::new());
    let mut samples = 0;
    for n in dims {
        for (k, op) in build_en_family(n, max_order).iter().enumerate() {
            let order = k as u32 + 1;
            samples += 1;
            let restricted = op.restrict();
            match restricted.decompose_tangential(order) {
                Ok(t) => {
                    match t.to_diffop() {
                        Ok(back) if back == restricted => {}
                        Ok(_) => struct_fail.push(format!("n={n} N={order}: reconstruction differs")),
                        Err(e) => struct_fail.push(format!("n={n} N={order}: {e}")),
                    }
                    let a0 = t.coeffs()[0].as_poly();
                    if a0.as_ref() != Some(&a0_closed_form(n, order)) {
                        a0_fail.push(format!("n={n} N={order}: a_0 = {}", t.coeffs()[0]));
                    }
                }
                Err(e) => {
                    struct_fail.push(format!("n={n} N={order}: {e}"));
                    a0_fail.push(format!("n={n} N={order}: no decomposition"));
                }
            }
            match op.apply(&xi_n_power(n, order)) {
                Ok(p) if p == top_constant(n, order) => {}
                Ok(p) => top_fail.push(format!("n={n} N={order}: E ξ_n^N = {p}")),
                Err(e) => top_fail.push(format!("n={n} N={order}: {e}")),
            }
        }
    }
    [
        CheckReport::exact("a0_closed_form", samples, &a0_fail),
        CheckReport::exact("top_constant", samples, &top_fail),
        CheckReport::exact("tangential_structure", samples, &struct_fail),
    ]
}

/// `E_μ ξ_n^k = k(2μ−n+1+k) ξ_n^{k−1}` for `k = 0..=max_k`.
pub fn check_power_rule(dims: impl IntoIterator<Item = usize>, max_k: u32) -> CheckReport {
    let mut failures = Vec::new();
    let mut samples = 0;
    for n in dims {
        let e = build_e(n);
        for k in 0..=max_k {
            samples += 1;
            match e.apply(&xi_n_power(n, k)) {
                Ok(p) if p == power_image(n, k) => {}
                Ok(p) => failures.push(format!("n={n} k={k}: {p}")),
                Err(err) => failures.push(format!("n={n} k={k}: {err}")),
            }
        }
    }
    CheckReport::exact("power_rule", samples, &failures)
}

/// Seeded λ samples away from the poles of `Γ(λ)Γ(n−λ)`: half real, half
/// with imaginary part in `±[0.1, 1]`.
pub fn inverse_j_samples(n: usize, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = sampling::rng(seed ^ n as u64, "inverse_j");
    let nf = n as f64;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let re = sampling::uniform(&mut rng, -2.0, nf + 2.0);
        let im = if out.len() % 2 == 0 {
            0.0
        } else {
            sampling::uniform(&mut rng, 0.1, 1.0) * if sampling::uniform(&mut rng, -1.0, 1.0) < 0.0 { -1.0 } else { 1.0 }
        };
        let lam = Complex64::new(re, im);
        let near_pole = |z: Complex64| z.im == 0.0 && (z.re - z.re.round()).abs() < 1e-3 && z.re.round() <= 0.0;
        if near_pole(lam) || near_pole(Complex64::new(nf, 0.0) - lam) || is_gamma_pole(lam) {
            continue;
        }
        out.push(lam);
    }
    out
}

/// `J_λ J_{n−λ}` at symbol level against `π^n/(Γ(λ)Γ(n−λ))`.
pub fn check_inverse_j_range(dims: impl IntoIterator<Item = usize>, count: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut t = ErrorTracker::new();
    for n in dims {
        let samples = inverse_j_samples(n, count, seed);
        for lam in samples {
            let err = inverse_j_error(n, &[lam])?;
            t.record(err, || format!("n={n} λ={lam}"));
        }
    }
    Ok(t.finish("inverse_j", tol))
}
