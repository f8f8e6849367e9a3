//! Truncated multivariate Taylor polynomials ("jets").
//!
//! A `Jet<T>` of order `K` in `d` variables stores the Taylor coefficients of
//! a function at a base point for every monomial of total degree `≤ K`.
//! Arithmetic and elementary functions propagate these coefficients exactly
//! (up to rounding), so derivatives of composite expressions need no finite
//! differences.

use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::scalar::Scalar;

#[derive(Debug)]
struct Layout {
    nvars: usize,
    order: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// `(i, j, k)`: monomial i times monomial j is monomial k (degree ≤ order).
    products: Vec<(usize, usize, usize)>,
    /// α! per monomial.
    factorials: Vec<f64>,
}

impl Layout {
    fn build(nvars: usize, order: u32) -> Layout {
        let mut monomials = Vec::new();
        for deg in 0..=order {
            let mut cur = vec![0u32; nvars];
            push_degree(&mut monomials, &mut cur, 0, deg);
        }
        let index: HashMap<Vec<u32>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            let da: u32 = a.iter().sum();
            for (j, b) in monomials.iter().enumerate() {
                let db: u32 = b.iter().sum();
                if da + db > order {
                    continue;
                }
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                products.push((i, j, index[&s]));
            }
        }
        let factorials = monomials
            .iter()
            .map(|m| m.iter().map(|&k| (1..=k).map(f64::from).product::<f64>()).product())
            .collect();
        Layout { nvars, order, monomials, index, products, factorials }
    }

    fn get(nvars: usize, order: u32) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet layout cache poisoned");
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(Layout::build(nvars, order)))
            .clone()
    }
}

fn push_degree(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        push_degree(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

#[derive(Clone, Debug)]
pub struct Jet<T: Scalar = f64> {
    layout: Arc<Layout>,
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    pub fn constant(nvars: usize, order: u32, value: T) -> Self {
        let layout = Layout::get(nvars, order);
        let mut coeffs = vec![T::zero(); layout.monomials.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    /// The coordinate function `x_i` expanded at a base point with `x_i = value`.
    pub fn variable(nvars: usize, order: u32, i: usize, value: T) -> Self {
        let mut j = Self::constant(nvars, order, value);
        if order >= 1 {
            let mut e = vec![0; nvars];
            e[i] = 1;
            let k = j.layout.index[&e];
            j.coeffs[k] = T::one();
        }
        j
    }

    /// Jets of all coordinate functions at `point`.
    pub fn coordinates(point: &[T], order: u32) -> Vec<Self> {
        (0..point.len()).map(|i| Self::variable(point.len(), order, i, point[i])).collect()
    }

    fn like(&self, coeffs: Vec<T>) -> Self {
        Jet { layout: self.layout.clone(), coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn order(&self) -> u32 {
        self.layout.order
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// Taylor coefficient of the monomial `h^α`.
    pub fn taylor_coeff(&self, alpha: &[u32]) -> T {
        self.layout.index.get(alpha).map_or(T::zero(), |&k| self.coeffs[k])
    }

    /// Partial derivative `∂^α f` at the base point (zero beyond the order).
    pub fn derivative(&self, alpha: &[u32]) -> T {
        match self.layout.index.get(alpha) {
            Some(&k) => self.coeffs[k] * T::from_f64(self.layout.factorials[k]),
            None => T::zero(),
        }
    }

    pub fn grad(&self) -> Vec<T> {
        (0..self.nvars())
            .map(|i| {
                let mut e = vec![0; self.nvars()];
                e[i] = 1;
                self.derivative(&e)
            })
            .collect()
    }

    /// Full symmetric Hessian (requires order ≥ 2).
    pub fn hessian(&self) -> Vec<Vec<T>> {
        let d = self.nvars();
        let mut h = vec![vec![T::zero(); d]; d];
        for i in 0..d {
            for j in i..d {
                let mut e = vec![0; d];
                e[i] += 1;
                e[j] += 1;
                let v = self.derivative(&e);
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        h
    }

    /// `Σ_i ∂_i² f` at the base point.
    pub fn laplacian(&self) -> T {
        (0..self.nvars()).fold(T::zero(), |acc, i| {
            let mut e = vec![0; self.nvars()];
            e[i] = 2;
            acc + self.derivative(&e)
        })
    }

    pub fn scale(&self, c: T) -> Self {
        self.like(self.coeffs.iter().map(|&v| v * c).collect())
    }

    pub fn add_const(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + c;
        out
    }

    /// `f ∘ self` for a univariate `f`, given `derivs[k] = f⁽ᵏ⁾(value)` for
    /// `k = 0..=order`.
    pub fn compose(&self, derivs: &[T]) -> Self {
        let order = self.order() as usize;
        assert!(derivs.len() > order, "need {} derivatives", order + 1);
        let mut delta = self.clone();
        delta.coeffs[0] = T::zero();
        let mut inv_fact = vec![1.0f64; order + 1];
        for k in 1..=order {
            inv_fact[k] = inv_fact[k - 1] / k as f64;
        }
        // Horner in the nilpotent increment
        let mut acc = Self::constant(self.nvars(), self.order(), derivs[order] * T::from_f64(inv_fact[order]));
        for k in (0..order).rev() {
            acc = &acc * &delta;
            acc.coeffs[0] = acc.coeffs[0] + derivs[k] * T::from_f64(inv_fact[k]);
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.order() as usize + 1])
    }

    pub fn ln(&self) -> Self {
        let u = self.value();
        let mut d = vec![u.ln()];
        let mut fact = 1.0;
        for k in 1..=self.order() as i32 {
            if k > 1 {
                fact *= (k - 1) as f64;
            }
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            d.push(T::from_f64(sign * fact) / u.powi(k));
        }
        self.compose(&d)
    }

    /// `self^p` (principal branch; the base value should be away from zero).
    pub fn pow(&self, p: T) -> Self {
        let u = self.value();
        let mut d = Vec::with_capacity(self.order() as usize + 1);
        let mut falling = T::one();
        for k in 0..=self.order() {
            d.push(falling * u.pow(p - T::from_f64(k as f64)));
            falling = falling * (p - T::from_f64(k as f64));
        }
        self.compose(&d)
    }

    pub fn powf(&self, p: f64) -> Self {
        self.pow(T::from_f64(p))
    }

    pub fn recip(&self) -> Self {
        let u = self.value();
        let mut d = Vec::with_capacity(self.order() as usize + 1);
        let mut fact = 1.0;
        for k in 0..=self.order() as i32 {
            if k > 0 {
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            d.push(T::from_f64(sign * fact) / u.powi(k + 1));
        }
        self.compose(&d)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars(), self.order(), T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Re-expand with a lower order (drops higher Taylor coefficients).
    pub fn truncate(&self, order: u32) -> Self {
        assert!(order <= self.order());
        let layout = Layout::get(self.nvars(), order);
        let coeffs = layout
            .monomials
            .iter()
            .map(|m| self.coeffs[self.layout.index[m]])
            .collect();
        Jet { layout, coeffs }
    }
}

impl Jet<f64> {
    /// Lift a real jet into another scalar field.
    pub fn cast<T: Scalar>(&self) -> Jet<T> {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|&v| T::from_f64(v)).collect(),
        }
    }

    pub fn to_complex(&self) -> Jet<Complex64> {
        self.cast()
    }
}

impl<T: Scalar> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: &Jet<T>) -> Jet<T> {
        debug_assert!(Arc::ptr_eq(&self.layout, &rhs.layout));
        self.like(self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| a + b).collect())
    }
}

impl<T: Scalar> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: &Jet<T>) -> Jet<T> {
        debug_assert!(Arc::ptr_eq(&self.layout, &rhs.layout));
        self.like(self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| a - b).collect())
    }
}

impl<T: Scalar> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: &Jet<T>) -> Jet<T> {
        debug_assert!(Arc::ptr_eq(&self.layout, &rhs.layout));
        let mut out = vec![T::zero(); self.coeffs.len()];
        for &(i, j, k) in &self.layout.products {
            out[k] = out[k] + self.coeffs[i] * rhs.coeffs[j];
        }
        self.like(out)
    }
}

impl<T: Scalar> Div for &Jet<T> {
    type Output = Jet<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Jet<T>) -> Jet<T> {
        self * &rhs.recip()
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.like(self.coeffs.iter().map(|&v| -v).collect())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $m(self, rhs: &Jet<T>) -> Jet<T> {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_series_coefficients() {
        let x = Jet::<f64>::variable(1, 5, 0, 0.0);
        let e = x.exp();
        let expected = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0];
        for (k, want) in expected.iter().enumerate() {
            assert_relative_eq!(e.taylor_coeff(&[k as u32]), want, epsilon = 1e-15);
        }
    }

    #[test]
    fn product_rule_two_variables() {
        // f = x² y³ at (2, 3): ∂x∂y f = 2x·3y² = 108
        let c = Jet::<f64>::coordinates(&[2.0, 3.0], 3);
        let f = &c[0].powi(2) * &c[1].powi(3);
        assert_relative_eq!(f.value(), 108.0);
        assert_relative_eq!(f.derivative(&[1, 1]), 108.0, epsilon = 1e-12);
        assert_relative_eq!(f.derivative(&[2, 0]), 54.0, epsilon = 1e-12);
        assert_relative_eq!(f.derivative(&[0, 2]), 72.0, epsilon = 1e-12);
        assert_relative_eq!(f.derivative(&[1, 2]), 72.0, epsilon = 1e-12);
    }

    #[test]
    fn recip_ln_pow_agree() {
        let c = Jet::<f64>::coordinates(&[1.7, -0.4], 4);
        let u = (&c[0] * &c[0] + &c[1] * &c[1]).add_const(0.3);
        let a = u.recip();
        let b = u.powf(-1.0);
        let l = (u.ln().scale(-1.0)).exp();
        for m in [[0u32, 0], [1, 0], [0, 2], [2, 2], [1, 3]] {
            assert_relative_eq!(a.derivative(&m), b.derivative(&m), max_relative = 1e-12);
            assert_relative_eq!(a.derivative(&m), l.derivative(&m), max_relative = 1e-12);
        }
    }

    #[test]
    fn hessian_is_symmetric() {
        let c = Jet::<f64>::coordinates(&[0.3, 0.5, -0.2], 2);
        let f = (&(&c[0] * &c[1]) + &(&c[1] * &c[2]).exp()).sqrt();
        let h = f.hessian();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[i][j], h[j][i]);
            }
        }
    }
}
