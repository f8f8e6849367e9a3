//! Differential operators on ℝⁿ with polynomial coefficients in `λ, ξ_1..ξ_n`.
//!
//! A [`DiffOp`] is a finite sum `Σ_α p_α(λ, ξ) ∂^α`. Composition follows the
//! Leibniz rule and operators act on the left: `compose(a, b)` applies `b`
//! first.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{binomial, lambda_vars, operator_vars, Poly, Rational, RationalFunction, VarList};
use crate::conformal::Jet;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Derivative multi-index, one entry per coordinate `ξ_1..ξ_n`.
pub type MultiIndex = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOp {
    n: usize,
    vars: VarList,
    terms: BTreeMap<MultiIndex, Poly>,
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp { n, vars: operator_vars(n), terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut d = DiffOp::zero(n);
        let one = Poly::one(d.vars.clone());
        d.terms.insert(vec![0; n], one);
        d
    }

    /// Multiplication by a polynomial (an operator of order zero).
    pub fn multiplication(n: usize, p: Poly) -> Result<Self> {
        let mut d = DiffOp::zero(n);
        let p = d.adopt(p)?;
        d.insert(vec![0; n], p);
        Ok(d)
    }

    /// `∂_k^power` with `k` a zero-based coordinate index.
    pub fn partial(n: usize, k: usize, power: u32) -> Self {
        let mut d = DiffOp::zero(n);
        let mut a = vec![0; n];
        a[k] = power;
        let one = Poly::one(d.vars.clone());
        d.terms.insert(a, one);
        d
    }

    /// `Σ_{j<upto} ∂_j²`.
    fn sum_of_squares(n: usize, upto: usize) -> Self {
        let mut d = DiffOp::zero(n);
        for k in 0..upto {
            let mut a = vec![0; n];
            a[k] = 2;
            d.terms.insert(a, Poly::one(d.vars.clone()));
        }
        d
    }

    /// The Laplacian `Δ = Σ_{j=1}^n ∂_j²`.
    pub fn laplacian(n: usize) -> Self {
        Self::sum_of_squares(n, n)
    }

    /// The tangential Laplacian `Δ′ = Σ_{j=1}^{n-1} ∂_j²`.
    pub fn tangential_laplacian(n: usize) -> Self {
        Self::sum_of_squares(n, n.saturating_sub(1))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Poly)>) -> Result<Self> {
        let mut d = DiffOp::zero(n);
        for (a, p) in terms {
            if a.len() != n {
                return Err(Error::DimensionMismatch(a.len(), n));
            }
            let p = d.adopt(p)?;
            d.insert(a, p);
        }
        Ok(d)
    }

    fn adopt(&self, p: Poly) -> Result<Poly> {
        if p.vars() == &self.vars {
            Ok(p)
        } else {
            p.embed(&self.vars)
        }
    }

    fn insert(&mut self, a: MultiIndex, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_unchecked(&p);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &[u32]) -> Poly {
        self.terms.get(a).cloned().unwrap_or_else(|| Poly::zero(self.vars.clone()))
    }

    /// Highest derivative order carrying a nonzero coefficient.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (a, p) in &other.terms {
            out.insert(a.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp::zero(self.n);
        for (a, p) in &self.terms {
            out.insert(a.clone(), p.scale(c));
        }
        out
    }

    /// Left multiplication of every coefficient by `p`.
    pub fn mul_poly(&self, p: &Poly) -> Result<DiffOp> {
        let p = self.adopt(p.clone())?;
        let mut out = DiffOp::zero(self.n);
        for (a, q) in &self.terms {
            out.insert(a.clone(), &p * q);
        }
        Ok(out)
    }

    /// Substitute `λ ↦ λ + shift` in every coefficient.
    pub fn shift_lambda(&self, shift: &Rational) -> DiffOp {
        let mut out = DiffOp::zero(self.n);
        for (a, p) in &self.terms {
            out.insert(a.clone(), p.shift_var(0, shift));
        }
        out
    }

    /// Operator product `self ∘ other` (apply `other` first), expanded with
    /// `(p∂^α)∘(q∂^β) = p Σ_{γ≤α} C(α,γ) (∂^γ q) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = DiffOp::zero(self.n);
        for (alpha, p) in &self.terms {
            for gamma in sub_indices(alpha) {
                let c = multi_binomial(alpha, &gamma);
                let pc = p.scale(&c);
                for (beta, q) in &other.terms {
                    let dq = partial_multi(q, &gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let key: MultiIndex = (0..self.n).map(|k| alpha[k] - gamma[k] + beta[k]).collect();
                    out.insert(key, &pc * &dq);
                }
            }
        }
        Ok(out)
    }

    /// Exact action on a polynomial in the same (or an embeddable) variable list.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let p = self.adopt(p.clone())?;
        let mut out = Poly::zero(self.vars.clone());
        for (alpha, c) in &self.terms {
            let d = partial_multi(&p, alpha);
            if !d.is_zero() {
                out.add_assign_unchecked(&(c * &d));
            }
        }
        Ok(out)
    }

    /// Evaluate every coefficient on the hyperplane `ξ_n = 0`; derivative
    /// indices (including normal derivatives) are kept.
    pub fn restrict(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.n);
        let zero = Rational::zero();
        for (a, p) in &self.terms {
            out.insert(a.clone(), p.eval_var(self.n, &zero));
        }
        out
    }

    /// Numeric action on a Taylor jet of a function at `point`, with λ fixed.
    /// The jet must have order at least `self.order()`.
    pub fn apply_jet<T: Scalar>(&self, lambda: T, point: &[f64], jet: &Jet<T>) -> Result<T> {
        if jet.nvars() != self.n || point.len() != self.n {
            return Err(Error::DimensionMismatch(jet.nvars(), self.n));
        }
        if jet.order() < self.order() {
            return Err(Error::OutOfRange(format!(
                "jet of order {} cannot carry derivatives of order {}",
                jet.order(),
                self.order()
            )));
        }
        let mut at: Vec<T> = Vec::with_capacity(self.n + 1);
        at.push(lambda);
        at.extend(point.iter().map(|&x| T::from_f64(x)));
        let mut acc = T::zero();
        for (a, p) in &self.terms {
            acc = acc + p.eval(&at) * jet.derivative(a);
        }
        Ok(acc)
    }

    /// Same as [`DiffOp::apply_jet`] but also returns `Σ |coeff·∂^α f|`, the
    /// magnitude scale of the sum.
    pub fn apply_jet_with_scale<T: Scalar>(&self, lambda: T, point: &[f64], jet: &Jet<T>) -> Result<(T, f64)> {
        let value = self.apply_jet(lambda, point, jet)?;
        let mut at: Vec<T> = Vec::with_capacity(self.n + 1);
        at.push(lambda);
        at.extend(point.iter().map(|&x| T::from_f64(x)));
        let scale = self
            .terms
            .iter()
            .map(|(a, p)| (p.eval(&at) * jet.derivative(a)).modulus())
            .sum();
        Ok((value, scale))
    }

    /// Express a restricted, constant-coefficient operator of order `order` as
    /// `Σ_j a_j ∂_n^{order−2j} Δ′^j`. Coefficients are read off the monomials
    /// `∂_1^{2j} ∂_n^{order−2j}`; the remainder after subtracting the matched
    /// combination must vanish exactly.
    pub fn decompose_tangential(&self, order: u32) -> Result<TangentialOp> {
        let n = self.n;
        for (a, p) in &self.terms {
            if (1..=n).any(|i| !p.is_free_of(i)) {
                return Err(Error::NonTangentialForm(format!(
                    "coefficient of ∂^{a:?} depends on ξ: {p}"
                )));
            }
            let deg: u32 = a.iter().sum();
            if deg != order {
                return Err(Error::NonTangentialForm(format!(
                    "term ∂^{a:?} has order {deg}, expected {order}"
                )));
            }
        }
        let lv = lambda_vars();
        let half = order / 2;
        let mut coeffs = Vec::with_capacity(half as usize + 1);
        for j in 0..=half {
            let mut a = vec![0; n];
            if j == 0 {
                a[n - 1] = order;
            } else if n >= 2 {
                a[0] = 2 * j;
                a[n - 1] = order - 2 * j;
            } else {
                coeffs.push(RationalFunction::zero());
                continue;
            }
            let c = self.coeff(&a).restrict_vars(&lv)?;
            coeffs.push(RationalFunction::from_poly(c)?);
        }
        let t = TangentialOp { n, order, coeffs };
        let residual = self.checked_sub(&t.to_diffop()?)?;
        if let Some((a, p)) = residual.terms.iter().next() {
            return Err(Error::NonTangentialForm(format!(
                "residual term {p} ∂^{a:?} outside span of ∂_n^(N-2j) Δ'^j"
            )));
        }
        Ok(t)
    }
}

/// `res ∘ Σ_j a_j ∂_n^{N−2j} Δ′^j`, an operator from ℝⁿ to ℝⁿ⁻¹.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentialOp {
    n: usize,
    order: u32,
    coeffs: Vec<RationalFunction>,
}

impl TangentialOp {
    pub fn new(n: usize, order: u32, coeffs: Vec<RationalFunction>) -> Result<Self> {
        if coeffs.len() != order as usize / 2 + 1 {
            return Err(Error::OutOfRange(format!(
                "order {order} needs {} coefficients, got {}",
                order / 2 + 1,
                coeffs.len()
            )));
        }
        Ok(TangentialOp { n, order, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    /// Expand back into a [`DiffOp`]; every `a_j` must be polynomial in λ.
    pub fn to_diffop(&self) -> Result<DiffOp> {
        let n = self.n;
        let vars = operator_vars(n);
        let lap = DiffOp::tangential_laplacian(n);
        let mut lap_pow = DiffOp::identity(n);
        let mut out = DiffOp::zero(n);
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                lap_pow = lap.compose(&lap_pow)?;
            }
            if a.is_zero() {
                continue;
            }
            let poly = a.as_poly().ok_or_else(|| {
                Error::NonTangentialForm(format!("a_{j} = {a} is not polynomial in λ"))
            })?;
            let poly = poly.embed(&vars)?;
            let normal = DiffOp::partial(n, n - 1, self.order - 2 * j as u32);
            let basis = normal.compose(&lap_pow)?;
            out = out.checked_add(&basis.mul_poly(&poly)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (a, p)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})")?;
            for (k, &e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "∂_{}", k + 1)?,
                    _ => write!(f, "∂_{}^{}", k + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// All multi-indices `γ ≤ α` componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::with_capacity(alpha.len())];
    for &a in alpha {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for prefix in &out {
            for g in 0..=a {
                let mut v = prefix.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn multi_binomial(alpha: &[u32], gamma: &[u32]) -> Rational {
    let c = alpha
        .iter()
        .zip(gamma)
        .fold(BigInt::one(), |acc, (&a, &g)| acc * binomial(a, g));
    Rational::from_integer(c)
}

/// `∂^γ p` where coordinate `k` is polynomial variable `k + 1`.
fn partial_multi(p: &Poly, gamma: &[u32]) -> Poly {
    let mut out = p.clone();
    for (k, &g) in gamma.iter().enumerate() {
        if g > 0 {
            out = out.partial_n(k + 1, g);
            if out.is_zero() {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, operator_vars};

    fn xi(n: usize, i: usize) -> Poly {
        Poly::var_at(operator_vars(n), i)
    }

    #[test]
    fn canonical_commutation() {
        let n = 3;
        let d = DiffOp::partial(n, 2, 1);
        let m = DiffOp::multiplication(n, xi(n, 3)).unwrap();
        let got = d.compose(&m).unwrap();
        let expected = DiffOp::from_terms(
            n,
            [(vec![0, 0, 1], xi(n, 3)), (vec![0, 0, 0], Poly::one(operator_vars(n)))],
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn identity_is_neutral() {
        let n = 2;
        let d = DiffOp::laplacian(n).mul_poly(&xi(n, 1)).unwrap();
        assert_eq!(DiffOp::identity(n).compose(&d).unwrap(), d);
        assert_eq!(d.compose(&DiffOp::identity(n)).unwrap(), d);
    }

    #[test]
    fn laplacian_of_norm_squared() {
        for n in 1..=5 {
            let vars = operator_vars(n);
            let mut r2 = Poly::zero(vars.clone());
            for i in 1..=n {
                r2 = &r2 + &xi(n, i).pow(2);
            }
            let got = DiffOp::laplacian(n).apply(&r2).unwrap();
            assert_eq!(got, Poly::constant(vars, int(2 * n as i64)));
        }
    }

    #[test]
    fn restriction_kills_normal_coefficient() {
        let n = 3;
        let d = DiffOp::laplacian(n).mul_poly(&xi(n, 3)).unwrap();
        assert!(d.restrict().is_zero());
        let t = DiffOp::partial(n, 2, 1).mul_poly(&xi(n, 1)).unwrap();
        assert_eq!(t.restrict(), t);
    }

    #[test]
    fn decompose_basis_element() {
        let n = 3;
        let t = DiffOp::tangential_laplacian(n).decompose_tangential(2).unwrap();
        assert!(t.coeffs()[0].is_zero());
        assert_eq!(t.coeffs()[1], RationalFunction::one());
    }

    #[test]
    fn mixed_derivative_is_rejected() {
        let n = 3;
        let d = DiffOp::partial(n, 0, 1).compose(&DiffOp::partial(n, 1, 1)).unwrap();
        assert!(matches!(d.decompose_tangential(2), Err(Error::NonTangentialForm(_))));
    }

    #[test]
    fn inhomogeneous_or_variable_coefficients_rejected() {
        let n = 2;
        let d = DiffOp::partial(n, 1, 1).checked_add(&DiffOp::partial(n, 1, 2)).unwrap();
        assert!(d.decompose_tangential(2).is_err());
        let v = DiffOp::partial(n, 1, 1).mul_poly(&xi(n, 1)).unwrap();
        assert!(v.decompose_tangential(1).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            DiffOp::identity(2).compose(&DiffOp::identity(3)),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }
}
