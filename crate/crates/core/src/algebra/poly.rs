use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{binomial, rational_to_f64, rational_to_string, Rational};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Ordered list of formal variable names shared by all polynomials of a ring.
pub type VarList = Arc<Vec<String>>;

/// Dense exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// Variables `[λ, ξ_1, …, ξ_n]` used for operator coefficients in dimension `n`.
pub fn operator_vars(n: usize) -> VarList {
    let mut v = Vec::with_capacity(n + 1);
    v.push("λ".to_string());
    v.extend((1..=n).map(|i| format!("ξ_{i}")));
    Arc::new(v)
}

/// The single-variable ring `Q[λ]`.
pub fn lambda_vars() -> VarList {
    Arc::new(vec!["λ".to_string()])
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial
/// equality once the variable lists agree.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Poly {
    vars: VarList,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(vars: VarList) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: VarList, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            let e = vec![0; p.vars.len()];
            p.terms.insert(e, c);
        }
        p
    }

    pub fn one(vars: VarList) -> Self {
        Poly::constant(vars, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: VarList, name: &str) -> Result<Self> {
        let i = index_of(&vars, name)?;
        Ok(Poly::var_at(vars, i))
    }

    pub fn var_at(vars: VarList, i: usize) -> Self {
        Poly::monomial(vars, Rational::one(), |e| e[i] = 1)
    }

    fn monomial(vars: VarList, c: Rational, set: impl FnOnce(&mut Exponents)) -> Self {
        let mut e = vec![0; vars.len()];
        set(&mut e);
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// `c · x^exps`.
    pub fn term(vars: VarList, exps: Exponents, c: Rational) -> Result<Self> {
        if exps.len() != vars.len() {
            return Err(Error::DimensionMismatch(exps.len(), vars.len()));
        }
        Ok(Poly::monomial(vars, c, |e| *e = exps))
    }

    pub fn from_terms(
        vars: VarList,
        terms: impl IntoIterator<Item = (Exponents, Rational)>,
    ) -> Result<Self> {
        let mut p = Poly::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::DimensionMismatch(e.len(), p.vars.len()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Affine polynomial `c0 + c1·x_i`.
    pub fn affine(vars: VarList, i: usize, c0: Rational, c1: Rational) -> Self {
        let mut p = Poly::constant(vars.clone(), c0);
        p.add_term_ref(&unit(vars.len(), i), c1);
        p
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
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

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when the polynomial does not involve variable `i`.
    pub fn is_free_of(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e[i] == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars()])
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, e: &[u32], c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(v) = self.terms.get_mut(e) {
            *v += c;
            if v.is_zero() {
                self.terms.remove(e);
            }
        } else {
            self.terms.insert(e.to_vec(), c);
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.vars.to_vec(),
                right: other.vars.to_vec(),
            })
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term_ref(e, c.clone());
        }
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term_ref(e, -c.clone());
        }
        Ok(out)
    }

    /// Exact product; fails if the variable lists differ.
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.vars.clone());
        let mut buf = vec![0u32; self.nvars()];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for (k, slot) in buf.iter_mut().enumerate() {
                    *slot = ea[k] + eb[k];
                }
                out.add_term_ref(&buf, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.vars.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn partial(&self, name: &str) -> Result<Poly> {
        let i = index_of(&self.vars, name)?;
        Ok(self.partial_at(i))
    }

    pub fn partial_at(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.terms.insert(e2, c * Rational::from_integer(BigInt::from(e[i])));
        }
        out
    }

    /// `k`-th partial derivative in variable `i`.
    pub fn partial_n(&self, i: usize, k: u32) -> Poly {
        if k == 0 {
            return self.clone();
        }
        let mut out = Poly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] < k {
                continue;
            }
            let falling: BigInt = (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(e[i] - j));
            let mut e2 = e.clone();
            e2[i] -= k;
            out.terms.insert(e2, c * Rational::from_integer(falling));
        }
        out
    }

    /// Substitute the constant `value` for variable `i` (the variable stays in the list).
    pub fn eval_var(&self, i: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let k = e[i];
            let factor = if k == 0 { Rational::one() } else { num_traits::pow(value.clone(), k as usize) };
            let mut e2 = e.clone();
            e2[i] = 0;
            out.add_term(e2, c * factor);
        }
        out
    }

    /// Substitute `x_i ↦ x_i + shift`.
    pub fn shift_var(&self, i: usize, shift: &Rational) -> Poly {
        if shift.is_zero() {
            return self.clone();
        }
        let mut out = Poly::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let k = e[i];
            // (x + s)^k = Σ_m C(k,m) s^(k-m) x^m
            for m in 0..=k {
                let coef = Rational::from_integer(binomial(k, m))
                    * num_traits::pow(shift.clone(), (k - m) as usize);
                let mut e2 = e.clone();
                e2[i] = m;
                out.add_term(e2, c * coef);
            }
        }
        out
    }

    /// Evaluate at a full point; values are given per variable.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> T {
        debug_assert_eq!(point.len(), self.nvars());
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut m = T::from_f64(rational_to_f64(c));
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    m = m * point[k].powi(p as i32);
                }
            }
            acc = acc + m;
        }
        acc
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    m *= num_traits::pow(point[k].clone(), p as usize);
                }
            }
            acc += m;
        }
        acc
    }

    /// Re-express this polynomial over another variable list. Each variable of
    /// `self` must appear in `target`.
    pub fn embed(&self, target: &VarList) -> Result<Poly> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| index_of(target, v))
            .collect::<Result<_>>()?;
        let mut out = Poly::zero(target.clone());
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (k, &p) in e.iter().enumerate() {
                e2[map[k]] += p;
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Project onto a sub-list of variables; fails if a dropped variable occurs.
    pub fn restrict_vars(&self, target: &VarList) -> Result<Poly> {
        let mut keep = Vec::with_capacity(target.len());
        for v in target.iter() {
            keep.push(index_of(&self.vars, v)?);
        }
        let mut out = Poly::zero(target.clone());
        for (e, c) in &self.terms {
            let dropped = e
                .iter()
                .enumerate()
                .any(|(k, &p)| p > 0 && !keep.contains(&k));
            if dropped {
                return Err(Error::VariableMismatch {
                    left: self.vars.to_vec(),
                    right: target.to_vec(),
                });
            }
            out.add_term(keep.iter().map(|&k| e[k]).collect(), c.clone());
        }
        Ok(out)
    }

    /// Coefficients of a polynomial in a single variable, ascending powers.
    pub fn univariate_coeffs(&self) -> Vec<Rational> {
        assert_eq!(self.nvars(), 1, "univariate_coeffs on a multivariate polynomial");
        let deg = self.degree_in(0) as usize;
        let mut out = vec![Rational::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }

    pub fn from_univariate(vars: VarList, coeffs: &[Rational]) -> Poly {
        assert_eq!(vars.len(), 1);
        let mut p = Poly::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }
}

fn unit(len: usize, i: usize) -> Exponents {
    let mut e = vec![0; len];
    e[i] = 1;
    e
}

fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial add over different variable lists")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial sub over different variable lists")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial mul over different variable lists")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Poly {
    /// Terms in descending graded order, e.g. `4λ^2 + 2λ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || !mag.is_one() {
                write!(f, "{}", rational_to_string(&mag))?;
            }
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "{}", self.vars[k])?,
                    _ => write!(f, "{}^{}", self.vars[k], p)?,
                }
            }
        }
        Ok(())
    }
}
