use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{lambda_vars, Poly, Rational};
use crate::{Error, Result};

/// Quotient of two polynomials in λ, kept in normal form: the denominator is
/// monic and coprime to the numerator, and zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let num = num.restrict_vars(&lambda_vars())?;
        let den = den.restrict_vars(&lambda_vars())?;
        if den.is_zero() {
            return Err(Error::OutOfRange("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num.univariate_coeffs(), den.univariate_coeffs()))
    }

    pub fn from_poly(p: Poly) -> Result<Self> {
        let vars = lambda_vars();
        RationalFunction::new(p, Poly::one(vars))
    }

    pub fn constant(c: Rational) -> Self {
        Self::normalized(vec![c], vec![Rational::one()])
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `c0 + c1·λ`.
    pub fn affine(c0: Rational, c1: Rational) -> Self {
        Self::normalized(vec![c0, c1], vec![Rational::one()])
    }

    /// Build from ascending coefficient lists; the denominator must be nonzero.
    pub fn from_coeffs(num: Vec<Rational>, den: Vec<Rational>) -> Result<Self> {
        if trim(den.clone()).is_empty() {
            return Err(Error::OutOfRange("rational function with zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Vec<Rational>, den: Vec<Rational>) -> Self {
        let num = trim(num);
        let den = trim(den);
        let vars = lambda_vars();
        if num.is_empty() {
            return RationalFunction { num: Poly::zero(vars.clone()), den: Poly::one(vars) };
        }
        let g = ugcd(&num, &den);
        let (mut n, _) = udivrem(&num, &g);
        let (mut d, _) = udivrem(&den, &g);
        let lead = d.last().cloned().expect("nonzero denominator");
        for c in n.iter_mut().chain(d.iter_mut()) {
            *c /= &lead;
        }
        RationalFunction {
            num: Poly::from_univariate(vars.clone(), &n),
            den: Poly::from_univariate(vars, &d),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial value, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.is_polynomial() {
            Some(self.num.scale(&self.den.constant_term().recip()))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        let d = &self.den * &o.den;
        Self::normalized(n.univariate_coeffs(), d.univariate_coeffs())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = &self.num * &o.num;
        let d = &self.den * &o.den;
        Self::normalized(n.univariate_coeffs(), d.univariate_coeffs())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::OutOfRange("division by the zero rational function".into()));
        }
        let n = &self.num * &o.den;
        let d = &self.den * &o.num;
        Ok(Self::normalized(n.univariate_coeffs(), d.univariate_coeffs()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c).univariate_coeffs(), self.den.univariate_coeffs())
    }

    /// Substitute `λ ↦ λ + shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        Self::normalized(
            self.num.shift_var(0, shift).univariate_coeffs(),
            self.den.shift_var(0, shift).univariate_coeffs(),
        )
    }

    /// Value at a complex λ; `None` at a pole.
    pub fn eval(&self, lambda: Complex64) -> Option<Complex64> {
        let d: Complex64 = self.den.eval(&[lambda]);
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.num.eval(&[lambda]) / d)
    }

    pub fn eval_rational(&self, lambda: &Rational) -> Option<Rational> {
        let d = self.den.eval_rational(std::slice::from_ref(lambda));
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(std::slice::from_ref(lambda)) / d)
    }

    pub fn eval_f64(&self, lambda: f64) -> Option<f64> {
        self.eval(Complex64::new(lambda, 0.0)).map(|z| z.re)
    }
}

/// Equality as rational functions, decided by the cross-multiplied identity
/// `n1·d2 = n2·d1` rather than by comparing normal forms.
pub fn rf_eq(a: &RationalFunction, b: &RationalFunction) -> bool {
    (&a.num * &b.den) == (&b.num * &a.den)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.as_poly().expect("polynomial"))
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Dense univariate division with remainder over Q.
fn udivrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") / &lead;
        for (k, bk) in b.iter().enumerate() {
            let t = &c * bk;
            r[shift + k] -= t;
        }
        q[shift] = c;
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    (trim(q), r)
}

/// Monic gcd; the gcd of zero and `b` is `b` made monic.
fn ugcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = udivrem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        return vec![Rational::one()];
    }
    let lead = x.last().cloned().expect("nonempty");
    x.iter().map(|c| c / &lead).collect()
}
