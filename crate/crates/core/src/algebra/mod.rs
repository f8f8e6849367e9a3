//! Exact arithmetic: arbitrary-precision rationals, multivariate polynomials
//! over them, and univariate rational functions in the spectral parameter λ.

mod poly;
mod ratfunc;

pub use poly::{lambda_vars, operator_vars, Exponents, Poly, VarList};
pub use ratfunc::{rf_eq, RationalFunction};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p/q` text form, or just `p` for integers.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(num: &str, den: &str) -> crate::Result<Rational> {
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad integer `{num}`")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad integer `{den}`")))?;
    if d.is_zero() {
        return Err(crate::Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // ratio of huge integers: scale both down before converting
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
