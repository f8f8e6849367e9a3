use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Field of numeric values flowing through jets and numeric evaluators:
/// `f64` for geometric quantities, `Complex64` when λ is complex.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn powi(self, k: i32) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    /// Principal power `self^p`.
    fn pow(self, p: Self) -> Self;
    fn modulus(self) -> f64;
    fn real(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn pow(self, p: Self) -> Self {
        self.powf(p)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn real(self) -> f64 {
        self
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn powi(self, k: i32) -> Self {
        Complex64::powi(&self, k)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn pow(self, p: Self) -> Self {
        if self.re > 0.0 && self.im == 0.0 {
            // real positive base: avoid branch noise from atan2(0, x)
            (p * self.re.ln()).exp()
        } else {
            self.powc(p)
        }
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn real(self) -> f64 {
        self.re
    }
}
