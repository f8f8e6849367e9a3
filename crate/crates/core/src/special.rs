//! Complex Gamma function (Lanczos, g = 7, 9 terms; ~1e−15 relative accuracy).

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance below which an argument counts as a pole of Γ.
pub const POLE_EPS: f64 = 1e-9;

/// True if `z` is (numerically) a nonpositive integer.
pub fn is_gamma_pole(z: Complex64) -> bool {
    let k = z.re.round();
    k <= 0.0 && (z - Complex64::new(k, 0.0)).norm() < POLE_EPS
}

/// `Γ(z)`, or `None` at a pole.
pub fn gamma(z: Complex64) -> Option<Complex64> {
    if is_gamma_pole(z) {
        return None;
    }
    Some(gamma_unchecked(z))
}

pub fn gamma_real(x: f64) -> Option<f64> {
    gamma(Complex64::new(x, 0.0)).map(|z| z.re)
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection
        let pi = Complex64::new(PI, 0.0);
        return pi / ((pi * z).sin() * gamma_unchecked(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEFFS[0], 0.0);
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}
