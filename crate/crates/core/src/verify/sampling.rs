//! Seeded random samples: points, test functions and words in the generators.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conformal::{ConformalMap, Generator, RealPoly, TestFunction};
use crate::Result;

/// Points closer than this to the origin are not fed to an inversion.
pub const INVERSION_GUARD: f64 = 0.05;

/// Generator for a named check: the same `(seed, salt)` always gives the same stream.
pub fn rng(seed: u64, salt: &str) -> ChaCha8Rng {
    // FNV-1a over the salt keeps streams of different checks independent
    let h = salt.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn uniform(rng: &mut impl Rng, a: f64, b: f64) -> f64 {
    rng.gen_range(a..b)
}

pub fn point(rng: &mut impl Rng, n: usize, half_width: f64) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, -half_width, half_width)).collect()
}

/// Uniform point on the unit sphere `S^{d−1}` (rejection from the cube).
pub fn unit_vector(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v = point(rng, d, 1.0);
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 0.1 && r <= 1.0 {
            return v.iter().map(|x| x / r).collect();
        }
    }
}

/// A rotation in `SO(m)` as a product of Givens rotations with random angles.
pub fn rotation(rng: &mut impl Rng, m: usize) -> DMatrix<f64> {
    let mut r = DMatrix::<f64>::identity(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let th = uniform(rng, 0.0, std::f64::consts::TAU);
            let mut g = DMatrix::<f64>::identity(m, m);
            g[(i, i)] = th.cos();
            g[(j, j)] = th.cos();
            g[(i, j)] = -th.sin();
            g[(j, i)] = th.sin();
            r = g * r;
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Translation,
    Rotation,
    Dilation,
    Inversion,
}

pub const ALL_KINDS: [GeneratorKind; 4] =
    [GeneratorKind::Translation, GeneratorKind::Rotation, GeneratorKind::Dilation, GeneratorKind::Inversion];

/// A random generator of the given kind; with `tangential` it preserves `ξ_n = 0`
/// (for `n = 1` an inversion request then yields a dilation).
pub fn generator(rng: &mut impl Rng, n: usize, kind: GeneratorKind, tangential: bool) -> Generator {
    match kind {
        GeneratorKind::Translation => {
            let mut v = point(rng, n, 1.0);
            if tangential {
                v[n - 1] = 0.0;
            }
            Generator::Translation(v)
        }
        GeneratorKind::Rotation => {
            if tangential {
                let mut full = DMatrix::<f64>::identity(n, n);
                if n > 1 {
                    full.view_mut((0, 0), (n - 1, n - 1)).copy_from(&rotation(rng, n - 1));
                }
                Generator::Rotation(full)
            } else {
                Generator::Rotation(rotation(rng, n))
            }
        }
        GeneratorKind::Dilation => Generator::Dilation(uniform(rng, 0.5f64.ln(), 2.0f64.ln()).exp()),
        // on the line no inversion generator fixes the hyperplane, so fall back to a dilation
        GeneratorKind::Inversion if tangential && n == 1 => {
            Generator::Dilation(uniform(rng, 0.5f64.ln(), 2.0f64.ln()).exp())
        }
        GeneratorKind::Inversion => Generator::InversionS,
    }
}

/// A word of length `1..=max_len` that contains at least one generator of kind `forced`.
pub fn word(rng: &mut impl Rng, n: usize, max_len: usize, forced: GeneratorKind, tangential: bool) -> Result<ConformalMap> {
    let len = rng.gen_range(1..=max_len);
    let slot = rng.gen_range(0..len);
    let gens = (0..len)
        .map(|k| {
            let kind = if k == slot { forced } else { ALL_KINDS[rng.gen_range(0..4)] };
            generator(rng, n, kind, tangential)
        })
        .collect();
    ConformalMap::from_word(n, gens)
}

/// A point `ξ = g(y)` with `y` within `spread` (per coordinate) of `center`,
/// such that neither `g` at `y` nor `g⁻¹` at `ξ` evaluates an inversion
/// inside the guard radius.
pub fn point_near_image(rng: &mut impl Rng, g: &ConformalMap, center: &[f64], spread: f64) -> Result<Vec<f64>> {
    let ginv = g.inverse();
    loop {
        let y: Vec<f64> = center.iter().map(|c| c + uniform(rng, -spread, spread)).collect();
        if g.min_inversion_radius(&y)? < INVERSION_GUARD {
            continue;
        }
        let xi = g.act(&y)?;
        if ginv.min_inversion_radius(&xi)? >= INVERSION_GUARD && xi.iter().all(|v| v.abs() < 1e3) {
            return Ok(xi);
        }
    }
}

/// Gaussian bump with random center and width; with probability 1/2 it gets
/// a random affine prefactor.
pub fn gaussian(rng: &mut impl Rng, n: usize) -> Result<TestFunction> {
    let center = point(rng, n, 1.0);
    let width = uniform(rng, 0.6, 1.4);
    let prefactor = if rng.gen_bool(0.5) {
        let mut terms = vec![(vec![0; n], uniform(rng, 0.5, 1.5))];
        for k in 0..n {
            let mut e = vec![0; n];
            e[k] = 1;
            terms.push((e, uniform(rng, -1.0, 1.0)));
        }
        Some(RealPoly::new(n, terms)?)
    } else {
        None
    };
    TestFunction::gaussian_with_prefactor(center, width, prefactor)
}

/// Random polynomial of total degree ≤ `deg` in `d` variables.
pub fn polynomial(rng: &mut impl Rng, d: usize, deg: u32) -> RealPoly {
    let mut terms = Vec::new();
    let mut e = vec![0u32; d];
    loop {
        if e.iter().sum::<u32>() <= deg {
            terms.push((e.clone(), uniform(rng, -1.0, 1.0)));
        }
        let mut k = 0;
        loop {
            if k == d {
                return RealPoly::new(d, terms).expect("exponent length matches");
            }
            e[k] += 1;
            if e[k] <= deg {
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}
