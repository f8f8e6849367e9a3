//! Ambient-space identities on `𝐄 = ℝ ⊕ ℝⁿ⁺¹` with coordinates
//! `(t, x_0, …, x_n)`, `Q = t² − |x|²` and `□ = ∂_t² − Σ ∂_{x_j}²`.
//! Jets carry `n + 2` variables: index 0 is `t`, index `1 + j` is `x_j`.

use rand::Rng;

use super::report::{rel_err, CheckReport, ErrorTracker};
use super::sampling;
use crate::conformal::{chart_c, chart_c_jet, chart_inverse, kappa_c, kappa_c_jet, Jet, RealPoly, TestFunction};
use crate::juhl::build_e;
use crate::{Error, Result};

/// Tolerance of the Euler identity `tF_t + Σ x_j F_{x_j} = d·F`.
pub const EULER_TOL: f64 = 1e-10;

/// Homogeneous functions on (an open part of) `𝐄`.
#[derive(Clone, Debug)]
pub enum Extension<'a> {
    /// `(t + x_0)^{−λ} f(x_1/(t+x_0), …, x_n/(t+x_0))`, degree `−λ`.
    Chart { f: &'a TestFunction, lambda: f64 },
    /// `|x|^d f(x/|x|)`, independent of `t`.
    Radial { f: &'a RealPoly, degree: f64 },
    /// `t^d f(x/t)`.
    Temporal { f: &'a RealPoly, degree: f64 },
    /// `base + Q·|x|^{d−2} g(x/|x|)` with `d` the degree of `base`.
    Quadric { base: Box<Extension<'a>>, g: &'a RealPoly },
}

impl Extension<'_> {
    pub fn degree(&self) -> f64 {
        match self {
            Extension::Chart { lambda, .. } => -lambda,
            Extension::Radial { degree, .. } | Extension::Temporal { degree, .. } => *degree,
            Extension::Quadric { base, .. } => base.degree(),
        }
    }

    pub fn jet(&self, c: &[Jet<f64>]) -> Result<Jet<f64>> {
        Ok(match self {
            Extension::Chart { f, lambda } => {
                let s = &c[0] + &c[1];
                if s.value() <= 0.0 {
                    return Err(Error::ChartDomain(format!("t + x_0 = {} must be positive", s.value())));
                }
                let inv = s.recip();
                let y: Vec<Jet<f64>> = c[2..].iter().map(|x| x * &inv).collect();
                &s.powf(-lambda) * &f.eval_jet(&y)?
            }
            Extension::Radial { f, degree } => radial_extension(c, *degree, |u| Ok(f.eval_jet(u)))?,
            Extension::Temporal { f, degree } => {
                if c[0].value() <= 0.0 {
                    return Err(Error::ChartDomain("t must be positive".into()));
                }
                let inv = c[0].recip();
                let y: Vec<Jet<f64>> = c[1..].iter().map(|x| x * &inv).collect();
                &c[0].powf(*degree) * &f.eval_jet(&y)
            }
            Extension::Quadric { base, g } => {
                let gj = radial_extension(c, base.degree() - 2.0, |u| Ok(g.eval_jet(u)))?;
                &base.jet(c)? + &(&quadric(c) * &gj)
            }
        })
    }
}

/// `|x|^d h(x/|x|)` for `h` given on jets of the unit vector.
pub fn radial_extension(
    c: &[Jet<f64>],
    degree: f64,
    h: impl Fn(&[Jet<f64>]) -> Result<Jet<f64>>,
) -> Result<Jet<f64>> {
    let mut r2 = &c[1] * &c[1];
    for x in &c[2..] {
        r2 = &r2 + &(x * x);
    }
    if r2.value() <= 0.0 {
        return Err(Error::SingularPoint("x = 0".into()));
    }
    let r = r2.sqrt();
    let inv = r.recip();
    let u: Vec<Jet<f64>> = c[1..].iter().map(|x| x * &inv).collect();
    Ok(&r.powf(degree) * &h(&u)?)
}

pub fn quadric(c: &[Jet<f64>]) -> Jet<f64> {
    let mut q = &c[0] * &c[0];
    for x in &c[1..] {
        q = &q - &(x * x);
    }
    q
}

fn unit(nvars: usize, k: usize, p: u32) -> Vec<u32> {
    let mut a = vec![0; nvars];
    a[k] = p;
    a
}

/// `□F` and the summed magnitude of its terms.
pub fn box_op(f: &Jet<f64>) -> (f64, f64) {
    let m = f.nvars();
    let tt = f.derivative(&unit(m, 0, 2));
    let mut val = tt;
    let mut scale = tt.abs();
    for k in 1..m {
        let d = f.derivative(&unit(m, k, 2));
        val -= d;
        scale += d.abs();
    }
    (val, scale)
}

/// `B_μF = x_n □F − 2μ ∂F/∂x_n` at the jet's base point.
pub fn b_mu(f: &Jet<f64>, mu: f64, x_n: f64) -> (f64, f64) {
    let m = f.nvars();
    let (bx, bs) = box_op(f);
    let d = f.derivative(&unit(m, m - 1, 1));
    (x_n * bx - 2.0 * mu * d, (x_n * bs).abs() + (2.0 * mu * d).abs())
}

/// Right side of `B_μF = x_n|x_n|^{−μ}□(|x_n|^μ F) + μ(μ−1)F/x_n`.
pub fn conjugation_rhs(c: &[Jet<f64>], f: &Jet<f64>, mu: f64) -> (f64, f64) {
    let xn = c.last().expect("nonempty");
    let v = xn.value();
    let abs = if v < 0.0 { -xn } else { xn.clone() };
    let g = &abs.powf(mu) * f;
    let (bx, bs) = box_op(&g);
    let pre = v * v.abs().powf(-mu);
    let tail = mu * (mu - 1.0) * f.value() / v;
    (pre * bx + tail, (pre * bs).abs() + tail.abs())
}

/// Relative residual of the Euler identity at the jet's base point.
pub fn euler_error(f: &Jet<f64>, point: &[f64], degree: f64) -> f64 {
    let m = f.nvars();
    let terms: Vec<f64> = (0..m).map(|k| point[k] * f.derivative(&unit(m, k, 1))).collect();
    let lhs: f64 = terms.iter().sum();
    let scale = terms.iter().map(|t| t.abs()).sum::<f64>();
    rel_err(lhs, degree * f.value(), scale)
}

fn require_homogeneous(ext: &Extension, f: &Jet<f64>, point: &[f64]) -> Result<()> {
    let e = euler_error(f, point, ext.degree());
    if e > EULER_TOL {
        return Err(Error::HomogeneityViolation(format!(
            "Euler residual {e:e} at {point:?} for degree {}",
            ext.degree()
        )));
    }
    Ok(())
}

fn cone_point(x: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(x.len() + 1);
    p.push(1.0);
    p.extend_from_slice(x);
    p
}

/// `κ_c(ξ)^{λ+1} B_{λ−n/2+1}F(1, c(ξ)) = −E_λ f(ξ)` for the chart extension `F` of `f`.
pub fn noncompact_error(lambda: f64, f: &TestFunction, xi: &[f64]) -> Result<f64> {
    let n = xi.len();
    let mu = lambda - n as f64 / 2.0 + 1.0;
    let kc = kappa_c(xi);
    if kc < 1e-6 {
        return Err(Error::ChartDomain(format!("1 + c(ξ)_0 = {kc:e} at ξ = {xi:?}")));
    }
    let p = cone_point(&chart_c(xi));
    let c = Jet::coordinates(&p, 2);
    let ext = Extension::Chart { f, lambda };
    let fj = ext.jet(&c)?;
    require_homogeneous(&ext, &fj, &p)?;
    let (b, bs) = b_mu(&fj, mu, p[n + 1]);
    let (ef, es) = build_e(n).apply_jet_with_scale(lambda, xi, &f.eval_jet(&Jet::coordinates(xi, 2))?)?;
    let k = kc.powf(lambda + 1.0);
    Ok(rel_err(k * b, -ef, (k * bs).max(es)))
}

pub fn check_ambient_noncompact(lambda: f64, f: &TestFunction, points: &[Vec<f64>], tol: f64) -> Result<CheckReport> {
    let mut t = ErrorTracker::new();
    for xi in points {
        t.record(noncompact_error(lambda, f, xi)?, || format!("λ={lambda} ξ={xi:?}"));
    }
    Ok(t.finish("ambient_noncompact", tol))
}

pub fn sampled_ambient_noncompact(dims: &[usize], points: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "ambient_noncompact");
    let mut t = ErrorTracker::new();
    for &n in dims {
        for _ in 0..points {
            let lambda = sampling::uniform(&mut rng, -1.0, 2.5);
            let f = sampling::gaussian(&mut rng, n)?;
            let xi: Vec<f64> =
                f.center().expect("Gaussian").iter().map(|c| c + sampling::uniform(&mut rng, -0.8, 0.8)).collect();
            t.record(noncompact_error(lambda, &f, &xi)?, || format!("n={n} λ={lambda} ξ={xi:?} f={f:?}"));
        }
    }
    Ok(t.finish("ambient_noncompact", tol))
}

fn conjugation_error(ext: &Extension, p: &[f64], mu: f64) -> Result<f64> {
    let c = Jet::coordinates(p, 2);
    let fj = ext.jet(&c)?;
    require_homogeneous(ext, &fj, p)?;
    let (lhs, ls) = b_mu(&fj, mu, *p.last().expect("nonempty"));
    let (rhs, rs) = conjugation_rhs(&c, &fj, mu);
    Ok(rel_err(lhs, rhs, ls.max(rs)))
}

/// Random point of `𝐄` near the cone with `|x_n| > 0.1` and `t + x_0 > 0`.
fn ambient_point(rng: &mut impl Rng, n: usize, on_cone: bool) -> Vec<f64> {
    loop {
        let u = sampling::unit_vector(rng, n + 1);
        if u[n].abs() <= 0.1 || 1.0 + u[0] < 0.05 {
            continue;
        }
        let s = sampling::uniform(rng, 0.5, 2.0);
        let t = if on_cone { s } else { s * sampling::uniform(rng, 0.7, 1.3) };
        if t + s * u[0] < 0.05 * s {
            continue;
        }
        let mut p = vec![t];
        p.extend(u.iter().map(|v| v * s));
        return p;
    }
}

/// The identity `B_μF = x_n|x_n|^{−μ}□(|x_n|^μ F) + μ(μ−1)F/x_n` at points
/// with `|x_n| > 0.1`, on and off the cone, for chart extensions of Gaussians
/// and radial extensions of polynomials.
pub fn sampled_b_mu_conjugation(dims: &[usize], points: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "b_mu_conjugation");
    let mut t = ErrorTracker::new();
    for &n in dims {
        for k in 0..points {
            let lambda = sampling::uniform(&mut rng, -1.0, 2.5);
            let mu = lambda - n as f64 / 2.0 + 1.0;
            let p = ambient_point(&mut rng, n, k % 2 == 0);
            let f = sampling::gaussian(&mut rng, n)?;
            let poly = sampling::polynomial(&mut rng, n + 1, 2);
            let chart = Extension::Chart { f: &f, lambda };
            let radial = Extension::Radial { f: &poly, degree: -lambda };
            let err = conjugation_error(&chart, &p, mu)?.max(conjugation_error(&radial, &p, mu)?);
            t.record(err, || format!("n={n} λ={lambda} 𝐱={p:?}"));
        }
    }
    Ok(t.finish("b_mu_conjugation", tol))
}

/// `Δ_S 1 = n(n−2)/4`, with `Δ_S` realized as `□` on the degree `1 − n/2`
/// extension `|x|^{1−n/2}` evaluated at `(1, x)`, `|x| = 1`.
pub fn sampled_yamabe_constant(dims: &[usize], points: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "yamabe_constant");
    let mut t = ErrorTracker::new();
    for &n in dims {
        let one = RealPoly::constant(n + 1, 1.0);
        let ext = Extension::Radial { f: &one, degree: 1.0 - n as f64 / 2.0 };
        let want = (n * (n.saturating_sub(2))) as f64 / 4.0;
        for _ in 0..points {
            let p = cone_point(&sampling::unit_vector(&mut rng, n + 1));
            let fj = ext.jet(&Jet::coordinates(&p, 2))?;
            require_homogeneous(&ext, &fj, &p)?;
            let (v, s) = box_op(&fj);
            t.record(rel_err(v, want, s), || format!("n={n} x={:?} value={v}", &p[1..]));
        }
    }
    Ok(t.finish("yamabe_constant", tol))
}

/// Value of the compact-picture operator at `x ∈ Sⁿ` by three routes:
/// (A) `x_n|x_n|^{−μ}Δ_S(|x_n|^μ f) + μ(μ−1)f/x_n` with `Δ_S` from the
/// `t`-independent extension, (B) `−κ_c^{−λ−1}E_λ` applied to the chart
/// transport `κ_c^λ f∘c`, and (C) `B_μ` on `|x|^{−λ}f(x/|x|)`.
/// Returns the three values and a common magnitude scale.
pub fn compact_routes(n: usize, lambda: f64, f: &RealPoly, x: &[f64]) -> Result<([f64; 3], f64)> {
    if x[n].abs() <= 0.1 {
        return Err(Error::OutOfRange(format!("|x_n| = {} must exceed 0.1", x[n].abs())));
    }
    let mu = lambda - n as f64 / 2.0 + 1.0;
    let p = cone_point(x);
    let c = Jet::coordinates(&p, 2);
    let xn = x[n];
    let fx = f.eval(x);

    let yamabe_degree = 1.0 - n as f64 / 2.0;
    let h = radial_extension(&c, yamabe_degree, |u| {
        let un = &u[n];
        let abs = if un.value() < 0.0 { -un } else { un.clone() };
        Ok(&abs.powf(mu) * &f.eval_jet(u))
    })?;
    let euler = euler_error(&h, &p, yamabe_degree);
    if euler > EULER_TOL {
        return Err(Error::HomogeneityViolation(format!("Euler residual {euler:e}")));
    }
    let (lap, lap_scale) = box_op(&h);
    let pre = xn * xn.abs().powf(-mu);
    let tail = mu * (mu - 1.0) * fx / xn;
    let route_a = pre * lap + tail;
    let scale_a = (pre * lap_scale).abs() + tail.abs();

    let xi = chart_inverse(x)?;
    let xj = Jet::coordinates(&xi, 2);
    let transported = &kappa_c_jet(&xj).powf(lambda) * &f.eval_jet(&chart_c_jet(&xj));
    let (ef, es) = build_e(n).apply_jet_with_scale(lambda, &xi, &transported)?;
    let k = kappa_c(&xi).powf(-lambda - 1.0);
    let route_b = -k * ef;

    let ext = Extension::Radial { f, degree: -lambda };
    let fj = ext.jet(&c)?;
    require_homogeneous(&ext, &fj, &p)?;
    let (route_c, scale_c) = b_mu(&fj, mu, xn);

    Ok(([route_a, route_b, route_c], scale_a.max(k * es).max(scale_c)))
}

pub fn compact_error(n: usize, lambda: f64, f: &RealPoly, x: &[f64]) -> Result<f64> {
    let ([a, b, c], scale) = compact_routes(n, lambda, f, x)?;
    Ok(rel_err(a, b, scale).max(rel_err(a, c, scale)))
}

pub fn check_ambient_compact(n: usize, lambda: f64, f: &RealPoly, points: &[Vec<f64>], tol: f64) -> Result<CheckReport> {
    let mut t = ErrorTracker::new();
    for x in points {
        t.record(compact_error(n, lambda, f, x)?, || format!("n={n} λ={lambda} x={x:?}"));
    }
    Ok(t.finish("ambient_compact", tol))
}

/// Points of `Sⁿ` with `|x_n| > 0.1` inside the chart (`1 + x_0 ≥ 0.05`).
pub fn sphere_points(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| loop {
            let u = sampling::unit_vector(rng, n + 1);
            if u[n].abs() > 0.1 && 1.0 + u[0] >= 0.05 {
                break u;
            }
        })
        .collect()
}

pub fn sampled_ambient_compact(dims: &[usize], points: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "ambient_compact");
    let mut t = ErrorTracker::new();
    for &n in dims {
        for x in sphere_points(&mut rng, n, points) {
            let lambda = sampling::uniform(&mut rng, -1.0, 2.5);
            let f = sampling::polynomial(&mut rng, n + 1, 2);
            t.record(compact_error(n, lambda, &f, &x)?, || format!("n={n} λ={lambda} x={x:?} f={f:?}"));
        }
    }
    Ok(t.finish("ambient_compact", tol))
}

/// `□F₁ = □F₂` on the cone for two extensions of the same degree that agree there.
pub fn extension_error(e1: &Extension, e2: &Extension, p: &[f64]) -> Result<f64> {
    let c = Jet::coordinates(p, 2);
    let (j1, j2) = (e1.jet(&c)?, e2.jet(&c)?);
    require_homogeneous(e1, &j1, p)?;
    require_homogeneous(e2, &j2, p)?;
    let ((b1, s1), (b2, s2)) = (box_op(&j1), box_op(&j2));
    Ok(rel_err(b1, b2, s1.max(s2)))
}

pub fn check_extension_independence(
    e1: &Extension,
    e2: &Extension,
    points: &[Vec<f64>],
    tol: f64,
) -> Result<CheckReport> {
    let mut t = ErrorTracker::new();
    for p in points {
        t.record(extension_error(e1, e2, p)?, || format!("𝐱={p:?}"));
    }
    Ok(t.finish("extension_independence", tol))
}

/// For random polynomials `f`, `g`: the `t`-independent, the `t`-dependent
/// and the `+Q·G` extensions of degree `1 − n/2` have the same `□` on the cone.
pub fn sampled_extension_independence(dims: &[usize], points: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "extension_independence");
    let mut t = ErrorTracker::new();
    for &n in dims {
        let degree = 1.0 - n as f64 / 2.0;
        for _ in 0..points {
            let f = sampling::polynomial(&mut rng, n + 1, 2);
            let g = sampling::polynomial(&mut rng, n + 1, 2);
            let p = ambient_point(&mut rng, n, true);
            let radial = Extension::Radial { f: &f, degree };
            let temporal = Extension::Temporal { f: &f, degree };
            let quadric = Extension::Quadric { base: Box::new(radial.clone()), g: &g };
            let err = extension_error(&radial, &temporal, &p)?.max(extension_error(&radial, &quadric, &p)?);
            t.record(err, || format!("n={n} 𝐱={p:?}"));
        }
    }
    Ok(t.finish("extension_independence", tol))
}

/// Euler residuals of every extension family at random points of the cone.
pub fn sampled_euler(dims: &[usize], points: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let mut rng = sampling::rng(seed, "euler");
    let mut t = ErrorTracker::new();
    for &n in dims {
        for _ in 0..points {
            let lambda = sampling::uniform(&mut rng, -1.0, 2.5);
            let f = sampling::gaussian(&mut rng, n)?;
            let poly = sampling::polynomial(&mut rng, n + 1, 2);
            let g = sampling::polynomial(&mut rng, n + 1, 2);
            let p = ambient_point(&mut rng, n, true);
            let c = Jet::coordinates(&p, 2);
            let radial = Extension::Radial { f: &poly, degree: -lambda };
            let exts = [
                Extension::Chart { f: &f, lambda },
                radial.clone(),
                Extension::Temporal { f: &poly, degree: -lambda },
                Extension::Quadric { base: Box::new(radial), g: &g },
            ];
            for ext in &exts {
                let j = ext.jet(&c)?;
                t.record(euler_error(&j, &p, ext.degree()), || format!("n={n} 𝐱={p:?} {ext:?}"));
            }
        }
    }
    Ok(t.finish("euler", tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: usize, terms: &[(Vec<u32>, f64)]) -> RealPoly {
        RealPoly::new(n, terms.to_vec()).unwrap()
    }

    #[test]
    fn b_mu_on_linear_and_quadratic() {
        // in 𝐄 for n = 2: variables (t, x_0, x_1, x_2)
        let p = [0.7, 0.2, -0.4, 0.9];
        let c = Jet::coordinates(&p, 2);
        let mu = 0.35;
        let (v, _) = b_mu(&c[3], mu, p[3]);
        assert!((v + 2.0 * mu).abs() < 1e-15);
        let sq = &c[3] * &c[3];
        let (v, _) = b_mu(&sq, mu, p[3]);
        assert!((v + 2.0 * (2.0 * mu + 1.0) * p[3]).abs() < 1e-14);
    }

    #[test]
    fn conjugation_at_mu_zero_is_plain_box() {
        let f = TestFunction::gaussian(vec![0.1, 0.2], 0.9).unwrap();
        let ext = Extension::Chart { f: &f, lambda: 0.0 };
        let p = [1.1, 0.3, 0.5, -0.6];
        let c = Jet::coordinates(&p, 2);
        let j = ext.jet(&c).unwrap();
        let (lhs, _) = b_mu(&j, 0.0, p[3]);
        let (rhs, _) = conjugation_rhs(&c, &j, 0.0);
        let (bx, _) = box_op(&j);
        assert!((lhs - p[3] * bx).abs() < 1e-14 * bx.abs().max(1.0));
        assert!((rhs - lhs).abs() < 1e-13 * bx.abs().max(1.0));
    }

    #[test]
    fn yamabe_constant_by_hand() {
        // Δ|x|^a = a(a+n−1)|x|^{a−2} in ℝ^{n+1}; with a = 1 − n/2 and □ = −Δ_x
        let rep = sampled_yamabe_constant(&[2, 3, 4, 5], 10, 3, 1e-10).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn noncompact_dimension_three() {
        let f = TestFunction::gaussian(vec![0.3, -0.1, 0.5], 1.0).unwrap();
        let mut rng = sampling::rng(5, "test");
        let pts: Vec<Vec<f64>> = (0..30).map(|_| sampling::point(&mut rng, 3, 1.2)).collect();
        let rep = check_ambient_noncompact(0.8, &f, &pts, 1e-9).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn noncompact_needs_the_kappa_factor() {
        // without κ_c^{λ+1} the two sides differ wherever κ_c ≠ 1
        let f = TestFunction::gaussian(vec![0.3, -0.1, 0.5], 1.0).unwrap();
        let (lambda, xi) = (0.8, [0.9, 0.4, -0.7]);
        let p = cone_point(&chart_c(&xi));
        let j = Extension::Chart { f: &f, lambda }.jet(&Jet::coordinates(&p, 2)).unwrap();
        let (b, _) = b_mu(&j, lambda - 0.5, p[3]);
        let ef = build_e(3).apply_jet(lambda, &xi, &f.eval_jet(&Jet::coordinates(&xi, 2)).unwrap()).unwrap();
        assert!(rel_err(b, -ef, 0.0) > 0.1);
        assert!(noncompact_error(lambda, &f, &xi).unwrap() < 1e-12);
    }

    #[test]
    fn compact_dimension_four() {
        let f = poly(5, &[(vec![0, 0, 0, 0, 0], 0.3), (vec![1, 1, 0, 0, 0], 1.0), (vec![0, 0, 2, 0, 0], -0.5), (vec![0, 0, 0, 0, 1], 0.2)]);
        let mut rng = sampling::rng(9, "test");
        let pts = sphere_points(&mut rng, 4, 20);
        let rep = check_ambient_compact(4, 1.2, &f, &pts, 1e-8).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn identical_extensions_agree_exactly() {
        let f = poly(3, &[(vec![1, 0, 1], 1.0), (vec![0, 0, 0], 0.5)]);
        let e = Extension::Radial { f: &f, degree: 0.0 };
        let p = [1.0, 0.6, 0.0, 0.8];
        assert_eq!(extension_error(&e, &e, &p).unwrap(), 0.0);
    }

    #[test]
    fn quadric_term_needs_the_right_degree() {
        // Q·G with G of degree −n/2 (not −n/2 − 1) changes □ on the cone
        let n = 3;
        let f = poly(4, &[(vec![0, 1, 0, 0], 1.0)]);
        let g = poly(4, &[(vec![0, 0, 0, 0], 1.0)]);
        let d = 1.0 - n as f64 / 2.0;
        let p = [1.0, 0.0, 0.6, 0.8, 0.0];
        let c = Jet::coordinates(&p, 2);
        let base = Extension::Radial { f: &f, degree: d };
        let wrong = &base.jet(&c).unwrap() + &(&quadric(&c) * &radial_extension(&c, d - 1.0, |u| Ok(g.eval_jet(u))).unwrap());
        let (b0, _) = box_op(&base.jet(&c).unwrap());
        let (b1, _) = box_op(&wrong);
        assert!((b0 - b1).abs() > 1e-3);
        let right = Extension::Quadric { base: Box::new(base.clone()), g: &g };
        assert!(extension_error(&base, &right, &p).unwrap() < 1e-12);
    }

    #[test]
    fn non_homogeneous_extension_is_rejected() {
        let f = poly(3, &[(vec![0, 0, 0], 1.0)]);
        let e = Extension::Radial { f: &f, degree: 0.0 };
        let bad = Extension::Radial { f: &f, degree: 0.5 };
        // declared degree disagrees with the actual one
        let lie = Extension::Quadric { base: Box::new(bad), g: &f };
        let p = [1.0, 0.6, 0.8, 0.0];
        let c = Jet::coordinates(&p, 2);
        let j = e.jet(&c).unwrap();
        assert!(euler_error(&j, &p, 0.0) < 1e-15);
        assert!(euler_error(&j, &p, 1.0) > 0.1);
        assert!(lie.jet(&c).is_ok());
    }
}
