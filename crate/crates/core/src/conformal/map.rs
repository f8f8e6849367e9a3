use nalgebra::DMatrix;

use super::Jet;
use crate::{Error, Result};

/// Inversions closer than this to the origin are reported as singular.
pub const SINGULAR_EPS: f64 = 1e-12;

const ORTHO_TOL: f64 = 1e-12;

/// Elementary conformal maps of ℝⁿ (in the transferred action).
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `ξ ↦ ξ + v`.
    Translation(Vec<f64>),
    /// `ξ ↦ Rξ` with `R ∈ SO(n)`.
    Rotation(DMatrix<f64>),
    /// `ξ ↦ rξ`, `r > 0`.
    Dilation(f64),
    /// The chart change `ξ ↦ (−ξ_1, ξ_2, …, ξ_n) / |ξ|²`.
    InversionS,
}

impl Generator {
    fn inverse(&self) -> Generator {
        match self {
            Generator::Translation(v) => Generator::Translation(v.iter().map(|x| -x).collect()),
            Generator::Rotation(r) => Generator::Rotation(r.transpose()),
            Generator::Dilation(r) => Generator::Dilation(1.0 / r),
            Generator::InversionS => Generator::InversionS,
        }
    }

    fn preserves_hyperplane(&self, n: usize) -> bool {
        match self {
            Generator::Translation(v) => v[n - 1] == 0.0,
            Generator::Rotation(r) => (0..n).all(|k| {
                let want = if k == n - 1 { 1.0 } else { 0.0 };
                (r[(n - 1, k)] - want).abs() <= ORTHO_TOL && (r[(k, n - 1)] - want).abs() <= ORTHO_TOL
            }),
            Generator::Dilation(_) => true,
            // for n = 1 the flipped coordinate is the normal one
            Generator::InversionS => n >= 2,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Generator::Translation(v) if v.len() != n => Err(Error::DimensionMismatch(v.len(), n)),
            Generator::Translation(v) if v.iter().any(|x| !x.is_finite()) => {
                Err(Error::InvalidGenerator("non-finite translation".into()))
            }
            Generator::Rotation(r) => {
                if r.nrows() != n || r.ncols() != n {
                    return Err(Error::DimensionMismatch(r.nrows(), n));
                }
                let defect = (r.transpose() * r - DMatrix::<f64>::identity(n, n)).amax();
                let det = r.determinant();
                if defect > ORTHO_TOL || (det - 1.0).abs() > ORTHO_TOL {
                    return Err(Error::InvalidGenerator(format!(
                        "rotation not in SO({n}): orthogonality defect {defect:e}, det {det}"
                    )));
                }
                Ok(())
            }
            Generator::Dilation(r) if !(*r > 0.0 && r.is_finite()) => {
                Err(Error::InvalidGenerator(format!("dilation factor {r} must be positive")))
            }
            _ => Ok(()),
        }
    }

    fn act_point(&self, x: &mut [f64]) -> Result<f64> {
        match self {
            Generator::Translation(v) => {
                x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += vi);
                Ok(1.0)
            }
            Generator::Rotation(r) => {
                let y: Vec<f64> = (0..x.len()).map(|i| (0..x.len()).map(|k| r[(i, k)] * x[k]).sum()).collect();
                x.copy_from_slice(&y);
                Ok(1.0)
            }
            Generator::Dilation(r) => {
                x.iter_mut().for_each(|xi| *xi *= r);
                Ok(*r)
            }
            Generator::InversionS => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                if r2.sqrt() < SINGULAR_EPS {
                    return Err(Error::SingularPoint(format!("inversion at |ξ| = {:e}", r2.sqrt())));
                }
                let inv = 1.0 / r2;
                x.iter_mut().for_each(|xi| *xi *= inv);
                x[0] = -x[0];
                Ok(inv)
            }
        }
    }

    /// Image jets and conformal-factor jet of this generator.
    fn act_jet(&self, x: &[Jet<f64>]) -> Result<(Vec<Jet<f64>>, Jet<f64>)> {
        let d = x.len();
        let one = Jet::constant(x[0].nvars(), x[0].order(), 1.0);
        match self {
            Generator::Translation(v) => {
                Ok((x.iter().zip(v).map(|(xi, vi)| xi.add_const(*vi)).collect(), one))
            }
            Generator::Rotation(r) => {
                let out = (0..d)
                    .map(|i| {
                        let mut acc = x[0].scale(r[(i, 0)]);
                        for (k, xk) in x.iter().enumerate().skip(1) {
                            acc = &acc + &xk.scale(r[(i, k)]);
                        }
                        acc
                    })
                    .collect();
                Ok((out, one))
            }
            Generator::Dilation(r) => Ok((x.iter().map(|xi| xi.scale(*r)).collect(), one.scale(*r))),
            Generator::InversionS => {
                let mut r2 = &x[0] * &x[0];
                for xi in &x[1..] {
                    r2 = &r2 + &(xi * xi);
                }
                if r2.value().sqrt() < SINGULAR_EPS {
                    return Err(Error::SingularPoint(format!(
                        "inversion at |ξ| = {:e}",
                        r2.value().sqrt()
                    )));
                }
                let inv = r2.recip();
                let out = x
                    .iter()
                    .enumerate()
                    .map(|(i, xi)| {
                        let y = xi * &inv;
                        if i == 0 {
                            -y
                        } else {
                            y
                        }
                    })
                    .collect();
                Ok((out, inv))
            }
        }
    }
}

/// A word in the generators. Generators are applied in list order: the
/// word `[g0, g1, g2]` is the map `g2 ∘ g1 ∘ g0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalMap {
    n: usize,
    word: Vec<Generator>,
}

impl ConformalMap {
    pub fn identity(n: usize) -> Self {
        ConformalMap { n, word: Vec::new() }
    }

    pub fn from_word(n: usize, word: Vec<Generator>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("dimension must be at least 1".into()));
        }
        for g in &word {
            g.validate(n)?;
        }
        Ok(ConformalMap { n, word })
    }

    pub fn translation(v: Vec<f64>) -> Result<Self> {
        let n = v.len();
        Self::from_word(n, vec![Generator::Translation(v)])
    }

    /// Translation parallel to the hyperplane (`v_n = 0`).
    pub fn tangential_translation(v: Vec<f64>) -> Result<Self> {
        if v.last().copied().unwrap_or(0.0) != 0.0 {
            return Err(Error::InvalidGenerator("tangential translation needs v_n = 0".into()));
        }
        Self::translation(v)
    }

    pub fn rotation(r: DMatrix<f64>) -> Result<Self> {
        let n = r.nrows();
        Self::from_word(n, vec![Generator::Rotation(r)])
    }

    /// `R′ ⊕ 1` for `R′ ∈ SO(n−1)`.
    pub fn tangential_rotation(r: &DMatrix<f64>) -> Result<Self> {
        let m = r.nrows();
        let mut full = DMatrix::<f64>::identity(m + 1, m + 1);
        full.view_mut((0, 0), (m, m)).copy_from(r);
        Self::rotation(full)
    }

    pub fn dilation(n: usize, r: f64) -> Result<Self> {
        Self::from_word(n, vec![Generator::Dilation(r)])
    }

    pub fn inversion(n: usize) -> Self {
        ConformalMap { n, word: vec![Generator::InversionS] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn contains_inversion(&self) -> bool {
        self.word.iter().any(|g| matches!(g, Generator::InversionS))
    }

    /// `other ∘ self`: apply `self`, then `other`.
    pub fn then(&self, other: &ConformalMap) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Ok(ConformalMap { n: self.n, word })
    }

    pub fn inverse(&self) -> Self {
        ConformalMap { n: self.n, word: self.word.iter().rev().map(Generator::inverse).collect() }
    }

    /// Whether every generator maps `{ξ_n = 0}` onto itself.
    pub fn preserves_hyperplane(&self) -> bool {
        self.word.iter().all(|g| g.preserves_hyperplane(self.n))
    }

    /// The induced map on ℝⁿ⁻¹ ≅ `{ξ_n = 0}`.
    pub fn restrict_to_hyperplane(&self) -> Result<Self> {
        if self.n < 2 {
            return Err(Error::OutOfRange("restriction needs n ≥ 2".into()));
        }
        if !self.preserves_hyperplane() {
            return Err(Error::InvalidGenerator("map does not preserve ξ_n = 0".into()));
        }
        let m = self.n - 1;
        let word = self
            .word
            .iter()
            .map(|g| match g {
                Generator::Translation(v) => Generator::Translation(v[..m].to_vec()),
                Generator::Rotation(r) => Generator::Rotation(r.view((0, 0), (m, m)).into_owned()),
                other => other.clone(),
            })
            .collect();
        Ok(ConformalMap { n: m, word })
    }

    /// Image jets and the conformal factor jet `κ(g, ·)`, accumulated through
    /// the cocycle `κ(g₂g₁, ξ) = κ(g₂, g₁ξ) κ(g₁, ξ)`.
    pub fn act_jet(&self, x: &[Jet<f64>]) -> Result<(Vec<Jet<f64>>, Jet<f64>)> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(x.len(), self.n));
        }
        let mut pts = x.to_vec();
        let mut kappa = Jet::constant(x[0].nvars(), x[0].order(), 1.0);
        for g in &self.word {
            let (next, k) = g.act_jet(&pts)?;
            kappa = &kappa * &k;
            pts = next;
        }
        Ok((pts, kappa))
    }

    pub fn act(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let (p, _) = self.act_with_kappa(xi)?;
        Ok(p)
    }

    /// Conformal factor as the cocycle product of the generator factors.
    pub fn kappa(&self, xi: &[f64]) -> Result<f64> {
        Ok(self.act_with_kappa(xi)?.1)
    }

    /// Image point and conformal factor, without derivatives.
    pub fn act_with_kappa(&self, xi: &[f64]) -> Result<(Vec<f64>, f64)> {
        if xi.len() != self.n {
            return Err(Error::DimensionMismatch(xi.len(), self.n));
        }
        let mut p = xi.to_vec();
        let mut kappa = 1.0;
        for g in &self.word {
            kappa *= g.act_point(&mut p)?;
        }
        Ok((p, kappa))
    }

    /// Jacobian matrix `Dg(ξ)` from first-order jets.
    pub fn jacobian(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        let jets = Jet::coordinates(xi, 1);
        let (p, _) = self.act_jet(&jets)?;
        Ok(DMatrix::from_fn(self.n, self.n, |i, j| p[i].grad()[j]))
    }

    /// Smallest |ξ| at which an inversion in the word is evaluated
    /// (`+∞` when the word has none).
    pub fn min_inversion_radius(&self, xi: &[f64]) -> Result<f64> {
        let mut p = xi.to_vec();
        let mut min = f64::INFINITY;
        for g in &self.word {
            if matches!(g, Generator::InversionS) {
                min = min.min(p.iter().map(|v| v * v).sum::<f64>().sqrt());
            }
            g.act_point(&mut p)?;
        }
        Ok(min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dilation_scales() {
        let g = ConformalMap::dilation(3, 2.0).unwrap();
        assert_eq!(g.act(&[1.0, 0.0, 0.0]).unwrap(), vec![2.0, 0.0, 0.0]);
        assert_eq!(g.kappa(&[0.3, 0.1, -2.0]).unwrap(), 2.0);
    }

    #[test]
    fn inversion_fixes_sphere_up_to_reflection() {
        let s = ConformalMap::inversion(2);
        let p = s.act(&[1.0, 0.0]).unwrap();
        assert_relative_eq!(p[0], -1.0);
        assert_relative_eq!(p[1], 0.0);
    }

    #[test]
    fn inversion_is_involution() {
        let s = ConformalMap::inversion(3);
        let ss = s.then(&s).unwrap();
        let xi = [0.3, -1.1, 0.7];
        let p = ss.act(&xi).unwrap();
        for k in 0..3 {
            assert_relative_eq!(p[k], xi[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn inversion_conformal_factor() {
        let s = ConformalMap::inversion(2);
        let xi = [1.2, 1.6];
        assert_relative_eq!(s.kappa(&xi).unwrap(), 0.25, epsilon = 1e-15);
        // oracle: |Ds(ξ)η| / |η|
        let jac = s.jacobian(&xi).unwrap();
        let eta = nalgebra::DVector::from_vec(vec![0.6, -0.8]);
        assert_relative_eq!((jac * &eta).norm() / eta.norm(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn composite_factor_via_cocycle() {
        let g = ConformalMap::from_word(2, vec![Generator::InversionS, Generator::Dilation(2.0)]).unwrap();
        assert_relative_eq!(g.kappa(&[0.6, 0.8]).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn singular_point_reported() {
        let s = ConformalMap::inversion(2);
        assert!(matches!(s.act(&[0.0, 0.0]), Err(Error::SingularPoint(_))));
    }

    #[test]
    fn invalid_generators_rejected() {
        assert!(ConformalMap::dilation(2, -1.0).is_err());
        assert!(ConformalMap::tangential_translation(vec![0.0, 1.0]).is_err());
        let refl = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(ConformalMap::rotation(refl).is_err());
    }

    #[test]
    fn hyperplane_preservation() {
        let (c, s) = (0.6f64, 0.8f64);
        let r = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        assert!(ConformalMap::tangential_rotation(&r).unwrap().preserves_hyperplane());
        assert!(!ConformalMap::rotation(r).unwrap().preserves_hyperplane());
        assert!(!ConformalMap::translation(vec![0.0, 1.0]).unwrap().preserves_hyperplane());
        assert!(ConformalMap::inversion(2).preserves_hyperplane());
        assert!(!ConformalMap::inversion(1).preserves_hyperplane());
    }
}
