use super::Jet;
use crate::{Error, Result};

/// Real polynomial in absolute coordinates, stored as monomial list.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    dim: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl RealPoly {
    pub fn new(dim: usize, terms: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != dim) {
            return Err(Error::DimensionMismatch(e.len(), dim));
        }
        Ok(RealPoly { dim, terms })
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        RealPoly { dim, terms: vec![(vec![0; dim], c)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<u32>, f64)] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&p, v)| v.powi(p as i32)).product::<f64>())
            .sum()
    }

    pub fn eval_jet(&self, x: &[Jet<f64>]) -> Jet<f64> {
        let mut acc = Jet::constant(x[0].nvars(), x[0].order(), 0.0);
        for (e, c) in &self.terms {
            let mut m = Jet::constant(x[0].nvars(), x[0].order(), *c);
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    m = &m * &x[k].powi(p);
                }
            }
            acc = &acc + &m;
        }
        acc
    }

    /// Set the last coordinate to zero and drop it.
    fn restrict_hyperplane(&self) -> RealPoly {
        let m = self.dim - 1;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[m] == 0)
            .map(|(e, c)| (e[..m].to_vec(), *c))
            .collect();
        RealPoly { dim: m, terms }
    }
}

/// Smooth test functions: Gaussian bumps `P(ξ) exp(−|ξ−m|²/a²)` (Schwartz
/// class) and plain polynomials (used as functions on the sphere).
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    GaussianBump { center: Vec<f64>, width: f64, prefactor: Option<RealPoly> },
    Polynomial(RealPoly),
}

impl TestFunction {
    pub fn gaussian(center: Vec<f64>, width: f64) -> Result<Self> {
        Self::gaussian_with_prefactor(center, width, None)
    }

    pub fn gaussian_with_prefactor(center: Vec<f64>, width: f64, prefactor: Option<RealPoly>) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::OutOfRange(format!("Gaussian width {width} must be positive")));
        }
        if let Some(p) = &prefactor {
            if p.dim != center.len() {
                return Err(Error::DimensionMismatch(p.dim, center.len()));
            }
        }
        Ok(TestFunction::GaussianBump { center, width, prefactor })
    }

    pub fn polynomial(p: RealPoly) -> Self {
        TestFunction::Polynomial(p)
    }

    /// Center of a Gaussian bump.
    pub fn center(&self) -> Option<&[f64]> {
        match self {
            TestFunction::GaussianBump { center, .. } => Some(center),
            TestFunction::Polynomial(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::GaussianBump { center, .. } => center.len(),
            TestFunction::Polynomial(p) => p.dim,
        }
    }

    pub fn eval_jet(&self, x: &[Jet<f64>]) -> Result<Jet<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(x.len(), self.dim()));
        }
        Ok(match self {
            TestFunction::GaussianBump { center, width, prefactor } => {
                let mut q = Jet::constant(x[0].nvars(), x[0].order(), 0.0);
                for (xi, m) in x.iter().zip(center) {
                    let d = xi.add_const(-m);
                    q = &q + &(&d * &d);
                }
                let g = q.scale(-1.0 / (width * width)).exp();
                match prefactor {
                    Some(p) => &p.eval_jet(x) * &g,
                    None => g,
                }
            }
            TestFunction::Polynomial(p) => p.eval_jet(x),
        })
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(x.len(), self.dim()));
        }
        Ok(match self {
            TestFunction::GaussianBump { center, width, prefactor } => {
                let q: f64 = x.iter().zip(center).map(|(a, m)| (a - m) * (a - m)).sum();
                let g = (-q / (width * width)).exp();
                match prefactor {
                    Some(p) => p.eval(x) * g,
                    None => g,
                }
            }
            TestFunction::Polynomial(p) => p.eval(x),
        })
    }

    /// Restriction to `{ξ_n = 0}` as a function on ℝⁿ⁻¹.
    pub fn restrict_hyperplane(&self) -> Result<TestFunction> {
        if self.dim() < 2 {
            return Err(Error::OutOfRange("restriction needs n ≥ 2".into()));
        }
        Ok(match self {
            TestFunction::GaussianBump { center, width, prefactor } => {
                let m = center.len() - 1;
                let damp = (-(center[m] * center[m]) / (width * width)).exp();
                let pre = match prefactor {
                    Some(p) => {
                        let r = p.restrict_hyperplane();
                        RealPoly { dim: m, terms: r.terms.into_iter().map(|(e, c)| (e, c * damp)).collect() }
                    }
                    None => RealPoly::constant(m, damp),
                };
                TestFunction::GaussianBump { center: center[..m].to_vec(), width: *width, prefactor: Some(pre) }
            }
            TestFunction::Polynomial(p) => TestFunction::Polynomial(p.restrict_hyperplane()),
        })
    }
}
