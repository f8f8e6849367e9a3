//! Fourier-side calculus over the homogeneous kernels
//! `h_s(η) = |η|^s / Γ(n/2 + s/2)`.
//!
//! Expressions are sums of `c · η_n^p · h_s ⊗ T` where `T` is either `f̂` or
//! `∂f̂/∂η_n`, `s` is affine in λ and `c` is a [`SymCoeff`]. The dimension `n`
//! is a fixed integer; λ stays symbolic. The Fourier transform is
//! `f̂(η) = ∫ e^{i⟨η,ξ⟩} f(ξ) dξ`, so multiplication by `ξ_n` becomes
//! `−i ∂/∂η_n` and `∂/∂ξ_j` becomes `−i η_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::algebra::{int, rat, rational_to_f64, rational_to_string, Rational, RationalFunction};
use crate::special::{gamma, is_gamma_pole};
use crate::{Error, Result};

/// `c0 + c1·λ` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affine {
    pub c0: Rational,
    pub c1: Rational,
}

impl Affine {
    pub fn new(c0: Rational, c1: Rational) -> Self {
        Affine { c0, c1 }
    }

    pub fn constant(c0: Rational) -> Self {
        Affine { c0, c1: Rational::zero() }
    }

    pub fn ints(c0: i64, c1: i64) -> Self {
        Affine { c0: int(c0), c1: int(c1) }
    }

    pub fn add_const(&self, c: &Rational) -> Self {
        Affine { c0: &self.c0 + c, c1: self.c1.clone() }
    }

    pub fn add(&self, o: &Affine) -> Self {
        Affine { c0: &self.c0 + &o.c0, c1: &self.c1 + &o.c1 }
    }

    pub fn neg(&self) -> Self {
        Affine { c0: -&self.c0, c1: -&self.c1 }
    }

    /// Substitute `λ ↦ λ + shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        Affine { c0: &self.c0 + &self.c1 * shift, c1: self.c1.clone() }
    }

    pub fn to_rf(&self) -> RationalFunction {
        RationalFunction::affine(self.c0.clone(), self.c1.clone())
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        lambda * rational_to_f64(&self.c1) + rational_to_f64(&self.c0)
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rf())
    }
}

/// `rf(λ) · 2^{two_exp} · π^{pi_half_exp/2} · i^{i_pow}`.
///
/// Fields hold whatever was constructed; comparisons go through
/// [`SymCoeff::canonical`], which moves the integer part of the constant
/// exponent of 2 into `rf` and folds `i² = −1` so that `i_pow ∈ {0, 1}`.
#[derive(Clone, Debug)]
pub struct SymCoeff {
    pub rf: RationalFunction,
    pub two_exp: Affine,
    pub pi_half_exp: Rational,
    pub i_pow: u8,
}

impl SymCoeff {
    pub fn new(rf: RationalFunction, two_exp: Affine, pi_half_exp: Rational, i_pow: i64) -> Self {
        SymCoeff { rf, two_exp, pi_half_exp, i_pow: i_pow.rem_euclid(4) as u8 }
    }

    pub fn one() -> Self {
        Self::from_rf(RationalFunction::one())
    }

    pub fn from_rf(rf: RationalFunction) -> Self {
        SymCoeff { rf, two_exp: Affine::ints(0, 0), pi_half_exp: Rational::zero(), i_pow: 0 }
    }

    pub fn rational(c: Rational) -> Self {
        Self::from_rf(RationalFunction::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.rf.is_zero()
    }

    pub fn canonical(&self) -> SymCoeff {
        if self.rf.is_zero() {
            return SymCoeff::from_rf(RationalFunction::zero());
        }
        let k = self.two_exp.c0.floor();
        let mut rf = self.rf.scale(&pow2(k.to_integer().try_into().expect("exponent of 2 fits in i64")));
        let mut i_pow = self.i_pow % 4;
        if i_pow >= 2 {
            rf = rf.neg();
            i_pow -= 2;
        }
        SymCoeff {
            rf,
            two_exp: Affine::new(&self.two_exp.c0 - k, self.two_exp.c1.clone()),
            pi_half_exp: self.pi_half_exp.clone(),
            i_pow,
        }
    }

    pub fn mul(&self, o: &SymCoeff) -> SymCoeff {
        SymCoeff {
            rf: self.rf.mul(&o.rf),
            two_exp: self.two_exp.add(&o.two_exp),
            pi_half_exp: &self.pi_half_exp + &o.pi_half_exp,
            i_pow: (self.i_pow + o.i_pow) % 4,
        }
        .canonical()
    }

    pub fn mul_rf(&self, rf: &RationalFunction) -> SymCoeff {
        SymCoeff { rf: self.rf.mul(rf), ..self.clone() }.canonical()
    }

    pub fn shift_lambda(&self, shift: &Rational) -> SymCoeff {
        SymCoeff {
            rf: self.rf.shift(shift),
            two_exp: self.two_exp.shift(shift),
            pi_half_exp: self.pi_half_exp.clone(),
            i_pow: self.i_pow,
        }
        .canonical()
    }

    /// Numeric value at λ; `None` at a pole of `rf`.
    pub fn eval(&self, lambda: Complex64) -> Option<Complex64> {
        let r = self.rf.eval(lambda)?;
        let two = (self.two_exp.eval(lambda) * std::f64::consts::LN_2).exp();
        let pi = std::f64::consts::PI.powf(rational_to_f64(&self.pi_half_exp) / 2.0);
        let i = Complex64::i().powu(self.i_pow as u32);
        Some(r * two * pi * i)
    }

    fn key(&self) -> CoeffKey {
        let c = self.canonical();
        CoeffKey { two_frac: c.two_exp.c0, two_lambda: c.two_exp.c1, pi_half_exp: c.pi_half_exp, i_pow: c.i_pow }
    }
}

impl PartialEq for SymCoeff {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        if a.is_zero() || b.is_zero() {
            return a.is_zero() && b.is_zero();
        }
        a.rf == b.rf && a.two_exp == b.two_exp && a.pi_half_exp == b.pi_half_exp && a.i_pow == b.i_pow
    }
}

impl fmt::Display for SymCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        write!(f, "({})", c.rf)?;
        if !c.two_exp.is_zero() {
            write!(f, "·2^({})", c.two_exp)?;
        }
        if !c.pi_half_exp.is_zero() {
            write!(f, "·π^({}/2)", rational_to_string(&c.pi_half_exp))?;
        }
        if c.i_pow == 1 {
            write!(f, "·i")?;
        }
        Ok(())
    }
}

fn pow2(k: i64) -> Rational {
    let two = int(2);
    if k >= 0 {
        num_traits::pow(two, k as usize)
    } else {
        num_traits::pow(two, (-k) as usize).recip()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CoeffKey {
    two_frac: Rational,
    two_lambda: Rational,
    pi_half_exp: Rational,
    i_pow: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Fhat,
    DFhatDn,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HTerm {
    pub coeff: SymCoeff,
    pub eta_n_pow: u32,
    pub s: Affine,
    pub target: Target,
}

impl HTerm {
    pub fn new(coeff: SymCoeff, eta_n_pow: u32, s: Affine, target: Target) -> Self {
        HTerm { coeff, eta_n_pow, s, target }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct TermKey {
    target: Target,
    s: Affine,
    eta_n_pow: u32,
    coeff: CoeffKey,
}

/// A sum of [`HTerm`]s with like terms merged. Equality is exact.
#[derive(Clone, Debug, PartialEq)]
pub struct HExpr {
    n: usize,
    terms: BTreeMap<TermKey, RationalFunction>,
}

impl HExpr {
    pub fn zero(n: usize) -> Self {
        HExpr { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = HTerm>) -> Self {
        let mut e = HExpr::zero(n);
        for t in terms {
            e.push(t);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, t: HTerm) {
        let c = t.coeff.canonical();
        if c.is_zero() {
            return;
        }
        let key = TermKey { target: t.target, s: t.s, eta_n_pow: t.eta_n_pow, coeff: c.key() };
        let sum = match self.terms.get(&key) {
            Some(prev) => prev.add(&c.rf),
            None => c.rf,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    /// Terms in canonical order: by target, then `s`, then the power of `η_n`.
    pub fn terms(&self) -> Vec<HTerm> {
        self.terms
            .iter()
            .map(|(k, rf)| HTerm {
                coeff: SymCoeff {
                    rf: rf.clone(),
                    two_exp: Affine::new(k.coeff.two_frac.clone(), k.coeff.two_lambda.clone()),
                    pi_half_exp: k.coeff.pi_half_exp.clone(),
                    i_pow: k.coeff.i_pow,
                },
                eta_n_pow: k.eta_n_pow,
                s: k.s.clone(),
                target: k.target,
            })
            .collect()
    }

    /// Sum of the coefficients of all terms with the given shape.
    pub fn coeff_of(&self, target: Target, s: &Affine, eta_n_pow: u32) -> Vec<SymCoeff> {
        self.terms()
            .into_iter()
            .filter(|t| t.target == target && &t.s == s && t.eta_n_pow == eta_n_pow)
            .map(|t| t.coeff)
            .collect()
    }

    fn map_terms(&self, f: impl Fn(HTerm) -> Result<Vec<HTerm>>) -> Result<HExpr> {
        let mut out = HExpr::zero(self.n);
        for t in self.terms() {
            for u in f(t)? {
                out.push(u);
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &HExpr) -> HExpr {
        let mut out = self.clone();
        for t in o.terms() {
            out.push(t);
        }
        out
    }

    pub fn scale(&self, c: &SymCoeff) -> HExpr {
        self.map_terms(|t| Ok(vec![HTerm { coeff: t.coeff.mul(c), ..t }])).expect("infallible")
    }

    pub fn mul_eta_n(&self) -> HExpr {
        self.map_terms(|t| Ok(vec![HTerm { eta_n_pow: t.eta_n_pow + 1, ..t }])).expect("infallible")
    }

    pub fn with_target(&self, target: Target) -> HExpr {
        self.map_terms(|t| Ok(vec![HTerm { target, ..t }])).expect("infallible")
    }

    pub fn shift_lambda(&self, shift: &Rational) -> HExpr {
        self.map_terms(|t| {
            Ok(vec![HTerm { coeff: t.coeff.shift_lambda(shift), s: t.s.shift(shift), ..t }])
        })
        .expect("infallible")
    }

    /// Multiply by `|η|²` using `|η|² h_s = (n+s)/2 · h_{s+2}`.
    pub fn mul_norm_sq(&self) -> HExpr {
        let n = int(self.n as i64);
        self.map_terms(|t| {
            let factor = t.s.add_const(&n).to_rf().scale(&rat(1, 2));
            Ok(vec![HTerm { coeff: t.coeff.mul_rf(&factor), s: t.s.add_const(&int(2)), ..t }])
        })
        .expect("infallible")
    }

    /// `∂/∂η_n`, with `∂_n h_s = 2s/(n+s−2) · η_n h_{s−2}`.
    pub fn d_dn(&self) -> Result<HExpr> {
        let n = int(self.n as i64);
        self.map_terms(|t| {
            let mut out = Vec::with_capacity(3);
            if t.eta_n_pow > 0 {
                out.push(HTerm {
                    coeff: t.coeff.mul_rf(&RationalFunction::constant(int(t.eta_n_pow as i64))),
                    eta_n_pow: t.eta_n_pow - 1,
                    ..t.clone()
                });
            }
            if !t.s.is_zero() {
                let den = t.s.add_const(&(&n - int(2))).to_rf();
                if den.is_zero() {
                    return Err(Error::KernelPole(format!("s = {} with n = {}", t.s, self.n)));
                }
                let factor = t.s.to_rf().scale(&int(2)).div(&den)?;
                out.push(HTerm {
                    coeff: t.coeff.mul_rf(&factor),
                    eta_n_pow: t.eta_n_pow + 1,
                    s: t.s.add_const(&int(-2)),
                    target: t.target,
                });
            }
            match t.target {
                Target::Fhat => out.push(HTerm { target: Target::DFhatDn, ..t }),
                Target::DFhatDn => {
                    return Err(Error::ClosureExceeded)
                }
            }
            Ok(out)
        })
    }

    /// Numeric value at `(λ, η)` given the values of `f̂` and `∂f̂/∂η_n` there.
    pub fn eval(&self, lambda: Complex64, eta: &[f64], fhat: Complex64, dfhat_dn: Complex64) -> Result<Complex64> {
        if eta.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, eta.len()));
        }
        let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut acc = Complex64::zero();
        for t in self.terms() {
            let c = t
                .coeff
                .eval(lambda)
                .ok_or_else(|| Error::PoleAtLambda(format!("{lambda}")))?;
            let s = t.s.eval(lambda);
            let h = h_kernel(self.n, s, norm);
            let target = match t.target {
                Target::Fhat => fhat,
                Target::DFhatDn => dfhat_dn,
            };
            acc += c * eta[self.n - 1].powi(t.eta_n_pow as i32) * h * target;
        }
        Ok(acc)
    }
}

impl fmt::Display for HExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            match t.eta_n_pow {
                0 => {}
                1 => write!(f, "·η_n")?,
                p => write!(f, "·η_n^{p}")?,
            }
            write!(f, "·h_{{{}}}", t.s)?;
            match t.target {
                Target::Fhat => write!(f, "⊗f̂")?,
                Target::DFhatDn => write!(f, "⊗∂f̂/∂η_n")?,
            }
        }
        Ok(())
    }
}

/// `h_s(η)` at `|η| = norm`; the reciprocal Γ vanishes at its poles.
pub fn h_kernel(n: usize, s: Complex64, norm: f64) -> Complex64 {
    let arg = s * 0.5 + n as f64 / 2.0;
    match gamma(arg) {
        None => Complex64::zero(),
        Some(g) => (s * norm.ln()).exp() / g,
    }
}

/// `ĥ_s = 2^{n+s} π^{n/2} h_{−n−s}`: the coefficient and the new index.
pub fn hat_rule(n: usize, s: &Affine) -> (SymCoeff, Affine) {
    let ni = int(n as i64);
    let coeff = SymCoeff::new(RationalFunction::one(), s.add_const(&ni), ni.clone(), 0).canonical();
    (coeff, s.neg().add_const(&-ni))
}

/// Symbol of `J_λ` (convolution with `h_{2λ−2n}`): `2^{−n+2λ} π^{n/2} h_{n−2λ} ⊗ f̂`.
pub fn j_symbol(n: usize) -> HExpr {
    let kernel = Affine::ints(-2 * n as i64, 2);
    let (coeff, s) = hat_rule(n, &kernel);
    HExpr::from_terms(n, [HTerm::new(coeff, 0, s, Target::Fhat)])
}

/// Symbol of `M∘J_λ`, `M` being multiplication by `ξ_n`: `−i ∂/∂η_n` of the `J_λ` symbol.
pub fn symbol_mj(n: usize) -> Result<HExpr> {
    let minus_i = SymCoeff::new(RationalFunction::one(), Affine::ints(0, 0), Rational::zero(), 3);
    Ok(j_symbol(n).d_dn()?.scale(&minus_i))
}

/// Symbol of `J_{λ+1}∘E_λ`. On the Fourier side `E_λ f` becomes
/// `−i[(2λ−n) η_n f̂ − |η|² ∂f̂/∂η_n]`; the `J_{λ+1}` kernel then absorbs `|η|²`.
pub fn symbol_je(n: usize) -> HExpr {
    let j_next = j_symbol(n).shift_lambda(&Rational::one());
    let minus_i = SymCoeff::new(RationalFunction::one(), Affine::ints(0, 0), Rational::zero(), 3);
    let transversal = j_next
        .mul_eta_n()
        .scale(&SymCoeff::from_rf(RationalFunction::affine(int(-(n as i64)), int(2))));
    let radial = j_next
        .with_target(Target::DFhatDn)
        .mul_norm_sq()
        .scale(&SymCoeff::rational(int(-1)));
    transversal.add(&radial).scale(&minus_i)
}

/// The factor `1/(4(λ−n+1))` relating the two symbols.
pub fn mi_factor(n: usize) -> SymCoeff {
    let den = RationalFunction::affine(int(4 - 4 * n as i64), int(4));
    SymCoeff::from_rf(RationalFunction::one().div(&den).expect("nonzero"))
}

/// `M∘J_λ = 1/(4(λ−n+1)) · J_{λ+1}∘E_λ` as an exact identity of symbols.
pub fn check_mi(n: usize) -> Result<bool> {
    check_mi_with_factor(n, &mi_factor(n))
}

pub fn check_mi_with_factor(n: usize, factor: &SymCoeff) -> Result<bool> {
    Ok(symbol_mj(n)? == symbol_je(n).scale(factor))
}

/// Relative tolerance of [`check_inverse_j`].
pub const INVERSE_J_TOL: f64 = 1e-10;

/// Product of the `J_λ` and `J_{n−λ}` symbols on the unit sphere compared with
/// `π^n / (Γ(λ)Γ(n−λ))`; true when every sample agrees to [`INVERSE_J_TOL`].
pub fn check_inverse_j(n: usize, lambda_samples: &[Complex64]) -> Result<bool> {
    Ok(inverse_j_error(n, lambda_samples)? <= INVERSE_J_TOL)
}

/// Largest relative deviation over the samples in [`check_inverse_j`].
pub fn inverse_j_error(n: usize, lambda_samples: &[Complex64]) -> Result<f64> {
    let sym = j_symbol(n);
    let nf = n as f64;
    let eta: Vec<f64> = (0..n).map(|k| if k + 1 == n { 1.0 } else { 0.0 }).collect();
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for &lam in lambda_samples {
        let dual = Complex64::new(nf, 0.0) - lam;
        if is_gamma_pole(lam) || is_gamma_pole(dual) {
            return Err(Error::PoleAtLambda(format!("{lam}")));
        }
        let lhs = sym.eval(lam, &eta, one, Complex64::zero())? * sym.eval(dual, &eta, one, Complex64::zero())?;
        let rhs = std::f64::consts::PI.powi(n as i32) / (gamma(lam).expect("checked") * gamma(dual).expect("checked"));
        let scale = lhs.norm().max(rhs.norm());
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}
