//! Numerical and exact verification of the intertwining identities.
//!
//! Every check produces a [`CheckReport`]; [`run_suite`] runs a fixed,
//! seeded selection of them and is deterministic for a given seed.

pub mod ambient;
pub mod covariance;
pub mod geometry;
pub mod knapp_stein;
pub mod report;
pub mod sampling;
pub mod symbolic;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use report::{rel_err, CheckReport, ErrorTracker};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Symbolic,
    Numeric,
    Ambient,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Symbolic => "symbolic",
            Suite::Numeric => "numeric",
            Suite::Ambient => "ambient",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Suite::Symbolic),
            "numeric" => Ok(Suite::Numeric),
            "ambient" => Ok(Suite::Ambient),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!("unknown suite `{s}`"))),
        }
    }
}

/// Default tolerance of every numeric check, keyed by report name.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("cocycle", 1e-10),
    ("conformal_factor_jet", 1e-10),
    ("hyperplane_factor", 1e-10),
    ("chart_conformality", 1e-10),
    ("chart_distance", 1e-10),
    ("m_intertwining", 1e-12),
    ("covariance_E", 1e-9),
    ("covariance_EN", 1e-8),
    ("knapp_stein", 1e-5),
    ("j1_gaussian", 1e-8),
    ("hs_pairing", 1e-8),
    ("inverse_j", 1e-10),
    ("ambient_noncompact", 1e-9),
    ("b_mu_conjugation", 1e-9),
    ("yamabe_constant", 1e-10),
    ("ambient_compact", 1e-8),
    ("extension_independence", 1e-9),
    ("euler", 1e-10),
];

/// Names that set several tolerances at once.
const TOLERANCE_GROUPS: &[(&str, &[&str])] = &[
    ("geometry", &["cocycle", "conformal_factor_jet", "hyperplane_factor", "chart_conformality", "chart_distance"]),
    ("covariance", &["covariance_E", "covariance_EN"]),
    ("ambient", &["ambient_noncompact", "b_mu_conjugation", "yamabe_constant", "ambient_compact", "extension_independence"]),
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteOptions {
    /// Lower bound on the dimensions each check runs over (intersected with its own range).
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub seed: u64,
    /// Tolerance overrides by check name or group name.
    pub tol: BTreeMap<String, f64>,
}

impl SuiteOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, &v) in &self.tol {
            let known = DEFAULT_TOLERANCES.iter().any(|(k, _)| k == name)
                || TOLERANCE_GROUPS.iter().any(|(k, _)| k == name);
            if !known {
                return Err(Error::Parse(format!("unknown tolerance name `{name}`")));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parse(format!("tolerance for `{name}` must be a non-negative number, got {v}")));
            }
        }
        if let (Some(a), Some(b)) = (self.n_min, self.n_max) {
            if a > b {
                return Err(Error::Parse(format!("n-min {a} exceeds n-max {b}")));
            }
        }
        Ok(())
    }

    /// Effective tolerance: a direct override wins over a group override.
    pub fn tolerance(&self, name: &str) -> f64 {
        if let Some(&v) = self.tol.get(name) {
            return v;
        }
        for (group, members) in TOLERANCE_GROUPS {
            if members.contains(&name) {
                if let Some(&v) = self.tol.get(*group) {
                    return v;
                }
            }
        }
        DEFAULT_TOLERANCES.iter().find(|(k, _)| *k == name).map(|(_, v)| *v).unwrap_or(0.0)
    }

    /// Dimensions of `range` inside `[n_min, n_max]`.
    fn dims(&self, range: impl IntoIterator<Item = usize>) -> Vec<usize> {
        range
            .into_iter()
            .filter(|&n| self.n_min.is_none_or(|m| n >= m) && self.n_max.is_none_or(|m| n <= m))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Runner<'a> {
    opts: &'a SuiteOptions,
    out: Vec<CheckReport>,
}

impl Runner<'_> {
    /// Runs `f` with the effective tolerance unless `dims` is empty; errors become failed reports.
    fn run(&mut self, name: &str, dims: &[usize], f: impl FnOnce(&[usize], f64) -> Result<CheckReport>) {
        if dims.is_empty() {
            return;
        }
        let tol = self.opts.tolerance(name);
        self.out.push(f(dims, tol).unwrap_or_else(|e| CheckReport::failed(name, tol, &e)));
    }
}

const GEOMETRY_SAMPLES: usize = 100;
const KS_POINTS: usize = 5;
const J1_POINTS: [f64; 5] = [-1.5, -0.3, 0.0, 0.7, 2.0];
const HS_CASES: [(usize, f64); 3] = [(1, -0.5), (2, -1.0), (3, -1.5)];

/// Runs the checks of `suite`. Fails only on invalid options; a check that
/// errors is reported as failed.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    opts.validate()?;
    let seed = opts.seed;
    let mut r = Runner { opts, out: Vec::new() };

    if suite.includes(Suite::Symbolic) {
        let dims = opts.dims(1..=8);
        if !dims.is_empty() {
            r.out.push(symbolic::check_mi_range(dims.iter().copied()));
            r.out.push(symbolic::check_power_rule(dims.iter().copied(), 10));
        }
        let dims = opts.dims(2..=6);
        if !dims.is_empty() {
            r.out.extend(symbolic::check_family(dims, 10));
        }
        r.run("inverse_j", &opts.dims(1..=4), |d, tol| {
            symbolic::check_inverse_j_range(d.iter().copied(), 20, seed, tol)
        });
    }

    if suite.includes(Suite::Numeric) {
        let geo = opts.dims(1..=4);
        let span = |d: &[usize]| (d[0], d[d.len() - 1]);
        type GeoCheck = fn(usize, usize, usize, u64, f64) -> Result<CheckReport>;
        let geometry: [(&str, GeoCheck); 6] = [
            ("cocycle", geometry::check_cocycle),
            ("conformal_factor_jet", geometry::check_conformal_factor),
            ("hyperplane_factor", geometry::check_hyperplane_factor),
            ("chart_conformality", geometry::check_chart_conformality),
            ("chart_distance", geometry::check_chart_distance),
            ("m_intertwining", geometry::check_m_intertwining),
        ];
        for (name, check) in geometry {
            r.run(name, &geo, |d, tol| {
                let (lo, hi) = span(d);
                check(GEOMETRY_SAMPLES, lo, hi, seed, tol)
            });
        }
        r.run("covariance_E", &opts.dims(2..=3), |d, tol| covariance::sampled_covariance_e(d, 50, seed, tol));
        r.run("covariance_EN", &opts.dims(2..=3), |d, tol| {
            covariance::sampled_covariance_en(d, &[1, 2, 3], 20, seed, tol)
        });
        let ks = knapp_stein::KsOptions::default();
        r.run("knapp_stein", &opts.dims(1..=2), |d, tol| knapp_stein::sampled_ks(d, KS_POINTS, seed, &ks, tol));
        r.run("j1_gaussian", &opts.dims([1]), |_, tol| knapp_stein::check_j1_gaussian(&J1_POINTS, &ks, tol));
        r.run("hs_pairing", &opts.dims(1..=3), |d, tol| {
            let cases: Vec<(usize, f64)> = HS_CASES.iter().copied().filter(|(n, _)| d.contains(n)).collect();
            knapp_stein::check_hs_fourier_pairings(&cases, tol)
        });
    }

    if suite.includes(Suite::Ambient) {
        let dims = opts.dims(2..=4);
        r.run("ambient_noncompact", &dims, |d, tol| ambient::sampled_ambient_noncompact(d, 30, seed, tol));
        r.run("b_mu_conjugation", &dims, |d, tol| ambient::sampled_b_mu_conjugation(d, 30, seed, tol));
        r.run("yamabe_constant", &dims, |d, tol| ambient::sampled_yamabe_constant(d, 20, seed, tol));
        r.run("ambient_compact", &dims, |d, tol| ambient::sampled_ambient_compact(d, 20, seed, tol));
        r.run("extension_independence", &dims, |d, tol| {
            ambient::sampled_extension_independence(d, 30, seed, tol)
        });
        r.run("euler", &dims, |d, tol| ambient::sampled_euler(d, 10, seed, tol));
    }

    let checks = r.out;
    let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
    Ok(SuiteReport { suite, seed, passed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::Symbolic, Suite::Numeric, Suite::Ambient, Suite::All] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let mut o = SuiteOptions::default();
        assert_eq!(o.tolerance("covariance_E"), 1e-9);
        o.tol.insert("covariance".into(), 1e-6);
        assert_eq!(o.tolerance("covariance_E"), 1e-6);
        assert_eq!(o.tolerance("covariance_EN"), 1e-6);
        o.tol.insert("covariance_EN".into(), 1e-7);
        assert_eq!(o.tolerance("covariance_EN"), 1e-7);
        assert!(o.validate().is_ok());
        o.tol.insert("bogus".into(), 1.0);
        assert!(matches!(o.validate(), Err(Error::Parse(_))));
    }

    #[test]
    fn empty_dimension_window_skips_checks() {
        let o = SuiteOptions { n_min: Some(7), n_max: Some(8), ..Default::default() };
        let rep = run_suite(Suite::Ambient, &o).unwrap();
        assert!(rep.checks.is_empty());
        assert!(!rep.passed);
        let bad = SuiteOptions { n_min: Some(3), n_max: Some(2), ..Default::default() };
        assert!(run_suite(Suite::Ambient, &bad).is_err());
    }

    #[test]
    fn ambient_suite_is_deterministic() {
        let o = SuiteOptions { n_min: Some(2), n_max: Some(2), seed: 7, ..Default::default() };
        let a = run_suite(Suite::Ambient, &o).unwrap();
        let b = run_suite(Suite::Ambient, &o).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.passed, "{:?}", a.failures().collect::<Vec<_>>());
    }
}
