use serde::{Deserialize, Serialize};

/// Outcome of one verification check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Descriptor of the worst sample (or the error that stopped the check).
    pub diagnostics: String,
}

impl CheckReport {
    /// A report for a check that aborted with an error.
    pub fn failed(name: &str, tolerance: f64, err: &crate::Error) -> Self {
        CheckReport {
            name: name.to_string(),
            samples: 0,
            max_rel_err: f64::MAX,
            tolerance,
            passed: false,
            diagnostics: err.to_string(),
        }
    }

    /// A report for an exact (symbolic) check: error 0 on success, 1 otherwise.
    pub fn exact(name: &str, samples: usize, failures: &[String]) -> Self {
        CheckReport {
            name: name.to_string(),
            samples,
            max_rel_err: if failures.is_empty() { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: failures.is_empty(),
            diagnostics: if failures.is_empty() {
                "exact".to_string()
            } else {
                format!("{} mismatches; first: {}", failures.len(), failures[0])
            },
        }
    }
}

/// Running maximum of relative errors with the descriptor of the worst sample.
#[derive(Debug, Default)]
pub struct ErrorTracker {
    samples: usize,
    worst: f64,
    descriptor: String,
}

impl ErrorTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, err: f64, describe: impl FnOnce() -> String) {
        self.samples += 1;
        // NaN counts as the worst possible outcome
        let err = if err.is_nan() { f64::MAX } else { err };
        if self.samples == 1 || err > self.worst {
            self.worst = err;
            self.descriptor = describe();
        }
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn worst(&self) -> f64 {
        self.worst
    }

    pub fn finish(self, name: &str, tolerance: f64) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            samples: self.samples,
            max_rel_err: self.worst,
            tolerance,
            passed: self.samples > 0 && self.worst <= tolerance,
            diagnostics: self.descriptor,
        }
    }
}

/// `|a − b| / max(|a|, |b|, scale)`, zero when every quantity vanishes.
/// `scale` is the summed magnitude of the terms that produced `a` and `b`,
/// so cancellation inside a sum is not mistaken for a large error.
pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    let d = a.abs().max(b.abs()).max(scale);
    if d == 0.0 {
        0.0
    } else {
        (a - b).abs() / d
    }
}
