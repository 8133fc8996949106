//! Method-tagged results with cross-check bookkeeping.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::format_complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    RootMethod,
    Oracle,
    Pick,
    Ft,
    Limit,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::RootMethod => "root_method",
            Method::Oracle => "oracle",
            Method::Pick => "pick",
            Method::Ft => "ft",
            Method::Limit => "limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub value: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InputsEcho {
    pub zeros: Vec<String>,
    pub t: Option<String>,
    pub gamma: Option<f64>,
}

impl InputsEcho {
    pub fn zeros(zeros: &[Complex64]) -> Self {
        Self { zeros: zeros.iter().map(|&z| format_complex(z)).collect(), ..Self::default() }
    }

    pub fn with_t(mut self, t: Complex64) -> Self {
        self.t = Some(format_complex(t));
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub method: Method,
    pub cross_checks: BTreeMap<Method, CrossCheck>,
    pub warnings: Vec<String>,
    /// Method-specific residuals (root residuals, eigenvalue bands, ...).
    pub diagnostics: BTreeMap<String, f64>,
    pub inputs_echo: InputsEcho,
}

impl NormResult {
    pub fn new(value: f64, method: Method, inputs_echo: InputsEcho) -> Self {
        Self {
            value,
            method,
            cross_checks: BTreeMap::new(),
            warnings: Vec::new(),
            diagnostics: BTreeMap::new(),
            inputs_echo,
        }
    }

    /// Records `|value - other|` against `tolerance`; a miss adds a warning.
    pub fn cross_check(&mut self, method: Method, other: f64, tolerance: f64) -> bool {
        let delta = (self.value - other).abs();
        let passed = delta <= tolerance;
        if !passed {
            self.warnings.push(format!(
                "{} differs from {} by {delta:.3e} (tolerance {tolerance:.1e})",
                self.method.as_str(),
                method.as_str()
            ));
        }
        self.cross_checks.insert(method, CrossCheck { value: other, delta, tolerance, passed });
        passed
    }

    pub fn has_mismatch(&self) -> bool {
        self.cross_checks.values().any(|c| !c.passed)
    }

    pub fn diagnostic(&mut self, key: &str, value: f64) {
        self.diagnostics.insert(key.to_string(), value);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }
}
