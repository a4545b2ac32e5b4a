//! Structured outcome of an identity check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Version of the serialized report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    ExactSymbolic,
    Numeric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    /// Human-readable statement of the relation being checked.
    pub relation: String,
    pub mode: Mode,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Complex64>,
    pub trace: Vec<(String, String)>,
}

impl VerificationReport {
    /// Exact check: the residual counts the nonzero terms left over.
    pub fn exact(id: impl Into<String>, relation: impl Into<String>, nonzero_terms: usize) -> Self {
        Self {
            id: id.into(),
            relation: relation.into(),
            mode: Mode::ExactSymbolic,
            residual: nonzero_terms as f64,
            tolerance: 0.0,
            pass: nonzero_terms == 0,
            value: None,
            target: None,
            trace: Vec::new(),
        }
    }

    pub fn numeric(
        id: impl Into<String>,
        relation: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            id: id.into(),
            relation: relation.into(),
            mode: Mode::Numeric,
            residual,
            tolerance,
            pass: residual <= tolerance,
            value: None,
            target: None,
            trace: Vec::new(),
        }
    }

    pub fn with_values(mut self, value: Complex64, target: Complex64) -> Self {
        self.value = Some(value);
        self.target = Some(target);
        self
    }

    pub fn with_trace(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.trace.push((key.into(), value.to_string()));
        self
    }

    /// Raises the residual (never lowers it) and recomputes `pass`.
    pub fn worsen(mut self, residual: f64) -> Self {
        if residual > self.residual || residual.is_nan() {
            self.residual = residual;
        }
        self.pass = self.residual <= self.tolerance;
        self
    }
}
