//! Verification records and the versioned report document.

use std::fmt;

use rug::Float;
use serde::Serialize;

use crate::precision::PrecisionContext;

/// Significant digits written for computed and expected values.
const DIGITS: usize = 40;

pub fn format_real(v: &Float) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.to_string_radix(10, Some(DIGITS))
}

/// One named comparison between a computed value and its reference.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub name: String,
    /// Equation or statement tag this check reproduces.
    pub eq: String,
    pub computed: Float,
    pub expected: Float,
    pub abs_residual: Float,
    /// |computed − expected| / max(1, |expected|), or a caller-normalized residual.
    pub residual: Float,
    pub tol: Float,
    pub passed: bool,
    /// Informational checks are reported but never fail a run.
    pub informational: bool,
    pub note: Option<String>,
}

impl VerificationReport {
    /// Compares under the crate-wide residual policy.
    pub fn compare(
        name: impl Into<String>,
        eq: impl Into<String>,
        computed: Float,
        expected: Float,
        tol: &Float,
        ctx: &PrecisionContext,
    ) -> Self {
        let abs_residual = Float::with_val(ctx.bits(), &computed - &expected).abs();
        let residual = ctx.residual(&computed, &expected);
        let passed = residual <= *tol && !residual.is_nan();
        Self {
            name: name.into(),
            eq: eq.into(),
            computed,
            expected,
            abs_residual,
            residual,
            tol: tol.clone(),
            passed,
            informational: false,
            note: None,
        }
    }

    /// Compares with the residual measured against an explicit scale.
    pub fn compare_scaled(
        name: impl Into<String>,
        eq: impl Into<String>,
        computed: Float,
        expected: Float,
        scale: &Float,
        tol: &Float,
        ctx: &PrecisionContext,
    ) -> Self {
        let abs_residual = Float::with_val(ctx.bits(), &computed - &expected).abs();
        let residual = Float::with_val(ctx.bits(), &abs_residual / scale);
        let passed = residual <= *tol && !residual.is_nan();
        Self {
            name: name.into(),
            eq: eq.into(),
            computed,
            expected,
            abs_residual,
            residual,
            tol: tol.clone(),
            passed,
            informational: false,
            note: None,
        }
    }

    /// A residual that is already normalized and should vanish.
    pub fn vanishing(name: impl Into<String>, eq: impl Into<String>, residual: Float, tol: &Float) -> Self {
        let prec = residual.prec();
        let abs = Float::with_val(prec, residual.abs_ref());
        let passed = abs <= *tol && !abs.is_nan();
        Self {
            name: name.into(),
            eq: eq.into(),
            computed: residual,
            expected: Float::new(prec),
            abs_residual: abs.clone(),
            residual: abs,
            tol: tol.clone(),
            passed,
            informational: false,
            note: None,
        }
    }

    /// A margin that must stay strictly above `gate`.
    pub fn positive(name: impl Into<String>, eq: impl Into<String>, value: Float, gate: &Float) -> Self {
        let prec = value.prec();
        let passed = value > *gate;
        Self {
            name: name.into(),
            eq: eq.into(),
            abs_residual: Float::with_val(prec, value.abs_ref()),
            residual: value.clone(),
            computed: value,
            expected: gate.clone(),
            tol: gate.clone(),
            passed,
            informational: false,
            note: None,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Whether this record counts against an overall pass.
    pub fn ok(&self) -> bool {
        self.passed || self.informational
    }

    pub fn to_record(&self) -> CheckRecord {
        CheckRecord {
            name: self.name.clone(),
            eq: self.eq.clone(),
            computed: format_real(&self.computed),
            expected: format_real(&self.expected),
            abs_residual: self.abs_residual.to_f64(),
            residual: self.residual.to_f64(),
            tol: self.tol.to_f64(),
            passed: self.passed,
            informational: self.informational,
            note: self.note.clone(),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed, self.informational) {
            (true, _) => "PASS",
            (false, true) => "INFO",
            (false, false) => "FAIL",
        };
        write!(
            f,
            "{status} [{}] {}: residual {:.3e} (tol {:.1e})",
            self.eq,
            self.name,
            self.residual.to_f64(),
            self.tol.to_f64()
        )?;
        if let Some(n) = &self.note {
            write!(f, " - {n}")?;
        }
        Ok(())
    }
}

/// Serialized form of a [`VerificationReport`].
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub eq: String,
    pub computed: String,
    pub expected: String,
    pub abs_residual: f64,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub precision_bits: u32,
    pub verify_tol: f64,
    pub quad_target: f64,
}

/// Top-level JSON document written by every command.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub command: Vec<String>,
    pub parameters: Parameters,
    pub results: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl ReportDocument {
    pub fn new(
        command: Vec<String>,
        parameters: Parameters,
        results: &[VerificationReport],
        data: serde_json::Value,
        wall_time_s: f64,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            parameters,
            pass: results.iter().all(VerificationReport::ok),
            results: results.iter().map(VerificationReport::to_record).collect(),
            data,
            wall_time_s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_policy_and_flags() {
        let c = PrecisionContext::default();
        let tol = c.real(1e-10);
        let r = VerificationReport::compare("x", "0", c.real(2), c.real(2), &tol, &c);
        assert!(r.passed && r.ok());
        let r = VerificationReport::compare("x", "0", c.real(2), c.real(3), &tol, &c);
        assert!(!r.passed && !r.ok());
        assert!(r.clone().informational().ok());
        let v = VerificationReport::vanishing("z", "0", c.real(-1e-12), &tol);
        assert!(v.passed);
    }

    #[test]
    fn document_pass_flag() {
        let c = PrecisionContext::default();
        let tol = c.real(1e-10);
        let good = VerificationReport::compare("a", "1", c.real(1), c.real(1), &tol, &c);
        let bad = VerificationReport::compare("b", "1", c.real(1), c.real(2), &tol, &c);
        let doc = ReportDocument::new(vec![], Parameters::default(), &[good.clone()], serde_json::Value::Null, 0.0);
        assert!(doc.pass);
        let doc = ReportDocument::new(vec![], Parameters::default(), &[good, bad], serde_json::Value::Null, 0.0);
        assert!(!doc.pass);
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["schema_version"], "1");
        assert_eq!(json["results"][1]["eq"], "1");
    }
}
