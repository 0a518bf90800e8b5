use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::phase_space::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub x: f64,
    pub p: f64,
    pub re: f64,
    pub im: f64,
}

impl ResidualPoint {
    pub fn new(x: f64, p: f64, r: Complex64) -> Self {
        Self { x, p, re: r.re, im: r.im }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Outcome of one residual check.
///
/// `l2_norm` is the root mean square over the evaluated points. The verdict compares
/// `sup_norm / reference_scale` with `tolerance`; an identically zero residual of a
/// zero reference passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub equation_id: String,
    pub sup_norm: f64,
    pub l2_norm: f64,
    pub reference_scale: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub points: Vec<ResidualPoint>,
    #[serde(skip)]
    pub residual_field: Option<Field>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl ResidualReport {
    pub fn from_points(equation_id: &str, points: Vec<ResidualPoint>, reference_scale: f64, tolerance: f64) -> Self {
        let sup = points.iter().fold(0.0f64, |m, q| m.max(q.value().norm()));
        let l2 = if points.is_empty() {
            0.0
        } else {
            (points.iter().map(|q| q.value().norm_sqr()).sum::<f64>() / points.len() as f64).sqrt()
        };
        let mut r = Self {
            equation_id: equation_id.to_string(),
            sup_norm: sup,
            l2_norm: l2,
            reference_scale,
            tolerance,
            verdict: Verdict::Fail,
            points,
            residual_field: None,
            warnings: Vec::new(),
        };
        r.verdict = if r.relative() < tolerance { Verdict::Pass } else { Verdict::Fail };
        r
    }

    /// `sup_norm / reference_scale`, with `0/0 = 0`.
    pub fn relative(&self) -> f64 {
        if self.sup_norm == 0.0 {
            0.0
        } else if self.reference_scale > 0.0 {
            self.sup_norm / self.reference_scale
        } else {
            f64::INFINITY
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.residual_field = Some(field);
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::Error::Io(e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,p,re,im\n");
        for q in &self.points {
            s.push_str(&format!(
                "{},{},{},{}\n",
                crate::phase_space::field::fmt17(q.x),
                crate::phase_space::field::fmt17(q.p),
                crate::phase_space::field::fmt17(q.re),
                crate::phase_space::field::fmt17(q.im)
            ));
        }
        s
    }
}
