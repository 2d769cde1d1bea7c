use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;

/// Formats a Lebesgue-type exponent, writing `inf` for infinity.
pub fn format_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// Compact grid description carried by computed norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub dim: usize,
    pub half_length: f64,
    pub points: usize,
}

impl From<&GridSpec> for GridMeta {
    fn from(g: &GridSpec) -> Self {
        GridMeta {
            dim: g.dim(),
            half_length: g.half_length(),
            points: g.points(),
        }
    }
}

/// A computed norm together with the metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    /// Which norm, e.g. `L^3`, `W(L^2,L^4)`, `L^{5,inf}`.
    pub space: String,
    pub exponents: BTreeMap<String, String>,
    pub grid: Option<GridMeta>,
    pub window: Option<String>,
    /// Relative discretization error estimate.
    pub est_error: f64,
    /// Set when the norm is infinite or its truncation is not controlled.
    #[serde(default)]
    pub divergent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl NormResult {
    pub fn new(value: f64, space: impl Into<String>) -> Self {
        let divergent = !value.is_finite();
        NormResult {
            value: if value.is_nan() { f64::INFINITY } else { value },
            space: space.into(),
            exponents: BTreeMap::new(),
            grid: None,
            window: None,
            est_error: 0.0,
            divergent,
            warnings: Vec::new(),
        }
    }

    pub fn with_exponent(mut self, name: &str, p: f64) -> Self {
        self.exponents.insert(name.to_string(), format_exponent(p));
        self
    }

    pub fn with_grid(mut self, grid: &GridSpec) -> Self {
        self.grid = Some(grid.into());
        self
    }

    pub fn with_window(mut self, window: impl Into<String>) -> Self {
        self.window = Some(window.into());
        self
    }

    pub fn with_error(mut self, est_error: f64) -> Self {
        self.est_error = est_error;
        self
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    /// Marks the result as divergent and pins the value at infinity.
    pub fn mark_divergent(&mut self, reason: impl Into<String>) {
        self.divergent = true;
        self.value = f64::INFINITY;
        self.warnings.push(reason.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("norm result serializes")
    }
}

/// Weighted `ℓ^p` accumulation that stays finite for large `p`.
///
/// Returns `(Σ w_i |v_i|^p)^{1/p}`, or `max |v_i|` over positive weights when
/// `p` is infinite.
pub(crate) fn weighted_power_norm(values: &[f64], weights: &[f64], p: f64) -> f64 {
    debug_assert_eq!(values.len(), weights.len());
    let peak = values
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .fold(0.0f64, |m, (&v, _)| m.max(v.abs()));
    if p.is_infinite() || peak == 0.0 || !peak.is_finite() {
        return peak;
    }
    let sum: f64 = values
        .iter()
        .zip(weights)
        .map(|(&v, &w)| w * (v.abs() / peak).powf(p))
        .sum();
    peak * sum.powf(1.0 / p)
}

/// Uniform-weight variant of [`weighted_power_norm`].
pub(crate) fn scaled_power_norm(values: &[f64], weight: f64, p: f64) -> f64 {
    let peak = values.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if p.is_infinite() || peak == 0.0 || !peak.is_finite() {
        return peak;
    }
    let sum: f64 = values.iter().map(|&v| (v.abs() / peak).powf(p)).sum();
    peak * (weight * sum).powf(1.0 / p)
}

pub(crate) fn check_lebesgue_exponent(p: f64) -> crate::Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(crate::Error::InvalidExponent(format!(
            "Lebesgue exponent must lie in [1, inf], got {p}"
        )));
    }
    Ok(())
}
