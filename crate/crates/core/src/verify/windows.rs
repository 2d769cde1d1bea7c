//! Time-windowed norms of a decay profile and their piecewise bound.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exponents::{predicted_kernel_decay, ExponentTuple};
use crate::propagator::DecayProfile;
use crate::quad::tanh_sinh;
use crate::verify::fit::fit_power_law;
use crate::wiener::{weak_lorentz_value, weak_tail_growth, WindowSpec, DIVERGENCE_GROWTH};
use crate::{Error, Result};

/// Points used for the power-law extrapolation at each end.
const END_FIT: usize = 6;

/// Log-log linear interpolant of `t ↦ h(|t|)` with power-law ends.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawInterpolant {
    log_t: Vec<f64>,
    log_h: Vec<f64>,
    head: (f64, f64),
    tail: (f64, f64),
}

impl PowerLawInterpolant {
    pub fn new(times: &[f64], values: &[f64]) -> Result<Self> {
        if times.len() < END_FIT || times.len() != values.len() {
            return Err(Error::Fit(format!(
                "need at least {END_FIT} samples of equal length"
            )));
        }
        if times.windows(2).any(|w| w[1].abs() <= w[0].abs()) {
            return Err(Error::Fit("times must increase in |t|".into()));
        }
        let (s0, i0, _) = fit_power_law(&times[..END_FIT], &values[..END_FIT])?;
        let m = times.len();
        let (s1, i1, _) = fit_power_law(&times[m - END_FIT..], &values[m - END_FIT..])?;
        Ok(PowerLawInterpolant {
            log_t: times.iter().map(|t| t.abs().ln()).collect(),
            log_h: values.iter().map(|h| h.ln()).collect(),
            head: (s0, i0),
            tail: (s1, i1),
        })
    }

    pub fn from_profile(p: &DecayProfile) -> Result<Self> {
        Self::new(&p.times, &p.values)
    }

    /// `h(|t|)`; infinite at `t = 0` when the small-time slope is negative.
    pub fn eval(&self, t: f64) -> f64 {
        let at = t.abs();
        if at == 0.0 {
            return if self.head.0 < 0.0 { f64::INFINITY } else { 0.0 };
        }
        let x = at.ln();
        let m = self.log_t.len();
        if x <= self.log_t[0] {
            return (self.head.0 * x + self.head.1).exp();
        }
        if x >= self.log_t[m - 1] {
            return (self.tail.0 * x + self.tail.1).exp();
        }
        let j = self.log_t.partition_point(|&v| v <= x).min(m - 1);
        let (xa, xb) = (self.log_t[j - 1], self.log_t[j]);
        let u = (x - xa) / (xb - xa);
        ((1.0 - u) * self.log_h[j - 1] + u * self.log_h[j]).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalWindowReport {
    pub ks: Vec<i64>,
    /// `‖h·τ_kφ‖_{L^{q̃/2}_t}` for each `k`.
    pub terms: Vec<f64>,
    /// `-n/2 + σ + (n-1)/r̃ + n/r`.
    pub exponent: f64,
    /// Smallest `C` with `term_k ≤ C` for `|k| ≤ 2` and `≤ C(|k|-1)^exponent` beyond.
    pub constant: f64,
    /// Regression slope of `log term_k` on `log(k-1)` over `k ∈ [4, 64]`.
    pub tail_slope: f64,
    /// Weak `ℓ^{q/2,∞}` norm of the sequence ordered by `|k|`.
    pub weak_norm: f64,
    pub growth: f64,
    pub divergent: bool,
}

fn piecewise_bound(k: i64, exponent: f64) -> f64 {
    let a = k.unsigned_abs() as f64;
    if a <= 2.0 {
        1.0
    } else {
        (a - 1.0).powf(exponent)
    }
}

/// `‖h·τ_kφ‖_{L^p}` by quadrature on the window support, split at `t = 0`.
fn window_term(h: &(dyn Fn(f64) -> f64 + Sync), window: &WindowSpec, k: f64, p: f64) -> f64 {
    let rad = window.support_radius();
    let (a, b) = (k - rad, k + rad);
    let g = |t: f64| h(t) * window.profile(&[t - k]);
    if p.is_infinite() {
        let m = 2001;
        return (0..m)
            .map(|i| a + (b - a) * (i as f64 + 0.5) / m as f64)
            .map(|t| g(t).abs())
            .fold(0.0, f64::max);
    }
    let f = |t: f64| Complex64::new(g(t).abs().powf(p), 0.0);
    let total = if a < 0.0 && b > 0.0 {
        tanh_sinh(f, a, 0.0, 1e-10).value.re + tanh_sinh(f, 0.0, b, 1e-10).value.re
    } else {
        tanh_sinh(f, a, b, 1e-10).value.re
    };
    total.powf(1.0 / p)
}

/// Windowed norms `k ↦ ‖h·τ_kφ‖_{L^{q̃/2}_t}` for `|k| ≤ k_max` and their piecewise bound.
pub fn local_window_norms(
    h: &(dyn Fn(f64) -> f64 + Sync),
    window: &WindowSpec,
    k_max: i64,
    tuple: &ExponentTuple,
) -> Result<LocalWindowReport> {
    window.validate()?;
    if window.support_radius() > 1.0 + 1e-12 {
        return Err(Error::InvalidWindow(format!(
            "time window must be supported in |t| <= 1, got {window}"
        )));
    }
    if k_max < 64 {
        return Err(Error::InvalidWindow(format!("k_max must be >= 64, got {k_max}")));
    }
    let p = tuple.qt.to_f64() / 2.0;
    if p < 1.0 {
        return Err(Error::InvalidExponent(format!("need qt >= 2, got {}", tuple.qt)));
    }
    let exponent = predicted_kernel_decay(tuple.n, tuple.sigma, tuple.rt, tuple.r)
        .large_t
        .to_f64()
        .unwrap_or(f64::NAN);
    let mut ks = vec![0i64];
    for k in 1..=k_max {
        ks.push(k);
        ks.push(-k);
    }
    let terms: Vec<f64> = crate::par::map_range(ks.len(), |i| window_term(h, window, ks[i] as f64, p));
    let constant = ks
        .iter()
        .zip(&terms)
        .map(|(&k, &a)| a / piecewise_bound(k, exponent))
        .fold(0.0, f64::max);
    let (xs, ys): (Vec<f64>, Vec<f64>) = ks
        .iter()
        .zip(&terms)
        .filter(|(k, _)| (4..=64).contains(*k))
        .map(|(&k, &a)| ((k - 1) as f64, a))
        .unzip();
    let (tail_slope, _, _) = fit_power_law(&xs, &ys)?;
    let qo = tuple.q.to_f64() / 2.0;
    let (weak_norm, growth) = if qo.is_infinite() {
        (terms.iter().fold(0.0, |m: f64, &v| m.max(v)), 1.0)
    } else {
        (weak_lorentz_value(&terms, qo), weak_tail_growth(&terms, qo))
    };
    Ok(LocalWindowReport {
        ks,
        terms,
        exponent,
        constant,
        tail_slope,
        weak_norm,
        growth,
        divergent: growth > DIVERGENCE_GROWTH,
    })
}
