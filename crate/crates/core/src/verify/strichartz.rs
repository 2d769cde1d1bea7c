//! Strichartz ratio sweeps and the classical scaling control.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exponents::{classical_sobolev_line, satisfies_theorem, Exponent, ExponentTuple, Q};
use crate::grid::{mixed_lebesgue_norm, GridSpec, SampledField};
use crate::norm::NormResult;
use crate::propagator::{evolve_series, hsigma_norm, zero_mode_fraction, ZERO_MODE_TOL};
use crate::verify::generators::{modulated, symmetric_log_times};
use crate::wiener::{spacetime_amalgam_norm, TimeWindow, WindowSpec};
use crate::{Error, Result};

/// Windows and time lattice for the space-time norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioOptions {
    pub times: Vec<f64>,
    pub window_t: TimeWindow,
    pub window_x: WindowSpec,
    /// Weak `L^{q,∞}` outer time norm.
    pub weak: bool,
}

impl Default for RatioOptions {
    fn default() -> Self {
        RatioOptions {
            times: symmetric_log_times(0.01, 100.0, 16, true).expect("valid default times"),
            window_t: TimeWindow::unit_cubes(),
            window_x: WindowSpec::unit_cubes(),
            weak: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioResult {
    pub ratio: f64,
    pub lhs: NormResult,
    pub rhs: NormResult,
    pub divergent: bool,
}

fn sigma_f64(s: Q) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

/// `‖e^{itΔ}f‖_{W(L^{q̃},L^q)_t W(L^{r̃},L^r)_x} / ‖f‖_{Ḣ^σ}`.
pub fn strichartz_ratio(f: &SampledField, tuple: &ExponentTuple, opts: &RatioOptions) -> Result<RatioResult> {
    let verdict = satisfies_theorem(tuple);
    if !verdict.accepted() {
        return Err(Error::InvalidExponent(format!(
            "tuple rejected: {}",
            verdict.violations().join("; ")
        )));
    }
    if tuple.n as usize != f.grid.dim() {
        return Err(Error::GridMismatch(format!(
            "tuple has n = {}, field has dimension {}",
            tuple.n,
            f.grid.dim()
        )));
    }
    let rhs = hsigma_norm(f, sigma_f64(tuple.sigma))?;
    if rhs.value == 0.0 {
        return Err(Error::Degenerate("datum has zero Sobolev norm".into()));
    }
    let u = evolve_series(f, &opts.times, 0.0)?;
    let mut lhs = spacetime_amalgam_norm(
        &u,
        tuple.qt.to_f64(),
        tuple.q.to_f64(),
        tuple.rt.to_f64(),
        tuple.r.to_f64(),
        &opts.window_t,
        &opts.window_x,
        opts.weak,
    )?;
    let zm = zero_mode_fraction(f);
    if zm > ZERO_MODE_TOL {
        lhs.warn(format!("datum zero-mode mass fraction {zm:.3e}"));
    }
    let ratio = lhs.value / rhs.value;
    Ok(RatioResult {
        ratio,
        divergent: lhs.divergent || !ratio.is_finite(),
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSweep {
    pub tuple: ExponentTuple,
    pub labels: Vec<String>,
    pub ratios: Vec<f64>,
    pub max: f64,
    pub median: f64,
    /// `max / min`.
    pub spread: f64,
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    if m % 2 == 1 {
        s[m / 2]
    } else {
        0.5 * (s[m / 2 - 1] + s[m / 2])
    }
}

/// Ratios for `f_j = e^{i2^j x} g`, `j = 0..=j_max`.
pub fn frequency_sweep(g: &SampledField, tuple: &ExponentTuple, j_max: u32, opts: &RatioOptions) -> Result<RatioSweep> {
    let mut labels = Vec::new();
    let mut ratios = Vec::new();
    for j in 0..=j_max {
        let omega = 2f64.powi(j as i32);
        let f = modulated(g, omega);
        let r = strichartz_ratio(&f, tuple, opts)?;
        labels.push(format!("j={j}"));
        ratios.push(r.ratio);
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(RatioSweep {
        tuple: *tuple,
        labels,
        median: median(&ratios),
        spread: max / min,
        max,
        ratios,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSweep {
    pub q: Exponent,
    pub r: Exponent,
    /// Whether `r` sits on the scaling line.
    pub on_line: bool,
    pub lambdas: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `max_λ |ratio(λ)/ratio(λ_0) - 1|`.
    pub max_rel_dev: f64,
    pub monotone: bool,
}

/// `‖e^{itΔ}f_λ‖_{L^q_tL^r_x}/‖f_λ‖_{Ḣ^σ}` for `f_λ(x) = g(λx)`; `r` defaults to the scaling line.
#[allow(clippy::too_many_arguments)]
pub fn classical_scaling_sweep(
    g: &(dyn Fn(&[f64]) -> f64 + Sync),
    grid: GridSpec,
    lambdas: &[f64],
    sigma: Q,
    q: Exponent,
    r_override: Option<Exponent>,
    times: &[f64],
) -> Result<ScalingSweep> {
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidField("scales must be positive".into()));
    }
    let line = classical_sobolev_line(grid.dim() as u32, sigma, q)?;
    let r = r_override.unwrap_or(line);
    let s = sigma_f64(sigma);
    let mut ratios = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let f = SampledField::from_fn(grid, format!("g({lam}x)"), |x| {
            let y: Vec<f64> = x.iter().map(|v| lam * v).collect();
            num_complex::Complex64::new(g(&y), 0.0)
        });
        let mass = f.boundary_mass_fraction();
        if mass > crate::grid::BOUNDARY_MASS_TOL {
            return Err(Error::InvalidField(format!(
                "rescaled datum at lambda = {lam} leaves {mass:.3e} of its mass near the boundary"
            )));
        }
        let den = hsigma_norm(&f, s)?.value;
        if den == 0.0 {
            return Err(Error::Degenerate("datum has zero Sobolev norm".into()));
        }
        let u = evolve_series(&f, times, 0.0)?;
        let num = mixed_lebesgue_norm(&u, q.to_f64(), r.to_f64())?.value;
        ratios.push(num / den);
    }
    let base = ratios[0];
    let max_rel_dev = ratios.iter().map(|v| (v / base - 1.0).abs()).fold(0.0, f64::max);
    let inc = ratios.windows(2).all(|w| w[1] > w[0]);
    let dec = ratios.windows(2).all(|w| w[1] < w[0]);
    Ok(ScalingSweep {
        q,
        r,
        on_line: r == line,
        lambdas: lambdas.to_vec(),
        ratios,
        max_rel_dev,
        monotone: inc || dec,
    })
}

/// `(n - 2|x|²) e^{-|x|²}`, the calibration datum.
pub fn calibration_profile(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let y2: f64 = x.iter().map(|v| v * v).sum();
    (n - 2.0 * y2) * (-y2).exp()
}

/// `r` nudged off the scaling line by `δ` in `1/r`.
pub fn perturbed_r(r: Exponent, delta: Ratio<i128>) -> Result<Exponent> {
    Exponent::from_recip(r.recip() + delta)
}
