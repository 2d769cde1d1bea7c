//! The propagator `e^{itΔ}|∇|^{-σ}` on the lattice, its adjoint time
//! integral, and the homogeneous Sobolev norm.
//!
//! Everything acts diagonally on the spectrum: `e^{itΔ}` multiplies by
//! `e^{-it|ξ|²}` and `|∇|^{-σ}` by `|ξ|^{-σ}`. The zero frequency of
//! `|ξ|^{-σ}` is set to 0 for `σ > 0`; data are expected to carry no mass
//! there.

pub mod kernel;

use num_complex::Complex64;

use crate::grid::{forward_values, inverse_values, same_grid, SampledField, SpaceTimeField};
use crate::norm::NormResult;
use crate::{Error, Result};

pub use kernel::{
    kernel_amalgam_profile, kernel_bound, kernel_eval, log_times, DecayProfile, KernelMethod,
    KernelSamples, KernelSchedule,
};

/// Zero-mode mass fraction above which `σ > 0` results carry a warning.
pub const ZERO_MODE_TOL: f64 = 1e-10;

fn check_sigma(sigma: f64, dim: usize) -> Result<()> {
    let top = dim as f64 / 2.0;
    if !(sigma.is_finite() && sigma >= 0.0 && sigma < top) {
        return Err(Error::SigmaRange(format!(
            "sigma must lie in [0, {top}), got {sigma}"
        )));
    }
    Ok(())
}

/// `|ξ|^{-σ}` per spectral index, with the zero-mode convention.
fn smoothing_symbol(field: &SampledField, sigma: f64) -> Vec<f64> {
    field
        .grid
        .freq_norms_sq()
        .into_iter()
        .map(|k2| {
            if sigma == 0.0 {
                1.0
            } else if k2 == 0.0 {
                0.0
            } else {
                k2.powf(-sigma / 2.0)
            }
        })
        .collect()
}

/// Fraction of `‖f‖₂²` carried by the zero frequency.
pub fn zero_mode_fraction(field: &SampledField) -> f64 {
    let spec = forward_values(&field.grid, &field.values);
    let total: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        0.0
    } else {
        spec[0].norm_sqr() / total
    }
}

/// `‖f‖_{Ḣ^σ} = ‖|ξ|^σ f̂‖` in the spectral `ℓ²` normalization.
pub fn hsigma_norm(field: &SampledField, sigma: f64) -> Result<NormResult> {
    field.validate()?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::SigmaRange(format!("sigma must be >= 0, got {sigma}")));
    }
    let g = &field.grid;
    let spec = forward_values(g, &field.values);
    let k2 = g.freq_norms_sq();
    let sum: f64 = spec
        .iter()
        .zip(&k2)
        .map(|(v, &k)| {
            let w = if sigma == 0.0 { 1.0 } else { k.powf(sigma) };
            w * v.norm_sqr()
        })
        .sum();
    let total: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    let value = (sum * g.spectral_weight()).sqrt();
    let mut out = NormResult::new(value, format!("H^{sigma}"))
        .with_exponent("sigma", sigma)
        .with_grid(g);
    if sigma > 0.0 && total > 0.0 {
        let frac = spec[0].norm_sqr() / total;
        if frac > ZERO_MODE_TOL {
            out.warn(format!(
                "zero-mode mass fraction {frac:.3e} exceeds {ZERO_MODE_TOL:e}; it is ignored"
            ));
        }
    }
    Ok(out)
}

fn apply_multiplier(
    field: &SampledField,
    spec: &[Complex64],
    symbol: &[f64],
    k2: &[f64],
    t: f64,
) -> Vec<Complex64> {
    let modulated: Vec<Complex64> = spec
        .iter()
        .zip(symbol)
        .zip(k2)
        .map(|((v, &s), &k)| v * Complex64::from_polar(s, -t * k))
        .collect();
    inverse_values(&field.grid, &modulated)
}

/// `e^{itΔ}|∇|^{-σ} f`.
pub fn evolve(field: &SampledField, t: f64, sigma: f64) -> Result<SampledField> {
    field.validate()?;
    check_sigma(sigma, field.grid.dim())?;
    if !t.is_finite() {
        return Err(Error::InvalidField(format!("non-finite time {t}")));
    }
    let spec = forward_values(&field.grid, &field.values);
    let symbol = smoothing_symbol(field, sigma);
    let k2 = field.grid.freq_norms_sq();
    Ok(SampledField {
        grid: field.grid,
        values: apply_multiplier(field, &spec, &symbol, &k2, t),
        label: format!("evolve[{}](t={t})", field.label),
    })
}

/// [`evolve`] at every instant of an increasing time list.
pub fn evolve_series(field: &SampledField, times: &[f64], sigma: f64) -> Result<SpaceTimeField> {
    field.validate()?;
    check_sigma(sigma, field.grid.dim())?;
    let spec = forward_values(&field.grid, &field.values);
    let symbol = smoothing_symbol(field, sigma);
    let k2 = field.grid.freq_norms_sq();
    let slices = crate::par::map_range(times.len(), |i| SampledField {
        grid: field.grid,
        values: apply_multiplier(field, &spec, &symbol, &k2, times[i]),
        label: format!("evolve[{}](t={})", field.label, times[i]),
    });
    SpaceTimeField::new(field.grid, times.to_vec(), slices)
}

/// `Σ_i w_i e^{-is_iΔ}|∇|^{-σ} F(·, s_i)` with trapezoidal weights `w_i`.
pub fn adjoint_accumulate(stf: &SpaceTimeField, sigma: f64) -> Result<SampledField> {
    stf.validate()?;
    check_sigma(sigma, stf.grid.dim())?;
    let g = &stf.grid;
    let weights = stf.time_weights();
    let k2 = g.freq_norms_sq();
    let symbol = smoothing_symbol(&stf.slices[0], sigma);
    let mut acc = vec![Complex64::new(0.0, 0.0); g.len()];
    for ((slice, &s), &w) in stf.slices.iter().zip(&stf.times).zip(&weights) {
        let spec = forward_values(g, &slice.values);
        for (((a, v), &m), &k) in acc.iter_mut().zip(&spec).zip(&symbol).zip(&k2) {
            *a += v * Complex64::from_polar(w * m, s * k);
        }
    }
    Ok(SampledField {
        grid: *g,
        values: inverse_values(g, &acc),
        label: "adjoint".into(),
    })
}

/// `⟨adjoint(F), f⟩` and `⟨F, evolve_series(f)⟩`, the two sides of the duality identity.
pub fn duality_sides(stf: &SpaceTimeField, f: &SampledField, sigma: f64) -> Result<(Complex64, Complex64)> {
    same_grid(&stf.grid, &f.grid)?;
    let lhs = adjoint_accumulate(stf, sigma)?.inner(f)?;
    let series = evolve_series(f, &stf.times, sigma)?;
    let rhs = stf.inner(&series)?;
    Ok((lhs, rhs))
}
