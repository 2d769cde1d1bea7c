//! Seeded test-data generators.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{inverse_values, GridSpec, SampledField, SpaceTimeField};
use crate::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent uniform samples in the unit square of `C`.
pub fn random_field(grid: GridSpec, seed: u64) -> SampledField {
    let mut r = rng(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    SampledField {
        grid,
        values,
        label: format!("random(seed={seed})"),
    }
}

/// Random spectrum on `0 < |ξ| ≤ k_max`, unit `L²` norm, no zero mode.
pub fn band_limited(grid: GridSpec, k_max: f64, seed: u64) -> SampledField {
    let mut r = rng(seed);
    let k2 = grid.freq_norms_sq();
    let spec: Vec<Complex64> = k2
        .iter()
        .map(|&k| {
            let (a, b) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            if k > 0.0 && k <= k_max * k_max {
                Complex64::new(a, b)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let values = inverse_values(&grid, &spec);
    let f = SampledField {
        grid,
        values,
        label: format!("band-limited(k_max={k_max},seed={seed})"),
    };
    let norm = f.l2_norm();
    if norm > 0.0 {
        f.scaled(Complex64::new(1.0 / norm, 0.0))
    } else {
        f
    }
}

/// `exp(-|x - c|²/w²)`.
pub fn gaussian(grid: GridSpec, width: f64, center: &[f64]) -> SampledField {
    SampledField::from_fn(grid, format!("gaussian(w={width})"), |x| {
        let d2: f64 = x.iter().zip(center.iter().chain(std::iter::repeat(&0.0))).map(|(a, c)| (a - c) * (a - c)).sum();
        Complex64::new((-d2 / (width * width)).exp(), 0.0)
    })
}

/// `(n - 2|y|²) e^{-|y|²}` with `y = x/w`: a Gaussian with vanishing mean.
pub fn mexican_hat(grid: GridSpec, width: f64) -> SampledField {
    let n = grid.dim() as f64;
    SampledField::from_fn(grid, format!("mexican-hat(w={width})"), |x| {
        let y2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (width * width);
        Complex64::new((n - 2.0 * y2) * (-y2).exp(), 0.0)
    })
}

/// `e^{iω x_1} f(x)`.
pub fn modulated(field: &SampledField, omega: f64) -> SampledField {
    let g = field.grid;
    let values = field
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, omega * g.point(k)[0]))
        .collect();
    SampledField {
        grid: g,
        values,
        label: format!("{}·e^(i{omega}x)", field.label),
    }
}

/// A single nonzero lattice value.
pub fn spike(grid: GridSpec, flat: usize, amplitude: Complex64) -> SampledField {
    let mut f = SampledField::zeros(grid, format!("spike({flat})"));
    f.values[flat] = amplitude;
    f
}

/// Random space-time field on the given instants.
pub fn random_spacetime(grid: GridSpec, times: &[f64], seed: u64) -> Result<SpaceTimeField> {
    let slices = (0..times.len())
        .map(|i| random_field(grid, seed.wrapping_mul(7919).wrapping_add(i as u64)))
        .collect();
    SpaceTimeField::new(grid, times.to_vec(), slices)
}

/// `±10^{k/m}` for `|t| ∈ [t_min, t_max]`, optionally with `t = 0`, increasing.
pub fn symmetric_log_times(t_min: f64, t_max: f64, per_decade: usize, include_zero: bool) -> Result<Vec<f64>> {
    let pos = crate::propagator::log_times(t_min, t_max, per_decade)?;
    let mut out: Vec<f64> = pos.iter().rev().map(|t| -t).collect();
    if include_zero {
        out.push(0.0);
    }
    out.extend(pos);
    Ok(out)
}

/// Uniform phase `e^{iθ}`.
pub fn random_phase(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, r.random_range(0.0..2.0 * PI))
}
