//! One-dimensional fractional integration check for `|t|^{-α} * g`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quad::tanh_sinh;
use crate::verify::generators::rng;
use crate::{Error, Result};

/// Output interval `[-OUTPUT_HALF, OUTPUT_HALF]`.
pub const OUTPUT_HALF: f64 = 64.0;
/// Random data live on `[-1, 1]` as this many constant pieces.
const PIECES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HlsReport {
    pub p: f64,
    pub alpha: f64,
    pub q: f64,
    pub trials: usize,
    pub spacing: f64,
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HlsRefinement {
    pub coarse: HlsReport,
    pub fine: HlsReport,
    /// `max(a/b, b/a)` of the two maximal ratios.
    pub change: f64,
    pub stable: bool,
}

/// `q` from `1/q + 1 = 1/p + α`, with `0 < α < 1` and `1 ≤ p < q < ∞`.
pub fn hls_target(p: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidExponent(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("p must lie in [1, inf), got {p}")));
    }
    let inv_q = 1.0 / p + alpha - 1.0;
    if inv_q <= 1e-14 {
        return Err(Error::InvalidExponent(format!(
            "1/p + alpha - 1 = {inv_q} gives q = inf; need q < inf"
        )));
    }
    let q = 1.0 / inv_q;
    if q <= p {
        return Err(Error::InvalidExponent(format!("need p < q, got p = {p}, q = {q}")));
    }
    Ok(q)
}

/// `∫_0^u s^{-α} ds` extended oddly.
fn antiderivative(u: f64, alpha: f64) -> f64 {
    u.signum() * u.abs().powf(1.0 - alpha) / (1.0 - alpha)
}

/// `(1/δ)∫ |s|^{-α}` over the cell of lattice offset `j`.
fn cell_kernel(j: i64, delta: f64, alpha: f64) -> f64 {
    let a = (j as f64 - 0.5) * delta;
    let b = (j as f64 + 0.5) * delta;
    (antiderivative(b, alpha) - antiderivative(a, alpha)) / delta
}

fn lp(values: &[f64], delta: f64, p: f64) -> f64 {
    (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * delta).powf(1.0 / p)
}

/// `|t|^{-α} * g` on the output lattice for `g` given on cell centres of `[-1, 1]`.
fn convolve(g: &[f64], delta: f64, alpha: f64) -> Vec<f64> {
    let m_out = (2.0 * OUTPUT_HALF / delta).round() as i64;
    let m_in = g.len() as i64;
    let in0 = (-1.0 / delta).round() as i64;
    let out0 = (-OUTPUT_HALF / delta).round() as i64;
    let kern: Vec<f64> = (out0 - in0 - m_in..=out0 + m_out - in0)
        .map(|j| cell_kernel(j, delta, alpha))
        .collect();
    let shift = -(out0 - in0 - m_in);
    crate::par::map_range(m_out as usize, |i| {
        let oi = out0 + i as i64;
        g.iter()
            .enumerate()
            .map(|(j, &v)| v * kern[(oi - (in0 + j as i64) + shift) as usize])
            .sum::<f64>()
            * delta
    })
}

fn random_piecewise(cells: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let vals: Vec<f64> = (0..PIECES).map(|_| r.random_range(-1.0..1.0)).collect();
    (0..cells).map(|i| vals[i * PIECES / cells]).collect()
}

fn check_spacing(spacing: f64) -> Result<usize> {
    let cells = 2.0 / spacing;
    if !(spacing > 0.0) || (cells - cells.round()).abs() > 1e-9 || (cells.round() as usize) % PIECES != 0 {
        return Err(Error::InvalidGrid(format!(
            "spacing must divide [-1, 1] into a multiple of {PIECES} cells, got {spacing}"
        )));
    }
    Ok(cells.round() as usize)
}

/// `‖|t|^{-α} * g‖_q / ‖g‖_p` for random piecewise-constant `g` on `[-1, 1]`.
pub fn hls_check_1d(p: f64, alpha: f64, trials: usize, seed: u64, spacing: f64) -> Result<HlsReport> {
    let q = hls_target(p, alpha)?;
    let cells = check_spacing(spacing)?;
    if trials == 0 {
        return Err(Error::InvalidField("need at least one trial".into()));
    }
    let mut ratios = Vec::with_capacity(trials);
    for k in 0..trials {
        let g = random_piecewise(cells, seed.wrapping_add(k as u64));
        let den = lp(&g, spacing, p);
        if den == 0.0 {
            continue;
        }
        ratios.push(lp(&convolve(&g, spacing, alpha), spacing, q) / den);
    }
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(HlsReport {
        p,
        alpha,
        q,
        trials,
        spacing,
        ratios,
        max_ratio,
        min_ratio,
    })
}

/// Runs [`hls_check_1d`] at `spacing` and `spacing/2` on the same seeds.
pub fn hls_refinement(p: f64, alpha: f64, trials: usize, seed: u64, spacing: f64) -> Result<HlsRefinement> {
    let coarse = hls_check_1d(p, alpha, trials, seed, spacing)?;
    let fine = hls_check_1d(p, alpha, trials, seed, spacing / 2.0)?;
    let a = coarse.max_ratio / fine.max_ratio;
    let change = a.max(1.0 / a);
    Ok(HlsRefinement {
        coarse,
        fine,
        change,
        stable: change <= 1.5,
    })
}

/// Lattice ratio for `g = 1_{[-w, w]}` and its closed-form value.
pub fn hls_box_oracle(p: f64, alpha: f64, w: f64, spacing: f64) -> Result<(f64, f64)> {
    let q = hls_target(p, alpha)?;
    let cells = (2.0 / spacing).round() as usize;
    let g: Vec<f64> = (0..cells)
        .map(|i| {
            let x = -1.0 + (i as f64 + 0.5) * spacing;
            if x.abs() < w { 1.0 } else { 0.0 }
        })
        .collect();
    let lattice = lp(&convolve(&g, spacing, alpha), spacing, q) / lp(&g, spacing, p);
    let h = |t: f64| antiderivative(t + w, alpha) - antiderivative(t - w, alpha);
    let f = |t: f64| Complex64::new(h(t).abs().powf(q), 0.0);
    let cuts = [-OUTPUT_HALF, -w, 0.0, w, OUTPUT_HALF];
    let total: f64 = cuts.windows(2).map(|c| tanh_sinh(f, c[0], c[1], 1e-12).value.re).sum();
    let exact = total.powf(1.0 / q) / (2.0 * w).powf(1.0 / p);
    Ok((lattice, exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_relation() {
        assert!(hls_target(2.0, 0.5).is_err());
        assert!((hls_target(4.0 / 3.0, 0.5).unwrap() - 4.0).abs() < 1e-12);
        assert!(hls_target(1.0, 1.0).is_err());
    }

    #[test]
    fn box_matches_closed_form() {
        let (lat, exact) = hls_box_oracle(4.0 / 3.0, 0.5, 0.25, 1.0 / 128.0).unwrap();
        assert!((lat / exact - 1.0).abs() < 1e-3, "{lat} vs {exact}");
    }

    #[test]
    fn refinement_is_stable() {
        let r = hls_refinement(4.0 / 3.0, 0.5, 20, 7, 1.0 / 32.0).unwrap();
        assert!(r.stable, "{}", r.change);
        assert!(r.coarse.ratios.iter().all(|v| v.is_finite() && *v > 0.0));
    }
}
