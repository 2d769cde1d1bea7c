//! Wiener amalgam norms `W(L^p, L^q)` on lattices and time series.
//!
//! A window `φ` is translated over the lattice `a·Z^n`; the local norms
//! `‖f·τ_kφ‖_{L^p}` are collected and the outer norm is the Riemann sum
//! `(a^n Σ_k ‖f·τ_kφ‖_p^q)^{1/q}`.
//!
//! Smooth windows are centered at the translate point. Cube indicators are
//! anchored at it, `[c, c + side)^n`, so that side `= a` tiles the box exactly.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exponents::{Exponent, Q};
use crate::grid::{same_grid, GridSpec, SampledField, SpaceTimeField, MAX_DIM};
use crate::norm::{check_lebesgue_exponent, format_exponent, scaled_power_norm, NormResult};
use crate::quad::tanh_sinh;
use crate::{Error, Result};

/// Gaussian windows are truncated at this many standard deviations.
pub const GAUSSIAN_CUTOFF: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// `exp(-|x|²/2ρ²)`, radius `ρ`, truncated at `8ρ`.
    Gaussian,
    /// `exp(-1/(1 - |x|²/R²))` on `|x| < R`.
    SmoothBump,
    /// Indicator of the cube `[0, 2R)^n`.
    CubeIndicator,
}

impl FromStr for WindowKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian" | "gauss" => Ok(WindowKind::Gaussian),
            "bump" | "smooth-bump" => Ok(WindowKind::SmoothBump),
            "cube" | "cube-indicator" => Ok(WindowKind::CubeIndicator),
            other => Err(Error::InvalidWindow(format!("unknown window kind '{other}'"))),
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowKind::Gaussian => "gaussian",
            WindowKind::SmoothBump => "smooth-bump",
            WindowKind::CubeIndicator => "cube-indicator",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `‖φ‖₂ = 1` on the working lattice (or in the continuum for time windows).
    UnitL2,
    /// Window values equal to 1; cube indicators only.
    UnitPartition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    /// Standard deviation for gaussians, half-side for cubes, support radius for bumps.
    pub radius: f64,
    /// Translation lattice step `a`.
    pub step: f64,
    pub normalization: Normalization,
}

impl WindowSpec {
    pub fn new(
        kind: WindowKind,
        radius: f64,
        step: f64,
        normalization: Normalization,
    ) -> Result<Self> {
        let w = WindowSpec {
            kind,
            radius,
            step,
            normalization,
        };
        w.validate()?;
        Ok(w)
    }

    /// Unit cubes tiling `Z^n`; all amalgam constants are exactly 1.
    pub fn unit_cubes() -> Self {
        WindowSpec {
            kind: WindowKind::CubeIndicator,
            radius: 0.5,
            step: 1.0,
            normalization: Normalization::UnitPartition,
        }
    }

    /// Cube partition of side `a`.
    pub fn cubes(side: f64) -> Result<Self> {
        WindowSpec::new(
            WindowKind::CubeIndicator,
            side / 2.0,
            side,
            Normalization::UnitPartition,
        )
    }

    pub fn gaussian(radius: f64, step: f64) -> Result<Self> {
        WindowSpec::new(WindowKind::Gaussian, radius, step, Normalization::UnitL2)
    }

    pub fn bump(radius: f64, step: f64) -> Result<Self> {
        WindowSpec::new(WindowKind::SmoothBump, radius, step, Normalization::UnitL2)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidWindow(format!(
                "radius must be positive and finite, got {}",
                self.radius
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidWindow(format!(
                "lattice step must be positive, got {}",
                self.step
            )));
        }
        if self.normalization == Normalization::UnitPartition
            && self.kind != WindowKind::CubeIndicator
        {
            return Err(Error::InvalidWindow(
                "unit-partition normalization applies to cube indicators only".into(),
            ));
        }
        Ok(())
    }

    pub fn side(&self) -> f64 {
        2.0 * self.radius
    }

    /// Radius of the region where the window is nonzero (after truncation).
    pub fn support_radius(&self) -> f64 {
        match self.kind {
            WindowKind::Gaussian => GAUSSIAN_CUTOFF * self.radius,
            WindowKind::SmoothBump => self.radius,
            WindowKind::CubeIndicator => self.side(),
        }
    }

    /// Cubes whose side equals the lattice step.
    pub fn is_exact_partition(&self) -> bool {
        self.kind == WindowKind::CubeIndicator
            && self.normalization == Normalization::UnitPartition
            && (self.side() - self.step).abs() <= 1e-12 * self.step
    }

    /// Unnormalized profile at displacement `x` (cube anchored at 0).
    pub fn profile(&self, x: &[f64]) -> f64 {
        match self.kind {
            WindowKind::Gaussian => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                if r2.sqrt() > self.support_radius() {
                    0.0
                } else {
                    (-r2 / (2.0 * self.radius * self.radius)).exp()
                }
            }
            WindowKind::SmoothBump => {
                let s: f64 = x.iter().map(|v| v * v).sum::<f64>() / (self.radius * self.radius);
                if s >= 1.0 {
                    0.0
                } else {
                    (-1.0 / (1.0 - s)).exp()
                }
            }
            WindowKind::CubeIndicator => {
                let side = self.side();
                if x.iter().all(|&v| (0.0..side).contains(&v)) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Continuum `‖φ‖_{L²(R)}` of the one-dimensional profile.
    fn continuum_l2_1d(&self) -> f64 {
        match self.kind {
            WindowKind::Gaussian => (self.radius * std::f64::consts::PI.sqrt()).sqrt(),
            WindowKind::CubeIndicator => self.side().sqrt(),
            WindowKind::SmoothBump => {
                let r = self.radius;
                tanh_sinh(
                    |x| {
                        let v = self.profile(&[x]);
                        Complex64::new(v * v, 0.0)
                    },
                    -r,
                    r,
                    1e-13,
                )
                .value
                .re
                .sqrt()
            }
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let norm = match self.normalization {
            Normalization::UnitL2 => "unit-l2",
            Normalization::UnitPartition => "unit-partition",
        };
        write!(
            f,
            "{}(radius={},step={},{})",
            self.kind, self.radius, self.step, norm
        )
    }
}

impl FromStr for WindowSpec {
    type Err = Error;

    /// `kind[:radius[:step]]`, e.g. `cube:0.5:1`, `gaussian:0.5:1`, `bump:1:1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind: WindowKind = parts.next().unwrap_or("").parse()?;
        let num = |p: Option<&str>, default: f64| -> Result<f64> {
            match p {
                None => Ok(default),
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad window parameter '{v}'"))),
            }
        };
        let (r0, a0) = match kind {
            WindowKind::Gaussian => (0.5, 1.0),
            WindowKind::SmoothBump => (1.0, 1.0),
            WindowKind::CubeIndicator => (0.5, 1.0),
        };
        let radius = num(parts.next(), r0)?;
        let step = num(parts.next(), a0)?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("too many window parameters in '{s}'")));
        }
        let normalization = match kind {
            WindowKind::CubeIndicator => Normalization::UnitPartition,
            _ => Normalization::UnitL2,
        };
        WindowSpec::new(kind, radius, step, normalization)
    }
}

/// Window values on lattice offsets relative to a translate point.
struct Stencil {
    offsets: Vec<[i64; MAX_DIM]>,
    weights: Vec<f64>,
    /// Translate lattice step in grid steps.
    stride: usize,
}

fn build_stencil(grid: &GridSpec, w: &WindowSpec) -> Result<Stencil> {
    w.validate()?;
    let n = grid.dim();
    let dx = grid.step();
    let l = grid.half_length();
    let stride = grid.steps_in(w.step).ok_or_else(|| {
        Error::InvalidWindow(format!(
            "lattice step {} is not a multiple of the grid step {dx}",
            w.step
        ))
    })?;
    if grid.points() % stride != 0 {
        return Err(Error::InvalidWindow(format!(
            "lattice step {} does not divide the box length {}",
            w.step,
            2.0 * l
        )));
    }
    let (lo, hi) = match w.kind {
        WindowKind::CubeIndicator => {
            let side = grid.steps_in(w.side()).ok_or_else(|| {
                Error::InvalidWindow(format!(
                    "cube side {} is not a multiple of the grid step {dx}",
                    w.side()
                ))
            })?;
            if side > grid.points() {
                return Err(Error::InvalidWindow(format!(
                    "cube side {} exceeds the box length {}",
                    w.side(),
                    2.0 * l
                )));
            }
            (0i64, side as i64 - 1)
        }
        WindowKind::Gaussian | WindowKind::SmoothBump => {
            if w.support_radius() >= l {
                return Err(Error::InvalidWindow(format!(
                    "window support radius {} reaches the half-length {l}; translates would overlap through periodicity",
                    w.support_radius()
                )));
            }
            let m = (w.support_radius() / dx).floor() as i64;
            (-m, m)
        }
    };
    let mut offsets = Vec::new();
    let mut weights = Vec::new();
    let span = (hi - lo + 1) as usize;
    let total = span.pow(n as u32);
    for flat in 0..total {
        let mut off = [0i64; MAX_DIM];
        let mut x = [0.0; MAX_DIM];
        let mut rem = flat;
        for a in (0..n).rev() {
            off[a] = lo + (rem % span) as i64;
            rem /= span;
            x[a] = off[a] as f64 * dx;
        }
        let v = w.profile(&x[..n]);
        if v > 0.0 {
            offsets.push(off);
            weights.push(v);
        }
    }
    if weights.is_empty() {
        return Err(Error::InvalidWindow(format!(
            "window {w} has no support on a grid of step {dx}"
        )));
    }
    if w.normalization == Normalization::UnitL2 {
        let l2 = (weights.iter().map(|v| v * v).sum::<f64>() * grid.cell_volume()).sqrt();
        for v in weights.iter_mut() {
            *v /= l2;
        }
    }
    Ok(Stencil {
        offsets,
        weights,
        stride,
    })
}

/// Local norms `‖f·τ_kφ‖_p` over all lattice translates, in row-major order.
fn local_norms(grid: &GridSpec, values: &[Complex64], p: f64, st: &Stencil) -> Vec<f64> {
    let n = grid.dim();
    let np = grid.points() as i64;
    let m = grid.points() / st.stride;
    let count = m.pow(n as u32);
    let cell = grid.cell_volume();
    crate::par::map_range(count, |t| {
        let mut center = [0i64; MAX_DIM];
        let mut rem = t;
        for a in (0..n).rev() {
            center[a] = ((rem % m) * st.stride) as i64;
            rem /= m;
        }
        let mods: Vec<f64> = st
            .offsets
            .iter()
            .zip(&st.weights)
            .map(|(off, w)| {
                let mut flat = 0usize;
                for a in 0..n {
                    let i = (center[a] + off[a]).rem_euclid(np) as usize;
                    flat = flat * np as usize + i;
                }
                values[flat].norm() * w
            })
            .collect();
        scaled_power_norm(&mods, cell, p)
    })
}

fn outer_norm(local: &[f64], step: f64, dim: usize, q: f64) -> f64 {
    scaled_power_norm(local, step.powi(dim as i32), q)
}

fn amalgam_value(grid: &GridSpec, values: &[Complex64], p: f64, q: f64, w: &WindowSpec) -> Result<f64> {
    let st = build_stencil(grid, w)?;
    let local = local_norms(grid, values, p, &st);
    Ok(outer_norm(&local, w.step, grid.dim(), q))
}

fn amalgam_space(p: f64, q: f64) -> String {
    format!("W(L^{},L^{})", format_exponent(p), format_exponent(q))
}

/// `‖f‖_{W(L^p, L^q)}` with the given window.
///
/// The error estimate compares against the same norm on the half-resolution
/// sublattice when that lattice still resolves the window.
pub fn amalgam_norm(field: &SampledField, p: f64, q: f64, window: &WindowSpec) -> Result<NormResult> {
    check_lebesgue_exponent(p)?;
    check_lebesgue_exponent(q)?;
    field.validate()?;
    let grid = &field.grid;
    let value = amalgam_value(grid, &field.values, p, q, window)?;
    let mut est = 0.0;
    if let Ok(coarse) = GridSpec::new(grid.dim(), grid.half_length(), grid.points() / 2) {
        let sub: Vec<Complex64> = (0..coarse.len())
            .map(|k| {
                let idx = coarse.unflatten(k);
                let fine: Vec<usize> = idx[..grid.dim()].iter().map(|i| 2 * i).collect();
                field.values[grid.flatten(&fine)]
            })
            .collect();
        if let Ok(v) = amalgam_value(&coarse, &sub, p, q, window) {
            if value > 0.0 {
                est = (value - v).abs() / value;
            }
        }
    }
    let mut out = NormResult::new(value, amalgam_space(p, q))
        .with_exponent("p", p)
        .with_exponent("q", q)
        .with_grid(grid)
        .with_window(window.to_string())
        .with_error(est);
    if let Some(w) = field.periodization_warning() {
        out.warn(w);
    }
    Ok(out)
}

/// Per-translate local norms, exposed for diagnostics.
pub fn local_amalgam_norms(field: &SampledField, p: f64, window: &WindowSpec) -> Result<Vec<f64>> {
    check_lebesgue_exponent(p)?;
    let st = build_stencil(&field.grid, window)?;
    Ok(local_norms(&field.grid, &field.values, p, &st))
}

/// `sup_m m^{1/p} a*_m` over the decreasing rearrangement.
pub fn weak_lorentz_value(sequence: &[f64], p: f64) -> f64 {
    let mut a: Vec<f64> = sequence.iter().map(|v| v.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    a.iter()
        .enumerate()
        .map(|(m, v)| ((m + 1) as f64).powf(1.0 / p) * v)
        .fold(0.0, f64::max)
}

/// Weak `ℓ^{p,∞}` norm of a finite sequence.
pub fn weak_lorentz_norm(sequence: &[f64], p: f64) -> Result<NormResult> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!(
            "weak Lorentz exponent must lie in (0, inf), got {p}"
        )));
    }
    if sequence.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidField("NaN in sequence".into()));
    }
    Ok(NormResult::new(weak_lorentz_value(sequence, p), format!("l^{{{},inf}}", format_exponent(p)))
        .with_exponent("p", p))
}

/// Ratio of the weak norm of the whole sequence to that of its first half.
///
/// The sequence is expected in order of increasing distance from the origin;
/// values noticeably above 1 indicate the weak norm grows with truncation.
pub fn weak_tail_growth(sequence: &[f64], p: f64) -> f64 {
    let half = sequence.len().div_ceil(2);
    let head = weak_lorentz_value(&sequence[..half], p);
    let all = weak_lorentz_value(sequence, p);
    if head == 0.0 {
        if all == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        all / head
    }
}

/// Growth ratio above which a truncated weak norm is flagged divergent.
pub const DIVERGENCE_GROWTH: f64 = 1.05;

/// Window acting on the time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub window: WindowSpec,
    /// Translate points are `origin + k·a`.
    pub origin: f64,
    /// Inclusive range of translate indices; all that meet the time span if absent.
    pub translates: Option<(i64, i64)>,
}

impl TimeWindow {
    pub fn new(window: WindowSpec) -> Self {
        TimeWindow {
            window,
            origin: 0.0,
            translates: None,
        }
    }

    pub fn unit_cubes() -> Self {
        TimeWindow::new(WindowSpec::unit_cubes())
    }

    fn support(&self, k: i64) -> (f64, f64) {
        let c = self.origin + k as f64 * self.window.step;
        match self.window.kind {
            WindowKind::CubeIndicator => (c, c + self.window.side()),
            _ => (c - self.window.support_radius(), c + self.window.support_radius()),
        }
    }

    /// Normalized window value at `t` for translate `k`.
    fn value(&self, k: i64, t: f64, scale: f64) -> f64 {
        let c = self.origin + k as f64 * self.window.step;
        self.window.profile(&[t - c]) * scale
    }

    fn scale(&self) -> f64 {
        match self.window.normalization {
            Normalization::UnitPartition => 1.0,
            Normalization::UnitL2 => 1.0 / self.window.continuum_l2_1d(),
        }
    }

    /// Translate indices used for instants spanning `[t0, t1]`.
    pub fn translate_range(&self, t0: f64, t1: f64) -> Result<(i64, i64)> {
        self.window.validate()?;
        let a = self.window.step;
        match self.translates {
            Some((k0, k1)) => {
                if k1 < k0 {
                    return Err(Error::InvalidWindow(format!(
                        "empty translate range {k0}..={k1}"
                    )));
                }
                let (lo, _) = self.support(k0);
                let (_, hi) = self.support(k1);
                let tol = 1e-12 * (1.0 + t0.abs().max(t1.abs()));
                if lo < t0 - tol || hi > t1 + tol {
                    let mut missing = Vec::new();
                    if lo < t0 - tol {
                        missing.push(format!("[{lo}, {t0})"));
                    }
                    if hi > t1 + tol {
                        missing.push(format!("({t1}, {hi}]"));
                    }
                    return Err(Error::TimeCoverage(format!(
                        "time instants span [{t0}, {t1}] but translates {k0}..={k1} need {}",
                        missing.join(" and ")
                    )));
                }
                Ok((k0, k1))
            }
            None => {
                let r = self.support(0);
                // k with support meeting [t0, t1]
                let k0 = ((t0 - self.origin - (r.1 - self.origin)) / a).floor() as i64;
                let k1 = ((t1 - self.origin - (r.0 - self.origin)) / a).ceil() as i64;
                let mut lo = k0;
                while self.support(lo).1 <= t0 && lo < k1 {
                    lo += 1;
                }
                let mut hi = k1;
                while self.support(hi).0 > t1 && hi > lo {
                    hi -= 1;
                }
                Ok((lo, hi))
            }
        }
    }
}

/// Temporal amalgam norm of a scalar time profile.
fn time_amalgam(
    times: &[f64],
    weights: &[f64],
    g: &[f64],
    qt: f64,
    q: f64,
    tw: &TimeWindow,
    weak: bool,
) -> Result<(f64, Vec<f64>)> {
    let (k0, k1) = tw.translate_range(times[0], times[times.len() - 1])?;
    let scale = tw.scale();
    let local: Vec<f64> = (k0..=k1)
        .map(|k| {
            let (vals, ws): (Vec<f64>, Vec<f64>) = times
                .iter()
                .zip(weights)
                .zip(g)
                .filter_map(|((&t, &w), &v)| {
                    let phi = tw.value(k, t, scale);
                    (phi > 0.0 && w > 0.0).then_some((v * phi, w))
                })
                .unzip();
            crate::norm::weighted_power_norm(&vals, &ws, qt)
        })
        .collect();
    let a = tw.window.step;
    let value = if weak {
        if q.is_infinite() {
            local.iter().fold(0.0, |m: f64, &v| m.max(v))
        } else {
            a.powf(1.0 / q) * weak_lorentz_value(&local, q)
        }
    } else {
        scaled_power_norm(&local, a, q)
    };
    Ok((value, local))
}

/// `‖F‖_{W(L^{q̃},L^q)_t W(L^{r̃},L^r)_x}`; with `weak_outer_time` the outer
/// time norm is `L^{q,∞}` over the translates.
#[allow(clippy::too_many_arguments)]
pub fn spacetime_amalgam_norm(
    stf: &SpaceTimeField,
    qt: f64,
    q: f64,
    rt: f64,
    r: f64,
    window_t: &TimeWindow,
    window_x: &WindowSpec,
    weak_outer_time: bool,
) -> Result<NormResult> {
    for p in [qt, q, rt, r] {
        check_lebesgue_exponent(p)?;
    }
    stf.validate()?;
    let st = build_stencil(&stf.grid, window_x)?;
    let g: Vec<f64> = stf
        .slices
        .iter()
        .map(|s| {
            let local = local_norms(&stf.grid, &s.values, rt, &st);
            outer_norm(&local, window_x.step, stf.grid.dim(), r)
        })
        .collect();
    let weights = stf.time_weights();
    let (value, _) = time_amalgam(&stf.times, &weights, &g, qt, q, window_t, weak_outer_time)?;
    let outer_t = if weak_outer_time {
        format!("L^{{{},inf}}", format_exponent(q))
    } else {
        format!("L^{}", format_exponent(q))
    };
    let space = format!(
        "W(L^{},{})_t W(L^{},L^{})_x",
        format_exponent(qt),
        outer_t,
        format_exponent(rt),
        format_exponent(r)
    );
    let mut out = NormResult::new(value, space)
        .with_exponent("qt", qt)
        .with_exponent("q", q)
        .with_exponent("rt", rt)
        .with_exponent("r", r)
        .with_grid(&stf.grid)
        .with_window(format!("t: {}, x: {}", window_t.window, window_x));
    if let Some(w) = stf.slices.iter().find_map(|s| s.periodization_warning()) {
        out.warn(w);
    }
    Ok(out)
}

/// Outcome of the Hölder-type pairing check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    /// `|⟨F, G⟩|` in space-time.
    pub pairing: f64,
    /// `‖F‖_{W(q̃,q)W(r̃,r)} · ‖G‖_{W(q̃',q')W(r̃',r')}`.
    pub bound: f64,
    pub holds: bool,
}

fn conj_f64(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

fn require_partition(w: &WindowSpec, what: &str) -> Result<()> {
    if !w.is_exact_partition() || w.step < 1.0 - 1e-12 {
        return Err(Error::InvalidWindow(format!(
            "{what} needs an exact cube partition with side >= 1, got {w}"
        )));
    }
    Ok(())
}

/// Relative slack allowed for rounding in inequality checks.
const ROUNDING: f64 = 1e-12;

/// `|⟨F,G⟩| ≤ ‖F‖_{W(q̃,q)_tW(r̃,r)_x} ‖G‖_{W(q̃',q')_tW(r̃',r')_x}`.
#[allow(clippy::too_many_arguments)]
pub fn holder_pairing(
    f: &SpaceTimeField,
    g: &SpaceTimeField,
    qt: f64,
    q: f64,
    rt: f64,
    r: f64,
    window_t: &TimeWindow,
    window_x: &WindowSpec,
) -> Result<HolderReport> {
    require_partition(&window_t.window, "the time window")?;
    require_partition(window_x, "the space window")?;
    same_grid(&f.grid, &g.grid)?;
    let pairing = f.inner(g)?.norm();
    let nf = spacetime_amalgam_norm(f, qt, q, rt, r, window_t, window_x, false)?.value;
    let ng = spacetime_amalgam_norm(
        g,
        conj_f64(qt),
        conj_f64(q),
        conj_f64(rt),
        conj_f64(r),
        window_t,
        window_x,
        false,
    )?
    .value;
    let bound = nf * ng;
    Ok(HolderReport {
        pairing,
        bound,
        holds: pairing <= bound * (1.0 + ROUNDING) + f64::MIN_POSITIVE,
    })
}

/// Interpolated exponents `1/p = θ/p0 + (1-θ)/p1`, `1/q = θ/q0 + (1-θ)/q1`.
pub fn interpolate_exponents(
    p0: Exponent,
    q0: Exponent,
    p1: Exponent,
    q1: Exponent,
    theta: Q,
) -> Result<(Exponent, Exponent)> {
    if !(theta.is_positive() && theta < Q::one()) {
        return Err(Error::InvalidExponent(format!(
            "interpolation parameter must lie in (0, 1), got {theta}"
        )));
    }
    if q0.is_infinite() && q1.is_infinite() {
        return Err(Error::InvalidExponent(
            "at least one of the outer exponents must be finite".into(),
        ));
    }
    let mix = |a: Exponent, b: Exponent| {
        Exponent::from_recip(theta * a.recip() + (Q::one() - theta) * b.recip())
    };
    let p = mix(p0, p1)?;
    let q = mix(q0, q1)?;
    debug_assert!(!q.recip().is_zero() || !q.recip().is_negative());
    Ok((p, q))
}

/// Outcome of the inclusion check `‖f‖_{W(p2,q2)} ≤ ‖f‖_{W(p1,q1)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `W(L^{p1},L^{q1}) ⊂ W(L^{p2},L^{q2})` on unit cubes.
pub fn inclusion_check(
    field: &SampledField,
    p1: f64,
    q1: f64,
    p2: f64,
    q2: f64,
    window: &WindowSpec,
) -> Result<InclusionReport> {
    for p in [p1, q1, p2, q2] {
        check_lebesgue_exponent(p)?;
    }
    if p1 < p2 || q1 > q2 {
        return Err(Error::InvalidExponent(format!(
            "inclusion needs p1 >= p2 and q1 <= q2, got p1={}, p2={}, q1={}, q2={}",
            format_exponent(p1),
            format_exponent(p2),
            format_exponent(q1),
            format_exponent(q2)
        )));
    }
    if !window.is_exact_partition() || (window.step - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidWindow(format!(
            "inclusion needs the unit-cube partition, got {window}"
        )));
    }
    let lhs = amalgam_value(&field.grid, &field.values, p2, q2, window)?;
    let rhs = amalgam_value(&field.grid, &field.values, p1, q1, window)?;
    Ok(InclusionReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + ROUNDING) + f64::MIN_POSITIVE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{q as rq, qi};
    use crate::grid::{lebesgue_norm, make_grid, mixed_lebesgue_norm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: GridSpec, seed: u64) -> SampledField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        SampledField::new(grid, values, "random").unwrap()
    }

    #[test]
    fn unit_partition_diagonal_identity() {
        let g = make_grid(2, 4.0, 32).unwrap();
        let f = random_field(g, 1);
        let w = WindowSpec::unit_cubes();
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            let a = amalgam_norm(&f, p, p, &w).unwrap().value;
            let b = lebesgue_norm(&f, p).unwrap().value;
            assert!((a - b).abs() <= 1e-12 * b, "p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn constant_field_count() {
        let g = make_grid(1, 16.0, 256).unwrap();
        let f = SampledField::from_fn(g, "one", |_| Complex64::new(1.0, 0.0));
        let v = amalgam_norm(&f, f64::INFINITY, 4.0, &WindowSpec::unit_cubes())
            .unwrap()
            .value;
        assert!((v - 32f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_matches_brute_force() {
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, 2);
        let w = WindowSpec::gaussian(0.5, 0.5).unwrap();
        let (p, q) = (3.0, 2.5);
        let got = amalgam_norm(&f, p, q, &w).unwrap().value;
        let dx = g.step();
        let norm: f64 = (0..g.points())
            .map(|i| {
                let d = i as f64 * dx;
                let d = d.min(16.0 - d);
                (-d * d / 0.25).exp()
            })
            .sum::<f64>()
            * dx;
        let mut outer = 0.0;
        for k in 0..32 {
            let c = -8.0 + 0.5 * k as f64;
            let mut inner = 0.0;
            for i in 0..g.points() {
                let x = g.coord(i);
                let mut d = (x - c).rem_euclid(16.0);
                if d > 8.0 {
                    d -= 16.0;
                }
                let phi = if d.abs() <= 4.0 {
                    (-d * d / 0.5).exp() / norm.sqrt()
                } else {
                    0.0
                };
                inner += (f.values[i].norm() * phi).powf(p) * dx;
            }
            outer += 0.5 * inner.powf(q / p);
        }
        let want = outer.powf(1.0 / q);
        assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
    }

    #[test]
    fn window_rejections() {
        let g = make_grid(1, 4.0, 64).unwrap();
        let f = random_field(g, 3);
        assert!(amalgam_norm(&f, 2.0, 2.0, &WindowSpec::gaussian(0.6, 1.0).unwrap()).is_err());
        assert!(amalgam_norm(&f, 2.0, 2.0, &WindowSpec::bump(4.0, 1.0).unwrap()).is_err());
        assert!(amalgam_norm(&f, 2.0, 2.0, &WindowSpec::bump(1.0, 0.3).unwrap()).is_err());
        assert!(WindowSpec::new(WindowKind::Gaussian, 1.0, 1.0, Normalization::UnitPartition).is_err());
        assert!(amalgam_norm(&f, 0.5, 2.0, &WindowSpec::unit_cubes()).is_err());
    }

    #[test]
    fn homogeneity() {
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, 4);
        let w = WindowSpec::bump(1.0, 0.5).unwrap();
        let a = amalgam_norm(&f, 2.0, 4.0, &w).unwrap().value;
        let b = amalgam_norm(&f.scaled(Complex64::new(0.0, -3.5)), 2.0, 4.0, &w)
            .unwrap()
            .value;
        assert!((b - 3.5 * a).abs() <= 1e-12 * b);
    }

    #[test]
    fn weak_lorentz_examples() {
        let p = 3.0;
        let seq: Vec<f64> = (1..=200).map(|m| (m as f64).powf(-1.0 / p)).collect();
        assert!((weak_lorentz_value(&seq, p) - 1.0).abs() < 1e-12);
        assert_eq!(weak_lorentz_value(&[0.0; 5], p), 0.0);
        assert_eq!(weak_lorentz_value(&[], p), 0.0);
        assert!((weak_lorentz_value(&[0.0, -2.5, 0.0], p) - 2.5).abs() < 1e-15);
        assert!(weak_lorentz_norm(&seq, 0.0).is_err());
        let growing: Vec<f64> = (1..=64).map(|m| (m as f64).powf(-0.2)).collect();
        assert!(weak_tail_growth(&growing, 2.0) > DIVERGENCE_GROWTH);
        let decaying: Vec<f64> = (1..=64).map(|m| (m as f64).powf(-0.8)).collect();
        assert!(weak_tail_growth(&decaying, 2.0) < DIVERGENCE_GROWTH);
    }

    fn random_stf(grid: GridSpec, times: Vec<f64>, seed: u64) -> SpaceTimeField {
        let slices = (0..times.len())
            .map(|i| random_field(grid, seed * 1000 + i as u64))
            .collect();
        SpaceTimeField::new(grid, times, slices).unwrap()
    }

    #[test]
    fn spacetime_diagonal_case() {
        let g = make_grid(1, 4.0, 32).unwrap();
        let times: Vec<f64> = (0..17).map(|i| -2.0 + 0.25 * i as f64).collect();
        let stf = random_stf(g, times, 5);
        let tw = TimeWindow::unit_cubes();
        let w = WindowSpec::unit_cubes();
        for (q, r) in [(2.0, 2.0), (3.0, 4.0), (f64::INFINITY, 2.0)] {
            let a = spacetime_amalgam_norm(&stf, q, q, r, r, &tw, &w, false).unwrap().value;
            let b = mixed_lebesgue_norm(&stf, q, r).unwrap().value;
            assert!((a - b).abs() <= 1e-12 * b, "({q},{r}): {a} vs {b}");
        }
    }

    #[test]
    fn spacetime_single_slice() {
        let g = make_grid(1, 4.0, 32).unwrap();
        let stf = random_stf(g, vec![0.3], 6);
        let w = WindowSpec::bump(1.0, 0.5).unwrap();
        let tw = TimeWindow::new(WindowSpec::bump(1.0, 0.5).unwrap());
        let got = spacetime_amalgam_norm(&stf, 2.0, 3.0, 2.0, 4.0, &tw, &w, false)
            .unwrap()
            .value;
        let spatial = amalgam_norm(&stf.slices[0], 2.0, 4.0, &w).unwrap().value;
        let scale = 1.0 / tw.window.continuum_l2_1d();
        let factor: f64 = (-3..=3)
            .map(|k: i64| (tw.window.profile(&[0.3 - 0.5 * k as f64]) * scale).powi(3))
            .sum::<f64>()
            * 0.5;
        let want = spatial * factor.powf(1.0 / 3.0);
        assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
    }

    #[test]
    fn time_coverage_error() {
        let g = make_grid(1, 4.0, 32).unwrap();
        let stf = random_stf(g, vec![0.0, 0.5, 1.0], 7);
        let tw = TimeWindow {
            translates: Some((0, 3)),
            ..TimeWindow::unit_cubes()
        };
        let err = spacetime_amalgam_norm(&stf, 2.0, 2.0, 2.0, 2.0, &tw, &WindowSpec::unit_cubes(), false)
            .unwrap_err();
        assert!(matches!(err, Error::TimeCoverage(_)), "{err}");
    }

    #[test]
    fn holder_saturation_and_disjoint() {
        let g = make_grid(1, 4.0, 32).unwrap();
        let times: Vec<f64> = (0..9).map(|i| 0.25 * i as f64).collect();
        let f = random_stf(g, times.clone(), 8);
        let tw = TimeWindow::unit_cubes();
        let w = WindowSpec::unit_cubes();
        let rep = holder_pairing(&f, &f, 2.0, 2.0, 2.0, 2.0, &tw, &w).unwrap();
        assert!(rep.holds);
        assert!((rep.pairing - rep.bound).abs() <= 1e-12 * rep.bound);

        let mut left = f.clone();
        let mut right = f.clone();
        for (a, b) in left.slices.iter_mut().zip(right.slices.iter_mut()) {
            for k in 0..32 {
                if k < 16 {
                    b.values[k] = Complex64::new(0.0, 0.0);
                } else {
                    a.values[k] = Complex64::new(0.0, 0.0);
                }
            }
        }
        let rep = holder_pairing(&left, &right, 2.0, 4.0, 2.0, 6.0, &tw, &w).unwrap();
        assert_eq!(rep.pairing, 0.0);
        assert!(rep.bound > 0.0 && rep.holds);

        let smooth = WindowSpec::bump(1.0, 1.0).unwrap();
        assert!(holder_pairing(&f, &f, 2.0, 2.0, 2.0, 2.0, &tw, &smooth).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let two = Exponent::int(2);
        let inf = Exponent::infinity();
        let (p, q) = interpolate_exponents(two, two, inf, inf, rq(1, 2)).unwrap();
        assert_eq!((p, q), (Exponent::int(4), Exponent::int(4)));
        assert!(interpolate_exponents(two, two, inf, inf, qi(1)).is_err());
        assert!(interpolate_exponents(two, two, inf, inf, qi(0)).is_err());
        assert!(interpolate_exponents(two, inf, two, inf, rq(1, 3)).is_err());
    }

    #[test]
    fn inclusion_examples() {
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, 9);
        let w = WindowSpec::unit_cubes();
        let inf = f64::INFINITY;
        assert!(inclusion_check(&f, inf, 1.0, 1.0, inf, &w).unwrap().holds);
        let eq = inclusion_check(&f, 3.0, 2.0, 3.0, 2.0, &w).unwrap();
        assert_eq!(eq.lhs, eq.rhs);
        assert!(inclusion_check(&f, 1.0, 1.0, 2.0, 2.0, &w).is_err());
        let mut spike = SampledField::zeros(g, "spike");
        spike.values[40] = Complex64::new(1.0, 0.0);
        let rep = inclusion_check(&spike, inf, 1.0, 1.0, inf, &w).unwrap();
        assert!(rep.holds && rep.lhs < rep.rhs);
    }
}
