//! The kernel `K_t(x) = (2π)^{-n} ∫ e^{i(x·ξ - t|ξ|²)} |ξ|^{-2σ} dξ`.
//!
//! Scaling reduces everything to `t = 1`:
//! `K_t(x) = |t|^{σ-n/2} K_{±1}(x/√|t|)` and `K_{-1} = conj(K_1)`.
//! The radial integrals
//!
//! ```text
//! J±(y; μ) = ∫_0^∞ e^{±iyρ - iρ²} ρ^{μ-1} dρ
//! ```
//!
//! are evaluated on steepest-descent contours: the ray `ρ = s·e^{-iπ/4}` for
//! `J-` (and for `J+` when `y` is small), otherwise a vertical segment from
//! `0` to `iy/2` followed by the line through the saddle `ρ = y/2`.
//!
//! A second, independent evaluator (n = 1) sums the lattice Fourier integral
//! with Gaussian damping `e^{-ε|ξ|²}`, removes the `|ξ|^{-2σ}` singularity
//! with zeta-function corrections, and extrapolates `ε → 0`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::grid::{GridSpec, SampledField};
use crate::quad::{power_weighted, tanh_sinh, QuadResult};
use crate::special::zeta;
use statrs::function::gamma::gamma;
use crate::wiener::{amalgam_norm, WindowSpec};
use crate::{Error, Result};

const TOL: f64 = 1e-12;
/// `J+` switches from the ray to the saddle contour above this `y`.
const SADDLE_SWITCH: f64 = 4.0;
/// Gaussian tails beyond `e^{-49}` are dropped.
const TAIL: f64 = 7.0;

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, -PI / 4.0)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Principal power `z^p`.
fn cpow(z: Complex64, p: f64) -> Complex64 {
    if z == c(0.0) {
        return c(0.0);
    }
    let (r, th) = z.to_polar();
    Complex64::from_polar(r.powf(p), th * p)
}

/// `J-(y; μ)` on the ray `ρ = sω`.
fn j_minus(y: f64, mu: f64) -> QuadResult {
    let w = omega();
    let b = y * Complex64::from_polar(1.0, PI / 4.0);
    let upper = if y > 0.0 { TAIL.min(50.0 / y) } else { TAIL };
    power_weighted(mu, |s| (-s * s - b * s).exp(), upper, TOL) * cpow(w, mu)
}

/// `J+(y; μ)`.
fn j_plus(y: f64, mu: f64) -> QuadResult {
    let w = omega();
    if y <= SADDLE_SWITCH {
        let b = y * Complex64::from_polar(1.0, PI / 4.0);
        let upper = TAIL + y * FRAC_1_SQRT_2;
        return power_weighted(mu, |s| (-s * s + b * s).exp(), upper, TOL) * cpow(w, mu);
    }
    // 0 → iy/2 along the imaginary axis: ρ = iη, dρ = i dη
    let height = (0.5 * y).min(40.0 / y);
    let seg = power_weighted(mu, |eta| Complex64::new(-y * eta, eta * eta).exp(), height, TOL)
        * cpow(Complex64::i(), mu);
    // saddle line ρ = y/2 + uω from the junction iy/2 (u = -y/√2)
    let u0 = (-y * FRAC_1_SQRT_2).max(-TAIL);
    let phase = Complex64::new(0.0, 0.25 * y * y).exp();
    let line = tanh_sinh(
        |u| {
            let rho = c(0.5 * y) + w * u;
            cpow(rho, mu - 1.0) * (-u * u).exp()
        },
        u0,
        TAIL,
        TOL,
    ) * (phase * w);
    seg + line
}

/// `∫_0^∞ cos(ρy) e^{-iρ²} ρ^{μ-1} dρ`.
fn cosine_transform(y: f64, mu: f64) -> QuadResult {
    let s = j_plus(y, mu) + j_minus(y, mu);
    s * c(0.5)
}

/// `K_1(y)` for `n = 1`.
fn k1_dim1(y: f64, sigma: f64) -> QuadResult {
    cosine_transform(y, 1.0 - 2.0 * sigma) * c(1.0 / PI)
}

/// Radius above which `n = 2` switches from quadrature to the confluent expansion.
const CONFLUENT_SWITCH: f64 = 12.0;

/// `K_1(r)` from `K_1 = Γ(a)/((4π)^{n/2}Γ(b)i^a) ₁F₁(a; b; ir²/4)`,
/// `a = n/2 - σ`, `b = n/2`, through the large-argument expansion of `₁F₁`.
/// Accurate to about `e^{-r²/4}` relative; meant for `r ≥ CONFLUENT_SWITCH`.
fn k1_confluent(n: usize, sigma: f64, r: f64) -> QuadResult {
    let b = n as f64 / 2.0;
    let a = b - sigma;
    let y = 0.25 * r * r;
    let iz = Complex64::new(0.0, -1.0 / y); // 1/z with z = iy
    // Σ (p)_k (q)_k / k! w^k, stopped at the smallest term
    let series = |p: f64, q: f64, w: Complex64| -> (Complex64, f64) {
        let mut term = c(1.0);
        let mut sum = c(1.0);
        let mut last = 1.0f64;
        for k in 0..200 {
            let kf = k as f64;
            let next = term * w * ((p + kf) * (q + kf) / (kf + 1.0));
            if next.norm() >= last || next.norm() < 1e-17 * sum.norm() {
                return (sum, next.norm().min(last));
            }
            term = next;
            last = term.norm();
            sum += term;
        }
        (sum, last)
    };
    let (s1, e1) = series(b - a, 1.0 - a, iz);
    let oscillating = Complex64::from_polar(y.powf(-sigma), y - 0.5 * PI * b) * s1;
    let (tail, e2) = if sigma == 0.0 {
        (c(0.0), 0.0)
    } else {
        let (s2, e2) = series(a, a - b + 1.0, -iz);
        let g = gamma(a) / gamma(sigma) * y.powf(-a);
        (s2 * g, e2 * g.abs())
    };
    let scale = (4.0 * PI).powf(-b);
    QuadResult {
        value: (oscillating + tail) * scale,
        error: (e1 * y.powf(-sigma) + e2) * scale,
        evaluations: 0,
    }
}

/// `K_1(r)` for `n = 2`: the Bessel average as a `θ`-integral of the 1-D transform.
fn k1_dim2(r: f64, sigma: f64) -> QuadResult {
    if r >= CONFLUENT_SWITCH {
        return k1_confluent(2, sigma, r);
    }
    let mu = 2.0 - 2.0 * sigma;
    // the θ-integrand oscillates like e^{ir²cos²θ/4}
    let pieces = ((r * r / 8.0).ceil() as usize).clamp(1, 4096);
    let h = 0.5 * PI / pieces as f64;
    let mut acc = QuadResult::zero();
    for p in 0..pieces {
        let a = p as f64 * h;
        let part = tanh_sinh(
            |th| cosine_transform(r * th.cos(), mu).value,
            a,
            a + h,
            1e-10,
        );
        acc = acc + part;
    }
    acc * c(1.0 / (PI * PI))
}

/// `K_1(r)` for `n = 3`.
fn k1_dim3(r: f64, sigma: f64) -> Result<QuadResult> {
    let w = omega();
    if r <= SADDLE_SWITCH {
        // ∫ sinc(ρr) ρ^{2-2σ} e^{-iρ²} dρ on the ray
        let mu = 3.0 - 2.0 * sigma;
        let upper = TAIL + r * FRAC_1_SQRT_2;
        let res = power_weighted(
            mu,
            |s| {
                let z = w * (s * r);
                let sinc = if z.norm() < 1e-8 { c(1.0) - z * z / 6.0 } else { z.sin() / z };
                sinc * (-s * s).exp()
            },
            upper,
            TOL,
        );
        return Ok(res * (cpow(w, mu) / (2.0 * PI * PI)));
    }
    let mu = 2.0 - 2.0 * sigma;
    if mu <= 0.0 {
        return Err(Error::Kernel(format!(
            "n = 3 with sigma = {sigma} >= 1 is supported only for |x|/sqrt|t| <= {SADDLE_SWITCH}"
        )));
    }
    let diff = j_plus(r, mu) + j_minus(r, mu) * c(-1.0);
    Ok(diff * (Complex64::new(0.0, -0.5) / (2.0 * PI * PI * r)))
}

/// `K_1(y)` at radius `y ≥ 0`.
fn k1(n: usize, sigma: f64, y: f64) -> Result<QuadResult> {
    match n {
        1 => Ok(k1_dim1(y, sigma)),
        2 => Ok(k1_dim2(y, sigma)),
        3 => k1_dim3(y, sigma),
        _ => Err(Error::Kernel(format!("dimension {n} not supported"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    /// Steepest-descent contour quadrature, any `n ≤ 3`.
    Contour,
    /// Damped lattice sum with zeta corrections and Richardson extrapolation
    /// in `ε ∈ {4ε₀, ε₀}`, `n = 1`. Sample points must be multiples of
    /// `spacing / 2`; `ε₀` defaults to `spacing²`.
    Regularized { spacing: f64, eps0: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSchedule {
    pub method: KernelMethod,
    /// Relative error above which samples are flagged as not converged.
    pub tolerance: f64,
}

impl Default for KernelSchedule {
    fn default() -> Self {
        KernelSchedule {
            method: KernelMethod::Contour,
            tolerance: 1e-8,
        }
    }
}

impl KernelSchedule {
    pub fn regularized(spacing: f64) -> Self {
        KernelSchedule {
            method: KernelMethod::Regularized {
                spacing,
                eps0: None,
            },
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSamples {
    pub n: usize,
    /// `γ = 2σ`.
    pub gamma: f64,
    pub t: f64,
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub schedule: KernelSchedule,
    /// Largest relative error estimate over the samples.
    pub est_error: f64,
    pub converged: bool,
}

fn check_kernel_args(n: usize, sigma: f64, t: f64) -> Result<()> {
    if !(1..=3).contains(&n) {
        return Err(Error::Kernel(format!("dimension must be 1, 2 or 3, got {n}")));
    }
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Kernel(format!("time must be finite and nonzero, got {t}")));
    }
    let top = n as f64 / 2.0;
    if !(sigma >= 0.0 && sigma < top) {
        return Err(Error::SigmaRange(format!(
            "kernel needs 2 sigma in [0, n), got sigma = {sigma}, n = {n}"
        )));
    }
    Ok(())
}

/// `K_t` at radial distances `|x|` (signs are ignored; the kernel is radial).
pub fn kernel_eval(
    n: usize,
    sigma: f64,
    t: f64,
    xs: &[f64],
    schedule: &KernelSchedule,
) -> Result<KernelSamples> {
    check_kernel_args(n, sigma, t)?;
    let (values, errors) = match schedule.method {
        KernelMethod::Contour => contour_values(n, sigma, t, xs)?,
        KernelMethod::Regularized { spacing, eps0 } => {
            if n != 1 {
                return Err(Error::Kernel(
                    "the regularized evaluator is implemented for n = 1 only".into(),
                ));
            }
            regularized_values(sigma, t, xs, spacing, eps0)?
        }
    };
    let est_error = values
        .iter()
        .zip(&errors)
        .map(|(v, e)| if v.norm() > 0.0 { e / v.norm() } else { *e })
        .fold(0.0, f64::max)
        .max(f64::EPSILON);
    Ok(KernelSamples {
        n,
        gamma: 2.0 * sigma,
        t,
        xs: xs.to_vec(),
        values,
        schedule: *schedule,
        est_error,
        converged: est_error <= schedule.tolerance,
    })
}

fn contour_values(n: usize, sigma: f64, t: f64, xs: &[f64]) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let at = t.abs();
    let scale = at.powf(sigma - n as f64 / 2.0);
    let root = at.sqrt();
    let results = crate::par::map_range(xs.len(), |i| k1(n, sigma, xs[i].abs() / root));
    let mut values = Vec::with_capacity(xs.len());
    let mut errors = Vec::with_capacity(xs.len());
    for r in results {
        let r = r?;
        let v = r.value * scale;
        values.push(if t < 0.0 { v.conj() } else { v });
        errors.push(r.error * scale);
    }
    Ok((values, errors))
}

/// Lattice sum `(1/2π) Σ_{j≠0} h |ξ_j|^{-β} e^{ixξ_j - zξ_j²}` for all `x = lδ`,
/// with the singular Euler–Maclaurin terms subtracted.
fn damped_lattice_kernel(beta: f64, z: Complex64, delta: f64, m: usize, xs_idx: &[i64]) -> Vec<Complex64> {
    let h = 2.0 * PI / (m as f64 * delta);
    let mut data: Vec<Complex64> = (0..m)
        .map(|k| {
            let j = if k < m / 2 { k as i64 } else { k as i64 - m as i64 };
            if j == 0 {
                return c(0.0);
            }
            let xi = j as f64 * h;
            (-z * xi * xi).exp() * (h * xi.abs().powf(-beta))
        })
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(m).process(&mut data);
    // Σ_{j≠0} h|jh|^{-β} g(jh) ≈ ∫ + 2 Σ_k ζ(β-2k) h^{2k+1-β} g^{(2k)}(0)/(2k)!
    xs_idx
        .iter()
        .map(|&l| {
            let x = l as f64 * delta;
            let k = l.rem_euclid(m as i64) as usize;
            let mut sum = data[k];
            for (kk, coef) in taylor_even(x, z, 6).into_iter().enumerate() {
                let p = 2 * kk;
                let zt = zeta(beta - p as f64);
                sum -= coef * (2.0 * zt * h.powf(p as f64 + 1.0 - beta));
            }
            sum / (2.0 * PI)
        })
        .collect()
}

/// Even Taylor coefficients `c_{2k}` of `e^{ixξ - zξ²}` at `ξ = 0`, `k < count`.
fn taylor_even(x: f64, z: Complex64, count: usize) -> Vec<Complex64> {
    let top = 2 * count;
    let mut fact = vec![1.0; top + 1];
    for i in 1..=top {
        fact[i] = fact[i - 1] * i as f64;
    }
    let ix = Complex64::new(0.0, x);
    (0..count)
        .map(|k| {
            let mdeg = 2 * k;
            (0..=k)
                .map(|b| {
                    let a = mdeg - 2 * b;
                    ix.powu(a as u32) * (-z).powu(b as u32) / (fact[a] * fact[b])
                })
                .sum()
        })
        .collect()
}

fn regularized_values(
    sigma: f64,
    t: f64,
    xs: &[f64],
    spacing: f64,
    eps0: Option<f64>,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::Kernel(format!("spacing must be positive, got {spacing}")));
    }
    let eps0 = eps0.unwrap_or(spacing * spacing);
    let delta = spacing / 2.0;
    let idx: Vec<i64> = xs
        .iter()
        .map(|&x| {
            let s = x.abs() / delta;
            let r = s.round();
            if (s - r).abs() > 1e-9 * r.max(1.0) {
                Err(Error::Kernel(format!(
                    "sample {x} is not a multiple of the output spacing {delta}"
                )))
            } else {
                Ok(r as i64)
            }
        })
        .collect::<Result<_>>()?;
    let xmax = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // resolve |ξ| up to where e^{-ε₀ξ²} < e^{-36}, keep x·h ≤ 0.05
    let xi_max = (36.0 / eps0).sqrt();
    if PI / delta < xi_max {
        return Err(Error::Kernel(format!(
            "spacing {spacing} is too coarse to resolve damping eps0 = {eps0}"
        )));
    }
    let min_m = (2.0 * PI * xmax.max(1.0) / (0.05 * delta)).ceil() as usize;
    let m = min_m.next_power_of_two().max(1 << 12);
    if m > 1 << 24 {
        return Err(Error::Kernel(format!(
            "regularized lattice would need {m} points; reduce max |x|"
        )));
    }
    let beta = 2.0 * sigma;
    let k_eps = |eps: f64| damped_lattice_kernel(beta, Complex64::new(eps, t), delta, m, &idx);
    let coarse = k_eps(4.0 * eps0);
    let fine = k_eps(eps0);
    let mut values = Vec::with_capacity(xs.len());
    let mut errors = Vec::with_capacity(xs.len());
    for (a, b) in coarse.iter().zip(&fine) {
        let extrap = (b * 4.0 - a) / 3.0;
        errors.push((extrap - b).norm());
        values.push(extrap);
    }
    Ok((values, errors))
}

/// `|t|^{-(n/2-γ)}(|x|²+|t|)^{-γ/2}` for `γ ≤ n/2`, `(|x|²+|t|)^{-(n-γ)/2}` above.
pub fn kernel_bound(n: usize, gamma: f64, t: f64, x: f64) -> Result<f64> {
    let nf = n as f64;
    if !(gamma > 0.0 && gamma < nf) {
        return Err(Error::InvalidExponent(format!(
            "gamma must lie in (0, {n}), got {gamma}"
        )));
    }
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Kernel(format!("time must be finite and nonzero, got {t}")));
    }
    let at = t.abs();
    let s = x * x + at;
    Ok(if gamma <= nf / 2.0 {
        at.powf(-(nf / 2.0 - gamma)) * s.powf(-gamma / 2.0)
    } else {
        s.powf(-(nf - gamma) / 2.0)
    })
}

/// Instants `10^{k/m}` inside `[t_min, t_max]` plus both endpoints.
pub fn log_times(t_min: f64, t_max: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && per_decade > 0) {
        return Err(Error::InvalidField(format!(
            "need 0 < t_min < t_max and per_decade > 0, got [{t_min}, {t_max}], {per_decade}"
        )));
    }
    let m = per_decade as f64;
    let k0 = (m * t_min.log10()).ceil() as i64;
    let k1 = (m * t_max.log10()).floor() as i64;
    let mut out = vec![t_min];
    for k in k0..=k1 {
        let t = 10f64.powf(k as f64 / m);
        if t > t_min * (1.0 + 1e-12) && t < t_max * (1.0 - 1e-12) {
            out.push(t);
        }
    }
    out.push(t_max);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub n: usize,
    pub sigma: f64,
    pub rt: f64,
    pub r: f64,
    pub window: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub est_errors: Vec<f64>,
    pub converged: bool,
}

impl DecayProfile {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,value,est_error\n");
        for ((t, v), e) in self.times.iter().zip(&self.values).zip(&self.est_errors) {
            s.push_str(&format!("{t:.12e},{v:.12e},{e:.3e}\n"));
        }
        s
    }
}

/// Lattice points grouped by squared integer distance from the origin.
fn radial_classes(grid: &GridSpec) -> BTreeMap<u64, Vec<usize>> {
    let half = (grid.points() / 2) as i64;
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for k in 0..grid.len() {
        let idx = grid.unflatten(k);
        let r2: u64 = idx[..grid.dim()]
            .iter()
            .map(|&i| {
                let d = i as i64 - half;
                (d * d) as u64
            })
            .sum();
        classes.entry(r2).or_default().push(k);
    }
    classes
}

/// `K_t` sampled on every lattice point of `grid` (not periodized).
pub fn kernel_field(
    grid: &GridSpec,
    sigma: f64,
    t: f64,
    schedule: &KernelSchedule,
) -> Result<(SampledField, f64, bool)> {
    let classes = radial_classes(grid);
    let dx = grid.step();
    let radii: Vec<f64> = classes.keys().map(|&r2| dx * (r2 as f64).sqrt()).collect();
    let samples = kernel_eval(grid.dim(), sigma, t, &radii, schedule)?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (members, v) in classes.values().zip(&samples.values) {
        for &k in members {
            values[k] = *v;
        }
    }
    let field = SampledField {
        grid: *grid,
        values,
        label: format!("K(t={t})"),
    };
    Ok((field, samples.est_error, samples.converged))
}

/// `h(t) = ‖K_t‖_{W(L^{r̃/2}, L^{r/2})_x}` at each instant.
#[allow(clippy::too_many_arguments)]
pub fn kernel_amalgam_profile(
    grid: &GridSpec,
    sigma: f64,
    rt: f64,
    r: f64,
    window: &WindowSpec,
    times: &[f64],
    schedule: &KernelSchedule,
) -> Result<DecayProfile> {
    if times.is_empty() {
        return Err(Error::InvalidField("empty time list".into()));
    }
    if times.windows(2).any(|w| w[1].abs() <= w[0].abs()) {
        return Err(Error::InvalidField("times must increase in |t|".into()));
    }
    for (name, p) in [("rt", rt), ("r", r)] {
        if !(p >= 2.0) {
            return Err(Error::InvalidExponent(format!("{name} must be >= 2, got {p}")));
        }
    }
    let mut values = Vec::with_capacity(times.len());
    let mut est_errors = Vec::with_capacity(times.len());
    let mut converged = true;
    for &t in times {
        let (field, err, ok) = kernel_field(grid, sigma, t, schedule)?;
        let norm = amalgam_norm(&field, rt / 2.0, r / 2.0, window)?;
        values.push(norm.value);
        est_errors.push(err);
        converged &= ok;
    }
    Ok(DecayProfile {
        n: grid.dim(),
        sigma,
        rt,
        r,
        window: window.to_string(),
        times: times.to_vec(),
        values,
        est_errors,
        converged,
    })
}
