//! Periodic lattice discretization of functions on `R^n`.
//!
//! A [`GridSpec`] samples the box `[-L, L)^n` with `N` points per axis. The
//! lattice coordinates are `x_i = -L + i·Δx` with `Δx = 2L/N`, and the dual
//! frequency lattice is `ξ_j = (π/L)·j` for `j ∈ {-N/2, …, N/2-1}`.
//!
//! Discrete Fourier transforms follow the continuum convention
//! `f̂(ξ) = ∫ f(x) e^{-ix·ξ} dx`, `f(x) = (2π)^{-n} ∫ f̂(ξ) e^{ix·ξ} dξ`:
//! the forward sum carries `Δx^n`, the inverse carries `(Δξ/2π)^n`. With this
//! normalization the discrete Parseval identity reads
//! `Σ |f|² Δx^n = (Δξ/2π)^n Σ |f̂|²`.
//!
//! Spectra are stored in FFT order: index `k` along an axis corresponds to
//! `j = k` for `k < N/2` and `j = k - N` otherwise.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::norm::{check_lebesgue_exponent, weighted_power_norm, NormResult};
use crate::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 3;

/// Fraction of the box (per side) treated as the periodization guard band.
const GUARD_FRACTION: f64 = 0.25;

/// Boundary mass above which wrap-around is considered to pollute results.
pub const BOUNDARY_MASS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    half_length: f64,
    points: usize,
}

impl GridSpec {
    /// Builds a grid on `[-L, L)^n` with `N` points per axis.
    pub fn new(dim: usize, half_length: f64, points: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-length must be positive, got {half_length}"
            )));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {points}"
            )));
        }
        Ok(GridSpec {
            dim,
            half_length,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of lattice points, `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spatial step `Δx = 2L/N`.
    pub fn step(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    /// Frequency step `Δξ = π/L`.
    pub fn freq_step(&self) -> f64 {
        PI / self.half_length
    }

    /// Lattice cell volume `Δx^n`.
    pub fn cell_volume(&self) -> f64 {
        self.step().powi(self.dim as i32)
    }

    /// Spectral cell weight `(Δξ/2π)^n`.
    pub fn spectral_weight(&self) -> f64 {
        (self.freq_step() / (2.0 * PI)).powi(self.dim as i32)
    }

    /// Coordinate of lattice index `i` along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.step()
    }

    /// Signed frequency index of FFT-order position `k`.
    pub fn freq_index(&self, k: usize) -> i64 {
        if k < self.points / 2 {
            k as i64
        } else {
            k as i64 - self.points as i64
        }
    }

    /// Frequency of FFT-order position `k` along any axis.
    pub fn freq(&self, k: usize) -> f64 {
        self.freq_index(k) as f64 * self.freq_step()
    }

    /// Splits a flat row-major index into per-axis indices.
    pub fn unflatten(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0usize; MAX_DIM];
        for axis in (0..self.dim).rev() {
            idx[axis] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        idx[..self.dim]
            .iter()
            .fold(0usize, |acc, &i| acc * self.points + i)
    }

    /// Physical coordinates of a flat index (unused axes are zero).
    pub fn point(&self, flat: usize) -> [f64; MAX_DIM] {
        let idx = self.unflatten(flat);
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = self.coord(idx[axis]);
        }
        x
    }

    /// `|ξ|²` at a flat FFT-order index.
    pub fn freq_norm_sq(&self, flat: usize) -> f64 {
        let idx = self.unflatten(flat);
        (0..self.dim).map(|a| self.freq(idx[a]).powi(2)).sum()
    }

    /// `|ξ|²` for every spectral position, in FFT order.
    pub fn freq_norms_sq(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.freq_norm_sq(k)).collect()
    }

    /// Number of lattice steps in `length`, if it is an integer multiple of `Δx`.
    pub fn steps_in(&self, length: f64) -> Option<usize> {
        let s = length / self.step();
        let r = s.round();
        if r >= 1.0 && (s - r).abs() <= 1e-9 * r.max(1.0) {
            Some(r as usize)
        } else {
            None
        }
    }
}

/// A complex field sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
    pub label: String,
}

impl SampledField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        let field = SampledField {
            grid,
            values,
            label: label.into(),
        };
        field.validate()?;
        Ok(field)
    }

    pub fn zeros(grid: GridSpec, label: impl Into<String>) -> Self {
        SampledField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            label: label.into(),
        }
    }

    /// Samples `f` at every lattice point.
    pub fn from_fn(
        grid: GridSpec,
        label: impl Into<String>,
        f: impl Fn(&[f64]) -> Complex64,
    ) -> Self {
        let values = (0..grid.len())
            .map(|k| f(&grid.point(k)[..grid.dim()]))
            .collect();
        SampledField {
            grid,
            values,
            label: label.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} values, got {}",
                self.grid.len(),
                self.values.len()
            )));
        }
        if let Some(k) = self
            .values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::InvalidField(format!("non-finite value at index {k}")));
        }
        Ok(())
    }

    pub fn scaled(&self, a: Complex64) -> SampledField {
        SampledField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * a).collect(),
            label: self.label.clone(),
        }
    }

    /// `⟨self, other⟩ = Σ self·conj(other)·Δx^n`.
    pub fn inner(&self, other: &SampledField) -> Result<Complex64> {
        same_grid(&self.grid, &other.grid)?;
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(s * self.grid.cell_volume())
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }

    /// Fraction of `‖f‖₂²` lying within `L/4` of the box boundary.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge = self.grid.half_length() * (1.0 - GUARD_FRACTION);
        let outer: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                self.grid.point(*k)[..self.grid.dim()]
                    .iter()
                    .any(|x| x.abs() > edge)
            })
            .map(|(_, v)| v.norm_sqr())
            .sum();
        outer / total
    }

    /// Returns a warning when the guard band carries more than
    /// [`BOUNDARY_MASS_TOL`] of the mass.
    pub fn periodization_warning(&self) -> Option<String> {
        let frac = self.boundary_mass_fraction();
        (frac > BOUNDARY_MASS_TOL).then(|| {
            format!(
                "field '{}' has boundary mass fraction {frac:.3e} > {BOUNDARY_MASS_TOL:e}; \
                 wrap-around may pollute results",
                self.label
            )
        })
    }
}

pub(crate) fn same_grid(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// A time series of fields sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: GridSpec,
    pub times: Vec<f64>,
    pub slices: Vec<SampledField>,
}

impl SpaceTimeField {
    pub fn new(grid: GridSpec, times: Vec<f64>, slices: Vec<SampledField>) -> Result<Self> {
        let stf = SpaceTimeField {
            grid,
            times,
            slices,
        };
        stf.validate()?;
        Ok(stf)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.is_empty() {
            return Err(Error::InvalidField("empty time list".into()));
        }
        if self.times.len() != self.slices.len() {
            return Err(Error::InvalidField(format!(
                "{} times but {} slices",
                self.times.len(),
                self.slices.len()
            )));
        }
        if self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidField("non-finite time instant".into()));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidField(
                "time instants must be strictly increasing".into(),
            ));
        }
        for s in &self.slices {
            same_grid(&self.grid, &s.grid)?;
            s.validate()?;
        }
        Ok(())
    }

    /// Trapezoidal quadrature weights on the time instants.
    pub fn time_weights(&self) -> Vec<f64> {
        time_weights(&self.times)
    }

    /// Space-time inner product `Σ_i w_i ⟨F_i, G_i⟩`.
    pub fn inner(&self, other: &SpaceTimeField) -> Result<Complex64> {
        same_grid(&self.grid, &other.grid)?;
        if self.times != other.times {
            return Err(Error::GridMismatch("time lists differ".into()));
        }
        let w = self.time_weights();
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), wi) in self.slices.iter().zip(&other.slices).zip(&w) {
            acc += a.inner(b)? * wi;
        }
        Ok(acc)
    }
}

/// Trapezoidal weights for arbitrary increasing instants.
///
/// A single instant gets unit weight.
pub fn time_weights(times: &[f64]) -> Vec<f64> {
    let m = times.len();
    match m {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..m)
            .map(|i| {
                let left = if i == 0 { times[0] } else { times[i - 1] };
                let right = if i + 1 == m { times[m - 1] } else { times[i + 1] };
                0.5 * (right - left)
            })
            .collect(),
    }
}

/// Transform direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Constructs a lattice of the given dimension, half-length and resolution.
pub fn make_grid(dim: usize, half_length: f64, points: usize) -> Result<GridSpec> {
    GridSpec::new(dim, half_length, points)
}

/// In-place unnormalized FFT along every axis.
fn fft_nd(grid: &GridSpec, data: &mut [Complex64], inverse: bool) {
    let n = grid.points();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..grid.dim() {
        let stride = n.pow((grid.dim() - 1 - axis) as u32);
        let lines = grid.len() / n;
        for l in 0..lines {
            // start index of line l: low part below stride, high part above stride*n
            let base = (l / stride) * stride * n + (l % stride);
            if stride == 1 {
                fft.process_with_scratch(&mut data[base..base + n], &mut scratch);
            } else {
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[base + i * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

/// Parity sign `(-1)^{Σ k_a}`; accounts for the lattice origin at `-L`.
fn checkerboard(grid: &GridSpec, flat: usize) -> f64 {
    let idx = grid.unflatten(flat);
    let s: usize = idx[..grid.dim()].iter().sum();
    if s % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Forward spectrum values (FFT order) of physical samples.
pub(crate) fn forward_values(grid: &GridSpec, values: &[Complex64]) -> Vec<Complex64> {
    let mut data = values.to_vec();
    fft_nd(grid, &mut data, false);
    let scale = grid.cell_volume();
    for (k, v) in data.iter_mut().enumerate() {
        *v *= scale * checkerboard(grid, k);
    }
    data
}

/// Physical samples from spectrum values (FFT order).
pub(crate) fn inverse_values(grid: &GridSpec, spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = spectrum
        .iter()
        .enumerate()
        .map(|(k, v)| v * checkerboard(grid, k))
        .collect();
    fft_nd(grid, &mut data, true);
    let scale = grid.spectral_weight();
    for v in data.iter_mut() {
        *v *= scale;
    }
    data
}

/// Discrete Fourier transform under the continuum-mirroring normalization.
///
/// The forward output is a spectrum in FFT order on the same grid; the inverse
/// consumes such a spectrum.
pub fn transform(field: &SampledField, direction: Direction) -> Result<SampledField> {
    field.validate()?;
    let (values, label) = match direction {
        Direction::Forward => (
            forward_values(&field.grid, &field.values),
            format!("F[{}]", field.label),
        ),
        Direction::Inverse => (
            inverse_values(&field.grid, &field.values),
            format!("F^-1[{}]", field.label),
        ),
    };
    Ok(SampledField {
        grid: field.grid,
        values,
        label,
    })
}

/// Spectral `ℓ²` norm `((Δξ/2π)^n Σ |f̂|²)^{1/2}` of an FFT-order spectrum.
pub fn spectral_l2(spectrum: &SampledField) -> f64 {
    let s: f64 = spectrum.values.iter().map(|v| v.norm_sqr()).sum();
    (s * spectrum.grid.spectral_weight()).sqrt()
}

fn lattice_lp(grid: &GridSpec, values: &[Complex64], p: f64, stride: usize) -> f64 {
    let mut mods = Vec::with_capacity(values.len());
    for (k, v) in values.iter().enumerate() {
        if stride > 1 {
            let idx = grid.unflatten(k);
            if idx[..grid.dim()].iter().any(|i| i % stride != 0) {
                continue;
            }
        }
        mods.push(v.norm());
    }
    let cell = (grid.step() * stride as f64).powi(grid.dim() as i32);
    let weights = vec![cell; mods.len()];
    weighted_power_norm(&mods, &weights, p)
}

/// Riemann-sum `L^p` norm; `p = ∞` is the lattice maximum.
///
/// The error estimate compares against the same sum on the half-resolution
/// sublattice.
pub fn lebesgue_norm(field: &SampledField, p: f64) -> Result<NormResult> {
    check_lebesgue_exponent(p)?;
    field.validate()?;
    let value = lattice_lp(&field.grid, &field.values, p, 1);
    let coarse = lattice_lp(&field.grid, &field.values, p, 2);
    let est = if value > 0.0 {
        (value - coarse).abs() / value
    } else {
        0.0
    };
    let mut out = NormResult::new(value, format!("L^{}", crate::norm::format_exponent(p)))
        .with_exponent("p", p)
        .with_grid(&field.grid)
        .with_error(est);
    if let Some(w) = field.periodization_warning() {
        out.warn(w);
    }
    Ok(out)
}

/// Mixed norm `‖ ‖F(t)‖_{L^r_x} ‖_{L^q_t}` with trapezoidal time weights.
pub fn mixed_lebesgue_norm(stf: &SpaceTimeField, q: f64, r: f64) -> Result<NormResult> {
    check_lebesgue_exponent(q)?;
    check_lebesgue_exponent(r)?;
    stf.validate()?;
    let inner: Vec<f64> = stf
        .slices
        .iter()
        .map(|s| lattice_lp(&stf.grid, &s.values, r, 1))
        .collect();
    let weights = stf.time_weights();
    let value = weighted_power_norm(&inner, &weights, q);
    let space = format!(
        "L^{}_t L^{}_x",
        crate::norm::format_exponent(q),
        crate::norm::format_exponent(r)
    );
    Ok(NormResult::new(value, space)
        .with_exponent("q", q)
        .with_exponent("r", r)
        .with_grid(&stf.grid))
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn grid_steps() {
        let g = make_grid(1, 16.0, 1024).unwrap();
        assert_eq!(g.step(), 0.03125);
        let g2 = make_grid(2, 8.0, 64).unwrap();
        assert_eq!(g2.len(), 64 * 64);
        assert!((g2.freq_step() - PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(make_grid(1, 16.0, 1000).is_err());
        assert!(make_grid(4, 16.0, 64).is_err());
        assert!(make_grid(0, 16.0, 64).is_err());
        assert!(make_grid(1, 0.0, 64).is_err());
        assert!(make_grid(1, 1.0, 4).is_err());
    }

    #[test]
    fn frequency_lattice_has_single_unpaired_mode() {
        let g = make_grid(1, 4.0, 16).unwrap();
        let js: Vec<i64> = (0..16).map(|k| g.freq_index(k)).collect();
        assert_eq!(*js.iter().min().unwrap(), -8);
        assert_eq!(*js.iter().max().unwrap(), 7);
        for &j in &js {
            if j != -8 {
                assert!(js.contains(&-j));
            }
        }
    }

    #[test]
    fn constant_field_has_zero_frequency_spectrum() {
        let g = make_grid(2, 4.0, 16).unwrap();
        let f = SampledField::from_fn(g, "one", |_| Complex64::new(1.0, 0.0));
        let s = transform(&f, Direction::Forward).unwrap();
        for (k, v) in s.values.iter().enumerate() {
            if k == 0 {
                assert!((v.re - 64.0).abs() < 1e-10, "{v}");
            } else {
                assert!(v.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn pure_mode_has_single_coefficient() {
        let g = make_grid(1, 8.0, 64).unwrap();
        let j = 5;
        let xi = j as f64 * g.freq_step();
        let f = SampledField::from_fn(g, "mode", |x| Complex64::from_polar(1.0, xi * x[0]));
        let s = transform(&f, Direction::Forward).unwrap();
        for (k, v) in s.values.iter().enumerate() {
            if g.freq_index(k) == j {
                // Δx·N = 2L
                assert!((v - Complex64::new(16.0, 0.0)).norm() < 1e-10, "{v}");
            } else {
                assert!(v.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn gaussian_spectrum_matches_continuum_transform() {
        let g = make_grid(1, 16.0, 256).unwrap();
        let f = SampledField::from_fn(g, "gauss", |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let s = transform(&f, Direction::Forward).unwrap();
        for k in 0..g.points() {
            let xi = g.freq(k);
            let exact = PI.sqrt() * (-xi * xi / 4.0).exp();
            assert!((s.values[k].re - exact).abs() < 1e-12);
            assert!(s.values[k].im.abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        for (dim, n) in [(1usize, 64usize), (2, 16), (3, 8)] {
            let g = make_grid(dim, 3.0, n).unwrap();
            let f = random_field(g, 7 + dim as u64);
            let s = transform(&f, Direction::Forward).unwrap();
            let back = transform(&s, Direction::Inverse).unwrap();
            let err: f64 = f
                .values
                .iter()
                .zip(&back.values)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let scale: f64 = f.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!(err / scale < 1e-12);
            let l2 = f.l2_norm();
            assert!((spectral_l2(&s) - l2).abs() / l2 < 1e-12);
        }
    }

    #[test]
    fn lebesgue_basic_cases() {
        let g = make_grid(1, 4.0, 256).unwrap();
        let cube = SampledField::from_fn(g, "cube", |x| {
            Complex64::new(if (-0.5..0.5).contains(&x[0]) { 1.0 } else { 0.0 }, 0.0)
        });
        let n2 = lebesgue_norm(&cube, 2.0).unwrap().value;
        assert!((n2 - 1.0).abs() <= g.step());
        let zero = SampledField::zeros(g, "zero");
        assert_eq!(lebesgue_norm(&zero, 3.0).unwrap().value, 0.0);
        assert!(lebesgue_norm(&zero, 0.5).is_err());
        let inf = lebesgue_norm(&cube, f64::INFINITY).unwrap().value;
        assert_eq!(inf, 1.0);
    }

    #[test]
    fn lebesgue_agrees_with_refined_direct_sum() {
        // Smooth random profile sampled at N and 2N; the Riemann sums agree.
        let profile = |x: f64| {
            let mut v = 0.0;
            for (k, (a, b)) in [(0.7, 0.2), (-0.3, 1.1), (0.5, -0.4)].iter().enumerate() {
                v += a * ((k as f64 + 1.0) * x).cos() + b * ((k as f64 + 0.5) * x).sin();
            }
            Complex64::new(v * (-x * x / 8.0).exp(), 0.0)
        };
        let coarse = make_grid(1, 16.0, 512).unwrap();
        let fine = make_grid(1, 16.0, 1024).unwrap();
        let a = lebesgue_norm(&SampledField::from_fn(coarse, "c", |x| profile(x[0])), 3.0).unwrap();
        let direct: f64 = (0..fine.points())
            .map(|i| profile(fine.coord(i)).norm().powi(3) * fine.step())
            .sum::<f64>()
            .powf(1.0 / 3.0);
        assert!((a.value - direct).abs() / direct < 1e-3);
    }

    #[test]
    fn mixed_norm_cases() {
        let g = make_grid(1, 4.0, 64).unwrap();
        let f = random_field(g, 3);
        let single = SpaceTimeField::new(g, vec![0.3], vec![f.clone()]).unwrap();
        let spatial = lebesgue_norm(&f, 6.0).unwrap().value;
        let m = mixed_lebesgue_norm(&single, 3.0, 6.0).unwrap().value;
        assert!((m - spatial).abs() < 1e-12 * spatial);

        let times: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let constant =
            SpaceTimeField::new(g, times.clone(), vec![f.clone(); times.len()]).unwrap();
        let m4 = mixed_lebesgue_norm(&constant, 4.0, 6.0).unwrap().value;
        assert!((m4 - spatial).abs() < 1e-12 * spatial);

        // q = r = 2 is the weighted flattened L² norm.
        let slices: Vec<SampledField> = (0..times.len()).map(|i| random_field(g, 100 + i as u64)).collect();
        let stf = SpaceTimeField::new(g, times.clone(), slices).unwrap();
        let w = stf.time_weights();
        let flat: f64 = stf
            .slices
            .iter()
            .zip(&w)
            .map(|(s, wi)| wi * s.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.step())
            .sum::<f64>()
            .sqrt();
        let m2 = mixed_lebesgue_norm(&stf, 2.0, 2.0).unwrap().value;
        assert!((m2 - flat).abs() < 1e-12 * flat);
    }

    #[test]
    fn space_time_validation() {
        let g = make_grid(1, 4.0, 16).unwrap();
        let f = SampledField::zeros(g, "z");
        assert!(SpaceTimeField::new(g, vec![1.0, 0.5], vec![f.clone(), f.clone()]).is_err());
        assert!(SpaceTimeField::new(g, vec![], vec![]).is_err());
    }

    #[test]
    fn boundary_mass_guard() {
        let g = make_grid(1, 8.0, 128).unwrap();
        let centered = SampledField::from_fn(g, "c", |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        assert!(centered.periodization_warning().is_none());
        let wide = SampledField::from_fn(g, "w", |x| Complex64::new((-x[0] * x[0] / 40.0).exp(), 0.0));
        assert!(wide.periodization_warning().is_some());
    }
}
