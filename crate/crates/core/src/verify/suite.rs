//! Seeded property suite for the amalgam-norm identities and inequalities.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exponents::{q, Exponent};
use crate::grid::{lebesgue_norm, make_grid, GridSpec, SampledField, SpaceTimeField};
use crate::norm::format_exponent;
use crate::verify::generators::{band_limited, gaussian, random_field, random_phase, rng, spike};
use crate::wiener::{
    amalgam_norm, holder_pairing, inclusion_check, interpolate_exponents, local_amalgam_norms,
    weak_lorentz_value, TimeWindow, WindowSpec,
};
use crate::Result;

/// Deliberate corruption of the norm under test, used to check that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Mutation {
    /// Multiply every amalgam norm by this factor.
    ScaleNorm(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest `lhs / rhs` (inequalities) or relative error (identities).
    pub worst: f64,
    pub counterexample: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub corpus: usize,
    pub outcomes: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }
}

const IDENTITY_TOL: f64 = 1e-10;
const ROUNDING: f64 = 1e-12;
const EXPONENTS: [f64; 7] = [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY];

struct Ctx {
    grid: GridSpec,
    st_grid: GridSpec,
    times: Vec<f64>,
    window: WindowSpec,
    scale: f64,
}

impl Ctx {
    fn norm(&self, f: &SampledField, p: f64, q: f64) -> Result<f64> {
        Ok(amalgam_norm(f, p, q, &self.window)?.value * self.scale)
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    failures: usize,
    worst: f64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            trials: 0,
            failures: 0,
            worst: 0.0,
            counterexample: None,
        }
    }

    /// Records `lhs ≤ rhs` up to rounding.
    fn le(&mut self, lhs: f64, rhs: f64, what: impl FnOnce() -> String) {
        self.trials += 1;
        let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
        self.worst = self.worst.max(ratio);
        if !(lhs <= rhs * (1.0 + ROUNDING) + f64::MIN_POSITIVE) {
            self.fail(format!("{} (lhs = {lhs:e}, rhs = {rhs:e})", what()));
        }
    }

    /// Records `a ≈ b` to relative `IDENTITY_TOL`.
    fn eq(&mut self, a: f64, b: f64, what: impl FnOnce() -> String) {
        self.trials += 1;
        let scale = a.abs().max(b.abs());
        let rel = if scale == 0.0 { 0.0 } else { (a - b).abs() / scale };
        self.worst = self.worst.max(rel);
        if !(rel <= IDENTITY_TOL) {
            self.fail(format!("{} ({a:e} vs {b:e})", what()));
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failures += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(msg);
        }
    }

    fn finish(self) -> PropertyOutcome {
        PropertyOutcome {
            name: self.name.to_string(),
            trials: self.trials,
            failures: self.failures,
            worst: self.worst,
            counterexample: self.counterexample,
        }
    }
}

fn pick(r: &mut ChaCha8Rng) -> f64 {
    EXPONENTS[r.random_range(0..EXPONENTS.len())]
}

fn pick_finite(r: &mut ChaCha8Rng) -> f64 {
    [1.25, 1.5, 2.0, 3.0, 4.0, 8.0][r.random_range(0..6)]
}

fn corpus_field(ctx: &Ctx, seed: u64, i: usize) -> SampledField {
    let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
    match i % 3 {
        0 => random_field(ctx.grid, s),
        1 => band_limited(ctx.grid, 4.0, s),
        _ => {
            let mut r = rng(s);
            let c = r.random_range(-4.0..4.0);
            let w = r.random_range(0.2..2.0);
            gaussian(ctx.grid, w, &[c]).scaled(random_phase(&mut r))
        }
    }
}

fn label(f: &SampledField, exps: &[(&str, f64)]) -> String {
    let e: Vec<String> = exps.iter().map(|(n, p)| format!("{n}={}", format_exponent(*p))).collect();
    format!("{} with {}", f.label, e.join(", "))
}

fn diagonal(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("diagonal W(L^p,L^p) = L^p");
    let mut r = rng(seed ^ 0x11);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let p = pick(&mut r);
        let a = ctx.norm(&f, p, p)?;
        let b = lebesgue_norm(&f, p)?.value;
        t.eq(a, b, || label(&f, &[("p", p)]));
    }
    Ok(t.finish())
}

fn inclusion(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("inclusion");
    let mut r = rng(seed ^ 0x22);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let (a, b) = (pick(&mut r), pick(&mut r));
        let (c, d) = (pick(&mut r), pick(&mut r));
        let (p1, p2) = (a.max(b), a.min(b));
        let (q1, q2) = (c.min(d), c.max(d));
        if ctx.scale == 1.0 {
            let rep = inclusion_check(&f, p1, q1, p2, q2, &ctx.window)?;
            t.le(rep.lhs, rep.rhs, || label(&f, &[("p1", p1), ("q1", q1), ("p2", p2), ("q2", q2)]));
        } else {
            let lhs = ctx.norm(&f, p2, q2)?;
            let rhs = ctx.norm(&f, p1, q1)?;
            t.le(lhs, rhs, || label(&f, &[("p1", p1), ("q1", q1), ("p2", p2), ("q2", q2)]));
        }
    }
    Ok(t.finish())
}

fn random_stf(ctx: &Ctx, seed: u64) -> Result<SpaceTimeField> {
    crate::verify::generators::random_spacetime(ctx.st_grid, &ctx.times, seed)
}

fn spike_stf(ctx: &Ctx, r: &mut ChaCha8Rng) -> Result<SpaceTimeField> {
    let g = ctx.st_grid;
    let slices = ctx
        .times
        .iter()
        .map(|_| {
            if r.random_bool(0.3) {
                let a = random_phase(r) * r.random_range(0.0..10.0);
                spike(g, r.random_range(0..g.len()), a)
            } else {
                SampledField::zeros(g, "0")
            }
        })
        .collect();
    SpaceTimeField::new(g, ctx.times.clone(), slices)
}

fn holder(ctx: &Ctx, seed: u64, m: usize, spikes: bool) -> Result<PropertyOutcome> {
    let mut t = Tally::new(if spikes { "Hölder pairing, spike corpus" } else { "Hölder pairing" });
    let mut r = rng(seed ^ if spikes { 0x44 } else { 0x33 });
    let tw = TimeWindow::unit_cubes();
    for i in 0..m {
        let (f, g) = if spikes {
            (spike_stf(ctx, &mut r)?, spike_stf(ctx, &mut r)?)
        } else {
            let s = seed.wrapping_mul(31).wrapping_add(2 * i as u64);
            (random_stf(ctx, s)?, random_stf(ctx, s + 1)?)
        };
        let (qt, q, rt, rr) = (pick(&mut r), pick(&mut r), pick(&mut r), pick(&mut r));
        let rep = holder_pairing(&f, &g, qt, q, rt, rr, &tw, &ctx.window)?;
        let bound = rep.bound * ctx.scale * ctx.scale;
        t.le(rep.pairing, bound, || {
            format!(
                "pair {i}: qt={}, q={}, rt={}, r={}",
                format_exponent(qt),
                format_exponent(q),
                format_exponent(rt),
                format_exponent(rr)
            )
        });
    }
    Ok(t.finish())
}

/// The element attaining `⟨f, g⟩ = ‖f‖_{W(p,q)}‖g‖_{W(p',q')}` on a cube partition.
fn extremizer(ctx: &Ctx, f: &SampledField, p: f64, q: f64) -> Result<SampledField> {
    let local = local_amalgam_norms(f, p, &ctx.window)?;
    let stride = ctx.grid.steps_in(ctx.window.step).expect("unit cubes fit the grid");
    let top = local.iter().cloned().fold(0.0, f64::max);
    let floor = 1e-30 * top;
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let a = local[i / stride];
            if v.norm() == 0.0 || a <= floor {
                Complex64::new(0.0, 0.0)
            } else {
                v / v.norm() * v.norm().powf(p - 1.0) * (a / top).powf(q - p)
            }
        })
        .collect();
    SampledField::new(ctx.grid, values, "extremizer")
}

fn duality(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("duality extremizer saturates");
    let mut r = rng(seed ^ 0x55);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let (p, q) = (pick_finite(&mut r), pick_finite(&mut r));
        let g = extremizer(ctx, &f, p, q)?;
        let pairing = f.inner(&g)?.norm();
        let prod = ctx.norm(&f, p, q)? * ctx.norm(&g, p / (p - 1.0), q / (q - 1.0))?;
        t.eq(pairing, prod, || label(&f, &[("p", p), ("q", q)]));
    }
    Ok(t.finish())
}

fn periodic_convolution(f: &SampledField, g: &SampledField) -> SampledField {
    let n = f.grid.points();
    let dx = f.grid.step();
    let values = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f.values[j] * g.values[(i + n - j) % n])
                .sum::<Complex64>()
                * dx
        })
        .collect();
    SampledField {
        grid: f.grid,
        values,
        label: "convolution".into(),
    }
}

/// Reciprocal pair `(1/a, 1/b)` with `1/a + 1/b ≥ 1`, in steps of 1/4.
fn young_pair(r: &mut ChaCha8Rng) -> (f64, f64, f64) {
    loop {
        let a = r.random_range(0..=4) as f64 / 4.0;
        let b = r.random_range(0..=4) as f64 / 4.0;
        if a + b >= 1.0 {
            let inv = |x: f64| if x == 0.0 { f64::INFINITY } else { 1.0 / x };
            return (inv(a), inv(b), inv(a + b - 1.0));
        }
    }
}

fn young(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("convolution (constant 2^n)");
    let mut r = rng(seed ^ 0x66);
    let c = 2f64.powi(ctx.grid.dim() as i32);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let g = corpus_field(ctx, seed.wrapping_add(17), i + 1);
        let (p0, p1, p2) = young_pair(&mut r);
        let (q0, q1, q2) = young_pair(&mut r);
        let h = periodic_convolution(&f, &g);
        let lhs = ctx.norm(&h, p2, q2)?;
        let rhs = c * ctx.norm(&f, p0, q0)? * ctx.norm(&g, p1, q1)?;
        t.le(lhs, rhs, || {
            label(&f, &[("p0", p0), ("q0", q0), ("p1", p1), ("q1", q1), ("p2", p2), ("q2", q2)])
        });
    }
    Ok(t.finish())
}

fn homogeneity(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("homogeneity");
    let mut r = rng(seed ^ 0x77);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let (p, q) = (pick(&mut r), pick(&mut r));
        let c = random_phase(&mut r) * r.random_range(0.1..10.0);
        let a = ctx.norm(&f.scaled(c), p, q)?;
        let b = c.norm() * ctx.norm(&f, p, q)?;
        t.eq(a, b, || label(&f, &[("p", p), ("q", q)]));
    }
    Ok(t.finish())
}

fn triangle(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("triangle inequality");
    let mut r = rng(seed ^ 0x88);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let g = corpus_field(ctx, seed.wrapping_add(29), i + 2);
        let (p, q) = (pick(&mut r), pick(&mut r));
        let sum = SampledField {
            grid: f.grid,
            values: f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect(),
            label: "f+g".into(),
        };
        let lhs = ctx.norm(&sum, p, q)?;
        let rhs = ctx.norm(&f, p, q)? + ctx.norm(&g, p, q)?;
        t.le(lhs, rhs, || label(&f, &[("p", p), ("q", q)]));
    }
    Ok(t.finish())
}

fn weak_vs_strong(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("weak l^{q,inf} <= l^q");
    let mut r = rng(seed ^ 0x99);
    for i in 0..m {
        let f = corpus_field(ctx, seed, i);
        let (p, q) = (pick(&mut r), pick_finite(&mut r));
        let local = local_amalgam_norms(&f, p, &ctx.window)?;
        let weak = weak_lorentz_value(&local, q);
        let strong = local.iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q);
        t.le(weak, strong, || label(&f, &[("p", p), ("q", q)]));
    }
    Ok(t.finish())
}

fn to_exponent(p: f64) -> Exponent {
    if p.is_infinite() {
        Exponent::infinity()
    } else {
        Exponent::from_recip(Ratio::approximate_float(1.0 / p).expect("finite reciprocal"))
            .expect("valid exponent")
    }
}

fn interpolation(ctx: &Ctx, seed: u64, m: usize) -> Result<PropertyOutcome> {
    let mut t = Tally::new("interpolation");
    let mut r = rng(seed ^ 0xaa);
    for i in 0..m {
        let (p0, q0, p1) = (pick(&mut r), pick(&mut r), pick(&mut r));
        let q1 = pick_finite(&mut r);
        let theta = q(r.random_range(1..8), 8);
        let (e0, f0, e1, f1) = (to_exponent(p0), to_exponent(q0), to_exponent(p1), to_exponent(q1));
        let (p, qq) = interpolate_exponents(e0, f0, e1, f1, theta)?;
        let one = Ratio::<i128>::one();
        let exact = p.recip() == theta * e0.recip() + (one - theta) * e1.recip()
            && qq.recip() == theta * f0.recip() + (one - theta) * f1.recip()
            && !p.recip().is_zero() | (e0.recip().is_zero() && e1.recip().is_zero());
        t.check(exact, || format!("theta={theta}: ({e0},{f0}) and ({e1},{f1}) gave ({p},{qq})"));
        let f = corpus_field(ctx, seed, i);
        let th = theta.to_f64().expect("small rational");
        let lhs = ctx.norm(&f, p.to_f64(), qq.to_f64())?;
        let rhs = ctx.norm(&f, p0, q0)?.powf(th) * ctx.norm(&f, p1, q1)?.powf(1.0 - th);
        t.le(lhs, rhs, || label(&f, &[("p0", p0), ("q0", q0), ("p1", p1), ("q1", q1)]) + &format!(", theta={theta}"));
    }
    Ok(t.finish())
}

/// Runs every property on `corpus` seeded fields; deterministic in `seed`.
pub fn property_suite(seed: u64, corpus: usize, mutation: Option<Mutation>) -> Result<SuiteReport> {
    let ctx = Ctx {
        grid: make_grid(1, 8.0, 128)?,
        st_grid: make_grid(1, 4.0, 32)?,
        times: (0..=12).map(|k| k as f64 * 0.25).collect(),
        window: WindowSpec::unit_cubes(),
        scale: match mutation {
            Some(Mutation::ScaleNorm(c)) => c,
            None => 1.0,
        },
    };
    let spike_count = corpus.div_ceil(5);
    type Job<'a> = Box<dyn Fn() -> Result<PropertyOutcome> + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| diagonal(&ctx, seed, corpus)),
        Box::new(|| inclusion(&ctx, seed, corpus)),
        Box::new(|| holder(&ctx, seed, corpus, false)),
        Box::new(|| holder(&ctx, seed, spike_count, true)),
        Box::new(|| duality(&ctx, seed, corpus)),
        Box::new(|| young(&ctx, seed, corpus.div_ceil(5))),
        Box::new(|| homogeneity(&ctx, seed, corpus)),
        Box::new(|| triangle(&ctx, seed, corpus)),
        Box::new(|| weak_vs_strong(&ctx, seed, corpus)),
        Box::new(|| interpolation(&ctx, seed, corpus)),
    ];
    let outcomes = crate::par::map_range(jobs.len(), |i| jobs[i]())
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        seed,
        corpus,
        outcomes,
    })
}
