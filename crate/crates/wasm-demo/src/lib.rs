//! Browser bindings: kernel modulus against its bound, kernel decay profiles
//! with fitted slopes, and exponent-region meshes.

use std::collections::BTreeMap;

use amalgam_core::exponents::{
    parse_rational, predicted_kernel_decay, sample_region, ConditionSet, Exponent, Field,
    RegionQuery, Verdict,
};
use amalgam_core::propagator::{kernel_amalgam_profile, kernel_bound, kernel_eval, log_times, KernelSchedule};
use amalgam_core::verify::fit_decay;
use amalgam_core::{make_grid, WindowSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn js<E: ToString>(e: E) -> String {
    e.to_string()
}

fn rational_f64(s: &str) -> Result<f64, String> {
    let q = parse_rational(s).map_err(js)?;
    Ok(*q.numer() as f64 / *q.denom() as f64)
}

/// `[x, |K_t(x)|, bound]` triples, flattened, for `x` in `[0, x_max]`.
/// The bound is NaN where it is undefined (`σ = 0`).
#[wasm_bindgen]
pub fn kernel_modulus(n: usize, sigma: f64, t: f64, x_max: f64, points: usize) -> Result<Vec<f64>, JsValue> {
    kernel_modulus_impl(n, sigma, t, x_max, points).map_err(|e| JsValue::from_str(&e))
}

fn kernel_modulus_impl(n: usize, sigma: f64, t: f64, x_max: f64, points: usize) -> Result<Vec<f64>, String> {
    let points = points.max(2);
    let xs: Vec<f64> = (0..points).map(|i| x_max * i as f64 / (points - 1) as f64).collect();
    let s = kernel_eval(n, sigma, t, &xs, &KernelSchedule::default()).map_err(js)?;
    let mut out = Vec::with_capacity(3 * points);
    for (x, v) in xs.iter().zip(&s.values) {
        out.extend([*x, v.norm(), kernel_bound(n, 2.0 * sigma, t, *x).unwrap_or(f64::NAN)]);
    }
    Ok(out)
}

/// Kernel amalgam norms over log-spaced times with fitted and predicted
/// slopes, as JSON. `rt` and `r` accept `inf`.
#[wasm_bindgen]
pub fn decay_profile(sigma: &str, rt: &str, r: &str, t_min: f64, t_max: f64, per_decade: usize) -> Result<String, JsValue> {
    decay_profile_impl(sigma, rt, r, t_min, t_max, per_decade).map_err(|e| JsValue::from_str(&e))
}

fn decay_profile_impl(sigma: &str, rt: &str, r: &str, t_min: f64, t_max: f64, per_decade: usize) -> Result<String, String> {
    let sigma_q = parse_rational(sigma).map_err(js)?;
    let rt_e: Exponent = rt.parse().map_err(js)?;
    let r_e: Exponent = r.parse().map_err(js)?;
    let grid = make_grid(1, 16.0, 1024).map_err(js)?;
    let window = WindowSpec::bump(1.0, 1.0).map_err(js)?;
    let times = log_times(t_min, t_max, per_decade).map_err(js)?;
    let p = kernel_amalgam_profile(
        &grid,
        rational_f64(sigma)?,
        rt_e.to_f64(),
        r_e.to_f64(),
        &window,
        &times,
        &KernelSchedule::default(),
    )
    .map_err(js)?;
    let pred = predicted_kernel_decay(1, sigma_q, rt_e, r_e);
    let fits = fit_decay(&p, Some(&pred)).ok();
    Ok(json!({
        "times": p.times,
        "values": p.values,
        "predicted": pred,
        "small_t": fits.as_ref().map(|f| &f.0),
        "large_t": fits.as_ref().map(|f| &f.1),
    })
    .to_string())
}

/// Region mesh as JSON. `fixed` is a comma list such as `rt=inf`, `free`
/// names one or two fields, `solve` may be empty.
#[wasm_bindgen]
pub fn region_mesh(set: &str, n: u32, sigma: &str, fixed: &str, free: &str, solve: &str, resolution: &str) -> Result<String, JsValue> {
    region_mesh_impl(set, n, sigma, fixed, free, solve, resolution).map_err(|e| JsValue::from_str(&e))
}

fn region_mesh_impl(set: &str, n: u32, sigma: &str, fixed: &str, free: &str, solve: &str, resolution: &str) -> Result<String, String> {
    let mut fixed_map = BTreeMap::new();
    for part in fixed.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| js(format!("expected field=value, got '{part}'")))?;
        fixed_map.insert(k.trim().parse::<Field>().map_err(js)?, v.trim().parse::<Exponent>().map_err(js)?);
    }
    let free = free
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<Field>().map_err(js))
        .collect::<Result<Vec<_>, _>>()?;
    let solve = match solve.trim() {
        "" => None,
        s => Some(s.parse::<Field>().map_err(js)?),
    };
    let query = RegionQuery {
        set: set.parse::<ConditionSet>().map_err(js)?,
        n,
        sigma: parse_rational(sigma).map_err(js)?,
        fixed: fixed_map,
        free,
        solve,
        resolution: parse_rational(resolution).map_err(js)?,
    };
    let scan = sample_region(&query).map_err(js)?;
    let points: Vec<_> = scan
        .mesh
        .iter()
        .map(|m| {
            let coords: Vec<f64> = m.coords.iter().map(|c| rational_f64(c).unwrap_or(f64::NAN)).collect();
            json!({ "coords": coords, "accept": m.verdict == Verdict::Accept, "boundary": m.boundary })
        })
        .collect();
    Ok(json!({ "free": query.free, "points": points, "accepted": scan.accepted.len() }).to_string())
}
