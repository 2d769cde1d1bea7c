//! Command bodies. Each returns `Ok(true)` on success, `Ok(false)` when an
//! asserted invariant failed, and `Err` on usage or input errors.

use std::collections::BTreeMap;
use std::io::Write;

use amalgam_core::exponents::{
    check, predicted_kernel_decay, sample_region, Field, RegionQuery, Verdict,
};
use amalgam_core::grid::{lebesgue_norm, transform};
use amalgam_core::io::{fmt_f64, read_field, write_container, CsvTable};
use amalgam_core::propagator::{
    duality_sides, evolve_series, hsigma_norm, kernel_amalgam_profile, log_times, DecayProfile,
    KernelSchedule,
};
use amalgam_core::verify::generators::{
    band_limited, gaussian, mexican_hat, random_field, random_spacetime, symmetric_log_times,
};
use amalgam_core::verify::{
    bilinear_form, fit_decay, frequency_sweep, hls_refinement, property_suite, strichartz_ratio,
    RatioOptions,
};
use amalgam_core::wiener::amalgam_norm;
use amalgam_core::{Direction, SampledField};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::run::Run;

type Outcome = Result<bool, String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn params<T: Serialize>(a: &T) -> Value {
    serde_json::to_value(a).expect("arguments serialize")
}

fn sigma_value(s: &str) -> Result<f64, String> {
    let q = amalgam_core::exponents::parse_rational(s).map_err(err)?;
    Ok(*q.numer() as f64 / *q.denom() as f64)
}

/// Runs `body` between the opening and closing manifest writes.
fn with_run<T: Serialize>(
    command: &str,
    args: &T,
    out: Option<&std::path::Path>,
    body: impl FnOnce(&mut Run) -> Result<(bool, Value), String>,
) -> Outcome {
    let mut run = Run::start(command, params(args), out)?;
    match body(&mut run) {
        Ok((passed, summary)) => {
            let text = serde_json::to_string_pretty(&summary).map_err(err)?;
            // a closed pipe on stdout is not an error of the run
            let _ = writeln!(std::io::stdout(), "{text}");
            run.finish(passed, summary)
        }
        Err(e) => Err(run.abort(e)),
    }
}

pub fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Norm(a) => norm(&a),
        Command::Evolve(a) => evolve(&a),
        Command::KernelProfile(a) => kernel_profile(&a),
        Command::FitDecay(a) => fit(&a),
        Command::Region(a) => region(&a),
        Command::CheckTuple(a) => check_tuple(&a),
        Command::Ratio(a) => ratio(&a),
        Command::Suite(a) => suite(&a),
        Command::Hls(a) => hls(&a),
        Command::Bilinear(a) => bilinear(&a),
    }
}

fn datum(grid: &GridArgs, d: &DatumArgs) -> Result<SampledField, String> {
    if let Some(path) = &d.input {
        return read_field(path).map_err(err);
    }
    let g = grid.grid().map_err(err)?;
    let center = vec![0.0; g.dim()];
    Ok(match d.datum {
        DatumKind::MexicanHat => mexican_hat(g, d.width),
        DatumKind::Gaussian => gaussian(g, d.width, &center),
        DatumKind::BandLimited => band_limited(g, d.k_max, d.seed),
        DatumKind::Random => random_field(g, d.seed),
    })
}

fn norm(a: &NormArgs) -> Outcome {
    with_run("norm", a, a.common.out.as_deref(), |run| {
        let f = datum(&a.grid, &a.datum)?;
        run.grid(&f.grid);
        run.seed(a.datum.seed);
        let window = a.window.spec().map_err(err)?;
        let sigma = sigma_value(&a.sigma)?;
        let results = [
            lebesgue_norm(&f, a.p.to_f64()).map_err(err)?,
            amalgam_norm(&f, a.p.to_f64(), a.q.to_f64(), &window).map_err(err)?,
            hsigma_norm(&f, sigma).map_err(err)?,
        ];
        let mut table = CsvTable::new(&["space", "value", "est_error", "divergent"]);
        for r in &results {
            table.push(&[r.space.clone(), fmt_f64(r.value), fmt_f64(r.est_error), r.divergent.to_string()]);
        }
        run.write_csv("results.csv", &table)?;
        let warning = f.periodization_warning();
        Ok((true, json!({ "norms": results, "periodization_warning": warning })))
    })
}

fn evolve(a: &EvolveArgs) -> Outcome {
    with_run("evolve", a, a.common.out.as_deref(), |run| {
        let f = datum(&a.grid, &a.datum)?;
        run.grid(&f.grid);
        run.seed(a.datum.seed);
        let sigma = sigma_value(&a.sigma)?;
        let u = evolve_series(&f, &a.times, sigma).map_err(err)?;
        let mut table = CsvTable::new(&["t", "l2", "sup", "boundary_mass"]);
        for (t, s) in u.times.iter().zip(&u.slices) {
            table.push(&[fmt_f64(*t), fmt_f64(s.l2_norm()), fmt_f64(s.max_abs()), fmt_f64(s.boundary_mass_fraction())]);
        }
        run.write_csv("results.csv", &table)?;
        if a.save {
            write_container(&run.dir().join("field.bin"), &u).map_err(err)?;
            run.add_output("field.bin");
        }
        // spectral mass is conserved when σ = 0
        let mass: Vec<f64> = u
            .slices
            .iter()
            .map(|s| transform(s, Direction::Forward).map(|h| amalgam_core::grid::spectral_l2(&h)))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        Ok((true, json!({ "instants": u.times.len(), "spectral_l2": mass })))
    })
}

fn profile(a: &ProfileArgs) -> Result<DecayProfile, String> {
    let grid = amalgam_core::make_grid(a.n as usize, a.half_length, a.points).map_err(err)?;
    let window = a.window_spec().map_err(err)?;
    let times = log_times(a.t_min, a.t_max, a.per_decade).map_err(err)?;
    kernel_amalgam_profile(
        &grid,
        sigma_value(&a.sigma)?,
        a.rt.to_f64(),
        a.r.to_f64(),
        &window,
        &times,
        &KernelSchedule::default(),
    )
    .map_err(err)
}

fn profile_table(p: &DecayProfile) -> CsvTable {
    let mut table = CsvTable::new(&["t", "value", "est_error"]);
    for ((t, v), e) in p.times.iter().zip(&p.values).zip(&p.est_errors) {
        table.push(&[fmt_f64(*t), fmt_f64(*v), fmt_f64(*e)]);
    }
    table
}

fn kernel_profile(a: &ProfileArgs) -> Outcome {
    with_run("kernel-profile", a, a.common.out.as_deref(), |run| {
        let p = profile(a)?;
        run.write_csv("results.csv", &profile_table(&p))?;
        let sigma = amalgam_core::exponents::parse_rational(&a.sigma).map_err(err)?;
        let pred = predicted_kernel_decay(a.n, sigma, a.rt, a.r);
        Ok((true, json!({ "points": p.times.len(), "converged": p.converged, "predicted": pred })))
    })
}

fn fit(a: &FitArgs) -> Outcome {
    let pa = &a.profile;
    with_run("fit-decay", a, pa.common.out.as_deref(), |run| {
        let p = profile(pa)?;
        run.write_csv("profile.csv", &profile_table(&p))?;
        let sigma = amalgam_core::exponents::parse_rational(&pa.sigma).map_err(err)?;
        let pred = predicted_kernel_decay(pa.n, sigma, pa.rt, pa.r);
        let (small, large) = fit_decay(&p, Some(&pred)).map_err(err)?;
        let mut table = CsvTable::new(&["regime", "slope", "predicted", "slope_error", "r_squared", "points"]);
        let mut passed = p.converged;
        for f in [&small, &large] {
            let e = f.slope_error.unwrap_or(f64::INFINITY);
            passed &= e <= a.tolerance;
            table.push(&[
                format!("{:?}", f.regime),
                fmt_f64(f.slope),
                fmt_f64(f.predicted.unwrap_or(f64::NAN)),
                fmt_f64(e),
                fmt_f64(f.r_squared),
                f.points.to_string(),
            ]);
        }
        run.write_csv("results.csv", &table)?;
        Ok((
            passed,
            json!({ "small_t": small, "large_t": large, "tolerance": a.tolerance, "within_tolerance": passed, "extrapolated": pred.extrapolated }),
        ))
    })
}

fn region(a: &RegionArgs) -> Outcome {
    with_run("region", a, a.common.out.as_deref(), |run| {
        let mut fixed = BTreeMap::new();
        for (f, e) in [(Field::Qt, a.qt), (Field::Rt, a.rt), (Field::Q, a.q), (Field::R, a.r)] {
            if let Some(e) = e {
                fixed.insert(f, e);
            }
        }
        let query = RegionQuery {
            set: a.set,
            n: a.n,
            sigma: amalgam_core::exponents::parse_rational(&a.sigma).map_err(err)?,
            fixed,
            free: a.free.clone(),
            solve: a.solve,
            resolution: amalgam_core::exponents::parse_rational(&a.resolution).map_err(err)?,
        };
        let scan = sample_region(&query).map_err(err)?;
        let mut table = CsvTable::new(&["qt", "rt", "q", "r"]);
        for t in &scan.accepted {
            table.push(&[t.qt.to_string(), t.rt.to_string(), t.q.to_string(), t.r.to_string()]);
        }
        run.write_csv("results.csv", &table)?;
        let mut header: Vec<String> = a.free.iter().map(|f| format!("1/{f}")).collect();
        header.extend(["verdict".to_string(), "boundary".to_string()]);
        let mut mesh = CsvTable::new(&header);
        for m in &scan.mesh {
            let mut row = m.coords.clone();
            row.push(format!("{:?}", m.verdict).to_lowercase());
            row.push(m.boundary.to_string());
            mesh.push(&row);
        }
        run.write_csv("mesh.csv", &mesh)?;
        let boundary = scan.mesh.iter().filter(|m| m.boundary).count();
        Ok((true, json!({ "mesh_points": scan.mesh.len(), "accepted": scan.accepted.len(), "boundary": boundary })))
    })
}

fn check_tuple(a: &CheckArgs) -> Outcome {
    with_run("check-tuple", a, a.common.out.as_deref(), |run| {
        let t = a.tuple.tuple(a.n, &a.sigma).map_err(err)?;
        let rep = check(a.set, &t);
        let mut table = CsvTable::new(&["constraint", "passed", "slack"]);
        for c in &rep.constraints {
            table.push(&[c.name.clone(), c.passed.to_string(), c.slack.map(|s| s.to_string()).unwrap_or_default()]);
        }
        run.write_csv("results.csv", &table)?;
        let verdict = match rep.verdict {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        };
        Ok((true, json!({ "verdict": verdict, "report": rep, "violations": rep.violations() })))
    })
}

fn ratio(a: &RatioArgs) -> Outcome {
    with_run("ratio", a, a.common.out.as_deref(), |run| {
        let f = datum(&a.grid, &a.datum)?;
        run.grid(&f.grid);
        run.seed(a.datum.seed);
        let tuple = a.tuple.tuple(a.grid.n as u32, &a.sigma).map_err(err)?;
        let opts = RatioOptions {
            times: symmetric_log_times(a.t_min, a.t_max, a.per_decade, true).map_err(err)?,
            weak: a.weak,
            ..RatioOptions::default()
        };
        let mut table = CsvTable::new(&["label", "ratio"]);
        let summary = match a.j_max {
            Some(j) => {
                let sweep = frequency_sweep(&f, &tuple, j, &opts).map_err(err)?;
                for (l, r) in sweep.labels.iter().zip(&sweep.ratios) {
                    table.push(&[l.clone(), fmt_f64(*r)]);
                }
                json!({ "max": sweep.max, "median": sweep.median, "spread": sweep.spread })
            }
            None => {
                let r = strichartz_ratio(&f, &tuple, &opts).map_err(err)?;
                table.push(&["datum".to_string(), fmt_f64(r.ratio)]);
                json!({ "ratio": r.ratio, "divergent": r.divergent, "lhs": r.lhs, "rhs": r.rhs })
            }
        };
        run.write_csv("results.csv", &table)?;
        Ok((true, summary))
    })
}

fn suite(a: &SuiteArgs) -> Outcome {
    with_run("suite", a, a.common.out.as_deref(), |run| {
        run.seed(a.seed);
        let rep = property_suite(a.seed, a.corpus, None).map_err(err)?;
        let mut table = CsvTable::new(&["property", "trials", "failures", "worst"]);
        for o in &rep.outcomes {
            table.push(&[o.name.clone(), o.trials.to_string(), o.failures.to_string(), fmt_f64(o.worst)]);
        }
        run.write_csv("results.csv", &table)?;
        let failed: Vec<_> = rep.outcomes.iter().filter(|o| !o.passed()).collect();
        Ok((rep.passed(), json!({ "properties": rep.outcomes.len(), "failed": failed })))
    })
}

fn hls(a: &HlsArgs) -> Outcome {
    with_run("hls", a, a.common.out.as_deref(), |run| {
        run.seed(a.seed);
        let rep = hls_refinement(a.p, a.alpha, a.trials, a.seed, a.spacing).map_err(err)?;
        let mut table = CsvTable::new(&["trial", "coarse", "fine"]);
        for (i, (c, f)) in rep.coarse.ratios.iter().zip(&rep.fine.ratios).enumerate() {
            table.push(&[i.to_string(), fmt_f64(*c), fmt_f64(*f)]);
        }
        run.write_csv("results.csv", &table)?;
        Ok((
            rep.stable,
            json!({
                "q": rep.coarse.q,
                "max_ratio_coarse": rep.coarse.max_ratio,
                "max_ratio_fine": rep.fine.max_ratio,
                "change": rep.change,
                "stable": rep.stable,
            }),
        ))
    })
}

fn bilinear(a: &BilinearArgs) -> Outcome {
    with_run("bilinear", a, a.common.out.as_deref(), |run| {
        let g = amalgam_core::make_grid(a.n, a.half_length, a.points).map_err(err)?;
        run.grid(&g);
        run.seed(a.seed);
        let sigma = sigma_value(&a.sigma)?;
        let mut table = CsvTable::new(&["pair", "duality_rel_diff", "bilinear_rel_diff"]);
        let (mut worst_dual, mut worst_bi) = (0.0f64, 0.0f64);
        for k in 0..a.pairs {
            let base = a.seed.wrapping_add(3 * k);
            let f = random_spacetime(g, &a.times, base).map_err(err)?;
            let h = random_spacetime(g, &a.times, base + 1).map_err(err)?;
            let d = random_field(g, base + 2);
            let (l, r) = duality_sides(&f, &d, sigma).map_err(err)?;
            let dual = (l - r).norm() / l.norm().max(r.norm());
            let bi = bilinear_form(&f, &h, sigma).map_err(err)?.rel_diff;
            worst_dual = worst_dual.max(dual);
            worst_bi = worst_bi.max(bi);
            table.push(&[k.to_string(), fmt_f64(dual), fmt_f64(bi)]);
        }
        run.write_csv("results.csv", &table)?;
        let passed = worst_dual <= a.tolerance && worst_bi <= a.tolerance;
        Ok((passed, json!({ "pairs": a.pairs, "worst_duality": worst_dual, "worst_bilinear": worst_bi, "tolerance": a.tolerance })))
    })
}
