//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use amalgam_core::exponents::{
    check, classical_sobolev_line, is_schrodinger_admissible, parse_rational, predicted_kernel_decay, q,
    sample_region, satisfies_cn2, satisfies_corollary, satisfies_prop_kernel, satisfies_theorem,
    ConditionSet, Exponent, ExponentTuple, Field, KernelCase, RegionQuery, Verdict, Q,
};
use amalgam_core::make_grid;
use amalgam_core::propagator::{
    duality_sides, kernel_amalgam_profile, kernel_eval, log_times, DecayProfile, KernelSchedule,
};
use amalgam_core::verify::generators::{random_field, random_spacetime, symmetric_log_times};
use amalgam_core::verify::strichartz::{calibration_profile, perturbed_r};
use amalgam_core::verify::{
    bilinear_form, classical_scaling_sweep, fit_decay, fit_power_law, hls_refinement, local_window_norms,
    pointwise_constant, property_suite, PowerLawInterpolant,
};
use amalgam_core::WindowSpec;

type Outcome = (bool, String);

fn profile(sigma: f64, rt: f64, r: f64, times: &[f64]) -> DecayProfile {
    let grid = make_grid(1, 64.0, 4096).unwrap();
    let window = WindowSpec::bump(1.0, 1.0).unwrap();
    kernel_amalgam_profile(&grid, sigma, rt, r, &window, times, &KernelSchedule::default()).unwrap()
}

fn c1_decay() -> Vec<(String, Outcome)> {
    let times = log_times(0.02, 50.0, 24).unwrap();
    let cases = [
        ("1a", q(3, 10), f64::INFINITY, Exponent::infinity()),
        ("1b", q(3, 10), 10.0, Exponent::int(10)),
        ("1c", q(1, 5), 10.0, Exponent::int(10)),
    ];
    let mut out = Vec::new();
    for (tag, sigma, r, re) in cases {
        let start = Instant::now();
        let s = sigma_f64(sigma);
        let p = profile(s, f64::INFINITY, r, &times);
        let pred = predicted_kernel_decay(1, sigma, Exponent::infinity(), re);
        let (small, large) = fit_decay(&p, Some(&pred)).unwrap();
        let ok = small.slope_error.unwrap() <= 0.05 && large.slope_error.unwrap() <= 0.05 && p.converged;
        let mut detail = format!(
            "sigma={s}, r={r}: slopes {:.4}/{:.4}, predicted {:.4}/{:.4} (tol 0.05), {:.1}s",
            small.slope,
            large.slope,
            small.predicted.unwrap(),
            large.predicted.unwrap(),
            start.elapsed().as_secs_f64()
        );
        if !ok && r.is_finite() {
            let deep = log_times(1e-4, 1e-2, 6).unwrap();
            let q = profile(s, f64::INFINITY, r, &deep);
            let (slope, _, _) = fit_power_law(&q.times, &q.values).unwrap();
            detail.push_str(&format!("; slope on t in [1e-4, 1e-2]: {slope:.4}"));
        }
        out.push((tag.to_string(), (ok, detail)));
    }
    out
}

fn sigma_f64(s: Q) -> f64 {
    *s.numer() as f64 / *s.denom() as f64
}

fn c2_sigma_zero() -> Outcome {
    let mut worst = 0.0f64;
    for n in [1usize, 2] {
        for t in [0.1, 1.0, 10.0] {
            let xs: Vec<f64> = (0..200).map(|i| 0.25 * i as f64).collect();
            let s = kernel_eval(n, 0.0, t, &xs, &KernelSchedule::default()).unwrap();
            let want = (4.0 * PI * t).powf(-(n as f64) / 2.0);
            for v in &s.values {
                worst = worst.max((v.norm() - want).abs() / want);
            }
        }
    }
    (worst <= 1e-6, format!("max relative deviation {worst:.2e} (tol 1e-6), n=1,2, t in {{0.1,1,10}}"))
}

fn c3_pointwise() -> Outcome {
    let sched = KernelSchedule::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for sigma in [0.2, 0.3, 0.45] {
        let a = pointwise_constant(1, sigma, 64.0, 100, (0.05, 50.0), 100, &sched).unwrap();
        let b = pointwise_constant(1, sigma, 64.0, 200, (0.05, 50.0), 200, &sched).unwrap();
        let change = (a.constant / b.constant).max(b.constant / a.constant);
        ok &= a.samples == 10_000 && a.constant.is_finite() && change < 2.0 && a.converged && b.converged;
        parts.push(format!("sigma={sigma}: C={:.4} -> {:.4} (x{change:.3})", a.constant, b.constant));
    }
    (ok, parts.join("; "))
}

fn c4_identities() -> Outcome {
    let g = make_grid(1, 8.0, 128).unwrap();
    let times = vec![-3.0, -1.2, -0.4, 0.0, 0.3, 0.9, 2.0, 4.5];
    let mut worst_dual = 0.0f64;
    let mut worst_bi = 0.0f64;
    for k in 0..100u64 {
        let f = random_spacetime(g, &times, 2 * k).unwrap();
        let h = random_spacetime(g, &times, 2 * k + 1).unwrap();
        let d = random_field(g, 10_000 + k);
        let (l, r) = duality_sides(&f, &d, 0.3).unwrap();
        worst_dual = worst_dual.max((l - r).norm() / l.norm().max(r.norm()));
        worst_bi = worst_bi.max(bilinear_form(&f, &h, 0.3).unwrap().rel_diff);
    }
    (
        worst_dual <= 1e-8 && worst_bi <= 1e-8,
        format!("100 pairs: duality {worst_dual:.2e}, factorization {worst_bi:.2e} (tol 1e-8)"),
    )
}

fn c5_suite() -> Outcome {
    let rep = property_suite(2024, 500, None).unwrap();
    let failed: Vec<String> = rep
        .outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| format!("{}: {}", o.name, o.counterexample.clone().unwrap_or_default()))
        .collect();
    let trials: usize = rep.outcomes.iter().map(|o| o.trials).sum();
    (
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} properties, {trials} checks, 500 fields, 0 failures", rep.outcomes.len())
        } else {
            failed.join("; ")
        },
    )
}

fn t(n: u32, s: &str, qt: &str, rt: &str, q: &str, r: &str) -> ExponentTuple {
    ExponentTuple::parse(n, s, qt, rt, q, r).unwrap()
}

fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn c6_exponents() -> Outcome {
    let mut checks: Vec<(&str, bool)> = vec![
        ("admissible (inf,2,n)", (1..=4).all(|n| is_schrodinger_admissible(e("inf"), e("2"), n).accepted())),
        ("classical (2,inf,2) rejected", !is_schrodinger_admissible(e("2"), e("inf"), 2).accepted()),
        ("admissible (4,4,2)", is_schrodinger_admissible(e("4"), e("4"), 2).accepted()),
        ("C-N2 n=3 (2,6,2,6)", satisfies_cn2(&t(3, "0", "2", "6", "2", "6")).accepted()),
        ("C-N2 n=2 r=inf rejected", !satisfies_cn2(&t(2, "0", "2", "4", "4", "inf")).accepted()),
        ("C-N2 rt>r rejected", !satisfies_cn2(&t(1, "0", "4", "8", "4", "4")).accepted()),
        ("theorem (2,inf,10,inf)", satisfies_theorem(&t(1, "3/10", "2", "inf", "10", "inf")).accepted()),
        ("theorem qt=q rejected", !satisfies_theorem(&t(1, "3/10", "10", "inf", "10", "inf")).accepted()),
        ("theorem sigma=n/2 rejected", !satisfies_theorem(&t(1, "1/2", "2", "inf", "10", "inf")).accepted()),
        ("corollary (4,4,10,10)", satisfies_corollary(&t(1, "1/5", "4", "4", "10", "10")).accepted()),
        ("corollary n=2 r=inf rejected", !satisfies_corollary(&t(2, "1/5", "4", "4", "10", "inf")).accepted()),
        ("corollary qt=2 rejected", !satisfies_corollary(&t(1, "1/5", "2", "4", "10", "10")).accepted()),
    ];
    let p3 = satisfies_prop_kernel(1, q(1, 5), e("inf"), e("10"));
    checks.push(("prop (c3) accept", p3.accepted() && p3.case == Some(KernelCase::SmallSigma)));
    let p4 = satisfies_prop_kernel(1, q(3, 10), e("inf"), e("4"));
    checks.push(("prop (c4) reject", !p4.accepted() && p4.case == Some(KernelCase::LargeSigma)));
    checks.push(("prop sigma out of range", !satisfies_prop_kernel(1, q(1, 2), e("inf"), e("inf")).accepted()));
    let d = |s: Q, r: &str| {
        let k = predicted_kernel_decay(1, s, e("inf"), e(r));
        (k.small_t, k.large_t)
    };
    checks.push(("decay (-1/5,-1/5)", d(q(3, 10), "inf") == (q(-1, 5), q(-1, 5))));
    checks.push(("decay (-1/5,-1/10)", d(q(3, 10), "10") == (q(-1, 5), q(-1, 10))));
    checks.push(("decay (-3/10,-1/5)", d(q(1, 5), "10") == (q(-3, 10), q(-1, 5))));
    checks.push((
        "Sobolev line examples",
        classical_sobolev_line(1, q(3, 10), e("10")).unwrap().is_infinite()
            && classical_sobolev_line(2, q(1, 2), e("4")).unwrap().is_infinite()
            && classical_sobolev_line(1, q(9, 20), e("40")).unwrap().is_infinite(),
    ));

    // theorem region at resolution 1/64, re-verified point by point
    let sigma = q(3, 10);
    let mut fixed = BTreeMap::new();
    fixed.insert(Field::Rt, Exponent::infinity());
    let query = RegionQuery {
        set: ConditionSet::Theorem,
        n: 1,
        sigma,
        fixed,
        free: vec![Field::Qt, Field::Q],
        solve: Some(Field::R),
        resolution: q(1, 64),
    };
    let scan = sample_region(&query).unwrap();
    let mut disagreements = 0;
    for m in &scan.mesh {
        let iqt = parse_rational(&m.coords[0]).unwrap();
        let iq = parse_rational(&m.coords[1]).unwrap();
        let ir = q(1, 2) - sigma - q(2, 1) * iq;
        let verdict = match Exponent::from_recip(ir) {
            Ok(r) => {
                let tup = ExponentTuple::new(1, sigma, Exponent::from_recip(iqt).unwrap(), Exponent::infinity(), Exponent::from_recip(iq).unwrap(), r);
                check(ConditionSet::Theorem, &tup).verdict
            }
            Err(_) => Verdict::Reject,
        };
        if verdict != m.verdict {
            disagreements += 1;
        }
    }
    disagreements += scan.accepted.iter().filter(|tup| !satisfies_theorem(tup).accepted()).count();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    (
        failed.is_empty() && disagreements == 0 && !scan.accepted.is_empty(),
        format!(
            "{} worked tuples, {} failed {:?}; region 1/64: {} points, {} accepted, {disagreements} disagreements",
            checks.len(),
            failed.len(),
            failed,
            scan.mesh.len(),
            scan.accepted.len()
        ),
    )
}

fn c7_windows() -> Outcome {
    let times = log_times(0.01, 100.0, 12).unwrap();
    let p = profile(0.3, f64::INFINITY, f64::INFINITY, &times);
    let h = PowerLawInterpolant::from_profile(&p).unwrap();
    let hf = |t: f64| h.eval(t);
    let w = WindowSpec::bump(1.0, 1.0).unwrap();
    let good = t(1, "3/10", "2", "inf", "10", "inf");
    let bad = t(1, "3/10", "2", "inf", "4", "inf");
    let a = local_window_norms(&hf, &w, 64, &good).unwrap();
    let b = local_window_norms(&hf, &w, 64, &bad).unwrap();
    let ok = satisfies_theorem(&good).accepted()
        && (a.tail_slope - a.exponent).abs() <= 0.07
        && a.weak_norm.is_finite()
        && !a.divergent;
    (
        ok,
        format!(
            "tail slope {:.4} vs {:.4} (tol 0.07), C={:.4}, weak l^(5,inf) {:.4} (growth {:.4}); control q=4 growth {:.4} divergent={}",
            a.tail_slope, a.exponent, a.constant, a.weak_norm, a.growth, b.growth, b.divergent
        ),
    )
}

fn c8_scaling() -> Outcome {
    let grid = make_grid(1, 64.0, 4096).unwrap();
    let times = symmetric_log_times(0.01, 100.0, 24, true).unwrap();
    let sigma = q(3, 10);
    let on = classical_scaling_sweep(&calibration_profile, grid, &[1.0, 2.0], sigma, e("10"), None, &times).unwrap();
    let line = classical_sobolev_line(1, sigma, e("10")).unwrap();
    let r5 = perturbed_r(line, q(1, 5)).unwrap();
    let off = classical_scaling_sweep(&calibration_profile, grid, &[1.0, 2.0, 4.0], sigma, e("10"), Some(r5), &times).unwrap();
    (
        on.max_rel_dev <= 0.10 && off.monotone,
        format!(
            "r={}: ratios {:.5}, {:.5} (dev {:.4}, tol 0.10); control r={}: {:?} monotone={}",
            on.r,
            on.ratios[0],
            on.ratios[1],
            on.max_rel_dev,
            off.r,
            off.ratios.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>(),
            off.monotone
        ),
    )
}

fn c9_hls() -> Outcome {
    let r = hls_refinement(4.0 / 3.0, 0.5, 200, 9, 1.0 / 32.0).unwrap();
    (
        r.stable,
        format!(
            "q={}, max ratio {:.5} -> {:.5} (x{:.4}, tol 1.5), min {:.5}",
            r.coarse.q, r.coarse.max_ratio, r.fine.max_ratio, r.change, r.coarse.min_ratio
        ),
    )
}

fn main() {
    let mut results: Vec<(String, Outcome, f64)> = Vec::new();
    let start = Instant::now();
    for (tag, o) in c1_decay() {
        println!("criterion {tag}: {} {}", if o.0 { "PASS" } else { "FAIL" }, o.1);
        results.push((tag, o, 0.0));
    }
    println!("  (criterion 1 total {:.1}s)", start.elapsed().as_secs_f64());
    let mut run = |tag: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {tag}: {} ({secs:.1}s) {}", if o.0 { "PASS" } else { "FAIL" }, o.1);
        results.push((tag.to_string(), o, secs));
    };
    run("2", &c2_sigma_zero);
    run("3", &c3_pointwise);
    run("4", &c4_identities);
    run("5", &c5_suite);
    run("6", &c6_exponents);
    run("7", &c7_windows);
    run("8", &c8_scaling);
    run("9", &c9_hls);
    let failed: Vec<&str> = results.iter().filter(|r| !r.1 .0).map(|r| r.0.as_str()).collect();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    if !failed.is_empty() {
        println!("acceptance: FAILED {}", failed.join(", "));
        std::process::exit(1);
    }
}
