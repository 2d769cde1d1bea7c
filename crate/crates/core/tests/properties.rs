use amalgam_core::exponents::{
    check, parse_rational, q, qi, satisfies_corollary, satisfies_prop_kernel, satisfies_theorem,
    sample_region, ConditionSet, Exponent, ExponentTuple, Field, RegionQuery, Verdict, Q,
};
use amalgam_core::grid::{lebesgue_norm, spectral_l2, transform, Direction};
use amalgam_core::io::{decode_container, encode_container};
use amalgam_core::propagator::{duality_sides, evolve, kernel_eval, KernelSchedule};
use amalgam_core::verify::generators::{random_field, random_spacetime};
use amalgam_core::verify::{bilinear_form, fit_power_law};
use amalgam_core::wiener::{
    amalgam_norm, holder_pairing, inclusion_check, interpolate_exponents, weak_lorentz_value,
};
use amalgam_core::{make_grid, SampledField, TimeWindow, WindowSpec};
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use std::collections::BTreeMap;

const EXPS: [f64; 7] = [1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY];

fn exp_index() -> impl Strategy<Value = f64> {
    (0..EXPS.len()).prop_map(|i| EXPS[i])
}

fn recip_grid(step: i128, max: Q) -> Vec<Q> {
    (0..)
        .map(|k| q(k, step))
        .take_while(|v| *v <= max)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval_and_linearity(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let g = make_grid(2, 5.0, 16).unwrap();
        let f = random_field(g, seed);
        let h = random_field(g, seed ^ 0xdead);
        let ff = transform(&f, Direction::Forward).unwrap();
        prop_assert!((f.l2_norm() - spectral_l2(&ff)).abs() <= 1e-12 * f.l2_norm());
        let ca = Complex64::new(a, 0.5);
        let cb = Complex64::new(b, -1.0);
        let mix = SampledField::new(
            g,
            f.values.iter().zip(&h.values).map(|(x, y)| ca * x + cb * y).collect(),
            "mix",
        ).unwrap();
        let lhs = transform(&mix, Direction::Forward).unwrap();
        let hh = transform(&h, Direction::Forward).unwrap();
        let scale = lhs.max_abs();
        for ((l, x), y) in lhs.values.iter().zip(&ff.values).zip(&hh.values) {
            prop_assert!((l - (ca * x + cb * y)).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn lebesgue_monotone_in_p(seed in any::<u64>(), i in 0usize..7, j in 0usize..7) {
        let g = make_grid(1, 3.0, 64).unwrap();
        let f = random_field(g, seed);
        let (p, s) = (EXPS[i.min(j)], EXPS[i.max(j)]);
        let m = 6.0f64;
        let lhs = lebesgue_norm(&f, p).unwrap().value;
        let rhs = m.powf(1.0 / p - 1.0 / s) * lebesgue_norm(&f, s).unwrap().value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn diagonal_and_homogeneity(seed in any::<u64>(), i in 0usize..4, lam in 0.01f64..100.0, q in exp_index()) {
        let p = [1.0, 2.0, 4.0, f64::INFINITY][i];
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, seed);
        let w = WindowSpec::unit_cubes();
        let a = amalgam_norm(&f, p, p, &w).unwrap().value;
        let b = lebesgue_norm(&f, p).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * b);
        let c = Complex64::from_polar(lam, 1.3);
        let x = amalgam_norm(&f.scaled(c), p, q, &w).unwrap().value;
        let y = lam * amalgam_norm(&f, p, q, &w).unwrap().value;
        prop_assert!((x - y).abs() <= 1e-12 * y);
    }

    #[test]
    fn triangle_inequality(seed in any::<u64>(), k in 0usize..2) {
        let (p, qq) = [(2.0, 4.0), (f64::INFINITY, 2.0)][k];
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, seed);
        let h = random_field(g, seed.wrapping_add(1));
        let sum = SampledField::new(g, f.values.iter().zip(&h.values).map(|(a, b)| a + b).collect(), "sum").unwrap();
        for w in [WindowSpec::unit_cubes(), WindowSpec::gaussian(0.5, 1.0).unwrap()] {
            let n = |u: &SampledField| amalgam_norm(u, p, qq, &w).unwrap().value;
            prop_assert!(n(&sum) <= (n(&f) + n(&h)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn weak_below_strong(v in prop::collection::vec(-10.0f64..10.0, 1..60), p in 1.0f64..8.0) {
        let strong = v.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p);
        prop_assert!(weak_lorentz_value(&v, p) <= strong * (1.0 + 1e-12));
        let one = [v[0]];
        prop_assert!((weak_lorentz_value(&one, p) - v[0].abs()).abs() <= 1e-15);
    }

    #[test]
    fn inclusion_on_unit_cubes(seed in any::<u64>(), a in exp_index(), b in exp_index(), c in exp_index(), d in exp_index()) {
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, seed);
        let r = inclusion_check(&f, a.max(b), c.min(d), a.min(b), c.max(d), &WindowSpec::unit_cubes()).unwrap();
        prop_assert!(r.holds, "{} > {}", r.lhs, r.rhs);
    }

    #[test]
    fn holder_pairing_constant_one(seed in any::<u64>(), qt in exp_index(), qq in exp_index(), rt in exp_index(), r in exp_index(), side in 1usize..3) {
        let g = make_grid(1, 4.0, 32).unwrap();
        let times: Vec<f64> = (0..=16).map(|k| k as f64 * 0.25).collect();
        let f = random_spacetime(g, &times, seed).unwrap();
        let h = random_spacetime(g, &times, seed.wrapping_add(99)).unwrap();
        let w = WindowSpec::cubes(side as f64).unwrap();
        let rep = holder_pairing(&f, &h, qt, qq, rt, r, &TimeWindow::new(w), &w).unwrap();
        prop_assert!(rep.holds, "{} > {}", rep.pairing, rep.bound);
    }

    #[test]
    fn unitarity_and_group_law(seed in any::<u64>(), s in -20.0f64..20.0, t in -20.0f64..20.0) {
        let g = make_grid(1, 8.0, 128).unwrap();
        let f = random_field(g, seed);
        let u = evolve(&f, t, 0.0).unwrap();
        prop_assert!((u.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
        let a = evolve(&evolve(&f, s, 0.0).unwrap(), t, 0.0).unwrap();
        let b = evolve(&f, s + t, 0.0).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).norm() <= 1e-10);
        }
    }

    #[test]
    fn duality_and_bilinear_identities(seed in any::<u64>(), sigma in 0.0f64..0.49) {
        let g = make_grid(1, 8.0, 64).unwrap();
        let times = vec![-2.0, -0.5, 0.0, 0.7, 1.5];
        let f = random_spacetime(g, &times, seed).unwrap();
        let h = random_spacetime(g, &times, seed.wrapping_add(5)).unwrap();
        let d = random_field(g, seed.wrapping_add(9));
        let (l, r) = duality_sides(&f, &d, sigma).unwrap();
        prop_assert!((l - r).norm() <= 1e-10 * l.norm().max(r.norm()));
        prop_assert!(bilinear_form(&f, &h, sigma).unwrap().rel_diff <= 1e-8);
    }

    #[test]
    fn kernel_conjugation(sigma in 0.05f64..0.45, t in 0.05f64..50.0, x in 0.0f64..40.0) {
        let s = KernelSchedule::default();
        let a = kernel_eval(1, sigma, t, &[x], &s).unwrap().values[0];
        let b = kernel_eval(1, sigma, -t, &[x], &s).unwrap().values[0];
        prop_assert!((a.conj() - b).norm() <= 1e-10 * a.norm());
    }

    #[test]
    fn power_law_fit_recovers_slope(slope in -3.0f64..3.0, c in 0.1f64..10.0) {
        let ts: Vec<f64> = (0..30).map(|i| 10f64.powf(-2.0 + i as f64 / 8.0)).collect();
        let hs: Vec<f64> = ts.iter().map(|t| c * t.powf(slope)).collect();
        let (s, i, r2) = fit_power_law(&ts, &hs).unwrap();
        prop_assert!((s - slope).abs() < 1e-10 && (i - c.ln()).abs() < 1e-9 && r2 > 1.0 - 1e-12);
    }

    #[test]
    fn exponent_text_round_trip(num in 1i128..400, den in 1i128..400) {
        let e = Exponent::finite(q(num, den).max(qi(1))).unwrap();
        let back: Exponent = e.to_string().parse().unwrap();
        prop_assert_eq!(e, back);
        let r = parse_rational(&format!("{num}/{den}")).unwrap();
        prop_assert_eq!(r, q(num, den));
    }

    #[test]
    fn container_round_trip(seed in any::<u64>(), m in 1usize..4) {
        let g = make_grid(1, 2.0, 16).unwrap();
        let times: Vec<f64> = (0..m).map(|k| k as f64 * 0.3 - 0.2).collect();
        let stf = random_spacetime(g, &times, seed).unwrap();
        let back = decode_container(&encode_container(&stf)).unwrap();
        prop_assert_eq!(back.times, stf.times);
        for (a, b) in back.slices.iter().zip(&stf.slices) {
            prop_assert_eq!(&a.values, &b.values);
        }
    }

    /// Interpolating the two endpoint bilinear bounds at θ = 1/2 lands in the corollary region.
    #[test]
    fn interpolation_reaches_corollary(
        n in 1u32..4,
        ks in 1i128..64,
        a in 0i128..=64,
        b in 1i128..=64,
        c in 0i128..=64,
    ) {
        let nn = qi(n as i128);
        let lo = if n > 2 { (nn - qi(2)) / qi(8) } else { Q::zero() };
        let sigma = lo + (nn / qi(4) - lo) * q(ks, 64);
        prop_assume!(sigma > lo && sigma < nn / qi(4));
        let gap = nn / qi(2) - qi(2) * sigma;
        // 1/q̃1 ∈ (gap/2, 1/2]
        let inv_qt1 = gap / qi(2) + (q(1, 2) - gap / qi(2)) * q(a.max(1), 64);
        prop_assume!(inv_qt1 > gap / qi(2) && inv_qt1 <= q(1, 2));
        // 1/q1 ∈ (0, min(1/q̃1, gap/2)), r1 from 2/q1 + n/r1 = gap
        let inv_q1 = inv_qt1.min(gap / qi(2)) * q(b, 65);
        let inv_r1 = (gap - qi(2) * inv_q1) / nn;
        prop_assume!(inv_q1 > Q::zero() && inv_q1 < inv_qt1 && inv_r1 <= q(1, 2));
        // (q2, r2) admissible
        let inv_r2 = q(1, 2) * q(c, 64);
        let inv_q2 = (nn / qi(2) - nn * inv_r2) / qi(2);
        prop_assume!(inv_q2 >= Q::zero() && inv_q2 <= q(1, 2));
        prop_assume!(!(n == 2 && inv_r2.is_zero()));

        let e = |r: Q| Exponent::from_recip(r).unwrap();
        let dual = |r: Q| e(Q::one() - r);
        let half = q(1, 2);
        // time: W(L^{q̃1'}, L^{q1'}) and W(L^1, L^{q2'})
        let (pt, qo) = interpolate_exponents(dual(inv_qt1), dual(inv_q1), e(Q::one()), dual(inv_q2), half).unwrap();
        // space: W(L^1, L^{r1'}) and W(L^2, L^{r2'})
        let (pr, ro) = interpolate_exponents(e(Q::one()), dual(inv_r1), e(half), dual(inv_r2), half).unwrap();
        let (qt, qq, rt, r) = (
            pt.conjugate().unwrap(),
            qo.conjugate().unwrap(),
            pr.conjugate().unwrap(),
            ro.conjugate().unwrap(),
        );
        prop_assert_eq!(qt.recip(), inv_qt1 / qi(2));
        prop_assert_eq!(qq.recip(), (inv_q1 + inv_q2) / qi(2));
        prop_assert_eq!(rt.recip(), q(1, 4));
        prop_assert_eq!(r.recip(), (inv_r1 + inv_r2) / qi(2));
        let t = ExponentTuple::new(n, sigma, qt, rt, qq, r);
        let rep = satisfies_corollary(&t);
        prop_assert!(rep.accepted(), "{:?}", rep.violations());
    }
}

/// Theorem acceptance implies the kernel hypotheses for σ ≥ n/4; below n/4
/// the kernel case fails exactly when 2/q ≤ n/2 − 2σ.
#[test]
fn theorem_versus_kernel_hypotheses_scan() {
    let recips = recip_grid(16, q(1, 2));
    let mut scanned = 0usize;
    let mut accepted = 0usize;
    for n in 1u32..=3 {
        let nn = qi(n as i128);
        for k in 1..24 {
            let sigma = nn / qi(2) * q(k, 24);
            for &iqt in &recips {
                for &irt in &recips {
                    for &ir in &recips {
                        let iq = (nn / qi(2) - sigma - (nn - qi(1)) * irt - nn * ir) / qi(2);
                        scanned += 1;
                        if !(iq > Q::zero() && iq <= q(1, 2)) {
                            continue;
                        }
                        let e = |r: Q| Exponent::from_recip(r).unwrap();
                        let t = ExponentTuple::new(n, sigma, e(iqt), e(irt), e(iq), e(ir));
                        if !satisfies_theorem(&t).accepted() {
                            continue;
                        }
                        accepted += 1;
                        let kernel = satisfies_prop_kernel(n, sigma, t.rt, t.r).accepted();
                        if sigma >= nn / qi(4) {
                            assert!(kernel, "containment fails at {t:?}");
                        } else {
                            let expect = qi(2) * iq > nn / qi(2) - qi(2) * sigma;
                            assert_eq!(kernel, expect, "{t:?}");
                        }
                    }
                }
            }
        }
    }
    assert!(scanned >= 10_000, "{scanned}");
    assert!(accepted > 100, "{accepted}");
}

/// Region mesh verdicts agree with direct predicate calls.
#[test]
fn region_scan_reverified() {
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
        resolution: q(1, 32),
    };
    let scan = sample_region(&query).unwrap();
    assert_eq!(scan.mesh.len(), 33 * 33);
    for m in &scan.mesh {
        let iqt = parse_rational(&m.coords[0]).unwrap();
        let iq = parse_rational(&m.coords[1]).unwrap();
        let ir = q(1, 2) - sigma - qi(2) * iq;
        let verdict = match Exponent::from_recip(ir) {
            Ok(r) => {
                let t = ExponentTuple::new(
                    1,
                    sigma,
                    Exponent::from_recip(iqt).unwrap(),
                    Exponent::infinity(),
                    Exponent::from_recip(iq).unwrap(),
                    r,
                );
                check(ConditionSet::Theorem, &t).verdict
            }
            Err(_) => Verdict::Reject,
        };
        assert_eq!(verdict, m.verdict, "{:?}", m.coords);
    }
    assert!(scan.mesh.iter().any(|m| m.verdict == Verdict::Accept));
    assert_eq!(
        scan.accepted.len(),
        scan.mesh.iter().filter(|m| m.verdict == Verdict::Accept).count()
    );
}

/// Ratio of Gaussian-window to cube-window amalgam norms over a fixed corpus.
#[test]
fn window_equivalence_bracket() {
    let g = make_grid(1, 8.0, 128).unwrap();
    let cube = WindowSpec::unit_cubes();
    let gauss = WindowSpec::gaussian(0.5, 1.0).unwrap();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for s in 0..200u64 {
        let f = random_field(g, 10_000 + s);
        let ratio = amalgam_norm(&f, 2.0, 4.0, &gauss).unwrap().value
            / amalgam_norm(&f, 2.0, 4.0, &cube).unwrap().value;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    println!("gaussian/cube W(L^2,L^4) bracket over 200 fields: [{lo:.6}, {hi:.6}]");
    assert!(lo > 0.0 && hi.is_finite() && lo <= hi);
}

#[test]
fn boundary_tuples_rejected() {
    // (c1) with equality: 2/qt + 0 = 1/2 - σ at σ = 1/10, qt = 5
    let t = ExponentTuple::parse(1, "1/10", "5", "inf", "10", "5").unwrap();
    let rep = satisfies_theorem(&t);
    assert!(!rep.accepted());
    assert!(rep.violations().iter().any(|v| v.contains("(c1)")));
}
