use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zetasum_core::asymptotics::{chi_exact, e_envelope, e_term, regime_of, Regime};
use zetasum_core::doublesums::{
    f_sum, fg_identity_residual, g_sum, grid_double_sum, mt_a_sum, mt_b_sum, split_s1_sum, split_s2_sum,
    square_relation_check, tail_double_sum, Strategy as Method,
};
use zetasum_core::estlab::{fit_growth_exponent, gh_bound_check, log_grid, Grid, SampleSeries};
use zetasum_core::kernel::oracle::oracle_recompute;
use zetasum_core::kernel::{chunked_sum, log_gamma_complex, pow_neg, sum_compensated, with_threads};
use zetasum_core::phases::{build_prefix, c_ratio, c_ratio_deficit, single_sum};
use zetasum_core::{Dd, PhaseKind, SumSpec, C64};

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn phase() -> impl proptest::strategy::Strategy<Value = PhaseKind> {
    prop_oneof![Just(PhaseKind::F1), Just(PhaseKind::F2), Just(PhaseKind::F3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compensated_sum_error_bound(parts in prop::collection::vec((-1e8f64..1e8, -30i32..30, -1e8f64..1e8), 1..500)) {
        let xs: Vec<C64> = parts.iter().map(|&(a, e, b)| C64::new(a * 2f64.powi(e), b)).collect();
        let got = sum_compensated(&xs).unwrap();
        let (mut re, mut im) = (Dd::ZERO, Dd::ZERO);
        let (mut abs_re, mut abs_im) = (0.0, 0.0);
        for x in &xs {
            re += Dd::from_f64(x.re);
            im += Dd::from_f64(x.im);
            abs_re += x.re.abs();
            abs_im += x.im.abs();
        }
        let u = f64::EPSILON / 2.0;
        let n = xs.len() as f64;
        for (g, exact, a) in [(got.re, re, abs_re), (got.im, im, abs_im)] {
            let e = exact.to_f64();
            prop_assert!((g - e).abs() <= 2.0 * u * e.abs() + 4.0 * n * u * u * a, "{g} vs {e}");
        }
    }

    #[test]
    fn sums_identical_across_workers(sigma in -1.0f64..1.5, t in 1.0f64..1e5, n in 1u64..30_000) {
        let f = |m: u64| pow_neg(m, C64::new(sigma, t));
        let base = with_threads(1, || chunked_sum(1, n, f).unwrap());
        for w in [2usize, 4, 8] {
            let v = with_threads(w, || chunked_sum(1, n, f).unwrap());
            prop_assert_eq!(v.re.to_bits(), base.re.to_bits());
            prop_assert_eq!(v.im.to_bits(), base.im.to_bits());
        }
    }

    #[test]
    fn log_gamma_recurrence(re in -20.0f64..40.0, im in -200.0f64..200.0) {
        prop_assume!(im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
        let z = C64::new(re, im);
        let a = log_gamma_complex(z + 1.0).unwrap();
        let b = log_gamma_complex(z).unwrap() + z.ln();
        let d = a - b;
        let tau = std::f64::consts::TAU;
        let wrapped = d.im - tau * (d.im / tau).round();
        let scale = a.norm().max(1.0);
        prop_assert!(d.re.abs() <= 1e-11 * scale && wrapped.abs() <= 1e-11 * scale, "{z}: {d}");
    }

    #[test]
    fn single_sum_matches_oracle(kind in phase(), sigma in -1.0f64..2.0, t in 0.5f64..1e5, lo in 1u64..2000, len in 0u64..2000, conj in any::<bool>()) {
        let mut spec = SumSpec::new(kind, sigma, t, lo, lo + len.max(1) - 1);
        if len == 0 {
            spec.hi = lo - 1;
        }
        spec.conjugate = conj;
        let fast = single_sum(&spec).unwrap();
        let slow = oracle_recompute(&spec).unwrap();
        if len == 0 {
            prop_assert!(slow.empty);
            prop_assert_eq!(fast, C64::new(0.0, 0.0));
        } else {
            let scale: f64 = (lo..=spec.hi).map(|m| (m as f64).powf(-sigma)).sum();
            prop_assert!((fast - slow.to_c64()).norm() <= 1e-10 * scale.max(fast.norm()));
        }
    }

    #[test]
    fn prefix_ranges_match_oracle(sigma in -1.0f64..2.0, t in 1.0f64..1e5, a in 1u64..3000, len in 1u64..3000, conj in any::<bool>()) {
        let p = build_prefix(sigma, t, conj, a + len).unwrap();
        let got = p.range(a, a + len - 1);
        let spec = SumSpec { phase: PhaseKind::F3, sigma, t, lo: a, hi: a + len - 1, conjugate: !conj };
        let want = oracle_recompute(&spec).unwrap().to_c64();
        let scale: f64 = (1..=a + len).map(|m| (m as f64).powf(-sigma)).sum();
        prop_assert!((got - want).norm() <= 1e-9 * scale.max(want.norm()), "{got} {want}");
        prop_assert_eq!(p.range(a, a - 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn c_ratio_bounds(t in 10.0f64..1e8, frac in 0.001f64..0.999, k in 2u32..12) {
        let x = (t * frac).max(1.0 + 1e-9);
        prop_assume!(x < t);
        let c = c_ratio(x, t, k).unwrap();
        let d = c_ratio_deficit(x, t, k).unwrap();
        prop_assert!(c > 0.0 && c <= 1.0);
        prop_assert!(d >= 0.0 && d <= (x / t).powi(k as i32) * (1.0 + 1e-12));
        prop_assert!((c + d - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn chi_involution(sigma in 0.0f64..1.0, lt in 10f64.ln()..1e4f64.ln()) {
        let s = C64::new(sigma, lt.exp());
        let p = chi_exact(s).unwrap() * chi_exact(1.0 - s).unwrap();
        prop_assert!((p - 1.0).norm() <= 1e-9);
    }

    #[test]
    fn fg_identity_vanishes(ur in -2.0f64..2.0, ui in -50.0f64..50.0, vr in -2.0f64..2.0, vi in -50.0f64..50.0, n in 1u64..400) {
        let r = fg_identity_residual(C64::new(ur, ui), C64::new(vr, vi), n).unwrap();
        prop_assert!(r.relative() <= 1e-10, "{}", r.relative());
    }

    #[test]
    fn square_relation_vanishes(sigma in 0.05f64..0.95, t in 1.0f64..3000.0) {
        let r = square_relation_check(sigma, t).unwrap();
        prop_assert!(r.relative() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn strategies_agree(op in 0usize..8, sigma in 0.05f64..0.95, lt in 2f64.ln()..1e3f64.ln(), im in -50.0f64..50.0, d in 0.1f64..0.45) {
        use Method::{BruteForce as B, Convolution as C, PrefixFactorized as P};
        let t = lt.exp();
        let n = t.floor() as u64;
        let u = C64::new(sigma, im);
        let v = C64::new(1.0 - sigma, -im);
        let (a, b) = match op {
            0 => (grid_double_sum(sigma, t, P).unwrap().value, grid_double_sum(sigma, t, B).unwrap().value),
            1 => (f_sum(u, v, n, P).unwrap().value, f_sum(u, v, n, B).unwrap().value),
            2 => (g_sum(u, v, n, P).unwrap().value, g_sum(u, v, n, B).unwrap().value),
            3 => (tail_double_sum(sigma, t, P).unwrap(), tail_double_sum(sigma, t, B).unwrap()),
            4 => (mt_a_sum(-sigma, 1.0 + sigma, t, P).unwrap().value, mt_a_sum(-sigma, 1.0 + sigma, t, B).unwrap().value),
            5 => (
                mt_b_sum(sigma - 1.0, sigma, 1.0, t, C).unwrap().total.value,
                mt_b_sum(sigma - 1.0, sigma, 1.0, t, B).unwrap().total.value,
            ),
            6 => (split_s1_sum(sigma, t, 2.0 * d, P).unwrap().total, split_s1_sum(sigma, t, 2.0 * d, B).unwrap().total),
            _ => (split_s2_sum(sigma, t, d, P).unwrap().total, split_s2_sum(sigma, t, d, B).unwrap().total),
        };
        prop_assert!(rel(a, b) <= 1e-9, "op {op}: {a} {b}");
    }
}

#[test]
fn gh_inequality_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..10_000 {
        let sigma = [0.25, 0.5, 0.75][i % 3];
        let rows = rng.gen_range(1..=50usize);
        let cols = rng.gen_range(1..=50usize);
        let a = Grid::from_fn(rows, cols, |_, _| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)));
        let b = Grid::from_fn(rows, cols, |m, n| ((m + 1) as f64 * (n + 1) as f64).powf(-sigma));
        let r = gh_bound_check(&a, &b).unwrap();
        assert!(r.sign_conditions_ok);
        assert!(r.holds(), "instance {i}: {} > {}", r.lhs, r.bound);
    }
}

#[test]
fn fit_recovers_planted_exponents() {
    let grid = log_grid(1e3, 1e6, 10).unwrap();
    for k in 0..=4u32 {
        for alpha in [-0.75, 0.0, 1.0 / 6.0, 1.3] {
            let pts = grid.iter().map(|&t| (t, 3.5 * t.powf(alpha) * t.ln().powi(k as i32))).collect();
            let r = fit_growth_exponent(&SampleSeries::new("planted", pts, k), alpha, 0.0).unwrap();
            assert!((r.slope - alpha).abs() <= 1e-10, "k = {k}, alpha = {alpha}: {}", r.slope);
        }
    }
}

#[test]
fn e_term_branches_meet_at_crossover() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 20 {
        let t = rng.gen_range(1e4f64.ln()..1e9f64.ln()).exp();
        let eta = t.cbrt();
        let tau = std::f64::consts::TAU;
        if (eta - tau * (eta / tau).round()).abs() <= 0.5 {
            continue;
        }
        let small = e_envelope(Regime::Small, t, eta);
        let large = e_envelope(Regime::Large, t, eta);
        let q = small / large;
        assert!((1.0 / 3.0..=3.0).contains(&q), "t = {t}: {small} vs {large}");
        checked += 1;
    }
}

#[test]
fn e_term_regime_selection() {
    assert_eq!(regime_of(1e4, 50.0), Regime::Large);
    assert_eq!(regime_of(1e6, std::f64::consts::E), Regime::Small);
    let e = e_term(0.5, 1e4, 50.0).unwrap();
    assert_eq!(e.regime, Regime::Large);
    // |(eta/t)^s| = (eta/t)^sigma
    let a = e_term(0.3, 1e6, 3.0).unwrap();
    let alpha = (C64::new(1.0, 0.0) - C64::new(0.0, -3.0).exp()).norm();
    let lead = (3.0f64 / 1e6).powf(0.3) / alpha;
    assert!((a.value.norm() / lead - 1.0).abs() < 1e-3);
}
