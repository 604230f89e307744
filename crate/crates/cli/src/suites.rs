//! Evaluators behind each registered suite.

use std::f64::consts::{E, PI, TAU};

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zetasum_core::asymptotics::{
    chi_asymptotic, chi_exact, dist_2pi_z, fl_identity_residual, fr_identity_residual, functional_equation_residual,
    shifted_finite_sum, DEFAULT_EPS,
};
use zetasum_core::doublesums::{
    f_sum, fg_identity_residual, g_sum, grid_double_sum, mt_a_sum, mt_b_sum, split_decomposition_residual,
    split_s1_sum, split_s2_sum, square_relation_check, tail_double_sum, Strategy,
};
use zetasum_core::estlab::{
    bound_envelope, fit_growth_exponent, gh_bound_check, j2_integral, FitReport, Grid, SampleSeries,
};
use zetasum_core::kernel::{oracle::oracle_recompute, with_threads};
use zetasum_core::phases::single_sum;
use zetasum_core::{PhaseKind, SumSpec, C64};

use crate::config::{ExperimentConfig, PrecisionOpt};
use crate::emit::{emit, to_csv};
use crate::golden::{self, grid_hash};
use crate::record::{ClaimRecord, FitRecord, GoldenStatus, Outcome, Row};
use crate::registry::lookup;

pub const FG_TOL: f64 = 1e-10;
pub const RELATION_TOL: f64 = 1e-9;
pub const PARTITION_TOL: f64 = 1e-10;
pub const SLOPE_TOL: f64 = 0.10;
pub const POWER_SUM_TOL: f64 = 0.05;
pub const FLAT_TOL: f64 = 0.05;
pub const CHI_MODULUS_TOL: f64 = 1e-9;
/// `|chi / chi_asym - 1| <= CHI_ASYM_FACTOR / t`
pub const CHI_ASYM_FACTOR: f64 = 10.0;
pub const CHI_INVOLUTION_TOL: f64 = 1e-9;
pub const FE_TOL: f64 = 1e-8;
pub const STRATEGY_TOL: f64 = 1e-9;
/// both `eta` in `(2pi, 4pi)`, so the chi-weighted sum is empty
pub const EMPTY_ETAS: (f64, f64) = (7.0, 12.0);
pub const MT_A_SIGMAS: (f64, f64) = (-0.5, 1.5);

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    anchor: &'a str,
}

impl Ctx<'_> {
    fn record(&self, label: impl Into<String>) -> ClaimRecord {
        ClaimRecord::new(&self.cfg.suite, self.anchor, label)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed)
    }

    fn sigmas(&self) -> anyhow::Result<&[f64]> {
        if self.cfg.sigma_list.is_empty() {
            bail!("suite '{}' needs at least one sigma", self.cfg.suite);
        }
        Ok(&self.cfg.sigma_list)
    }

    fn sum(&self, spec: &SumSpec) -> anyhow::Result<C64> {
        Ok(match self.cfg.precision {
            PrecisionOpt::Standard => single_sum(spec)?,
            PrecisionOpt::Extended => oracle_recompute(spec)?.to_c64(),
        })
    }

    /// Compare `constant` with the frozen value for `key` and attach the result.
    fn freeze(&self, rec: &mut ClaimRecord, key: &str, constant: f64, grid: &[f64]) -> anyhow::Result<()> {
        let g = golden::check(key, constant, &grid_hash(grid), &self.cfg.config_hash())?;
        rec.golden = Some(g);
        Ok(())
    }
}

fn sigma_key(sigma: f64) -> String {
    format!("sigma{sigma}")
}

/// Attach series and fit; `floor` adds a lower bound `claimed - floor` on the slope.
fn attach_fit(rec: &mut ClaimRecord, series: &SampleSeries, fit: &FitReport, floor: Option<f64>) {
    let mut f = FitRecord::from(fit);
    if let Some(lo) = floor {
        f.verdict = Outcome::of(f.verdict.passed() && fit.slope >= fit.claimed_exponent - lo);
    }
    rec.samples = Some(series.into());
    rec.fit = Some(f);
}

/// Growth series of `|value(t)|` over the grid, one row per point.
fn growth<F>(
    ctx: &Ctx,
    label: String,
    sigma: f64,
    ln_power: u32,
    mut value: F,
) -> anyhow::Result<(ClaimRecord, SampleSeries)>
where
    F: FnMut(f64) -> anyhow::Result<C64>,
{
    let grid = ctx.cfg.grid()?;
    let mut rec = ctx.record(label.clone());
    let mut pts = Vec::with_capacity(grid.len());
    for &t in &grid {
        let v = value(t).with_context(|| format!("{label} at t = {t}"))?;
        rec.rows.push(Row::new(sigma, t, v));
        pts.push((t, v.norm()));
    }
    Ok((rec, SampleSeries::new(label, pts, ln_power)))
}

fn fg_identity(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut rng = ctx.rng();
    let draws = ctx.cfg.draws.unwrap_or(20);
    let pairs: Vec<(C64, C64)> = (0..draws)
        .map(|_| {
            let mut z = || C64::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-50.0..=50.0));
            (z(), z())
        })
        .collect();
    let mut rec = ctx.record("relative residual");
    for &n in &ctx.cfg.points()? {
        for &(u, v) in &pairs {
            let r = fg_identity_residual(u, v, n as u64)?;
            let rel = r.relative();
            rec.rows.push(
                Row::new(u.re, n, r.residual)
                    .params(Some(u.im), Some(v.re))
                    .extra("v_im", v.im)
                    .magnitude(rel)
                    .against(FG_TOL, rel <= FG_TOL),
            );
        }
    }
    Ok(vec![rec])
}

fn square_relation(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut rec = ctx.record("relative residual");
    for &sigma in ctx.sigmas()? {
        for &t in &ctx.cfg.points()? {
            let r = square_relation_check(sigma, t)?;
            let rel = r.relative();
            rec.rows.push(
                Row::new(sigma, t, r.residual)
                    .extra("lhs", r.lhs.re)
                    .extra("elementary", r.envelope)
                    .magnitude(rel)
                    .against(RELATION_TOL, rel <= RELATION_TOL),
            );
        }
    }
    Ok(vec![rec])
}

fn m_partition(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut rec = ctx.record("partition and residual");
    if ctx.cfg.delta_pairs.is_empty() {
        bail!("m-partition needs (delta2, delta3) pairs");
    }
    for &sigma in ctx.sigmas()? {
        for &t in &ctx.cfg.points()? {
            for &[d2, d3] in &ctx.cfg.delta_pairs {
                let d = split_decomposition_residual(sigma, t, d2, d3)?;
                let rel = d.identity.relative();
                if d.literal_uncovered > 0 {
                    rec.notes.push(format!(
                        "t = {t}, deltas ({d2}, {d3}): literal complement bounds leave {} cells uncovered",
                        d.literal_uncovered
                    ));
                }
                rec.rows.push(
                    Row::new(sigma, t, d.identity.residual)
                        .params(Some(d2), Some(d3))
                        .extra("cells", d.cells as f64)
                        .extra("m_count", d.m_count as f64)
                        .extra("s1_count", d.s1_count as f64)
                        .extra("s2_count", d.s2_count as f64)
                        .extra("partition_exact", d.partition_exact as u8 as f64)
                        .extra("literal_uncovered", d.literal_uncovered as f64)
                        .extra("simplified_s1_diff", d.simplified_s1_diff as f64)
                        .extra("simplified_s2_diff", d.simplified_s2_diff as f64)
                        .magnitude(rel)
                        .against(PARTITION_TOL, d.partition_exact && rel <= PARTITION_TOL),
                );
            }
        }
    }
    Ok(vec![rec])
}

fn fl_identity(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for &sigma in ctx.sigmas()? {
        let mut rows = Vec::new();
        let (mut rec, series) = growth(ctx, sigma_key(sigma), sigma, 0, |t| {
            let eta = 9.0 * PI * t;
            let r = fl_identity_residual(sigma, t, eta)?;
            rows.push((eta, r.envelope));
            Ok(r.residual)
        })?;
        for (row, (eta, env)) in rec.rows.iter_mut().zip(rows) {
            *row = row.clone().params(Some(eta), None).against(env, true);
        }
        let fit = fit_growth_exponent(&series, -sigma, SLOPE_TOL)?;
        attach_fit(&mut rec, &series, &fit, None);
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn fr_identity(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let grid = ctx.cfg.grid()?;
    let mut out = Vec::new();
    for &sigma in ctx.sigmas()? {
        for empty in [false, true] {
            let label = if empty { "empty right sum" } else { "eta2 = sqrt(t)/2" };
            let mut rec = ctx.record(format!("{label}, {}", sigma_key(sigma)));
            let mut used = Vec::new();
            for &t in &grid {
                let (e1, e2) = if empty { EMPTY_ETAS } else { (E, t.sqrt() / 2.0) };
                if dist_2pi_z(e2) <= DEFAULT_EPS || dist_2pi_z(e1) <= DEFAULT_EPS {
                    rec.notes.push(format!("t = {t}: eta within {DEFAULT_EPS} of 2piZ, skipped"));
                    continue;
                }
                let r = fr_identity_residual(sigma, t, e1, e2)?;
                if empty && r.right_terms != 0 {
                    bail!("right sum not empty at t = {t}");
                }
                let env = r.identity.envelope;
                let mut row = Row::new(sigma, t, r.identity.residual).params(Some(e1), Some(e2)).against(env, true);
                row = row.extra("side_condition_ok", (r.e1.side_condition_ok && r.e2.side_condition_ok) as u8 as f64);
                rec.rows.push(row);
                used.push(t);
            }
            if rec.rows.is_empty() {
                bail!("every grid point was skipped");
            }
            let c = rec.rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
            let key = format!("fr-identity-{}{}", if empty { "empty-" } else { "" }, sigma_key(sigma));
            ctx.freeze(&mut rec, &key, c, &used)?;
            let g = rec.golden.clone().expect("just set");
            if g.status != GoldenStatus::Incomparable {
                for row in &mut rec.rows {
                    row.verdict = Outcome::of(row.ratio.unwrap_or(f64::INFINITY) <= g.frozen);
                }
            }
            rec.settle();
            out.push(rec);
        }
    }
    Ok(out)
}

fn f2_bounded(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for &sigma in ctx.sigmas()? {
        let (mut rec, series) = growth(ctx, sigma_key(sigma), sigma, 0, |t| {
            ctx.sum(&SumSpec::new(PhaseKind::F2, sigma, t, 1, t.floor() as u64))
        })?;
        let fit = fit_growth_exponent(&series, 0.0, FLAT_TOL)?;
        attach_fit(&mut rec, &series, &fit, Some(FLAT_TOL));
        let c = bound_envelope(&series, 0.0, 0)?.max_ratio_constant;
        let grid: Vec<f64> = series.points.iter().map(|p| p.0).collect();
        ctx.freeze(&mut rec, &format!("f2-bounded-{}", sigma_key(sigma)), c, &grid)?;
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn single_growth(
    ctx: &Ctx,
    phase: PhaseKind,
    claimed: impl Fn(f64) -> f64,
    tol: f64,
) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for &sigma in ctx.sigmas()? {
        let (mut rec, series) =
            growth(ctx, sigma_key(sigma), sigma, 1, |t| ctx.sum(&SumSpec::new(phase, sigma, t, 1, t.floor() as u64)))?;
        let fit = fit_growth_exponent(&series, claimed(sigma), tol)?;
        attach_fit(&mut rec, &series, &fit, None);
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn chi(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let grid = ctx.cfg.grid()?;
    let mut modulus = ctx.record("modulus on the critical line");
    let mut asym = ctx.record("leading asymptotic");
    for &t in &grid {
        let s = C64::new(0.5, t);
        let x = chi_exact(s)?;
        let dev = (x.norm() - 1.0).abs();
        modulus.rows.push(Row::new(0.5, t, x).magnitude(dev).against(CHI_MODULUS_TOL, dev <= CHI_MODULUS_TOL));
        let a = chi_asymptotic(s)?;
        let rel = (x / a - 1.0).norm();
        let env = CHI_ASYM_FACTOR / t;
        asym.rows.push(Row::new(0.5, t, x / a).magnitude(rel).against(env, rel <= env));
    }
    let mut inv = ctx.record("chi(s) chi(1-s) = 1");
    let mut rng = ctx.rng();
    for _ in 0..ctx.cfg.draws.unwrap_or(100) {
        let sigma: f64 = rng.gen_range(0.0..1.0);
        let t = (rng.gen_range(10f64.ln()..1e4f64.ln())).exp();
        let s = C64::new(sigma, t);
        let p = chi_exact(s)? * chi_exact(1.0 - s)?;
        let dev = (p - 1.0).norm();
        inv.rows.push(Row::new(sigma, t, p).magnitude(dev).against(CHI_INVOLUTION_TOL, dev <= CHI_INVOLUTION_TOL));
    }
    let mut out = vec![modulus, asym, inv];
    out.iter_mut().for_each(ClaimRecord::settle);
    Ok(out)
}

fn functional_equation(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut rel_rec = ctx.record("zeta(s) = chi(s) zeta(1-s)");
    for &sigma in ctx.sigmas()? {
        for &t in &ctx.cfg.points()? {
            let r = functional_equation_residual(sigma, t)?;
            let rel = r.residual.norm() / r.lhs.norm();
            rel_rec.rows.push(
                Row::new(sigma, t, r.residual)
                    .extra("lhs_abs", r.lhs.norm())
                    .magnitude(rel)
                    .against(FE_TOL, rel <= FE_TOL),
            );
        }
    }
    rel_rec.settle();
    let mut out = vec![rel_rec];
    for &sigma in ctx.sigmas()? {
        let (mut rec, series) = growth(ctx, format!("shifted finite sum, {}", sigma_key(sigma)), sigma, 0, |t| {
            Ok(shifted_finite_sum(sigma, t)?)
        })?;
        let fit = fit_growth_exponent(&series, 1.5 - sigma, SLOPE_TOL)?;
        attach_fit(&mut rec, &series, &fit, None);
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn s1_s2_growth(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let (d1, d2) = match ctx.cfg.delta_list.as_slice() {
        [a, b] => (*a, *b),
        _ => bail!("s1-s2-growth needs delta_list = [delta for S1, delta for S2]"),
    };
    let mut out = Vec::new();
    for &sigma in ctx.sigmas()? {
        let (mut rec, series) = growth(ctx, format!("S1, {}, delta{d1}", sigma_key(sigma)), sigma, 1, |t| {
            Ok(split_s1_sum(sigma, t, d1, Strategy::PrefixFactorized)?.total)
        })?;
        rec.rows.iter_mut().for_each(|r| r.param1 = Some(d1));
        let fit = fit_growth_exponent(&series, d1 / 2.0, SLOPE_TOL)?;
        attach_fit(&mut rec, &series, &fit, None);
        rec.settle();
        out.push(rec);

        let mut warn = false;
        let (mut rec, series) = growth(ctx, format!("S2, {}, delta{d2}", sigma_key(sigma)), sigma, 1, |t| {
            let r = split_s2_sum(sigma, t, d2, Strategy::PrefixFactorized)?;
            warn |= r.delta_warning;
            Ok(r.total)
        })?;
        if warn {
            rec.notes.push(format!("delta = {d2} >= 1/2: outside the window of the O(ln t) estimate"));
        }
        rec.rows.iter_mut().for_each(|r| r.param1 = Some(d2));
        let fit = fit_growth_exponent(&series, 0.0, FLAT_TOL)?;
        attach_fit(&mut rec, &series, &fit, Some(FLAT_TOL));
        let c = bound_envelope(&series, 0.0, 1)?.max_ratio_constant;
        let grid: Vec<f64> = series.points.iter().map(|p| p.0).collect();
        ctx.freeze(&mut rec, &format!("s2-ln-bound-{}-delta{d2}", sigma_key(sigma)), c, &grid)?;
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn j2_asymptotic(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let sigmas = ctx.sigmas()?;
    if sigmas.len() != ctx.cfg.delta_list.len() {
        bail!("j2-asymptotic pairs sigma_list with delta_list; lengths differ");
    }
    let grid = ctx.cfg.grid()?;
    let mut out = Vec::new();
    for (&sigma, &delta) in sigmas.iter().zip(&ctx.cfg.delta_list) {
        let mut rec = ctx.record(format!("{}, delta{delta}", sigma_key(sigma)));
        let mut gaps = Vec::new();
        for &t in &grid {
            let j = j2_integral(sigma, t, delta)?;
            let gap = j.relative_gap();
            gaps.push(gap);
            rec.rows.push(
                Row::new(sigma, t, C64::new(j.numeric, 0.0))
                    .params(Some(delta), Some(j.asymptotic))
                    .magnitude(gap)
                    .against(j.rate, true),
            );
        }
        // the gap should shrink along the grid, up to 2% wobble
        if gaps.windows(2).any(|w| w[1] > w[0] * 1.02) {
            rec.notes.push("numeric/asymptotic ratio does not approach 1 monotonically".into());
        }
        let c = rec.rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
        ctx.freeze(&mut rec, &format!("j2-{}-delta{delta}", sigma_key(sigma)), c, &grid)?;
        let g = rec.golden.clone().expect("just set");
        if g.status != GoldenStatus::Incomparable {
            for row in &mut rec.rows {
                row.verdict = Outcome::of(row.ratio.unwrap_or(f64::INFINITY) <= g.frozen);
            }
        }
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn gh_inequality(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let sigmas = ctx.sigmas()?;
    let mut rng = ctx.rng();
    // per sigma: draws, worst lhs / bound, all sign conditions held, all bounds held
    let mut stats = vec![(0u64, 0.0f64, true, true); sigmas.len()];
    for i in 0..ctx.cfg.draws.unwrap_or(10_000) {
        let k = i % sigmas.len();
        let sigma = sigmas[k];
        let rows = rng.gen_range(1..=50usize);
        let cols = rng.gen_range(1..=50usize);
        let a = Grid::from_fn(rows, cols, |_, _| C64::from_polar(1.0, rng.gen_range(0.0..TAU)));
        let b = Grid::from_fn(rows, cols, |m, n| ((m + 1) as f64 * (n + 1) as f64).powf(-sigma));
        let r = gh_bound_check(&a, &b)?;
        let s = &mut stats[k];
        s.0 += 1;
        s.1 = s.1.max(r.lhs / r.bound);
        s.2 &= r.sign_conditions_ok;
        s.3 &= r.holds();
    }
    let mut rec = ctx.record("worst lhs / 5GH per sigma");
    for (&sigma, &(n, worst, sign, holds)) in sigmas.iter().zip(&stats) {
        rec.rows.push(
            Row::new(sigma, 0.0, C64::new(worst, 0.0))
                .params(Some(n as f64), None)
                .extra("sign_conditions_ok", sign as u8 as f64)
                .magnitude(worst)
                .against(1.0, sign && holds),
        );
    }
    rec.settle();
    Ok(vec![rec])
}

fn mordell_tornheim(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let (a1, a2) = MT_A_SIGMAS;
    let (mut rec, series) = growth(ctx, format!("S_A, sigma1{a1}, sigma2{a2}"), a1, 1, |t| {
        Ok(mt_a_sum(a1, a2, t, Strategy::PrefixFactorized)?.value)
    })?;
    rec.rows.iter_mut().for_each(|r| r.param1 = Some(a2));
    let fit = fit_growth_exponent(&series, 0.5 - a1, SLOPE_TOL)?;
    attach_fit(&mut rec, &series, &fit, None);
    rec.settle();
    let mut out = vec![rec];
    for &sigma in ctx.sigmas()? {
        let (mut rec, series) = growth(ctx, format!("S_B, {}", sigma_key(sigma)), sigma, 1, |t| {
            Ok(mt_b_sum(sigma - 1.0, sigma, 1.0, t, Strategy::Convolution)?.total.value)
        })?;
        let fit = fit_growth_exponent(&series, 2.0 - 2.0 * sigma, SLOPE_TOL)?;
        attach_fit(&mut rec, &series, &fit, None);
        rec.settle();
        out.push(rec);
    }
    Ok(out)
}

fn rel_diff(a: C64, b: C64) -> f64 {
    let d = a.norm().max(b.norm());
    if d == 0.0 {
        0.0
    } else {
        (a - b).norm() / d
    }
}

/// One random strategy comparison; returns (op index, sigma, t, fast, slow).
fn strategy_draw(i: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<(usize, f64, f64, C64, C64)> {
    use Strategy::{BruteForce as B, Convolution as C, PrefixFactorized as P};
    let op = i % 8;
    let sigma: f64 = rng.gen_range(0.05..0.95);
    let t = rng.gen_range(2f64.ln()..1e3f64.ln()).exp();
    let n = t.floor() as u64;
    let (fast, slow) = match op {
        0 => (grid_double_sum(sigma, t, P)?.value, grid_double_sum(sigma, t, B)?.value),
        1 | 2 => {
            let u = C64::new(sigma, rng.gen_range(-50.0..50.0));
            let v = C64::new(rng.gen_range(-1.0..2.0), rng.gen_range(-50.0..50.0));
            if op == 1 {
                (f_sum(u, v, n, P)?.value, f_sum(u, v, n, B)?.value)
            } else {
                (g_sum(u, v, n, P)?.value, g_sum(u, v, n, B)?.value)
            }
        }
        3 => (tail_double_sum(sigma, t, P)?, tail_double_sum(sigma, t, B)?),
        4 => (mt_a_sum(-sigma, 1.0 + sigma, t, P)?.value, mt_a_sum(-sigma, 1.0 + sigma, t, B)?.value),
        5 => {
            (mt_b_sum(sigma - 1.0, sigma, 1.0, t, C)?.total.value, mt_b_sum(sigma - 1.0, sigma, 1.0, t, B)?.total.value)
        }
        6 => {
            let d = rng.gen_range(0.1..0.9);
            (split_s1_sum(sigma, t, d, P)?.total, split_s1_sum(sigma, t, d, B)?.total)
        }
        _ => {
            let d = rng.gen_range(0.1..0.45);
            (split_s2_sum(sigma, t, d, P)?.total, split_s2_sum(sigma, t, d, B)?.total)
        }
    };
    Ok((op, sigma, t, fast, slow))
}

fn determinism(ctx: &Ctx) -> anyhow::Result<Vec<ClaimRecord>> {
    let mut eq = ctx.record("fast strategy against brute force");
    let mut rng = ctx.rng();
    for i in 0..ctx.cfg.draws.unwrap_or(50) {
        let (op, sigma, t, fast, slow) = strategy_draw(i, &mut rng)?;
        let rel = rel_diff(fast, slow);
        eq.rows.push(
            Row::new(sigma, t, fast - slow)
                .params(Some(op as f64), None)
                .magnitude(rel)
                .against(STRATEGY_TOL, rel <= STRATEGY_TOL),
        );
    }
    eq.settle();

    // the same sweep on 1 and 8 workers must print the same bytes
    let mut sub = ExperimentConfig::for_suite("power-sum-growth")?;
    sub.t_grid = ctx.cfg.t_grid;
    sub.seed = ctx.cfg.seed;
    let mut bytes = Vec::new();
    for threads in [1usize, 8] {
        sub.threads = threads;
        let recs = with_threads(threads, || evaluate(&sub))?;
        bytes.push(to_csv(&recs));
    }
    let same = bytes[0] == bytes[1];
    let mut th = ctx.record("identical output on 1 and 8 workers");
    th.rows.push(Row::new(0.0, 0.0, C64::new(0.0, 0.0)).magnitude(!same as u8 as f64).verdict(same));
    th.notes.push(format!("sha256 {}", crate::config::sha256_hex(bytes[0].as_bytes())));
    th.settle();
    Ok(vec![eq, th])
}

fn evaluate(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ClaimRecord>> {
    let entry = lookup(&cfg.suite)?;
    let ctx = Ctx { cfg, anchor: &entry.anchor };
    let mut recs = match cfg.suite.as_str() {
        "fg-identity" => fg_identity(&ctx)?,
        "square-relation" => square_relation(&ctx)?,
        "m-partition" => m_partition(&ctx)?,
        "fl-identity" => fl_identity(&ctx)?,
        "fr-identity" => fr_identity(&ctx)?,
        "f2-bounded" => f2_bounded(&ctx)?,
        "d-growth" => single_growth(&ctx, PhaseKind::F1, |s| (1.0 - s) / 3.0, SLOPE_TOL)?,
        "power-sum-growth" => single_growth(&ctx, PhaseKind::F3, |s| 0.5 - s, POWER_SUM_TOL)?,
        "chi" => chi(&ctx)?,
        "functional-equation" => functional_equation(&ctx)?,
        "s1-s2-growth" => s1_s2_growth(&ctx)?,
        "j2-asymptotic" => j2_asymptotic(&ctx)?,
        "gh-inequality" => gh_inequality(&ctx)?,
        "mordell-tornheim" => mordell_tornheim(&ctx)?,
        "determinism" => determinism(&ctx)?,
        other => bail!("suite '{other}' is registered but has no evaluator"),
    };
    recs.iter_mut().for_each(ClaimRecord::settle);
    Ok(recs)
}

/// Run a suite on `cfg.threads` workers and write the artifact if `out_path` is set.
pub fn run_suite(cfg: &ExperimentConfig) -> anyhow::Result<Vec<ClaimRecord>> {
    cfg.validate()?;
    let recs = with_threads(cfg.threads, || evaluate(cfg))?;
    if let Some(p) = &cfg.out_path {
        emit(&recs, cfg.out_format, p)?;
    }
    Ok(recs)
}

pub fn all_passed(recs: &[ClaimRecord]) -> bool {
    recs.iter().all(|r| r.verdict.passed())
}
