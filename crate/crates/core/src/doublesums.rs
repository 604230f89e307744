//! Double sums over integer regions: the full square, the `f`/`g` pair and
//! their exact identity, the Mordell-Tornheim type sums with a coupling
//! `(m1 + m2)` factor, and the restricted set `M` with its complements.
//!
//! Summands of the form `m^{-u} (m + k)^{-v}` reduce to one prefix-table
//! difference per row; the three-factor sum goes through FFT convolution.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::asymptotics::IdentityResidual;
use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::kernel::{chunked_sum, pow_neg, Accumulator, C64};
use crate::phases::{floor_pow, PrefixTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// every pair enumerated, O(T^2)
    BruteForce,
    /// one prefix-table difference per row, O(T)
    PrefixFactorized,
    /// FFT convolution over `n = m1 + m2`, O(T log^2 T)
    Convolution,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleSumResult {
    pub value: C64,
    pub term_count: u64,
    pub strategy: Strategy,
}

/// Largest `[t]` for O(T^2) enumeration.
pub const BRUTE_LIMIT: u64 = 30_000;

fn floor_t(t: f64) -> Result<u64> {
    if !(t >= 1.0 && t.is_finite()) {
        return domain(format!("t must be >= 1, got {t}"));
    }
    Ok(t.floor() as u64)
}

fn brute_budget(n: u64) -> Result<()> {
    if n > BRUTE_LIMIT {
        return Err(Error::Budget {
            what: "brute-force enumeration".into(),
            bytes: n * n,
            limit: BRUTE_LIMIT * BRUTE_LIMIT,
        });
    }
    Ok(())
}

fn powers(upper: u64, s: C64) -> Vec<C64> {
    use rayon::prelude::*;
    let mut v = vec![C64::new(0.0, 0.0); upper as usize + 1];
    v[1..].par_iter_mut().enumerate().for_each(|(i, z)| *z = pow_neg(i as u64 + 1, s));
    v
}

/// Sum over rows `m1` of `sum_{m2 in cols(m1)} term(m1, m2)`, every pair visited.
fn brute_rows<C, F>(rows_lo: u64, rows_hi: u64, cols: C, term: F) -> Result<(C64, u64)>
where
    C: Fn(u64) -> (u64, u64) + Sync,
    F: Fn(u64, u64) -> C64 + Sync,
{
    let v = chunked_sum(rows_lo, rows_hi, |m1| {
        let (a, b) = cols(m1);
        let mut acc = Accumulator::new();
        for m2 in a..=b.max(a.saturating_sub(1)) {
            if m2 > b {
                break;
            }
            acc.add(term(m1, m2));
        }
        acc.value()
    })?;
    let mut count = 0u64;
    for m1 in rows_lo..=rows_hi.max(rows_lo.saturating_sub(1)) {
        if m1 > rows_hi {
            break;
        }
        let (a, b) = cols(m1);
        count += (b + 1).saturating_sub(a);
    }
    Ok((v, count))
}

/// `sum_{m<=[t]} sum_{n<=[t]} m^{-s} n^{-conj(s)}`, `s = sigma + it`.
pub fn grid_double_sum(sigma: f64, t: f64, strategy: Strategy) -> Result<DoubleSumResult> {
    let tt = floor_t(t)?;
    let s = C64::new(sigma, t);
    let value = match strategy {
        Strategy::PrefixFactorized => {
            if tt > 10_000_000 {
                return Err(Error::Budget { what: "grid_double_sum terms".into(), bytes: tt, limit: 10_000_000 });
            }
            let a = chunked_sum(1, tt, |m| pow_neg(m, s))?;
            let b = chunked_sum(1, tt, |n| pow_neg(n, s.conj()))?;
            a * b
        }
        Strategy::BruteForce => {
            brute_budget(tt)?;
            let a = powers(tt, s);
            let b = powers(tt, s.conj());
            brute_rows(1, tt, |_| (1, tt), |m, n| a[m as usize] * b[n as usize])?.0
        }
        Strategy::Convolution => return domain("grid_double_sum has no convolution form"),
    };
    Ok(DoubleSumResult { value, term_count: tt * tt, strategy })
}

/// `f(u,v) = sum_{m1<=N} sum_{m2<=N} m1^{-u} (m1+m2)^{-v}`.
pub fn f_sum(u: C64, v: C64, n: u64, strategy: Strategy) -> Result<DoubleSumResult> {
    if n == 0 {
        return domain("N must be >= 1");
    }
    let value = match strategy {
        Strategy::PrefixFactorized => {
            let p = PrefixTable::for_exponent(v, 2 * n)?;
            chunked_sum(1, n, |m1| pow_neg(m1, u) * p.range(m1 + 1, m1 + n))?
        }
        Strategy::BruteForce => {
            brute_limit_terms(n)?;
            let a = powers(n, u);
            let b = powers(2 * n, v);
            brute_rows(1, n, |_| (1, n), |m1, m2| a[m1 as usize] * b[(m1 + m2) as usize])?.0
        }
        Strategy::Convolution => return domain("f_sum has no convolution form"),
    };
    Ok(DoubleSumResult { value, term_count: n * n, strategy })
}

fn brute_limit_terms(n: u64) -> Result<()> {
    if n > 100_000 {
        return Err(Error::Budget { what: "brute-force pairs".into(), bytes: n * n, limit: 100_000 * 100_000 });
    }
    Ok(())
}

/// `g(u,v) = sum_{m<=N} sum_{n=N+1}^{N+m} m^{-u} n^{-v}`.
pub fn g_sum(u: C64, v: C64, n: u64, strategy: Strategy) -> Result<DoubleSumResult> {
    if n == 0 {
        return domain("N must be >= 1");
    }
    let value = match strategy {
        Strategy::PrefixFactorized => {
            let p = PrefixTable::for_exponent(v, 2 * n)?;
            chunked_sum(1, n, |m| pow_neg(m, u) * p.range(n + 1, n + m))?
        }
        Strategy::BruteForce => {
            brute_limit_terms(n)?;
            let a = powers(n, u);
            let b = powers(2 * n, v);
            brute_rows(1, n, |m| (n + 1, n + m), |m, k| a[m as usize] * b[k as usize])?.0
        }
        Strategy::Convolution => return domain("g_sum has no convolution form"),
    };
    Ok(DoubleSumResult { value, term_count: n * (n + 1) / 2, strategy })
}

/// `f(u,v) + f(v,u) + sum m^{-u-v}` against `(sum m^{-u})(sum n^{-v}) + g(u,v) + g(v,u)`.
pub fn fg_identity_residual(u: C64, v: C64, n: u64) -> Result<IdentityResidual> {
    let st = Strategy::PrefixFactorized;
    let fuv = f_sum(u, v, n, st)?.value;
    let fvu = f_sum(v, u, n, st)?.value;
    let diag = chunked_sum(1, n, |m| pow_neg(m, u + v))?;
    let su = chunked_sum(1, n, |m| pow_neg(m, u))?;
    let sv = chunked_sum(1, n, |m| pow_neg(m, v))?;
    let guv = g_sum(u, v, n, st)?.value;
    let gvu = g_sum(v, u, n, st)?.value;
    let lhs = fuv + fvu + diag;
    let rhs = su * sv + guv + gvu;
    Ok(IdentityResidual::new(lhs, rhs, 0.0))
}

/// `sum_{m<=[t]} sum_{n=[t]+1}^{[t]+m} m^{-conj(s)} n^{-s}`; estimates use `2 Re` of it.
pub fn tail_double_sum(sigma: f64, t: f64, strategy: Strategy) -> Result<C64> {
    let tt = floor_t(t)?;
    let s = C64::new(sigma, t);
    Ok(g_sum(s.conj(), s, tt, strategy)?.value)
}

/// `2 Re{sum sum m2^{-conj s}(m1+m2)^{-s}} - |sum m^{-s}|^2` against
/// `-sum m^{-2 sigma} + 2 Re{tail}`. Envelope: the elementary size of `sum m^{-2 sigma}`.
pub fn square_relation_check(sigma: f64, t: f64) -> Result<IdentityResidual> {
    let tt = floor_t(t)?;
    if tt > 100_000 {
        return Err(Error::Budget { what: "relation check".into(), bytes: tt, limit: 100_000 });
    }
    let s = C64::new(sigma, t);
    let st = Strategy::PrefixFactorized;
    let f = f_sum(s.conj(), s, tt, st)?.value;
    let a = chunked_sum(1, tt, |m| pow_neg(m, s))?;
    let d = chunked_sum(1, tt, |m| pow_neg(m, C64::new(2.0 * sigma, 0.0)))?;
    let g = g_sum(s.conj(), s, tt, st)?.value;
    let lhs = C64::new(2.0 * f.re - a.norm_sqr(), 0.0);
    let rhs = C64::new(-d.re + 2.0 * g.re, 0.0);
    Ok(IdentityResidual::new(lhs, rhs, elementary_estimate(sigma, t)))
}

/// `t^{1-2 sigma} / (1 - 2 sigma)` (or `ln t` at `sigma = 1/2`), the size of `sum_{m<=t} m^{-2 sigma}`.
pub fn elementary_estimate(sigma: f64, t: f64) -> f64 {
    let e = 1.0 - 2.0 * sigma;
    if e.abs() < 1e-12 {
        t.ln()
    } else {
        (t.powf(e) / e).abs()
    }
}

/// `S_A = sum_{m1,m2<=[t]} (m1+m2)^{-sigma1-it} m2^{-sigma2+it}`, needs `sigma1 < 0 < 1 < sigma2`.
pub fn mt_a_sum(sigma1: f64, sigma2: f64, t: f64, strategy: Strategy) -> Result<DoubleSumResult> {
    if !(sigma1 < 0.0 && sigma2 > 1.0) {
        return domain(format!("needs sigma1 < 0 and sigma2 > 1, got ({sigma1}, {sigma2})"));
    }
    let tt = floor_t(t)?;
    let c_exp = C64::new(sigma1, t);
    let b_exp = C64::new(sigma2, -t);
    let value = match strategy {
        Strategy::PrefixFactorized => {
            let p = PrefixTable::for_exponent(c_exp, 2 * tt)?;
            chunked_sum(1, tt, |m| pow_neg(m, b_exp) * p.range(m + 1, m + tt))?
        }
        Strategy::BruteForce => {
            brute_budget(tt)?;
            let b = powers(tt, b_exp);
            let c = powers(2 * tt, c_exp);
            brute_rows(1, tt, |_| (1, tt), |m1, m2| c[(m1 + m2) as usize] * b[m2 as usize])?.0
        }
        Strategy::Convolution => return domain("S_A is computed by prefix factorization"),
    };
    Ok(DoubleSumResult { value, term_count: tt * tt, strategy })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MtB {
    pub total: DoubleSumResult,
    /// pairs with `m2 <= m1`
    pub part1: C64,
    /// pairs with `m2 > m1`
    pub part2: C64,
    /// `part1` enumerated column-first (`m2` outer); brute force only
    pub part1_exchanged: Option<C64>,
}

const CDQ_LEAF: usize = 64;

fn convolve_add(planner: &mut FftPlanner<f64>, a: &[C64], b: &[C64], out: &mut [C64]) {
    let (la, lb) = (a.len(), b.len());
    if la == 0 || lb == 0 {
        return;
    }
    if la.min(lb) <= 32 {
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return;
    }
    let len = (la + lb - 1).next_power_of_two();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let mut fa = vec![Complex64::new(0.0, 0.0); len];
    let mut fb = vec![Complex64::new(0.0, 0.0); len];
    fa[..la].copy_from_slice(a);
    fb[..lb].copy_from_slice(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / len as f64;
    for (k, o) in out.iter_mut().take(la + lb - 1).enumerate() {
        *o += fa[k] * scale;
    }
}

/// Splits `sum_{m1+m2=n} a[m1] b[m2]` over `l..=r` into the `m2 <= m1` part (`lower`)
/// and the `m2 > m1` part (`upper`), by divide and conquer on the index range.
fn cdq(planner: &mut FftPlanner<f64>, a: &[C64], b: &[C64], l: usize, r: usize, lower: &mut [C64], upper: &mut [C64]) {
    if r + 1 - l <= CDQ_LEAF {
        for m1 in l..=r {
            for m2 in l..=r {
                let v = a[m1] * b[m2];
                if m2 <= m1 {
                    lower[m1 + m2] += v;
                } else {
                    upper[m1 + m2] += v;
                }
            }
        }
        return;
    }
    let mid = (l + r) / 2;
    // m1 in (mid, r], m2 in [l, mid]: always m2 < m1
    convolve_add(planner, &a[mid + 1..=r], &b[l..=mid], &mut lower[mid + 1 + l..]);
    // m1 in [l, mid], m2 in (mid, r]: always m2 > m1
    convolve_add(planner, &a[l..=mid], &b[mid + 1..=r], &mut upper[l + mid + 1..]);
    cdq(planner, a, b, l, mid, lower, upper);
    cdq(planner, a, b, mid + 1, r, lower, upper);
}

/// `S_B = sum_{m1,m2<=[t]} (m1+m2)^{-sigma1-it} m2^{-sigma2+it} m1^{-sigma3}`, split at `m2 <= m1`.
pub fn mt_b_sum(sigma1: f64, sigma2: f64, sigma3: f64, t: f64, strategy: Strategy) -> Result<MtB> {
    if !(sigma1 < 0.0 && sigma2 > 0.0 && sigma2 < 1.0 && sigma3 >= 1.0) {
        return domain(format!("needs sigma1 < 0, sigma2 in (0,1), sigma3 >= 1, got ({sigma1}, {sigma2}, {sigma3})"));
    }
    let tt = floor_t(t)?;
    let c_exp = C64::new(sigma1, t);
    let b_exp = C64::new(sigma2, -t);
    let a_exp = C64::new(sigma3, 0.0);
    match strategy {
        Strategy::BruteForce => {
            brute_budget(tt)?;
            let a = powers(tt, a_exp);
            let b = powers(tt, b_exp);
            let c = powers(2 * tt, c_exp);
            let term = |m1: u64, m2: u64| c[(m1 + m2) as usize] * b[m2 as usize] * a[m1 as usize];
            let (p1, n1) = brute_rows(1, tt, |m1| (1, m1), term)?;
            let (p2, n2) = brute_rows(1, tt, |m1| (m1 + 1, tt), term)?;
            // column-first: m2 outer, m1 from m2 to [t]
            let (p1x, _) = brute_rows(1, tt, |m2| (m2, tt), |m2, m1| term(m1, m2))?;
            Ok(MtB {
                total: DoubleSumResult { value: p1 + p2, term_count: n1 + n2, strategy },
                part1: p1,
                part2: p2,
                part1_exchanged: Some(p1x),
            })
        }
        Strategy::Convolution => {
            if tt > 2_000_000 {
                return Err(Error::Budget { what: "S_B convolution".into(), bytes: tt * 64, limit: 2_000_000 * 64 });
            }
            let a = powers(tt, a_exp);
            let b = powers(tt, b_exp);
            let mut lower = vec![C64::new(0.0, 0.0); 2 * tt as usize + 1];
            let mut upper = lower.clone();
            let mut planner = FftPlanner::new();
            cdq(&mut planner, &a, &b, 1, tt as usize, &mut lower, &mut upper);
            let p1 = chunked_sum(2, 2 * tt, |n| pow_neg(n, c_exp) * lower[n as usize])?;
            let p2 = chunked_sum(2, 2 * tt, |n| pow_neg(n, c_exp) * upper[n as usize])?;
            Ok(MtB {
                total: DoubleSumResult { value: p1 + p2, term_count: tt * tt, strategy },
                part1: p1,
                part2: p2,
                part1_exchanged: None,
            })
        }
        Strategy::PrefixFactorized => domain("S_B does not factor through a prefix table; use Convolution"),
    }
}

/// Thresholds of the set `M`: `a = t^{1-delta3} - 1` (upper ratio), `b = t^{1-delta2} - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MSet {
    pub t: f64,
    pub tt: u64,
    pub a: f64,
    pub b: f64,
}

impl MSet {
    pub fn new(t: f64, delta2: f64, delta3: f64) -> Result<MSet> {
        for (name, d) in [("delta2", delta2), ("delta3", delta3)] {
            if !(d > 0.0 && d < 1.0) {
                return domain(format!("{name} must lie in (0,1), got {d}"));
            }
        }
        let tt = floor_t(t)?;
        Ok(MSet { t, tt, a: t.powf(1.0 - delta3) - 1.0, b: t.powf(1.0 - delta2) - 1.0 })
    }

    /// `m2/m1 < a` and `1/b < m2/m1`, compared as exact products against the
    /// binary64 thresholds (no division).
    pub fn contains(&self, m1: u64, m2: u64) -> bool {
        if m1 < 1 || m2 < 1 || m1 > self.tt || m2 > self.tt || self.a <= 0.0 || self.b <= 0.0 {
            return false;
        }
        let upper = Dd::from_u64(m2) < Dd::from_f64(self.a) * m1 as f64;
        let lower = Dd::from_u64(m1) < Dd::from_f64(self.b) * m2 as f64;
        upper && lower
    }

    /// Smallest `k` with `k >= a m1` (first column of the upper complement).
    pub fn upper_start(&self, m1: u64) -> u64 {
        let x = Dd::from_f64(self.a) * m1 as f64;
        let mut k = x.to_f64().ceil().max(0.0) as u64;
        while k > 0 && Dd::from_u64(k - 1) >= x {
            k -= 1;
        }
        while Dd::from_u64(k) < x {
            k += 1;
        }
        k
    }

    /// Largest `k` with `b k <= m1` (last column of the lower complement).
    pub fn lower_end(&self, m1: u64) -> u64 {
        let bd = Dd::from_f64(self.b);
        let m = Dd::from_u64(m1);
        let mut k = (m1 as f64 / self.b).floor().max(0.0) as u64;
        while k > 0 && bd * k as f64 > m {
            k -= 1;
        }
        while bd * (k + 1) as f64 <= m {
            k += 1;
        }
        k
    }
}

pub fn m_set_contains(m1: u64, m2: u64, t: f64, delta2: f64, delta3: f64) -> Result<bool> {
    if m1 < 1 || m2 < 1 {
        return domain("m1, m2 must be >= 1");
    }
    Ok(MSet::new(t, delta2, delta3)?.contains(m1, m2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitDecomposition {
    /// full square sum against `M + S1 + S2`
    pub identity: IdentityResidual,
    pub cells: u64,
    pub m_count: u64,
    pub s1_count: u64,
    pub s2_count: u64,
    /// every cell of the square lies in exactly one of the three sets
    pub partition_exact: bool,
    /// cells covered by none of the sets when the complements use the literal bounds
    /// `[t/a] - 1` and `[m1/b] - 1`
    pub literal_uncovered: u64,
    /// cells where the simplified bounds (`[t^delta3]` rows, `[m1/t^{1-delta2}]` columns)
    /// differ from the exact complements
    pub simplified_s1_diff: u64,
    pub simplified_s2_diff: u64,
}

/// Exact decomposition of the full square into `M`, its upper complement `S1`
/// (`m2 >= a m1`) and its lower complement `S2` (`b m2 <= m1`).
pub fn split_decomposition_residual(sigma: f64, t: f64, delta2: f64, delta3: f64) -> Result<SplitDecomposition> {
    for (name, d) in [("delta2", delta2), ("delta3", delta3)] {
        if !(d > 0.0 && d < 0.5) {
            return domain(format!("{name} must lie in (0, 1/2), got {d}"));
        }
    }
    let set = MSet::new(t, delta2, delta3)?;
    let tt = set.tt;
    brute_budget(tt)?;
    if set.a * set.b <= 1.0 {
        return domain("thresholds overlap (a b <= 1); t too small for these deltas");
    }
    let s = C64::new(sigma, t);
    // membership census, cell by cell
    let (mut m_count, mut s1_count, mut s2_count, mut exact) = (0u64, 0u64, 0u64, true);
    let lit_rows = ((t / set.a).floor() as i64 - 1).max(0) as u64;
    let (mut lit_uncovered, mut simp1, mut simp2) = (0u64, 0u64, 0u64);
    let simp_rows = floor_pow(t, delta3);
    let t1d2 = t.powf(1.0 - delta2);
    let s2_first_row = floor_pow(t, 1.0 - delta2);
    for m1 in 1..=tt {
        let k1 = set.upper_start(m1);
        let k2 = set.lower_end(m1);
        let lit_s1_lo = (set.a * m1 as f64).floor() as u64 + 1;
        let lit_s2_hi = ((m1 as f64 / set.b).floor() as i64 - 1).max(0) as u64;
        let simp_s1_lo = (t.powf(1.0 - delta3) * m1 as f64).floor() as u64 + 1;
        let simp_s2_hi = (m1 as f64 / t1d2).floor() as u64;
        for m2 in 1..=tt {
            let in_m = set.contains(m1, m2);
            let in1 = m2 >= k1;
            let in2 = m2 <= k2;
            m_count += in_m as u64;
            s1_count += in1 as u64;
            s2_count += in2 as u64;
            if (in_m as u8 + in1 as u8 + in2 as u8) != 1 {
                exact = false;
            }
            let lit1 = m1 <= lit_rows && m2 >= lit_s1_lo;
            let lit2 = m1 >= s2_first_row && m2 <= lit_s2_hi;
            if !(in_m || lit1 || lit2) {
                lit_uncovered += 1;
            }
            let sp1 = m1 <= simp_rows && m2 >= simp_s1_lo;
            let sp2 = m1 >= s2_first_row && m2 <= simp_s2_hi;
            simp1 += (sp1 != in1) as u64;
            simp2 += (sp2 != in2) as u64;
        }
    }
    // sums: the full square pair by pair, the three pieces by prefix differences over n = m1 + m2
    let a = powers(tt, s);
    let b = powers(2 * tt, s.conj());
    let (full, _) = brute_rows(1, tt, |_| (1, tt), |m1, m2| a[m1 as usize] * b[(m1 + m2) as usize])?;
    let p = PrefixTable::for_exponent(s.conj(), 2 * tt)?;
    let row = |m1: u64, lo: u64, hi: u64| -> C64 {
        if hi < lo {
            C64::new(0.0, 0.0)
        } else {
            a[m1 as usize] * p.range(m1 + lo, m1 + hi)
        }
    };
    let m_sum = chunked_sum(1, tt, |m1| {
        let lo = set.lower_end(m1) + 1;
        let hi = set.upper_start(m1).saturating_sub(1).min(tt);
        row(m1, lo, hi)
    })?;
    let s1 = chunked_sum(1, tt, |m1| row(m1, set.upper_start(m1).max(1), tt))?;
    let s2 = chunked_sum(1, tt, |m1| row(m1, 1, set.lower_end(m1).min(tt)))?;
    Ok(SplitDecomposition {
        identity: IdentityResidual::new(full, m_sum + s1 + s2, 0.0),
        cells: tt * tt,
        m_count,
        s1_count,
        s2_count,
        partition_exact: exact && m_count + s1_count + s2_count == tt * tt,
        literal_uncovered: lit_uncovered,
        simplified_s1_diff: simp1,
        simplified_s2_diff: simp2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitS1 {
    pub total: C64,
    /// `n` up to `[t]`
    pub sa: C64,
    /// `n` from `[t]+1` to `[t]+m`
    pub sb: C64,
    pub rows: u64,
}

/// `S1 = sum_{m<=[t^delta]} sum_{n=[t^{1-delta} m]+1}^{[t]+m} m^{-s} n^{-conj s}`.
pub fn split_s1_sum(sigma: f64, t: f64, delta: f64, strategy: Strategy) -> Result<SplitS1> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0,1), got {delta}"));
    }
    let tt = floor_t(t)?;
    let k = floor_pow(t, delta);
    let s = C64::new(sigma, t);
    let w = t.powf(1.0 - delta);
    let lo = |m: u64| ((w * m as f64).floor() as u64 + 1).min(tt + 1);
    let (total, sa, sb) = match strategy {
        Strategy::PrefixFactorized => {
            let p = PrefixTable::for_exponent(s.conj(), tt + k)?;
            let total = chunked_sum(1, k, |m| pow_neg(m, s) * p.range(lo(m), tt + m))?;
            let sa = chunked_sum(1, k, |m| pow_neg(m, s) * p.range(lo(m), tt))?;
            let sb = chunked_sum(1, k, |m| pow_neg(m, s) * p.range(tt + 1, tt + m))?;
            (total, sa, sb)
        }
        Strategy::BruteForce => {
            brute_budget(tt)?;
            let b = powers(tt + k, s.conj());
            let f = |m: u64, n: u64| pow_neg(m, s) * b[n as usize];
            let total = brute_rows(1, k, |m| (lo(m), tt + m), f)?.0;
            let sa = brute_rows(1, k, |m| (lo(m), tt), f)?.0;
            let sb = brute_rows(1, k, |m| (tt + 1, tt + m), f)?.0;
            (total, sa, sb)
        }
        Strategy::Convolution => return domain("S1 is computed by prefix factorization"),
    };
    Ok(SplitS1 { total, sa, sb, rows: k })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitS2 {
    pub total: C64,
    /// `n` from `m+1` to `min([t], [m(1+t^{delta-1})])`
    pub sa: C64,
    /// `n` from `[t]+1` to `[m(1+t^{delta-1})]`, rows from `l(t)`
    pub sb: C64,
    /// `l(t) = [t - t^delta] + 1`
    pub l_of_t: u64,
    /// no row below `l(t)` reaches past `[t]`
    pub l_consistent: bool,
    /// `delta >= 1/2`: outside the window of the sharp estimate
    pub delta_warning: bool,
}

/// `S2 = sum_{m=[t^{1-delta}]}^{[t]} sum_{n=m+1}^{[m(1+t^{delta-1})]} m^{-s} n^{-conj s}`.
pub fn split_s2_sum(sigma: f64, t: f64, delta: f64, strategy: Strategy) -> Result<SplitS2> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0,1), got {delta}"));
    }
    let tt = floor_t(t)?;
    let s = C64::new(sigma, t);
    let first = floor_pow(t, 1.0 - delta).max(1);
    let r = t.powf(delta - 1.0);
    // n-range upper end m + [m t^{delta-1}]
    let top = |m: u64| m + (m as f64 * r).floor() as u64;
    let l_of_t = (t - t.powf(delta)).floor() as u64 + 1;
    let l_consistent = (first..l_of_t.min(tt + 1)).all(|m| top(m) <= tt);
    let upper = top(tt);
    let (total, sa, sb) = match strategy {
        Strategy::PrefixFactorized => {
            let p = PrefixTable::for_exponent(s.conj(), upper)?;
            let total = chunked_sum(first, tt, |m| pow_neg(m, s) * p.range(m + 1, top(m)))?;
            let sa = chunked_sum(first, tt, |m| pow_neg(m, s) * p.range(m + 1, top(m).min(tt)))?;
            let sb = chunked_sum(l_of_t.max(first), tt, |m| {
                let hi = top(m);
                if hi > tt {
                    pow_neg(m, s) * p.range(tt + 1, hi)
                } else {
                    C64::new(0.0, 0.0)
                }
            })?;
            (total, sa, sb)
        }
        Strategy::BruteForce => {
            brute_budget(tt)?;
            let b = powers(upper, s.conj());
            let f = |m: u64, n: u64| pow_neg(m, s) * b[n as usize];
            let total = brute_rows(first, tt, |m| (m + 1, top(m)), f)?.0;
            let sa = brute_rows(first, tt, |m| (m + 1, top(m).min(tt)), f)?.0;
            let sb = brute_rows(l_of_t.max(first), tt, |m| (tt + 1, top(m)), f)?.0;
            (total, sa, sb)
        }
        Strategy::Convolution => return domain("S2 is computed by prefix factorization"),
    };
    Ok(SplitS2 { total, sa, sb, l_of_t, l_consistent, delta_warning: delta >= 0.5 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::CDd;
    use crate::kernel::oracle;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn grid_small_t_is_real() {
        let r = grid_double_sum(1.0, 2.0, Strategy::PrefixFactorized).unwrap();
        assert!(r.value.im.abs() <= 1e-15);
        let x = pow_neg(2, C64::new(1.0, 2.0));
        let want = (C64::new(1.0, 0.0) + x) * (C64::new(1.0, 0.0) + x.conj());
        assert!((r.value - want).norm() < 1e-15);
        let b = grid_double_sum(0.5, 300.0, Strategy::BruteForce).unwrap();
        let p = grid_double_sum(0.5, 300.0, Strategy::PrefixFactorized).unwrap();
        assert!(rel(b.value, p.value) < 1e-11);
    }

    #[test]
    fn f_and_g_trivial_cases() {
        let u = C64::new(0.3, 1.0);
        let v = C64::new(0.7, -2.0);
        for st in [Strategy::PrefixFactorized, Strategy::BruteForce] {
            let f1 = f_sum(u, v, 1, st).unwrap().value;
            assert!((f1 - pow_neg(2, v)).norm() < 1e-15);
            let g1 = g_sum(u, v, 1, st).unwrap().value;
            assert!((g1 - pow_neg(2, v)).norm() < 1e-15);
            let z = C64::new(0.0, 0.0);
            assert!((f_sum(z, z, 2, st).unwrap().value - 4.0).norm() < 1e-15);
            assert!((g_sum(z, z, 2, st).unwrap().value - 3.0).norm() < 1e-15);
        }
    }

    // mpmath, 40 digits
    #[test]
    fn f_and_g_reference_values() {
        let u = C64::new(0.5, 3.0);
        let v = C64::new(1.2, -3.0);
        let f = f_sum(u, v, 100, Strategy::PrefixFactorized).unwrap().value;
        assert!(rel(f, C64::new(-0.5503347662081948764726381, 3.801533318239765287526043)) < 1e-13);
        let g = g_sum(u, v, 100, Strategy::PrefixFactorized).unwrap().value;
        assert!(rel(g, C64::new(-0.44486176700105060748285, 0.733859969504850249654261)) < 1e-13);
    }

    #[test]
    fn identity_hand_cases() {
        let z = C64::new(0.0, 0.0);
        let r = fg_identity_residual(z, z, 2).unwrap();
        assert!((r.lhs - 10.0).norm() < 1e-15 && (r.rhs - 10.0).norm() < 1e-15);
        let r = fg_identity_residual(C64::new(0.4, 7.0), C64::new(1.1, -2.0), 1).unwrap();
        assert!(r.residual.norm() < 1e-15);
    }

    #[test]
    fn identity_large_n() {
        let r = fg_identity_residual(C64::new(0.7, 50.0), C64::new(0.2, -11.0), 10_000).unwrap();
        assert!(r.residual.norm() <= 1e-10 * (r.lhs.norm() + 1.0));
    }

    #[test]
    fn tail_single_pair() {
        let s = C64::new(0.5, 1.5);
        let v = tail_double_sum(0.5, 1.5, Strategy::PrefixFactorized).unwrap();
        assert!((v - pow_neg(2, s)).norm() < 1e-15);
    }

    #[test]
    fn relation_holds() {
        let r = square_relation_check(0.5, 500.0).unwrap();
        assert!(r.relative() < 1e-9);
        let r = square_relation_check(0.3, 1.0).unwrap();
        assert!(r.residual.norm() < 1e-15);
    }

    #[test]
    fn mt_a_single_term_and_strategies() {
        let a = mt_a_sum(-0.5, 1.5, 1.5, Strategy::PrefixFactorized).unwrap();
        assert!((a.value - pow_neg(2, C64::new(-0.5, 1.5))).norm() < 1e-15);
        let x = mt_a_sum(-0.5, 1.5, 400.0, Strategy::PrefixFactorized).unwrap().value;
        let y = mt_a_sum(-0.5, 1.5, 400.0, Strategy::BruteForce).unwrap().value;
        assert!(rel(x, y) < 1e-10);
        let b = mt_b_sum(-0.7, 0.3, 1.0, 1.5, Strategy::BruteForce).unwrap();
        assert!((b.part1 - pow_neg(2, C64::new(-0.7, 1.5))).norm() < 1e-15);
        assert_eq!(b.part2, C64::new(0.0, 0.0));
    }

    #[test]
    fn mt_b_exchange_and_convolution() {
        let b = mt_b_sum(-0.7, 0.3, 1.0, 200.0, Strategy::BruteForce).unwrap();
        assert!(rel(b.part1_exchanged.unwrap(), b.part1) < 1e-12);
        let c = mt_b_sum(-0.7, 0.3, 1.0, 200.0, Strategy::Convolution).unwrap();
        assert!(rel(c.part1, b.part1) < 1e-10);
        assert!(rel(c.part2, b.part2) < 1e-10);
        assert!(mt_b_sum(-0.7, 0.3, 1.0, 200.0, Strategy::PrefixFactorized).is_err());
    }

    #[test]
    fn m_set_examples() {
        assert!(m_set_contains(1, 5, 100.0, 0.5, 0.5).unwrap());
        assert!(!m_set_contains(1, 9, 100.0, 0.5, 0.5).unwrap());
        assert!(!m_set_contains(100, 1, 100.0, 0.5, 0.5).unwrap());
        assert!(m_set_contains(1, 1, 100.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn decomposition_small() {
        let d = split_decomposition_residual(0.5, 50.0, 0.4, 0.4).unwrap();
        assert!(d.partition_exact);
        assert_eq!(d.m_count + d.s1_count + d.s2_count, 2500);
        assert!(d.identity.relative() < 1e-12);
    }

    #[test]
    fn split_pieces() {
        let r = split_s1_sum(0.5, 1000.0, 0.3, Strategy::PrefixFactorized).unwrap();
        assert!(rel(r.sa + r.sb, r.total) < 1e-12);
        let b = split_s1_sum(0.5, 1000.0, 0.3, Strategy::BruteForce).unwrap();
        assert!(rel(b.total, r.total) < 1e-10);
        // [t^delta] = 1
        let one = split_s1_sum(0.5, 50.0, 0.1, Strategy::PrefixFactorized).unwrap();
        assert_eq!(one.rows, 1);
        let r2 = split_s2_sum(0.5, 100.0, 0.5, Strategy::PrefixFactorized).unwrap();
        assert_eq!(r2.l_of_t, 91);
        assert!(r2.l_consistent && r2.delta_warning);
        let p = split_s2_sum(0.5, 1000.0, 0.3, Strategy::PrefixFactorized).unwrap();
        let q = split_s2_sum(0.5, 1000.0, 0.3, Strategy::BruteForce).unwrap();
        assert!(rel(p.total, q.total) < 1e-10);
        assert!(rel(p.sa + p.sb, p.total) < 1e-12);
    }

    #[test]
    fn oracle_cross_check_tail() {
        let s = CDd::from_f64(0.5, 1000.0);
        let tt = 1000u64;
        let o = oracle::double_sum(
            1..=tt,
            |m| tt + 1..=tt + m,
            |m, n| oracle::pow_neg(m, s.conj()) * oracle::pow_neg(n, s),
        );
        let v = tail_double_sum(0.5, 1000.0, Strategy::PrefixFactorized).unwrap();
        assert!(rel(v, oracle::to_c64(o)) < 1e-10);
    }
}
