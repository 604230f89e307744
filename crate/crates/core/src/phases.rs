//! The three phases `t ln(1 + t/m)`, `t ln(1 + m/t)`, `t ln m`, weighted
//! single sums over them, prefix tables of `n^{-s}`, and the ratio `C(x, t; k)`.

use rayon::prelude::*;

use crate::dd::Dd;
use crate::error::{domain, Error, Result};
use crate::kernel::{chunked_sum, cis_dd, pow_neg, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    /// `t ln(1 + t/m)`
    F1,
    /// `t ln(1 + m/t)`
    F2,
    /// `t ln m`
    F3,
}

impl PhaseKind {
    pub fn parse(s: &str) -> Option<PhaseKind> {
        match s.to_ascii_uppercase().as_str() {
            "F1" => Some(PhaseKind::F1),
            "F2" => Some(PhaseKind::F2),
            "F3" => Some(PhaseKind::F3),
            _ => None,
        }
    }
}

pub const SIGMA_GUARD: f64 = 2.0;
pub const MAX_TERMS: u64 = 100_000_000;

fn check_t(kind: PhaseKind, t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    // t = 0 only makes sense for t ln m (all phases vanish)
    if t < 0.0 || (t == 0.0 && kind != PhaseKind::F3) {
        return domain(format!("phase {kind:?} needs t > 0, got {t}"));
    }
    Ok(())
}

/// `f(m)` in binary64; F1 and F2 go through `ln_1p` so tiny ratios keep their digits.
pub fn phase_eval(kind: PhaseKind, t: f64, m: u64) -> Result<f64> {
    check_t(kind, t)?;
    if m == 0 {
        return domain("m must be >= 1");
    }
    let mf = m as f64;
    Ok(match kind {
        PhaseKind::F1 => t * (t / mf).ln_1p(),
        PhaseKind::F2 => t * (mf / t).ln_1p(),
        PhaseKind::F3 => t * mf.ln(),
    })
}

/// `f(m)` in double-double. Sums reduce this modulo 2pi before rounding.
pub fn phase_dd(kind: PhaseKind, t: f64, m: u64) -> Dd {
    if t == 0.0 {
        return Dd::ZERO;
    }
    let td = Dd::from_f64(t);
    let md = Dd::from_u64(m);
    match kind {
        PhaseKind::F1 => (td / md + 1.0).ln() * td,
        PhaseKind::F2 => (md / td + 1.0).ln() * td,
        PhaseKind::F3 => {
            if m == 1 {
                Dd::ZERO
            } else {
                md.ln() * td
            }
        }
    }
}

/// `sum_{m=lo}^{hi} m^{-sigma} e^{±i f(m)}`; `hi = lo - 1` is the empty sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumSpec {
    pub phase: PhaseKind,
    pub sigma: f64,
    pub t: f64,
    pub lo: u64,
    pub hi: u64,
    /// negate the phase
    pub conjugate: bool,
}

impl SumSpec {
    pub fn new(phase: PhaseKind, sigma: f64, t: f64, lo: u64, hi: u64) -> SumSpec {
        SumSpec { phase, sigma, t, lo, hi, conjugate: false }
    }

    pub fn conj(mut self) -> SumSpec {
        self.conjugate = !self.conjugate;
        self
    }

    pub fn len(&self) -> u64 {
        (self.hi + 1).saturating_sub(self.lo)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() {
            return Err(Error::NonFinite);
        }
        if self.sigma.abs() > SIGMA_GUARD {
            return Err(Error::ExponentWindow(self.sigma.abs()));
        }
        check_t(self.phase, self.t)?;
        if self.lo == 0 {
            return domain("lo must be >= 1");
        }
        if self.lo > self.hi + 1 {
            return domain(format!("lo = {} > hi + 1 = {}", self.lo, self.hi + 1));
        }
        if self.len() > MAX_TERMS {
            return Err(Error::Budget { what: "single_sum terms".into(), bytes: self.len(), limit: MAX_TERMS });
        }
        Ok(())
    }

    #[inline]
    pub fn term(&self, m: u64) -> C64 {
        let ph = phase_dd(self.phase, self.t, m);
        let ph = if self.conjugate { -ph } else { ph };
        let mag = if m == 1 { 1.0 } else { (-self.sigma * (m as f64).ln()).exp() };
        cis_dd(ph) * mag
    }
}

pub fn single_sum(spec: &SumSpec) -> Result<C64> {
    spec.validate()?;
    chunked_sum(spec.lo, spec.hi, |m| spec.term(m))
}

/// `[x]` for `x >= 0`, nudged so that `floor(t^p)` lands right when `t^p` is
/// an integer up to rounding (e.g. `16^0.5`).
pub fn floor_pow(t: f64, p: f64) -> u64 {
    let v = t.powf(p);
    let r = v.round();
    if (v - r).abs() <= 4.0 * f64::EPSILON * r.max(1.0) {
        // decide with the exact comparison r^(1/p) vs t when it is cheap
        let back = r.powf(1.0 / p);
        if (back - t).abs() <= 8.0 * f64::EPSILON * t {
            return r as u64;
        }
    }
    v.floor() as u64
}

/// `sum_{m=1}^{[t^delta]} m^{-sigma} e^{i t ln(1 + t/m)}`.
pub fn d_delta_sum(sigma: f64, t: f64, delta: f64) -> Result<C64> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0,1), got {delta}"));
    }
    if !(t > 1.0) {
        return domain(format!("t must exceed 1, got {t}"));
    }
    let hi = floor_pow(t, delta);
    if hi < 1 {
        return Ok(C64::new(0.0, 0.0));
    }
    single_sum(&SumSpec::new(PhaseKind::F1, sigma, t, 1, hi))
}

/// Largest table `build_prefix` will allocate.
pub const PREFIX_LIMIT: u64 = 20_000_000;

/// `cumulative[k] = sum_{n=1}^{k} n^{-s}`, immutable once built.
#[derive(Clone, Debug)]
pub struct PrefixTable {
    s: C64,
    upper: u64,
    cumulative: Vec<C64>,
}

impl PrefixTable {
    /// Table for an arbitrary complex exponent.
    pub fn for_exponent(s: C64, upper: u64) -> Result<PrefixTable> {
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
        if s.re.abs() > SIGMA_GUARD {
            return Err(Error::ExponentWindow(s.re.abs()));
        }
        if upper > PREFIX_LIMIT {
            return Err(Error::Budget {
                what: "prefix table".into(),
                bytes: (upper + 1) * 16,
                limit: (PREFIX_LIMIT + 1) * 16,
            });
        }
        let mut cumulative = vec![C64::new(0.0, 0.0); upper as usize + 1];
        cumulative[1..].par_chunks_mut(crate::kernel::CHUNK).enumerate().for_each(|(c, out)| {
            let base = (c * crate::kernel::CHUNK) as u64 + 1;
            for (j, v) in out.iter_mut().enumerate() {
                *v = pow_neg(base + j as u64, s);
            }
        });
        // sequential compensated scan; each stored entry is the rounded running value
        let (mut sr, mut si, mut cr, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for v in cumulative.iter_mut().skip(1) {
            let x = *v;
            let t = sr + x.re;
            if sr.abs() >= x.re.abs() {
                cr += (sr - t) + x.re;
            } else {
                cr += (x.re - t) + sr;
            }
            sr = t;
            let t = si + x.im;
            if si.abs() >= x.im.abs() {
                ci += (si - t) + x.im;
            } else {
                ci += (x.im - t) + si;
            }
            si = t;
            *v = C64::new(sr + cr, si + ci);
        }
        if cumulative.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PrefixTable { s, upper, cumulative })
    }

    pub fn exponent(&self) -> C64 {
        self.s
    }

    pub fn upper(&self) -> u64 {
        self.upper
    }

    pub fn cumulative(&self) -> &[C64] {
        &self.cumulative
    }

    #[inline]
    pub fn at(&self, k: u64) -> C64 {
        self.cumulative[k as usize]
    }

    /// `sum_{n=a}^{b} n^{-s}`; `b = a - 1` gives 0. Panics outside `1..=upper`.
    #[inline]
    pub fn range(&self, a: u64, b: u64) -> C64 {
        if b + 1 == a {
            return C64::new(0.0, 0.0);
        }
        assert!(a >= 1 && a <= b + 1 && b <= self.upper, "range [{a}, {b}] outside table 1..={}", self.upper);
        self.cumulative[b as usize] - self.cumulative[a as usize - 1]
    }
}

/// `cumulative[k] = sum_{n<=k} n^{-sigma ∓ it}` (upper sign unless `conjugate`).
pub fn build_prefix(sigma: f64, t: f64, conjugate: bool, upper: u64) -> Result<PrefixTable> {
    let s = if conjugate { C64::new(sigma, -t) } else { C64::new(sigma, t) };
    PrefixTable::for_exponent(s, upper)
}

fn c_ratio_parts(x: f64, t: f64, k: u32) -> Result<(f64, f64)> {
    if !(x.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x >= t {
        return Err(Error::CRatio { x, t });
    }
    if x <= 1.0 {
        return domain(format!("x must exceed 1, got {x}"));
    }
    if k < 2 {
        return domain(format!("k must be >= 2, got {k}"));
    }
    let r = x / t;
    let mut num = 1.0;
    let mut binom = 1.0;
    let mut rn = 1.0;
    for n in 1..k {
        binom = binom * (k - n + 1) as f64 / n as f64;
        rn *= r;
        num += binom * rn;
    }
    let top = rn * r; // (x/t)^k, binomial coefficient 1
    Ok((num, top))
}

/// `C(x,t;k) = (1 + sum_{n=1}^{k-1} binom(k,n)(x/t)^n) / (1 + sum_{n=1}^{k} binom(k,n)(x/t)^n)`.
pub fn c_ratio(x: f64, t: f64, k: u32) -> Result<f64> {
    let (num, top) = c_ratio_parts(x, t, k)?;
    Ok(num / (num + top))
}

/// `1 - C(x,t;k)`, computed without the cancellation of forming `C` first.
pub fn c_ratio_deficit(x: f64, t: f64, k: u32) -> Result<f64> {
    let (num, top) = c_ratio_parts(x, t, k)?;
    Ok(top / (num + top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::oracle;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn phase_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((phase_eval(PhaseKind::F1, 4.0, 4).unwrap() - 4.0 * ln2).abs() < 1e-15);
        assert!((phase_eval(PhaseKind::F2, 4.0, 4).unwrap() - 4.0 * ln2).abs() < 1e-15);
        assert_eq!(phase_eval(PhaseKind::F3, 123.0, 1).unwrap(), 0.0);
        assert_eq!(phase_eval(PhaseKind::F3, 0.0, 5).unwrap(), 0.0);
        assert!(phase_eval(PhaseKind::F1, 0.0, 5).is_err());
        assert!(phase_eval(PhaseKind::F2, -1.0, 5).is_err());
    }

    #[test]
    fn phase_dd_matches_binary64() {
        for &(k, t, m) in &[
            (PhaseKind::F1, 1e4, 3u64),
            (PhaseKind::F1, 10.0, 1_000_000),
            (PhaseKind::F2, 1e7, 1),
            (PhaseKind::F3, 1e5, 99_991),
        ] {
            let a = phase_eval(k, t, m).unwrap();
            let b = phase_dd(k, t, m).to_f64();
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * b.abs(), "{k:?} {t} {m}: {a} {b}");
        }
    }

    #[test]
    fn unit_terms_sum_to_count() {
        let v = single_sum(&SumSpec::new(PhaseKind::F3, 0.0, 0.0, 1, 7)).unwrap();
        assert_eq!(v, C64::new(7.0, 0.0));
        assert_eq!(single_sum(&SumSpec::new(PhaseKind::F3, 0.0, 1.0, 5, 4)).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn exponent_window_guard() {
        let e = single_sum(&SumSpec::new(PhaseKind::F3, -2.5, 1.0, 1, 4));
        assert_eq!(e, Err(Error::ExponentWindow(2.5)));
    }

    // values from mpmath at 40 digits
    #[test]
    fn f3_sum_half_t100() {
        let spec = SumSpec::new(PhaseKind::F3, 0.5, 100.0, 1, 100);
        let want = C64::new(2.767098710562079443055628, 0.09369732797829901582277354);
        let got = single_sum(&spec).unwrap();
        assert!(rel(got, want) < 1e-14);
        let o = oracle::oracle_recompute(&spec).unwrap();
        assert!(rel(o.to_c64(), want) < 1e-16);
    }

    #[test]
    fn f2_sum_t1000_is_small() {
        let spec = SumSpec::new(PhaseKind::F2, 0.0, 1000.0, 1, 1000);
        let want = C64::new(1.074710207691035295529601, 2.181549555026654815813408);
        let got = single_sum(&spec).unwrap();
        assert!(rel(got, want) < 1e-12);
        assert!(got.norm() <= 10.0);
    }

    #[test]
    fn d_delta_values() {
        let want = C64::new(-0.09853817752943220959378586, 0.04034882185643237573929152);
        let got = d_delta_sum(0.0, 16.0, 0.5).unwrap();
        assert!(rel(got, want) < 1e-14, "{got}");
        // [t^delta] = 1: a single term e^{i t ln(1+t)}
        let t = 1e6;
        let one = d_delta_sum(1.0, t, 1e-9).unwrap();
        let ph = phase_dd(PhaseKind::F1, t, 1);
        assert!((one - cis_dd(ph)).norm() < 1e-15);
        assert!((one.norm() - 1.0).abs() < 1e-15);
        let d = single_sum(&SumSpec::new(PhaseKind::F1, 0.5, 100.0, 1, 100)).unwrap();
        let want = C64::new(-3.485343075478222909574093, 0.2563256809661147531034254);
        assert!(rel(d, want) < 1e-13, "{d}");
    }

    #[test]
    fn floor_pow_exact_cases() {
        assert_eq!(floor_pow(16.0, 0.5), 4);
        assert_eq!(floor_pow(1000.0, 1.0 / 3.0), 10);
        assert_eq!(floor_pow(1e6, 0.5), 1000);
        assert_eq!(floor_pow(15.99, 0.5), 3);
    }

    #[test]
    fn prefix_small_table() {
        let p = build_prefix(0.0, 0.0, false, 3).unwrap();
        assert_eq!(p.cumulative(), &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        assert_eq!(p.range(2, 3), C64::new(2.0, 0.0));
        assert_eq!(p.range(3, 2), C64::new(0.0, 0.0));
    }

    #[test]
    fn prefix_budget() {
        match build_prefix(0.5, 1.0, false, PREFIX_LIMIT + 1) {
            Err(Error::Budget { bytes, .. }) => assert_eq!(bytes, (PREFIX_LIMIT + 2) * 16),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn c_ratio_examples() {
        let c = c_ratio(50.0, 100.0, 2).unwrap();
        assert!((c - (1.0 - 1.0 / 9.0)).abs() < 1e-15);
        assert!(c > 0.75 && c < 1.0);
        let near = c_ratio(100.0 - 1e-9, 100.0, 2).unwrap();
        assert!((near - 0.75).abs() < 1e-10);
        assert_eq!(c_ratio(1.0 + 1e-9, 1e15, 3).unwrap(), 1.0);
        assert!(c_ratio_deficit(1.0 + 1e-9, 1e15, 3).unwrap() < 1e-40);
        assert!(matches!(c_ratio(100.0, 100.0, 2), Err(Error::CRatio { .. })));
        assert!(c_ratio(0.5, 100.0, 2).is_err());
    }
}
