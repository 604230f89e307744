//! Compensated complex summation, the deterministic chunked reduction every
//! sweep goes through, complex log-gamma, and the double-double oracle.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Chunk length for every parallel sum. Changing it changes low-order bits.
pub const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Standard,
    Extended,
}

/// A complex value tagged with the precision it was computed in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexScalar {
    Standard(C64),
    Extended(CDd),
}

impl ComplexScalar {
    pub fn precision(&self) -> Precision {
        match self {
            ComplexScalar::Standard(_) => Precision::Standard,
            ComplexScalar::Extended(_) => Precision::Extended,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match *self {
            ComplexScalar::Standard(z) => z,
            ComplexScalar::Extended(z) => {
                let (re, im) = z.to_pair();
                C64::new(re, im)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ComplexScalar::Standard(z) => z.is_finite(),
            ComplexScalar::Extended(z) => z.is_finite(),
        }
    }
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Neumaier accumulator, real and imaginary parts compensated separately.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    pub running_sum: C64,
    pub compensation: C64,
    pub count: u64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: C64) {
        neumaier(&mut self.running_sum.re, &mut self.compensation.re, x.re);
        neumaier(&mut self.running_sum.im, &mut self.compensation.im, x.im);
        self.count += 1;
    }

    /// The compensated add of two partial sums; `a.combine(b)` is `a ⊕ b`.
    pub fn combine(mut self, other: &Accumulator) -> Accumulator {
        let n = self.count + other.count;
        self.add(other.running_sum);
        self.add(other.compensation);
        self.count = n;
        self
    }

    #[inline]
    pub fn value(&self) -> C64 {
        self.running_sum + self.compensation
    }
}

fn finite_or_err(z: C64) -> Result<C64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}

/// Compensated sum of a term slice.
pub fn sum_compensated(terms: &[C64]) -> Result<C64> {
    let mut acc = Accumulator::new();
    for &x in terms {
        if !x.is_finite() {
            return Err(Error::NonFinite);
        }
        acc.add(x);
    }
    finite_or_err(acc.value())
}

/// Ordered pairwise reduction: level by level, `(c0 ⊕ c1), (c2 ⊕ c3), ...`,
/// an odd tail carried up unchanged.
pub fn reduce_deterministic(chunks: &[Accumulator]) -> Accumulator {
    if chunks.is_empty() {
        return Accumulator::new();
    }
    let mut level: Vec<Accumulator> = chunks.to_vec();
    while level.len() > 1 {
        let next = level.chunks(2).map(|p| if p.len() == 2 { p[0].combine(&p[1]) } else { p[0] }).collect();
        level = next;
    }
    level[0]
}

/// Per-chunk partial sums of `f(m)` for `m` in `lo..=hi`, chunks of `chunk` indices
/// starting at `lo`. Evaluated in parallel, returned in index order.
pub fn chunk_partials<F>(lo: u64, hi: u64, chunk: usize, f: F) -> Vec<Accumulator>
where
    F: Fn(u64) -> C64 + Sync,
{
    if hi < lo {
        return Vec::new();
    }
    let n = hi - lo + 1;
    let chunk = chunk.max(1) as u64;
    let nchunks = n.div_ceil(chunk);
    (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * chunk;
            let b = (a + chunk - 1).min(hi);
            let mut acc = Accumulator::new();
            for m in a..=b {
                acc.add(f(m));
            }
            acc
        })
        .collect()
}

/// `sum_{m=lo}^{hi} f(m)` with fixed chunking and pairwise reduction, so the
/// result does not depend on the number of worker threads. `hi = lo - 1` is the empty sum.
pub fn chunked_sum<F>(lo: u64, hi: u64, f: F) -> Result<C64>
where
    F: Fn(u64) -> C64 + Sync,
{
    let parts = chunk_partials(lo, hi, CHUNK, f);
    finite_or_err(reduce_deterministic(&parts).value())
}

/// Run `f` on a dedicated pool of `threads` workers.
pub fn with_threads<R, F>(threads: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// `e^{i theta}` for a double-double angle, reduced mod 2pi before rounding.
#[inline]
pub fn cis_dd(theta: Dd) -> C64 {
    let r = theta.rem_tau().to_f64();
    let (s, c) = r.sin_cos();
    C64::new(c, s)
}

/// `n^{-s}` with the phase `Im(s) ln n` carried in double-double, so large
/// `t` does not cost phase accuracy.
#[inline]
pub fn pow_neg(n: u64, s: C64) -> C64 {
    if n == 1 {
        return C64::new(1.0, 0.0);
    }
    let l = Dd::from_u64(n).ln();
    let mag = (-s.re * l.hi).exp();
    let ph = cis_dd(l * (-s.im));
    ph * mag
}

// B_{2k} / (2k (2k-1)), k = 1..15, as hi + lo
const STIRLING: [(f64, f64); 15] = [
    (0.08333333333333333, 4.625929269271485e-18),
    (-0.002777777777777778, 1.0601087908747154e-19),
    (0.0007936507936507937, 6.883823317368282e-22),
    (-0.0005952380952380953, 5.36938218754726e-20),
    (0.0008417508417508417, 3.6870174889237694e-20),
    (-0.0019175269175269176, 1.0675702776872475e-19),
    (0.00641025641025641, 2.2240044563805217e-19),
    (-0.029550653594771242, 4.861760957508855e-19),
    (0.17964437236883057, -6.401600482710946e-19),
    (-1.3924322169059011, 1.5837056989230303e-17),
    (13.402864044168393, -6.154114101993966e-16),
    (-156.84828462600203, 9.391823141715389e-15),
    (2193.1033333333335, -1.3339255626002948e-13),
    (-36108.77125372499, 5.897583353514365e-13),
    (691472.268851313, 2.5585296305158e-11),
];

const LN_PI: f64 = 1.1447298858494002;
const HALF_LN_TAU: f64 = 0.9189385332046728;

fn is_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

/// `ln sin(pi z)` on the branch that makes the reflection formula reproduce
/// the analytic continuation of `ln Gamma` from the positive real axis.
fn ln_sin_pi(z: C64) -> C64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin x = e^{-ix} (1 - e^{2ix}) i/2, x = pi z, |e^{2ix}| <= 1 here
    let pi = std::f64::consts::PI;
    let frac = z.re - z.re.round();
    let (s, c) = (2.0 * pi * frac).sin_cos();
    let w = C64::new(c, s) * (-2.0 * pi * z.im).exp();
    let one_minus = C64::new(1.0, 0.0) - w;
    let l = if w.norm() < 1e-3 {
        // ln(1 - w) by series where plain ln loses relative accuracy
        let mut acc = C64::new(0.0, 0.0);
        let mut p = w;
        for k in 1..12 {
            acc -= p / k as f64;
            p *= w;
        }
        acc
    } else {
        one_minus.ln()
    };
    C64::new(pi * z.im, -pi * z.re) + l + C64::new(-std::f64::consts::LN_2, pi / 2.0)
}

fn stirling(w: C64) -> C64 {
    let r = w.inv();
    let r2 = r * r;
    let mut series = C64::new(0.0, 0.0);
    for &(c, _) in STIRLING[..8].iter().rev() {
        series = series * r2 + c;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_TAU + series * r
}

/// Complex `ln Gamma(z)`: Stirling series after an upward shift to `|z| >= 15`,
/// reflection for `Re z < 1/2`. Branch: continuation from the positive real axis
/// (imaginary part continuous off the negative real axis, not folded into (-pi, pi]).
pub fn log_gamma_complex(z: C64) -> Result<C64> {
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    if is_pole(z) {
        return Err(Error::GammaPole(format!("{z}")));
    }
    if z.re < 0.5 {
        let rest = log_gamma_right(C64::new(1.0, 0.0) - z);
        return Ok(C64::new(LN_PI, 0.0) - ln_sin_pi(z) - rest);
    }
    Ok(log_gamma_right(z))
}

fn log_gamma_right(z: C64) -> C64 {
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

pub(crate) fn ln_sin_pi_dd(z: CDd) -> CDd {
    if z.im.hi < 0.0 {
        return ln_sin_pi_dd(z.conj()).conj();
    }
    let x = z.scale(Dd::PI);
    let i = CDd::i();
    let w = (i * x).scale(Dd::from_f64(2.0)).exp();
    let l = (CDd::ONE - w).ln();
    CDd::new(x.im, -x.re) + l + CDd::new(-Dd::LN2, Dd::HALF_PI)
}

fn stirling_dd(w: CDd) -> CDd {
    let r = CDd::ONE / w;
    let r2 = r * r;
    let mut series = CDd::ZERO;
    for &(hi, lo) in STIRLING.iter().rev() {
        series = series * r2 + CDd::real(Dd::new(hi, lo));
    }
    let half = CDd::from_f64(0.5, 0.0);
    (w - half) * w.ln() - w + CDd::real(Dd::HALF_LN_TAU) + series * r
}

/// Double-double `ln Gamma`, same branch as [`log_gamma_complex`].
pub fn log_gamma_dd(z: CDd) -> Result<CDd> {
    let zf = C64::new(z.re.to_f64(), z.im.to_f64());
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    if z.im.hi == 0.0 && z.im.lo == 0.0 && z.re.hi <= 0.0 && z.re.floor() == z.re {
        return Err(Error::GammaPole(format!("{zf}")));
    }
    if z.re.hi < 0.5 {
        let rest = log_gamma_right_dd(CDd::ONE - z);
        return Ok(CDd::real(Dd::LN_PI) - ln_sin_pi_dd(z) - rest);
    }
    Ok(log_gamma_right_dd(z))
}

fn log_gamma_right_dd(z: CDd) -> CDd {
    let mut w = z;
    let mut shift = CDd::ZERO;
    while w.norm_sqr().hi < 900.0 {
        shift += w.ln();
        w += CDd::ONE;
    }
    stirling_dd(w) - shift
}

/// Extended-precision reference evaluations. Every sum is taken term by term
/// with double-double terms and a double-double running sum; nothing is factored.
pub mod oracle {
    use super::*;
    use crate::phases::{phase_dd, SumSpec};

    #[derive(Clone, Copy, Debug, PartialEq)]
    pub struct OracleValue {
        pub value: CDd,
        pub empty: bool,
        pub terms: u64,
    }

    impl OracleValue {
        pub fn to_c64(&self) -> C64 {
            let (re, im) = self.value.to_pair();
            C64::new(re, im)
        }
    }

    pub fn ln_int(n: u64) -> Dd {
        if n == 1 {
            Dd::ZERO
        } else {
            Dd::from_u64(n).ln()
        }
    }

    /// `n^{-s}` entirely in double-double.
    pub fn pow_neg(n: u64, s: CDd) -> CDd {
        if n == 1 {
            return CDd::ONE;
        }
        let l = ln_int(n);
        let e = s.scale(-l);
        CDd::cis(e.im.rem_tau()).scale(e.re.exp())
    }

    pub fn pow_neg_c(n: u64, s: C64) -> CDd {
        pow_neg(n, CDd::from_f64(s.re, s.im))
    }

    pub fn to_c64(z: CDd) -> C64 {
        let (re, im) = z.to_pair();
        C64::new(re, im)
    }

    /// The single sum described by `spec`, term by term.
    pub fn oracle_recompute(spec: &SumSpec) -> Result<OracleValue> {
        spec.validate()?;
        if spec.hi < spec.lo {
            return Ok(OracleValue { value: CDd::ZERO, empty: true, terms: 0 });
        }
        let sigma = Dd::from_f64(spec.sigma);
        let mut acc = CDd::ZERO;
        for m in spec.lo..=spec.hi {
            let ph = phase_dd(spec.phase, spec.t, m);
            let ph = if spec.conjugate { -ph } else { ph };
            let mag = (-(sigma * ln_int(m))).exp();
            acc += CDd::cis(ph.rem_tau()).scale(mag);
        }
        Ok(OracleValue { value: acc, empty: false, terms: spec.hi - spec.lo + 1 })
    }

    /// `sum_{m1 in rows} sum_{m2 in cols(m1)} term(m1, m2)` with no shortcuts.
    pub fn double_sum<R, F>(rows: std::ops::RangeInclusive<u64>, cols: R, term: F) -> CDd
    where
        R: Fn(u64) -> std::ops::RangeInclusive<u64>,
        F: Fn(u64, u64) -> CDd,
    {
        let mut acc = CDd::ZERO;
        for m1 in rows {
            for m2 in cols(m1) {
                acc += term(m1, m2);
            }
        }
        acc
    }
}
