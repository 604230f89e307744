//! Growth-exponent fits on log-log grids, envelope constants, the `J` and
//! `J2` integrals, the 5GH partial-summation inequality and factorized box sums.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};
use crate::kernel::C64;
use crate::phases::{single_sum, PhaseKind, SumSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSeries {
    pub label: String,
    /// `(t, magnitude)`, strictly increasing in `t`
    pub points: Vec<(f64, f64)>,
    /// divide each magnitude by `(ln t)^ln_power` before fitting
    pub ln_power: u32,
}

impl SampleSeries {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>, ln_power: u32) -> Self {
        SampleSeries { label: label.into(), points, ln_power }
    }

    fn validate(&self) -> Result<()> {
        for w in self.points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return domain(format!("{}: t values must be strictly increasing", self.label));
            }
        }
        for &(t, m) in &self.points {
            if !t.is_finite() || !m.is_finite() {
                return Err(Error::NonFinite);
            }
            if m < 0.0 {
                return domain(format!("{}: negative magnitude {m}", self.label));
            }
            if t <= 1.0 && (self.ln_power > 0 || t <= 0.0) {
                return domain(format!("{}: t = {t} outside the fit domain", self.label));
            }
        }
        Ok(())
    }

    /// `(ln t, ln(magnitude / (ln t)^k))` for the nonzero points, plus the number dropped.
    fn log_points(&self) -> Result<(Vec<(f64, f64)>, usize)> {
        self.validate()?;
        let k = self.ln_power as i32;
        let mut out = Vec::with_capacity(self.points.len());
        let mut dropped = 0;
        for &(t, m) in &self.points {
            if m == 0.0 {
                dropped += 1;
                continue;
            }
            let lt = t.ln();
            out.push((lt, m.ln() - k as f64 * lt.ln()));
        }
        if out.len() < 5 {
            return Err(Error::TooFewPoints(out.len()));
        }
        Ok((out, dropped))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
    /// `max magnitude / (t^claimed (ln t)^k)` over the points
    pub max_ratio_constant: f64,
    pub claimed_exponent: f64,
    pub tolerance: f64,
    /// zero magnitudes left out of the fit
    pub dropped: usize,
    pub verdict: Verdict,
}

/// Least squares slope and intercept, with the residual RMS.
fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    (slope, intercept, (ss / n).sqrt())
}

fn max_ratio(series: &SampleSeries, alpha: f64, k: u32) -> f64 {
    series.points.iter().map(|&(t, m)| m / (t.powf(alpha) * t.ln().powi(k as i32))).fold(0.0, f64::max)
}

/// Fit `ln(magnitude / (ln t)^k) = intercept + slope ln t` and compare the
/// slope against `claimed + tolerance`.
pub fn fit_growth_exponent(series: &SampleSeries, claimed: f64, tolerance: f64) -> Result<FitReport> {
    let (pts, dropped) = series.log_points()?;
    let (slope, intercept, rms) = least_squares(&pts);
    let c = max_ratio(series, claimed, series.ln_power);
    let ok = slope <= claimed + tolerance && c.is_finite();
    Ok(FitReport {
        slope,
        intercept,
        rms,
        max_ratio_constant: c,
        claimed_exponent: claimed,
        tolerance,
        dropped,
        verdict: Verdict::from_bool(ok),
    })
}

/// Envelope constant `max magnitude / (t^alpha (ln t)^k)`. The slope is still
/// fitted (with the series' own `ln_power`) for the record.
pub fn bound_envelope(series: &SampleSeries, alpha: f64, ln_power: u32) -> Result<FitReport> {
    let (pts, dropped) = series.log_points()?;
    let (slope, intercept, rms) = least_squares(&pts);
    let c = max_ratio(series, alpha, ln_power);
    Ok(FitReport {
        slope,
        intercept,
        rms,
        max_ratio_constant: c,
        claimed_exponent: alpha,
        tolerance: 0.0,
        dropped,
        verdict: Verdict::from_bool(c.is_finite()),
    })
}

/// `points` values of `t` spaced evenly in `ln t` over `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
        return domain(format!("log grid needs 0 < t_min < t_max, got [{t_min}, {t_max}]"));
    }
    if points < 2 {
        return domain("log grid needs at least 2 points");
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => t_min,
            _ if i == points - 1 => t_max,
            _ => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect())
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Kronrod estimate and `|Kronrod - Gauss|` on `[a, b]`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

const MAX_INTERVALS: usize = 4000;

/// Globally adaptive Gauss-Kronrod (7/15): bisect the worst interval until
/// the summed error estimate drops below `rel_tol * |value|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite);
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, intervals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&f, a, b);
    heap.push(Piece { a, b, value: v, error: e });
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        if error <= rel_tol * value.abs() || heap.len() >= MAX_INTERVALS {
            if error > rel_tol * value.abs() && error > 1e3 * rel_tol * value.abs() {
                return domain(format!("quadrature did not converge: error {error:e} on value {value:e}"));
            }
            return Ok(Quadrature { value, error, intervals: heap.len() });
        }
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        for (lo, hi) in [(worst.a, m), (m, worst.b)] {
            let (v, e) = gk15(&f, lo, hi);
            heap.push(Piece { a: lo, b: hi, value: v, error: e });
        }
    }
}

/// Relative target for one-dimensional quadrature.
pub const QUAD_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JIntegral {
    pub value: f64,
    pub error: f64,
    /// `2^{-sigma1} (t^{1-sigma1-sigma2} - (m1+1)^{1-sigma1-sigma2}) / (1 - sigma1 - sigma2)`
    pub bound: f64,
}

/// `J(m1, t) = int_{m1+1}^{t} (m1 + x)^{-sigma1} x^{-sigma2} dx`.
pub fn j_integral(m1: u64, t: f64, sigma1: f64, sigma2: f64) -> Result<JIntegral> {
    if !(sigma1.is_finite() && sigma2.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite);
    }
    let p = 1.0 - sigma1 - sigma2;
    if !(p > 0.0) {
        return domain(format!("need sigma1 + sigma2 < 1, got {}", sigma1 + sigma2));
    }
    let lo = m1 as f64 + 1.0;
    if !(lo < t) {
        return domain(format!("need m1 + 1 < t, got m1 = {m1}, t = {t}"));
    }
    let m = m1 as f64;
    // x = e^u flattens the power-law integrand
    let f = |u: f64| {
        let x = u.exp();
        x * (m + x).powf(-sigma1) * x.powf(-sigma2)
    };
    let q = integrate(f, lo.ln(), t.ln(), QUAD_TOL)?;
    let bound = 2f64.powf(-sigma1) * (t.powf(p) - lo.powf(p)) / p;
    Ok(JIntegral { value: q.value, error: q.error, bound })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct J2Integral {
    pub numeric: f64,
    pub asymptotic: f64,
    /// `max(t^{-2 delta (1 - sigma)}, t^{-delta})`
    pub rate: f64,
}

impl J2Integral {
    pub fn relative_gap(&self) -> f64 {
        (self.numeric / self.asymptotic - 1.0).abs()
    }
}

/// `J2(t) = int_{a}^{t} int_{1}^{x/a} x^{-sigma} (x + y)^{-sigma} dy dx` with
/// `a = t^{1-delta}`, against `t^{1-2sigma+delta} / (2(1-sigma))`.
pub fn j2_integral(sigma: f64, t: f64, delta: f64) -> Result<J2Integral> {
    if !(sigma.is_finite() && t.is_finite() && delta.is_finite()) {
        return Err(Error::NonFinite);
    }
    if sigma == 1.0 {
        return domain("sigma = 1 divides by 1 - sigma");
    }
    if !(0.0..1.0).contains(&sigma) {
        return domain(format!("sigma must lie in [0, 1), got {sigma}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    let a = t.powf(1.0 - delta);
    if !(a > 1.0) {
        return domain(format!("need t^(1-delta) > 1, got {a}"));
    }
    let q = 1.0 - sigma;
    // inner integral in closed form; the difference of powers goes through expm1
    let f = |u: f64| {
        let x = u.exp();
        let r = (x / a - 1.0) / (x + 1.0);
        let inner = (x + 1.0).powf(q) * (q * r.ln_1p()).exp_m1() / q;
        x * inner * x.powf(-sigma)
    };
    let num = integrate(f, a.ln(), t.ln(), 1e-12)?;
    let asymptotic = t.powf(1.0 - 2.0 * sigma + delta) / (2.0 * q);
    let rate = t.powf(-2.0 * delta * q).max(t.powf(-delta));
    Ok(J2Integral { numeric: num.value, asymptotic, rate })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhCheck {
    /// `|sum a b|`
    pub lhs: f64,
    /// `max |S_{m,n}|` over the partial sums from the corner
    pub g: f64,
    pub h: f64,
    /// `5 G H`
    pub bound: f64,
    pub sign_conditions_ok: bool,
}

impl GhCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound
    }
}

/// Row-major `rows x cols` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            for n in 0..cols {
                data.push(f(m, n));
            }
        }
        Grid { rows, cols, data }
    }

    #[inline]
    pub fn at(&self, m: usize, n: usize) -> T {
        self.data[m * self.cols + n]
    }
}

/// Does `d` take only one sign (zeros allowed) over all entries?
fn one_sign(vals: impl Iterator<Item = f64>) -> bool {
    let (mut pos, mut neg) = (false, false);
    for v in vals {
        pos |= v > 0.0;
        neg |= v < 0.0;
    }
    !(pos && neg)
}

/// `|sum a_{m,n} b_{m,n}| <= 5 G H` with `G` the largest corner partial sum of
/// `a` and `H = max b`. The three differences of `b` must each keep one sign.
pub fn gh_bound_check(a: &Grid<C64>, b: &Grid<f64>) -> Result<GhCheck> {
    if a.rows != b.rows || a.cols != b.cols || a.data.len() != a.rows * a.cols || b.data.len() != b.rows * b.cols {
        return domain("a and b must have the same shape");
    }
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::EmptySum("empty grid".into()));
    }
    if a.data.iter().any(|z| !z.is_finite()) || b.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(x) = b.data.iter().find(|&&x| x < 0.0) {
        return domain(format!("b must lie in [0, H], found {x}"));
    }
    let (rows, cols) = (a.rows, a.cols);
    let h = b.data.iter().cloned().fold(0.0, f64::max);

    // S_{m,n} by a running row sum plus the row above
    let mut s = vec![C64::new(0.0, 0.0); cols];
    let mut g = 0.0f64;
    let mut total = C64::new(0.0, 0.0);
    for m in 0..rows {
        let mut row = C64::new(0.0, 0.0);
        for (n, sn) in s.iter_mut().enumerate() {
            row += a.at(m, n);
            *sn += row;
            g = g.max(sn.norm());
            total += a.at(m, n) * b.at(m, n);
        }
    }

    let d1 = (0..rows.saturating_sub(1)).flat_map(|m| (0..cols).map(move |n| (m, n)));
    let d2 = (0..rows).flat_map(|m| (0..cols.saturating_sub(1)).map(move |n| (m, n)));
    let d3 = (0..rows.saturating_sub(1)).flat_map(|m| (0..cols.saturating_sub(1)).map(move |n| (m, n)));
    let ok = one_sign(d1.map(|(m, n)| b.at(m, n) - b.at(m + 1, n)))
        && one_sign(d2.map(|(m, n)| b.at(m, n) - b.at(m, n + 1)))
        && one_sign(d3.map(|(m, n)| b.at(m, n) - b.at(m + 1, n) - b.at(m, n + 1) + b.at(m + 1, n + 1)));

    Ok(GhCheck { lhs: total.norm(), g, h, bound: 5.0 * g * h, sign_conditions_ok: ok })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSum {
    pub value: C64,
    /// `t ln t`
    pub bound: f64,
    pub ratio: f64,
    /// `sqrt t < M < M' <= 2M < t`, and likewise for `N`
    pub dyadic_ok: bool,
    /// `M^2 / t`, `N^2 / t`
    pub l1: f64,
    pub l2: f64,
    /// `t / M^2`, `t / N^2`
    pub lambda1: f64,
    pub lambda2: f64,
}

/// `sum_{m=M}^{M'} sum_{n=N}^{N'} m^{it} n^{-it}` as a product of two single sums.
pub fn box_sum_check(m_lo: u64, m_hi: u64, n_lo: u64, n_hi: u64, t: f64) -> Result<BoxSum> {
    if m_lo == 0 || m_lo > m_hi || n_lo > n_hi {
        return domain(format!("box [{m_lo}, {m_hi}] x [{n_lo}, {n_hi}] is empty or starts at 0"));
    }
    if n_lo <= m_hi {
        return Err(Error::BoxOverlap);
    }
    if !(t > 1.0 && t.is_finite()) {
        return domain(format!("t must exceed 1, got {t}"));
    }
    let sm = single_sum(&SumSpec::new(PhaseKind::F3, 0.0, t, m_lo, m_hi))?;
    let sn = single_sum(&SumSpec::new(PhaseKind::F3, 0.0, t, n_lo, n_hi).conj())?;
    let value = sm * sn;
    let bound = t * t.ln();
    let window = |lo: u64, hi: u64| {
        let (lo, hi) = (lo as f64, hi as f64);
        t.sqrt() < lo && lo < hi && hi <= 2.0 * lo && 2.0 * lo < t
    };
    let (mf, nf) = (m_lo as f64, n_lo as f64);
    Ok(BoxSum {
        value,
        bound,
        ratio: value.norm() / bound,
        dyadic_ok: window(m_lo, m_hi) && window(n_lo, n_hi),
        l1: mf * mf / t,
        l2: nf * nf / t,
        lambda1: t / (mf * mf),
        lambda2: t / (nf * nf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64, k: u32) -> SampleSeries {
        let pts = log_grid(1e3, 1e6, 10).unwrap().into_iter().map(|t| (t, f(t))).collect();
        SampleSeries::new("synthetic", pts, k)
    }

    #[test]
    fn exact_power_laws() {
        let r = fit_growth_exponent(&series(|t| t.sqrt(), 0), 0.5, 0.1).unwrap();
        assert!((r.slope - 0.5).abs() < 1e-12);
        assert!(r.verdict.passed());
        let r = fit_growth_exponent(&series(|t| 7.0 * t.powf(1.3) * t.ln(), 1), 1.3, 0.1).unwrap();
        assert!((r.slope - 1.3).abs() < 1e-12);
        assert!((r.intercept - 7f64.ln()).abs() < 1e-10);
        let r = fit_growth_exponent(&series(|t| t.powf(0.9), 0), 0.5, 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn envelope_of_exact_power_is_one() {
        let r = bound_envelope(&series(|t| t.powf(0.7), 0), 0.7, 0).unwrap();
        assert!((r.max_ratio_constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeros_dropped_and_too_few_points() {
        let mut s = series(|t| t, 0);
        s.points[3].1 = 0.0;
        let r = fit_growth_exponent(&s, 1.0, 0.1).unwrap();
        assert_eq!(r.dropped, 1);
        s.points.truncate(5);
        assert_eq!(fit_growth_exponent(&s, 1.0, 0.1), Err(Error::TooFewPoints(4)));
        let mut s = series(|t| t, 0);
        s.points.swap(0, 1);
        assert!(fit_growth_exponent(&s, 1.0, 0.1).is_err());
    }

    #[test]
    fn gk_polynomial_and_exp() {
        let q = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
        let q = integrate(f64::exp, 0.0, 10.0, 1e-12).unwrap();
        assert!((q.value / 10f64.exp_m1() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn j_unit_integrand() {
        let j = j_integral(10, 1000.0, 0.0, 0.0).unwrap();
        assert!((j.value - 989.0).abs() < 1e-9);
    }

    #[test]
    fn j_reference_and_bound() {
        let j = j_integral(10, 1000.0, -0.5, 0.3).unwrap();
        let r = 3360.007818522895471872562;
        assert!((j.value / r - 1.0).abs() < 1e-10, "{}", j.value);
        assert!(j.value < j.bound);
        assert!(j_integral(10, 11.0, 0.0, 0.0).is_err());
        assert!(j_integral(1, 100.0, 0.5, 0.6).is_err());
    }

    #[test]
    fn j2_sigma_zero_closed_form() {
        let (t, delta) = (1e4f64, 0.3);
        let a = t.powf(1.0 - delta);
        let exact = (t * t - a * a) / (2.0 * a) - (t - a);
        let j = j2_integral(0.0, t, delta).unwrap();
        assert!((j.numeric / exact - 1.0).abs() < 1e-11);
    }

    #[test]
    fn j2_reference_values() {
        let j = j2_integral(0.3, 1e4, 0.2).unwrap();
        assert!((j.numeric / 113.9060725368196091264451 - 1.0).abs() < 1e-9, "{}", j.numeric);
        let j = j2_integral(0.5, 1e6, 0.4).unwrap();
        assert!((j.numeric / 244.6467923074587358302322 - 1.0).abs() < 1e-9, "{}", j.numeric);
        assert!(j.relative_gap() < 0.05);
        assert!(j2_integral(1.0, 1e4, 0.2).is_err());
    }

    #[test]
    fn gh_trivial_grid() {
        let a = Grid::from_fn(2, 2, |_, _| C64::new(1.0, 0.0));
        let b = Grid::from_fn(2, 2, |_, _| 1.0);
        let r = gh_bound_check(&a, &b).unwrap();
        assert_eq!((r.lhs, r.g, r.h, r.bound), (4.0, 4.0, 1.0, 20.0));
        assert!(r.sign_conditions_ok && r.holds());
    }

    #[test]
    fn gh_product_weights_keep_sign() {
        for sigma in [0.1, 0.5, 0.9] {
            let b = Grid::from_fn(50, 50, |m, n| ((m + 1) as f64 * (n + 1) as f64).powf(-sigma));
            let a = Grid::from_fn(50, 50, |m, n| C64::from_polar(1.0, (m * 7 + n * n) as f64));
            let r = gh_bound_check(&a, &b).unwrap();
            assert!(r.sign_conditions_ok);
            assert!(r.holds());
        }
        let bad = Grid::from_fn(3, 3, |m, n| if (m + n) % 2 == 0 { 1.0 } else { 0.5 });
        let a = Grid::from_fn(3, 3, |_, _| C64::new(1.0, 0.0));
        assert!(!gh_bound_check(&a, &bad).unwrap().sign_conditions_ok);
        let neg = Grid::from_fn(2, 2, |_, _| -1.0);
        assert!(gh_bound_check(&a, &neg).is_err());
    }

    #[test]
    fn box_one_element_and_overlap() {
        let r = box_sum_check(3, 3, 7, 7, 1000.0).unwrap();
        assert!((r.value.norm() - 1.0).abs() < 1e-14);
        let expect = C64::from_polar(1.0, 1000.0 * (3f64 / 7.0).ln());
        assert!((r.value - expect).norm() < 1e-12);
        assert_eq!(box_sum_check(3, 7, 7, 9, 1000.0).unwrap_err(), Error::BoxOverlap);
    }

    #[test]
    fn box_matches_brute_force() {
        let t = 1e3;
        let r = box_sum_check(40, 59, 70, 89, t).unwrap();
        let mut brute = C64::new(0.0, 0.0);
        for m in 40..=59u64 {
            for n in 70..=89u64 {
                brute += C64::from_polar(1.0, t * ((m as f64).ln() - (n as f64).ln()));
            }
        }
        assert!((r.value - brute).norm() < 1e-10 * brute.norm().max(1.0));
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = log_grid(1e3, 1e6, 10).unwrap();
        assert_eq!((g[0], g[9]), (1e3, 1e6));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
