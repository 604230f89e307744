//! The functional-equation factor chi(s), the error kernel E(sigma, t, eta),
//! residuals of the two approximate-functional-equation identities, and a
//! reference Euler-Maclaurin zeta.

use crate::dd::{CDd, Dd};
use crate::error::{domain, Error, Result};
use crate::kernel::{cis_dd, log_gamma_dd, oracle, pow_neg, C64};
use crate::phases::{single_sum, PhaseKind, SumSpec};

/// Width of the window around `2 pi Z` that `eta` must avoid.
pub const DEFAULT_EPS: f64 = 0.1;
/// `eta_params` raises its warning flag inside this distance of `2 pi Z`.
pub const ALPHA_WARN: f64 = 1e-6;

fn c(z: CDd) -> C64 {
    oracle::to_c64(z)
}

/// `ln chi(s) = s ln 2pi - ln pi + ln sin(pi s / 2) + ln Gamma(1 - s)`, in double-double.
pub fn log_chi_dd(s: CDd) -> Result<CDd> {
    let sf = c(s);
    if !sf.is_finite() {
        return Err(Error::NonFinite);
    }
    if sf.im == 0.0 && sf.re >= 1.0 && sf.re == sf.re.floor() {
        return Err(Error::GammaPole(format!("1 - s at s = {sf}")));
    }
    let half = s.scale(Dd::from_f64(0.5));
    let lg = log_gamma_dd(CDd::ONE - s)?;
    let ls = crate::kernel::ln_sin_pi_dd(half);
    Ok(s.scale(Dd::LN_TAU) - CDd::real(Dd::LN_PI) + ls + lg)
}

fn exp_reduced(z: CDd) -> C64 {
    cis_dd(z.im) * z.re.to_f64().exp()
}

/// `chi(s) = (2pi)^s / pi * sin(pi s / 2) * Gamma(1 - s)`, assembled in the log domain.
pub fn chi_exact(s: C64) -> Result<C64> {
    if s.im.abs() > 1e7 {
        return domain(format!("|Im s| = {} exceeds the log-gamma window 1e7", s.im.abs()));
    }
    let l = log_chi_dd(CDd::from_f64(s.re, s.im))?;
    let v = exp_reduced(l);
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(v)
}

/// Leading term `(2pi/t)^{s - 1/2} e^{it} e^{i pi/4}`.
pub fn chi_asymptotic(s: C64) -> Result<C64> {
    let t = s.im;
    if !(t >= 10.0) {
        return Err(Error::AsymptoticRegime(t));
    }
    let l = Dd::LN_TAU - Dd::from_f64(t).ln();
    let re = (s.re - 0.5) * l.to_f64();
    let im = l * t + t + Dd::PI.mul_pow2(0.25);
    Ok(cis_dd(im) * re.exp())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaParams {
    pub eta: f64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma_phase: f64,
    pub sigma: f64,
    pub t: f64,
    /// `eta` within `ALPHA_WARN` of `2 pi Z`: alpha is nearly zero
    pub alpha_warning: bool,
}

/// Distance from `x` to the nearest multiple of `2 pi`.
pub fn dist_2pi_z(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let k = (x / tau).round();
    (Dd::from_f64(x) - Dd::TAU * k).abs().to_f64()
}

fn floor_div(t: f64, eta: f64) -> f64 {
    let q = (t / eta).floor();
    // guard the rounding of t/eta against the exact product
    if Dd::from_f64(eta) * q > Dd::from_f64(t) {
        q - 1.0
    } else if Dd::from_f64(eta) * (q + 1.0) <= Dd::from_f64(t) {
        q + 1.0
    } else {
        q
    }
}

fn gamma_dd(t: f64, eta: f64) -> Dd {
    let k = floor_div(t, eta);
    Dd::from_f64(t) - Dd::from_f64(eta) * (k + 1.0)
}

pub fn eta_params(sigma: f64, t: f64, eta: f64) -> Result<EtaParams> {
    if !(eta > 0.0 && eta.is_finite()) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("t must be positive, got {t}"));
    }
    let k = floor_div(t, eta);
    let alpha = C64::new(1.0, 0.0) - C64::new(0.0, -eta).exp();
    let frac = (Dd::from_f64(t) - Dd::from_f64(eta) * k).to_f64();
    let beta = C64::new(frac, -(sigma - 1.0));
    let gamma_phase = gamma_dd(t, eta).to_f64();
    Ok(EtaParams { eta, alpha, beta, gamma_phase, sigma, t, alpha_warning: dist_2pi_z(eta) <= ALPHA_WARN })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `eps < eta < t^{1/3}`
    Small,
    /// `t^{1/3} <= eta < sqrt t`
    Large,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ETerm {
    pub value: C64,
    pub envelope: f64,
    pub regime: Regime,
    /// `3 eta^3 < |alpha| t` (small regime) or `3 eta^2 < |alpha| t` (large regime)
    pub side_condition_ok: bool,
}

/// The error-term magnitude for each regime: `eta/t`, or `e^{-|alpha| t/eta^2} + eta^4/t^2`.
pub fn e_envelope(regime: Regime, t: f64, eta: f64) -> f64 {
    match regime {
        Regime::Small => eta / t,
        Regime::Large => {
            let a = (C64::new(1.0, 0.0) - C64::new(0.0, -eta).exp()).norm();
            (-a * t / (eta * eta)).exp() + (eta / t) * (eta / t) * eta * eta
        }
    }
}

pub fn regime_of(t: f64, eta: f64) -> Regime {
    if eta < t.cbrt() {
        Regime::Small
    } else {
        Regime::Large
    }
}

/// `E(sigma,t,eta) = e^{i gamma} (eta/t)^s {1/alpha + (i / 2 alpha^3)(eta^2/t)[...]}`,
/// with the `1 + O(1/t)` factor dropped.
pub fn e_term(sigma: f64, t: f64, eta: f64) -> Result<ETerm> {
    e_term_eps(sigma, t, eta, DEFAULT_EPS)
}

pub fn e_term_eps(sigma: f64, t: f64, eta: f64, eps: f64) -> Result<ETerm> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::ValidityWindow(format!("0 < sigma < 1 fails for sigma = {sigma}")));
    }
    if !(eta > eps) {
        return Err(Error::ValidityWindow(format!("eps < eta fails: eta = {eta}, eps = {eps}")));
    }
    if !(eta < t.sqrt()) {
        return Err(Error::ValidityWindow(format!("eta < sqrt(t) fails: eta = {eta}, sqrt(t) = {}", t.sqrt())));
    }
    if dist_2pi_z(eta) <= eps {
        return Err(Error::ValidityWindow(format!("dist(eta, 2piZ) > eps fails: eta = {eta}")));
    }
    let p = eta_params(sigma, t, eta)?;
    let s = C64::new(sigma, t);
    let a = p.alpha;
    let b = p.beta;
    let i = C64::new(0.0, 1.0);
    let bracket = (a * a / (eta * eta)) * (b * b + (sigma - 1.0)) - 2.0 * a * b / eta - a + 2.0;
    let brace = a.inv() + i / (2.0 * a * a * a) * (eta * eta / t) * bracket;
    // e^{i gamma} (eta/t)^s, with the phase gamma + t ln(eta/t) kept in double-double
    let lr = Dd::from_f64(eta).ln() - Dd::from_f64(t).ln();
    let phase = gamma_dd(t, eta) + lr * s.im;
    let pref = cis_dd(phase) * (sigma * lr.to_f64()).exp();
    let regime = regime_of(t, eta);
    let an = a.norm();
    let side = match regime {
        Regime::Small => 3.0 * eta.powi(3) < an * t,
        Regime::Large => 3.0 * eta * eta < an * t,
    };
    Ok(ETerm { value: pref * brace, envelope: e_envelope(regime, t, eta), regime, side_condition_ok: side })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub lhs: C64,
    pub rhs: C64,
    pub residual: C64,
    pub envelope: f64,
}

impl IdentityResidual {
    pub fn new(lhs: C64, rhs: C64, envelope: f64) -> Self {
        IdentityResidual { lhs, rhs, residual: lhs - rhs, envelope }
    }

    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub fn relative(&self) -> f64 {
        let d = self.lhs.norm().max(self.rhs.norm());
        if d == 0.0 {
            self.residual.norm()
        } else {
            self.residual.norm() / d
        }
    }
}

/// `x^{1-s} / (1-s)` for real `x > 0`.
fn power_over(x: f64, s: C64) -> C64 {
    let lx = Dd::from_f64(x).ln();
    let one_minus = C64::new(1.0 - s.re, -s.im);
    let v = cis_dd(lx * (-s.im)) * ((1.0 - s.re) * lx.to_f64()).exp();
    v / one_minus
}

/// `sum_{n=[t]+1}^{[eta/2pi]} n^{-s}` against `(eta/2pi)^{1-s} / (1-s)`; envelope `t^{-sigma}`.
pub fn fl_identity_residual(sigma: f64, t: f64, eta: f64) -> Result<IdentityResidual> {
    if !(0.0..1.0).contains(&sigma) {
        return domain(format!("sigma must lie in [0,1), got {sigma}"));
    }
    if !(t > 0.0) {
        return domain(format!("t must be positive, got {t}"));
    }
    let x = eta / std::f64::consts::TAU;
    if !(x > t) {
        return domain(format!("eta/2pi = {x} must exceed t = {t}"));
    }
    let lo = t.floor() as u64 + 1;
    let hi = x.floor() as u64;
    if hi < lo {
        return Err(Error::EmptySum(format!("[eta/2pi] = {hi} <= [t] = {}", lo - 1)));
    }
    let lhs = single_sum(&SumSpec::new(PhaseKind::F3, sigma, t, lo, hi).conj())?;
    let rhs = power_over(x, C64::new(sigma, t));
    Ok(IdentityResidual::new(lhs, rhs, t.powf(-sigma)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrResidual {
    pub identity: IdentityResidual,
    pub e1: ETerm,
    pub e2: ETerm,
    /// number of terms in the chi-weighted sum (0 when empty)
    pub right_terms: u64,
}

/// `sum_{n=[t/eta2]+1}^{[t/eta1]} n^{-s}` against
/// `chi(s) sum_{n=[eta1/2pi]+1}^{[eta2/2pi]} n^{s-1} + E(eta2) - E(eta1)`.
pub fn fr_identity_residual(sigma: f64, t: f64, eta1: f64, eta2: f64) -> Result<FrResidual> {
    fr_identity_residual_eps(sigma, t, eta1, eta2, DEFAULT_EPS)
}

pub fn fr_identity_residual_eps(sigma: f64, t: f64, eta1: f64, eta2: f64, eps: f64) -> Result<FrResidual> {
    let mut failed = Vec::new();
    if !(eps < eta1) {
        failed.push(format!("eps < eta1 ({eps} < {eta1})"));
    }
    if !(eta1 < eta2) {
        failed.push(format!("eta1 < eta2 ({eta1} < {eta2})"));
    }
    if !(eta2 < t.sqrt()) {
        failed.push(format!("eta2 < sqrt(t) ({eta2} < {})", t.sqrt()));
    }
    for (name, e) in [("eta1", eta1), ("eta2", eta2)] {
        if dist_2pi_z(e) <= eps {
            failed.push(format!("dist({name}, 2piZ) > eps ({} > {eps})", dist_2pi_z(e)));
        }
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        failed.push(format!("0 < sigma < 1 ({sigma})"));
    }
    if !failed.is_empty() {
        return Err(Error::ValidityWindow(failed.join("; ")));
    }
    let tau = std::f64::consts::TAU;
    let l_lo = floor_div(t, eta2) as u64 + 1;
    let l_hi = floor_div(t, eta1) as u64;
    let lhs = single_sum(&SumSpec::new(PhaseKind::F3, sigma, t, l_lo, l_hi).conj())?;
    let r_lo = (eta1 / tau).floor() as u64 + 1;
    let r_hi = (eta2 / tau).floor() as u64;
    let right = single_sum(&SumSpec::new(PhaseKind::F3, 1.0 - sigma, t, r_lo, r_hi))?;
    let s = C64::new(sigma, t);
    let e1 = e_term_eps(sigma, t, eta1, eps)?;
    let e2 = e_term_eps(sigma, t, eta2, eps)?;
    let chi = if r_hi >= r_lo { chi_exact(s)? } else { C64::new(0.0, 0.0) };
    let rhs = chi * right + e2.value - e1.value;
    Ok(FrResidual {
        identity: IdentityResidual::new(lhs, rhs, e1.envelope + e2.envelope),
        e1,
        e2,
        right_terms: (r_hi + 1).saturating_sub(r_lo),
    })
}

// B_{2k} / (2k)!, k = 1..12, as hi + lo
const BERNOULLI_OVER_FACT: [(f64, f64); 12] = [
    (0.08333333333333333, 4.625929269271485e-18),
    (-0.001388888888888889, 5.300543954373577e-20),
    (3.306878306878307e-05, -2.2300719288557665e-21),
    (-8.267195767195768e-07, 3.457597454003665e-23),
    (2.08767569878681e-08, -1.2073450591132599e-24),
    (-5.284190138687493e-10, 3.517096671929869e-27),
    (1.3382536530684679e-11, -2.828354019907999e-29),
    (-3.3896802963225827e-13, -1.4986928409964295e-29),
    (8.586062056277845e-15, -6.05252374381974e-31),
    (-2.174868698558062e-16, 4.961617782549996e-33),
    (5.5090028283602295e-18, -1.49827152194499e-35),
    (-1.3954464685812522e-19, -1.0350590497256251e-35),
];

/// Euler-Maclaurin start index.
pub fn em_cutoff(s: C64, floor: u64) -> u64 {
    floor.max((2.0 * s.im.abs()).ceil() as u64)
}

/// `zeta(s)`: `N = max(20, 2|t|)` direct terms, Bernoulli tail through `B_12`.
pub fn zeta_reference(s: C64) -> Result<C64> {
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    if s == C64::new(1.0, 0.0) {
        return Err(Error::ZetaPole);
    }
    if s.im.abs() > 1e5 {
        return domain(format!("|Im s| = {} exceeds 1e5", s.im.abs()));
    }
    let n = em_cutoff(s, 20);
    let head = crate::kernel::chunked_sum(1, n - 1, |k| pow_neg(k, s))?;
    let nf = n as f64;
    let n_s = pow_neg(n, s);
    let mut tail = n_s * nf / (s - 1.0) + n_s * 0.5;
    // term_k = B_2k/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut rising = s;
    let mut npow = n_s / nf;
    for (k, &(b, _)) in BERNOULLI_OVER_FACT[..6].iter().enumerate() {
        if k > 0 {
            let j = (2 * k) as f64;
            rising = rising * (s + (j - 1.0)) * (s + j);
            npow /= nf * nf;
        }
        tail += rising * npow * b;
    }
    Ok(head + tail)
}

/// Double-double Euler-Maclaurin with `N = max(40, 2|t|)` and the tail through `B_24`.
pub fn zeta_reference_dd(s: CDd) -> Result<CDd> {
    let sf = c(s);
    if sf == C64::new(1.0, 0.0) {
        return Err(Error::ZetaPole);
    }
    let n = em_cutoff(sf, 40);
    let mut head = CDd::ZERO;
    for k in 1..n {
        head += oracle::pow_neg(k, s);
    }
    let nd = Dd::from_u64(n);
    let n_s = oracle::pow_neg(n, s);
    let one = CDd::ONE;
    let mut tail = n_s.scale(nd) / (s - one) + n_s.scale(Dd::from_f64(0.5));
    let mut rising = s;
    let mut npow = n_s.scale(nd.recip());
    let n2 = (nd * nd).recip();
    for (k, &(hi, lo)) in BERNOULLI_OVER_FACT.iter().enumerate() {
        if k > 0 {
            let j = (2 * k) as f64;
            rising = rising * (s + CDd::from_f64(j - 1.0, 0.0)) * (s + CDd::from_f64(j, 0.0));
            npow = npow.scale(n2);
        }
        tail += (rising * npow).scale(Dd::new(hi, lo));
    }
    Ok(head + tail)
}

/// `zeta(s)` against `chi(s) zeta(1-s)` at `s = sigma - 1 + it`; envelope `t^{3/2 - sigma}`.
pub fn functional_equation_residual(sigma: f64, t: f64) -> Result<IdentityResidual> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return domain(format!("sigma must lie in (0,1), got {sigma}"));
    }
    if !(10.0..=1e4).contains(&t) {
        return domain(format!("t must lie in [10, 1e4], got {t}"));
    }
    let s = C64::new(sigma - 1.0, t);
    let lhs = zeta_reference(s)?;
    let rhs = chi_exact(s)? * zeta_reference(C64::new(1.0, 0.0) - s)?;
    Ok(IdentityResidual::new(lhs, rhs, t.powf(1.5 - sigma)))
}

/// `sum_{m<=t} m^{-(sigma - 1 + it)}`, the finite sum whose growth mirrors `zeta(sigma - 1 + it)`.
pub fn shifted_finite_sum(sigma: f64, t: f64) -> Result<C64> {
    let hi = t.floor() as u64;
    single_sum(&SumSpec::new(PhaseKind::F3, sigma - 1.0, t, 1, hi).conj())
}

/// `[x]` helper re-exported for callers building the identity windows.
pub fn floor_ratio(t: f64, eta: f64) -> u64 {
    floor_div(t, eta) as u64
}
