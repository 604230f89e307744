//! Double-double arithmetic (an unevaluated sum `hi + lo` of two binary64
//! values, about 32 significant digits) and a complex type built on it.
//!
//! Used by the oracle paths and wherever a binary64 intermediate would lose
//! the phase of a large argument.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

// constants split as hi + lo (+ a third word where argument reduction needs it)
const PI3: [f64; 3] = [std::f64::consts::PI, 1.2246467991473532e-16, -2.9947698097183397e-33];
const TAU3: [f64; 3] = [std::f64::consts::TAU, 2.4492935982947064e-16, -5.989539619436679e-33];
const HALF_PI3: [f64; 3] = [std::f64::consts::FRAC_PI_2, 6.123233995736766e-17, -1.4973849048591698e-33];
const LN2_3: [f64; 3] = [std::f64::consts::LN_2, 2.3190468138462996e-17, 5.707708438416212e-34];

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: PI3[0], lo: PI3[1] };
    pub const TAU: Dd = Dd { hi: TAU3[0], lo: TAU3[1] };
    pub const HALF_PI: Dd = Dd { hi: HALF_PI3[0], lo: HALF_PI3[1] };
    pub const LN2: Dd = Dd { hi: LN2_3[0], lo: LN2_3[1] };
    pub const LN_PI: Dd = Dd { hi: 1.1447298858494002, lo: 1.0265951162707826e-17 };
    pub const LN_TAU: Dd = Dd { hi: 1.8378770664093456, lo: -7.756588316134483e-17 };
    pub const HALF_LN_TAU: Dd = Dd { hi: 0.9189385332046728, lo: -3.8782941580672414e-17 };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for every `u64`.
    pub fn from_u64(n: u64) -> Dd {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn mul_pow2(self, p: f64) -> Dd {
        Dd { hi: self.hi * p, lo: self.lo * p }
    }

    #[inline]
    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            let lo = self.lo.floor();
            let (hi, lo) = quick_two_sum(hi, lo);
            Dd { hi, lo }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(self.hi.sqrt());
        }
        let s = self.hi.sqrt();
        let r = (self - Dd::from_f64(s).sqr()) / (2.0 * s);
        Dd::from_f64(s) + r
    }

    fn inv_factorials() -> &'static [Dd; 32] {
        static T: OnceLock<[Dd; 32]> = OnceLock::new();
        T.get_or_init(|| {
            let mut t = [Dd::ONE; 32];
            for n in 1..32 {
                t[n] = t[n - 1] / (n as f64);
            }
            t
        })
    }

    /// `e^x`. Overflows to +inf above ~709.78, underflows to 0 below -745.
    pub fn exp(self) -> Dd {
        if self.hi > 709.78 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN2_3[0]).round();
        let r = self - Dd::prod(k, LN2_3[0]) - Dd::prod(k, LN2_3[1]) - Dd::from_f64(k * LN2_3[2]);
        // |r| <= 0.347; scale down by 2^8 and square back up
        let r = r.mul_pow2(1.0 / 256.0);
        let f = Dd::inv_factorials();
        let mut p = f[11];
        for i in (1..11).rev() {
            p = p * r + f[i];
        }
        let mut p = p * r; // expm1(r)
        for _ in 0..8 {
            p = p * (p + 2.0);
        }
        let e = p + 1.0;
        let scale = 2f64.powi(k as i32);
        if scale.is_finite() && scale != 0.0 {
            e.mul_pow2(scale)
        } else {
            let h = 2f64.powi((k / 2.0) as i32);
            e.mul_pow2(h).mul_pow2(2f64.powi(k as i32 - (k / 2.0) as i32))
        }
    }

    /// Natural log; one Newton step on `exp` from the binary64 estimate.
    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        // split off a power of two so exp(-y0) stays clear of the subnormal range
        let e = self.hi.log2().floor();
        let f = if e.abs() > 8.0 { self.mul_pow2(2f64.powi(-(e as i32))) } else { self };
        let y0 = Dd::from_f64(f.hi.ln());
        let y = y0 + f * (-y0).exp() - 1.0;
        if e.abs() > 8.0 {
            y + Dd::prod(e, LN2_3[0]) + Dd::prod(e, LN2_3[1]) + Dd::from_f64(e * LN2_3[2])
        } else {
            y
        }
    }

    #[inline]
    fn prod(a: f64, b: f64) -> Dd {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
    }

    /// `(sin x, cos x)`, with reduction modulo pi/2 against a three-word constant.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let q = (self.hi / HALF_PI3[0]).round();
        let r = if q == 0.0 {
            self
        } else {
            self - Dd::prod(q, HALF_PI3[0]) - Dd::prod(q, HALF_PI3[1]) - Dd::prod(q, HALF_PI3[2])
        };
        let f = Dd::inv_factorials();
        let r2 = r.sqr();
        // sin: r - r^3/3! + ... through r^29, cos: 1 - r^2/2! + ... through r^30
        let mut s = Dd::ZERO;
        for k in (0..15).rev() {
            let c = f[2 * k + 1];
            s = s * r2 + if k % 2 == 0 { c } else { -c };
        }
        let s = s * r;
        let mut c = Dd::ZERO;
        for k in (0..16).rev() {
            let v = f[2 * k];
            c = c * r2 + if k % 2 == 0 { v } else { -v };
        }
        match (q.rem_euclid(4.0)) as i64 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// Reduce into `[-pi, pi]`.
    pub fn rem_tau(self) -> Dd {
        let q = (self.hi / TAU3[0]).round();
        if q == 0.0 {
            return self;
        }
        self - Dd::prod(q, TAU3[0]) - Dd::prod(q, TAU3[1]) - Dd::prod(q, TAU3[2])
    }

    pub fn atan2(y: Dd, x: Dd) -> Dd {
        let a0 = y.hi.atan2(x.hi);
        if y.hi == 0.0 && x.hi == 0.0 {
            return Dd::from_f64(a0);
        }
        let a = Dd::from_f64(a0);
        let (s, c) = a.sin_cos();
        // tan of the residual angle; the cubic correction is below double-double resolution
        let d = (y * c - x * s) / (x * c + y * s);
        a + d
    }

    pub fn powi(self, n: i32) -> Dd {
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl MulAssign for Dd {
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Default, PartialEq, Debug)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: CDd = CDd { re: Dd::ONE, im: Dd::ZERO };

    pub const fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    pub fn real(re: Dd) -> CDd {
        CDd { re, im: Dd::ZERO }
    }

    pub fn i() -> CDd {
        CDd::from_f64(0.0, 1.0)
    }

    pub fn conj(self) -> CDd {
        CDd { re: self.re, im: -self.im }
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd { re: self.re * k, im: self.im * k }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// `e^{i theta}`.
    pub fn cis(theta: Dd) -> CDd {
        let (s, c) = theta.sin_cos();
        CDd { re: c, im: s }
    }

    pub fn exp(self) -> CDd {
        let m = self.re.exp();
        CDd::cis(self.im).scale(m)
    }

    /// Principal branch, `Im` in `(-pi, pi]`.
    pub fn ln(self) -> CDd {
        let r = self.norm_sqr().ln().mul_pow2(0.5);
        CDd { re: r, im: Dd::atan2(self.im, self.re) }
    }

    pub fn to_pair(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.norm_sqr();
        let n = self * b.conj();
        CDd { re: n.re / d, im: n.im / d }
    }
}

impl AddAssign for CDd {
    fn add_assign(&mut self, b: CDd) {
        *self = *self + b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, rel: f64) -> bool {
        let d = (a - b).abs().to_f64();
        d <= rel * b.abs().to_f64().max(1e-300)
    }

    #[test]
    fn from_u64_is_exact() {
        let n = (1u64 << 60) + 12345;
        let d = Dd::from_u64(n);
        assert_eq!(d.hi as i128 + d.lo as i128, n as i128);
    }

    #[test]
    fn division_round_trips() {
        let a = Dd::from_f64(1.0) / 3.0;
        let back = a * 3.0;
        assert!((back - 1.0).abs().to_f64() < 1e-31);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[1e-3, 0.5, 1.0, 2.0, 17.25, 123.456, 1e6] {
            let d = Dd::from_f64(x);
            let back = d.ln().exp();
            assert!(close(back, d, 4e-31), "x={x} {:?}", back - d);
        }
        for &x in &[-300.0, -3.3, 0.0, 0.1, 5.0, 700.0] {
            let d = Dd::from_f64(x);
            let back = d.exp().ln();
            assert!((back - d).abs().to_f64() < 1e-29 * x.abs().max(1.0), "x={x} {:?}", back - d);
        }
    }

    #[test]
    fn known_constants() {
        // ln 2, pi via atan2, e
        assert!(close(Dd::from_f64(2.0).ln(), Dd::LN2, 1e-31));
        let pi = Dd::atan2(Dd::ZERO, Dd::from_f64(-1.0));
        assert!(close(pi, Dd::PI, 1e-31));
        let quarter = Dd::atan2(Dd::ONE, Dd::ONE);
        assert!(close(quarter * 4.0, Dd::PI, 1e-31));
        let e = Dd::ONE.exp();
        // e = 2.718281828459045 + 1.4456468917292502e-16
        assert!(close(e, Dd::new(std::f64::consts::E, 1.4456468917292502e-16), 1e-31));
    }

    #[test]
    fn sin_cos_identities() {
        for &x in &[0.1, 1.0, 2.5, -7.0, 100.0, 12345.678, 1.6e8] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            let one = s.sqr() + c.sqr();
            assert!((one - 1.0).abs().to_f64() < 1e-30);
            assert!((s.to_f64() - x.sin()).abs() < 1e-15 * x.abs().max(1.0));
        }
        let (s, c) = (Dd::PI / 6.0).sin_cos();
        assert!((s - 0.5).abs().to_f64() < 1e-31, "{:?}", s - 0.5);
        assert!((c.sqr() - 0.75).abs().to_f64() < 1e-31, "{:?}", c.sqr() - 0.75);
    }

    #[test]
    fn sqrt_squares_back() {
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        assert!((r.sqr() - two).abs().to_f64() < 1e-31);
    }

    #[test]
    fn complex_exp_ln() {
        let z = CDd::from_f64(0.3, -41.5);
        let back = z.exp().ln();
        // im folds into (-pi, pi]
        let k = ((z.im - back.im).to_f64() / std::f64::consts::TAU).round();
        let im = back.im + Dd::TAU * k;
        assert!((back.re - z.re).abs().to_f64() < 1e-30);
        assert!((im - z.im).abs().to_f64() < 1e-29);
    }

    #[test]
    fn rem_tau_is_small() {
        let x = Dd::from_f64(1e7) * Dd::from_f64(3.0).ln();
        let r = x.rem_tau();
        assert!(r.hi.abs() <= std::f64::consts::PI + 1e-12);
        let (s1, _) = x.sin_cos();
        let (s2, _) = r.sin_cos();
        assert!((s1 - s2).abs().to_f64() < 1e-24);
    }
}
