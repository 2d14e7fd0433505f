//! Multiprecision real and complex scalars on top of astro-float.
//!
//! Every value carries the precision (bits) it was created with; binary
//! operations run at the larger of the two operand precisions.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Real { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(1, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, prec), prec)
    }

    /// Exact when the integer fits in `prec` bits, otherwise rounded.
    pub fn from_bigint(x: &BigInt, prec: usize) -> Self {
        if x.is_zero() {
            return Self::zero(prec);
        }
        let (sign, digits) = x.to_u64_digits();
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (64 * words.len()) as i32;
        let raw = BigFloat::from_words(&words, s, e);
        // from_words keeps every input bit; round to the requested precision
        let r = raw.add(&BigFloat::from_word(0, prec), prec, RM);
        Self::wrap(r, prec)
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let n = Self::from_bigint(q.numer(), prec + 64);
        let d = Self::from_bigint(q.denom(), prec + 64);
        (n / d).with_prec(prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        let _ = v.set_precision(prec, RM);
        Self::wrap(v, prec)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|c| c.pi(prec, RM)), prec)
    }

    pub fn ln2(prec: usize) -> Self {
        Self::wrap(with_consts(|c| c.ln_2(prec, RM)), prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn signum(&self) -> i32 {
        if self.v.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Binary exponent e with |x| in [2^(e-1), 2^e); None for zero.
    pub fn exponent(&self) -> Option<i32> {
        if self.v.is_zero() {
            None
        } else {
            self.v.exponent()
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.ln(p, RM, c)), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.exp(p, RM, c)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.sin(p, RM, c)), p)
    }

    pub fn cos(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.cos(p, RM, c)), p)
    }

    pub fn atan(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.atan(p, RM, c)), p)
    }

    pub fn sinh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.sinh(p, RM, c)), p)
    }

    pub fn cosh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.cosh(p, RM, c)), p)
    }

    pub fn tanh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|c| self.v.tanh(p, RM, c)), p)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    /// Angle of the point (x, y) in (-pi, pi].
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let p = y.prec.max(x.prec);
        if x.is_zero() && y.is_zero() {
            return Real::zero(p);
        }
        let pi = Real::pi(p);
        if y.abs() <= x.abs() {
            let a = (y / x).atan();
            if x.signum() > 0 {
                a
            } else if y.is_negative() {
                a - pi
            } else {
                a + pi
            }
        } else {
            let half = pi.ldexp(-1);
            let a = (x / y).atan();
            if y.signum() > 0 {
                half - a
            } else {
                -half - a
            }
        }
    }

    /// Multiplication by 2^k (exact).
    pub fn ldexp(&self, k: i32) -> Self {
        if self.v.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().unwrap_or(0);
        v.set_exponent(e + k);
        Self::wrap(v, self.prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.v.as_raw_parts() {
            None => f64::NAN,
            Some((m, _, s, e, _)) => {
                let l = m.len();
                if l == 0 || self.v.is_zero() {
                    return 0.0;
                }
                let hi = m[l - 1] as f64;
                let lo = if l >= 2 { m[l - 2] as f64 } else { 0.0 };
                let mant = (hi + lo * 2f64.powi(-64)) * 2f64.powi(-64);
                let v = if e > 1000 {
                    f64::INFINITY
                } else if e < -1100 {
                    0.0
                } else {
                    mant * 2f64.powi(e)
                };
                if s == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Round to the nearest integer (ties away from zero).
    pub fn round_to_bigint(&self) -> BigInt {
        let half = Real::from_f64(0.5, self.prec);
        let shifted = if self.is_negative() { self - &half } else { self + &half };
        shifted.trunc_to_bigint()
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        let t = self.trunc_to_bigint();
        if self.is_negative() && Real::from_bigint(&t, self.prec + 64) != *self {
            t - 1
        } else {
            t
        }
    }

    /// Truncation toward zero.
    pub fn trunc_to_bigint(&self) -> BigInt {
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return BigInt::zero();
        };
        if self.v.is_zero() || e <= 0 {
            return BigInt::zero();
        }
        let mag = words_to_bigint(m);
        let shift = e as i64 - 64 * m.len() as i64;
        let r = if shift >= 0 { mag << (shift as usize) } else { mag >> ((-shift) as usize) };
        if s == Sign::Neg {
            -r
        } else {
            r
        }
    }

    /// Exact rational value of this binary float.
    pub fn to_rational(&self) -> BigRational {
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return BigRational::zero();
        };
        if self.v.is_zero() {
            return BigRational::zero();
        }
        let mut mag = words_to_bigint(m);
        if s == Sign::Neg {
            mag = -mag;
        }
        let shift = e as i64 - 64 * m.len() as i64;
        if shift >= 0 {
            BigRational::from_integer(mag << (shift as usize))
        } else {
            BigRational::new(mag, BigInt::from(1) << ((-shift) as usize))
        }
    }

    /// Decimal rendering with `digits` significant digits in scientific form.
    pub fn to_decimal(&self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        if self.is_zero() {
            return "0".to_string();
        }
        let p = self.prec.max(64) + 64;
        let x = self.with_prec(p).abs();
        let l10 = Real::from_f64(std::f64::consts::LOG2_10, 64);
        let e2 = x.exponent().unwrap_or(0) as f64;
        let mut k = (e2 / l10.to_f64()).floor() as i64;
        let ten = Real::from_i64(10, p);
        let scaled = |k: i64| -> Real {
            let sh = digits as i64 - 1 - k;
            let f = pow10(&ten, sh.unsigned_abs() as usize);
            if sh >= 0 { &x * &f } else { &x / &f }
        };
        let mut m = scaled(k).round_to_bigint();
        let lim = BigInt::from(10).pow(digits as u32);
        while m >= lim {
            k += 1;
            m = scaled(k).round_to_bigint();
        }
        while m < BigInt::from(10).pow(digits as u32 - 1) {
            k -= 1;
            m = scaled(k).round_to_bigint();
        }
        let s = m.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{s}e{k}")
        } else {
            format!("{sign}{}.{}e{k}", &s[..1], &s[1..])
        }
    }
}

fn pow10(ten: &Real, n: usize) -> Real {
    ten.powi(n)
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// Complex number with multiprecision parts.
#[derive(Clone, PartialEq)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl fmt::Debug for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} {:+e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Cplx::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Cplx::new(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: usize) -> Self {
        Cplx::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec();
        Cplx::new(re, Real::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Cplx::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    /// r e^{i theta}
    pub fn from_polar(r: &Real, theta: &Real) -> Self {
        Cplx::new(r * &theta.cos(), r * &theta.sin())
    }

    /// e^{i theta}
    pub fn cis(theta: &Real) -> Self {
        Cplx::new(theta.cos(), theta.sin())
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        Cplx::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Cplx::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        // scale to avoid over/underflow of the squares
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return big;
        }
        let q = &small / &big;
        let one = Real::one(self.prec());
        &big * &(one + &q * &q).sqrt()
    }

    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    /// Principal logarithm, argument in (-pi, pi].
    pub fn ln(&self) -> Cplx {
        Cplx::new(self.abs().ln(), self.arg())
    }

    pub fn exp(&self) -> Cplx {
        let r = self.re.exp();
        Cplx::new(&r * &self.im.cos(), &r * &self.im.sin())
    }

    pub fn scale(&self, s: &Real) -> Cplx {
        Cplx::new(&self.re * s, &self.im * s)
    }

    pub fn mul_i(&self) -> Cplx {
        Cplx::new(-&self.im, self.re.clone())
    }

    pub fn inv(&self) -> Cplx {
        let one = Cplx::one(self.prec());
        &one / self
    }

    pub fn powi(&self, n: u32) -> Cplx {
        let mut acc = Cplx::one(self.prec());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn sqrt(&self) -> Cplx {
        let p = self.prec();
        if self.is_zero() {
            return Cplx::zero(p);
        }
        let r = self.abs();
        let half = Real::from_f64(0.5, p);
        let a = ((&r + &self.re.abs()) * &half).sqrt();
        let b = &self.im.abs() / &(&a + &a);
        if self.re.signum() >= 0 {
            Cplx::new(a, if self.im.is_negative() { -b } else { b })
        } else {
            Cplx::new(b, if self.im.is_negative() { -a } else { a })
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Max-norm magnitude as f64, cheap.
    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        a.hypot(b)
    }
}

macro_rules! cplx_binop_impls {
    ($tr:ident, $m:ident) => {
        impl $tr<Cplx> for Cplx {
            type Output = Cplx;
            fn $m(self, rhs: Cplx) -> Cplx {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cplx> for Cplx {
            type Output = Cplx;
            fn $m(self, rhs: &Cplx) -> Cplx {
                (&self).$m(rhs)
            }
        }
        impl $tr<Cplx> for &Cplx {
            type Output = Cplx;
            fn $m(self, rhs: Cplx) -> Cplx {
                self.$m(&rhs)
            }
        }
    };
}

impl Add<&Cplx> for &Cplx {
    type Output = Cplx;
    fn add(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Cplx> for &Cplx {
    type Output = Cplx;
    fn sub(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Cplx> for &Cplx {
    type Output = Cplx;
    fn mul(self, rhs: &Cplx) -> Cplx {
        Cplx::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Cplx> for &Cplx {
    type Output = Cplx;
    fn div(self, rhs: &Cplx) -> Cplx {
        // Smith's algorithm
        let (c, d) = (&rhs.re, &rhs.im);
        if c.abs() >= d.abs() {
            let r = d / c;
            let den = c + &(&r * d);
            Cplx::new(
                (&self.re + &(&self.im * &r)) / &den,
                (&self.im - &(&self.re * &r)) / &den,
            )
        } else {
            let r = c / d;
            let den = d + &(&r * c);
            Cplx::new(
                (&(&self.re * &r) + &self.im) / &den,
                (&(&self.im * &r) - &self.re) / &den,
            )
        }
    }
}

cplx_binop_impls!(Add, add);
cplx_binop_impls!(Sub, sub);
cplx_binop_impls!(Mul, mul);
cplx_binop_impls!(Div, div);

impl Neg for &Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx::new(-&self.re, -&self.im)
    }
}

impl Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        -&self
    }
}

fn words_to_bigint(m: &[Word]) -> BigInt {
    let mut halves = Vec::with_capacity(2 * m.len());
    for &w in m {
        let w = w as u64;
        halves.push(w as u32);
        halves.push((w >> 32) as u32);
    }
    BigInt::from_slice(BigSign::Plus, &halves)
}

/// Bits of a BigInt's magnitude.
pub fn bit_len(x: &BigInt) -> u64 {
    x.abs().bits()
}

/// Best-effort f64 of a BigRational, including huge/tiny magnitudes.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    Real::from_rational(q, 64).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -0.75, 3.5, 1e-30, -1e200, 123456.789] {
            assert_eq!(Real::from_f64(x, 256).to_f64(), x);
        }
    }

    #[test]
    fn bigint_conversions() {
        let big = BigInt::parse_bytes(b"-123456789012345678901234567890123", 10).unwrap();
        let r = Real::from_bigint(&big, 256);
        assert_eq!(r.trunc_to_bigint(), big);
        assert_eq!(Real::from_f64(-2.5, 64).floor_to_bigint(), BigInt::from(-3));
        assert_eq!(Real::from_f64(2.5, 64).round_to_bigint(), BigInt::from(3));
        assert_eq!(Real::from_f64(0.375, 64).to_rational(), BigRational::new(3.into(), 8.into()));
    }

    #[test]
    fn atan2_quadrants() {
        let p = 128;
        let pi = std::f64::consts::PI;
        let c = |y: f64, x: f64| Real::atan2(&Real::from_f64(y, p), &Real::from_f64(x, p)).to_f64();
        assert!((c(1.0, 1.0) - pi / 4.0).abs() < 1e-15);
        assert!((c(1.0, -1.0) - 3.0 * pi / 4.0).abs() < 1e-15);
        assert!((c(-1.0, -1.0) + 3.0 * pi / 4.0).abs() < 1e-15);
        assert!((c(0.0, -1.0) - pi).abs() < 1e-15);
        assert!((c(-2.0, 0.0) + pi / 2.0).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Real::pi(256).to_decimal(10), "3.141592654e0");
        assert_eq!(Real::from_f64(-0.00125, 64).to_decimal(3), "-1.25e-3");
    }

    #[test]
    fn complex_basics() {
        let p = 128;
        let z = Cplx::from_f64(3.0, 4.0, p);
        assert_eq!(z.abs().to_f64(), 5.0);
        let w = &z / &z;
        assert!((w.re.to_f64() - 1.0).abs() < 1e-30 && w.im.to_f64().abs() < 1e-30);
        let s = Cplx::from_f64(-4.0, 0.0, p).sqrt();
        assert_eq!(s.to_f64(), (0.0, 2.0));
        let l = Cplx::from_f64(-1.0, 0.0, p).ln();
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }
}
