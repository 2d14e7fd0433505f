//! Elements of Q(zeta_N) as reduced residues modulo the N-th cyclotomic polynomial.

use super::Rational;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

pub fn euler_phi(n: u32) -> usize {
    let mut m = n;
    let mut res = n as usize;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            res -= res / p as usize;
        }
        p += 1;
    }
    if m > 1 {
        res -= res / m as usize;
    }
    res
}

pub fn lcm_order(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Integer coefficients (low degree first) of the N-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic order must be positive");
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    let res = Arc::new(num);
    cache.lock().unwrap().insert(n, res.clone());
    res
}

fn exact_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db];
        q[k] = c;
        for j in 0..=db {
            r[k + j] -= c * b[j];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Exact element of the cyclotomic field Q(zeta_N), stored by its
/// phi(N) coordinates in the power basis 1, zeta, ..., zeta^{phi(N)-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Renders in the cycle-file expression syntax, e.g. `1/2 - 3*zeta^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mon = match k {
                0 => String::new(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{k}"),
            };
            if k == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", mon)?;
            } else if a.is_integer() {
                write!(f, "{}*{}", a, mon)?;
            } else {
                write!(f, "{}/{}*{}", a.numer(), a.denom(), mon)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Field operation selector for [`cyclo_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary operation on two elements of the same cyclotomic field.
pub fn cyclo_arith(a: &CyclotomicNumber, b: &CyclotomicNumber, op: FieldOp) -> Result<CyclotomicNumber> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.checked_div(b)?,
    })
}

impl CyclotomicNumber {
    fn from_poly(order: u32, mut p: Vec<Rational>) -> Self {
        let phi = cyclotomic_poly(order);
        let d = phi.len() - 1;
        // reduce modulo the monic Phi_N from the top
        while p.len() > d {
            let c = p.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = p.len() - d;
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    p[shift + j] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
        }
        p.resize(d, Rational::zero());
        CyclotomicNumber { order, coeffs: p }
    }

    pub fn zero(order: u32) -> Self {
        CyclotomicNumber { order, coeffs: vec![Rational::zero(); euler_phi(order)] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(Rational::one(), order)
    }

    pub fn from_rational(q: Rational, order: u32) -> Self {
        let mut c = vec![Rational::zero(); euler_phi(order)];
        c[0] = q;
        CyclotomicNumber { order, coeffs: c }
    }

    pub fn from_int(n: i64, order: u32) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)), order)
    }

    /// Builds an element from power-basis coordinates, reducing if necessary.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Self {
        Self::from_poly(order, coeffs)
    }

    /// zeta_N^k for any integer k.
    pub fn zeta_pow(k: i64, order: u32) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        Self::from_poly(order, p)
    }

    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(1, order)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(q) when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under zeta -> zeta^a, a coprime to N.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.order as i64;
        let mut p = vec![Rational::zero(); 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((k as i64) * a).rem_euclid(n) as usize;
            if p.len() <= e {
                p.resize(e + 1, Rational::zero());
            }
            p[e] += c;
        }
        Self::from_poly(self.order, p)
    }

    /// Complex conjugate under the fixed embedding zeta -> e^{2 pi i/N}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The same element viewed in Q(zeta_M), N | M.
    pub fn promote(&self, m: u32) -> Result<Self> {
        if m % self.order != 0 {
            return Err(Error::Invalid(format!("cannot promote order {} to {}", self.order, m)));
        }
        let step = (m / self.order) as usize;
        let mut p = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * step] = c.clone();
        }
        Ok(Self::from_poly(m, p))
    }

    pub fn checked_div(&self, b: &Self) -> Result<Self> {
        Ok(self * &b.inv()?)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi: Vec<Rational> =
            cyclotomic_poly(self.order).iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        let a = qpoly_trim(self.coeffs.clone());
        // invariant: s_i * a = r_i (mod phi)
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return Err(Error::DivisionByZero);
            }
        }
        let c = r1[0].clone();
        let s: Vec<Rational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_poly(self.order, s))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        let n = self.order as i64;
        let mut acc = Self::one(self.order);
        for a in 1..=n.max(1) {
            if a.gcd(&n) == 1 {
                acc = &acc * &self.galois(a);
            }
        }
        acc.coeffs[0].clone()
    }
}

fn qpoly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut r = vec![Rational::zero(); n];
    for (k, c) in a.iter().enumerate() {
        r[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        r[k] -= c;
    }
    qpoly_trim(r)
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    qpoly_trim(r)
}

fn qpoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], qpoly_trim(r));
    }
    let lead = &b[db];
    let mut q = vec![Rational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / lead;
        if !c.is_zero() {
            for j in 0..=db {
                r[k + j] -= &c * &b[j];
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (qpoly_trim(q), qpoly_trim(r))
}

impl Add<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicNumber { order: self.order, coeffs }
    }
}

impl Sub<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicNumber { order: self.order, coeffs }
    }
}

impl Mul<&CyclotomicNumber> for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        if let Some(q) = self.as_rational() {
            return CyclotomicNumber { order: self.order, coeffs: rhs.coeffs.iter().map(|c| c * &q).collect() };
        }
        if let Some(q) = rhs.as_rational() {
            return CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| c * &q).collect() };
        }
        let d = self.coeffs.len();
        let mut p = vec![Rational::zero(); 2 * d - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        CyclotomicNumber::from_poly(self.order, p)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$m(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}
