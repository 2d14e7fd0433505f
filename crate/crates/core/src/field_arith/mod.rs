//! Exact arithmetic in Q(zeta_N) and its complex embedding zeta_N -> e^{2 pi i/N}.

mod ball;
mod cyclotomic;

pub use ball::ComplexApprox;
pub(crate) use ball::ulp_of;
pub use cyclotomic::{cyclo_arith, cyclotomic_poly, euler_phi, lcm_order, CyclotomicNumber, FieldOp};

use crate::mp::{Cplx, Real};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    d.is_positive() && (d & (d - BigInt::from(1u8))).is_zero()
}

/// e^{2 pi i k/N} at `prec` bits; exact for the four axis points.
pub fn root_of_unity(k: i64, n: u32, prec: usize) -> Cplx {
    let n = n as i64;
    let k = k.rem_euclid(n);
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Cplx::one(prec),
            1 => Cplx::i(prec),
            2 => -Cplx::one(prec),
            _ => -Cplx::i(prec),
        };
    }
    let wp = prec + 32;
    let theta = Real::pi(wp).ldexp(1) * Real::from_i64(k, wp) / Real::from_i64(n, wp);
    Cplx::cis(&theta).with_prec(prec)
}

/// Ball enclosing the image of `a` under zeta_N -> e^{2 pi i/N}.
pub fn embed(a: &CyclotomicNumber, precision_bits: usize) -> ComplexApprox {
    let prec = precision_bits.max(53);
    let wp = prec + 32;
    let n = a.order();
    let mut acc = Cplx::zero(wp);
    let mut exact = true;
    let mut bits = 0u64;
    let mut weight = 0f64;
    for (k, c) in a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = root_of_unity(k as i64, n, wp);
        let axis = (4 * k as i64) % n as i64 == 0;
        if !axis || !is_dyadic(c) {
            exact = false;
        }
        bits = bits.max(c.numer().bits() + c.denom().bits());
        let cr = Real::from_rational(c, wp);
        weight += cr.to_f64().abs();
        acc = &acc + &w.scale(&cr);
    }
    let mid = acc.with_prec(prec);
    if exact && bits + 4 < prec as u64 {
        return ComplexApprox::exact(mid);
    }
    let rad = (weight + mid.abs_f64() + 1.0) * 2f64.powi(4 - prec as i32);
    ComplexApprox::new(mid, rad)
}

/// Ball for a rational number.
pub fn embed_rational(q: &Rational, prec: usize) -> ComplexApprox {
    embed(&CyclotomicNumber::from_rational(q.clone(), 1), prec)
}

/// Continued-fraction convergents h/k of `x` (unreduced Rational keeps h, k
/// as computed) with k <= max_den, in order.
pub fn convergents(x: &Real, max_den: &BigInt) -> Vec<Rational> {
    let p = x.prec() + 32;
    let x = x.with_prec(p);
    let (mut h1, mut h2) = (BigInt::from(1), BigInt::from(0));
    let (mut k1, mut k2) = (BigInt::from(0), BigInt::from(1));
    let mut y = x;
    let mut out = vec![];
    for _ in 0..400 {
        let a = y.floor_to_bigint();
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if &k > max_den {
            break;
        }
        out.push(Rational::new(h.clone(), k.clone()));
        let frac = &y - &Real::from_bigint(&a, p);
        if frac.is_zero() {
            break;
        }
        y = Real::one(p) / frac;
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
    out
}

/// Continued-fraction reconstruction: the first convergent p/q of `x` with
/// |x - p/q| <= tol, provided q <= max_den.
pub fn rational_approx(x: &Real, max_den: &BigInt, tol: &Real) -> Option<Rational> {
    let p = x.prec() + 32;
    let xp = x.with_prec(p);
    convergents(x, max_den).into_iter().find(|c| (&xp - &Real::from_rational(c, p)).abs() <= *tol)
}
