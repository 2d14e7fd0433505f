//! Complex balls: a multiprecision midpoint with an f64 error radius.

use crate::mp::{Cplx, Real};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Upward-biased f64 sum, enough to keep radii conservative.
fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

/// Complex approximation `mid` with `|true - mid| <= rad`.
#[derive(Clone, PartialEq)]
pub struct ComplexApprox {
    pub mid: Cplx,
    pub rad: f64,
}

impl fmt::Debug for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ± {:e}", self.mid, self.rad)
    }
}

impl ComplexApprox {
    pub fn new(mid: Cplx, rad: f64) -> Self {
        ComplexApprox { mid, rad }
    }

    pub fn exact(mid: Cplx) -> Self {
        ComplexApprox { mid, rad: 0.0 }
    }

    pub fn from_real(x: Real, rad: f64) -> Self {
        ComplexApprox { mid: Cplx::from_real(x), rad }
    }

    pub fn zero(prec: usize) -> Self {
        Self::exact(Cplx::zero(prec))
    }

    pub fn prec(&self) -> usize {
        self.mid.prec()
    }

    pub fn real_part(&self) -> &Real {
        &self.mid.re
    }

    pub fn imag_part(&self) -> &Real {
        &self.mid.im
    }

    pub fn error_radius(&self) -> f64 {
        self.rad
    }

    /// Unit roundoff of the midpoint precision, scaled by the magnitude.
    pub fn rounding(&self) -> f64 {
        ulp_of(&self.mid)
    }

    pub fn mag(&self) -> f64 {
        self.mid.abs_f64()
    }

    pub fn mag_upper(&self) -> f64 {
        up(self.mag() + self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.mag() <= self.rad * (1.0 + 1e-12)
    }

    /// True when the two balls intersect.
    pub fn overlaps(&self, other: &ComplexApprox) -> bool {
        let d = (&self.mid - &other.mid).abs_f64();
        d <= up(self.rad + other.rad)
    }

    pub fn dist(&self, other: &ComplexApprox) -> f64 {
        (&self.mid - &other.mid).abs_f64()
    }

    pub fn conj(&self) -> Self {
        ComplexApprox::new(self.mid.conj(), self.rad)
    }

    pub fn inflate(&self, extra: f64) -> Self {
        ComplexApprox::new(self.mid.clone(), up(self.rad + extra))
    }

    /// Reciprocal; None when the ball contains zero.
    pub fn inv(&self) -> Option<ComplexApprox> {
        let m = self.mag();
        if m <= self.rad {
            return None;
        }
        let mid = self.mid.inv();
        let rad = up(self.rad / (m * (m - self.rad)) + ulp_of(&mid));
        Some(ComplexApprox::new(mid, rad))
    }

    pub fn div(&self, other: &ComplexApprox) -> Option<ComplexApprox> {
        Some(self * &other.inv()?)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.mid.to_f64()
    }
}

pub(crate) fn ulp_of(z: &Cplx) -> f64 {
    let m = z.abs_f64();
    if m == 0.0 {
        return 0.0;
    }
    m * 2f64.powi(2 - z.prec() as i32)
}

impl Add<&ComplexApprox> for &ComplexApprox {
    type Output = ComplexApprox;
    fn add(self, rhs: &ComplexApprox) -> ComplexApprox {
        let mid = &self.mid + &rhs.mid;
        let r = ulp_of(&mid);
        ComplexApprox::new(mid, up(self.rad + rhs.rad + r))
    }
}

impl Sub<&ComplexApprox> for &ComplexApprox {
    type Output = ComplexApprox;
    fn sub(self, rhs: &ComplexApprox) -> ComplexApprox {
        let mid = &self.mid - &rhs.mid;
        let r = ulp_of(&mid);
        ComplexApprox::new(mid, up(self.rad + rhs.rad + r))
    }
}

impl Mul<&ComplexApprox> for &ComplexApprox {
    type Output = ComplexApprox;
    fn mul(self, rhs: &ComplexApprox) -> ComplexApprox {
        let mid = &self.mid * &rhs.mid;
        let (a, b) = (self.mag(), rhs.mag());
        let r = a * rhs.rad + b * self.rad + self.rad * rhs.rad + 2.0 * ulp_of(&mid);
        ComplexApprox::new(mid, up(r))
    }
}

impl Neg for &ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        ComplexApprox::new(-&self.mid, self.rad)
    }
}
