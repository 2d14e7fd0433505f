use super::{P1Point, Poly};
use crate::error::{Error, Result};
use crate::field_arith::CyclotomicNumber as K;
use std::fmt;

/// Element of k(t) in canonical form: coprime numerator and denominator,
/// denominator monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Operation selector for [`rf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
    Compose,
}

pub fn rf_arith(f: &RationalFunction, g: &RationalFunction, op: RfOp) -> Result<RationalFunction> {
    if f.order() != g.order() {
        return Err(Error::OrderMismatch(f.order(), g.order()));
    }
    match op {
        RfOp::Add => Ok(f.add(g)),
        RfOp::Sub => Ok(f.sub(g)),
        RfOp::Mul => Ok(f.mul(g)),
        RfOp::Div => f.div(g),
        RfOp::Compose => f.compose(g),
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = num.order();
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(n) });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() { (num, den) } else { (num.exact_div(&g)?, den.exact_div(&g)?) };
        let inv = den.lead().inv()?;
        Ok(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.order();
        RationalFunction { num: p, den: Poly::one(n) }
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn t(order: u32) -> Self {
        Self::from_poly(Poly::t(order))
    }

    pub fn zero(order: u32) -> Self {
        Self::from_poly(Poly::zero(order))
    }

    pub fn one(order: u32) -> Self {
        Self::from_poly(Poly::one(order))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn order(&self) -> u32 {
        self.num.order()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// Some(c) if the function is the constant c.
    pub fn as_constant(&self) -> Option<K> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.lead())
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Degree of t -> f(t) as a map P^1 -> P^1.
    pub fn degree(&self) -> usize {
        if self.is_constant() {
            0
        } else {
            self.num.deg0().max(self.den.deg0())
        }
    }

    pub fn add(&self, g: &Self) -> Self {
        Self::new(self.num.mul(&g.den).add(&g.num.mul(&self.den)), self.den.mul(&g.den)).expect("nonzero den")
    }

    pub fn sub(&self, g: &Self) -> Self {
        Self::new(self.num.mul(&g.den).sub(&g.num.mul(&self.den)), self.den.mul(&g.den)).expect("nonzero den")
    }

    pub fn mul(&self, g: &Self) -> Self {
        Self::new(self.num.mul(&g.num), self.den.mul(&g.den)).expect("nonzero den")
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn div(&self, g: &Self) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.mul(&g.den), self.den.mul(&g.num))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as usize;
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero den")
    }

    /// f(g(t)); `g` must be nonconstant.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.is_constant() {
            return Err(Error::Invalid("compose requires a nonconstant inner function".into()));
        }
        let d = self.num.deg0().max(self.den.deg0());
        let (a, b) = (&g.num, &g.den);
        let n = self.order();
        let homog = |p: &Poly| -> Poly {
            let mut acc = Poly::zero(n);
            for (k, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&a.pow(k).mul(&b.pow(d - k)).scale(c));
            }
            acc
        };
        Self::new(homog(&self.num), homog(&self.den))
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den)).expect("nonzero den")
    }

    /// f'/f
    pub fn log_derivative(&self) -> Result<Self> {
        self.derivative().div(self)
    }

    /// Value at infinity from the degree comparison.
    pub fn eval_infinity(&self) -> P1Point {
        let (dn, dd) = (self.num.deg0(), self.den.deg0());
        if self.num.is_zero() || dn < dd {
            P1Point::Exact(K::zero(self.order()))
        } else if dn > dd {
            P1Point::Infinity
        } else {
            P1Point::Exact(self.num.lead().checked_div(&self.den.lead()).expect("nonzero lead"))
        }
    }

    /// Exact value at a point of k.
    pub fn eval_exact(&self, x: &K) -> P1Point {
        let d = self.den.eval(x);
        if d.is_zero() {
            return P1Point::Infinity;
        }
        P1Point::Exact(self.num.eval(x).checked_div(&d).expect("nonzero"))
    }

    /// Evaluation at a point of P^1; numeric points give balls.
    pub fn eval(&self, at: &P1Point) -> Result<P1Point> {
        match at {
            P1Point::Infinity => Ok(self.eval_infinity()),
            P1Point::Exact(x) => Ok(self.eval_exact(x)),
            P1Point::Approx(z) => {
                let nf = super::numeric::NumRational::new(self, z.prec());
                nf.eval_ball(z)
                    .map(P1Point::Approx)
                    .ok_or_else(|| Error::Precision("denominator ball contains zero".into()))
            }
        }
    }

    pub fn promote(&self, m: u32) -> Result<Self> {
        Self::new(self.num.promote(m)?, self.den.promote(m)?)
    }

    /// Numerator minus denominator: its zeros are where f = 1.
    pub fn minus_one_numerator(&self) -> Poly {
        self.num.sub(&self.den)
    }
}

/// f g / (f + g - 1), the coordinate-joining substitution.
pub fn join_coordinates(f: &RationalFunction, g: &RationalFunction) -> Result<RationalFunction> {
    let n = f.order();
    let s = f.add(g).sub(&RationalFunction::one(n));
    if s.is_zero() {
        return Err(Error::ZeroDenominator(format!("({}) + ({}) - 1 = 0", f, g)));
    }
    f.mul(g).div(&s)
}
