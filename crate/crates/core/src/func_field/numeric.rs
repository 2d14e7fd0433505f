//! Numeric images of exact polynomials and rational functions under the fixed embedding.

use super::{Poly, RationalFunction};
use crate::field_arith::{embed, ComplexApprox};
use crate::mp::Cplx;

/// Polynomial with complex ball coefficients (midpoints plus radii).
#[derive(Clone, Debug)]
pub struct NumPoly {
    pub c: Vec<Cplx>,
    pub rad: Vec<f64>,
}

impl NumPoly {
    pub fn from_poly(p: &Poly, prec: usize) -> Self {
        let balls: Vec<ComplexApprox> = p.coeffs().iter().map(|c| embed(c, prec)).collect();
        NumPoly { rad: balls.iter().map(|b| b.rad).collect(), c: balls.into_iter().map(|b| b.mid).collect() }
    }

    pub fn from_cplx(c: Vec<Cplx>) -> Self {
        let n = c.len();
        NumPoly { c, rad: vec![0.0; n] }
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn prec(&self) -> usize {
        self.c.first().map_or(64, |x| x.prec())
    }

    pub fn eval(&self, z: &Cplx) -> Cplx {
        let mut acc = Cplx::zero(z.prec().max(self.prec()));
        for c in self.c.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// (p(z), p'(z)) by a double Horner pass.
    pub fn eval_d(&self, z: &Cplx) -> (Cplx, Cplx) {
        let p = z.prec().max(self.prec());
        let mut v = Cplx::zero(p);
        let mut d = Cplx::zero(p);
        for c in self.c.iter().rev() {
            d = &(&d * z) + &v;
            v = &(&v * z) + c;
        }
        (v, d)
    }

    /// Upper bound for sum_k rad_k |z|^k plus Horner rounding.
    pub fn eval_error(&self, z_abs: f64, value_abs: f64) -> f64 {
        let mut acc = 0.0;
        let mut mag = 0.0;
        for (c, r) in self.c.iter().zip(&self.rad).rev() {
            acc = acc * z_abs + r;
            mag = mag * z_abs + c.abs_f64();
        }
        acc + (mag + value_abs) * 2f64.powi(4 - self.prec() as i32) * (self.c.len() as f64)
    }

    /// Ball evaluation at a ball argument.
    pub fn eval_ball(&self, z: &ComplexApprox) -> ComplexApprox {
        let p = z.prec().max(self.prec());
        let mut acc = ComplexApprox::zero(p);
        for (c, r) in self.c.iter().zip(&self.rad).rev() {
            acc = &(&acc * z) + &ComplexApprox::new(c.clone(), *r);
        }
        acc
    }

    /// self - rho * other
    pub fn sub_scaled(&self, other: &NumPoly, rho: &Cplx) -> NumPoly {
        let n = self.c.len().max(other.c.len());
        let p = self.prec().max(other.prec());
        let mut c = Vec::with_capacity(n);
        let mut rad = Vec::with_capacity(n);
        let rabs = rho.abs_f64();
        for k in 0..n {
            let a = self.c.get(k).cloned().unwrap_or_else(|| Cplx::zero(p));
            let b = other.c.get(k).map(|b| b * rho).unwrap_or_else(|| Cplx::zero(p));
            c.push(&a - &b);
            rad.push(self.rad.get(k).copied().unwrap_or(0.0) + rabs * other.rad.get(k).copied().unwrap_or(0.0));
        }
        NumPoly { c, rad }
    }

    pub fn derivative(&self) -> NumPoly {
        if self.c.len() <= 1 {
            return NumPoly { c: vec![], rad: vec![] };
        }
        let p = self.prec();
        let c = self.c.iter().enumerate().skip(1).map(|(k, x)| x.scale(&crate::mp::Real::from_i64(k as i64, p))).collect();
        let rad = self.rad.iter().enumerate().skip(1).map(|(k, r)| r * k as f64).collect();
        NumPoly { c, rad }
    }
}

/// Numeric image of a rational function, for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumRational {
    pub num: NumPoly,
    pub den: NumPoly,
    /// max(deg num, deg den), the degree of the map P^1 -> P^1
    pub degree: usize,
}

impl NumRational {
    pub fn new(f: &RationalFunction, prec: usize) -> Self {
        NumRational {
            num: NumPoly::from_poly(f.num(), prec),
            den: NumPoly::from_poly(f.den(), prec),
            degree: f.degree(),
        }
    }

    pub fn eval(&self, t: &Cplx) -> Cplx {
        &self.num.eval(t) / &self.den.eval(t)
    }

    /// (f(t), f'(t)/f(t))
    pub fn eval_logd(&self, t: &Cplx) -> (Cplx, Cplx) {
        let (n, dn) = self.num.eval_d(t);
        let (d, dd) = self.den.eval_d(t);
        let f = &n / &d;
        let ld = &(&dn / &n) - &(&dd / &d);
        (f, ld)
    }

    /// (f(t), f'(t))
    pub fn eval_d(&self, t: &Cplx) -> (Cplx, Cplx) {
        let (n, dn) = self.num.eval_d(t);
        let (d, dd) = self.den.eval_d(t);
        let f = &n / &d;
        let fp = &(&dn - &(&f * &dd)) / &d;
        (f, fp)
    }

    pub fn eval_ball(&self, t: &ComplexApprox) -> Option<ComplexApprox> {
        self.num.eval_ball(t).div(&self.den.eval_ball(t))
    }
}
