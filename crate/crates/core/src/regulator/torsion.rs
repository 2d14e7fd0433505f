use crate::error::{Error, Result};
use crate::field_arith::{convergents, ComplexApprox};
use crate::mp::{Cplx, Real};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// (2 pi i)^p, the generator of the period lattice in degree p.
pub fn lattice_generator(p: usize, prec: usize) -> Cplx {
    let two_pi_i = Cplx::new(Real::zero(prec), &Real::pi(prec) * &Real::from_i64(2, prec));
    two_pi_i.powi(p as u32)
}

/// v minus k (2 pi i)^p with the real part of the quotient in [-1/2, 1/2); returns (rep, k).
pub fn canonical_representative(v: &Cplx, p: usize) -> (Cplx, BigInt) {
    let prec = v.prec();
    let g = lattice_generator(p, prec);
    let q = v / &g;
    let k = (&q.re + &Real::from_f64(0.5, prec)).floor_to_bigint();
    let rep = v - &g.scale(&Real::from_bigint(&k, prec));
    (rep, k)
}

#[derive(Clone, Debug)]
pub struct TorsionReport {
    /// smallest m <= max_order with m q within tol of an integer
    pub order: Option<u64>,
    /// q = v / (2 pi i)^p
    pub q: (f64, f64),
    /// q as a fraction (numerator, denominator) when torsion is detected
    pub certificate: Option<(BigInt, BigInt)>,
    /// |m q - round(m q)| for the reported order
    pub residual: f64,
}

/// Detect torsion of a regulator value modulo (2 pi i)^p by continued fractions.
/// The minimal m with |m q - round(m q)| < tol is always a convergent denominator.
pub fn torsion_order(v: &ComplexApprox, p: usize, max_order: u64, tol: f64) -> Result<TorsionReport> {
    if max_order == 0 {
        return Err(Error::Invalid("max_order must be positive".into()));
    }
    let need = tol / (2.0 * max_order as f64);
    if !(v.rad < need) {
        return Err(Error::Precision(format!(
            "value radius {:e} is not below tol/(2 max_order) = {:e}; raise precision or tighten quadrature",
            v.rad, need
        )));
    }
    let prec = v.prec();
    let q = &v.mid / &lattice_generator(p, prec);
    let qf = q.to_f64();
    let mut rep = TorsionReport { order: None, q: qf, certificate: None, residual: f64::NAN };
    if qf.1.abs() >= tol {
        return Ok(rep);
    }
    for c in convergents(&q.re, &BigInt::from(max_order)) {
        let (h, k) = (c.numer().clone(), c.denom().clone());
        let r = (&(&q.re * &Real::from_bigint(&k, prec)) - &Real::from_bigint(&h, prec)).abs().to_f64();
        if r < tol {
            rep.order = k.abs().to_u64();
            rep.certificate = Some((h, k));
            rep.residual = r;
            return Ok(rep);
        }
    }
    Ok(rep)
}
