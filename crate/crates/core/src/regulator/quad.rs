//! Double-exponential quadrature: tanh-sinh on finite intervals, exp-sinh on
//! half-lines. The error estimate is the difference of successive levels plus
//! a bound for the truncated tails.

use crate::error::{Error, Result};
use crate::mp::{Cplx, Real};

const MAX_LEVEL: usize = 11;
const MIN_LEVEL: usize = 3;
const X_MAX: f64 = 7.0;
/// tails are only cut once |x| exceeds this and the terms stay small
const X_TAIL: f64 = 3.0;

#[derive(Clone, Debug)]
pub enum Interval {
    Finite(Real, Real),
    /// [a, +inf)
    Upper(Real),
    /// (-inf, a]
    Lower(Real),
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Cplx,
    /// |S_k - S_{k-1}| at the final level k, plus the truncated tails
    pub error: f64,
    pub evals: usize,
    pub level: usize,
}

struct Node {
    s: Real,
    w: Real,
    /// true once the node is at the endpoint to working precision
    at_end: bool,
}

fn node(iv: &Interval, x: f64, prec: usize, half_pi: &Real) -> Node {
    let xr = Real::from_f64(x, prec);
    let y = half_pi * &xr.sinh();
    let dy = half_pi * &xr.cosh();
    let floor = -(prec as f64) - 10.0;
    match iv {
        Interval::Finite(a, b) => {
            let len = b - a;
            let two = Real::from_i64(2, prec);
            let one = Real::one(prec);
            // e is the small one of exp(-2y), exp(2y)
            let e = if x >= 0.0 { (-(&two * &y)).exp() } else { (&two * &y).exp() };
            let ope = &one + &e;
            let frac = &e / &ope;
            let s = if x >= 0.0 { b - &(&len * &frac) } else { a + &(&len * &frac) };
            let w = &(&(&len * &dy) * &(&two * &e)) / &(&ope * &ope);
            let at_end = e.is_zero() || e.to_f64().log2() < floor;
            Node { s, w, at_end }
        }
        Interval::Upper(a) | Interval::Lower(a) => {
            let ey = y.exp();
            let s = if matches!(iv, Interval::Upper(_)) { a + &ey } else { a - &ey };
            let w = &ey * &dy;
            let at_end = x < 0.0 && (ey.is_zero() || ey.to_f64().log2() < floor + (1.0 + a.to_f64().abs()).log2());
            Node { s, w, at_end }
        }
    }
}

/// Integrate f over the interval. f may return None for points beyond the
/// range where it can be evaluated; it is then taken as negligible there and
/// the sweep in that direction stops.
pub fn integrate<F>(mut f: F, iv: &Interval, tol: f64, prec: usize) -> Result<QuadResult>
where
    F: FnMut(&Real) -> Result<Option<Cplx>>,
{
    let half_pi = &Real::pi(prec) * &Real::from_f64(0.5, prec);
    let small = tol * 2f64.powi(-10);
    let mut total = Cplx::zero(prec);
    let mut prev: Option<Cplx> = None;
    let mut evals = 0;
    let mut last_err = f64::INFINITY;
    for level in 0..=MAX_LEVEL {
        let h = 2f64.powi(-(level as i32));
        let mut acc = Cplx::zero(prec);
        let mut trunc = 0.0;
        for dir in [1.0, -1.0] {
            let mut quiet = 0;
            let mut j: i64 = if level == 0 { if dir > 0.0 { 0 } else { 1 } } else { 1 };
            loop {
                let x = dir * j as f64 * h;
                if x.abs() > X_MAX {
                    break;
                }
                let nd = node(iv, x, prec, &half_pi);
                if nd.at_end {
                    break;
                }
                evals += 1;
                let Some(v) = f(&nd.s)? else { break };
                let term = v.scale(&nd.w);
                let mag = term.abs_f64();
                if !mag.is_finite() {
                    return Err(Error::NonConvergence(format!("non-finite integrand at s = {:.6}", nd.s.to_f64())));
                }
                acc = &acc + &term;
                if mag < small && x.abs() >= X_TAIL {
                    quiet += 1;
                    if quiet >= 3 {
                        // the dropped tail decays double exponentially
                        trunc += 2.0 * mag;
                        break;
                    }
                } else {
                    quiet = 0;
                }
                j += if level == 0 { 1 } else { 2 };
            }
        }
        total = &total + &acc;
        let s_k = total.scale(&Real::from_f64(h, prec));
        if let Some(p) = &prev {
            let err = (&s_k - p).abs_f64() + trunc * h;
            last_err = err;
            if level >= MIN_LEVEL && err <= tol {
                return Ok(QuadResult { value: s_k, error: err, evals, level });
            }
        }
        prev = Some(s_k);
    }
    Err(Error::NonConvergence(format!(
        "quadrature error {:e} above {:e} after {} levels ({} evaluations)",
        last_err, tol, MAX_LEVEL, evals
    )))
}

/// Sum of integrals over consecutive pieces of the real line split at `cuts`
/// (ascending); with no cuts the line is split at `center`.
pub fn integrate_line<F>(mut f: F, cuts: &[Real], center: &Real, tol: f64, prec: usize) -> Result<QuadResult>
where
    F: FnMut(&Real, usize) -> Result<Option<Cplx>>,
{
    let pts: Vec<Real> = if cuts.is_empty() { vec![center.clone()] } else { cuts.to_vec() };
    let mut pieces = vec![Interval::Lower(pts[0].clone())];
    for w in pts.windows(2) {
        pieces.push(Interval::Finite(w[0].clone(), w[1].clone()));
    }
    pieces.push(Interval::Upper(pts.last().unwrap().clone()));
    let share = tol / pieces.len() as f64;
    let mut value = Cplx::zero(prec);
    let (mut error, mut evals, mut level) = (0.0, 0, 0);
    for (k, iv) in pieces.iter().enumerate() {
        let r = integrate(|s| f(s, k), iv, share, prec)?;
        value = &value + &r.value;
        error += r.error;
        evals += r.evals;
        level = level.max(r.level);
    }
    Ok(QuadResult { value, error, evals, level })
}
