//! Tracing the locus f(t) = r e^{i(pi - eps)}, r > 0, by continuation in s = log r.
//!
//! All branches are advanced together on a common s-grid so that a jump from
//! one branch to another shows up as two corrected points coming too close.
//! Near an endpoint (a zero or pole of multiplicity m) the branch follows
//! t - e ~ c e^{+-s/m}, which is used to predict points beyond the last sample.

use crate::cycles::CurveComponent;
use crate::error::{Error, Result};
use crate::func_field::{aberth, disks_disjoint, inclusion_radii, roots_numeric, NumRational, Poly, RationalFunction};
use crate::mp::{Cplx, Real};

const H_INIT: f64 = 0.25;
const H_MAX: f64 = 1.0;
const H_MIN: f64 = 1e-12;
const MAX_STEPS: usize = 20_000;
/// a branch counts as arrived once |t - e| < END_REL * (distance from e to other special points)
const END_REL: f64 = 1e-3;
const NEWTON_MAX: usize = 40;

#[derive(Clone, Debug)]
pub struct PathSample {
    pub s: Real,
    pub t: Cplx,
    pub dtds: Cplx,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EndPoint {
    Finite(Cplx),
    Infinity,
}

impl EndPoint {
    pub fn to_f64(&self) -> Option<(f64, f64)> {
        match self {
            EndPoint::Finite(c) => Some(c.to_f64()),
            EndPoint::Infinity => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PathEnd {
    pub point: EndPoint,
    pub mult: u32,
}

/// A point on a traced branch with its velocity dt/ds.
#[derive(Clone, Debug)]
pub struct PathPoint {
    pub t: Cplx,
    pub dtds: Cplx,
}

/// The equation f(t) = e^s u with u = e^{i(pi - eps)}, solved as N - rho D = 0.
#[derive(Clone, Debug)]
pub(crate) struct LocusEq {
    pub f: NumRational,
    pub u: Cplx,
    pub prec: usize,
}

impl LocusEq {
    pub fn new(f: &RationalFunction, phase: f64, prec: usize) -> Self {
        let eps = Real::from_f64(phase, prec);
        let u = -Cplx::cis(&-eps);
        LocusEq { f: NumRational::new(f, prec), u, prec }
    }

    pub fn rho(&self, s: &Real) -> Cplx {
        self.u.scale(&s.exp())
    }

    /// Newton on N - rho D from t0; returns the root and the iteration count.
    pub fn newton(&self, t0: &Cplx, rho: &Cplx, max_it: usize) -> Option<(Cplx, usize)> {
        let tol = 2f64.powi(12 - self.prec as i32);
        let mut t = t0.clone();
        for it in 1..=max_it {
            let (n, dn) = self.f.num.eval_d(&t);
            let (d, dd) = self.f.den.eval_d(&t);
            let g = &n - &(rho * &d);
            let gp = &dn - &(rho * &dd);
            if gp.is_zero() {
                return None;
            }
            let step = &g / &gp;
            t = &t - &step;
            if !t.is_finite() {
                return None;
            }
            if step.abs_f64() <= tol * (1.0 + t.abs_f64()) {
                return Some((t, it));
            }
        }
        None
    }

    /// dt/ds = rho D(t) / (N'(t) - rho D'(t)) on the locus.
    pub fn dtds(&self, t: &Cplx, rho: &Cplx) -> Cplx {
        let (_, dn) = self.f.num.eval_d(t);
        let (d, dd) = self.f.den.eval_d(t);
        let gp = &dn - &(rho * &dd);
        &(rho * &d) / &gp
    }
}

#[derive(Clone, Debug)]
struct Special {
    at: Cplx,
    mult: u32,
    sep: f64,
}

#[derive(Clone, Debug)]
struct Ends {
    zeros: Vec<Special>,
    poles: Vec<Special>,
    /// multiplicity of infinity as a zero (negative: as a pole)
    inf_order: i64,
    radius: f64,
}

fn special_points(f: &RationalFunction, prec: usize) -> Result<Ends> {
    let mids = |p: &Poly| -> Result<Vec<(Cplx, u32)>> {
        if p.is_constant() {
            return Ok(vec![]);
        }
        Ok(roots_numeric(p, prec)?.into_iter().map(|(r, m)| (r.mid, m)).collect())
    };
    let zeros = mids(f.num())?;
    let poles = mids(f.den())?;
    let wr = f.num().derivative().mul(f.den()).sub(&f.num().mul(&f.den().derivative()));
    let crit = if wr.is_zero() { vec![] } else { mids(&wr)? };
    let all: Vec<Cplx> = zeros.iter().chain(&poles).chain(&crit).map(|x| x.0.clone()).collect();
    let radius = all.iter().map(|c| c.abs_f64()).fold(1.0, f64::max);
    let with_sep = |v: &[(Cplx, u32)]| -> Vec<Special> {
        v.iter()
            .map(|(c, m)| {
                let scale = 1.0 + c.abs_f64();
                let sep = all
                    .iter()
                    .map(|o| (o - c).abs_f64())
                    .filter(|&d| d > 1e-20 * scale)
                    .fold(f64::INFINITY, f64::min);
                Special { at: c.clone(), mult: *m, sep: if sep.is_finite() { sep } else { scale } }
            })
            .collect()
    };
    let inf_order = f.den().deg0() as i64 - f.num().deg0() as i64;
    Ok(Ends { zeros: with_sep(&zeros), poles: with_sep(&poles), inf_order, radius })
}

/// One branch of the locus, oriented from a pole (s = +inf) to a zero (s = -inf).
#[derive(Clone, Debug)]
pub struct TracedPath {
    /// 1-based coordinate index within the component
    pub coord: usize,
    pub phase: f64,
    /// s strictly decreasing (r decreasing): pole side first
    pub samples: Vec<PathSample>,
    pub pole: PathEnd,
    pub zero: PathEnd,
    pub(crate) eq: LocusEq,
}

impl TracedPath {
    pub fn prec(&self) -> usize {
        self.eq.prec
    }

    /// (smallest, largest) sampled s.
    pub fn s_range(&self) -> (f64, f64) {
        (self.samples.last().unwrap().s.to_f64(), self.samples[0].s.to_f64())
    }

    pub fn rho(&self, s: &Real) -> Cplx {
        self.eq.rho(s)
    }

    /// Distance of arg(e^{i eps} f(t)) from pi, a check that t lies on the locus.
    pub fn arg_residual(&self, t: &Cplx) -> f64 {
        let w = &self.eq.f.eval(t) * &(-&self.eq.u).conj();
        let a = w.arg().to_f64().abs();
        std::f64::consts::PI - a
    }

    fn asymptotic(&self, s: &Real) -> Option<Cplx> {
        let p = self.prec();
        let ln2p = p as f64 * std::f64::consts::LN_2;
        let (anchor, end, sign) = if s > &self.samples[0].s {
            (&self.samples[0], &self.pole, -1.0)
        } else {
            (self.samples.last().unwrap(), &self.zero, 1.0)
        };
        let m = end.mult as f64;
        let delta = (s - &anchor.s).to_f64();
        if (delta / m).abs() > ln2p + 30.0 {
            return None;
        }
        let dm = Real::from_f64(1.0 / m, p);
        match &end.point {
            EndPoint::Finite(e) => {
                // t - e = (t_a - e) exp(sign (s - s_a)/m)
                let k = ((s - &anchor.s) * &dm * &Real::from_f64(sign, p)).exp();
                let off = (&anchor.t - e).scale(&k);
                let rel = off.abs_f64() / (1.0 + e.abs_f64());
                if m * rel.log2() < -(p as f64 - 20.0) {
                    return None;
                }
                Some(e + &off)
            }
            EndPoint::Infinity => {
                let k = ((s - &anchor.s) * &dm * &Real::from_f64(-sign, p)).exp();
                Some(anchor.t.scale(&k))
            }
        }
    }

    fn hermite(&self, s: &Real) -> (Cplx, f64) {
        // samples are descending in s
        let k = self.samples.partition_point(|x| &x.s > s).max(1) - 1;
        let k = k.min(self.samples.len() - 2);
        let (a, b) = (&self.samples[k], &self.samples[k + 1]);
        let p = self.prec();
        let h = &b.s - &a.s;
        let tau = &(s - &a.s) / &h;
        let one = Real::one(p);
        let two = Real::from_i64(2, p);
        let three = Real::from_i64(3, p);
        let t2 = &tau * &tau;
        let t3 = &t2 * &tau;
        let h00 = &(&(&two * &t3) - &(&three * &t2)) + &one;
        let h10 = &(&t3 - &(&two * &t2)) + &tau;
        let h01 = &(&three * &t2) - &(&two * &t3);
        let h11 = &t3 - &t2;
        let pred = &(&(&a.t.scale(&h00) + &a.dtds.scale(&(&h10 * &h))) + &b.t.scale(&h01)) + &b.dtds.scale(&(&h11 * &h));
        (pred, (&a.t - &b.t).abs_f64())
    }

    /// The point of this branch at s, or None when s lies so far beyond the
    /// sampled range that the point coincides with its endpoint at this precision.
    pub fn point_at(&self, s: &Real) -> Result<Option<PathPoint>> {
        let first = &self.samples[0].s;
        let last = &self.samples.last().unwrap().s;
        let rho = self.eq.rho(s);
        let (pred, scale) = if s > first || s < last {
            match self.asymptotic(s) {
                Some(t) => {
                    let sc = t.abs_f64();
                    (t, sc)
                }
                None => return Ok(None),
            }
        } else if self.samples.len() == 1 {
            (self.samples[0].t.clone(), 1.0)
        } else {
            self.hermite(s)
        };
        let (t, _) = self.eq.newton(&pred, &rho, NEWTON_MAX).ok_or_else(|| {
            Error::NonConvergence(format!("Newton on the locus of z{} at s = {:.6}", self.coord, s.to_f64()))
        })?;
        if (&t - &pred).abs_f64() > 0.5 * scale.max(1e-300) + 2f64.powi(20 - self.prec() as i32) * (1.0 + t.abs_f64()) {
            return Err(Error::NonConvergence(format!(
                "possible branch jump on the locus of z{} at s = {:.6}",
                self.coord,
                s.to_f64()
            )));
        }
        let dtds = self.eq.dtds(&t, &rho);
        Ok(Some(PathPoint { t, dtds }))
    }
}

struct Branch {
    samples: Vec<PathSample>,
    end: Option<(EndPoint, u32)>,
}

fn arrived(t: &Cplx, ends: &Ends, poles: bool) -> Option<(EndPoint, u32)> {
    let list = if poles { &ends.poles } else { &ends.zeros };
    for sp in list {
        if (t - &sp.at).abs_f64() < END_REL * sp.sep {
            return Some((EndPoint::Finite(sp.at.clone()), sp.mult));
        }
    }
    let inf_here = if poles { ends.inf_order < 0 } else { ends.inf_order > 0 };
    if inf_here && t.abs_f64() > ends.radius / END_REL {
        return Some((EndPoint::Infinity, ends.inf_order.unsigned_abs() as u32));
    }
    None
}

/// Position of an arrived branch at s from the asymptotic law.
fn frozen_position(b: &Branch, s: &Real, poles: bool, prec: usize) -> Cplx {
    let a = b.samples.last().unwrap();
    let (end, m) = b.end.as_ref().unwrap();
    let sign = if poles { -1.0 } else { 1.0 };
    let d = (s - &a.s).to_f64() / *m as f64;
    match end {
        EndPoint::Finite(e) => e + &(&a.t - e).scale(&Real::from_f64((sign * d).exp(), prec)),
        EndPoint::Infinity => a.t.scale(&Real::from_f64((-sign * d).exp(), prec)),
    }
}

fn trace_direction(eq: &LocusEq, ends: &Ends, s0: &Real, start: &[PathSample], up: bool) -> Result<Vec<Branch>> {
    let prec = eq.prec;
    let dir = if up { 1.0 } else { -1.0 };
    let mut br: Vec<Branch> = start
        .iter()
        .map(|x| Branch { samples: vec![x.clone()], end: arrived(&x.t, ends, up) })
        .collect();
    let mut s = s0.clone();
    let mut h = H_INIT;
    let mut steps = 0;
    while br.iter().any(|b| b.end.is_none()) {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NonConvergence(format!("tracing did not reach the endpoints after {} steps", MAX_STEPS)));
        }
        let s_new = &s + &Real::from_f64(dir * h, prec);
        let rho = eq.rho(&s_new);
        let mut new_pts: Vec<Option<(Cplx, Cplx)>> = Vec::with_capacity(br.len());
        let mut ok = true;
        let mut worst_it = 0;
        for b in &br {
            if b.end.is_some() {
                new_pts.push(None);
                continue;
            }
            let cur = b.samples.last().unwrap();
            let dh = Real::from_f64(dir * h, prec);
            let mut pred = &cur.t + &cur.dtds.scale(&dh);
            if b.samples.len() >= 2 {
                let prev = &b.samples[b.samples.len() - 2];
                let ds = (&cur.s - &prev.s).to_f64();
                let curv = (&cur.dtds - &prev.dtds).scale(&Real::from_f64(0.5 * h * h / ds, prec));
                pred = &pred + &curv;
            }
            match eq.newton(&pred, &rho, 8) {
                Some((t, it)) => {
                    worst_it = worst_it.max(it);
                    new_pts.push(Some((pred, t)));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let positions: Vec<Cplx> = br
                .iter()
                .zip(&new_pts)
                .map(|(b, np)| match np {
                    Some((_, t)) => t.clone(),
                    None => frozen_position(b, &s_new, up, prec),
                })
                .collect();
            for (i, np) in new_pts.iter().enumerate() {
                let Some((pred, t)) = np else { continue };
                let sep = positions
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| (q - t).abs_f64())
                    .fold(f64::INFINITY, f64::min);
                let moved = (t - pred).abs_f64();
                if !(moved <= 0.2 * sep) || sep <= 2f64.powi(40 - prec as i32) * (1.0 + t.abs_f64()) {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            h *= 0.5;
            if h < H_MIN {
                return Err(Error::NonGenericPhase(format!(
                    "branches of the locus collide near r = exp({:.6}); the phase meets a critical value",
                    s.to_f64()
                )));
            }
            continue;
        }
        for (b, np) in br.iter_mut().zip(new_pts) {
            if let Some((_, t)) = np {
                let dtds = eq.dtds(&t, &rho);
                b.end = arrived(&t, ends, up);
                b.samples.push(PathSample { s: s_new.clone(), t, dtds });
            }
        }
        s = s_new;
        if worst_it <= 4 {
            h = (h * 1.5).min(H_MAX);
        }
    }
    Ok(br)
}

fn starting_points(eq: &LocusEq, degree: usize) -> Result<(Real, Vec<PathSample>)> {
    let prec = eq.prec;
    for s0 in [0.0, 0.53, -0.61, 1.37, -1.79, 2.9] {
        let s = Real::from_f64(s0, prec);
        let rho = eq.rho(&s);
        let g = eq.f.num.sub_scaled(&eq.f.den, &rho);
        if g.degree() != degree {
            continue;
        }
        let roots = aberth(&g, prec, None)?;
        let rad = inclusion_radii(&g, &roots);
        if !disks_disjoint(&roots, &rad) {
            continue;
        }
        let pts = roots
            .into_iter()
            .map(|t| {
                let dtds = eq.dtds(&t, &rho);
                PathSample { s: s.clone(), t, dtds }
            })
            .collect();
        return Ok((s, pts));
    }
    Err(Error::NonGenericPhase("no generic starting radius for the locus".into()))
}

/// f e^{i eps} is a negative real within `tol` (relative).
pub(crate) fn on_cut(w_rot: &Cplx, tol: f64) -> bool {
    let (a, b) = w_rot.to_f64();
    a < 0.0 && b.abs() <= tol * a.abs()
}

/// Relative threshold below which a value is treated as lying on a cut.
pub fn cut_tolerance(prec: usize) -> f64 {
    2f64.powf(-0.85 * prec as f64)
}

/// Trace the cut locus of one rational function.
pub fn trace_function(f: &RationalFunction, coord: usize, phase: f64, prec: usize) -> Result<Vec<TracedPath>> {
    let eq = LocusEq::new(f, phase, prec);
    let rot = -&eq.u.conj();
    if let Some(c) = f.as_constant() {
        let w = &crate::field_arith::embed(&c, prec).mid * &rot;
        if on_cut(&w, cut_tolerance(prec)) {
            return Err(Error::NonGenericPhase(format!("z{} is a constant on its cut", coord)));
        }
        return Ok(vec![]);
    }
    if f.num().deg0() == f.den().deg0() {
        let c = &crate::field_arith::embed(&f.num().lead(), prec).mid / &crate::field_arith::embed(&f.den().lead(), prec).mid;
        if on_cut(&(&c * &rot), 2f64.powi(-(prec as i32) / 2)) {
            return Err(Error::NonGenericPhase(format!("the locus of z{} passes through t = inf", coord)));
        }
    }
    let ends = special_points(f, prec)?;
    let degree = f.degree();
    let (s0, start) = starting_points(&eq, degree)?;
    let upward = trace_direction(&eq, &ends, &s0, &start, true)?;
    let downward = trace_direction(&eq, &ends, &s0, &start, false)?;
    let mut out = Vec::with_capacity(degree);
    for (u, d) in upward.into_iter().zip(downward) {
        let mut samples: Vec<PathSample> = u.samples.into_iter().rev().collect();
        samples.extend(d.samples.into_iter().skip(1));
        let (pp, pm) = u.end.expect("arrived");
        let (zp, zm) = d.end.expect("arrived");
        out.push(TracedPath {
            coord,
            phase,
            samples,
            pole: PathEnd { point: pp, mult: pm },
            zero: PathEnd { point: zp, mult: zm },
            eq: eq.clone(),
        });
    }
    Ok(out)
}

/// Branches of the locus T_i = {z_i on its cut} for one component.
pub fn trace_wavefront(c: &CurveComponent, i: usize, phase: f64, prec: usize) -> Result<Vec<TracedPath>> {
    if i == 0 || i > c.n() {
        return Err(Error::Invalid(format!("coordinate index {} out of range 1..={}", i, c.n())));
    }
    trace_function(&c.coords[i - 1], i, phase, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const P: usize = 256;

    #[test]
    fn totaro_first_coordinate() {
        // f = 1 - 1/t = -r e^{-i eps}  <=>  t = 1/(1 + r e^{-i eps}): from 0 to 1
        let z = fixtures::z1_totaro();
        let c = &z.curve_components().unwrap()[0];
        let eps = 0.15;
        let paths = trace_wavefront(c, 1, eps, P).unwrap();
        assert_eq!(paths.len(), 1);
        let p = &paths[0];
        assert_eq!(p.pole.point.to_f64(), Some((0.0, 0.0)));
        let (zr, zi) = p.zero.point.to_f64().unwrap();
        assert!((zr - 1.0).abs() < 1e-30 && zi.abs() < 1e-30);
        assert!(p.samples.windows(2).all(|w| w[0].s > w[1].s));
        for s in [-40.0, -3.3, 0.0, 0.77, 5.0, 60.0] {
            let sr = Real::from_f64(s, P);
            let pt = p.point_at(&sr).unwrap().unwrap();
            let w = Cplx::cis(&Real::from_f64(-eps, P)).scale(&sr.exp());
            let exact = (&Cplx::one(P) + &w).inv();
            assert!((&pt.t - &exact).abs_f64() < 1e-60 * (1.0 + exact.abs_f64()), "s={}", s);
            assert!(p.arg_residual(&pt.t) < 1e-60);
        }
        assert!(p.point_at(&Real::from_f64(1e6, P)).unwrap().is_none());
    }

    #[test]
    fn multiple_endpoints() {
        // t^-5: five rays from 0 (pole of order 5) to infinity
        let f = RationalFunction::t(5).powi(-5).unwrap();
        let paths = trace_function(&f, 3, 0.01, P).unwrap();
        assert_eq!(paths.len(), 5);
        for p in &paths {
            assert_eq!(p.pole.mult, 5);
            assert_eq!(p.zero.point, EndPoint::Infinity);
            let pt = p.point_at(&Real::from_f64(-30.0, P)).unwrap().unwrap();
            assert!(p.arg_residual(&pt.t) < 1e-50);
            let pt = p.point_at(&Real::from_f64(0.4, P)).unwrap().unwrap();
            assert!((pt.t.abs_f64() - (-0.4f64 / 5.0).exp()).abs() < 1e-14);
        }
        let mut angles: Vec<f64> = paths.iter().map(|p| p.samples[0].t.arg().to_f64()).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in angles.windows(2) {
            assert!((w[1] - w[0] - 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_on_cut_fails() {
        let f = RationalFunction::constant(crate::field_arith::CyclotomicNumber::from_int(-2, 1));
        assert!(trace_function(&f, 2, 0.0, P).is_err());
        assert!(trace_function(&f, 2, 0.1, P).unwrap().is_empty());
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let z = fixtures::mccarthy_counterexample();
        let c = &z.curve_components().unwrap()[0];
        let paths = trace_wavefront(c, 2, 0.2, P).unwrap();
        assert_eq!(paths.len(), 2);
        for p in &paths {
            let h = 1e-20;
            let a = p.point_at(&Real::from_f64(0.3, P)).unwrap().unwrap();
            let b = p.point_at(&(Real::from_f64(0.3, P) + Real::from_f64(h, P))).unwrap().unwrap();
            let fd = (&b.t - &a.t).scale(&Real::from_f64(1.0 / h, P));
            assert!((&fd - &a.dtds).abs_f64() < 1e-15 * (1.0 + a.dtds.abs_f64()));
        }
    }
}
