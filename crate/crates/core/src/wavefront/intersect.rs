use super::trace::{PathPoint, TracedPath};
use crate::error::{Error, Result};
use crate::func_field::{NumRational, RationalFunction};
use crate::mp::{Cplx, Real};

/// Sine of the crossing angle below which a crossing counts as tangential.
pub const TRANSVERSE_MIN: f64 = 1e-10;
const MAX_ARG_STEP: f64 = 0.5;
const MAX_DEPTH: usize = 40;

/// A point where a traced branch of T_i meets T_j.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub s: Real,
    pub t: Cplx,
    /// -1 when Im(e^{i eps_j} f_j) goes from + to - along the pole-to-zero
    /// orientation, +1 for - to +
    pub sign: i32,
    /// sine of the angle between the two loci at t
    pub angle_sine: f64,
}

struct Probe {
    s: Real,
    w: Option<Cplx>,
}

struct CrossFinder<'a> {
    path: &'a TracedPath,
    g: NumRational,
    rot: Cplx,
    j: usize,
}

impl<'a> CrossFinder<'a> {
    fn w_at(&self, pt: &PathPoint) -> Cplx {
        &self.g.eval(&pt.t) * &self.rot
    }

    fn probe(&self, s: Real) -> Result<Probe> {
        let w = self.path.point_at(&s)?.map(|pt| self.w_at(&pt));
        if let Some(w) = &w {
            if w.is_zero() || !w.is_finite() {
                return Err(Error::NonGenericSchedule(format!(
                    "z{} has a zero or pole on the traced locus of z{} (s = {:.6})",
                    self.j,
                    self.path.coord,
                    s.to_f64()
                )));
            }
        }
        Ok(Probe { s, w })
    }

    /// phi(s) = Im w(s) and its s-derivative, with the path point.
    fn phi(&self, s: &Real) -> Result<(Real, Real, PathPoint, Cplx)> {
        let pt = self.path.point_at(s)?.ok_or_else(|| Error::NonConvergence("crossing beyond the traced range".into()))?;
        let (gv, gd) = self.g.eval_d(&pt.t);
        let w = &gv * &self.rot;
        let dw = &(&gd * &pt.dtds) * &self.rot;
        Ok((w.im.clone(), dw.im.clone(), pt, w))
    }

    fn refine(&self, a: &Real, b: &Real) -> Result<Crossing> {
        let prec = self.path.prec();
        let (mut lo, mut hi) = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let lo_sign = self.phi(&lo)?.0.signum();
        let half = Real::from_f64(0.5, prec);
        let mut s = &(&lo + &hi) * &half;
        let tol = 2f64.powi(16 - prec as i32);
        for _ in 0..400 {
            let (v, dv, pt, w) = self.phi(&s)?;
            if v.signum() == lo_sign {
                lo = s.clone();
            } else {
                hi = s.clone();
            }
            let width = (&hi - &lo).to_f64();
            let mut next = if dv.is_zero() { None } else { Some(&s - &(&v / &dv)) };
            if let Some(n) = &next {
                if !(n > &lo && n < &hi) {
                    next = None;
                }
            }
            let cand = next.unwrap_or_else(|| &(&lo + &hi) * &half);
            let step = (&cand - &s).to_f64().abs();
            if v.is_zero() || step <= tol * (1.0 + s.to_f64().abs()) || width <= tol * (1.0 + s.to_f64().abs()) {
                let dlog = &self.g.eval_logd(&pt.t).1 * &pt.dtds;
                let angle_sine = dlog.im.to_f64().abs() / dlog.abs_f64();
                let sign = if dv.signum() > 0 { -1 } else { 1 };
                if w.re.signum() >= 0 {
                    return Err(Error::NonConvergence("crossing refinement left the negative axis".into()));
                }
                return Ok(Crossing { s, t: pt.t, sign, angle_sine });
            }
            s = cand;
        }
        Err(Error::NonConvergence("crossing refinement did not converge".into()))
    }
}

fn arg_step(a: &Cplx, b: &Cplx) -> f64 {
    let (ar, ai) = a.to_f64();
    let (br, bi) = b.to_f64();
    // arg(b / a) via conj(a) b
    let re = ar * br + ai * bi;
    let im = ar * bi - ai * br;
    im.atan2(re).abs()
}

/// Probe points along a branch: its samples plus geometric excursions into both tails.
fn scan_grid(path: &TracedPath) -> Vec<Real> {
    let prec = path.prec();
    let mut out = vec![];
    let first = &path.samples[0].s;
    for k in (0..16).rev() {
        out.push(first + &Real::from_f64(2f64.powi(k), prec));
    }
    out.extend(path.samples.iter().map(|x| x.s.clone()));
    let last = &path.samples.last().unwrap().s;
    for k in 0..16 {
        out.push(last - &Real::from_f64(2f64.powi(k), prec));
    }
    out
}

/// All crossings of a traced branch of T_i with T_j = {e^{i eps_j} g on the negative axis}.
/// Fails when a crossing is tangential.
pub fn find_pair_intersections(path: &TracedPath, g: &RationalFunction, j: usize, phase_j: f64) -> Result<Vec<Crossing>> {
    let prec = path.prec();
    if g.is_constant() {
        // on-cut constants are rejected by tracing of z_j itself
        return Ok(vec![]);
    }
    let finder = CrossFinder { path, g: NumRational::new(g, prec), rot: Cplx::cis(&Real::from_f64(phase_j, prec)), j };
    let probes: Vec<Probe> = scan_grid(path).into_iter().map(|s| finder.probe(s)).collect::<Result<_>>()?;
    let mut brackets: Vec<(Real, Real)> = vec![];
    let half = Real::from_f64(0.5, prec);
    for pair in probes.windows(2) {
        let (Some(_), Some(_)) = (&pair[0].w, &pair[1].w) else { continue };
        let mut stack = vec![(pair[0].s.clone(), pair[0].w.clone().unwrap(), pair[1].s.clone(), pair[1].w.clone().unwrap(), 0usize)];
        while let Some((sa, wa, sb, wb, depth)) = stack.pop() {
            if arg_step(&wa, &wb) > MAX_ARG_STEP {
                if depth >= MAX_DEPTH {
                    return Err(Error::NonGenericSchedule(format!(
                        "z{} winds too fast along the locus of z{} near s = {:.6}: zero or pole on the path",
                        j,
                        path.coord,
                        sa.to_f64()
                    )));
                }
                let sm = &(&sa + &sb) * &half;
                let pm = finder.probe(sm.clone())?;
                let Some(wm) = pm.w else { continue };
                stack.push((sm.clone(), wm.clone(), sb, wb, depth + 1));
                stack.push((sa, wa, sm, wm, depth + 1));
                continue;
            }
            let (ia, ib) = (wa.im.signum(), wb.im.signum());
            if ia * ib < 0 && wa.re.signum() < 0 && wb.re.signum() < 0 {
                brackets.push((sa, sb));
            } else if (ia == 0 && wa.re.signum() < 0) || (ib == 0 && wb.re.signum() < 0) {
                return Err(Error::NonGenericSchedule(format!(
                    "probe point of the locus of z{} lies exactly on the cut of z{}",
                    path.coord, j
                )));
            }
        }
    }
    let mut out = vec![];
    for (a, b) in brackets {
        let c = finder.refine(&a, &b)?;
        if c.angle_sine < TRANSVERSE_MIN {
            return Err(Error::NonGenericSchedule(format!(
                "tangential crossing of T{} and T{} at t = {}",
                path.coord,
                j,
                fmt_c(&c.t)
            )));
        }
        out.push(c);
    }
    // orientation order: pole side (large s) first
    out.sort_by(|x, y| y.s.partial_cmp(&x.s).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

pub(crate) fn fmt_c(c: &Cplx) -> String {
    let (a, b) = c.to_f64();
    format!("{:.12}{:+.12}i", a, b)
}
