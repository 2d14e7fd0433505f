//! Regulator values modulo the period lattice (2 pi i)^p.
//!
//! For a curve component (f1, f2, f3) the value is
//!   mult * [ int_{T1} log^{eps2}(f2) dlog f3  +  2 pi i sum_{T1 cap T2} sign log^{eps3}(f3) ],
//! with T1 run from the poles of f1 to its zeros. In s = log|f1| the path
//! integral becomes -int_R h(s) ds, split at the crossings where log f2 jumps.

mod quad;
mod torsion;

pub use quad::{integrate, integrate_line, Interval, QuadResult};
pub use torsion::{canonical_representative, lattice_generator, torsion_order, TorsionReport};

use crate::cycles::{check_face_proper, is_closed, is_normalized, normalize, Components, CurveComponent, Precycle};
use crate::error::{Error, Result};
use crate::field_arith::ComplexApprox;
use crate::func_field::NumRational;
use crate::mp::{Cplx, Real};
use crate::special_functions::{log_eps_prepared, PreparedBranch};
use crate::wavefront::{
    admissible, make_schedule_or_fallback, search_schedule, AdmissibilityReport, BranchData, ComponentLoci, PhaseSchedule,
};

#[derive(Clone, Debug)]
pub struct RegulatorOptions {
    pub prec: usize,
    /// agreement tolerance between schedules, and the torsion tolerance
    pub tol: f64,
    /// target error of each path integral
    pub quad_tol: f64,
    pub eps_bounds: Vec<f64>,
    pub attempts: usize,
    pub seed: u64,
}

impl Default for RegulatorOptions {
    fn default() -> Self {
        RegulatorOptions { prec: 256, tol: 1e-8, quad_tol: 1e-20, eps_bounds: vec![0.3, 0.1, 0.03], attempts: 16, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct CrossingTerm {
    pub t: Cplx,
    pub sign: i32,
    /// log^{eps3} f3(t)
    pub log_value: Cplx,
}

/// Contribution of one component. For point-level input (n = 1) the
/// integral field holds log^{eps1} of the point.
#[derive(Clone, Debug)]
pub struct ComponentTerm {
    pub component: usize,
    pub mult: i64,
    pub integral: Cplx,
    pub crossings: Vec<CrossingTerm>,
    /// sum of sign * log over the crossings
    pub crossing_sum: Cplx,
    /// mult * (integral + 2 pi i crossing_sum)
    pub contribution: Cplx,
    pub error: f64,
    pub evals: usize,
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub schedule: PhaseSchedule,
    pub value: ComplexApprox,
    pub terms: Vec<ComponentTerm>,
}

#[derive(Clone, Debug)]
pub struct PairAgreement {
    pub a: usize,
    pub b: usize,
    /// |v_a - v_b - k (2 pi i)^p|
    pub residual: f64,
    pub lattice_shift: i64,
    pub allowed: f64,
}

#[derive(Clone, Debug)]
pub struct AgreementReport {
    pub ok: bool,
    pub pairs: Vec<PairAgreement>,
}

#[derive(Clone, Debug)]
pub struct RegulatorValue {
    /// the value is defined modulo (2 pi i)^p
    pub p: usize,
    pub value: ComplexApprox,
    /// evaluations at decreasing bounds; the last one is reported as `value`
    pub evaluations: Vec<Evaluation>,
    pub agreement: AgreementReport,
    /// the input was replaced by its normalization first
    pub normalized: bool,
    pub dropped_degenerate: usize,
}

fn near_cut_zone(w: &Cplx, prec: usize) -> bool {
    let (a, b) = w.to_f64();
    a < 0.0 && b.abs() <= 2f64.powi(-(prec as i32) / 2) * a.abs()
}

/// log^{eps2} f2 along T1 for a node in piece k of the split line; on the cut
/// itself (only possible at a split point) the side is read off the crossing sign.
fn side_log(br: &PreparedBranch, v: &Cplx, s: &Real, piece: usize, b: &BranchData, prec: usize) -> Cplx {
    let w = br.rotate(v);
    if b.crossings.is_empty() || !near_cut_zone(&w, prec) {
        return br.log(v);
    }
    // crossings are stored with s descending; cuts ascend
    let nc = b.crossings.len();
    let cut = |k: usize| &b.crossings[nc - 1 - k];
    let lower = if piece >= 1 { Some(cut(piece - 1)) } else { None };
    let upper = if piece < nc { Some(cut(piece)) } else { None };
    // Im(e^{i eps} f2) is positive just above a crossing of sign -1
    let above = |c: &crate::wavefront::Crossing| if c.sign < 0 { 1.0 } else { -1.0 };
    let sigma = match (lower, upper) {
        (Some(l), Some(u)) => {
            if (s - &l.s).abs() <= (&u.s - s).abs() {
                above(l)
            } else {
                -above(u)
            }
        }
        (Some(l), None) => above(l),
        (None, Some(u)) => -above(u),
        (None, None) => return br.log(v),
    };
    let pi = Real::pi(prec);
    let arg = if sigma > 0.0 { pi } else { -pi };
    Cplx::new(v.abs().ln(), arg - &br.eps)
}

fn branch_integral(b: &BranchData, f2: &NumRational, f3: &NumRational, br2: &PreparedBranch, tol: f64, prec: usize) -> Result<QuadResult> {
    let cuts: Vec<Real> = b.crossings.iter().rev().map(|x| x.s.clone()).collect();
    let center = b.path.samples[b.path.samples.len() / 2].s.clone();
    let r = integrate_line(
        |s, piece| {
            let Some(pt) = b.path.point_at(s)? else { return Ok(None) };
            let v2 = f2.eval(&pt.t);
            let (_, ld3) = f3.eval_logd(&pt.t);
            let lg = side_log(br2, &v2, s, piece, b, prec);
            Ok(Some(&(&lg * &ld3) * &pt.dtds))
        },
        &cuts,
        &center,
        tol,
        prec,
    )?;
    Ok(QuadResult { value: -r.value, ..r })
}

fn two_pi_i(prec: usize) -> Cplx {
    Cplx::new(Real::zero(prec), &Real::pi(prec) * &Real::from_i64(2, prec))
}

fn component_term(
    c: &CurveComponent,
    idx: usize,
    loci: &ComponentLoci,
    sched: &PhaseSchedule,
    quad_tol: f64,
    prec: usize,
) -> Result<ComponentTerm> {
    let f2 = NumRational::new(&c.coords[1], prec);
    let f3 = NumRational::new(&c.coords[2], prec);
    let br2 = PreparedBranch::new(&Real::from_f64(sched.phase(2), prec));
    let br3 = PreparedBranch::new(&Real::from_f64(sched.phase(3), prec));
    let mut integral = Cplx::zero(prec);
    let mut error = 0.0;
    let mut evals = 0;
    let mut crossings = vec![];
    let mut crossing_sum = Cplx::zero(prec);
    for b in &loci.branches {
        let r = branch_integral(b, &f2, &f3, &br2, quad_tol, prec)?;
        integral = &integral + &r.value;
        error += r.error;
        evals += r.evals;
        for x in &b.crossings {
            let v3 = ComplexApprox::new(f3.eval(&x.t), 0.0);
            let lg = log_eps_prepared(&v3, &br3)?.mid;
            crossing_sum = if x.sign > 0 { &crossing_sum + &lg } else { &crossing_sum - &lg };
            crossings.push(CrossingTerm { t: x.t.clone(), sign: x.sign, log_value: lg });
        }
    }
    let inner = &integral + &(&two_pi_i(prec) * &crossing_sum);
    let contribution = inner.scale(&Real::from_i64(c.mult, prec));
    Ok(ComponentTerm {
        component: idx,
        mult: c.mult,
        integral,
        crossings,
        crossing_sum,
        contribution,
        error: error * c.mult.unsigned_abs() as f64,
        evals,
    })
}

fn noise(prec: usize) -> f64 {
    2f64.powi(24 - prec as i32)
}

/// Evaluate at an admissible schedule whose report carries the traced loci.
pub fn evaluate(z: &Precycle, rep: &AdmissibilityReport, quad_tol: f64, prec: usize) -> Result<Evaluation> {
    if !rep.ok {
        let f = rep.failures.first().map(|f| f.to_string()).unwrap_or_default();
        return Err(Error::Inadmissible(f));
    }
    let sched = &rep.schedule;
    let mut terms = vec![];
    match &z.components {
        Components::Points(pts) if z.n == 1 => {
            let br = PreparedBranch::new(&Real::from_f64(sched.phase(1), prec));
            for (idx, p) in pts.iter().enumerate() {
                let a = p.coords[0].to_approx(prec).ok_or_else(|| Error::Invalid("point at infinity".into()))?;
                let lg = log_eps_prepared(&a, &br)?;
                let contribution = lg.mid.scale(&Real::from_i64(p.mult, prec));
                terms.push(ComponentTerm {
                    component: idx,
                    mult: p.mult,
                    integral: lg.mid,
                    crossings: vec![],
                    crossing_sum: Cplx::zero(prec),
                    contribution,
                    error: lg.rad * p.mult.unsigned_abs() as f64,
                    evals: 0,
                });
            }
        }
        Components::Curves(cs) if z.n == 3 => {
            for (idx, c) in cs.iter().enumerate() {
                terms.push(component_term(c, idx, &rep.loci[idx], sched, quad_tol, prec)?);
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "regulator for n = {} at the {} level",
                z.n,
                if matches!(z.components, Components::Points(_)) { "point" } else { "curve" }
            )))
        }
    }
    let mut mid = Cplx::zero(prec);
    let mut rad = noise(prec);
    for t in &terms {
        mid = &mid + &t.contribution;
        rad += t.error;
    }
    Ok(Evaluation { schedule: sched.clone(), value: ComplexApprox::new(mid, rad), terms })
}

/// The path integral of log^{eps2} f2 dlog f3 over T1 of a single component,
/// without crossing terms or multiplicity.
pub fn line_integral(c: &CurveComponent, sched: &PhaseSchedule, quad_tol: f64, prec: usize) -> Result<QuadResult> {
    if c.n() != 3 {
        return Err(Error::Invalid("line integrals are defined for curves in the 3-cube".into()));
    }
    let single = CurveComponent { mult: 1, ..c.clone() };
    let z = Precycle::curves(3, 2, c.order(), vec![single])?;
    let rep = admissible(&z, sched, prec)?;
    if !rep.ok {
        return Err(Error::Inadmissible(rep.failures[0].to_string()));
    }
    let f2 = NumRational::new(&c.coords[1], prec);
    let f3 = NumRational::new(&c.coords[2], prec);
    let br2 = PreparedBranch::new(&Real::from_f64(sched.phase(2), prec));
    let mut out = QuadResult { value: Cplx::zero(prec), error: 0.0, evals: 0, level: 0 };
    for b in &rep.loci[0].branches {
        let r = branch_integral(b, &f2, &f3, &br2, quad_tol, prec)?;
        out.value = &out.value + &r.value;
        out.error += r.error;
        out.evals += r.evals;
        out.level = out.level.max(r.level);
    }
    Ok(out)
}

/// Signed count of T1 cap T2 for a curve-level cycle in the 2-cube.
pub fn intersection_number_n2(z: &Precycle, sched: &PhaseSchedule, prec: usize) -> Result<i64> {
    let cs = z.curve_components()?;
    if z.n != 2 {
        return Err(Error::Invalid(format!("intersection number needs n = 2, got {}", z.n)));
    }
    let rep = admissible(z, sched, prec)?;
    if !rep.ok {
        return Err(Error::Inadmissible(rep.failures[0].to_string()));
    }
    let mut total = 0;
    for (c, l) in cs.iter().zip(&rep.loci) {
        let k: i64 = l.branches.iter().flat_map(|b| b.crossings.iter()).map(|x| x.sign as i64).sum();
        total += c.mult * k;
    }
    Ok(total)
}

/// Pullback of dlog z_j wedge dlog z_k to the curve, evaluated on the real
/// frame (d/dx, d/dy) at t. It vanishes identically on a curve.
pub fn two_form_sample(c: &CurveComponent, j: usize, k: usize, t: &Cplx, prec: usize) -> f64 {
    let a = NumRational::new(&c.coords[j - 1], prec).eval_logd(t).1;
    let b = NumRational::new(&c.coords[k - 1], prec).eval_logd(t).1;
    // a(d/dx) = A, a(d/dy) = iA
    let ia = a.mul_i();
    let ib = b.mul_i();
    (&(&a * &ib) - &(&ia * &b)).abs_f64()
}

fn lattice_agreement(evals: &[Evaluation], p: usize, tol: f64) -> AgreementReport {
    let mut pairs = vec![];
    for a in 0..evals.len() {
        for b in a + 1..evals.len() {
            let d = &evals[a].value.mid - &evals[b].value.mid;
            let (rep, k) = canonical_representative(&d, p);
            let residual = rep.abs_f64();
            let allowed = 10.0 * (evals[a].value.rad + evals[b].value.rad) + tol;
            pairs.push(PairAgreement {
                a,
                b,
                residual,
                lattice_shift: num_traits::ToPrimitive::to_i64(&k).unwrap_or(i64::MAX),
                allowed,
            });
        }
    }
    AgreementReport { ok: pairs.iter().all(|x| x.residual <= x.allowed), pairs }
}

/// Full pipeline: drop degenerate components, check properness and closedness,
/// normalize if needed, evaluate at one admissible schedule per bound and
/// require agreement modulo (2 pi i)^p.
pub fn regulator(z: &Precycle, opts: &RegulatorOptions) -> Result<RegulatorValue> {
    let prec = opts.prec;
    let (z, p, normalized, dropped) = match &z.components {
        Components::Points(_) if z.n == 1 => (z.clone(), 1, false, 0),
        Components::Curves(cs) if z.n == 3 => {
            let clean = z.drop_degenerate();
            let dropped = cs.len() - clean.curve_components()?.len();
            let pr = check_face_proper(&clean, prec)?;
            if !pr.ok {
                let v = &pr.violations[0];
                return Err(Error::Improper(format!("component {} meets a codimension-2 face at t = {}", v.component, v.t)));
            }
            if !is_closed(&clean, prec)? {
                return Err(Error::Precondition("the cycle is not closed: its boundary is nonzero".into()));
            }
            if is_normalized(&clean, prec)? {
                (clean, 2, false, dropped)
            } else {
                (normalize(&clean, prec)?, 2, true, dropped)
            }
        }
        Components::Curves(_) if z.n == 2 => {
            return Err(Error::Unsupported("no regulator for n = 2 here; use the intersection number".into()))
        }
        _ => return Err(Error::Unsupported(format!("regulator for n = {}", z.n))),
    };
    if opts.eps_bounds.is_empty() {
        return Err(Error::Invalid("at least one eps bound is needed".into()));
    }
    let mut evaluations: Vec<Evaluation> = vec![];
    for (k, &bound) in opts.eps_bounds.iter().enumerate() {
        let rep = match evaluations.last() {
            None => search_schedule(&z, bound, opts.attempts, opts.seed, prec)?,
            Some(prev) => {
                let s = make_schedule_or_fallback(bound, z.n, prev.schedule.lambda, prec)?;
                let r = admissible(&z, &s, prec)?;
                if r.ok {
                    r
                } else {
                    search_schedule(&z, bound, opts.attempts, opts.seed.wrapping_add(k as u64), prec)?
                }
            }
        };
        evaluations.push(evaluate(&z, &rep, opts.quad_tol, prec)?);
    }
    let agreement = lattice_agreement(&evaluations, p, opts.tol);
    if !agreement.ok {
        let worst = agreement.pairs.iter().max_by(|x, y| (x.residual / x.allowed).total_cmp(&(y.residual / y.allowed))).unwrap();
        return Err(Error::Disagreement(format!(
            "evaluations {} and {} differ by {:e} modulo the lattice (allowed {:e})",
            worst.a, worst.b, worst.residual, worst.allowed
        )));
    }
    let value = evaluations.last().unwrap().value.clone();
    Ok(RegulatorValue { p, value, evaluations, agreement, normalized, dropped_degenerate: dropped })
}

#[cfg(test)]
mod tests;
