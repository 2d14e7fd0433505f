use super::intersect::{find_pair_intersections, fmt_c, Crossing};
use super::schedule::{make_schedule_or_fallback, PhaseSchedule};
use super::trace::{cut_tolerance, on_cut, trace_wavefront, TracedPath};
use crate::cycles::{Components, CurveComponent, Precycle};
use crate::error::{Error, Result};
use crate::func_field::{eval_at, fiber, Location, P1Point};
use crate::mp::{Cplx, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Which admissibility condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// a locus could not be traced, or a constant coordinate sits on its cut
    Tracing,
    /// the last coordinate is on its cut at a point of T_1 and T_2
    TripleCut,
    /// a tangential crossing, or a zero or pole of a coordinate on T_1
    Degenerate,
    /// an endpoint of T_1 puts another coordinate on its cut
    Endpoint,
}

impl Condition {
    pub fn tag(self) -> &'static str {
        match self {
            Condition::Tracing => "tracing",
            Condition::TripleCut => "triple_cut",
            Condition::Degenerate => "degenerate_crossing",
            Condition::Endpoint => "endpoint_on_cut",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibilityFailure {
    pub component: usize,
    pub condition: Condition,
    /// the parameter value exhibiting the failure, when there is one
    pub witness: Option<(f64, f64)>,
    pub message: String,
}

impl fmt::Display for AdmissibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {}: {}: {}", self.component, self.condition.tag(), self.message)
    }
}

/// One branch of T_1 with its crossings with T_2.
#[derive(Clone, Debug)]
pub struct BranchData {
    pub path: TracedPath,
    pub crossings: Vec<Crossing>,
}

#[derive(Clone, Debug, Default)]
pub struct ComponentLoci {
    pub branches: Vec<BranchData>,
    /// all traced loci, by coordinate (index 0 is T_1)
    pub all_paths: Vec<Vec<TracedPath>>,
}

#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub schedule: PhaseSchedule,
    pub failures: Vec<AdmissibilityFailure>,
    /// per curve component; empty for point-level input
    pub loci: Vec<ComponentLoci>,
}

fn rotated(v: &P1Point, phase: f64, prec: usize) -> Option<Cplx> {
    let a = v.to_approx(prec)?;
    Some(&a.mid * &Cplx::cis(&Real::from_f64(phase, prec)))
}

fn value_on_cut(v: &P1Point, phase: f64, prec: usize) -> bool {
    if v.is_facet_value() {
        return false;
    }
    rotated(v, phase, prec).map_or(false, |w| on_cut(&w, cut_tolerance(prec)))
}

fn loc_witness(loc: &Location, prec: usize) -> Option<(f64, f64)> {
    loc.approx(prec).map(|a| a.to_f64())
}

fn check_curve(c: &CurveComponent, idx: usize, sched: &PhaseSchedule, prec: usize) -> (ComponentLoci, Vec<AdmissibilityFailure>) {
    let n = c.n();
    let mut fails = vec![];
    let mut loci = ComponentLoci::default();
    let fail = |cond, witness, message: String| AdmissibilityFailure { component: idx, condition: cond, witness, message };

    for i in 1..=n {
        match trace_wavefront(c, i, sched.phase(i), prec) {
            Ok(p) => loci.all_paths.push(p),
            Err(e) => {
                fails.push(fail(Condition::Tracing, None, format!("T{}: {}", i, e)));
                loci.all_paths.push(vec![]);
            }
        }
    }
    if !fails.is_empty() {
        return (loci, fails);
    }

    // zeros and poles of the later coordinates must avoid the open locus T_1
    let f1 = &c.coords[0];
    for j in 2..=n {
        for poles in [false, true] {
            let pts = match fiber(&c.coords[j - 1], poles, prec) {
                Ok(p) => p,
                Err(e) => {
                    fails.push(fail(Condition::Degenerate, None, e.to_string()));
                    continue;
                }
            };
            for (loc, _) in pts {
                let vals: Vec<P1Point> = match c.coords.iter().map(|f| eval_at(f, &loc, prec)).collect::<Result<_>>() {
                    Ok(v) => v,
                    Err(e) => {
                        fails.push(fail(Condition::Degenerate, loc_witness(&loc, prec), e.to_string()));
                        continue;
                    }
                };
                if vals.iter().any(|v| v.is_one()) || vals[0].is_facet_value() {
                    continue;
                }
                if value_on_cut(&vals[0], sched.phase(1), prec) {
                    fails.push(fail(
                        Condition::Degenerate,
                        loc_witness(&loc, prec),
                        format!("a {} of z{} at t = {} lies on T1", if poles { "pole" } else { "zero" }, j, loc),
                    ));
                }
            }
        }
    }

    // endpoints of T_1 inside the cube must keep the other coordinates off their cuts
    for poles in [false, true] {
        let pts = match fiber(f1, poles, prec) {
            Ok(p) => p,
            Err(e) => {
                fails.push(fail(Condition::Endpoint, None, e.to_string()));
                continue;
            }
        };
        for (loc, _) in pts {
            let vals: Vec<P1Point> = match c.coords.iter().map(|f| eval_at(f, &loc, prec)).collect::<Result<_>>() {
                Ok(v) => v,
                Err(e) => {
                    fails.push(fail(Condition::Endpoint, loc_witness(&loc, prec), e.to_string()));
                    continue;
                }
            };
            if vals.iter().any(|v| v.is_one()) {
                continue;
            }
            for j in 2..=n {
                if value_on_cut(&vals[j - 1], sched.phase(j), prec) {
                    fails.push(fail(
                        Condition::Endpoint,
                        loc_witness(&loc, prec),
                        format!("z{} is on its cut at the endpoint t = {} of T1", j, loc),
                    ));
                }
            }
        }
    }

    if n >= 2 {
        let g = &c.coords[1];
        let last = crate::func_field::NumRational::new(&c.coords[n - 1], prec);
        let rot_last = Cplx::cis(&Real::from_f64(sched.phase(n), prec));
        for path in &loci.all_paths[0] {
            let xs = match find_pair_intersections(path, g, 2, sched.phase(2)) {
                Ok(x) => x,
                Err(e) => {
                    fails.push(fail(Condition::Degenerate, None, format!("T1 with T2: {}", e)));
                    continue;
                }
            };
            if n == 3 {
                for x in &xs {
                    let v = last.eval(&x.t);
                    let (vr, vi) = v.to_f64();
                    let tiny = 2f64.powi(-(prec as i32) / 2);
                    if !v.is_finite() || v.abs_f64() < tiny || !(vr.hypot(vi) < 1.0 / tiny) {
                        fails.push(fail(
                            Condition::Degenerate,
                            Some(x.t.to_f64()),
                            format!("z3 is 0 or inf at the crossing t = {}", fmt_c(&x.t)),
                        ));
                    } else if on_cut(&(&v * &rot_last), cut_tolerance(prec)) {
                        fails.push(fail(
                            Condition::TripleCut,
                            Some(x.t.to_f64()),
                            format!("z3 is on its cut at the crossing t = {} of T1 and T2", fmt_c(&x.t)),
                        ));
                    }
                }
            }
            loci.branches.push(BranchData { path: path.clone(), crossings: xs });
        }
    }
    (loci, fails)
}

/// Check a schedule against every admissibility condition, collecting witnesses.
pub fn admissible(z: &Precycle, schedule: &PhaseSchedule, prec: usize) -> Result<AdmissibilityReport> {
    if schedule.n() != z.n {
        return Err(Error::Invalid(format!("schedule has {} phases for a cycle in the {}-cube", schedule.n(), z.n)));
    }
    let mut failures = vec![];
    let mut loci = vec![];
    match &z.components {
        Components::Points(pts) => {
            for (idx, p) in pts.iter().enumerate() {
                for (i, v) in p.coords.iter().enumerate() {
                    if value_on_cut(v, schedule.phase(i + 1), prec) {
                        failures.push(AdmissibilityFailure {
                            component: idx,
                            condition: Condition::Tracing,
                            witness: None,
                            message: format!("coordinate {} = {} is on its cut", i + 1, v),
                        });
                    }
                }
            }
        }
        Components::Curves(cs) => {
            for (idx, c) in cs.iter().enumerate() {
                let (l, f) = check_curve(c, idx, schedule, prec);
                loci.push(l);
                failures.extend(f);
            }
        }
    }
    Ok(AdmissibilityReport { ok: failures.is_empty(), schedule: schedule.clone(), failures, loci })
}

/// Try lambda = 1/2 and then seeded random lambdas, shrinking the bound every
/// few attempts; nested schedules fall back to the operational form.
pub fn search_schedule(z: &Precycle, eps_start: f64, attempts: usize, seed: u64, prec: usize) -> Result<AdmissibilityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last: Option<AdmissibilityReport> = None;
    for a in 0..attempts.max(1) {
        let lambda = if a == 0 { 0.5 } else { rng.gen_range(0.1..0.9) };
        let eps = eps_start * 0.7f64.powi((a / 4) as i32);
        let sched = make_schedule_or_fallback(eps, z.n, lambda, prec)?;
        let rep = admissible(z, &sched, prec)?;
        if rep.ok {
            return Ok(rep);
        }
        last = Some(rep);
    }
    let why = last
        .and_then(|r| r.failures.first().map(|f| f.to_string()))
        .unwrap_or_else(|| "no attempts".into());
    Err(Error::ScheduleSearch(format!("{} attempts from eps = {}; last failure: {}", attempts, eps_start, why)))
}

/// One sample of a traced locus, for export.
#[derive(Clone, Debug)]
pub struct PathRow {
    pub component: usize,
    pub coord: usize,
    pub branch: usize,
    pub index: usize,
    /// log r
    pub s: f64,
    pub r: f64,
    pub t_re: f64,
    pub t_im: f64,
    pub arg_residual: f64,
}

/// Samples of every traced locus in an admissibility report.
pub fn path_rows(rep: &AdmissibilityReport) -> Vec<PathRow> {
    let mut out = vec![];
    for (component, l) in rep.loci.iter().enumerate() {
        for (ci, paths) in l.all_paths.iter().enumerate() {
            for (branch, p) in paths.iter().enumerate() {
                for (index, x) in p.samples.iter().enumerate() {
                    let s = x.s.to_f64();
                    let (t_re, t_im) = x.t.to_f64();
                    out.push(PathRow {
                        component,
                        coord: ci + 1,
                        branch,
                        index,
                        s,
                        r: s.exp(),
                        t_re,
                        t_im,
                        arg_residual: p.arg_residual(&x.t),
                    });
                }
            }
        }
    }
    out
}
