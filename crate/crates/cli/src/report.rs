//! Result records. Field order is fixed by the struct definitions, so the
//! JSON output is deterministic; no timings are recorded.

use intreg_core::cycles::{Facet, FacetEntry, PointComponent, Precycle, ProperReport};
use intreg_core::field_arith::ComplexApprox;
use intreg_core::mp::Cplx;
use intreg_core::regulator::{canonical_representative, lattice_generator, RegulatorValue, TorsionReport};
use intreg_core::wavefront::{AdmissibilityReport, PhaseSchedule};
use intreg_core::{Error, ErrorClass};
use serde::Serialize;

pub const FORMAT_VERSION: u32 = 1;
const DIGITS: usize = 30;

pub fn exit_code(c: ErrorClass) -> i32 {
    match c {
        ErrorClass::Input => 1,
        ErrorClass::Parse => 2,
        ErrorClass::Properness => 3,
        ErrorClass::Schedule => 4,
        ErrorClass::Convergence => 5,
        ErrorClass::Precision => 6,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorRecord {
    pub class: &'static str,
    pub exit_code: i32,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord { class: e.class().tag(), exit_code: exit_code(e.class()), message: e.to_string() }
    }
}

/// A complex number with its error bound, as f64 and as decimal strings.
#[derive(Clone, Debug, Serialize)]
pub struct ValueRecord {
    pub re: f64,
    pub im: f64,
    pub error: f64,
    pub re_digits: String,
    pub im_digits: String,
}

impl ValueRecord {
    pub fn new(mid: &Cplx, error: f64) -> Self {
        let (re, im) = mid.to_f64();
        ValueRecord { re, im, error, re_digits: mid.re.to_decimal(DIGITS), im_digits: mid.im.to_decimal(DIGITS) }
    }

    pub fn ball(v: &ComplexApprox) -> Self {
        Self::new(&v.mid, v.rad)
    }
}

fn pair(z: &Cplx) -> [f64; 2] {
    let (a, b) = z.to_f64();
    [a, b]
}

#[derive(Clone, Debug, Serialize)]
pub struct ScheduleRecord {
    pub kind: &'static str,
    pub eps_bound: f64,
    pub lambda: f64,
    pub phases: Vec<f64>,
    pub nested: bool,
}

impl From<&PhaseSchedule> for ScheduleRecord {
    fn from(s: &PhaseSchedule) -> Self {
        ScheduleRecord {
            kind: s.kind.tag(),
            eps_bound: s.eps_bound,
            lambda: s.lambda,
            phases: s.phases.clone(),
            nested: s.satisfies_nesting(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationRecord {
    pub component: usize,
    pub t: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetRecord {
    pub facet: String,
    pub vanishes: bool,
}

impl From<&FacetEntry> for FacetRecord {
    fn from(e: &FacetEntry) -> Self {
        let v = match e.v {
            Facet::Zero => "0",
            Facet::Infinity => "inf",
        };
        FacetRecord { facet: format!("z{}={}", e.i, v), vanishes: e.vanishes }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ChecksRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<ViolationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub profile: Vec<FacetRecord>,
    pub degenerate_components: Vec<usize>,
}

impl ChecksRecord {
    pub fn set_proper(&mut self, r: &ProperReport) {
        self.proper = Some(r.ok);
        self.violations = r
            .violations
            .iter()
            .map(|v| ViolationRecord { component: v.component, t: v.t.clone(), values: v.values.clone() })
            .collect();
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointRecord {
    pub mult: i64,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryRecord {
    pub n: usize,
    pub points: Vec<PointRecord>,
    pub text: String,
    /// product of a^m over the points, for boundaries in the 1-cube
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weil_product: Option<String>,
}

/// `{4} - 2{2}` style rendering of a point combination.
pub fn points_text(pts: &[PointComponent]) -> String {
    if pts.is_empty() {
        return "0".into();
    }
    let mut sorted: Vec<&PointComponent> = pts.iter().collect();
    sorted.sort_by_key(|p| p.mult < 0);
    let mut s = String::new();
    for (k, p) in sorted.into_iter().enumerate() {
        let m = p.mult.abs();
        if k == 0 {
            if p.mult < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if p.mult < 0 { " - " } else { " + " });
        }
        if m != 1 {
            s.push_str(&m.to_string());
        }
        let c: Vec<String> = p.coords.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("{{{}}}", c.join(", ")));
    }
    s
}

impl BoundaryRecord {
    pub fn new(b: &Precycle, weil: Option<String>) -> Self {
        let pts = b.point_components().unwrap_or(&[]);
        BoundaryRecord {
            n: b.n,
            points: pts
                .iter()
                .map(|p| PointRecord { mult: p.mult, coords: p.coords.iter().map(|x| x.to_string()).collect() })
                .collect(),
            text: points_text(pts),
            weil_product: weil,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizeRecord {
    pub changed: bool,
    pub cycle: String,
    pub profile: Vec<FacetRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub component: usize,
    pub condition: &'static str,
    pub witness: Option<[f64; 2]>,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityRecord {
    pub ok: bool,
    /// admissibility is decided at this one schedule, not for a whole family
    pub scope: &'static str,
    pub schedule: ScheduleRecord,
    pub failures: Vec<FailureRecord>,
}

impl From<&AdmissibilityReport> for AdmissibilityRecord {
    fn from(r: &AdmissibilityReport) -> Self {
        AdmissibilityRecord {
            ok: r.ok,
            scope: "single schedule",
            schedule: (&r.schedule).into(),
            failures: r
                .failures
                .iter()
                .map(|f| FailureRecord {
                    component: f.component,
                    condition: f.condition.tag(),
                    witness: f.witness.map(|(a, b)| [a, b]),
                    message: f.message.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingRecord {
    pub t: [f64; 2],
    pub sign: i32,
    pub log_f3: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct TermRecord {
    pub component: usize,
    pub mult: i64,
    pub line_integral: [f64; 2],
    pub crossings: Vec<CrossingRecord>,
    pub crossing_sum: [f64; 2],
    pub contribution: [f64; 2],
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvaluationRecord {
    pub schedule: ScheduleRecord,
    pub value: ValueRecord,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub a: usize,
    pub b: usize,
    pub residual: f64,
    pub lattice_shift: i64,
    pub allowed: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementRecord {
    pub ok: bool,
    pub pairs: Vec<PairRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalRecord {
    pub value: ValueRecord,
    pub lattice_multiple: String,
    /// value / (2 pi i)^p
    pub q: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct RegulatorRecord {
    pub p: usize,
    pub lattice_power: usize,
    pub value: ValueRecord,
    pub canonical: CanonicalRecord,
    pub normalized_first: bool,
    pub dropped_degenerate: usize,
    pub evaluations: Vec<EvaluationRecord>,
    pub agreement: AgreementRecord,
}

impl From<&RegulatorValue> for RegulatorRecord {
    fn from(r: &RegulatorValue) -> Self {
        let (rep, k) = canonical_representative(&r.value.mid, r.p);
        let q = &rep / &lattice_generator(r.p, rep.prec());
        RegulatorRecord {
            p: r.p,
            lattice_power: r.p,
            value: ValueRecord::ball(&r.value),
            canonical: CanonicalRecord { value: ValueRecord::new(&rep, r.value.rad), lattice_multiple: k.to_string(), q: pair(&q) },
            normalized_first: r.normalized,
            dropped_degenerate: r.dropped_degenerate,
            evaluations: r
                .evaluations
                .iter()
                .map(|e| EvaluationRecord {
                    schedule: (&e.schedule).into(),
                    value: ValueRecord::ball(&e.value),
                    terms: e
                        .terms
                        .iter()
                        .map(|t| TermRecord {
                            component: t.component,
                            mult: t.mult,
                            line_integral: pair(&t.integral),
                            crossings: t
                                .crossings
                                .iter()
                                .map(|c| CrossingRecord { t: pair(&c.t), sign: c.sign, log_f3: pair(&c.log_value) })
                                .collect(),
                            crossing_sum: pair(&t.crossing_sum),
                            contribution: pair(&t.contribution),
                            error: t.error,
                            evaluations: t.evals,
                        })
                        .collect(),
                })
                .collect(),
            agreement: AgreementRecord {
                ok: r.agreement.ok,
                pairs: r
                    .agreement
                    .pairs
                    .iter()
                    .map(|x| PairRecord { a: x.a, b: x.b, residual: x.residual, lattice_shift: x.lattice_shift, allowed: x.allowed })
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionRecord {
    pub p: usize,
    pub schedule: ScheduleRecord,
    /// signed count; the class is 2 pi i times this in Z(1)
    pub count: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionRecord {
    pub max_order: u64,
    pub tolerance: f64,
    pub order: Option<u64>,
    pub q: [f64; 2],
    pub certificate: Option<String>,
    pub residual: Option<f64>,
}

impl TorsionRecord {
    pub fn new(t: &TorsionReport, max_order: u64, tolerance: f64) -> Self {
        TorsionRecord {
            max_order,
            tolerance,
            order: t.order,
            q: [t.q.0, t.q.1],
            certificate: t.certificate.as_ref().map(|(h, k)| format!("{}/{}", h, k)),
            residual: t.order.map(|_| t.residual),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub ok: bool,
    pub schedule: ScheduleRecord,
    pub paths_file: String,
    pub intersections_file: String,
    pub path_rows: usize,
    pub intersection_rows: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ResultRecord {
    pub format_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<ChecksRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<NormalizeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilityRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regulator: Option<RegulatorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection: Option<IntersectionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<TorsionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceRecord>,
}

impl ResultRecord {
    pub fn new(command: &str, z: Option<&Precycle>) -> Self {
        ResultRecord {
            format_version: FORMAT_VERSION,
            command: command.into(),
            field: z.map(|z| format!("cyclotomic({})", z.order)),
            n: z.map(|z| z.n),
            p: z.map(|z| z.p),
            status: "ok",
            ..Default::default()
        }
    }

    pub fn fail(&mut self, e: &Error) {
        self.status = "error";
        self.error = Some(e.into());
    }

    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map(|e| e.exit_code).unwrap_or(0)
    }
}
