use crate::error::{Error, Result};
use std::fmt;

/// How a schedule was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    /// eps_{k+1} = lambda exp(-1/eps_k): the nested form
    Nested,
    /// eps_{k+1} = lambda eps_k^2, used when the nested form underflows
    Operational,
    /// all phases equal; diagnostic only, never a valid nested schedule
    EqualPhase,
}

impl ScheduleKind {
    pub fn tag(self) -> &'static str {
        match self {
            ScheduleKind::Nested => "nested",
            ScheduleKind::Operational => "operational",
            ScheduleKind::EqualPhase => "equal_phase",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSchedule {
    pub eps_bound: f64,
    pub lambda: f64,
    pub phases: Vec<f64>,
    pub kind: ScheduleKind,
}

impl fmt::Display for PhaseSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ph: Vec<String> = self.phases.iter().map(|x| format!("{:.6e}", x)).collect();
        write!(f, "{}[{}]", self.kind.tag(), ph.join(", "))
    }
}

impl PhaseSchedule {
    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn phase(&self, i: usize) -> f64 {
        self.phases[i - 1]
    }

    /// 0 < eps_1 < bound and 0 < eps_{k+1} < exp(-1/eps_k), checked in log form.
    pub fn satisfies_nesting(&self) -> bool {
        let Some(&first) = self.phases.first() else { return true };
        if !(first > 0.0 && first < self.eps_bound) {
            return false;
        }
        self.phases.windows(2).all(|w| w[1] > 0.0 && w[1].ln() < -1.0 / w[0])
    }

    /// The same schedule restricted to its last n - 1 phases (for facets).
    pub fn tail(&self) -> PhaseSchedule {
        PhaseSchedule { phases: self.phases[1..].to_vec(), ..self.clone() }
    }
}

fn check_args(eps_bound: f64, n: usize, lambda: f64) -> Result<()> {
    if !(eps_bound > 0.0) || n == 0 {
        return Err(Error::Invalid(format!("schedule needs eps > 0 and n >= 1 (eps={}, n={})", eps_bound, n)));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Invalid(format!("lambda must lie in (0,1), got {}", lambda)));
    }
    Ok(())
}

/// eps_1 = lambda eps, eps_{k+1} = lambda exp(-1/eps_k). Fails when a phase
/// drops below 2^-precision_bits.
pub fn make_schedule(eps_bound: f64, n: usize, lambda: f64, precision_bits: usize) -> Result<PhaseSchedule> {
    check_args(eps_bound, n, lambda)?;
    let floor_ln = -(precision_bits as f64) * std::f64::consts::LN_2;
    let mut phases = vec![lambda * eps_bound];
    while phases.len() < n {
        let prev = *phases.last().unwrap();
        let ln_next = lambda.ln() - 1.0 / prev;
        // phases are stored as f64, which also bounds how small they may get
        if ln_next < floor_ln || ln_next < -700.0 {
            return Err(Error::ScheduleUnderflow(format!(
                "phase {} would be exp({:.1}), below 2^-{}; use a larger lambda*eps or more precision",
                phases.len() + 1,
                ln_next,
                precision_bits
            )));
        }
        phases.push(ln_next.exp());
    }
    Ok(PhaseSchedule { eps_bound, lambda, phases, kind: ScheduleKind::Nested })
}

/// eps_1 = lambda eps, eps_{k+1} = lambda eps_k^2: distinct decreasing phases
/// that stay representable.
pub fn make_operational_schedule(eps_bound: f64, n: usize, lambda: f64) -> Result<PhaseSchedule> {
    check_args(eps_bound, n, lambda)?;
    let mut phases = vec![lambda * eps_bound];
    while phases.len() < n {
        let prev = *phases.last().unwrap();
        phases.push(lambda * prev * prev);
    }
    Ok(PhaseSchedule { eps_bound, lambda, phases, kind: ScheduleKind::Operational })
}

/// Nested form when representable, operational form otherwise.
pub fn make_schedule_or_fallback(eps_bound: f64, n: usize, lambda: f64, precision_bits: usize) -> Result<PhaseSchedule> {
    match make_schedule(eps_bound, n, lambda, precision_bits) {
        Err(Error::ScheduleUnderflow(_)) => make_operational_schedule(eps_bound, n, lambda),
        other => other,
    }
}

pub fn equal_phase_schedule(eps: f64, n: usize) -> PhaseSchedule {
    PhaseSchedule { eps_bound: eps, lambda: 1.0, phases: vec![eps; n], kind: ScheduleKind::EqualPhase }
}
