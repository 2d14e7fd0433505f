//! Command dispatch. Cycles are processed in parallel and reported in input order.

use crate::fixtures::{load_fixture, FIXTURES};
use crate::parse::{parse_cycle_file, serialize_cycle, NamedCycle};
use crate::report::*;
use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use intreg_core::cycles::{
    boundary, check_face_proper, face_vanishing_profile, is_closed, normalize, profile_is_normalized, weil_product, Components,
    Precycle,
};
use intreg_core::regulator::{intersection_number_n2, regulator, torsion_order, RegulatorOptions};
use intreg_core::wavefront::{
    admissible, equal_phase_schedule, make_schedule_or_fallback, path_rows, search_schedule, AdmissibilityReport,
};
use intreg_core::{Error, Result};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "intreg", version, about = "Integral regulators of higher Chow cycles over cyclotomic fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// working precision in bits
    #[arg(long, global = true, default_value_t = 256)]
    pub precision: usize,
    /// agreement and torsion tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// seed for the schedule search
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Inputs {
    /// cycle files
    pub files: Vec<PathBuf>,
    /// built-in cycle (repeatable)
    #[arg(long = "fixture")]
    pub fixtures: Vec<String>,
    /// every built-in cycle
    #[arg(long)]
    pub all_fixtures: bool,
}

#[derive(Args, Debug, Clone)]
pub struct RegArgs {
    /// schedule bounds, one evaluation each
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.1, 0.03])]
    pub eps_bounds: Vec<f64>,
    /// target error of each path integral
    #[arg(long, default_value_t = 1e-20)]
    pub quad_tol: f64,
    /// schedule search attempts per bound
    #[arg(long, default_value_t = 16)]
    pub attempts: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SchedArgs {
    /// schedule bound
    #[arg(long, default_value_t = 0.3)]
    pub eps: f64,
    /// all phases equal to eps (reproduces the equal-phase failure; not a valid schedule)
    #[arg(long, conflicts_with = "schedule_lambda")]
    pub equal_phase: bool,
    /// fixed nested schedule with this lambda instead of a search
    #[arg(long)]
    pub schedule_lambda: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub attempts: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// properness, closedness, normalization profile, degenerate components
    Check(Inputs),
    /// Bloch boundary as a point combination
    Boundary(Inputs),
    /// apply the normalization operator
    Normalize(Inputs),
    /// admissibility at a schedule (searched unless given)
    Admissible {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sched: SchedArgs,
    },
    /// regulator value modulo (2 pi i)^p
    Regulator {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        reg: RegArgs,
    },
    /// regulator value followed by torsion recognition
    Torsion {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        reg: RegArgs,
        #[arg(long, default_value_t = 1000)]
        max_order: u64,
    },
    /// trace the loci and export samples and crossings as CSV
    Trace {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        sched: SchedArgs,
        #[arg(long)]
        export: PathBuf,
    },
    /// list built-in cycles, or print one as cycle-file text
    Fixtures {
        #[arg(long)]
        show: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Boundary(_) => "boundary",
            Command::Normalize(_) => "normalize",
            Command::Admissible { .. } => "admissible",
            Command::Regulator { .. } => "regulator",
            Command::Torsion { .. } => "torsion",
            Command::Trace { .. } => "trace",
            Command::Fixtures { .. } => "fixtures",
        }
    }

    fn inputs(&self) -> Option<&Inputs> {
        match self {
            Command::Check(i) | Command::Boundary(i) | Command::Normalize(i) => Some(i),
            Command::Admissible { inputs, .. }
            | Command::Regulator { inputs, .. }
            | Command::Torsion { inputs, .. }
            | Command::Trace { inputs, .. } => Some(inputs),
            Command::Fixtures { .. } => None,
        }
    }
}

/// Output of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Cycles named by the inputs, in order; a file that fails to parse becomes
/// an error entry keyed by its path.
fn collect_inputs(inp: &Inputs) -> Vec<std::result::Result<NamedCycle, (String, Error)>> {
    let mut out = vec![];
    let mut names: Vec<String> = inp.fixtures.clone();
    if inp.all_fixtures {
        names = FIXTURES.iter().map(|f| f.name.to_string()).collect();
    }
    for n in names {
        match load_fixture(&n) {
            Some(Ok(c)) => out.push(Ok(c)),
            Some(Err(e)) => out.push(Err((n, e))),
            None => out.push(Err((n.clone(), Error::Invalid(format!("no built-in cycle named '{}'", n))))),
        }
    }
    for f in &inp.files {
        let key = f.display().to_string();
        match std::fs::read_to_string(f) {
            Err(e) => {
                let msg = format!("cannot read {}: {}", key, e);
                out.push(Err((key, Error::Invalid(msg))))
            }
            Ok(text) => match parse_cycle_file(&text) {
                Ok(file) => out.extend(file.cycles.into_iter().map(Ok)),
                Err(e) => out.push(Err((key, e))),
            },
        }
    }
    out
}

struct Settings {
    prec: usize,
    tol: f64,
    seed: u64,
}

fn reg_options(s: &Settings, reg: &RegArgs) -> RegulatorOptions {
    RegulatorOptions {
        prec: s.prec,
        tol: s.tol,
        quad_tol: reg.quad_tol,
        eps_bounds: reg.eps_bounds.clone(),
        attempts: reg.attempts,
        seed: s.seed,
    }
}

fn schedule_report(z: &Precycle, a: &SchedArgs, s: &Settings) -> Result<AdmissibilityReport> {
    if a.equal_phase {
        admissible(z, &equal_phase_schedule(a.eps, z.n), s.prec)
    } else if let Some(l) = a.schedule_lambda {
        admissible(z, &make_schedule_or_fallback(a.eps, z.n, l, s.prec)?, s.prec)
    } else {
        search_schedule(z, a.eps, a.attempts, s.seed, s.prec)
    }
}

fn do_check(z: &Precycle, s: &Settings, rec: &mut ResultRecord) -> Result<()> {
    let mut c = ChecksRecord::default();
    if let Components::Curves(cs) = &z.components {
        c.degenerate_components = cs.iter().enumerate().filter(|(_, x)| x.is_degenerate()).map(|(k, _)| k).collect();
        rec.checks = Some(c.clone());
        let pr = check_face_proper(z, s.prec)?;
        c.set_proper(&pr);
        rec.checks = Some(c.clone());
        if pr.ok {
            c.closed = Some(is_closed(z, s.prec)?);
            let prof = face_vanishing_profile(z, s.prec)?;
            c.normalized = Some(profile_is_normalized(&prof, z.n));
            c.profile = prof.iter().map(FacetRecord::from).collect();
        }
    } else {
        // points lie in the open cube, so they meet no face
        c.proper = Some(true);
        c.closed = Some(z.n == 0 || z.is_empty());
    }
    rec.checks = Some(c);
    Ok(())
}

fn do_boundary(z: &Precycle, s: &Settings, rec: &mut ResultRecord) -> Result<()> {
    let pr = check_face_proper(z, s.prec)?;
    if !pr.ok {
        let v = &pr.violations[0];
        return Err(Error::Improper(format!("component {} meets a codimension-2 face at t = {}", v.component, v.t)));
    }
    let b = boundary(z, s.prec)?;
    let weil = if b.n == 1 { weil_product(&b).ok().map(|k| k.to_string()) } else { None };
    rec.boundary = Some(BoundaryRecord::new(&b, weil));
    Ok(())
}

fn do_normalize(name: &str, z: &Precycle, s: &Settings, rec: &mut ResultRecord) -> Result<()> {
    let w = normalize(z, s.prec)?;
    let prof = face_vanishing_profile(&w, s.prec)?;
    rec.normalized = Some(NormalizeRecord {
        changed: &w != z,
        cycle: serialize_cycle(name, &w)?,
        profile: prof.iter().map(FacetRecord::from).collect(),
    });
    Ok(())
}

fn do_regulator(z: &Precycle, s: &Settings, reg: &RegArgs, rec: &mut ResultRecord) -> Result<Option<intreg_core::regulator::RegulatorValue>> {
    if z.n == 2 && matches!(z.components, Components::Curves(_)) {
        let bound = *reg.eps_bounds.first().ok_or_else(|| Error::Invalid("no eps bound given".into()))?;
        let rep = search_schedule(z, bound, reg.attempts, s.seed, s.prec)?;
        let count = intersection_number_n2(z, &rep.schedule, s.prec)?;
        rec.intersection = Some(IntersectionRecord { p: 1, schedule: (&rep.schedule).into(), count });
        return Ok(None);
    }
    let v = regulator(z, &reg_options(s, reg))?;
    rec.regulator = Some((&v).into());
    Ok(Some(v))
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let io = |e: csv::Error| Error::Invalid(format!("writing {}: {}", path.display(), e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Invalid(format!("writing {}: {}", path.display(), e)))
}

fn do_trace(name: &str, z: &Precycle, s: &Settings, a: &SchedArgs, dir: &Path, rec: &mut ResultRecord) -> Result<()> {
    let rep = schedule_report(z, a, s)?;
    rec.admissibility = Some((&rep).into());
    let rows: Vec<Vec<String>> = path_rows(&rep)
        .into_iter()
        .map(|r| {
            vec![
                r.component.to_string(),
                r.coord.to_string(),
                r.branch.to_string(),
                r.index.to_string(),
                r.t_re.to_string(),
                r.t_im.to_string(),
                r.r.to_string(),
                r.arg_residual.to_string(),
            ]
        })
        .collect();
    let mut xs = vec![];
    for (ci, l) in rep.loci.iter().enumerate() {
        for b in &l.branches {
            for c in &b.crossings {
                let (re, im) = c.t.to_f64();
                xs.push(vec![ci.to_string(), "1".into(), "2".into(), re.to_string(), im.to_string(), c.sign.to_string()]);
            }
        }
    }
    let paths_file = format!("{}_paths.csv", name);
    let inter_file = format!("{}_intersections.csv", name);
    let (np, ni) = (rows.len(), xs.len());
    write_csv(
        &dir.join(&paths_file),
        &["component_id", "coord_index", "branch_index", "sample_index", "re_t", "im_t", "r", "arg_residual"],
        rows,
    )?;
    write_csv(&dir.join(&inter_file), &["component_id", "i", "j", "re_t", "im_t", "sign"], xs)?;
    rec.trace = Some(TraceRecord {
        ok: rep.ok,
        schedule: (&rep.schedule).into(),
        paths_file,
        intersections_file: inter_file,
        path_rows: np,
        intersection_rows: ni,
    });
    Ok(())
}

fn process(cmd: &Command, s: &Settings, c: &NamedCycle) -> ResultRecord {
    let mut rec = ResultRecord::new(cmd.name(), Some(&c.cycle));
    let z = &c.cycle;
    let r = match cmd {
        Command::Check(_) => do_check(z, s, &mut rec),
        Command::Boundary(_) => do_boundary(z, s, &mut rec),
        Command::Normalize(_) => do_normalize(&c.name, z, s, &mut rec),
        Command::Admissible { sched, .. } => schedule_report(z, sched, s).map(|r| rec.admissibility = Some((&r).into())),
        Command::Regulator { reg, .. } => do_regulator(z, s, reg, &mut rec).map(|_| ()),
        Command::Torsion { reg, max_order, .. } => do_regulator(z, s, reg, &mut rec).and_then(|v| {
            let v = v.ok_or_else(|| Error::Unsupported("torsion of an intersection number".into()))?;
            let t = torsion_order(&v.value, v.p, *max_order, s.tol)?;
            rec.torsion = Some(TorsionRecord::new(&t, *max_order, s.tol));
            Ok(())
        }),
        Command::Trace { sched, export, .. } => do_trace(&c.name, z, s, sched, export, &mut rec),
        Command::Fixtures { .. } => Ok(()),
    };
    if let Err(e) = r {
        rec.fail(&e);
    }
    rec
}

fn render_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records serialize");
    s.push('\n');
    s
}

fn fmt_value(v: &ValueRecord) -> String {
    format!("{} {:+}i (error {:.1e})", v.re_digits, v.im, v.error)
}

fn render_text(recs: &IndexMap<String, ResultRecord>) -> String {
    let mut s = String::new();
    for (name, r) in recs {
        let _ = writeln!(s, "{} [{}]: {}", name, r.command, r.status);
        if let Some(e) = &r.error {
            let _ = writeln!(s, "  error ({}): {}", e.class, e.message);
        }
        if let Some(c) = &r.checks {
            let show = |b: Option<bool>| b.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "  proper {}  closed {}  normalized {}  degenerate {:?}",
                show(c.proper),
                show(c.closed),
                show(c.normalized),
                c.degenerate_components
            );
            for v in &c.violations {
                let _ = writeln!(s, "  violation: component {} at t = {} -> ({})", v.component, v.t, v.values.join(", "));
            }
            let bad: Vec<&str> = c.profile.iter().filter(|f| !f.vanishes).map(|f| f.facet.as_str()).collect();
            if !bad.is_empty() {
                let _ = writeln!(s, "  nonzero facets: {}", bad.join(" "));
            }
        }
        if let Some(b) = &r.boundary {
            let _ = writeln!(s, "  boundary: {}", b.text);
            if let Some(w) = &b.weil_product {
                let _ = writeln!(s, "  product of values: {}", w);
            }
        }
        if let Some(n) = &r.normalized {
            let _ = writeln!(s, "  changed: {}", n.changed);
            for l in n.cycle.lines() {
                let _ = writeln!(s, "  {}", l);
            }
        }
        if let Some(a) = &r.admissibility {
            let _ = writeln!(s, "  admissible {} at phases {:?} ({})", a.ok, a.schedule.phases, a.schedule.kind);
            for f in &a.failures {
                let w = f.witness.map(|[x, y]| format!(" at t = {} {:+.3e}i", x, y)).unwrap_or_default();
                let _ = writeln!(s, "  failure [{}] component {}{}: {}", f.condition, f.component, w, f.message);
            }
        }
        if let Some(g) = &r.regulator {
            let _ = writeln!(s, "  value: {}", fmt_value(&g.value));
            let _ = writeln!(s, "  modulo (2 pi i)^{}: q = {} {:+}i", g.p, g.canonical.q[0], g.canonical.q[1]);
            for (k, e) in g.evaluations.iter().enumerate() {
                let _ = writeln!(s, "  schedule {} {:?}: {}", k, e.schedule.phases, fmt_value(&e.value));
            }
            let _ = writeln!(s, "  schedules agree: {}", g.agreement.ok);
        }
        if let Some(x) = &r.intersection {
            let _ = writeln!(s, "  intersection number {} at phases {:?}", x.count, x.schedule.phases);
        }
        if let Some(t) = &r.torsion {
            match (&t.order, &t.certificate) {
                (Some(m), Some(c)) => {
                    let _ = writeln!(s, "  torsion order {} (q = {})", m, c);
                }
                _ => {
                    let _ = writeln!(s, "  no torsion up to order {}", t.max_order);
                }
            }
        }
        if let Some(t) = &r.trace {
            let _ = writeln!(s, "  wrote {} ({} rows), {} ({} rows)", t.paths_file, t.path_rows, t.intersections_file, t.intersection_rows);
        }
    }
    s
}

#[derive(serde::Serialize)]
struct Manifest<'a> {
    format_version: u32,
    paths_columns: [&'static str; 8],
    intersections_columns: [&'static str; 6],
    cycles: IndexMap<&'a str, &'a TraceRecord>,
}

fn write_manifest(dir: &Path, recs: &IndexMap<String, ResultRecord>) -> Result<()> {
    let m = Manifest {
        format_version: FORMAT_VERSION,
        paths_columns: ["component_id", "coord_index", "branch_index", "sample_index", "re_t", "im_t", "r", "arg_residual"],
        intersections_columns: ["component_id", "i", "j", "re_t", "im_t", "sign"],
        cycles: recs.iter().filter_map(|(k, r)| r.trace.as_ref().map(|t| (k.as_str(), t))).collect(),
    };
    std::fs::write(dir.join("manifest.json"), render_json(&m))
        .map_err(|e| Error::Invalid(format!("writing manifest in {}: {}", dir.display(), e)))
}

fn fixtures_listing(show: &Option<String>, format: Format) -> Outcome {
    if let Some(name) = show {
        return match crate::fixtures::fixture_text(name) {
            Some(t) => Outcome { code: 0, stdout: t.to_string() },
            None => Outcome { code: 1, stdout: format!("no built-in cycle named '{}'\n", name) },
        };
    }
    match format {
        Format::Json => {
            let m: IndexMap<&str, &str> = FIXTURES.iter().map(|f| (f.name, f.about)).collect();
            Outcome { code: 0, stdout: render_json(&m) }
        }
        Format::Text => {
            Outcome { code: 0, stdout: FIXTURES.iter().map(|f| format!("{:<24} {}\n", f.name, f.about)).collect() }
        }
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    if let Command::Fixtures { show } = &cli.command {
        return fixtures_listing(show, cli.format);
    }
    let inp = cli.command.inputs().expect("command with inputs");
    let items = collect_inputs(inp);
    if items.is_empty() {
        return Outcome { code: 1, stdout: "no input: give cycle files, --fixture NAME or --all-fixtures\n".into() };
    }
    if let Command::Trace { export, .. } = &cli.command {
        if let Err(e) = std::fs::create_dir_all(export) {
            return Outcome { code: 1, stdout: format!("cannot create {}: {}\n", export.display(), e) };
        }
    }
    let s = Settings { prec: cli.precision, tol: cli.tolerance, seed: cli.seed };
    let recs: Vec<(String, ResultRecord)> = items
        .par_iter()
        .map(|it| match it {
            Ok(c) => (c.name.clone(), process(&cli.command, &s, c)),
            Err((key, e)) => {
                let mut r = ResultRecord::new(cli.command.name(), None);
                r.fail(e);
                (key.clone(), r)
            }
        })
        .collect();
    let mut map: IndexMap<String, ResultRecord> = IndexMap::new();
    for (k, r) in recs {
        // a name given twice is reported once
        map.entry(k).or_insert(r);
    }
    let mut code = map.values().map(|r| r.exit_code()).find(|&c| c != 0).unwrap_or(0);
    if let Command::Trace { export, .. } = &cli.command {
        if let Err(e) = write_manifest(export, &map) {
            code = code.max(exit_code(e.class()));
        }
    }
    let stdout = match cli.format {
        Format::Json => render_json(&map),
        Format::Text => render_text(&map),
    };
    Outcome { code, stdout }
}

/// Parses arguments and runs; clap usage errors exit with code 1.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            Outcome { code, stdout: e.render().to_string() }
        }
    }
}
