//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any line fails.

use intreg_core::cycles::{
    boundary, check_face_proper, double_boundary_symbolic, face_of, face_vanishing_profile, normalize,
    profile_is_normalized, weil_product, CurveComponent, Facet, FacetLabel, Precycle,
};
use intreg_core::field_arith::{embed, ComplexApprox, CyclotomicNumber as K};
use intreg_core::fixtures;
use intreg_core::func_field::{divisor, Poly, RationalFunction};
use intreg_core::mp::{Cplx, Real};
use intreg_core::regulator::{
    canonical_representative, line_integral, regulator, torsion_order, RegulatorOptions, RegulatorValue,
};
use intreg_core::special_functions::{li2, log_eps, BranchSpec};
use intreg_core::wavefront::{
    admissible, equal_phase_schedule, make_schedule, search_schedule, Condition, PhaseSchedule,
};
use intreg_core::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use std::process::Command;
use std::time::{Duration, Instant};

const P: usize = 256;

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: impl Into<String>) -> Line {
    Line { ok, detail: detail.into() }
}

fn pi2(prec: usize) -> Real {
    let pi = Real::pi(prec);
    &pi * &pi
}

/// |z - x| for real x.
fn dist_real(z: &Cplx, x: &Real) -> f64 {
    (z - &Cplx::from_real(x.clone())).abs_f64()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

struct Shared {
    z1: Option<(RegulatorValue, Duration)>,
    petras: Option<(RegulatorValue, Duration)>,
}

fn criterion_1(sh: &mut Shared) -> Line {
    let t0 = Instant::now();
    let r = regulator(&fixtures::z1_totaro(), &RegulatorOptions::default());
    let dt = t0.elapsed();
    match r {
        Err(e) => line(false, format!("regulator failed: {}", e)),
        Ok(v) => {
            let want = &pi2(P) / &Real::from_i64(6, P);
            let d = dist_real(&v.value.mid, &want);
            let ok = d < 1e-8 && secs(dt) < 30.0;
            let detail = format!("value {} (|diff| {:.1e}, error {:.1e}), {:.2} s", v.value.mid.re.to_decimal(20), d, v.value.rad, secs(dt));
            sh.z1 = Some((v, dt));
            line(ok, detail)
        }
    }
}

fn criterion_2(sh: &Shared) -> Line {
    let Some((v, _)) = &sh.z1 else { return line(false, "no Z1 value") };
    match torsion_order(&v.value, 2, 1000, 1e-8) {
        Err(e) => line(false, e.to_string()),
        Ok(t) => {
            let cert = t.certificate.as_ref().map(|(h, k)| (h.to_string(), k.to_string()));
            let ok = t.order == Some(24) && cert == Some(("-1".to_string(), "24".to_string()));
            line(ok, format!("order {:?}, q = {:?}", t.order, cert.map(|(h, k)| format!("{}/{}", h, k))))
        }
    }
}

fn criterion_3(sh: &mut Shared) -> Line {
    let t0 = Instant::now();
    let r = regulator(&fixtures::petras_zeta5(), &RegulatorOptions::default());
    let dt = t0.elapsed();
    match r {
        Err(e) => line(false, format!("regulator failed: {}", e)),
        Ok(v) => {
            let want = &(&pi2(P) * &Real::from_i64(7, P)) / &Real::from_i64(30, P);
            let d = dist_real(&v.value.mid, &want);
            let t = torsion_order(&v.value, 2, 1000, 1e-8);
            let (order, cert) = match &t {
                Ok(t) => (t.order, t.certificate.as_ref().map(|(h, k)| (h.to_string(), k.to_string()))),
                Err(_) => (None, None),
            };
            let ok = d < 1e-8 && order == Some(120) && cert == Some(("-7".to_string(), "120".to_string())) && secs(dt) < 120.0;
            // the decimal quoted next to 7 pi^2/30 in the criterion (2.3026588966) is not 7 pi^2/30
            let quoted = (v.value.mid.re.to_f64() - 2.3026588966).abs();
            let detail = format!(
                "value {} vs 7pi^2/30 = {} (|diff| {:.1e}); order {:?}, q = {:?}; {:.2} s; differs from the quoted 2.3026588966 by {:.2e}",
                v.value.mid.re.to_decimal(20),
                want.to_decimal(20),
                d,
                order,
                cert.map(|(h, k)| format!("{}/{}", h, k)),
                secs(dt),
                quoted
            );
            sh.petras = Some((v, dt));
            line(ok, detail)
        }
    }
}

fn criterion_4() -> Line {
    let z = fixtures::mccarthy_counterexample();
    let mut notes = vec![];
    let mut ok = true;
    for eps in [0.05, 0.1, 0.2, 0.4] {
        let rep = match admissible(&z, &equal_phase_schedule(eps, 3), 128) {
            Ok(r) => r,
            Err(e) => {
                ok = false;
                notes.push(format!("eps {}: {}", eps, e));
                continue;
            }
        };
        let w = rep.failures.iter().find(|f| f.condition == Condition::TripleCut).and_then(|f| f.witness);
        match w {
            Some((re, im)) if !rep.ok => {
                let d = (re - eps.tan()).hypot(im);
                ok &= d < 1e-6;
                notes.push(format!("eps {}: witness {:.9} (|t - tan eps| {:.1e})", eps, re, d));
            }
            _ => {
                ok = false;
                notes.push(format!("eps {}: no triple witness (ok = {})", eps, rep.ok));
            }
        }
    }
    match search_schedule(&z, 0.3, 16, 0, P) {
        Ok(rep) => {
            let again = admissible(&z, &rep.schedule, P).map(|r| r.ok).unwrap_or(false);
            let distinct = rep.schedule.phases.windows(2).all(|w| w[0] != w[1]);
            ok &= rep.ok && again && distinct;
            notes.push(format!("search found phases {:?} (admissible {})", rep.schedule.phases, again));
        }
        Err(e) => {
            ok = false;
            notes.push(format!("search failed: {}", e));
        }
    }
    line(ok, notes.join("; "))
}

fn criterion_5(sh: &Shared) -> Line {
    let mut ok = true;
    let mut notes = vec![];
    let mut total = Duration::ZERO;
    for (name, z, v) in [("Z1", fixtures::z1_totaro(), &sh.z1), ("Petras", fixtures::petras_zeta5(), &sh.petras)] {
        let Some((v, dt)) = v else {
            ok = false;
            notes.push(format!("{}: no value", name));
            continue;
        };
        total += *dt;
        let scheds: Vec<&PhaseSchedule> = v.evaluations.iter().map(|e| &e.schedule).collect();
        let distinct = scheds.len() == 3
            && (0..3).all(|a| (a + 1..3).all(|b| scheds[a].phases != scheds[b].phases));
        let adm = scheds.iter().all(|s| admissible(&z, s, P).map(|r| r.ok).unwrap_or(false));
        let mut worst: f64 = 0.0;
        for a in 0..v.evaluations.len() {
            for b in a + 1..v.evaluations.len() {
                let d = &v.evaluations[a].value.mid - &v.evaluations[b].value.mid;
                let (rep, _) = canonical_representative(&d, 2);
                worst = worst.max(rep.abs_f64());
            }
        }
        ok &= distinct && adm && worst < 1e-6;
        notes.push(format!("{}: 3 schedules distinct {} admissible {}, max difference mod lattice {:.1e}", name, distinct, adm, worst));
    }
    ok &= secs(total) < 300.0;
    notes.push(format!("{:.2} s", secs(total)));
    line(ok, notes.join("; "))
}

fn criterion_6(sh: &Shared) -> Line {
    let Some((v, _)) = &sh.z1 else { return line(false, "no Z1 value") };
    let want = &pi2(P) / &Real::from_i64(6, P);
    let bounds: Vec<f64> = v.evaluations.iter().map(|e| e.schedule.eps_bound).collect();
    let errs: Vec<f64> = v.evaluations.iter().map(|e| dist_real(&e.value.mid, &want)).collect();
    let rads: Vec<f64> = v.evaluations.iter().map(|e| e.value.rad).collect();
    // non-increasing up to the reported error radii
    let monotone = (1..errs.len()).all(|k| errs[k] <= errs[k - 1] + rads[k] + rads[k - 1]);
    let ok = bounds == [0.3, 0.1, 0.03] && monotone && errs.last().is_some_and(|&e| e < 1e-6);
    let parts: Vec<String> = bounds.iter().zip(&errs).map(|(b, e)| format!("bound {}: |v - pi^2/6| {:.1e}", b, e)).collect();
    line(ok, format!("{}; monotone within radii {}", parts.join(", "), monotone))
}

fn criterion_7() -> Line {
    let sched = PhaseSchedule {
        eps_bound: 0.3,
        lambda: 0.5,
        phases: vec![0.15, 1e-3, 1e-7],
        kind: intreg_core::wavefront::ScheduleKind::Operational,
    };
    let one = |p: usize| ComplexApprox::exact(Cplx::one(p));
    let li2_1 = li2(&one(P)).mid;
    let xi = embed(&K::zeta(5), P);
    let five = Real::from_i64(5, P);
    let li2_m1 = li2(&ComplexApprox::exact(Cplx::from_f64(-1.0, 0.0, P))).mid;
    let pi2_12 = Cplx::from_real(&pi2(P) / &Real::from_i64(12, P));
    let mut cases: Vec<(&str, CurveComponent, Cplx, &str)> = vec![];
    cases.push(("Z1", fixtures::z1_totaro().curve_components().unwrap()[0].clone(), li2_1.clone(), "Li2(1)"));
    cases.push(("Z-1", fixtures::z_minus1().curve_components().unwrap()[0].clone(), pi2_12.clone(), "-Li2(-1) = pi^2/12"));
    let pc = fixtures::petras_zeta5();
    let pcs = pc.curve_components().unwrap();
    cases.push(("Petras[0]", pcs[0].clone(), li2_1.clone(), "Li2(1)"));
    cases.push(("Petras[1]", pcs[1].clone(), li2(&xi).mid.scale(&five), "5 Li2(xi)"));
    cases.push(("Petras[2]", pcs[2].clone(), li2(&xi.conj()).mid.scale(&five), "5 Li2(conj xi)"));
    let mut ok = true;
    let mut notes = vec![];
    let mut petras_sum = Cplx::zero(P);
    for (name, c, want, label) in &cases {
        match line_integral(c, &sched, 1e-22, P) {
            Err(e) => {
                ok = false;
                notes.push(format!("{}: {}", name, e));
            }
            Ok(q) => {
                let d = (&q.value - want).abs_f64();
                // the estimate is a level difference; allow the working-precision floor under it
                let allowed = 10.0 * q.error.max(2f64.powi(-(P as i32) + 16));
                let pass = d <= allowed;
                ok &= pass;
                if name.starts_with("Petras") {
                    petras_sum = &petras_sum + &q.value;
                }
                let extra = if *name == "Z-1" {
                    format!(" (the integral is {}; Li2(-1) = {})", q.value.re.to_decimal(12), li2_m1.re.to_decimal(12))
                } else {
                    String::new()
                };
                notes.push(format!("{} vs {}: {} |diff| {:.1e} allowed {:.1e}{}", name, label, if pass { "ok" } else { "MISMATCH" }, d, allowed, extra));
            }
        }
    }
    let total = &(&pi2(P) * &Real::from_i64(7, P)) / &Real::from_i64(30, P);
    let ds = dist_real(&petras_sum, &total);
    ok &= ds < 1e-18;
    notes.push(format!("Petras components sum to 7pi^2/30 within {:.1e}", ds));
    line(ok, notes.join("; "))
}

fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
    RationalFunction::new(Poly::from_ints(1, n), Poly::from_ints(1, d)).unwrap()
}

fn run_prop<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut r = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    r.run(&s, f).map_err(|e| e.to_string())
}

fn criterion_8() -> Line {
    let mut notes = vec![];
    let mut ok = true;
    let mut record = |name: &str, r: Result<(), String>| {
        ok &= r.is_ok();
        notes.push(match r {
            Ok(()) => format!("{} ok", name),
            Err(e) => format!("{} FAILED: {}", name, e),
        });
    };

    // d d = 0 on symbolic facet data, and the commutation of facet maps
    let mut dd = Ok(());
    for n in 2..=6 {
        if double_boundary_symbolic(n).values().any(|&c| c != 0) {
            dd = Err(format!("nonzero face coefficient for n = {}", n));
        }
        for j in 2..=n {
            for i in 1..j {
                for a in Facet::both() {
                    for b in Facet::both() {
                        let lhs = face_of(n, &[FacetLabel { i: j, v: b }, FacetLabel { i, v: a }]);
                        let rhs = face_of(n, &[FacetLabel { i, v: a }, FacetLabel { i: j - 1, v: b }]);
                        if lhs != rhs {
                            dd = Err(format!("facet maps do not commute: n={} i={} j={}", n, i, j));
                        }
                    }
                }
            }
        }
    }
    record("dd=0", dd);

    let poly = || prop::collection::vec(-5i64..6, 1..=5);
    record(
        "divisor degree 0 (100)",
        run_prop(100, (poly(), poly()), |(n, d)| {
            let (n, d) = (Poly::from_ints(1, &n), Poly::from_ints(1, &d));
            prop_assume!(!n.is_zero() && !d.is_zero());
            let f = RationalFunction::new(n, d).unwrap();
            let total: i64 = divisor(&f, 128).unwrap().iter().map(|p| p.multiplicity).sum();
            prop_assert_eq!(total, 0);
            Ok(())
        }),
    );

    let weil_fixture = boundary(&fixtures::graph_4_2(), P).and_then(|b| weil_product(&b));
    record(
        "Weil product of boundary(graph_4_2) = 1",
        match weil_fixture {
            Ok(k) if k.is_one() => Ok(()),
            other => Err(format!("{:?}", other)),
        },
    );
    record(
        "Weil product of random graphs (100)",
        run_prop(100, (-9i64..10, -9i64..10), |(a, b)| {
            prop_assume!(a != b && ![0, 1].contains(&a) && ![0, 1].contains(&b));
            let z = Precycle::curves(2, 1, 1, vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), rf(&[-a, 1], &[-b, 1])], 1).unwrap()])
                .unwrap();
            let w = weil_product(&boundary(&z, P).unwrap()).unwrap();
            prop_assert!(w.is_one(), "product {}", w);
            Ok(())
        }),
    );

    record(
        "normalize lands in the normalized profile and is idempotent",
        run_prop(40, (-6i64..7, -6i64..7, -6i64..7), |(a, b, c)| {
            // (t, a(t-1)/(t-a), b(t-1)/(t-c)): every zero facet escapes through 1
            prop_assume!([a, b, c].iter().all(|x| ![0, 1].contains(x)) && a != c);
            let z = Precycle::curves(
                3,
                2,
                1,
                vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), rf(&[-a, a], &[-a, 1]), rf(&[-b, b], &[-c, 1])], 1).unwrap()],
            )
            .unwrap();
            prop_assume!(check_face_proper(&z, P).unwrap().ok);
            let nz = match normalize(&z, P) {
                Ok(x) => x,
                Err(Error::Improper(_)) => return Err(TestCaseError::reject("correction meets a face")),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!(profile_is_normalized(&face_vanishing_profile(&nz, P).unwrap(), 3));
            prop_assert_eq!(normalize(&nz, P).unwrap(), nz);
            Ok(())
        }),
    );

    let disk = (0.0f64..0.999, -3.14159f64..3.14159).prop_map(|(r, th)| (r * th.cos(), r * th.sin()));
    record(
        "Li2 reflection (100)",
        run_prop(100, disk, |(x, y)| {
            prop_assume!((x - 1.0).hypot(y) > 1e-3 && x.hypot(y) > 1e-3);
            let z = ComplexApprox::exact(Cplx::from_f64(x, y, P));
            let w = ComplexApprox::exact(&Cplx::one(P) - &z.mid);
            let lhs = &li2(&z) + &li2(&w);
            let lz = log_eps(&z, &BranchSpec::principal()).unwrap();
            let lw = log_eps(&w, &BranchSpec::principal()).unwrap();
            let z2 = ComplexApprox::exact(Cplx::from_real(&pi2(P) / &Real::from_i64(6, P)));
            let rhs = &z2 - &(&lz * &lw);
            prop_assert!(lhs.overlaps(&rhs), "{:?} vs {:?}", lhs, rhs);
            Ok(())
        }),
    );
    record(
        "Li2 inversion (100)",
        run_prop(100, (1.001f64..50.0, -3.14f64..3.14), |(r, th)| {
            prop_assume!(th.abs() > 1e-6);
            let z = ComplexApprox::exact(Cplx::from_f64(r * th.cos(), r * th.sin(), P));
            let zi = ComplexApprox::exact(z.mid.inv());
            let lhs = &li2(&z) + &li2(&zi);
            let lm = log_eps(&ComplexApprox::exact(-&z.mid), &BranchSpec::principal()).unwrap();
            let half = ComplexApprox::exact(Cplx::from_f64(0.5, 0.0, P));
            let z2 = ComplexApprox::exact(Cplx::from_real(-(&pi2(P) / &Real::from_i64(6, P))));
            let rhs = (&z2 - &(&half * &(&lm * &lm))).inflate(1e-35);
            prop_assert!(lhs.overlaps(&rhs), "{:?} vs {:?}", lhs, rhs);
            Ok(())
        }),
    );
    record(
        "nested schedules satisfy the strict inequalities (200)",
        run_prop(200, (0.01f64..1.0, 0.05f64..0.95, 1usize..=4), |(eps, lam, n)| {
            match make_schedule(eps, n, lam, P) {
                Ok(s) => prop_assert!(s.satisfies_nesting(), "{:?}", s.phases),
                Err(Error::ScheduleUnderflow(_)) => return Err(TestCaseError::reject("underflow")),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
            Ok(())
        }),
    );
    line(ok, notes.join("; "))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_intreg")).args(args).output().expect("run intreg");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_9() -> Line {
    let suites: [&[&str]; 4] = [
        &["check", "--all-fixtures"],
        &["boundary", "--all-fixtures"],
        &["admissible", "--all-fixtures", "--seed", "7"],
        &["torsion", "--all-fixtures", "--seed", "7", "--max-order", "200"],
    ];
    let mut ok = true;
    let mut bytes = 0;
    for args in suites {
        let a = run_cli(args);
        let b = run_cli(args);
        let parsed: Result<serde_json::Value, _> = serde_json::from_slice(&a.1);
        ok &= a == b && parsed.is_ok() && !a.1.is_empty();
        bytes += a.1.len();
    }
    line(ok, format!("4 commands over all fixtures run twice, {} bytes of JSON, identical {}", bytes, ok))
}

fn main() {
    let mut sh = Shared { z1: None, petras: None };
    let names = [
        "Totaro value",
        "Totaro torsion",
        "Petras value and torsion",
        "counterexample reproduction",
        "phase independence",
        "eps -> 0 agreement",
        "oracle equivalence",
        "structural property suites",
        "determinism",
    ];
    let mut results = vec![];
    results.push(criterion_1(&mut sh));
    results.push(criterion_2(&sh));
    results.push(criterion_3(&mut sh));
    results.push(criterion_4());
    results.push(criterion_5(&sh));
    results.push(criterion_6(&sh));
    results.push(criterion_7());
    results.push(criterion_8());
    results.push(criterion_9());
    println!();
    for (k, (n, r)) in names.iter().zip(&results).enumerate() {
        println!("criterion {} ({}): {} | {}", k + 1, n, if r.ok { "PASS" } else { "FAIL" }, r.detail);
    }
    let failed = results.iter().filter(|r| !r.ok).count();
    println!("\nacceptance: {} passed, {} failed", results.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
