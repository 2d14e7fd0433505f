use super::*;
use crate::cycles::PointComponent;
use crate::field_arith::{embed, CyclotomicNumber as K};
use crate::fixtures;
use crate::func_field::{P1Point, Poly, RationalFunction};
use crate::special_functions::li2;
use crate::wavefront::ScheduleKind;

const P: usize = 256;

fn pi2() -> f64 {
    std::f64::consts::PI.powi(2)
}

fn sched(phases: &[f64]) -> PhaseSchedule {
    PhaseSchedule { eps_bound: 1.0, lambda: 0.5, phases: phases.to_vec(), kind: ScheduleKind::Operational }
}

fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
    RationalFunction::new(Poly::from_ints(1, n), Poly::from_ints(1, d)).unwrap()
}

#[test]
fn totaro_value() {
    let r = regulator(&fixtures::z1_totaro(), &RegulatorOptions::default()).unwrap();
    assert_eq!(r.p, 2);
    assert!(!r.normalized);
    let (re, im) = r.value.to_f64();
    assert!((re - pi2() / 6.0).abs() < 1e-15, "{}", re);
    assert!(im.abs() < 1e-15);
    assert!(r.value.rad < 1e-15);
    assert!(r.agreement.ok);
    assert_eq!(r.evaluations.len(), 3);
    let t = torsion_order(&r.value, 2, 1000, 1e-8).unwrap();
    assert_eq!(t.order, Some(24));
}

#[test]
fn petras_components_match_dilogarithms() {
    let z = fixtures::petras_zeta5();
    let cs = z.curve_components().unwrap();
    let xi = embed(&K::zeta(5), P);
    let s = sched(&[0.15, 1e-3, 1e-7]);
    let want = [
        li2(&ComplexApprox::exact(Cplx::one(P))).mid,
        li2(&xi).mid.scale(&Real::from_i64(5, P)),
        li2(&xi.conj()).mid.scale(&Real::from_i64(5, P)),
    ];
    for (c, w) in cs.iter().zip(&want) {
        let l = line_integral(c, &s, 1e-22, P).unwrap();
        assert!((&l.value - w).abs_f64() < 1e-20, "{:?} vs {:?}", l.value.to_f64(), w.to_f64());
    }
}

#[test]
fn petras_value() {
    let r = regulator(&fixtures::petras_zeta5(), &RegulatorOptions::default()).unwrap();
    let (re, im) = r.value.to_f64();
    assert!((re - 7.0 * pi2() / 30.0).abs() < 1e-15, "{}", re);
    assert!(im.abs() < 1e-15);
    let t = torsion_order(&r.value, 2, 1000, 1e-8).unwrap();
    assert_eq!(t.certificate, Some((num_bigint::BigInt::from(-7), num_bigint::BigInt::from(120))));
    // breakdown sums to the value
    let ev = r.evaluations.last().unwrap();
    let sum = ev.terms.iter().fold(Cplx::zero(P), |a, t| &a + &t.contribution);
    assert_eq!(sum.to_f64(), ev.value.mid.to_f64());
}

#[test]
fn z_minus1_line_integral_is_li2_of_minus_one() {
    // pole t = 0 to zero t = -1 of 1 + 1/t
    let z = fixtures::z_minus1();
    let c = &z.curve_components().unwrap()[0];
    let l = line_integral(c, &sched(&[0.15, 1e-3, 1e-7]), 1e-22, P).unwrap();
    assert!((l.value.re.to_f64() + pi2() / 12.0).abs() < 1e-20);
    assert!(l.value.im.to_f64().abs() < 1e-20);
}

#[test]
fn crossing_terms_compensate_moving_the_second_cut() {
    // T1 is the ray from inf to 0; T2 crosses it near t = 0 where f2 ~ -2/3
    let c = CurveComponent::new(vec![rf(&[0, 1], &[1]), rf(&[-2, 1], &[3, 1]), rf(&[5, 1], &[7, 1])], 1).unwrap();
    let z = Precycle::curves(3, 2, 1, vec![c]).unwrap();
    let mut vals = vec![];
    for e2 in [0.01, 0.02, 0.05] {
        let rep = admissible(&z, &sched(&[0.3, e2, 1e-6]), P).unwrap();
        assert!(rep.ok, "{:?}", rep.failures);
        let ev = evaluate(&z, &rep, 1e-22, P).unwrap();
        let t = &ev.terms[0];
        assert_eq!(t.crossings.len(), 1);
        vals.push(ev.value.mid.clone());
    }
    for v in &vals[1..] {
        let (d, _) = canonical_representative(&(v - &vals[0]), 2);
        assert!(d.abs_f64() < 1e-18, "{:e}", d.abs_f64());
    }
    // the line integral alone does move
    let a = line_integral(&z.curve_components().unwrap()[0], &sched(&[0.3, 0.01, 1e-6]), 1e-22, P).unwrap();
    let b = line_integral(&z.curve_components().unwrap()[0], &sched(&[0.3, 0.05, 1e-6]), 1e-22, P).unwrap();
    let (d, _) = canonical_representative(&(&a.value - &b.value), 2);
    assert!(d.abs_f64() > 1e-6);
}

#[test]
fn point_level_logs() {
    let pts = |v: &[(i64, i64)]| {
        let comps = v.iter().map(|&(a, m)| PointComponent { coords: vec![P1Point::Exact(K::from_int(a, 1))], mult: m }).collect();
        Precycle::points(1, 1, 1, comps, P).unwrap()
    };
    let r = regulator(&pts(&[(4, 1), (2, -2)]), &RegulatorOptions::default()).unwrap();
    assert_eq!(r.p, 1);
    assert!(r.value.mid.abs_f64() < 1e-60);
    let r = regulator(&pts(&[(-1, 1)]), &RegulatorOptions::default()).unwrap();
    let (re, im) = r.value.to_f64();
    assert!(re.abs() < 1e-60 && (im + std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(torsion_order(&r.value, 1, 10, 1e-8).unwrap().order, Some(2));
}

#[test]
fn intersection_numbers() {
    let line = Precycle::curves(2, 1, 1, vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), RationalFunction::constant(K::from_int(5, 1))], 1).unwrap()]).unwrap();
    assert_eq!(intersection_number_n2(&line, &sched(&[0.2, 0.01]), P).unwrap(), 0);
    let z = Precycle::curves(2, 1, 1, vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), rf(&[-1, 1], &[3, 1])], 1).unwrap()]).unwrap();
    let a = intersection_number_n2(&z, &sched(&[0.2, 0.01]), P).unwrap();
    assert!(a.abs() <= 2);
}

#[test]
fn refuses_bad_input() {
    assert!(matches!(regulator(&fixtures::z_minus1(), &RegulatorOptions::default()), Err(Error::Precondition(_))));
    assert!(matches!(regulator(&fixtures::graph_4_2(), &RegulatorOptions::default()), Err(Error::Unsupported(_))));
}

#[test]
fn two_form_vanishes() {
    let z = fixtures::petras_zeta5();
    for c in z.curve_components().unwrap() {
        for t in [(0.3, 0.7), (-1.2, 0.1), (2.0, -3.0)] {
            let t = Cplx::from_f64(t.0, t.1, P);
            assert!(two_form_sample(c, 2, 3, &t, P) < 1e-60);
            assert!(two_form_sample(c, 1, 3, &t, P) < 1e-60);
        }
    }
}
