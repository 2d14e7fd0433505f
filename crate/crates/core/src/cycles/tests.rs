use super::*;
use crate::fixtures;
use crate::func_field::Poly;

const P: usize = 256;

fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
    RationalFunction::new(Poly::from_ints(1, n), Poly::from_ints(1, d)).unwrap()
}

fn konst(a: i64) -> RationalFunction {
    RationalFunction::constant(K::from_int(a, 1))
}

fn exact_point(p: &PointComponent) -> Vec<K> {
    p.exact_coords().expect("exact point")
}

#[test]
fn face_properness_examples() {
    assert!(check_face_proper(&fixtures::z1_totaro(), P).unwrap().ok);
    let bad = Precycle::curves(2, 1, 1, vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), rf(&[1, -1], &[1])], 1).unwrap()]).unwrap();
    let rep = check_face_proper(&bad, P).unwrap();
    assert!(!rep.ok);
    assert_eq!(rep.violations[0].t, "inf");
    let line = Precycle::curves(2, 1, 1, vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), konst(5)], 1).unwrap()]).unwrap();
    assert!(check_face_proper(&line, P).unwrap().ok);
    assert!(check_face_proper(&fixtures::petras_zeta5(), P).unwrap().ok);
    assert!(check_face_proper(&fixtures::mccarthy_counterexample(), P).unwrap().ok);
}

#[test]
fn boundary_of_graph() {
    let b = boundary(&fixtures::graph_4_2(), P).unwrap();
    let pts = b.point_components().unwrap();
    assert_eq!(pts.len(), 2);
    let mut got: Vec<(K, i64)> = pts.iter().map(|p| (exact_point(p)[0].clone(), p.mult)).collect();
    got.sort_by_key(|x| x.1);
    assert_eq!(got, vec![(K::from_int(2, 1), -2), (K::from_int(4, 1), 1)]);
    // Weil-type closure: 4 * 2^-2 = 1
    assert!(weil_product(&b).unwrap().is_one());
    assert!(!is_closed(&fixtures::graph_4_2(), P).unwrap());
}

#[test]
fn closed_fixtures() {
    assert!(boundary(&fixtures::z1_totaro(), P).unwrap().is_empty());
    assert!(is_closed(&fixtures::z1_totaro(), P).unwrap());
    assert!(is_closed(&fixtures::petras_zeta5(), P).unwrap());
    assert!(boundary(&Precycle::empty_curves(3, 1), P).unwrap().is_empty());
}

#[test]
fn fixtures_not_closed() {
    // f1 = 1 + 1/t vanishes at t = -1 where (f2, f3) = (2, -1)
    assert!(!is_closed(&fixtures::z_minus1(), P).unwrap());
    assert!(!is_closed(&fixtures::mccarthy_counterexample(), P).unwrap());
}

#[test]
fn degeneracy() {
    let fib = CurveComponent::new(vec![rf(&[0, 1], &[1]), konst(3), konst(-2)], 1).unwrap();
    assert!(fib.is_degenerate());
    let moeb = CurveComponent::new(vec![konst(3), rf(&[1, 2], &[-1, 1])], 1).unwrap();
    assert!(moeb.is_degenerate());
    let sq = CurveComponent::new(vec![rf(&[0, 0, 1], &[1]), konst(3)], 1).unwrap();
    assert!(!sq.is_degenerate());
    assert!(!fixtures::z1_totaro().curve_components().unwrap()[0].is_degenerate());
}

#[test]
fn component_invariants() {
    assert!(CurveComponent::new(vec![konst(1), rf(&[0, 1], &[1])], 1).is_err());
    assert!(CurveComponent::new(vec![konst(0), rf(&[0, 1], &[1])], 1).is_err());
    assert!(CurveComponent::new(vec![konst(2), konst(3)], 1).is_err());
}

#[test]
fn profiles() {
    let z1 = fixtures::z1_totaro();
    let prof = face_vanishing_profile(&z1, P).unwrap();
    assert_eq!(prof.len(), 6);
    assert!(prof.iter().all(|e| e.vanishes));
    assert!(is_normalized(&fixtures::petras_zeta5(), P).unwrap());
    let g = face_vanishing_profile(&fixtures::graph_4_2(), P).unwrap();
    assert!(!g.iter().find(|e| e.i == 1 && e.v == Facet::Zero).unwrap().vanishes);
    assert!(!profile_is_normalized(&g, 2));
}

#[test]
fn normalize_identity_on_normalized() {
    let z1 = fixtures::z1_totaro();
    assert_eq!(normalize(&z1, P).unwrap(), z1);
    let e = Precycle::empty_curves(3, 1);
    assert_eq!(normalize(&e, P).unwrap(), e);
}

#[test]
fn normalize_rejects_zero_facets() {
    assert!(matches!(normalize(&fixtures::graph_4_2(), P), Err(Error::NotDeltaZeroFree(_))));
}

#[test]
fn normalize_two_cube() {
    // preimage of the point 3 under the join: (t, 3(t-1)/(t-3))
    let a = K::from_int(3, 1);
    let pts = Precycle::points(1, 1, 1, vec![PointComponent { coords: vec![P1Point::Exact(a)], mult: 1 }], P).unwrap();
    let corr = normalize::pullback_join(&pts, 1).unwrap();
    let c = &corr[0];
    assert_eq!(c.coords[0], RationalFunction::t(1));
    assert_eq!(c.coords[1], rf(&[-3, 3], &[-3, 1]));
    // zero facets escape through 1; z1=inf and z2=inf both give the point 3
    let v = Precycle::curves(2, 1, 1, corr).unwrap();
    let prof = face_vanishing_profile(&v, P).unwrap();
    assert!(prof.iter().filter(|e| e.v == Facet::Zero).all(|e| e.vanishes));
    assert!(!profile_is_normalized(&prof, 2));
    assert!(is_closed(&v, P).unwrap());
    let nu = normalize(&v.scale(2), P).unwrap();
    assert!(nu.is_empty());
}

#[test]
fn normalize_three_cube_general() {
    // Z = (t, 2(t-1)/(t-2), 5(t-1)/(t-4)): d^inf_1 = {(2, 5)}, d^inf_2 = {(2, -5/2)},
    // all zero facets escape through 1
    let z = Precycle::curves(
        3,
        2,
        1,
        vec![CurveComponent::new(vec![rf(&[0, 1], &[1]), rf(&[-2, 2], &[-2, 1]), rf(&[-5, 5], &[-4, 1])], 1).unwrap()],
    )
    .unwrap();
    assert!(check_face_proper(&z, P).unwrap().ok);
    let prof = face_vanishing_profile(&z, P).unwrap();
    assert!(prof.iter().filter(|e| e.v == Facet::Zero).all(|e| e.vanishes));
    assert!(!profile_is_normalized(&prof, 3));
    let nz = normalize(&z, P).unwrap();
    assert!(is_normalized(&nz, P).unwrap());
    assert_eq!(normalize(&nz, P).unwrap(), nz);
    // Z, one correction over the first join and two over the second
    assert_eq!(nz.curve_components().unwrap().len(), 4);
}

#[test]
fn degenerate_components_do_not_affect_closedness() {
    let z1 = fixtures::z1_totaro();
    let deg = CurveComponent::new(vec![rf(&[0, 1], &[1]), konst(3), konst(-2)], 4).unwrap();
    let mut comps = z1.curve_components().unwrap().to_vec();
    comps.push(deg);
    let z = Precycle::curves(3, 2, 1, comps).unwrap();
    assert!(is_closed(&z.drop_degenerate(), P).unwrap());
    assert_eq!(z.drop_degenerate(), z1);
}

#[test]
fn reduce_merges_components() {
    let z1 = fixtures::z1_totaro();
    let doubled = z1.add(&z1).unwrap();
    assert_eq!(doubled.curve_components().unwrap().len(), 1);
    assert_eq!(doubled.curve_components().unwrap()[0].mult, 2);
    assert!(doubled.add(&z1.scale(-2)).unwrap().is_empty());
}

#[test]
fn numeric_boundary_points_cancel() {
    // A has boundary points over t = +-sqrt 2; A(-t) has the same points at t = -+sqrt 2
    let a = CurveComponent::new(vec![rf(&[-2, 0, 1], &[-5, 1]), rf(&[3, 1], &[7, 1]), konst(4)], 1).unwrap();
    let b = boundary(&Precycle::curves(3, 2, 1, vec![a.clone()]).unwrap(), P).unwrap();
    assert!(b.point_components().unwrap().iter().any(|p| p.exact_coords().is_none()));
    let minus_t = rf(&[0, -1], &[1]);
    let coords: Vec<_> = a.coords.iter().map(|f| f.compose(&minus_t).unwrap()).collect();
    let a2 = CurveComponent::new(coords, -1).unwrap();
    let z = Precycle::curves(3, 2, 1, vec![a, a2]).unwrap();
    assert_eq!(z.curve_components().unwrap().len(), 2);
    assert!(is_closed(&z, P).unwrap());
}
