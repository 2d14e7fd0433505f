use intreg_cli::{parse_cycle_file, serialize_cycle_file, CycleFile, NamedCycle};
use intreg_core::cycles::{CurveComponent, PointComponent, Precycle};
use intreg_core::field_arith::{rat, CyclotomicNumber as K};
use intreg_core::func_field::{P1Point, Poly, RationalFunction};
use proptest::prelude::*;

fn arb_k(order: u32) -> impl Strategy<Value = K> {
    let phi = intreg_core::field_arith::euler_phi(order);
    prop::collection::vec((-6i64..7, 1i64..4), phi).prop_map(move |c| {
        K::from_coeffs(order, c.into_iter().map(|(a, b)| rat(a, b)).collect())
    })
}

fn arb_poly(order: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec(arb_k(order), 1..4).prop_map(move |c| Poly::new(order, c))
}

fn arb_rf(order: u32) -> impl Strategy<Value = RationalFunction> {
    (arb_poly(order), arb_poly(order)).prop_filter_map("zero or one", |(n, d)| {
        if n.is_zero() || d.is_zero() {
            return None;
        }
        RationalFunction::new(n, d).ok().filter(|f| !f.is_one())
    })
}

fn arb_file() -> impl Strategy<Value = CycleFile> {
    prop_oneof![Just(1u32), Just(3), Just(4), Just(5), Just(8)].prop_flat_map(|order| {
        let curves = prop::collection::vec((prop::collection::vec(arb_rf(order), 3), -3i64..4), 1..3).prop_map(move |cs| {
            let comps = cs.into_iter().filter(|(_, m)| *m != 0).map(|(f, m)| CurveComponent::new(f, m).unwrap()).collect();
            Precycle::curves(3, 2, order, comps).unwrap()
        });
        let points = prop::collection::vec((arb_k(order), -3i64..4), 1..3).prop_map(move |ps| {
            let comps = ps
                .into_iter()
                .filter(|(a, m)| *m != 0 && !a.is_zero() && !a.is_one())
                .map(|(a, m)| PointComponent { coords: vec![P1Point::Exact(a)], mult: m })
                .collect();
            Precycle::points(1, 1, order, comps, 128).unwrap()
        });
        (curves, points).prop_map(move |(c, p)| CycleFile {
            order,
            cycles: vec![NamedCycle { name: "c".into(), cycle: c }, NamedCycle { name: "pts".into(), cycle: p }],
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_inverts_serialize(f in arb_file()) {
        let text = serialize_cycle_file(&f).unwrap();
        let back = parse_cycle_file(&text).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
        // serialization of the parsed file is canonical
        prop_assert_eq!(serialize_cycle_file(&back).unwrap(), text);
    }
}
