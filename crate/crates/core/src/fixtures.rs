//! Built-in cycles used by tests and the command line tool.

use crate::cycles::{CurveComponent, Precycle};
use crate::field_arith::CyclotomicNumber as K;
use crate::func_field::{Poly, RationalFunction};

fn rf(order: u32, num: &[K], den: &[K]) -> RationalFunction {
    RationalFunction::new(Poly::new(order, num.to_vec()), Poly::new(order, den.to_vec())).expect("fixture data")
}

fn int(a: i64, order: u32) -> K {
    K::from_int(a, order)
}

/// 1 - c/t = (t - c)/t
fn one_minus_c_over_t(c: &K) -> RationalFunction {
    let n = c.order();
    rf(n, &[-c, K::one(n)], &[K::zero(n), K::one(n)])
}

fn one_minus_t(n: u32) -> RationalFunction {
    rf(n, &[int(1, n), int(-1, n)], &[int(1, n)])
}

fn t_pow(n: u32, e: i64) -> RationalFunction {
    RationalFunction::t(n).powi(e).expect("nonzero")
}

fn curve(coords: Vec<RationalFunction>, mult: i64) -> CurveComponent {
    CurveComponent::new(coords, mult).expect("fixture data")
}

/// (1 - 1/t, 1 - t, 1/t) over Q.
pub fn z1_totaro() -> Precycle {
    let n = 1;
    Precycle::curves(3, 2, n, vec![curve(vec![one_minus_c_over_t(&K::one(n)), one_minus_t(n), t_pow(n, -1)], 1)])
        .expect("fixture data")
}

/// Three components over Q(zeta_5).
pub fn petras_zeta5() -> Precycle {
    let n = 5;
    let z = K::zeta(n);
    let zbar = z.conj();
    let comps = vec![
        curve(vec![one_minus_c_over_t(&K::one(n)), one_minus_t(n), t_pow(n, -1)], 1),
        curve(vec![one_minus_c_over_t(&z), one_minus_t(n), t_pow(n, -5)], 1),
        curve(vec![one_minus_c_over_t(&zbar), one_minus_t(n), t_pow(n, -5)], 1),
    ];
    Precycle::curves(3, 2, n, comps).expect("fixture data")
}

/// (F, G, H) over Q(i): F = iz - 1, G = -(1+z)(1+3z)/((1+iz)(1-2z)), H = (iz-1)/(3+z).
pub fn mccarthy_counterexample() -> Precycle {
    let n = 4;
    let i = K::zeta(n);
    let f = rf(n, &[int(-1, n), i.clone()], &[int(1, n)]);
    // -(1 + 4z + 3z^2) / (1 + (i-2) z - 2i z^2)
    let g = rf(
        n,
        &[int(-1, n), int(-4, n), int(-3, n)],
        &[int(1, n), &i - &int(2, n), &i * &int(-2, n)],
    );
    let h = rf(n, &[int(-1, n), i], &[int(3, n), int(1, n)]);
    Precycle::curves(3, 2, n, vec![curve(vec![f, g, h], 1)]).expect("fixture data")
}

/// (t, (t-4)/(t-2)) in the 2-cube; boundary {4} - 2{2}.
pub fn graph_4_2() -> Precycle {
    let n = 1;
    let g = rf(n, &[int(-4, n), int(1, n)], &[int(-2, n), int(1, n)]);
    Precycle::curves(2, 1, n, vec![curve(vec![RationalFunction::t(n), g], 1)]).expect("fixture data")
}

/// (1 + 1/t, 1 - t, 1/t) over Q.
pub fn z_minus1() -> Precycle {
    let n = 1;
    Precycle::curves(3, 2, n, vec![curve(vec![one_minus_c_over_t(&int(-1, n)), one_minus_t(n), t_pow(n, -1)], 1)])
        .expect("fixture data")
}

pub const NAMES: [&str; 5] = ["z1_totaro", "petras_zeta5", "mccarthy_counterexample", "graph_4_2", "z_minus1"];

pub fn by_name(name: &str) -> Option<Precycle> {
    match name {
        "z1_totaro" => Some(z1_totaro()),
        "petras_zeta5" => Some(petras_zeta5()),
        "mccarthy_counterexample" => Some(mccarthy_counterexample()),
        "graph_4_2" => Some(graph_4_2()),
        "z_minus1" => Some(z_minus1()),
        _ => None,
    }
}
