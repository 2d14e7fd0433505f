//! Divisors on P^1: exact k-rational points where possible, isolated complex roots otherwise.

use super::numeric::NumRational;
use super::roots::{squarefree_roots, AlgebraicRoot};
use super::{P1Point, Poly, RationalFunction};
use crate::error::{Error, Result};
use crate::field_arith::{embed, euler_phi, rational_approx, root_of_unity, ComplexApprox, CyclotomicNumber as K};
use crate::mp::Real;
use num_bigint::BigInt;
use num_integer::Integer;
use std::fmt;

/// A closed point of P^1 over k, possibly only known numerically.
#[derive(Clone, Debug)]
pub enum Location {
    Exact(K),
    Infinity,
    Root(AlgebraicRoot),
}

impl Location {
    pub fn same_point(&self, other: &Location) -> bool {
        match (self, other) {
            (Location::Exact(a), Location::Exact(b)) => a == b,
            (Location::Infinity, Location::Infinity) => true,
            (Location::Root(a), Location::Root(b)) => a.poly == b.poly && a.approx.overlaps(&b.approx),
            _ => false,
        }
    }

    pub fn approx(&self, prec: usize) -> Option<ComplexApprox> {
        match self {
            Location::Exact(a) => Some(embed(a, prec)),
            Location::Infinity => None,
            Location::Root(r) => Some(r.approx.clone()),
        }
    }

    pub fn as_p1(&self) -> P1Point {
        match self {
            Location::Exact(a) => P1Point::Exact(a.clone()),
            Location::Infinity => P1Point::Infinity,
            Location::Root(r) => P1Point::Approx(r.approx.clone()),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Exact(a) => write!(f, "{}", a),
            Location::Infinity => write!(f, "inf"),
            Location::Root(r) => {
                let (x, y) = r.approx.to_f64();
                write!(f, "~({:.12} {:+.12}i)", x, y)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct DivisorPoint {
    pub location: Location,
    pub multiplicity: i64,
}

/// Tries to identify a numeric root of the squarefree `q` with an element of k.
fn recognize(q: &Poly, z: &ComplexApprox, prec: usize) -> Result<Option<K>> {
    let n = q.order();
    let phi = euler_phi(n);
    let reps: Vec<i64> = if n <= 2 {
        vec![1]
    } else {
        (1..=(n as i64) / 2).filter(|a| a.gcd(&(n as i64)) == 1).collect()
    };
    let wp = prec;
    // candidates for sigma_a(root), a in reps
    let mut cands: Vec<Vec<ComplexApprox>> = vec![vec![z.clone()]];
    for &a in reps.iter().skip(1) {
        cands.push(squarefree_roots(&q.galois(a), wp)?);
    }
    let total: usize = cands.iter().map(|c| c.len()).product();
    if total > 5000 {
        return Ok(None);
    }
    let tol = Real::one(wp).ldexp(-(wp as i32) / 2);
    let max_den = BigInt::from(1) << (wp / 4);
    let mut idx = vec![0usize; cands.len()];
    loop {
        let w: Vec<&ComplexApprox> = idx.iter().enumerate().map(|(r, &i)| &cands[r][i]).collect();
        if let Some(alpha) = solve_coords(n, phi, &reps, &w, wp, &max_den, &tol) {
            if q.eval(&alpha).is_zero() {
                return Ok(Some(alpha));
            }
        }
        // odometer over the candidate lists; cands[0] is the single given root
        let mut r = cands.len() - 1;
        loop {
            if r == 0 {
                return Ok(None);
            }
            idx[r] += 1;
            if idx[r] < cands[r].len() {
                break;
            }
            idx[r] = 0;
            r -= 1;
        }
    }
}

fn solve_coords(
    n: u32,
    phi: usize,
    reps: &[i64],
    w: &[&ComplexApprox],
    wp: usize,
    max_den: &BigInt,
    tol: &Real,
) -> Option<K> {
    // rows: Re and Im of sum_j c_j zeta^{a j} = w_a
    let mut rows: Vec<Vec<Real>> = vec![];
    for (r, &a) in reps.iter().enumerate() {
        let pw: Vec<_> = (0..phi).map(|j| root_of_unity(a * j as i64, n, wp)).collect();
        let mut re: Vec<Real> = pw.iter().map(|x| x.re.clone()).collect();
        re.push(w[r].mid.re.clone());
        rows.push(re);
        if n > 2 {
            let mut im: Vec<Real> = pw.iter().map(|x| x.im.clone()).collect();
            im.push(w[r].mid.im.clone());
            rows.push(im);
        } else if w[r].mid.im.abs() > *tol {
            return None;
        }
    }
    let c = gauss_solve(rows, phi)?;
    let mut coeffs = Vec::with_capacity(phi);
    for x in c {
        coeffs.push(rational_approx(&x, max_den, tol)?);
    }
    Some(K::from_coeffs(n, coeffs))
}

fn gauss_solve(mut a: Vec<Vec<Real>>, m: usize) -> Option<Vec<Real>> {
    let rows = a.len();
    if rows < m {
        return None;
    }
    for col in 0..m {
        let piv = (col..rows).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        for i in 0..rows {
            if i != col {
                let f = &a[i][col] / &a[col][col];
                if f.is_zero() {
                    continue;
                }
                for j in col..=m {
                    let v = &a[i][j] - &(&f * &a[col][j]);
                    a[i][j] = v;
                }
            }
        }
    }
    Some((0..m).map(|i| &a[i][m] / &a[i][i]).collect())
}

/// Finite roots of a squarefree monic polynomial, exact where they lie in k.
pub fn split_roots(q: &Poly, prec: usize) -> Result<Vec<Location>> {
    match q.degree() {
        None => return Err(Error::Invalid("roots of the zero polynomial".into())),
        Some(0) => return Ok(vec![]),
        Some(1) => {
            let r = -&q.coeff(0).checked_div(&q.lead())?;
            return Ok(vec![Location::Exact(r)]);
        }
        _ => {}
    }
    let numeric = squarefree_roots(q, prec)?;
    let mut exact: Vec<K> = vec![];
    for z in &numeric {
        if exact.iter().any(|a| embed(a, prec).overlaps(z)) {
            continue;
        }
        if let Some(a) = recognize(q, z, prec)? {
            exact.push(a);
        }
    }
    let mut rest = q.clone();
    for a in &exact {
        rest = rest.exact_div(&Poly::linear(a))?;
    }
    let mut out: Vec<Location> = exact.iter().cloned().map(Location::Exact).collect();
    if !rest.is_constant() {
        for z in numeric {
            if exact.iter().any(|a| embed(a, prec).overlaps(&z)) {
                continue;
            }
            out.push(Location::Root(AlgebraicRoot { approx: z, poly: rest.clone() }));
        }
    }
    Ok(out)
}

/// Finite zeros of `p` with multiplicities.
pub fn poly_zeros(p: &Poly, prec: usize) -> Result<Vec<(Location, u32)>> {
    let (_, factors) = p.squarefree_decomposition();
    let mut out = vec![];
    for (q, m) in factors {
        for loc in split_roots(&q, prec)? {
            out.push((loc, m));
        }
    }
    Ok(out)
}

/// Zeros (v = 0) or poles (v = infinity) of f, including the point at infinity.
pub fn fiber(f: &RationalFunction, poles: bool, prec: usize) -> Result<Vec<(Location, u32)>> {
    let (p, other) = if poles { (f.den(), f.num()) } else { (f.num(), f.den()) };
    let mut out = poly_zeros(p, prec)?;
    let (dp, dq) = (p.deg0() as i64, other.deg0() as i64);
    if !f.is_zero() && dq > dp {
        out.push((Location::Infinity, (dq - dp) as u32));
    }
    Ok(out)
}

/// Divisor of a nonzero rational function: zeros, then poles, then infinity.
pub fn divisor(f: &RationalFunction, prec: usize) -> Result<Vec<DivisorPoint>> {
    if f.is_zero() {
        return Err(Error::Invalid("divisor of the zero function".into()));
    }
    let mut out = vec![];
    for (loc, m) in poly_zeros(f.num(), prec)? {
        out.push(DivisorPoint { location: loc, multiplicity: m as i64 });
    }
    for (loc, m) in poly_zeros(f.den(), prec)? {
        out.push(DivisorPoint { location: loc, multiplicity: -(m as i64) });
    }
    let d = f.den().deg0() as i64 - f.num().deg0() as i64;
    if d != 0 {
        out.push(DivisorPoint { location: Location::Infinity, multiplicity: d });
    }
    Ok(out)
}

/// Value of f at a located point; zero, infinity and one are decided exactly.
pub fn eval_at(f: &RationalFunction, loc: &Location, prec: usize) -> Result<P1Point> {
    match loc {
        Location::Exact(x) => Ok(f.eval_exact(x)),
        Location::Infinity => Ok(f.eval_infinity()),
        Location::Root(r) => {
            if let Some(c) = f.as_constant() {
                return Ok(P1Point::Exact(c));
            }
            if r.is_root_of(f.den())? {
                return Ok(P1Point::Infinity);
            }
            if r.is_root_of(f.num())? {
                return Ok(P1Point::Exact(K::zero(f.order())));
            }
            if r.is_root_of(&f.minus_one_numerator())? {
                return Ok(P1Point::Exact(K::one(f.order())));
            }
            let mut cur = r.clone();
            let mut p = prec.max(r.approx.prec());
            for _ in 0..4 {
                if let Some(v) = NumRational::new(f, p).eval_ball(&cur.approx) {
                    return Ok(P1Point::Approx(v));
                }
                p *= 2;
                cur = cur.refine(p)?;
            }
            Err(Error::Precision("could not separate a value from a pole".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::rat;
    use proptest::prelude::*;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(1, n), Poly::from_ints(1, d)).unwrap()
    }

    fn exact(l: &Location) -> K {
        match l {
            Location::Exact(a) => a.clone(),
            other => panic!("expected exact point, got {}", other),
        }
    }

    #[test]
    fn divisor_of_t() {
        let d = divisor(&RationalFunction::t(1), 256).unwrap();
        assert_eq!(d.len(), 2);
        assert!(exact(&d[0].location).is_zero() && d[0].multiplicity == 1);
        assert!(matches!(d[1].location, Location::Infinity) && d[1].multiplicity == -1);
    }

    #[test]
    fn divisor_of_moebius() {
        let d = divisor(&rf(&[-4, 1], &[-2, 1]), 256).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(exact(&d[0].location), K::from_int(4, 1));
        assert_eq!(d[0].multiplicity, 1);
        assert_eq!(exact(&d[1].location), K::from_int(2, 1));
        assert_eq!(d[1].multiplicity, -1);
    }

    #[test]
    fn divisor_over_q_zeta5() {
        let z = K::zeta(5);
        let f = RationalFunction::new(Poly::linear(&z), Poly::t(5)).unwrap();
        let d = divisor(&f, 256).unwrap();
        assert_eq!(exact(&d[0].location), z);
        assert_eq!(d[0].multiplicity, 1);
        assert!(exact(&d[1].location).is_zero() && d[1].multiplicity == -1);
    }

    #[test]
    fn recognizes_split_quadratics() {
        // (1+z)(1+3z) over Q(i)
        let p = Poly::from_ints(4, &[1, 4, 3]);
        let locs = split_roots(&p.monic(), 256).unwrap();
        let mut got: Vec<K> = locs.iter().map(exact).collect();
        got.sort_by_key(|a| a.to_string());
        assert_eq!(got, vec![K::from_int(-1, 4), K::from_rational(rat(-1, 3), 4)]);
        // (t - zeta_5)(t - zeta_5^2) over Q(zeta_5): needs two embeddings
        let z = K::zeta(5);
        let q = Poly::linear(&z).mul(&Poly::linear(&(&z * &z)));
        let locs = split_roots(&q, 256).unwrap();
        assert!(locs.iter().all(|l| matches!(l, Location::Exact(_))));
        // t^2 - 2 over Q stays numeric
        let locs = split_roots(&Poly::from_ints(1, &[-2, 0, 1]), 256).unwrap();
        assert!(locs.iter().all(|l| matches!(l, Location::Root(_))));
        // mixed: (t^2 - 2)(t - 3)
        let mixed = Poly::from_ints(1, &[-2, 0, 1]).mul(&Poly::from_ints(1, &[-3, 1]));
        let locs = split_roots(&mixed, 256).unwrap();
        assert_eq!(locs.iter().filter(|l| matches!(l, Location::Exact(_))).count(), 1);
        if let Location::Root(r) = &locs[1] {
            assert_eq!(r.poly, Poly::from_ints(1, &[-2, 0, 1]));
        }
    }

    #[test]
    fn eval_at_numeric_points() {
        let q = Poly::from_ints(1, &[-2, 0, 1]);
        let locs = split_roots(&q, 128).unwrap();
        // f = t^2 - 1 equals 1 at sqrt 2
        let f = rf(&[-1, 0, 1], &[1]);
        assert!(eval_at(&f, &locs[0], 128).unwrap().is_one());
        let g = rf(&[1], &[-2, 0, 1]);
        assert!(eval_at(&g, &locs[0], 128).unwrap().is_infinity());
        let h = RationalFunction::t(1);
        match eval_at(&h, &locs[1], 128).unwrap() {
            P1Point::Approx(v) => assert!((v.to_f64().0.abs() - 2f64.sqrt()).abs() < 1e-15),
            other => panic!("{:?}", other),
        }
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(-5i64..6, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(1, &c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn divisor_has_degree_zero(n in arb_poly(4), d in arb_poly(4)) {
            prop_assume!(!n.is_zero() && !d.is_zero());
            let f = RationalFunction::new(n, d).unwrap();
            let div = divisor(&f, 128).unwrap();
            let total: i64 = div.iter().map(|p| p.multiplicity).sum();
            prop_assert_eq!(total, 0);
        }

        #[test]
        fn divisor_is_additive(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3), d in arb_poly(3)) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero() && !d.is_zero());
            let f = RationalFunction::new(a, b).unwrap();
            let g = RationalFunction::new(c, d).unwrap();
            let fg = f.mul(&g);
            let mut lhs = collapse(divisor(&fg, 128).unwrap());
            let mut rhs = divisor(&f, 128).unwrap();
            rhs.extend(divisor(&g, 128).unwrap());
            let mut rhs = collapse(rhs);
            let key = |a: &(f64, f64, i64), b: &(f64, f64, i64)| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap());
            lhs.sort_by(key);
            rhs.sort_by(key);
            prop_assert_eq!(lhs.len(), rhs.len(), "{:?} vs {:?}", lhs, rhs);
            for (x, y) in lhs.iter().zip(&rhs) {
                prop_assert!((x.0 == y.0 || (x.0 - y.0).abs() < 1e-9) && (x.1 - y.1).abs() < 1e-9 && x.2 == y.2);
            }
        }

        #[test]
        fn eval_commutes_with_compose(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2), x in -9i64..10) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_constant());
            let f = RationalFunction::new(a, b).unwrap();
            let g = RationalFunction::from_poly(c);
            let fg = f.compose(&g).unwrap();
            let pt = P1Point::Exact(K::from_int(x, 1));
            let lhs = fg.eval(&pt).unwrap();
            let inner = g.eval(&pt).unwrap();
            let rhs = f.eval(&inner).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivative_is_a_derivation(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3), d in arb_poly(3)) {
            prop_assume!(!b.is_zero() && !d.is_zero());
            let f = RationalFunction::new(a, b).unwrap();
            let g = RationalFunction::new(c, d).unwrap();
            let lhs = f.mul(&g).derivative();
            let rhs = f.derivative().mul(&g).add(&f.mul(&g.derivative()));
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// (re, im, multiplicity) with points summed and zeros dropped; infinity as (inf, 0).
    fn collapse(d: Vec<DivisorPoint>) -> Vec<(f64, f64, i64)> {
        let mut out: Vec<(f64, f64, i64)> = vec![];
        for p in d {
            let (x, y) = match &p.location {
                Location::Infinity => (f64::INFINITY, 0.0),
                l => l.approx(128).unwrap().to_f64(),
            };
            // snap tiny parts so the sort order is stable
            let snap = |v: f64| if v.abs() < 1e-20 { 0.0 } else { v };
            let (x, y) = (snap(x), snap(y));
            if let Some(e) = out.iter_mut().find(|e| (e.0 == x || (e.0 - x).abs() < 1e-9) && (e.1 - y).abs() < 1e-9) {
                e.2 += p.multiplicity;
            } else {
                out.push((x, y, p.multiplicity));
            }
        }
        out.retain(|e| e.2 != 0);
        out
    }
}
