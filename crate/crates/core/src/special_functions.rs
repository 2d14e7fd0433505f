//! Analytic oracles: perturbed logarithm branches, the dilogarithm and pi.

use crate::error::{Error, Result};
use crate::field_arith::ComplexApprox;
use crate::mp::{Cplx, Real};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

const GUARD: usize = 32;

/// Branch of log with argument in (-pi - phase, pi - phase].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchSpec {
    pub phase: f64,
}

impl BranchSpec {
    pub fn new(phase: f64) -> Self {
        BranchSpec { phase }
    }

    pub fn principal() -> Self {
        BranchSpec { phase: 0.0 }
    }

    pub fn prepare(&self, prec: usize) -> PreparedBranch {
        PreparedBranch::new(&Real::from_f64(self.phase, prec))
    }
}

/// A branch with its rotation e^{i phase} precomputed, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct PreparedBranch {
    pub eps: Real,
    pub rot: Cplx,
}

impl PreparedBranch {
    pub fn new(eps: &Real) -> Self {
        PreparedBranch { eps: eps.clone(), rot: Cplx::cis(eps) }
    }

    /// z e^{i phase}: the cut of this branch is where this is a negative real.
    pub fn rotate(&self, z: &Cplx) -> Cplx {
        z * &self.rot
    }

    /// Plain evaluation without error control; z must be nonzero.
    pub fn log(&self, z: &Cplx) -> Cplx {
        let w = self.rotate(z);
        Cplx::new(z.abs().ln(), w.arg() - &self.eps)
    }

    /// Argument of z in (-pi - phase, pi - phase].
    pub fn arg(&self, z: &Cplx) -> Real {
        self.rotate(z).arg() - &self.eps
    }
}

/// log^eps(z) with the error radius propagated from the input ball.
pub fn log_eps(z: &ComplexApprox, b: &BranchSpec) -> Result<ComplexApprox> {
    log_eps_prepared(z, &b.prepare(z.prec()))
}

pub fn log_eps_prepared(z: &ComplexApprox, br: &PreparedBranch) -> Result<ComplexApprox> {
    let m = z.mag();
    if z.contains_zero() {
        return Err(Error::Precision(format!("log of a ball containing 0 (|z| = {:e}, radius {:e})", m, z.rad)));
    }
    let w = br.rotate(&z.mid);
    let (wr, wi) = w.to_f64();
    // an exact point on the cut belongs to the branch (half-open interval)
    let exact_on_cut = z.rad == 0.0 && w.im.is_zero();
    let slack = z.rad + m * 2f64.powi(4 - z.prec() as i32);
    if wr < 0.0 && wi.abs() <= slack && !exact_on_cut {
        return Err(Error::OnCut(format!(
            "log branch with phase {:e}: point within {:e} of the cut",
            br.eps.to_f64(),
            wi.abs()
        )));
    }
    let mid = Cplx::new(z.mid.abs().ln(), w.arg() - &br.eps);
    let rad = z.rad / (m - z.rad) + crate::field_arith::ulp_of(&mid) * 4.0 + m.ln().abs() * 2f64.powi(-(z.prec() as i32));
    Ok(ComplexApprox::new(mid, rad))
}

/// pi as a real ball.
pub fn pi_const(precision_bits: usize) -> ComplexApprox {
    let p = Real::pi(precision_bits);
    let rad = 4.0 * 2f64.powi(2 - precision_bits as i32);
    ComplexApprox::new(Cplx::from_real(p), rad)
}

thread_local! {
    static BERNOULLI: RefCell<HashMap<usize, Rc<Vec<Real>>>> = RefCell::new(HashMap::new());
}

/// c_n = B_n/(n+1)! for n = 0..count at `prec` bits (B_1 = -1/2).
fn bernoulli_coeffs(prec: usize, count: usize) -> Rc<Vec<Real>> {
    if let Some(v) = BERNOULLI.with(|m| m.borrow().get(&prec).cloned()) {
        if v.len() >= count {
            return v;
        }
    }
    let wp = prec + GUARD;
    // a_n = B_n/n! from sum_{k<=n} a_k/(n+1-k)! = 0
    let mut inv_fact = vec![Real::one(wp)];
    for k in 1..=count + 2 {
        let prev = inv_fact[k - 1].clone();
        inv_fact.push(prev / Real::from_i64(k as i64, wp));
    }
    let mut a: Vec<Real> = vec![Real::one(wp)];
    for n in 1..=count {
        let mut s = Real::zero(wp);
        for k in 0..n {
            if k % 2 == 1 && k > 1 {
                continue;
            }
            s = s + &a[k] * &inv_fact[n + 1 - k];
        }
        a.push(-s);
    }
    let out: Vec<Real> =
        a.iter().enumerate().map(|(n, an)| (an / &Real::from_i64(n as i64 + 1, wp)).with_prec(prec)).collect();
    let rc = Rc::new(out);
    BERNOULLI.with(|m| m.borrow_mut().insert(prec, rc.clone()));
    rc
}

/// Direct series sum z^k/k^2, for |z| <= 1/2 (or a bit more).
fn li2_series(z: &Cplx) -> Cplx {
    let p = z.prec();
    let target = 2f64.powi(-(p as i32) - 4);
    let mut pw = z.clone();
    let mut acc = Cplx::zero(p);
    let za = z.abs_f64();
    for k in 1..100_000i64 {
        let kk = Real::from_i64(k * k, p);
        acc = &acc + &Cplx::new(&pw.re / &kk, &pw.im / &kk);
        if pw.abs_f64() * za / ((1.0 - za).max(1e-3) * (k * k) as f64) < target {
            break;
        }
        pw = &pw * z;
    }
    acc
}

/// sum_n B_n u^{n+1}/(n+1)!, valid for |u| < 2 pi.
fn li2_bernoulli(u: &Cplx) -> Cplx {
    let p = u.prec();
    let ua = u.abs_f64();
    let ratio = ua / (2.0 * std::f64::consts::PI);
    let need = ((p as f64 + 8.0) * std::f64::consts::LN_2 / -ratio.ln()).ceil() as usize + 4;
    let c = bernoulli_coeffs(p, need.max(8));
    let u2 = u * u;
    // u - u^2/4 + sum over even n >= 2
    let mut acc = u - &u2.scale(&Real::from_f64(0.25, p));
    let mut pw = u * &u2;
    let mut n = 2;
    while n <= need && n < c.len() {
        acc = &acc + &pw.scale(&c[n]);
        pw = &pw * &u2;
        n += 2;
    }
    acc
}

/// Principal dilogarithm on a multiprecision point. On [1, inf) the limit
/// from below the real axis is returned.
pub fn li2_cplx(z: &Cplx) -> Cplx {
    let p = z.prec();
    let wp = p + GUARD;
    let zw = z.with_prec(wp);
    li2_work(&zw).with_prec(p)
}

fn zeta2(p: usize) -> Real {
    let pi = Real::pi(p);
    &pi * &pi / Real::from_i64(6, p)
}

fn li2_work(z: &Cplx) -> Cplx {
    let p = z.prec();
    if z.is_zero() {
        return Cplx::zero(p);
    }
    let one = Cplx::one(p);
    let za = z.abs_f64();
    if za > 1.0 {
        // Li2(z) = -pi^2/6 - log^2(-z)/2 - Li2(1/z)
        let l = (-z).ln();
        let half = Real::from_f64(0.5, p);
        let inner = li2_work(&z.inv());
        return -&(&Cplx::from_real(zeta2(p)) + &(&(&l * &l).scale(&half) + &inner));
    }
    if za <= 0.5 {
        return li2_series(z);
    }
    let w = &one - z;
    if w.is_zero() {
        return Cplx::from_real(zeta2(p));
    }
    if w.abs_f64() <= 0.5 {
        // reflection: Li2(z) = pi^2/6 - log z log(1-z) - Li2(1-z)
        let prod = &z.ln() * &w.ln();
        return &(&Cplx::from_real(zeta2(p)) - &prod) - &li2_series(&w);
    }
    li2_bernoulli(&(-w.ln()))
}

/// Li2 on a ball; the radius combines the input radius through |Li2'| and
/// the evaluation error.
pub fn li2(z: &ComplexApprox) -> ComplexApprox {
    let mid = li2_cplx(&z.mid);
    let mut rad = crate::field_arith::ulp_of(&mid) * 16.0 + 2f64.powi(4 - z.prec() as i32);
    if z.rad > 0.0 {
        let za = z.mag();
        let d = ((&Cplx::one(z.prec()) - &z.mid).abs_f64() - z.rad).max(1e-300);
        let deriv = if za + z.rad <= 0.5 {
            2.0
        } else {
            (d.ln().abs() + (za + z.rad).ln().abs() + 2.0 * std::f64::consts::PI) / (za - z.rad).max(1e-300)
        };
        rad += z.rad * deriv;
    }
    ComplexApprox::new(mid, rad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: usize = 128;

    fn c(re: f64, im: f64) -> ComplexApprox {
        ComplexApprox::exact(Cplx::from_f64(re, im, P))
    }

    fn close(a: &Cplx, re: f64, im: f64, tol: f64) -> bool {
        let (x, y) = a.to_f64();
        (x - re).abs() < tol && (y - im).abs() < tol
    }

    #[test]
    fn log_eps_examples() {
        let pi = std::f64::consts::PI;
        assert!(close(&log_eps(&c(1.0, 0.0), &BranchSpec::new(0.3)).unwrap().mid, 0.0, 0.0, 1e-30));
        assert!(close(&log_eps(&c(-1.0, 0.0), &BranchSpec::new(0.1)).unwrap().mid, 0.0, -pi, 1e-15));
        assert!(close(&log_eps(&c(-1.0, 0.0), &BranchSpec::principal()).unwrap().mid, 0.0, pi, 1e-15));
        assert!(log_eps(&ComplexApprox::new(Cplx::from_f64(1e-30, 0.0, P), 1e-20), &BranchSpec::principal()).is_err());
        // a fuzzy point on the cut is refused
        let fuzzy = ComplexApprox::new(Cplx::from_f64(-1.0, 1e-25, P), 1e-20);
        assert!(matches!(log_eps(&fuzzy, &BranchSpec::principal()), Err(Error::OnCut(_))));
    }

    #[test]
    fn li2_special_values() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(close(&li2(&c(1.0, 0.0)).mid, pi2 / 6.0, 0.0, 1e-15));
        assert!(li2(&c(0.0, 0.0)).mid.is_zero());
        assert!(close(&li2(&c(-1.0, 0.0)).mid, -pi2 / 12.0, 0.0, 1e-15));
        // Li2(1/2) = pi^2/12 - log^2(2)/2
        let l2 = std::f64::consts::LN_2;
        assert!(close(&li2(&c(0.5, 0.0)).mid, pi2 / 12.0 - l2 * l2 / 2.0, 0.0, 1e-15));
        // Li2(2) = pi^2/4 - i pi log 2 (limit from below)
        assert!(close(&li2(&c(2.0, 0.0)).mid, pi2 / 4.0, -std::f64::consts::PI * l2, 1e-14));
    }

    #[test]
    fn li2_one_over_pi_squared() {
        let p = 256;
        let one = ComplexApprox::exact(Cplx::one(p));
        let v = li2(&one).mid.re;
        let pi = Real::pi(p);
        let q = &v / &(&pi * &pi);
        let sixth = Real::one(p) / Real::from_i64(6, p);
        assert!((q - sixth).abs().to_f64() < 1e-70);
    }

    #[test]
    fn li2_on_unit_circle() {
        // Re Li2(e^{i th}) = pi^2/6 - th(2 pi - th)/4
        let p = 256;
        for k in 1..12 {
            let th = Real::from_i64(k, p) * Real::pi(p) / Real::from_i64(6, p);
            let z = ComplexApprox::exact(Cplx::cis(&th));
            let v = li2(&z).mid.re;
            let two_pi = Real::pi(p).ldexp(1);
            let want = zeta2(p) - &th * &(&two_pi - &th) / Real::from_i64(4, p);
            assert!((v - want).abs().to_f64() < 1e-70, "k = {}", k);
        }
    }

    #[test]
    fn pi_agrees_across_precisions() {
        assert_eq!(pi_const(53).mid.re.to_f64(), std::f64::consts::PI);
        let a = pi_const(256).mid.re;
        let b = pi_const(128).mid.re.with_prec(256);
        assert!((a - b).abs().to_f64() < 2f64.powi(-126));
    }

    fn unit_disk_point() -> impl Strategy<Value = (f64, f64)> {
        (0.0f64..0.999, -3.14159f64..3.14159).prop_map(|(r, th)| (r * th.cos(), r * th.sin()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn reflection_identity((x, y) in unit_disk_point()) {
            prop_assume!((x - 1.0).hypot(y) > 1e-3 && x.hypot(y) > 1e-3);
            prop_assume!(y.abs() > 1e-9 || x > 0.0);
            let z = c(x, y);
            let w = ComplexApprox::exact(&Cplx::one(P) - &z.mid);
            let lhs = &li2(&z) + &li2(&w);
            let lz = log_eps(&z, &BranchSpec::principal()).unwrap();
            let lw = log_eps(&w, &BranchSpec::principal()).unwrap();
            let rhs = &ComplexApprox::exact(Cplx::from_real(zeta2(P))) - &(&lz * &lw);
            prop_assert!(lhs.overlaps(&rhs), "{:?} vs {:?}", lhs, rhs);
        }

        #[test]
        fn inversion_identity(r in 1.001f64..50.0, th in -3.14f64..3.14) {
            prop_assume!(th.abs() > 1e-6);
            let z = c(r * th.cos(), r * th.sin());
            let zi = ComplexApprox::exact(z.mid.inv());
            let lhs = &li2(&z) + &li2(&zi);
            let lm = log_eps(&c(-r * th.cos(), -r * th.sin()), &BranchSpec::principal()).unwrap();
            let half = ComplexApprox::exact(Cplx::from_f64(0.5, 0.0, P));
            let rhs = &(&ComplexApprox::exact(Cplx::from_real(-zeta2(P))) - &(&half * &(&lm * &lm))).inflate(1e-35);
            prop_assert!(lhs.overlaps(&rhs), "{:?} vs {:?}", lhs, rhs);
        }

        #[test]
        fn log_branches_differ_by_lattice((x, y) in unit_disk_point(), e1 in 0.0f64..0.5, e2 in 0.0f64..0.5) {
            let z = c(x, y);
            prop_assume!(x.hypot(y) > 1e-6);
            let a = log_eps(&z, &BranchSpec::new(e1));
            let b = log_eps(&z, &BranchSpec::new(e2));
            if let (Ok(a), Ok(b)) = (a, b) {
                let d = &a - &b;
                let (re, im) = d.to_f64();
                let k = (im / (2.0 * std::f64::consts::PI)).round();
                prop_assert!(re.abs() < 1e-30);
                prop_assert!(k.abs() <= 1.0 && (im - 2.0 * std::f64::consts::PI * k).abs() < 1e-30);
            }
        }
    }
}
