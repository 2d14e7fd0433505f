//! Simultaneous (Aberth-Ehrlich) root refinement with Weierstrass inclusion radii.

use super::numeric::NumPoly;
use super::Poly;
use crate::error::{Error, Result};
use crate::field_arith::ComplexApprox;
use crate::mp::Cplx;

const LOW_PREC: usize = 64;

fn initial_guesses(p: &NumPoly, prec: usize) -> Vec<Cplx> {
    let n = p.degree();
    let cn = p.c[n].abs_f64();
    let mut r: f64 = 0.0;
    for k in 0..n {
        let ck = p.c[k].abs_f64();
        if ck > 0.0 {
            r = r.max((ck / cn).powf(1.0 / (n - k) as f64));
        }
    }
    let r = if r > 0.0 { r } else { 1.0 };
    let (cr, ci) = (&p.c[n - 1] / &p.c[n]).to_f64();
    let (cr, ci) = (-cr / n as f64, -ci / n as f64);
    (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Cplx::from_f64(cr + r * th.cos(), ci + r * th.sin(), prec)
        })
        .collect()
}

fn aberth_pass(p: &NumPoly, dp: &NumPoly, z: &mut [Cplx]) -> f64 {
    let n = z.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let v = p.eval(&z[i]);
        if v.is_zero() {
            continue;
        }
        let d = dp.eval(&z[i]);
        let w = &v / &d;
        let mut s = Cplx::zero(z[i].prec());
        for j in 0..n {
            if j != i {
                let diff = &z[i] - &z[j];
                if !diff.is_zero() {
                    s = &s + &diff.inv();
                }
            }
        }
        let one = Cplx::one(z[i].prec());
        let den = &one - &(&w * &s);
        let corr = if den.is_zero() { w } else { &w / &den };
        let rel = corr.abs_f64() / (1.0 + z[i].abs_f64());
        worst = worst.max(rel);
        z[i] = &z[i] - &corr;
    }
    worst
}

/// All roots of a numeric polynomial, refined to `prec` bits. `start` may supply
/// initial approximations (one per root).
pub fn aberth(p: &NumPoly, prec: usize, start: Option<Vec<Cplx>>) -> Result<Vec<Cplx>> {
    let n = p.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![-(&p.c[0] / &p.c[1])]);
    }
    let lowp = NumPoly::from_cplx(p.c.iter().map(|c| c.with_prec(LOW_PREC)).collect());
    let mut z = match start {
        Some(s) => s.into_iter().map(|x| x.with_prec(LOW_PREC)).collect(),
        None => initial_guesses(&lowp, LOW_PREC),
    };
    let dlow = lowp.derivative();
    // a stalled low-precision phase is caught by the full-precision passes
    for _ in 0..600 {
        if aberth_pass(&lowp, &dlow, &mut z) < 1e-15 {
            break;
        }
    }
    let dp = p.derivative();
    let mut z: Vec<Cplx> = z.into_iter().map(|x| x.with_prec(prec)).collect();
    let target = 2f64.powi(8 - prec as i32);
    for _ in 0..60 {
        let w = aberth_pass(p, &dp, &mut z);
        if w < target {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence(format!(
        "Aberth iteration for degree {} at {} bits did not settle",
        n, prec
    )))
}

/// Weierstrass inclusion radii: the disk around z_i with this radius contains
/// a root, and disjoint disks contain exactly one root each.
pub fn inclusion_radii(p: &NumPoly, z: &[Cplx]) -> Vec<f64> {
    let n = z.len();
    let lead = p.c[n].abs_f64();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = p.eval(&z[i]);
        let err = p.eval_error(z[i].abs_f64(), v.abs_f64());
        let mut prod = lead;
        for j in 0..n {
            if j != i {
                prod *= (&z[i] - &z[j]).abs_f64();
            }
        }
        let w = if prod > 0.0 { (v.abs_f64() + err) / prod } else { f64::INFINITY };
        out.push((n as f64 * w) * (1.0 + 1e-9) + z[i].abs_f64() * 2f64.powi(2 - z[i].prec() as i32));
    }
    out
}

pub fn disks_disjoint(z: &[Cplx], r: &[f64]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (&z[i] - &z[j]).abs_f64() <= r[i] + r[j] {
                return false;
            }
        }
    }
    true
}

/// Certified roots of a squarefree polynomial (exact coefficients), sorted by (re, im).
pub fn squarefree_roots(q: &Poly, prec: usize) -> Result<Vec<ComplexApprox>> {
    let mut p = prec;
    for _ in 0..3 {
        let np = NumPoly::from_poly(q, p);
        let z = aberth(&np, p, None)?;
        let r = inclusion_radii(&np, &z);
        if disks_disjoint(&z, &r) && r.iter().all(|x| x.is_finite()) {
            let mut out: Vec<ComplexApprox> =
                z.into_iter().zip(r).map(|(m, r)| ComplexApprox::new(m.with_prec(prec), r)).collect();
            sort_balls(&mut out);
            return Ok(out);
        }
        p *= 2;
    }
    Err(Error::NonConvergence(format!("could not separate the roots of {} at {} bits", q, p)))
}

pub(crate) fn sort_balls(v: &mut [ComplexApprox]) {
    v.sort_by(|a, b| {
        let (ar, ai) = a.to_f64();
        let (br, bi) = b.to_f64();
        ar.partial_cmp(&br).unwrap_or(std::cmp::Ordering::Equal).then(ai.partial_cmp(&bi).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// All complex roots of `p` with multiplicities from the exact squarefree decomposition.
pub fn roots_numeric(p: &Poly, precision_bits: usize) -> Result<Vec<(ComplexApprox, u32)>> {
    if p.is_zero() {
        return Err(Error::Invalid("roots of the zero polynomial".into()));
    }
    let (_, factors) = p.squarefree_decomposition();
    let mut out = vec![];
    for (q, m) in factors {
        for r in squarefree_roots(&q, precision_bits)? {
            out.push((r, m));
        }
    }
    Ok(out)
}

/// A root of an exact squarefree polynomial, known by an isolating ball.
#[derive(Clone, Debug)]
pub struct AlgebraicRoot {
    pub approx: ComplexApprox,
    /// monic squarefree polynomial over k vanishing at the root
    pub poly: Poly,
}

impl AlgebraicRoot {
    /// Same root with an isolating ball at `prec` bits.
    pub fn refine(&self, prec: usize) -> Result<AlgebraicRoot> {
        let all = squarefree_roots(&self.poly, prec)?;
        let best = all
            .into_iter()
            .min_by(|a, b| a.dist(&self.approx).partial_cmp(&b.dist(&self.approx)).unwrap())
            .ok_or_else(|| Error::Invalid("empty root set".into()))?;
        Ok(AlgebraicRoot { approx: best, poly: self.poly.clone() })
    }

    /// Exact decision whether this root is also a root of `g`.
    pub fn is_root_of(&self, g: &Poly) -> Result<bool> {
        if g.is_zero() {
            return Ok(true);
        }
        let h = g.gcd(&self.poly);
        if h.is_constant() {
            return Ok(false);
        }
        if h == self.poly {
            return Ok(true);
        }
        let rest = self.poly.exact_div(&h)?;
        let mut cur = self.clone();
        let mut prec = self.approx.prec().max(128);
        for _ in 0..4 {
            let hv = NumPoly::from_poly(&h, prec).eval_ball(&cur.approx);
            let rv = NumPoly::from_poly(&rest, prec).eval_ball(&cur.approx);
            match (hv.contains_zero(), rv.contains_zero()) {
                (true, false) => return Ok(true),
                (false, true) => return Ok(false),
                _ => {}
            }
            prec *= 2;
            cur = cur.refine(prec)?;
        }
        Err(Error::Undecided(format!("membership of a root of {} in the zero set of {}", self.poly, g)))
    }
}

/// Plain Newton polishing of a simple root.
pub fn newton_polish(p: &NumPoly, z: &Cplx, iters: usize) -> Cplx {
    let mut x = z.clone();
    for _ in 0..iters {
        let (v, d) = p.eval_d(&x);
        if d.is_zero() {
            break;
        }
        x = &x - &(&v / &d);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_arith::CyclotomicNumber;

    #[test]
    fn simple_quadratics() {
        let p = Poly::from_ints(1, &[-1, 0, 1]);
        let r = roots_numeric(&p, 128).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0.to_f64().0 + 1.0).abs() < 1e-30 && r[0].1 == 1);
        assert!((r[1].0.to_f64().0 - 1.0).abs() < 1e-30);
        let sq = Poly::from_ints(1, &[4, -4, 1]);
        let r = roots_numeric(&sq, 128).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 2);
        assert!((r[0].0.to_f64().0 - 2.0).abs() < 1e-30);
    }

    #[test]
    fn golden_ratio_roots() {
        let p = Poly::from_ints(1, &[-1, -1, 1]);
        let r = roots_numeric(&p, 256).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r[0].0.to_f64().0 - (1.0 - phi)).abs() < 1e-15);
        assert!((r[1].0.to_f64().0 - phi).abs() < 1e-15);
        assert!(r[1].0.rad < 1e-60);
    }

    #[test]
    fn cyclotomic_coefficients() {
        // t^2 - zeta_5 has roots +- e^{pi i/5}
        let z = CyclotomicNumber::zeta(5);
        let p = Poly::new(5, vec![-&z, CyclotomicNumber::zero(5), CyclotomicNumber::one(5)]);
        let r = roots_numeric(&p, 128).unwrap();
        let a = std::f64::consts::PI / 5.0;
        assert!(r.iter().any(|(x, _)| (x.to_f64().0 - a.cos()).abs() < 1e-14 && (x.to_f64().1 - a.sin()).abs() < 1e-14));
    }

    #[test]
    fn root_membership() {
        // roots of t^2 - 2, test against t - ... via gcd with t^2-2 itself and with t^3 - 2t
        let q = Poly::from_ints(1, &[-2, 0, 1]);
        let roots = squarefree_roots(&q, 128).unwrap();
        let ar = AlgebraicRoot { approx: roots[1].clone(), poly: q.clone() };
        assert!(ar.is_root_of(&Poly::from_ints(1, &[0, -2, 0, 1])).unwrap());
        assert!(!ar.is_root_of(&Poly::from_ints(1, &[-3, 0, 1])).unwrap());
        // (t^2-2)(t-5): membership needs a numeric decision against a split gcd
        let q2 = q.mul(&Poly::from_ints(1, &[-5, 1]));
        let roots2 = squarefree_roots(&q2, 128).unwrap();
        let five = AlgebraicRoot { approx: roots2[2].clone(), poly: q2.clone() };
        assert!(five.is_root_of(&Poly::from_ints(1, &[-5, 1])).unwrap());
        let sqrt2 = AlgebraicRoot { approx: roots2[1].clone(), poly: q2 };
        assert!(!sqrt2.is_root_of(&Poly::from_ints(1, &[-5, 1])).unwrap());
    }
}
