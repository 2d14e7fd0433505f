use crate::error::{Error, Result};
use crate::field_arith::{CyclotomicNumber as K, Rational};
use std::fmt;

/// Dense univariate polynomial over Q(zeta_N), lowest degree first.
///
/// The coefficient vector is trimmed so the last entry is nonzero; the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    order: u32,
    coeffs: Vec<K>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mon = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "({})", c)?;
            } else if c.is_one() {
                write!(f, "{}", mon)?;
            } else {
                write!(f, "({})*{}", c, mon)?;
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(order: u32, mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.order() == order));
        Poly { order, coeffs }
    }

    pub fn zero(order: u32) -> Self {
        Poly { order, coeffs: vec![] }
    }

    pub fn constant(c: K) -> Self {
        let n = c.order();
        Poly::new(n, vec![c])
    }

    pub fn one(order: u32) -> Self {
        Poly::constant(K::one(order))
    }

    /// The identity polynomial t.
    pub fn t(order: u32) -> Self {
        Poly::new(order, vec![K::zero(order), K::one(order)])
    }

    /// t - a
    pub fn linear(a: &K) -> Self {
        Poly::new(a.order(), vec![-a, K::one(a.order())])
    }

    pub fn from_ints(order: u32, c: &[i64]) -> Self {
        Poly::new(order, c.iter().map(|&x| K::from_int(x, order)).collect())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(|| K::zero(self.order))
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(|| K::zero(self.order))
    }

    pub fn scale(&self, c: &K) -> Poly {
        Poly::new(self.order, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.order, self.coeffs.iter().map(|x| -x).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.order, (0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.order, (0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.order);
        }
        let mut r = vec![K::zero(self.order); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = &r[i + j] + &(a * b);
                }
            }
        }
        Poly::new(self.order, r)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(self.order), self.clone()));
        }
        let inv_lead = d.lead().inv()?;
        let mut r = self.coeffs.clone();
        let mut q = vec![K::zero(self.order); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv_lead;
            if !c.is_zero() {
                for j in 0..=dd {
                    r[k + j] = &r[k + j] - &(&c * &d.coeffs[j]);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(self.order, q), Poly::new(self.order, r)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Invalid(format!("{} does not divide {}", d, self)));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero lead");
        self.scale(&inv)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.order);
        }
        Poly::new(
            self.order,
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &K::from_int(k as i64, self.order)).collect(),
        )
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero(self.order);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// p(g) for a polynomial g.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(self.order);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Yun's algorithm: returns (c, [(q_1, 1), (q_2, 2), ...]) with self = c * prod q_k^k,
    /// each q_k monic, squarefree and pairwise coprime; trivial factors omitted.
    pub fn squarefree_decomposition(&self) -> (K, Vec<(Poly, u32)>) {
        let c = self.lead();
        if self.is_constant() {
            return (c, vec![]);
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let c1 = df.exact_div(&a0).expect("gcd divides");
        let mut d = c1.sub(&b.derivative());
        let mut out = vec![];
        let mut k = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.exact_div(&a).expect("gcd divides");
            let c = d.exact_div(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            if !a.is_constant() {
                out.push((a, k));
            }
            k += 1;
        }
        (c, out)
    }

    /// Squarefree part (monic).
    pub fn squarefree_part(&self) -> Poly {
        let (_, fs) = self.squarefree_decomposition();
        fs.iter().fold(Poly::one(self.order), |acc, (q, _)| acc.mul(q))
    }

    pub fn promote(&self, m: u32) -> Result<Poly> {
        Ok(Poly::new(m, self.coeffs.iter().map(|c| c.promote(m)).collect::<Result<_>>()?))
    }

    /// Apply zeta -> zeta^a to every coefficient.
    pub fn galois(&self, a: i64) -> Poly {
        Poly::new(self.order, self.coeffs.iter().map(|c| c.galois(a)).collect())
    }

    /// Some(coefficients) when all coefficients are rational.
    pub fn as_rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn has_zero_constant_term(&self) -> bool {
        self.coeffs.first().map_or(true, |c| c.is_zero())
    }

    /// Number of leading zero coefficients, i.e. the order of vanishing at t = 0.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }
}
