//! Polynomials and rational functions over Q(zeta_N), divisors on P^1 and
//! the numeric images used by the analytic code.

mod divisor;
mod numeric;
mod poly;
mod rational;
mod roots;

pub use divisor::{divisor, eval_at, fiber, poly_zeros, split_roots, DivisorPoint, Location};
pub use numeric::{NumPoly, NumRational};
pub use poly::Poly;
pub use rational::{join_coordinates, rf_arith, RationalFunction, RfOp};
pub use roots::{aberth, disks_disjoint, inclusion_radii, newton_polish, roots_numeric, squarefree_roots, AlgebraicRoot};

use crate::field_arith::{embed, ComplexApprox, CyclotomicNumber};
use std::fmt;

/// A point of P^1: exact element of k, infinity, or a complex ball.
#[derive(Clone, Debug, PartialEq)]
pub enum P1Point {
    Exact(CyclotomicNumber),
    Infinity,
    Approx(ComplexApprox),
}

impl P1Point {
    pub fn is_zero(&self) -> bool {
        matches!(self, P1Point::Exact(a) if a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, P1Point::Exact(a) if a.is_one())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, P1Point::Infinity)
    }

    /// True for the two facet values 0 and infinity.
    pub fn is_facet_value(&self) -> bool {
        self.is_zero() || self.is_infinity()
    }

    pub fn to_approx(&self, prec: usize) -> Option<ComplexApprox> {
        match self {
            P1Point::Exact(a) => Some(embed(a, prec)),
            P1Point::Infinity => None,
            P1Point::Approx(z) => Some(z.clone()),
        }
    }

    /// Same point: exact comparison when both exact, ball overlap otherwise.
    pub fn matches(&self, other: &P1Point, prec: usize) -> bool {
        match (self, other) {
            (P1Point::Exact(a), P1Point::Exact(b)) => a == b,
            (P1Point::Infinity, P1Point::Infinity) => true,
            (P1Point::Infinity, _) | (_, P1Point::Infinity) => false,
            (a, b) => a.to_approx(prec).unwrap().overlaps(&b.to_approx(prec).unwrap()),
        }
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Exact(a) => write!(f, "{}", a),
            P1Point::Infinity => write!(f, "inf"),
            P1Point::Approx(z) => {
                let (x, y) = z.to_f64();
                write!(f, "~({:.12} {:+.12}i)", x, y)
            }
        }
    }
}
