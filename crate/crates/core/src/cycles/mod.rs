//! Cubical precycles made of rationally parametrized curves or points in
//! (P^1 - {1})^n: face properness, facet restrictions, the Bloch differential,
//! degeneracy and the normalization operator.

mod faces;
mod normalize;

pub use faces::{double_boundary_symbolic, face_of, Face, FacetLabel};
pub use normalize::normalize;

use crate::error::{Error, Result};
use crate::field_arith::CyclotomicNumber as K;
use crate::func_field::{eval_at, fiber, Location, P1Point, RationalFunction};
use indexmap_lite::OrderedGroups;
use std::fmt;

/// Facet value of a cube coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Facet {
    Zero,
    Infinity,
}

impl Facet {
    pub fn sign(self) -> i64 {
        match self {
            Facet::Zero => 1,
            Facet::Infinity => -1,
        }
    }

    pub fn both() -> [Facet; 2] {
        [Facet::Zero, Facet::Infinity]
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Facet::Zero => write!(f, "0"),
            Facet::Infinity => write!(f, "inf"),
        }
    }
}

/// t -> (f_1(t), ..., f_n(t)) with a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveComponent {
    pub coords: Vec<RationalFunction>,
    pub mult: i64,
}

impl CurveComponent {
    pub fn new(coords: Vec<RationalFunction>, mult: i64) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("a curve component needs at least one coordinate".into()));
        }
        let n = coords[0].order();
        for (i, f) in coords.iter().enumerate() {
            if f.order() != n {
                return Err(Error::OrderMismatch(n, f.order()));
            }
            if f.is_one() {
                return Err(Error::Invalid(format!("coordinate {} is identically 1", i + 1)));
            }
            if f.is_zero() {
                return Err(Error::Invalid(format!("coordinate {} is identically 0", i + 1)));
            }
        }
        if coords.iter().all(|f| f.is_constant()) {
            return Err(Error::Invalid("all coordinates are constant".into()));
        }
        if mult == 0 {
            return Err(Error::Invalid("zero multiplicity".into()));
        }
        Ok(CurveComponent { coords, mult })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn order(&self) -> u32 {
        self.coords[0].order()
    }

    /// A full fiber of a coordinate projection: one nonconstant coordinate, of degree 1.
    pub fn is_degenerate(&self) -> bool {
        let nonconst: Vec<_> = self.coords.iter().filter(|f| !f.is_constant()).collect();
        nonconst.len() == 1 && nonconst[0].degree() == 1
    }
}

impl fmt::Display for CurveComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}*({})", self.mult, parts.join(", "))
    }
}

/// A point of the cube with a multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct PointComponent {
    pub coords: Vec<P1Point>,
    pub mult: i64,
}

impl PointComponent {
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    fn matches(&self, other: &PointComponent, prec: usize) -> bool {
        self.coords.len() == other.coords.len() && self.coords.iter().zip(&other.coords).all(|(a, b)| a.matches(b, prec))
    }

    /// Close but not provably equal or distinct at this precision.
    fn ambiguous_with(&self, other: &PointComponent, prec: usize) -> bool {
        if self.coords.len() != other.coords.len() {
            return false;
        }
        let near = 2f64.powi(-(prec as i32) / 8);
        let mut any_unsure = false;
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match (a, b) {
                (P1Point::Exact(x), P1Point::Exact(y)) => {
                    if x != y {
                        return false;
                    }
                }
                (P1Point::Infinity, P1Point::Infinity) => {}
                (P1Point::Infinity, _) | (_, P1Point::Infinity) => return false,
                _ => {
                    let (x, y) = (a.to_approx(prec).unwrap(), b.to_approx(prec).unwrap());
                    if x.dist(&y) > near + x.rad + y.rad {
                        return false;
                    }
                    any_unsure = true;
                }
            }
        }
        any_unsure
    }

    /// Exact coordinates, if all are exact field elements.
    pub fn exact_coords(&self) -> Option<Vec<K>> {
        self.coords
            .iter()
            .map(|c| match c {
                P1Point::Exact(a) => Some(a.clone()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for PointComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}*[{}]", self.mult, parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Components {
    Curves(Vec<CurveComponent>),
    Points(Vec<PointComponent>),
}

/// A formal integer combination of components in the n-cube, codimension p.
#[derive(Clone, Debug, PartialEq)]
pub struct Precycle {
    pub n: usize,
    pub p: usize,
    pub order: u32,
    pub components: Components,
}

impl Precycle {
    pub fn curves(n: usize, p: usize, order: u32, comps: Vec<CurveComponent>) -> Result<Self> {
        if n != p + 1 {
            return Err(Error::Invalid(format!("curve level needs n - p = 1, got n={} p={}", n, p)));
        }
        for c in &comps {
            if c.n() != n {
                return Err(Error::Invalid(format!("component has {} coordinates, expected {}", c.n(), n)));
            }
            if c.order() != order {
                return Err(Error::OrderMismatch(order, c.order()));
            }
        }
        let mut z = Precycle { n, p, order, components: Components::Curves(comps) };
        z.reduce_curves();
        Ok(z)
    }

    pub fn points(n: usize, p: usize, order: u32, comps: Vec<PointComponent>, prec: usize) -> Result<Self> {
        if n != p {
            return Err(Error::Invalid(format!("point level needs n = p, got n={} p={}", n, p)));
        }
        for c in &comps {
            if c.n() != n {
                return Err(Error::Invalid(format!("point has {} coordinates, expected {}", c.n(), n)));
            }
            if c.coords.iter().any(|x| x.is_one()) {
                return Err(Error::Invalid("point with a coordinate equal to 1".into()));
            }
        }
        Ok(Precycle { n, p, order, components: Components::Points(reduce_points(comps, prec)) })
    }

    pub fn empty_curves(n: usize, order: u32) -> Self {
        Precycle { n, p: n.saturating_sub(1), order, components: Components::Curves(vec![]) }
    }

    pub fn is_empty(&self) -> bool {
        match &self.components {
            Components::Curves(c) => c.is_empty(),
            Components::Points(c) => c.is_empty(),
        }
    }

    pub fn curve_components(&self) -> Result<&[CurveComponent]> {
        match &self.components {
            Components::Curves(c) => Ok(c),
            Components::Points(_) => Err(Error::Invalid("expected a curve-level precycle".into())),
        }
    }

    pub fn point_components(&self) -> Result<&[PointComponent]> {
        match &self.components {
            Components::Points(c) => Ok(c),
            Components::Curves(_) => Err(Error::Invalid("expected a point-level precycle".into())),
        }
    }

    fn reduce_curves(&mut self) {
        if let Components::Curves(c) = &mut self.components {
            let mut g = OrderedGroups::default();
            for comp in c.drain(..) {
                g.add(comp.coords, comp.mult);
            }
            *c = g.into_iter().map(|(coords, mult)| CurveComponent { coords, mult }).collect();
        }
    }

    /// Sum with another curve-level precycle of the same shape.
    pub fn add(&self, other: &Precycle) -> Result<Precycle> {
        let (a, b) = (self.curve_components()?, other.curve_components()?);
        if self.n != other.n || self.order != other.order {
            return Err(Error::Invalid("adding precycles of different shape".into()));
        }
        let mut all = a.to_vec();
        all.extend_from_slice(b);
        Precycle::curves(self.n, self.p, self.order, all)
    }

    pub fn scale(&self, k: i64) -> Precycle {
        let mut z = self.clone();
        match &mut z.components {
            Components::Curves(c) => {
                c.iter_mut().for_each(|x| x.mult *= k);
                c.retain(|x| x.mult != 0);
            }
            Components::Points(c) => {
                c.iter_mut().for_each(|x| x.mult *= k);
                c.retain(|x| x.mult != 0);
            }
        }
        z
    }

    /// Copy without degenerate components.
    pub fn drop_degenerate(&self) -> Precycle {
        let mut z = self.clone();
        if let Components::Curves(c) = &mut z.components {
            c.retain(|x| !x.is_degenerate());
        }
        z
    }
}

mod indexmap_lite {
    use crate::func_field::RationalFunction;

    /// Insertion-ordered multiplicity accumulator for curve components.
    #[derive(Default)]
    pub struct OrderedGroups {
        keys: Vec<Vec<RationalFunction>>,
        mults: Vec<i64>,
        index: std::collections::HashMap<Vec<RationalFunction>, usize>,
    }

    impl OrderedGroups {
        pub fn add(&mut self, k: Vec<RationalFunction>, m: i64) {
            if let Some(&i) = self.index.get(&k) {
                self.mults[i] += m;
            } else {
                self.index.insert(k.clone(), self.keys.len());
                self.keys.push(k);
                self.mults.push(m);
            }
        }

        pub fn into_iter(self) -> impl Iterator<Item = (Vec<RationalFunction>, i64)> {
            self.keys.into_iter().zip(self.mults).filter(|(_, m)| *m != 0)
        }
    }
}

/// Merges matching points (exact equality, ball overlap otherwise) and drops zeros.
pub fn reduce_points(pts: Vec<PointComponent>, prec: usize) -> Vec<PointComponent> {
    let mut out: Vec<PointComponent> = vec![];
    for p in pts {
        if let Some(e) = out.iter_mut().find(|e| e.matches(&p, prec)) {
            e.mult += p.mult;
        } else {
            out.push(p);
        }
    }
    out.retain(|p| p.mult != 0);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub component: usize,
    pub t: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProperReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// All parameter values where some coordinate lies on a facet, without repeats.
fn facet_parameters(c: &CurveComponent, prec: usize) -> Result<Vec<Location>> {
    let mut out: Vec<Location> = vec![];
    for f in &c.coords {
        for poles in [false, true] {
            for (loc, _) in fiber(f, poles, prec)? {
                if !out.iter().any(|l| l.same_point(&loc)) {
                    out.push(loc);
                }
            }
        }
    }
    Ok(out)
}

pub fn check_face_proper(z: &Precycle, prec: usize) -> Result<ProperReport> {
    let comps = z.curve_components()?;
    let mut violations = vec![];
    for (ci, c) in comps.iter().enumerate() {
        for loc in facet_parameters(c, prec)? {
            let vals: Vec<P1Point> = c.coords.iter().map(|f| eval_at(f, &loc, prec)).collect::<Result<_>>()?;
            let on_facet = vals.iter().filter(|v| v.is_facet_value()).count();
            if on_facet >= 2 && !vals.iter().any(|v| v.is_one()) {
                violations.push(Violation {
                    component: ci,
                    t: loc.to_string(),
                    values: vals.iter().map(|v| v.to_string()).collect(),
                });
            }
        }
    }
    Ok(ProperReport { ok: violations.is_empty(), violations })
}

/// Unsigned facet restriction rho_i^{v*} (i is 1-based), unreduced.
fn facet_points(z: &Precycle, i: usize, v: Facet, prec: usize) -> Result<Vec<PointComponent>> {
    let mut out = vec![];
    match &z.components {
        Components::Curves(comps) => {
            for c in comps {
                let f = &c.coords[i - 1];
                for (loc, m) in fiber(f, v == Facet::Infinity, prec)? {
                    let mut vals = Vec::with_capacity(c.n() - 1);
                    for (j, g) in c.coords.iter().enumerate() {
                        if j != i - 1 {
                            vals.push(eval_at(g, &loc, prec)?);
                        }
                    }
                    if vals.iter().any(|x| x.is_one()) {
                        continue;
                    }
                    if vals.iter().any(|x| x.is_facet_value()) {
                        return Err(Error::Improper(format!("facet z{}={} at t={} meets another facet", i, v, loc)));
                    }
                    out.push(PointComponent { coords: vals, mult: c.mult * m as i64 });
                }
            }
        }
        Components::Points(pts) => {
            for pt in pts {
                let hit = match v {
                    Facet::Zero => pt.coords[i - 1].is_zero(),
                    Facet::Infinity => pt.coords[i - 1].is_infinity(),
                };
                if hit {
                    let mut vals = pt.coords.clone();
                    vals.remove(i - 1);
                    out.push(PointComponent { coords: vals, mult: pt.mult });
                }
            }
        }
    }
    Ok(out)
}

/// The facet restriction as a reduced point-level precycle in the (n-1)-cube.
pub fn facet(z: &Precycle, i: usize, v: Facet, prec: usize) -> Result<Precycle> {
    if i == 0 || i > z.n {
        return Err(Error::Invalid(format!("facet index {} out of range 1..={}", i, z.n)));
    }
    let pts = facet_points(z, i, v, prec)?;
    let p = match z.components {
        Components::Curves(_) => z.p,
        Components::Points(_) => z.p.saturating_sub(1),
    };
    Ok(Precycle { n: z.n - 1, p, order: z.order, components: Components::Points(reduce_points(pts, prec)) })
}

fn boundary_points(z: &Precycle, prec: usize) -> Result<Vec<PointComponent>> {
    let mut all = vec![];
    for i in 1..=z.n {
        let s = if i % 2 == 0 { 1 } else { -1 };
        for v in Facet::both() {
            for mut p in facet_points(z, i, v, prec)? {
                p.mult *= s * v.sign();
                all.push(p);
            }
        }
    }
    Ok(all)
}

/// Bloch differential sum_i (-1)^i (d^0_i - d^inf_i).
pub fn boundary(z: &Precycle, prec: usize) -> Result<Precycle> {
    let pts = boundary_points(z, prec)?;
    let p = match z.components {
        Components::Curves(_) => z.p,
        Components::Points(_) => z.p.saturating_sub(1),
    };
    Ok(Precycle { n: z.n.saturating_sub(1), p, order: z.order, components: Components::Points(reduce_points(pts, prec)) })
}

/// Decides whether a point combination vanishes, doubling the precision twice
/// when cancellation is unclear.
fn vanishes_with_escalation(compute: impl Fn(usize) -> Result<Vec<PointComponent>>, prec: usize, what: &str) -> Result<bool> {
    let mut p = prec;
    for _ in 0..3 {
        let pts = reduce_points(compute(p)?, p);
        if pts.is_empty() {
            return Ok(true);
        }
        let unsure = pts.iter().enumerate().any(|(a, x)| pts.iter().skip(a + 1).any(|y| x.ambiguous_with(y, p)));
        if !unsure {
            return Ok(false);
        }
        p *= 2;
    }
    Err(Error::Undecided(format!("{}: numeric points neither cancel nor separate at {} bits", what, p / 2)))
}

pub fn is_closed(z: &Precycle, prec: usize) -> Result<bool> {
    z.curve_components()?;
    vanishes_with_escalation(|p| boundary_points(z, p), prec, "boundary")
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacetEntry {
    pub i: usize,
    pub v: Facet,
    pub vanishes: bool,
}

pub fn face_vanishing_profile(z: &Precycle, prec: usize) -> Result<Vec<FacetEntry>> {
    z.curve_components()?;
    let mut out = vec![];
    for i in 1..=z.n {
        for v in Facet::both() {
            let what = format!("facet z{}={}", i, v);
            let vanishes = vanishes_with_escalation(|p| facet_points(z, i, v, p), prec, &what)?;
            out.push(FacetEntry { i, v, vanishes });
        }
    }
    Ok(out)
}

/// All zero facets vanish, and all infinity facets except the last.
pub fn profile_is_normalized(profile: &[FacetEntry], n: usize) -> bool {
    profile.iter().all(|e| e.vanishes || (e.v == Facet::Infinity && e.i == n))
}

pub fn is_normalized(z: &Precycle, prec: usize) -> Result<bool> {
    Ok(profile_is_normalized(&face_vanishing_profile(z, prec)?, z.n))
}

/// prod a^m over a point-level precycle in the 1-cube, exactly in k.
pub fn weil_product(z: &Precycle) -> Result<K> {
    let pts = z.point_components()?;
    if z.n != 1 {
        return Err(Error::Invalid("Weil product needs points in the 1-cube".into()));
    }
    let mut acc = K::one(z.order);
    for p in pts {
        let a = p.exact_coords().ok_or_else(|| Error::Unsupported("Weil product of a non-rational point".into()))?;
        acc = &acc * &a[0].pow(p.mult)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests;
