use super::{check_face_proper, face_vanishing_profile, facet, profile_is_normalized, CurveComponent, Facet, Precycle};
use crate::error::{Error, Result};
use crate::func_field::{Poly, RationalFunction};

/// Preimage of a point-level precycle in the (n-1)-cube under the map that
/// joins coordinates j and j+1 by ab/(a+b-1). Over the point w the preimage is
/// the curve (w_1, .., w_{j-1}, t, w_j (t-1)/(t-w_j), w_{j+1}, ..).
pub fn pullback_join(points: &Precycle, j: usize) -> Result<Vec<CurveComponent>> {
    let order = points.order;
    let mut out = vec![];
    for pt in points.point_components()? {
        let w = pt
            .exact_coords()
            .ok_or_else(|| Error::Unsupported(format!("normalize with a facet point not rational over k: {}", pt)))?;
        let mut coords = Vec::with_capacity(w.len() + 1);
        for (k, a) in w.iter().enumerate() {
            if k + 1 == j {
                let num = Poly::from_ints(order, &[-1, 1]).scale(a);
                let den = Poly::linear(a);
                coords.push(RationalFunction::t(order));
                coords.push(RationalFunction::new(num, den)?);
            } else {
                coords.push(RationalFunction::constant(a.clone()));
            }
        }
        out.push(CurveComponent::new(coords, pt.mult)?);
    }
    Ok(out)
}

/// Retraction onto normalized cycles: for j = 1, .., n-1 subtract the
/// pullback of the current d^inf_j along the join of coordinates j, j+1.
pub fn normalize(z: &Precycle, prec: usize) -> Result<Precycle> {
    z.curve_components()?;
    if z.is_empty() {
        return Ok(z.clone());
    }
    let profile = face_vanishing_profile(z, prec)?;
    if let Some(e) = profile.iter().find(|e| e.v == Facet::Zero && !e.vanishes) {
        return Err(Error::NotDeltaZeroFree(format!("facet z{}=0 is nonzero", e.i)));
    }
    let mut cur = z.clone();
    for j in 1..z.n {
        let f = facet(&cur, j, Facet::Infinity, prec)?;
        if f.is_empty() {
            continue;
        }
        let corr = Precycle::curves(z.n, z.p, z.order, pullback_join(&f, j)?)?;
        cur = cur.add(&corr.scale(-1))?;
    }
    let rep = check_face_proper(&cur, prec)?;
    if !rep.ok {
        return Err(Error::Improper(format!("normalization output meets a codimension-2 face at t={}", rep.violations[0].t)));
    }
    if !profile_is_normalized(&face_vanishing_profile(&cur, prec)?, cur.n) {
        return Err(Error::Precondition("normalization output still has nonzero facets".into()));
    }
    Ok(cur)
}
