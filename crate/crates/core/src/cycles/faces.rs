//! Faces of the cube as symbolic data, for checking facet identities.

use super::Facet;
use std::collections::HashMap;

/// A face of the n-cube: every coordinate is free or pinned to 0 or infinity.
pub type Face = Vec<Option<Facet>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FacetLabel {
    /// 1-based coordinate index in the cube the restriction is applied to
    pub i: usize,
    pub v: Facet,
}

/// The face reached by restricting along `labels` in order, each index
/// counted among the coordinates still free at that step.
pub fn face_of(n: usize, labels: &[FacetLabel]) -> Option<Face> {
    let mut face: Face = vec![None; n];
    for l in labels {
        let free: Vec<usize> = (0..n).filter(|&k| face[k].is_none()).collect();
        let &k = free.get(l.i.checked_sub(1)?)?;
        face[k] = Some(l.v);
    }
    Some(face)
}

/// Coefficients of the codimension-2 faces in the doubled Bloch differential
/// on the n-cube; every entry of a correct differential is zero.
pub fn double_boundary_symbolic(n: usize) -> HashMap<Face, i64> {
    let sgn = |i: usize, v: Facet| if i % 2 == 0 { v.sign() } else { -v.sign() };
    let mut acc: HashMap<Face, i64> = HashMap::new();
    for i in 1..=n {
        for a in Facet::both() {
            for j in 1..n {
                for b in Facet::both() {
                    let labels = [FacetLabel { i, v: a }, FacetLabel { i: j, v: b }];
                    let f = face_of(n, &labels).expect("indices in range");
                    *acc.entry(f).or_insert(0) += sgn(i, a) * sgn(j, b);
                }
            }
        }
    }
    acc
}
