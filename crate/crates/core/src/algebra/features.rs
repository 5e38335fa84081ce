use super::model::ring_model;
use super::ring::FiniteRing;
use crate::logic::models_isomorphic;

#[derive(Debug, Clone)]
pub struct RingFeatures {
    pub units: Vec<usize>,
    pub central_idempotents: Vec<usize>,
    /// Elements of the center, in increasing order; `center` is indexed by
    /// position in this list.
    pub center_elements: Vec<usize>,
    pub center: FiniteRing,
}

pub fn ring_features(r: &FiniteRing) -> RingFeatures {
    let units = r.elements().filter(|&a| r.is_unit(a)).collect();
    let center_elements: Vec<usize> = r.elements().filter(|&a| r.is_central(a)).collect();
    let central_idempotents = center_elements
        .iter()
        .copied()
        .filter(|&a| r.is_idempotent(a))
        .collect();
    let center = r
        .subring(format!("Z({})", r.name()), &center_elements)
        .expect("the center is a subring");
    RingFeatures {
        units,
        central_idempotents,
        center_elements,
        center,
    }
}

/// A bijection `map` with `map[a]` the image of `a`, preserving addition,
/// multiplication, zero and one; `None` when the rings are not isomorphic.
pub fn ring_isomorphic(r1: &FiniteRing, r2: &FiniteRing) -> Option<Vec<usize>> {
    if r1.size() != r2.size() {
        return None;
    }
    models_isomorphic(&ring_model(r1), &ring_model(r2)).map(|iso| iso.maps.into_iter().next().unwrap())
}
