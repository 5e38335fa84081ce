//! Finite rings with unit.

mod beautiful;
mod features;
mod model;
mod phi;
mod ring;
mod spec;

pub use beautiful::{
    characterized_beautiful, enumerate_beautiful, is_beautiful, is_beautiful_with, LinearCombination, SIGMA_BOUND,
};
pub use features::{ring_features, ring_isomorphic, RingFeatures};
pub use model::{ring_model, ring_signature};
pub use phi::sentence_phi_r;
pub use ring::FiniteRing;
pub use spec::{build_ring, RingSpec};
#[allow(unused_imports)]
pub(crate) use spec::{matrix_entries, matrix_index, matrix_ring};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::logic::evaluate;

    fn ring(spec: RingSpec) -> FiniteRing {
        build_ring(&spec, &Caps::default()).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(ring(RingSpec::zmod(4)).size(), 4);
        assert_eq!(ring(RingSpec::matrix(RingSpec::zmod(2), 2)).size(), 16);
        let f4 = ring(RingSpec::poly_quotient(2, &[1, 1, 1]));
        assert_eq!(ring_features(&f4).units.len(), 3);
    }

    #[test]
    fn invalid_parameters() {
        let caps = Caps::default();
        assert!(build_ring(&RingSpec::zmod(0), &caps).is_err());
        assert!(build_ring(&RingSpec::poly_quotient(4, &[1, 1]), &caps).is_err());
        assert!(build_ring(&RingSpec::poly_quotient(2, &[1, 0]), &caps).is_err());
        assert!(build_ring(&RingSpec::poly_quotient(2, &[1]), &caps).is_err());
        assert!(matches!(
            build_ring(&RingSpec::matrix(RingSpec::zmod(2), 3), &caps),
            Err(crate::Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn features_match_examples() {
        let z6 = ring(RingSpec::zmod(6));
        assert_eq!(ring_features(&z6).central_idempotents, vec![0, 1, 3, 4]);
        let z4 = ring(RingSpec::zmod(4));
        assert_eq!(ring_features(&z4).units, vec![1, 3]);
        let m = ring(RingSpec::matrix(RingSpec::zmod(2), 2));
        let f = ring_features(&m);
        assert_eq!(f.central_idempotents, vec![m.zero(), m.one()]);
        assert_eq!(f.center.size(), 2);
        assert!(f.center.is_commutative());
    }

    #[test]
    fn isomorphism_examples() {
        let z6 = ring(RingSpec::zmod(6));
        let z2z3 = ring(RingSpec::product(RingSpec::zmod(2), RingSpec::zmod(3)));
        assert!(ring_isomorphic(&z6, &z2z3).is_some());
        let z4 = ring(RingSpec::zmod(4));
        let dual = ring(RingSpec::poly_quotient(2, &[0, 0, 1]));
        assert!(ring_isomorphic(&z4, &dual).is_none());
        let id = ring_isomorphic(&z4, &z4).unwrap();
        assert_eq!(id, vec![0, 1, 2, 3]);
    }

    #[test]
    fn phi_examples() {
        let z2 = ring(RingSpec::zmod(2));
        let phi = sentence_phi_r(&z2);
        let empty = Default::default();
        assert!(evaluate(&ring_model(&z2), &phi, &empty).unwrap());
        let f4 = ring(RingSpec::poly_quotient(2, &[1, 1, 1]));
        assert!(!evaluate(&ring_model(&f4), &phi, &empty).unwrap());
        let z4 = ring(RingSpec::zmod(4));
        let z2z2 = ring(RingSpec::product(RingSpec::zmod(2), RingSpec::zmod(2)));
        assert!(!evaluate(&ring_model(&z2z2), &sentence_phi_r(&z4), &empty).unwrap());
    }

    #[test]
    fn beautiful_examples() {
        let z6 = ring(RingSpec::zmod(6));
        assert!(is_beautiful(&LinearCombination::new(vec![1]), &z6));
        assert!(is_beautiful(&LinearCombination::new(vec![3, 4]), &z6));
        assert!(!is_beautiful(&LinearCombination::new(vec![1, 1]), &z6));
        let caps = Caps::default();
        let got: Vec<Vec<usize>> = enumerate_beautiful(&z6, 2, &caps)
            .unwrap()
            .into_iter()
            .map(|t| t.coefficients)
            .collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, 0], vec![3, 4], vec![4, 3]]);
    }

    #[test]
    fn spec_json() {
        let s: RingSpec = serde_json::from_str(r#"{"kind":"matrix","base":{"kind":"zmod","n":2},"k":2}"#).unwrap();
        assert_eq!(s, RingSpec::matrix(RingSpec::zmod(2), 2));
        let s: RingSpec = serde_json::from_str(r#"{"kind":"poly_quotient","p":2,"modulus":[1,1,1]}"#).unwrap();
        assert_eq!(s.label(), "F2[x]/(x^2+x+1)");
    }

    #[test]
    fn corrupted_tables_are_rejected() {
        let z4 = ring(RingSpec::zmod(4));
        let mut mul = z4.mul_table();
        mul[2][3] = 1;
        assert!(matches!(
            FiniteRing::from_tables("bad", &z4.add_table(), &mul),
            Err(crate::Error::RingAxiom(_))
        ));
    }
}
