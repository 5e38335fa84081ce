//! The pinned ring catalog and the (ring, bound) configurations used by
//! the sweeps.

use crate::algebra::{build_ring, FiniteRing, RingSpec};
use crate::caps::Caps;
use crate::error::{Error, Result};
use serde::Serialize;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub spec: RingSpec,
}

pub fn default_catalog() -> Vec<CatalogEntry> {
    let z = RingSpec::zmod;
    vec![
        CatalogEntry {
            key: "zmod2",
            spec: z(2),
        },
        CatalogEntry {
            key: "zmod3",
            spec: z(3),
        },
        CatalogEntry {
            key: "zmod4",
            spec: z(4),
        },
        CatalogEntry {
            key: "zmod6",
            spec: z(6),
        },
        CatalogEntry {
            key: "f2_dual",
            spec: RingSpec::poly_quotient(2, &[0, 0, 1]),
        },
        CatalogEntry {
            key: "f4",
            spec: RingSpec::poly_quotient(2, &[1, 1, 1]),
        },
        CatalogEntry {
            key: "m2f2",
            spec: RingSpec::matrix(z(2), 2),
        },
        CatalogEntry {
            key: "f2xf2",
            spec: RingSpec::product(z(2), z(2)),
        },
    ]
}

pub fn catalog_entry(key: &str) -> Result<CatalogEntry> {
    default_catalog()
        .into_iter()
        .find(|e| e.key == key)
        .ok_or_else(|| Error::InvalidParameter(format!("no catalog ring named {key}")))
}

/// Builds every catalog ring.
pub fn build_catalog(caps: &Caps) -> Result<Vec<(CatalogEntry, Arc<FiniteRing>)>> {
    default_catalog()
        .into_iter()
        .map(|e| build_ring(&e.spec, caps).map(|r| (e, Arc::new(r))))
        .collect()
}

/// Skeleton bounds for the formula-versus-oracle sweep, one per ring.
pub fn agreement_configs() -> Vec<(&'static str, usize)> {
    vec![
        ("zmod2", 8),
        ("zmod3", 9),
        ("zmod4", 8),
        ("zmod6", 6),
        ("f2_dual", 8),
        ("f4", 16),
        ("m2f2", 16),
        ("f2xf2", 8),
    ]
}

/// Rings whose skeleton up to `|R|²` is used whole for the encoding check;
/// the others use the full subcategory on `0, R, R²`.
pub fn full_skeleton_for_gr(key: &str) -> bool {
    !matches!(key, "zmod6" | "m2f2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds() {
        let rings = build_catalog(&Caps::default()).unwrap();
        let sizes: Vec<usize> = rings.iter().map(|(_, r)| r.size()).collect();
        assert_eq!(sizes, vec![2, 3, 4, 6, 4, 4, 16, 4]);
        assert!(agreement_configs().iter().all(|(k, _)| catalog_entry(k).is_ok()));
    }
}
