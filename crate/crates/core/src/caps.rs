use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Enumeration limits shared by every constructor that can blow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub ring_size: usize,
    pub module_size: usize,
    pub skeleton_bound: usize,
    pub free_rank: usize,
    /// Number of candidate assignments a single exhaustive search may visit.
    pub enumeration: usize,
    /// Maximum number of morphisms in one encoded category.
    pub morphisms: usize,
    pub index_set: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            ring_size: 256,
            module_size: 64,
            skeleton_bound: 16,
            free_rank: 3,
            enumeration: 1 << 24,
            morphisms: 1 << 18,
            index_set: 5,
        }
    }
}

impl Caps {
    /// Caps large enough for every construction the test suites exercise.
    pub fn generous() -> Self {
        Caps {
            ring_size: 1 << 16,
            module_size: 4096,
            skeleton_bound: 256,
            free_rank: 4,
            enumeration: 1 << 26,
            morphisms: 1 << 18,
            index_set: 5,
        }
    }

    /// Applies overrides written as `name=value` pairs separated by commas,
    /// e.g. `module_size=256,skeleton_bound=32`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("cap override `{item}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("cap override `{item}`")))?;
            if value == 0 {
                return Err(Error::InvalidParameter(format!("cap `{name}` must be positive")));
            }
            match name.trim() {
                "ring_size" => self.ring_size = value,
                "module_size" => self.module_size = value,
                "skeleton_bound" => self.skeleton_bound = value,
                "free_rank" => self.free_rank = value,
                "enumeration" => self.enumeration = value,
                "morphisms" => self.morphisms = value,
                "index_set" => self.index_set = value,
                other => return Err(Error::InvalidParameter(format!("unknown cap `{other}`"))),
            }
        }
        Ok(self)
    }

    pub(crate) fn check(&self, cap: &'static str, requested: u128) -> Result<()> {
        let limit = match cap {
            "ring_size" => self.ring_size,
            "module_size" => self.module_size,
            "skeleton_bound" => self.skeleton_bound,
            "free_rank" => self.free_rank,
            "enumeration" => self.enumeration,
            "morphisms" => self.morphisms,
            "index_set" => self.index_set,
            _ => unreachable!("unknown cap {cap}"),
        };
        if requested > limit as u128 {
            Err(Error::cap(cap, requested, limit))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let c = Caps::default()
            .with_overrides("module_size=128, ring_size=512")
            .unwrap();
        assert_eq!(c.module_size, 128);
        assert_eq!(c.ring_size, 512);
        assert!(Caps::default().with_overrides("bogus=3").is_err());
        assert!(Caps::default().with_overrides("ring_size=0").is_err());
    }

    #[test]
    fn check_names_the_cap() {
        let err = Caps::default().check("ring_size", 300).unwrap_err();
        assert!(err.to_string().contains("ring_size"));
    }
}
