//! SFT corpus accounting: general-domain pairs plus back-translation
//! samples must add up to the declared total.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("manifest total {total} does not equal general {general} + sampled {sampled}")]
pub struct ManifestError {
    pub general: u64,
    pub sampled: u64,
    pub total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftManifest {
    pub general: u64,
    pub sampled: u64,
    pub total: u64,
}

impl SftManifest {
    /// Manifest whose total is the sum of its parts.
    pub fn from_parts(general: u64, sampled: u64) -> Self {
        Self {
            general,
            sampled,
            total: general + sampled,
        }
    }

    pub fn validate(&self) -> Result<(), ManifestError> {
        match self.general.checked_add(self.sampled) {
            Some(sum) if sum == self.total => Ok(()),
            _ => Err(ManifestError {
                general: self.general,
                sampled: self.sampled,
                total: self.total,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_is_invalid() {
        let m = SftManifest {
            general: u64::MAX,
            sampled: 1,
            total: 0,
        };
        assert!(m.validate().is_err());
    }

    #[test]
    fn json_shape() {
        let m: SftManifest = serde_json::from_str(r#"{"general":2,"sampled":3,"total":5}"#).unwrap();
        assert!(m.validate().is_ok());
        assert!(serde_json::from_str::<SftManifest>(r#"{"general":2,"sampled":3,"total":5,"x":1}"#).is_err());
    }
}
