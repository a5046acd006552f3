//! Device tiers and the tier -> encrypted-class policy matrix.

use crate::crypt::{derive_class_key, KeyBundle, MasterKey};
use crate::roi::SensitivityClass;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("unknown device tier {0:?}")]
    UnknownTier(String),
    #[error("policy JSON: {0}")]
    Json(String),
}

/// AR display category, ordered by privacy safety (projector is least safe).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceTier {
    Projector = 0,
    Smartphone = 1,
    Glasses = 2,
}

impl DeviceTier {
    pub const ALL: [DeviceTier; 3] = [Self::Projector, Self::Smartphone, Self::Glasses];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn privacy_safety_rank(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Projector => "projector",
            Self::Smartphone => "smartphone",
            Self::Glasses => "glasses",
        }
    }
}

impl fmt::Display for DeviceTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DeviceTier {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "projector" => Ok(Self::Projector),
            "smartphone" => Ok(Self::Smartphone),
            "glasses" => Ok(Self::Glasses),
            other => Err(PolicyError::UnknownTier(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Encrypt,
    Plaintext,
}

/// Per-tier set of classes to encrypt. Tiers may be absent in custom matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyMatrix {
    pub tiers: BTreeMap<DeviceTier, BTreeSet<SensitivityClass>>,
}

/// projector: everything; smartphone: face + display content; glasses: face.
pub fn default_policy() -> PolicyMatrix {
    use SensitivityClass::*;
    PolicyMatrix {
        tiers: BTreeMap::from([
            (
                DeviceTier::Projector,
                BTreeSet::from([Face, DisplayContent, IdCard]),
            ),
            (
                DeviceTier::Smartphone,
                BTreeSet::from([Face, DisplayContent]),
            ),
            (DeviceTier::Glasses, BTreeSet::from([Face])),
        ]),
    }
}

impl Default for PolicyMatrix {
    fn default() -> Self {
        default_policy()
    }
}

pub fn encrypt_set(
    matrix: &PolicyMatrix,
    tier: DeviceTier,
) -> Result<&BTreeSet<SensitivityClass>, PolicyError> {
    matrix
        .tiers
        .get(&tier)
        .ok_or_else(|| PolicyError::UnknownTier(tier.name().to_string()))
}

pub fn decision(
    matrix: &PolicyMatrix,
    tier: DeviceTier,
    class: SensitivityClass,
) -> Result<Decision, PolicyError> {
    Ok(if encrypt_set(matrix, tier)?.contains(&class) {
        Decision::Encrypt
    } else {
        Decision::Plaintext
    })
}

/// Keys for every class the tier may view, i.e. the complement of its encrypt set.
pub fn key_bundle_for(
    matrix: &PolicyMatrix,
    tier: DeviceTier,
    master: &MasterKey,
) -> Result<KeyBundle, PolicyError> {
    let hidden = encrypt_set(matrix, tier)?;
    Ok(SensitivityClass::ALL
        .iter()
        .filter(|c| !hidden.contains(c))
        .map(|&c| derive_class_key(master, c))
        .collect())
}

/// A class encrypted for a safer tier but left plaintext for a less safe one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub less_safe: DeviceTier,
    pub safer: DeviceTier,
    pub class: SensitivityClass,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} is encrypted for {} but not for less safe {}",
            self.class, self.safer, self.less_safe
        )
    }
}

/// Checks that less safe tiers encrypt a superset of what safer tiers encrypt.
pub fn validate_policy(matrix: &PolicyMatrix) -> Vec<Violation> {
    let mut out = Vec::new();
    for (&a, set_a) in &matrix.tiers {
        for (&b, set_b) in &matrix.tiers {
            if a.privacy_safety_rank() >= b.privacy_safety_rank() {
                continue;
            }
            for &class in set_b.difference(set_a) {
                out.push(Violation {
                    less_safe: a,
                    safer: b,
                    class,
                });
            }
        }
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolicyFile {
    tiers: BTreeMap<String, Vec<String>>,
}

impl PolicyMatrix {
    /// Parses `{"tiers": {...}}`; tiers left out keep their default entry.
    pub fn from_json(text: &str) -> Result<Self, PolicyError> {
        let file: PolicyFile =
            serde_json::from_str(text).map_err(|e| PolicyError::Json(e.to_string()))?;
        let mut m = default_policy();
        for (tier, classes) in file.tiers {
            let tier: DeviceTier = tier.parse()?;
            let set = classes
                .iter()
                .map(|c| c.parse::<SensitivityClass>())
                .collect::<Result<_, _>>()
                .map_err(|e| PolicyError::Json(e.to_string()))?;
            m.tiers.insert(tier, set);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("policy serializes")
    }
}
