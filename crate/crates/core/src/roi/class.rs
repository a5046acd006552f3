use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Sensitivity class of a real-world object. Ids are part of the wire format
/// and of key derivation, so they never change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityClass {
    Face = 1,
    DisplayContent = 2,
    IdCard = 3,
}

impl SensitivityClass {
    pub const ALL: [SensitivityClass; 3] = [Self::Face, Self::DisplayContent, Self::IdCard];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Self::Face),
            2 => Some(Self::DisplayContent),
            3 => Some(Self::IdCard),
            _ => None,
        }
    }

    /// Higher is more important: face 3, display content 2, id card 1.
    pub fn importance_rank(self) -> u8 {
        match self {
            Self::Face => 3,
            Self::DisplayContent => 2,
            Self::IdCard => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Face => "face",
            Self::DisplayContent => "display_content",
            Self::IdCard => "id_card",
        }
    }
}

impl fmt::Display for SensitivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown sensitivity class {0:?}")]
pub struct UnknownClass(pub String);

impl FromStr for SensitivityClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "face" | "1" => Ok(Self::Face),
            "display_content" | "2" => Ok(Self::DisplayContent),
            "id_card" | "3" => Ok(Self::IdCard),
            other => Err(UnknownClass(other.to_string())),
        }
    }
}
