use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The four unimodal-sequence families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Ordinary unimodal sequences, single peak.
    U,
    /// Double-peak sequences.
    W,
    /// Durfee unimodal sequences.
    V,
    /// Odd-even unimodal sequences.
    Nu,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::U, Family::W, Family::V, Family::Nu];

    pub fn name(self) -> &'static str {
        match self {
            Family::U => "u",
            Family::W => "w",
            Family::V => "v",
            Family::Nu => "nu",
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Family::U => 0,
            Family::W => 1,
            Family::V => 2,
            Family::Nu => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "u" => Ok(Family::U),
            "w" => Ok(Family::W),
            "v" => Ok(Family::V),
            "nu" | "ν" => Ok(Family::Nu),
            other => Err(Error::Usage(format!("unknown family '{other}' (expected u, w, v or nu)"))),
        }
    }
}
