use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum width of a duplication-loss step. `Unbounded` is the whole
/// genome model and is resolved to `n` once the size is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WidthLimit {
    Finite(usize),
    Unbounded,
}

impl WidthLimit {
    /// Effective width on a permutation of size `n`.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            WidthLimit::Finite(k) => k.min(n),
            WidthLimit::Unbounded => n,
        }
    }

    pub fn allows(self, width: usize) -> bool {
        match self {
            WidthLimit::Finite(k) => width <= k,
            WidthLimit::Unbounded => true,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            WidthLimit::Finite(k) => Some(k),
            WidthLimit::Unbounded => None,
        }
    }
}

impl From<usize> for WidthLimit {
    fn from(k: usize) -> Self {
        WidthLimit::Finite(k)
    }
}

impl fmt::Display for WidthLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WidthLimit::Finite(k) => write!(f, "{k}"),
            WidthLimit::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for WidthLimit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(WidthLimit::Unbounded),
            t => t
                .parse::<usize>()
                .map(WidthLimit::Finite)
                .map_err(|_| Error::Parse(t.to_string())),
        }
    }
}

impl Serialize for WidthLimit {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WidthLimit::Finite(k) => serializer.serialize_u64(*k as u64),
            WidthLimit::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for WidthLimit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(usize),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(k) => Ok(WidthLimit::Finite(k)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}
