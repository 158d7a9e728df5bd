use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Exponent of `Q10`: the product itself or its reciprocal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub enum Delta {
    Plus,
    Minus,
}

impl Delta {
    pub const BOTH: [Delta; 2] = [Delta::Plus, Delta::Minus];

    pub fn sign(self) -> i64 {
        match self {
            Delta::Plus => 1,
            Delta::Minus => -1,
        }
    }
}

impl TryFrom<i64> for Delta {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        match value {
            1 => Ok(Delta::Plus),
            -1 => Ok(Delta::Minus),
            other => Err(Error::domain(format!("delta must be +1 or -1, got {other}"))),
        }
    }
}

impl From<Delta> for i64 {
    fn from(d: Delta) -> i64 {
        d.sign()
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign())
    }
}

impl std::str::FromStr for Delta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("delta must be +1 or -1, got {s:?}")))?;
        Delta::try_from(v)
    }
}
