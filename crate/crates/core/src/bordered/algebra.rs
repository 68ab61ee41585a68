//! The torus algebra: idempotents `ι0, ι1` and Reeb elements `ρ1..ρ123`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Idem {
    #[serde(rename = "i0")]
    I0,
    #[serde(rename = "i1")]
    I1,
}

impl fmt::Display for Idem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Idem::I0 => "i0",
            Idem::I1 => "i1",
        })
    }
}

/// A basis element of the torus algebra. Zero is represented by `None`
/// wherever a product can vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgElt {
    I0,
    I1,
    R1,
    R2,
    R3,
    R12,
    R23,
    R123,
}

/// The six Reeb elements in a fixed order.
pub const RHOS: [AlgElt; 6] = [
    AlgElt::R1,
    AlgElt::R2,
    AlgElt::R3,
    AlgElt::R12,
    AlgElt::R23,
    AlgElt::R123,
];

pub const ALL: [AlgElt; 8] = [
    AlgElt::I0,
    AlgElt::I1,
    AlgElt::R1,
    AlgElt::R2,
    AlgElt::R3,
    AlgElt::R12,
    AlgElt::R23,
    AlgElt::R123,
];

impl AlgElt {
    pub fn idems(self) -> (Idem, Idem) {
        use AlgElt::*;
        match self {
            I0 | R12 => (Idem::I0, Idem::I0),
            I1 | R23 => (Idem::I1, Idem::I1),
            R1 | R3 | R123 => (Idem::I0, Idem::I1),
            R2 => (Idem::I1, Idem::I0),
        }
    }

    pub fn left(self) -> Idem {
        self.idems().0
    }

    pub fn right(self) -> Idem {
        self.idems().1
    }

    pub fn is_idempotent(self) -> bool {
        matches!(self, AlgElt::I0 | AlgElt::I1)
    }

    pub fn idempotent(i: Idem) -> AlgElt {
        match i {
            Idem::I0 => AlgElt::I0,
            Idem::I1 => AlgElt::I1,
        }
    }

    /// Product in the algebra; `None` is zero.
    pub fn mul(self, other: AlgElt) -> Option<AlgElt> {
        use AlgElt::*;
        if self.right() != other.left() {
            return None;
        }
        if self.is_idempotent() {
            return Some(other);
        }
        if other.is_idempotent() {
            return Some(self);
        }
        match (self, other) {
            (R1, R2) => Some(R12),
            (R2, R3) => Some(R23),
            (R1, R23) | (R12, R3) => Some(R123),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        use AlgElt::*;
        match self {
            I0 => "i0",
            I1 => "i1",
            R1 => "r1",
            R2 => "r2",
            R3 => "r3",
            R12 => "r12",
            R23 => "r23",
            R123 => "r123",
        }
    }
}

/// Product of a nonempty sequence, or `None` if it vanishes.
pub fn product(seq: &[AlgElt]) -> Option<AlgElt> {
    let (first, rest) = seq.split_first()?;
    rest.iter().try_fold(*first, |acc, &r| acc.mul(r))
}

impl fmt::Display for AlgElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown algebra label `{0}`")]
pub struct ParseAlgError(pub String);

impl FromStr for AlgElt {
    type Err = ParseAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL.iter()
            .copied()
            .find(|a| a.label() == s)
            .ok_or_else(|| ParseAlgError(s.to_string()))
    }
}

impl Serialize for AlgElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for AlgElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
