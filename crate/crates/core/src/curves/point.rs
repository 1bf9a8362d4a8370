use crate::algebra::rational::{fmt_rational, parse_rational};
use crate::algebra::Rational;
use crate::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A rational point on y² = d(t). For even degree the two points at infinity
/// are told apart by the sign of y/t^{g+1} (sign = ±1); the single point at
/// infinity of an odd-degree model has sign 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Affine { t: Rational, y: Rational },
    Infinity { sign: i8 },
}

impl CurvePoint {
    pub fn affine(t: Rational, y: Rational) -> Self {
        CurvePoint::Affine { t, y }
    }

    pub fn t(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Affine { t, .. } => Some(t),
            _ => None,
        }
    }

    /// The hyperelliptic conjugate.
    pub fn conjugate(&self) -> Self {
        match self {
            CurvePoint::Affine { t, y } => CurvePoint::Affine { t: t.clone(), y: -y.clone() },
            CurvePoint::Infinity { sign } => CurvePoint::Infinity { sign: -sign },
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Affine { t, y } => write!(f, "({},{})", fmt_rational(t), fmt_rational(y)),
            CurvePoint::Infinity { sign: 0 } => write!(f, "inf"),
            CurvePoint::Infinity { sign } if *sign > 0 => write!(f, "inf+"),
            CurvePoint::Infinity { .. } => write!(f, "inf-"),
        }
    }
}

impl FromStr for CurvePoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" => return Ok(CurvePoint::Infinity { sign: 0 }),
            "inf+" | "(1:1:0)" => return Ok(CurvePoint::Infinity { sign: 1 }),
            "inf-" | "(1:-1:0)" => return Ok(CurvePoint::Infinity { sign: -1 }),
            _ => {}
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad point '{s}'")))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad point '{s}'")))?;
        Ok(CurvePoint::Affine { t: parse_rational(a)?, y: parse_rational(b)? })
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
