use crate::curves::CurvePoint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// An integer stored as a decimal string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dec(pub u64);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map(Dec).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Dec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn decs(v: &[u64]) -> Vec<Dec> {
    v.iter().map(|&x| Dec(x)).collect()
}

pub fn undec(v: &[Dec]) -> Vec<u64> {
    v.iter().map(|x| x.0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInput {
    pub value: Dec,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteOrder {
    /// x = [plus − minus].
    pub plus: CurvePoint,
    pub minus: CurvePoint,
    pub primes: Vec<Dec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscRecord {
    /// The 𝔽_p-point at the center, as "(t,y)" or "inf[w]".
    pub center: String,
    /// "bounded" or "eliminated".
    pub status: String,
    /// Upper bound for the rational points in the disc (bounded discs only).
    pub bound: Option<Dec>,
    /// Index into the annihilator list of the differential used for the bound.
    pub differential: Option<Dec>,
    pub known: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChabautyRecord {
    pub p: Dec,
    pub precision: Dec,
    /// Coefficient vectors a with Σ a_i ∫ ω_i vanishing on J(ℚ), modulo p^precision.
    pub annihilator_vectors: Vec<Vec<String>>,
    pub disc_bounds: Vec<DiscRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMultiple {
    pub point: String,
    pub multiple: Option<Vec<Dec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: Dec,
    pub invariants: Vec<Dec>,
    pub points: Vec<PointMultiple>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationRecord {
    pub ell: Dec,
    pub aux: Dec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveRecord {
    #[serde(rename = "S")]
    pub s: Vec<Dec>,
    #[serde(rename = "N")]
    pub n: Dec,
    pub d: Dec,
    pub torsion_bound: Dec,
    pub torsion_primes: Vec<Dec>,
    pub saturated: Vec<SaturationRecord>,
    pub base: CurvePoint,
    pub gamma: Vec<String>,
    pub per_prime_multiples: Vec<PrimeRecord>,
    pub survivors: Vec<Vec<Dec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientRecord {
    /// The genus-one curve y² = q(u) with u = t^k.
    pub quartic: String,
    pub exponent: Dec,
    pub torsion_primes: Vec<Dec>,
    pub torsion_bound: Dec,
    pub search_height: Dec,
    pub points: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPointCertificate {
    pub curve: String,
    pub equation: String,
    pub route: String,
    pub claimed_points: Vec<CurvePoint>,
    pub search_height: Dec,
    pub rank_input: RankInput,
    pub infinite_order: Option<InfiniteOrder>,
    pub chabauty: Option<ChabautyRecord>,
    pub sieve: Option<SieveRecord>,
    pub quotient: Option<QuotientRecord>,
    pub verifier_version: String,
}

impl RationalPointCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Parse(e.to_string()))
    }
}
