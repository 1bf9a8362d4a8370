use super::certificate::*;
use super::{compute_d, compute_d_rank_zero, product_quotient_order, remove_saturated, run_sieve, saturation_check, subgroup_order};
use super::{DivisorClass, SieveInstance, SieveResult};
use crate::curves::{rational_point_search, CurvePoint, HyperellipticModel};
use crate::jacobian::{certify_infinite_order, good_primes, group_structure, l_polynomial, torsion_bound, FpPoint, OddModel};
use crate::padic::{annihilator_space, disc_point_bound, rational_disc_bound, integrate_between, ResidueDisc};
use crate::verdicts::{elliptic_torsion_bound, power_quotient, pullback_points};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const VERIFIER_VERSION: &str = concat!("cubic-torsion ", env!("CARGO_PKG_VERSION"));

const DEFAULT_CONFIG: &str = include_str!("../../data/certify.toml");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationInput {
    pub ell: u64,
    pub aux: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientConfig {
    /// C: y² = q(t^k) maps to y² = q(u) by u = t^k.
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub id: String,
    pub rank_bound: u64,
    pub rank_source: String,
    #[serde(default)]
    pub generator: Option<[CurvePoint; 2]>,
    #[serde(default)]
    pub base: Option<CurvePoint>,
    #[serde(default)]
    pub chabauty_prime: u64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default)]
    pub sieve_primes: Vec<u64>,
    #[serde(default, rename = "N")]
    pub n: u64,
    #[serde(default = "default_height")]
    pub search_height: u64,
    #[serde(default = "default_torsion_primes")]
    pub torsion_primes: usize,
    #[serde(default)]
    pub saturation: Vec<SaturationInput>,
    #[serde(default)]
    pub quotient: Option<QuotientConfig>,
}

fn default_precision() -> u32 {
    5
}
fn default_height() -> u64 {
    50
}
fn default_torsion_primes() -> usize {
    20
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyConfig {
    #[serde(default)]
    pub curve: Vec<CurveConfig>,
}

impl CertifyConfig {
    pub fn default_config() -> Result<Self> {
        Self::parse(DEFAULT_CONFIG)
    }

    pub fn parse(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::parse(&s)
    }

    pub fn get(&self, id: &str) -> Option<&CurveConfig> {
        self.curve.iter().find(|c| c.id == id)
    }
}

fn no_cert(h: &HyperellipticModel, reason: impl Into<String>) -> Error {
    Error::NoCertificate { curve: h.label.clone(), reason: reason.into() }
}

/// Determine C(ℚ) and produce a certificate, or fail with the stage that
/// could not be completed.
pub fn certify_rational_points(h: &HyperellipticModel, cfg: &CurveConfig) -> Result<RationalPointCertificate> {
    match &cfg.quotient {
        Some(q) => certify_by_quotient(h, cfg, q),
        None => certify_by_chabauty(h, cfg),
    }
}

fn certify_by_quotient(h: &HyperellipticModel, cfg: &CurveConfig, q: &QuotientConfig) -> Result<RationalPointCertificate> {
    if cfg.rank_bound != 0 {
        return Err(no_cert(h, "the quotient route needs a rank-zero quotient"));
    }
    let e = power_quotient(h, q.exponent)?;
    let primes = good_primes(&e, cfg.torsion_primes);
    let tb = elliptic_torsion_bound(&e, &primes)?;
    let e_pts = rational_point_search(&e, cfg.search_height);
    if e_pts.len() as u64 != tb {
        return Err(no_cert(h, format!("found {} points on the quotient but the torsion bound is {tb}", e_pts.len())));
    }
    let claimed = pullback_points(h, &e_pts, q.exponent)?;
    Ok(RationalPointCertificate {
        curve: h.label.clone(),
        equation: h.d.to_string(),
        route: "elliptic-quotient".into(),
        claimed_points: claimed,
        search_height: Dec(cfg.search_height),
        rank_input: RankInput { value: Dec(cfg.rank_bound), source: cfg.rank_source.clone() },
        infinite_order: None,
        chabauty: None,
        sieve: None,
        quotient: Some(QuotientRecord {
            quartic: e.d.to_string(),
            exponent: Dec(q.exponent as u64),
            torsion_primes: decs(&primes),
            torsion_bound: Dec(tb),
            search_height: Dec(cfg.search_height),
            points: e_pts,
        }),
        verifier_version: VERIFIER_VERSION.into(),
    })
}

/// Γ, base point and d for the sieve, and the sieve result.
pub(crate) struct SieveSetup {
    pub gamma: Vec<DivisorClass>,
    pub base: CurvePoint,
    pub torsion_bound: u64,
    pub torsion_primes: Vec<u64>,
    pub saturated: Vec<SaturationInput>,
    pub d: u64,
    pub result: SieveResult,
}

pub(crate) fn base_point(cfg: &CurveConfig, known: &[CurvePoint]) -> Result<CurvePoint> {
    match (&cfg.base, &cfg.generator) {
        (Some(b), _) => Ok(b.clone()),
        (None, Some(g)) => Ok(g[1].clone()),
        (None, None) => known.last().cloned().ok_or_else(|| Error::InvalidInput("no base point".into())),
    }
}

pub(crate) fn gamma_generators(cfg: &CurveConfig, known: &[CurvePoint], base: &CurvePoint) -> Result<Vec<DivisorClass>> {
    match cfg.rank_bound {
        1 => {
            let g = cfg.generator.as_ref().ok_or_else(|| Error::InvalidInput("rank one needs a generator".into()))?;
            Ok(vec![DivisorClass::difference(&g[0], &g[1])])
        }
        0 => Ok(known.iter().filter(|q| *q != base).map(|q| DivisorClass::difference(q, base)).collect()),
        r => Err(Error::InvalidInput(format!("rank bound {r} is not supported"))),
    }
}

/// Order of Γ ⊆ J(ℚ)_tors, read off at an odd prime of good reduction.
pub(crate) fn torsion_gamma_order(h: &HyperellipticModel, gamma: &[DivisorClass], p: u64) -> Result<u64> {
    let rc = OddModel::new(h)?.reduce(p)?;
    let gs = group_structure(&rc, l_polynomial(h, p)?.jacobian_order())?;
    let coords = gamma.iter().map(|g| gs.quotient_coords(&g.reduce(&rc)?, 0)).collect::<Result<Vec<_>>>()?;
    subgroup_order(&coords, &gs.invariants)
}

pub(crate) fn setup_sieve(h: &HyperellipticModel, cfg: &CurveConfig, known: &[CurvePoint]) -> Result<SieveSetup> {
    let base = base_point(cfg, known)?;
    let gamma = gamma_generators(cfg, known, &base)?;
    let torsion_primes = good_primes(h, cfg.torsion_primes);
    let tb = torsion_bound(h, &torsion_primes)?;
    let mut inst = SieveInstance {
        curve: h.clone(),
        primes: cfg.sieve_primes.clone(),
        n: cfg.n,
        d: 1,
        gamma: gamma.clone(),
        known_points: known.to_vec(),
        base_point: base.clone(),
    };
    let mut saturated = Vec::new();
    let d = if cfg.rank_bound == 1 {
        let first = run_sieve(&inst)?;
        let d = compute_d(cfg.n, tb, product_quotient_order(&first, 0))?;
        let mut ells = Vec::new();
        for s in &cfg.saturation {
            if saturation_check(h, &gamma[0], s.ell, s.aux, &torsion_primes)? {
                ells.push(s.ell);
                saturated.push(s.clone());
            }
        }
        let d = remove_saturated(d, &ells);
        if d == 1 {
            return Ok(SieveSetup { gamma, base, torsion_bound: tb, torsion_primes, saturated, d, result: first });
        }
        d
    } else {
        let p = *cfg.sieve_primes.first().ok_or_else(|| Error::InvalidInput("empty S".into()))?;
        compute_d_rank_zero(cfg.n, tb, torsion_gamma_order(h, &gamma, p)?)?
    };
    inst.d = d;
    let result = run_sieve(&inst)?;
    Ok(SieveSetup { gamma, base, torsion_bound: tb, torsion_primes, saturated, d, result })
}

/// Annihilating vectors modulo p^k for the given rank.
pub(crate) fn annihilators(h: &HyperellipticModel, cfg: &CurveConfig, p: u64, k: u32) -> Result<Vec<Vec<BigInt>>> {
    match cfg.rank_bound {
        0 => Ok((0..h.genus).map(|i| (0..h.genus).map(|j| if i == j { BigInt::one() } else { BigInt::from(0) }).collect()).collect()),
        _ => {
            let g = cfg.generator.as_ref().ok_or_else(|| Error::InvalidInput("rank one needs a generator".into()))?;
            let ints = integrate_between(h, &g[0], &g[1], p, k)?;
            annihilator_space(&ints, h.genus, 1, k)
        }
    }
}

/// Smallest disc bound over the annihilating differentials.
pub(crate) fn best_disc_bound(h: &HyperellipticModel, vecs: &[Vec<BigInt>], center: FpPoint, p: u64, k: u32) -> Option<(usize, usize)> {
    let disc = ResidueDisc::new(center);
    vecs.iter()
        .enumerate()
        .filter_map(|(i, a)| disc_point_bound(h, a, &disc, p, k).ok().map(|b| (rational_disc_bound(h, &disc, p, b), i)))
        .min()
}

fn certify_by_chabauty(h: &HyperellipticModel, cfg: &CurveConfig) -> Result<RationalPointCertificate> {
    if cfg.rank_bound as usize >= h.genus {
        return Err(no_cert(h, format!("rank bound {} is not below the genus {}", cfg.rank_bound, h.genus)));
    }
    let p = cfg.chabauty_prime;
    let k = cfg.precision;
    if !cfg.sieve_primes.contains(&p) {
        return Err(Error::InvalidInput(format!("the Chabauty prime {p} must be one of the sieve primes")));
    }
    let known = rational_point_search(h, cfg.search_height);
    let infinite_order = if cfg.rank_bound == 1 {
        let g = cfg.generator.as_ref().ok_or_else(|| Error::InvalidInput("rank one needs a generator".into()))?;
        let primes = good_primes(h, cfg.torsion_primes);
        match certify_infinite_order(h, &g[0], &g[1], &primes) {
            Ok(true) => {}
            Ok(false) => return Err(no_cert(h, "the generator class is zero")),
            Err(e) => return Err(no_cert(h, format!("infinite order: {e}"))),
        }
        Some(InfiniteOrder { plus: g[0].clone(), minus: g[1].clone(), primes: decs(&primes) })
    } else {
        None
    };
    let vecs = annihilators(h, cfg, p, k).map_err(|e| no_cert(h, format!("Chabauty at p = {p}: {e}")))?;
    let setup = setup_sieve(h, cfg, &known).map_err(|e| no_cert(h, format!("sieve: {e}")))?;
    let res = &setup.result;
    if !res.sound {
        return Err(no_cert(h, "a known point was eliminated by the sieve"));
    }
    let rc = OddModel::new(h)?.reduce(p)?;
    let proj = res.projection(p).unwrap();
    let mut discs = Vec::new();
    for pi in &res.transcript(p).unwrap().points {
        let center = pi.point;
        let inside: Vec<CurvePoint> = known.iter().filter(|q| rc.reduce_point(q).ok() == Some(center)).cloned().collect();
        if !proj.contains(&center) {
            discs.push(DiscRecord { center: center.to_string(), status: "eliminated".into(), bound: None, differential: None, known: inside });
            continue;
        }
        match best_disc_bound(h, &vecs, center, p, k) {
            Some((b, i)) if b <= inside.len() => discs.push(DiscRecord {
                center: center.to_string(),
                status: "bounded".into(),
                bound: Some(Dec(b as u64)),
                differential: Some(Dec(i as u64)),
                known: inside,
            }),
            other => {
                return Err(no_cert(
                    h,
                    format!(
                        "disc {center} survives the sieve with {} known points and bound {}",
                        inside.len(),
                        other.map(|x| x.0.to_string()).unwrap_or_else(|| "unresolved".into())
                    ),
                ))
            }
        }
    }
    let sieve = SieveRecord {
        s: decs(&cfg.sieve_primes),
        n: Dec(cfg.n),
        d: Dec(setup.d),
        torsion_bound: Dec(setup.torsion_bound),
        torsion_primes: decs(&setup.torsion_primes),
        saturated: setup.saturated.iter().map(|s| SaturationRecord { ell: Dec(s.ell), aux: Dec(s.aux) }).collect(),
        base: setup.base.clone(),
        gamma: setup.gamma.iter().map(|g| g.to_string()).collect(),
        per_prime_multiples: res
            .transcripts
            .iter()
            .map(|t| PrimeRecord {
                p: Dec(t.p),
                invariants: decs(&t.invariants),
                points: t
                    .points
                    .iter()
                    .map(|pi| PointMultiple { point: pi.point.to_string(), multiple: pi.multiple.as_ref().map(|m| decs(m)) })
                    .collect(),
            })
            .collect(),
        survivors: res.survivors.iter().map(|s| decs(s)).collect(),
    };
    Ok(RationalPointCertificate {
        curve: h.label.clone(),
        equation: h.d.to_string(),
        route: "chabauty-sieve".into(),
        claimed_points: known,
        search_height: Dec(cfg.search_height),
        rank_input: RankInput { value: Dec(cfg.rank_bound), source: cfg.rank_source.clone() },
        infinite_order,
        chabauty: Some(ChabautyRecord {
            p: Dec(p),
            precision: Dec(k as u64),
            annihilator_vectors: vecs.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
            disc_bounds: discs,
        }),
        sieve: Some(sieve),
        quotient: None,
        verifier_version: VERIFIER_VERSION.into(),
    })
}
