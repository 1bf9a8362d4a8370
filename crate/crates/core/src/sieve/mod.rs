//! The Mordell–Weil sieve with a finite-index subgroup Γ ⊆ J(ℚ), the choice of
//! the multiplier d, saturation checks and assembly of certificates.

mod certificate;
mod certify;
mod verify;

pub use certificate::{Dec, RationalPointCertificate};
pub use certify::{certify_rational_points, CertifyConfig, CurveConfig, QuotientConfig, SaturationInput};
pub use verify::{verification_failures, verify_certificate};

use crate::algebra::fp::factor_u64;
use crate::curves::{CurvePoint, HyperellipticModel};
use crate::jacobian::{group_structure, l_polynomial, quotient_order, torsion_bound, FpPoint, MumfordDivisor, OddModel, ReducedCurve};
use crate::algebra::Fp;
use crate::{Error, Result};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;

const GAMMA_BUDGET: u64 = 10_000_000;

/// A degree-zero divisor Σ c_i·[P_i] with rational points P_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClass {
    pub terms: Vec<(i64, CurvePoint)>,
}

impl DivisorClass {
    /// [P − Q].
    pub fn difference(p: &CurvePoint, q: &CurvePoint) -> Self {
        DivisorClass { terms: vec![(1, p.clone()), (-1, q.clone())] }
    }

    pub fn scaled(&self, k: i64) -> Self {
        DivisorClass { terms: self.terms.iter().map(|(c, p)| (c * k, p.clone())).collect() }
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|t| t.0).sum()
    }

    /// The reduction in J(𝔽_p).
    pub fn reduce(&self, rc: &ReducedCurve) -> Result<MumfordDivisor<Fp>> {
        if self.degree() != 0 {
            return Err(Error::InvalidInput(format!("{self} has nonzero degree")));
        }
        let mut acc = rc.jac.zero();
        for (c, pt) in &self.terms {
            let d = rc.divisor(&rc.reduce_point(pt)?);
            let d = if *c >= 0 { rc.jac.mul_u(*c as u64, &d) } else { rc.jac.neg(&rc.jac.mul_u(c.unsigned_abs(), &d)) };
            acc = rc.jac.add(&acc, &d);
        }
        Ok(acc)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let sp = if i > 0 { " " } else { "" };
            match c.abs() {
                1 => write!(f, "{sp}{sign}{sp}[{p}]")?,
                a => write!(f, "{sp}{sign}{sp}{a}[{p}]")?,
            }
        }
        Ok(())
    }
}

/// Input to the sieve: Γ is generated by `gamma`, μ uses `base_point`.
#[derive(Clone, Debug)]
pub struct SieveInstance {
    pub curve: HyperellipticModel,
    pub primes: Vec<u64>,
    pub n: u64,
    pub d: u64,
    pub gamma: Vec<DivisorClass>,
    pub known_points: Vec<CurvePoint>,
    pub base_point: CurvePoint,
}

/// Image of one point of C(𝔽_p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointImage {
    pub point: FpPoint,
    /// d·μ(P) in J(𝔽_p)/N·J(𝔽_p).
    pub coords: Vec<u64>,
    /// Smallest n ∈ (ℤ/N)^k with Σ n_i·γ_i ≡ d·μ(P), if any.
    pub multiple: Option<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub struct PrimeTranscript {
    pub p: u64,
    pub invariants: Vec<u64>,
    pub moduli: Vec<u64>,
    pub gamma_coords: Vec<Vec<u64>>,
    pub points: Vec<PointImage>,
}

impl PrimeTranscript {
    fn image(&self, n: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.moduli.len()];
        for (ni, g) in n.iter().zip(&self.gamma_coords) {
            for ((vj, &gj), &m) in v.iter_mut().zip(g).zip(&self.moduli) {
                *vj = ((*vj as u128 + *ni as u128 * gj as u128) % m as u128) as u64;
            }
        }
        v
    }

    /// Order of the image of γ_i in J(𝔽_p)/N.
    pub fn gamma_order(&self, i: usize) -> u64 {
        quotient_order(&self.gamma_coords[i], &self.moduli)
    }
}

#[derive(Clone, Debug)]
pub struct SieveResult {
    pub transcripts: Vec<PrimeTranscript>,
    /// Elements of Γ/NΓ (as coefficient tuples) whose image meets every d·μ(C(𝔽_p)).
    pub survivors: Vec<Vec<u64>>,
    /// For each p ∈ S the points of C(𝔽_p) hit by a survivor.
    pub projections: Vec<(u64, Vec<FpPoint>)>,
    /// Reductions of the known points all lie in every projection.
    pub sound: bool,
}

impl SieveResult {
    pub fn projection(&self, p: u64) -> Option<&[FpPoint]> {
        self.projections.iter().find(|x| x.0 == p).map(|x| x.1.as_slice())
    }

    pub fn transcript(&self, p: u64) -> Option<&PrimeTranscript> {
        self.transcripts.iter().find(|t| t.p == p)
    }
}

/// d for a rank-one Jacobian with Γ = ⟨x⟩. With x = c·g + t (g a generator of
/// the free part), every e with e·J(ℚ) ⊆ Γ is a multiple of the least one,
/// which divides c·#J(ℚ)_tors; comparing ℓ-parts of the order of x in
/// ∏ J(𝔽_p)/N gives v_ℓ(gcd(N, c)) ≤ v_ℓ(d_free) + v_ℓ(#tors), so
/// d = gcd(N, d_free·tb²) is valid.
pub fn compute_d(n: u64, torsion_bound: u64, free_gen_quotient_order: u64) -> Result<u64> {
    if n == 0 || torsion_bound == 0 || free_gen_quotient_order == 0 || n % free_gen_quotient_order != 0 {
        return Err(Error::InvalidInput(format!(
            "generator order {free_gen_quotient_order} does not divide N = {n}"
        )));
    }
    let d_free = n / free_gen_quotient_order;
    let tb = (torsion_bound % n) as u128;
    let m = (d_free as u128 * tb % n as u128 * tb % n as u128) as u64;
    Ok(n.gcd(&m))
}

/// d for a rank-zero Jacobian: e = [J(ℚ) : Γ] divides tb/#Γ.
pub fn compute_d_rank_zero(n: u64, torsion_bound: u64, gamma_order: u64) -> Result<u64> {
    if gamma_order == 0 || torsion_bound % gamma_order != 0 {
        return Err(Error::InvalidInput(format!("#Γ = {gamma_order} does not divide the torsion bound {torsion_bound}")));
    }
    Ok(n.gcd(&(torsion_bound / gamma_order)))
}

/// Remove the ℓ-part of d for primes ℓ at which Γ is certified saturated.
pub fn remove_saturated(d: u64, ells: &[u64]) -> u64 {
    let mut d = d;
    for &l in ells {
        while l > 1 && d % l == 0 {
            d /= l;
        }
    }
    d
}

/// Order of the subgroup of ∏ ℤ/m_j generated by the given vectors.
pub fn subgroup_order(gens: &[Vec<u64>], moduli: &[u64]) -> Result<u64> {
    let zero = vec![0u64; moduli.len()];
    let mut seen: HashSet<Vec<u64>> = HashSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w: Vec<u64> = v.iter().zip(g).zip(moduli).map(|((&a, &b), &m)| (a + b) % m).collect();
            if seen.insert(w.clone()) {
                if seen.len() as u64 > GAMMA_BUDGET {
                    return Err(Error::BudgetExceeded("subgroup enumeration".into()));
                }
                frontier.push(w);
            }
        }
    }
    Ok(seen.len() as u64)
}

fn transcript_at(inst: &SieveInstance, om: &OddModel, p: u64) -> Result<PrimeTranscript> {
    let rc = om.reduce(p)?;
    let order = l_polynomial(&inst.curve, p)?.jacobian_order();
    let gs = group_structure(&rc, order)?;
    let moduli = gs.quotient_moduli(inst.n);
    let gamma_coords = inst.gamma.iter().map(|g| gs.quotient_coords(&g.reduce(&rc)?, inst.n)).collect::<Result<Vec<_>>>()?;
    let base = rc.reduce_point(&inst.base_point)?;
    let mut points = Vec::new();
    for pt in rc.points() {
        let mu = rc.jac.mul_u(inst.d, &rc.mu_embed(&pt, &base));
        points.push(PointImage { point: pt, coords: gs.quotient_coords(&mu, inst.n)?, multiple: None });
    }
    Ok(PrimeTranscript { p, invariants: gs.invariants.clone(), moduli, gamma_coords, points })
}

/// All tuples of (ℤ/N)^k in lexicographic order.
fn tuples(n: u64, k: usize) -> Result<Vec<Vec<u64>>> {
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > GAMMA_BUDGET as u128 {
        return Err(Error::BudgetExceeded(format!("Γ/NΓ has {total} elements")));
    }
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out.into_iter().flat_map(|v| (0..n).map(move |i| [v.clone(), vec![i]].concat())).collect();
    }
    Ok(out)
}

/// The sieve of the fiber product ∏ C(𝔽_p) ×_{∏ J(𝔽_p)/N} Γ/NΓ.
pub fn run_sieve(inst: &SieveInstance) -> Result<SieveResult> {
    if inst.n == 0 || inst.d == 0 || inst.n % inst.d != 0 {
        return Err(Error::InvalidInput(format!("d = {} must divide N = {}", inst.d, inst.n)));
    }
    let om = OddModel::new(&inst.curve)?;
    let mut transcripts: Vec<PrimeTranscript> =
        inst.primes.par_iter().map(|&p| transcript_at(inst, &om, p)).collect::<Result<Vec<_>>>()?;
    let all = tuples(inst.n, inst.gamma.len())?;
    let mut survivors = Vec::new();
    let mut hit: Vec<HashSet<Vec<u64>>> = vec![HashSet::new(); transcripts.len()];
    let lookup: Vec<HashMap<Vec<u64>, ()>> =
        transcripts.iter().map(|t| t.points.iter().map(|pi| (pi.coords.clone(), ())).collect()).collect();
    for tr in transcripts.iter_mut() {
        let mut first: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
        for n in &all {
            first.entry(tr.image(n)).or_insert_with(|| n.clone());
        }
        for pi in tr.points.iter_mut() {
            pi.multiple = first.get(&pi.coords).cloned();
        }
    }
    for n in &all {
        let imgs: Vec<Vec<u64>> = transcripts.iter().map(|t| t.image(n)).collect();
        if imgs.iter().zip(&lookup).all(|(v, l)| l.contains_key(v)) {
            for (h, v) in hit.iter_mut().zip(imgs) {
                h.insert(v);
            }
            survivors.push(n.clone());
        }
    }
    let projections: Vec<(u64, Vec<FpPoint>)> = transcripts
        .iter()
        .zip(&hit)
        .map(|(t, h)| (t.p, t.points.iter().filter(|pi| h.contains(&pi.coords)).map(|pi| pi.point).collect()))
        .collect();
    let mut sound = true;
    for (p, proj) in &projections {
        let rc = om.reduce(*p)?;
        for q in &inst.known_points {
            if !proj.contains(&rc.reduce_point(q)?) {
                sound = false;
            }
        }
    }
    Ok(SieveResult { transcripts, survivors, projections, sound })
}

/// Certifies gen ∉ ℓ·J(ℚ) and that J(ℚ) has no ℓ-torsion, so a rank-one Γ = ⟨gen⟩
/// is saturated at ℓ. Err(Inconclusive) when either condition cannot be shown.
pub fn saturation_check(h: &HyperellipticModel, gen: &DivisorClass, ell: u64, aux_prime: u64, torsion_primes: &[u64]) -> Result<bool> {
    let tb = torsion_bound(h, torsion_primes)?;
    if tb % ell == 0 {
        return Err(Error::Inconclusive(format!("the torsion bound {tb} is divisible by {ell}")));
    }
    let om = OddModel::new(h)?;
    let rc = om.reduce(aux_prime)?;
    let order = l_polynomial(h, aux_prime)?.jacobian_order();
    let gs = group_structure(&rc, order)?;
    let c = gs.quotient_coords(&gen.reduce(&rc)?, ell)?;
    if c.iter().all(|&x| x == 0) {
        return Err(Error::Inconclusive(format!("generator is zero in J(F_{aux_prime})/{ell}")));
    }
    Ok(true)
}

/// Order of the image of a class in ∏_{p ∈ S} J(𝔽_p)/N.
pub fn product_quotient_order(res: &SieveResult, i: usize) -> u64 {
    res.transcripts.iter().fold(1u64, |acc, t| acc.lcm(&t.gamma_order(i)))
}

/// Primes dividing n, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|x| x.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Corpus;
    use crate::jacobian::good_primes;

    fn curve(id: &str) -> HyperellipticModel {
        Corpus::default_corpus().unwrap().curve(id).unwrap().model.clone()
    }

    fn known() -> Vec<CurvePoint> {
        vec!["(0,0)".parse().unwrap(), CurvePoint::Infinity { sign: 1 }, CurvePoint::Infinity { sign: -1 }]
    }

    fn instance(id: &str, primes: &[u64], n: u64, d: u64) -> SieveInstance {
        let x = DivisorClass::difference(&"(0,0)".parse().unwrap(), &CurvePoint::Infinity { sign: 1 });
        SieveInstance {
            curve: curve(id),
            primes: primes.to_vec(),
            n,
            d,
            gamma: vec![x],
            known_points: known(),
            base_point: CurvePoint::Infinity { sign: 1 },
        }
    }

    #[test]
    fn compute_d_examples() {
        assert_eq!(compute_d(22, 3, 22).unwrap(), 1);
        assert_eq!(compute_d(47, 3, 47).unwrap(), 1);
        assert_eq!(compute_d(2, 3, 1).unwrap(), 2);
        assert_eq!(remove_saturated(2, &[2]), 1);
        assert!(compute_d(22, 3, 5).is_err());
        assert_eq!(compute_d(12, 2, 3).unwrap(), 4);
    }

    #[test]
    fn sieve_c216() {
        let res = run_sieve(&instance("C2(16)", &[5, 11], 22, 1)).unwrap();
        assert!(res.sound);
        assert_eq!(product_quotient_order(&res, 0), 22);
        assert_eq!(res.projection(5).unwrap().len(), 3);
        let t11 = res.transcript(11).unwrap();
        assert_eq!(t11.points.iter().filter(|p| p.multiple.is_some()).count(), 8);
    }

    #[test]
    fn sieve_c316_and_saturation() {
        let h = curve("C3(16)");
        let res = run_sieve(&instance("C3(16)", &[3], 2, 1)).unwrap();
        assert!(res.sound);
        assert_eq!(res.transcript(3).unwrap().points.len(), 5);
        assert_eq!(res.projection(3).unwrap().len(), 3);
        let x = DivisorClass::difference(&"(0,0)".parse().unwrap(), &CurvePoint::Infinity { sign: 1 });
        let primes = good_primes(&h, 20);
        assert!(saturation_check(&h, &x, 2, 17, &primes).unwrap());
        assert!(saturation_check(&h, &x.scaled(2), 2, 17, &primes).is_err());
    }

    #[test]
    fn sieve_c220() {
        let res = run_sieve(&instance("C2(20)", &[3, 37], 47, 1)).unwrap();
        assert!(res.sound);
        assert_eq!(res.projection(3).unwrap().len(), 3);
        let t3 = res.transcript(3).unwrap();
        assert_eq!(t3.gamma_order(0), 47);
        assert_eq!(res.transcript(37).unwrap().points.len(), 39);
    }
}
