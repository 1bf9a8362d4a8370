//! Curves y² = d(t) with d(t) = q(t^k): the quotient y² = q(u) and the
//! pullback of its rational points.

use crate::algebra::rational::rational_sqrt;
use crate::algebra::{Rational, UniPoly};
use crate::curves::{rational_point_search, Corpus, CurvePoint, HyperellipticModel};
use crate::jacobian::{group_structure, l_polynomial, OddModel};
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// Torsion groups of elliptic curves over ℚ as ℤ/a × ℤ/b with a | b.
pub const MAZUR_GROUPS: [(u64, u64); 15] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (1, 8),
    (1, 9),
    (1, 10),
    (1, 12),
    (2, 2),
    (2, 4),
    (2, 6),
    (2, 8),
];

/// y² = q(u) where d(t) = q(t^k).
pub fn power_quotient(h: &HyperellipticModel, k: u32) -> Result<HyperellipticModel> {
    let k = k as usize;
    if k < 2 {
        return Err(Error::InvalidInput("the exponent must be at least 2".into()));
    }
    let cs = h.d.coeffs();
    if cs.iter().enumerate().any(|(i, c)| i % k != 0 && !c.is_zero()) {
        return Err(Error::InvalidInput(format!("{}: the equation is not a polynomial in t^{k}", h.label)));
    }
    let q: Vec<Rational> = cs.iter().step_by(k).cloned().collect();
    HyperellipticModel::new(&format!("{}/(u = t^{k})", h.label), UniPoly::new(q, Rational::zero()))
}

/// A rational k-th root of u, if one exists.
fn rational_root(u: &Rational, k: u32) -> Option<Rational> {
    if u.is_zero() {
        return Some(Rational::zero());
    }
    let neg = u.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let a = u.abs();
    let root = |n: &num_bigint::BigInt| -> Option<num_bigint::BigInt> {
        let r = n.nth_root(k);
        (r.pow(k) == *n).then_some(r)
    };
    let r = Rational::new(root(a.numer())?, root(a.denom())?);
    Some(if neg { -r } else { r })
}

/// All rational points of h over the given points of y² = q(u), u = t^k.
/// The point list must be closed under (u, y) ↦ (u, −y).
pub fn pullback_points(h: &HyperellipticModel, e_pts: &[CurvePoint], k: u32) -> Result<Vec<CurvePoint>> {
    let set: BTreeSet<&CurvePoint> = e_pts.iter().collect();
    for p in e_pts {
        if !set.contains(&p.conjugate()) {
            return Err(Error::InvalidInput(format!("the point list is not closed under negation: {p} without its conjugate")));
        }
    }
    let mut out = BTreeSet::new();
    for p in e_pts {
        match p {
            CurvePoint::Affine { t: u, y } => {
                let Some(r) = rational_root(u, k) else { continue };
                let mut ts = vec![r.clone()];
                if k % 2 == 0 && !r.is_zero() {
                    ts.push(-r);
                }
                for t in ts {
                    out.insert(CurvePoint::affine(t, y.clone()));
                }
            }
            CurvePoint::Infinity { .. } => {
                out.insert(p.clone());
            }
        }
    }
    for p in &out {
        if !h.contains(p) {
            return Err(Error::InvalidInput(format!("{p} does not lie on {}", h.label)));
        }
    }
    Ok(out.into_iter().collect())
}

/// C₁(20)(ℚ) from the full list of rational points on y² = −27u⁴ + 22u² + 5.
/// Every point of C₁(20) up to height_check must appear in the result.
pub fn quartic_pullback_c120(e_points: &[CurvePoint], height_check: u64) -> Result<Vec<CurvePoint>> {
    let corpus = Corpus::default_corpus()?;
    let rec = corpus.curve("C1(20)").ok_or_else(|| Error::InvalidInput("C1(20) missing from the corpus".into()))?;
    let pts = pullback_points(&rec.model, e_points, 2)?;
    for p in rational_point_search(&rec.model, height_check) {
        if !pts.contains(&p) {
            return Err(Error::Inconclusive(format!("{p} on C1(20) is not a pullback")));
        }
    }
    Ok(pts)
}

/// Largest order of a group on Mazur's list embedding in E(𝔽_p) for every
/// good prime p of the list; bounds #E(ℚ)_tors. E must be a genus-one model
/// with a rational Weierstrass point.
pub fn elliptic_torsion_bound(e: &HyperellipticModel, primes: &[u64]) -> Result<u64> {
    if e.genus != 1 {
        return Err(Error::InvalidCurve(format!("{} is not of genus one", e.label)));
    }
    let om = OddModel::new(e)?;
    let mut allowed: Vec<(u64, u64)> = MAZUR_GROUPS.to_vec();
    let mut used = 0;
    for &p in primes {
        let Ok(rc) = om.reduce(p) else { continue };
        let n = l_polynomial(e, p)?.jacobian_order();
        let gs = group_structure(&rc, n)?;
        let (c, d) = match gs.invariants.as_slice() {
            [] => (1, 1),
            [d] => (1, *d),
            [c, d] => (*c, *d),
            _ => return Err(Error::InvalidCurve(format!("{}: E(F_{p}) needs more than two generators", e.label))),
        };
        allowed.retain(|&(a, b)| c % a == 0 && d % b == 0);
        used += 1;
    }
    if used == 0 {
        return Err(Error::BadPrime(*primes.first().unwrap_or(&0)));
    }
    Ok(allowed.iter().map(|(a, b)| a * b).max().unwrap_or(1))
}

/// Whether the model has rational points at infinity.
pub fn has_rational_infinity(e: &HyperellipticModel) -> bool {
    e.degree() % 2 == 0 && rational_sqrt(e.d.lc()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::curves::tpoly;
    use crate::jacobian::good_primes;
    use num_traits::One;

    fn c120() -> HyperellipticModel {
        Corpus::default_corpus().unwrap().curve("C1(20)").unwrap().model.clone()
    }

    #[test]
    fn quotient_quartic() {
        let e = power_quotient(&c120(), 2).unwrap();
        assert_eq!(e.d, tpoly(&[5, 0, 22, 0, -27]));
        assert_eq!(e.genus, 1);
        assert!(!has_rational_infinity(&e));
        assert!(power_quotient(&c120(), 3).is_err());
        // u = 0: y² = 5 has no rational solution
        assert!(rational_sqrt(&e.d.eval(&Rational::zero())).is_none());
    }

    #[test]
    fn quotient_torsion_and_points() {
        let e = power_quotient(&c120(), 2).unwrap();
        let tb = elliptic_torsion_bound(&e, &good_primes(&e, 20)).unwrap();
        assert_eq!(tb, 6);
        let pts = rational_point_search(&e, 50);
        assert_eq!(pts.len(), 6);
        let back = quartic_pullback_c120(&pts, 30).unwrap();
        assert_eq!(back, vec![CurvePoint::affine(rat(-1, 1), Rational::zero()), CurvePoint::affine(Rational::one(), Rational::zero())]);
    }

    #[test]
    fn pullback_rejects_open_lists() {
        let e = power_quotient(&c120(), 2).unwrap();
        let pts: Vec<CurvePoint> = rational_point_search(&e, 5).into_iter().filter(|p| matches!(p, CurvePoint::Affine { y, .. } if y.is_positive())).collect();
        assert!(!pts.is_empty());
        assert!(matches!(pullback_points(&c120(), &pts, 2), Err(Error::InvalidInput(_))));
        // a non-square u contributes nothing
        let p = CurvePoint::affine(rat(1, 3), rat(8, 3));
        assert!(e.contains(&p));
        assert!(pullback_points(&c120(), &[p.clone(), p.conjugate()], 2).unwrap().is_empty());
    }
}
