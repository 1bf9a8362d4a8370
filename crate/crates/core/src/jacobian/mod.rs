//! Jacobians of the discriminant curves over finite fields: Cantor arithmetic,
//! point counts, L-polynomials, group structure and discrete logarithms in
//! quotients J(𝔽_p)/N.
//!
//! Arithmetic runs on an odd-degree model. An even-degree curve y² = d(t) with a
//! rational root r of d is carried to w² = f(s) by t = r + 1/s, y = w/s^{g+1};
//! f(s) = s^{2g+1}·e(1/s) where d(x + r) = x·e(x), so deg f = 2g + 1 with
//! leading coefficient d'(r) and constant term lc(d).

mod cantor;
mod count;
mod group;

pub use cantor::{Jacobian, MumfordDivisor};
pub use count::{count_points, good_reduction, l_polynomial, LPolynomial};
pub use group::{
    certify_infinite_order, dlog_in_quotient, good_primes, group_structure, quotient_order, random_element, torsion_bound,
    AbelianGroupStructure, SylowBasis,
};

use crate::algebra::rational::{rational_sqrt, to_i64};
use crate::algebra::{Fp, Rational, Ring, UniPoly};
use crate::curves::{CurvePoint, HyperellipticModel};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// How the odd model is obtained from y² = d(t).
#[derive(Clone, Debug, PartialEq)]
pub enum Chart {
    Identity,
    Shift(Rational),
}

/// A point on w² = f(s); `Inf` is the unique point at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum OddPoint<F> {
    Inf,
    Aff(F, F),
}

#[derive(Clone, Debug)]
pub struct OddModel {
    pub label: String,
    pub chart: Chart,
    pub d: UniPoly<Rational>,
    pub f: UniPoly<Rational>,
    pub g: usize,
}

impl OddModel {
    pub fn new(h: &HyperellipticModel) -> Result<OddModel> {
        let g = h.genus;
        if h.is_odd() {
            return Ok(OddModel { label: h.label.clone(), chart: Chart::Identity, d: h.d.clone(), f: h.d.clone(), g });
        }
        let mut roots = h.rational_weierstrass();
        if roots.is_empty() {
            return Err(Error::InvalidCurve(format!("{}: no rational Weierstrass point", h.label)));
        }
        roots.sort_by_key(|r| (r.numer().abs() + r.denom(), r.is_negative()));
        let r = roots[0].clone();
        Ok(Self::with_root(h, r))
    }

    fn with_root(h: &HyperellipticModel, r: Rational) -> OddModel {
        let g = h.genus;
        let z = Rational::zero();
        let shifted = h.d.compose(&UniPoly::new(vec![r.clone(), Rational::one()], z.clone()));
        // d(x + r) = x·e(x)
        let e = UniPoly::new(shifted.coeffs()[1..].to_vec(), z);
        let f = e.reverse(2 * g + 1);
        OddModel { label: h.label.clone(), chart: Chart::Shift(r), d: h.d.clone(), f, g }
    }

    pub fn root(&self) -> Option<&Rational> {
        match &self.chart {
            Chart::Shift(r) => Some(r),
            Chart::Identity => None,
        }
    }

    /// Image of a rational point of y² = d(t) on the odd model.
    pub fn map_point(&self, p: &CurvePoint) -> Result<OddPoint<Rational>> {
        let g1 = (self.g + 1) as i32;
        match (&self.chart, p) {
            (Chart::Identity, CurvePoint::Affine { t, y }) => Ok(OddPoint::Aff(t.clone(), y.clone())),
            (Chart::Identity, CurvePoint::Infinity { .. }) => Ok(OddPoint::Inf),
            (Chart::Shift(r), CurvePoint::Affine { t, y }) => {
                if t == r {
                    return Ok(OddPoint::Inf);
                }
                let s = (t - r).recip();
                Ok(OddPoint::Aff(s.clone(), y * s.pow(g1)))
            }
            (Chart::Shift(_), CurvePoint::Infinity { sign }) => {
                let root = rational_sqrt(self.d.lc())
                    .ok_or_else(|| Error::InvalidInput(format!("{}: points at infinity are not rational", self.label)))?;
                Ok(OddPoint::Aff(Rational::zero(), root * Rational::from_integer((*sign as i64).into())))
            }
        }
    }

    pub fn reduce(&self, p: u64) -> Result<ReducedCurve> {
        if p == 2 || !crate::algebra::fp::is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let red = |q: &UniPoly<Rational>| -> Result<UniPoly<Fp>> {
            let c: Option<Vec<Fp>> = q.coeffs().iter().map(|a| reduce_rational(a, p)).collect();
            Ok(UniPoly::new(c.ok_or(Error::BadPrime(p))?, Fp::zero(p)))
        };
        let d = red(&self.d)?;
        let f = red(&self.f)?;
        if d.degree() != self.d.degree() || f.degree() != Some(2 * self.g + 1) {
            return Err(Error::BadPrime(p));
        }
        if d.gcd(&d.derivative()).degree() != Some(0) || f.gcd(&f.derivative()).degree() != Some(0) {
            return Err(Error::BadPrime(p));
        }
        let r = match &self.chart {
            Chart::Identity => None,
            Chart::Shift(r) => Some(reduce_rational(r, p).ok_or(Error::BadPrime(p))?),
        };
        let sqrt_lc = rational_sqrt(self.d.lc()).and_then(|q| reduce_rational(&q, p));
        Ok(ReducedCurve { p, g: self.g, odd_degree: self.chart == Chart::Identity, d, r, sqrt_lc, jac: Jacobian::new(f) })
    }
}

pub fn reduce_rational(a: &Rational, p: u64) -> Option<Fp> {
    let pb = BigInt::from(p);
    if (a.denom() % &pb).is_zero() {
        return None;
    }
    let n = a.numer().mod_floor(&pb).to_u64()?;
    let dd = a.denom().mod_floor(&pb).to_u64()?;
    Some(Fp::from_u64(n, p).times(&Fp::from_u64(dd, p).inv_fp()))
}

trait InvFp {
    fn inv_fp(&self) -> Fp;
}

impl InvFp for Fp {
    fn inv_fp(&self) -> Fp {
        use crate::algebra::Field;
        self.inv().expect("unit")
    }
}

/// A point of the even (original) model over 𝔽_p. At infinity `w` is the
/// limit of y/t^{g+1}; the single point at infinity of an odd model has w = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FpPoint {
    Affine { t: u64, y: u64 },
    Infinity { w: u64 },
}

impl fmt::Display for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpPoint::Affine { t, y } => write!(f, "({t},{y})"),
            FpPoint::Infinity { w } => write!(f, "inf[{w}]"),
        }
    }
}

/// Reduction of an odd model at a good prime.
#[derive(Clone, Debug)]
pub struct ReducedCurve {
    pub p: u64,
    pub g: usize,
    pub odd_degree: bool,
    /// y² = d(t) over 𝔽_p.
    pub d: UniPoly<Fp>,
    pub r: Option<Fp>,
    /// Reduction of the rational square root of lc(d), when it exists.
    pub sqrt_lc: Option<Fp>,
    pub jac: Jacobian<Fp>,
}

impl ReducedCurve {
    /// All 𝔽_p-points of the even model, sorted.
    pub fn points(&self) -> Vec<FpPoint> {
        let p = self.p;
        let mut out = Vec::new();
        for t in 0..p {
            let v = self.d.eval(&Fp::from_u64(t, p));
            if v.v == 0 {
                out.push(FpPoint::Affine { t, y: 0 });
            } else if let Some(y) = v.sqrt() {
                out.push(FpPoint::Affine { t, y: y.v });
                out.push(FpPoint::Affine { t, y: p - y.v });
            }
        }
        if self.odd_degree {
            out.push(FpPoint::Infinity { w: 0 });
        } else if let Some(w) = self.d.lc().sqrt() {
            out.push(FpPoint::Infinity { w: w.v });
            out.push(FpPoint::Infinity { w: p - w.v });
        }
        out.sort();
        out
    }

    /// Reduction of a rational point.
    pub fn reduce_point(&self, pt: &CurvePoint) -> Result<FpPoint> {
        let p = self.p;
        let g1 = (self.g + 1) as i32;
        match pt {
            CurvePoint::Affine { t, y } => match reduce_rational(t, p) {
                Some(tb) => Ok(FpPoint::Affine { t: tb.v, y: reduce_rational(y, p).ok_or(Error::BadPrime(p))?.v }),
                None if self.odd_degree => Ok(FpPoint::Infinity { w: 0 }),
                None => {
                    let w = y / t.pow(g1);
                    Ok(FpPoint::Infinity { w: reduce_rational(&w, p).ok_or(Error::BadPrime(p))?.v })
                }
            },
            CurvePoint::Infinity { .. } if self.odd_degree => Ok(FpPoint::Infinity { w: 0 }),
            CurvePoint::Infinity { sign } => {
                let w = self.sqrt_lc.ok_or_else(|| Error::InvalidInput("points at infinity are not rational".into()))?;
                Ok(FpPoint::Infinity { w: if *sign > 0 { w.v } else { w.negate().v } })
            }
        }
    }

    /// Image on the odd model over 𝔽_p.
    pub fn to_odd(&self, pt: &FpPoint) -> OddPoint<Fp> {
        let p = self.p;
        let g1 = (self.g + 1) as u64;
        match (self.r, *pt) {
            (None, FpPoint::Affine { t, y }) => OddPoint::Aff(Fp::from_u64(t, p), Fp::from_u64(y, p)),
            (None, FpPoint::Infinity { .. }) => OddPoint::Inf,
            (Some(r), FpPoint::Affine { t, y }) => {
                if t == r.v {
                    return OddPoint::Inf;
                }
                let s = Fp::from_u64(t, p).minus(&r).inv_fp();
                OddPoint::Aff(s, Fp::from_u64(y, p).times(&s.pow_u(g1)))
            }
            (Some(_), FpPoint::Infinity { w }) => OddPoint::Aff(Fp::zero(p), Fp::from_u64(w, p)),
        }
    }

    /// The class [P − ∞′] where ∞′ is the point at infinity of the odd model.
    pub fn divisor(&self, pt: &FpPoint) -> MumfordDivisor<Fp> {
        match self.to_odd(pt) {
            OddPoint::Inf => self.jac.zero(),
            OddPoint::Aff(s, w) => self.jac.point(&s, &w),
        }
    }

    /// μ(P) = [P − base].
    pub fn mu_embed(&self, pt: &FpPoint, base: &FpPoint) -> MumfordDivisor<Fp> {
        self.jac.sub(&self.divisor(pt), &self.divisor(base))
    }

    /// Lowest nonnegative representative as an i64.
    pub fn fp(&self, a: i64) -> Fp {
        Fp::new(a, self.p)
    }
}

/// Exact integer value of a rational, if integral and small.
pub fn small_integer(a: &Rational) -> Option<i64> {
    if a.is_integer() {
        to_i64(&a.to_integer())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Corpus;

    #[test]
    fn odd_model_maps_known_points() {
        let c = Corpus::default_corpus().unwrap();
        for id in ["C2(16)", "C3(16)", "C4(16)", "C2(20)"] {
            let h = &c.curve(id).unwrap().model;
            let om = OddModel::new(h).unwrap();
            assert_eq!(om.f.degree(), Some(2 * h.genus + 1), "{id}");
            for pt in crate::curves::rational_point_search(h, 5) {
                if let OddPoint::Aff(s, w) = om.map_point(&pt).unwrap() {
                    assert_eq!(&w * &w, om.f.eval(&s), "{id} {pt}");
                }
            }
        }
    }
}
