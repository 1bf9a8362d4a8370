//! Arithmetic meaning of the rational points: cubic field classes of fibers,
//! the exceptional ℤ/16 curve, cusp detection, witness scans and the
//! elliptic quotient used for C₁(20).

mod quotient;
mod tate;

pub use quotient::{elliptic_torsion_bound, has_rational_infinity, power_quotient, pullback_points, quartic_pullback_c120, MAZUR_GROUPS};
pub use tate::{
    derived_exceptional_curve, exceptional_fiber_polynomial, exceptional_field_polynomial, fiber_tate_curve,
    printed_exceptional_curve, same_field, torsion_order_at_origin, x116_tate_forms, EPoint, TateCurve, Weierstrass,
};

use crate::algebra::rational::{bigint_sign, fmt_rational, rational_roots};
use crate::algebra::{is_rational_square, Rational, UniPoly};
use crate::curves::{fiber_at_infinity, fiber_cubic, CurvePoint, DegreeThreeMap};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldStatus {
    Reducible,
    Cyclic,
    S3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    TotallyReal,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicFieldClass {
    pub status: FieldStatus,
    pub signature: Signature,
    #[serde(serialize_with = "ser_rational")]
    pub discriminant: Rational,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(q))
}

impl fmt::Display for FieldStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldStatus::Reducible => "reducible",
            FieldStatus::Cyclic => "cyclic",
            FieldStatus::S3 => "s3",
        })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::TotallyReal => "totally_real",
            Signature::Complex => "complex",
        })
    }
}

/// Galois type and signature of the root field of a cubic.
pub fn classify_cubic(h: &UniPoly<Rational>) -> Result<CubicFieldClass> {
    if h.degree() != Some(3) {
        return Err(Error::InvalidInput(format!("{h} is not a cubic")));
    }
    let disc = h.discriminant()?;
    let signature = if disc.is_negative() { Signature::Complex } else { Signature::TotallyReal };
    let status = if !rational_roots(h).is_empty() {
        FieldStatus::Reducible
    } else if is_rational_square(&disc) {
        FieldStatus::Cyclic
    } else {
        FieldStatus::S3
    };
    Ok(CubicFieldClass { status, signature, discriminant: disc })
}

/// A parameter value: a rational t or t = ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TValue {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TValue::Finite(q) => f.write_str(&fmt_rational(q)),
            TValue::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberKind {
    Cusp,
    EllipticPoint,
}

#[derive(Clone, Debug)]
pub struct FiberInterpretation {
    pub t0: TValue,
    pub kind: FiberKind,
    /// Why the fiber is a cusp.
    pub reason: Option<String>,
    pub cubic: Option<UniPoly<Rational>>,
    pub class: Option<CubicFieldClass>,
    pub tate: Option<TateCurve>,
}

impl FiberInterpretation {
    fn cusp(t0: TValue, reason: String) -> Self {
        FiberInterpretation { t0, kind: FiberKind::Cusp, reason: Some(reason), cubic: None, class: None, tate: None }
    }
}

/// Cusp or elliptic point for the fiber of m over t0.
pub fn interpret_t(m: &DegreeThreeMap, t0: &TValue) -> Result<FiberInterpretation> {
    let (h, t) = match t0 {
        TValue::Finite(t) => match fiber_cubic(m, t) {
            Ok(h) => (h, Some(t)),
            Err(Error::DegenerateFiber { reason, .. }) => return Ok(FiberInterpretation::cusp(t0.clone(), reason)),
            Err(e) => return Err(e),
        },
        TValue::Infinity => {
            let h = fiber_at_infinity(m)?;
            if h.degree() != Some(3) || h.discriminant()?.is_zero() {
                return Ok(FiberInterpretation::cusp(t0.clone(), "degenerate fiber at infinity".into()));
            }
            (h, None)
        }
    };
    let class = classify_cubic(&h)?;
    if class.status == FieldStatus::Reducible {
        return Ok(FiberInterpretation::cusp(t0.clone(), "the fiber has a rational point".into()));
    }
    let tate = match t {
        Some(t) => fiber_tate_curve(m, t, &h)?,
        None => None,
    };
    Ok(FiberInterpretation { t0: t0.clone(), kind: FiberKind::EllipticPoint, reason: None, cubic: Some(h), class: Some(class), tate })
}

/// The parameter value below a rational point of the discriminant curve.
pub fn point_parameter(m: &DegreeThreeMap, p: &CurvePoint) -> TValue {
    match p {
        CurvePoint::Affine { t, .. } => TValue::Finite(t - &m.shift),
        CurvePoint::Infinity { .. } => TValue::Infinity,
    }
}

pub fn interpret_point(m: &DegreeThreeMap, p: &CurvePoint) -> Result<FiberInterpretation> {
    interpret_t(m, &point_parameter(m, p))
}

/// Rationals of height max(|a|, b) ≤ bound, by increasing height, then value.
pub fn rationals_by_height(bound: u64) -> Vec<Rational> {
    let bound = bound as i64;
    let mut out = Vec::new();
    for h in 1..=bound {
        let mut level: Vec<Rational> = (1..=h)
            .flat_map(|b| (-h..=h).map(move |a| (a, b)))
            .filter(|&(a, b)| a.abs().max(b) == h && a.gcd(&b) == 1)
            .map(|(a, b)| Rational::new(a.into(), b.into()))
            .collect();
        level.sort();
        out.extend(level);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    #[serde(serialize_with = "ser_rational")]
    pub t: Rational,
    pub class: Option<CubicFieldClass>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct ScanCounts {
    pub degenerate: usize,
    pub reducible: usize,
    pub cyclic: usize,
    pub s3_real: usize,
    pub s3_complex: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub map: String,
    pub height_bound: u64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub first_complex_witness: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub first_real_nonsquare_witness: Option<Rational>,
    pub counts: ScanCounts,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&fmt_rational(q)),
        None => s.serialize_none(),
    }
}

impl ScanReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,discriminant,class,signature\n");
        for r in &self.rows {
            match &r.class {
                Some(c) => out.push_str(&format!("{},{},{},{}\n", fmt_rational(&r.t), fmt_rational(&c.discriminant), c.status, c.signature)),
                None => out.push_str(&format!("{},0,degenerate,\n", fmt_rational(&r.t))),
            }
        }
        out
    }

    pub fn class_of(&self, t: &Rational) -> Option<&CubicFieldClass> {
        self.rows.iter().find(|r| &r.t == t).and_then(|r| r.class.as_ref())
    }
}

fn tally(rows: &[ScanRow]) -> ScanCounts {
    let mut c = ScanCounts::default();
    for r in rows {
        match &r.class {
            None => c.degenerate += 1,
            Some(k) => match (k.status, k.signature) {
                (FieldStatus::Reducible, _) => c.reducible += 1,
                (FieldStatus::Cyclic, _) => c.cyclic += 1,
                (FieldStatus::S3, Signature::TotallyReal) => c.s3_real += 1,
                (FieldStatus::S3, Signature::Complex) => c.s3_complex += 1,
            },
        }
    }
    c
}

/// Classify K_t for every t of height ≤ height_bound.
pub fn scan_family(m: &DegreeThreeMap, height_bound: u64) -> Result<ScanReport> {
    scan_values(m, height_bound, &rationals_by_height(height_bound))
}

/// Classify K_t over an explicit list of parameters, in the given order.
pub fn scan_values(m: &DegreeThreeMap, height_bound: u64, ts: &[Rational]) -> Result<ScanReport> {
    if height_bound == 0 {
        return Err(Error::InvalidInput("height bound must be positive".into()));
    }
    let rows: Vec<ScanRow> = ts
        .par_iter()
        .map(|t| -> Result<ScanRow> {
            let class = match fiber_cubic(m, t) {
                Ok(h) => Some(classify_cubic(&h)?),
                Err(Error::DegenerateFiber { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ScanRow { t: t.clone(), class })
        })
        .collect::<Result<_>>()?;
    let first = |sig: Signature| {
        rows.iter()
            .find(|r| r.class.as_ref().is_some_and(|c| c.status == FieldStatus::S3 && c.signature == sig))
            .map(|r| r.t.clone())
    };
    Ok(ScanReport {
        map: m.id.clone(),
        height_bound,
        first_complex_witness: first(Signature::Complex),
        first_real_nonsquare_witness: first(Signature::TotallyReal),
        counts: tally(&rows),
        rows,
    })
}

/// Sign of a rational as −1, 0, 1.
pub fn sign(q: &Rational) -> i32 {
    bigint_sign(q)
}

/// Height max(|a|, b) of a rational a/b.
pub fn height(q: &Rational) -> BigInt {
    q.numer().abs().max(q.denom().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::numfield::nf_is_isomorphic;
    use crate::algebra::rat;
    use crate::curves::{tpoly, Corpus};

    #[test]
    fn classify_examples() {
        let c = classify_cubic(&exceptional_field_polynomial()).unwrap();
        assert_eq!((c.status, c.signature), (FieldStatus::Cyclic, Signature::TotallyReal));
        let c = classify_cubic(&tpoly(&[-2, 0, 0, 1])).unwrap();
        assert_eq!((c.status, c.signature), (FieldStatus::S3, Signature::Complex));
        assert_eq!(c.discriminant, rat(-108, 1));
        assert_eq!(classify_cubic(&tpoly(&[0, -1, 0, 1])).unwrap().status, FieldStatus::Reducible);
        assert!(classify_cubic(&tpoly(&[1, 1])).is_err());
    }

    #[test]
    fn singular_tate_model_rejected() {
        let k = crate::algebra::CubicField::new(&exceptional_field_polynomial()).unwrap();
        let z = k.from_rational(Rational::zero());
        assert!(matches!(TateCurve::new(z.clone(), z), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn derived_exceptional_curve_has_order_16() {
        let c = Corpus::default_corpus().unwrap();
        let m = c.map("16_4").unwrap();
        let e = derived_exceptional_curve(m).unwrap();
        assert_eq!(torsion_order_at_origin(&e, 40).unwrap(), Some(16));
        let w = e.weierstrass();
        let p = e.origin();
        assert!(w.contains(&p));
        for n in 1..=20 {
            assert_eq!(w.mul(n, &p), (1..n).fold(p.clone(), |acc, _| w.add(&acc, &p)));
        }
        assert!(nf_is_isomorphic(e.field_polynomial(), &exceptional_fiber_polynomial()).unwrap());
        assert!(nf_is_isomorphic(&exceptional_field_polynomial(), &exceptional_fiber_polynomial()).unwrap());
    }

    #[test]
    fn derived_curve_order_divides_reduction() {
        let c = Corpus::default_corpus().unwrap();
        let e = derived_exceptional_curve(c.map("16_4").unwrap()).unwrap();
        let h = exceptional_fiber_polynomial();
        let mut checked = 0;
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
            let Some(r) = (0..p).find(|&r| {
                let v = h.coeffs().iter().rev().fold(0i128, |acc, c| {
                    let c = crate::jacobian::reduce_rational(c, p).map(|x| x.v as i128).unwrap_or(0);
                    (acc * r as i128 + c).rem_euclid(p as i128)
                });
                v == 0
            }) else {
                continue;
            };
            let Some(w) = e.reduce_at_root(r, p) else { continue };
            let zero = crate::algebra::Fp::zero(p);
            let o = w.order(&Some((zero.clone(), zero)), 4 * p).unwrap();
            assert_eq!(o, 16, "p = {p}");
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn printed_exceptional_curve_is_not_order_16() {
        let e = printed_exceptional_curve().unwrap();
        assert_ne!(torsion_order_at_origin(&e, 20).unwrap(), Some(16));
    }

    #[test]
    fn cusps_and_elliptic_points() {
        let c = Corpus::default_corpus().unwrap();
        let f2 = c.map("16_2").unwrap();
        assert_eq!(interpret_t(f2, &TValue::Finite(Rational::zero())).unwrap().kind, FiberKind::Cusp);
        assert_eq!(interpret_t(f2, &TValue::Infinity).unwrap().kind, FiberKind::Cusp);
        let f1 = c.map("16_1").unwrap();
        let p = CurvePoint::affine(rat(1, 2), Rational::zero());
        assert_eq!(interpret_point(f1, &p).unwrap().kind, FiberKind::Cusp);
        let f4 = c.map("16_4").unwrap();
        let i = interpret_t(f4, &TValue::Finite(rat(-1, 4))).unwrap();
        assert_eq!(i.kind, FiberKind::EllipticPoint);
        assert_eq!(i.class.unwrap().status, FieldStatus::Cyclic);
        assert!(nf_is_isomorphic(&i.cubic.unwrap(), &exceptional_field_polynomial()).unwrap());
        assert_eq!(torsion_order_at_origin(&i.tate.unwrap(), 16).unwrap(), Some(16));
    }

    #[test]
    fn scan_heights_are_ordered() {
        let ts = rationals_by_height(3);
        assert_eq!(ts.len(), 1 + 2 + 2 + 4 + 2 * 2 + 2);
        let hs: Vec<BigInt> = ts.iter().map(height).collect();
        assert!(hs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn scan_f4_sees_the_cyclic_fiber() {
        let c = Corpus::default_corpus().unwrap();
        let r = scan_family(c.map("16_4").unwrap(), 4).unwrap();
        assert_eq!(r.class_of(&rat(-1, 4)).unwrap().status, FieldStatus::Cyclic);
        assert!(r.first_complex_witness.is_some() && r.first_real_nonsquare_witness.is_some());
        let total = r.counts.degenerate + r.counts.reducible + r.counts.cyclic + r.counts.s3_real + r.counts.s3_complex;
        assert_eq!(total, r.rows.len());
    }
}
