//! Plane models of X₁(N), degree-three maps to ℙ¹, fiber cubics and the
//! hyperelliptic discriminant curves y² = Δ(f)(t).

mod corpus;
mod point;

pub use corpus::{Corpus, CurveRecord};
pub use point::CurvePoint;

use crate::algebra::numfield::squarefree_decompose;
use crate::algebra::rational::{fmt_rational, is_square_int, rational_sqrt};
use crate::algebra::{BiPoly, Rational, Ring, UniPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct PlaneModel {
    pub label: String,
    pub vars: [String; 2],
    pub f: BiPoly,
}

#[derive(Clone, Debug)]
pub struct DegreeThreeMap {
    pub id: String,
    pub parent: PlaneModel,
    /// g = g_num / g_den in the parent's variables.
    pub g_num: BiPoly,
    pub g_den: BiPoly,
    /// Minimal relation f(v, t) with v = curve_variable, in the frame (v, "t").
    pub f: BiPoly,
    pub curve_variable: String,
    /// The discriminant curve is written in τ = t + shift.
    pub shift: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperellipticModel {
    pub label: String,
    pub d: UniPoly<Rational>,
    pub genus: usize,
    pub infinite_points: usize,
    /// c with Δ = d·c², when the model came from a discriminant.
    pub square_cofactor: Option<UniPoly<Rational>>,
}

pub fn tpoly(c: &[i64]) -> UniPoly<Rational> {
    UniPoly::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect(), Rational::zero())
}

impl HyperellipticModel {
    pub fn new(label: &str, d: UniPoly<Rational>) -> Result<Self> {
        let n = d.degree().unwrap_or(0);
        if n < 3 {
            return Err(Error::InvalidCurve(format!("{label}: degree {n} is too small")));
        }
        if d.gcd(&d.derivative()).degree() != Some(0) {
            return Err(Error::InvalidCurve(format!("{label}: right-hand side is not squarefree")));
        }
        let infinite_points = count_infinite_points_of(&d);
        Ok(HyperellipticModel { label: label.to_string(), genus: (n + 1) / 2 - 1, infinite_points, d, square_cofactor: None })
    }

    pub fn degree(&self) -> usize {
        self.d.degree().unwrap()
    }

    pub fn is_odd(&self) -> bool {
        self.degree() % 2 == 1
    }

    /// Exact membership test.
    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Affine { t, y } => y * y == self.d.eval(t),
            CurvePoint::Infinity { sign } => {
                if self.is_odd() {
                    *sign == 0
                } else {
                    *sign != 0 && rational_sqrt(self.d.lc()).is_some()
                }
            }
        }
    }

    /// Rational Weierstrass points (roots of d).
    pub fn rational_weierstrass(&self) -> Vec<Rational> {
        crate::algebra::rational::rational_roots(&self.d)
    }
}

fn count_infinite_points_of(d: &UniPoly<Rational>) -> usize {
    let n = d.degree().unwrap_or(0);
    if n % 2 == 1 {
        1
    } else if rational_sqrt(d.lc()).is_some() {
        2
    } else {
        0
    }
}

pub fn genus(h: &HyperellipticModel) -> usize {
    h.genus
}

pub fn count_infinite_points(h: &HyperellipticModel) -> usize {
    count_infinite_points_of(&h.d)
}

/// Δ = b²c² − 4ac³ − 4b³d − 27a²d² + 18abcd for a·v³ + b·v² + c·v + d.
pub fn cubic_discriminant<R: Ring>(a: &R, b: &R, c: &R, d: &R) -> R {
    let k = |n: i64| a.from_int_like(n);
    let t1 = b.times(b).times(c).times(c);
    let t2 = k(4).times(a).times(&c.pow_u(3));
    let t3 = k(4).times(&b.pow_u(3)).times(d);
    let t4 = k(27).times(a).times(a).times(d).times(d);
    let t5 = k(18).times(a).times(b).times(c).times(d);
    t1.minus(&t2).minus(&t3).minus(&t4).plus(&t5)
}

impl DegreeThreeMap {
    fn cv_index(&self) -> Result<usize> {
        self.parent
            .vars
            .iter()
            .position(|v| *v == self.curve_variable)
            .ok_or_else(|| Error::InvalidMap(format!("{}: curve variable not in parent model", self.id)))
    }

    pub fn degree_in_curve_variable(&self) -> u32 {
        self.f.degree_in(0).unwrap_or(0)
    }

    /// The fiber cubic over ℚ[t]: coefficients (in the cubic's variable) as
    /// polynomials in t, low to high.
    pub fn generic_fiber(&self) -> Result<Vec<UniPoly<Rational>>> {
        match self.degree_in_curve_variable() {
            3 => Ok(self.f.coeffs_in(0)),
            1 => {
                // f = a·v + b with a constant: v = -b(t)/a, substituted into the plane model.
                let ci = self.cv_index()?;
                let cs = self.f.coeffs_in(0);
                let a = &cs[1];
                if a.degree() != Some(0) {
                    return Err(Error::InvalidMap(format!("{}: linear map with non-constant leading term", self.id)));
                }
                let v_of_t = cs[0].scale(&(-a.coeff(0).recip()));
                let other = self.parent.vars[1 - ci].clone();
                let pf = self.parent.f.reframe(&other, &self.curve_variable)?.rename(&other, "t");
                let sub = BiPoly::from_uni(&v_of_t, 1, &other, "t");
                let cubic = pf.substitute(1, &sub);
                if cubic.degree_in(0) != Some(3) {
                    return Err(Error::InvalidMap(format!("{}: substituted model is not cubic", self.id)));
                }
                Ok(cubic.coeffs_in(0))
            }
            k => Err(Error::InvalidMap(format!("{}: degree {k} in the curve variable", self.id))),
        }
    }

    pub fn cubic_variable(&self) -> Result<String> {
        if self.degree_in_curve_variable() == 3 {
            Ok(self.curve_variable.clone())
        } else {
            Ok(self.parent.vars[1 - self.cv_index()?].clone())
        }
    }
}

/// Whether f(v, g(x, y)) vanishes identically on the plane model.
pub fn validate_map(m: &DegreeThreeMap) -> Result<bool> {
    let ci = m.cv_index()?;
    let [v0, v1] = [m.parent.vars[0].as_str(), m.parent.vars[1].as_str()];
    let reduce = |p: &BiPoly| -> Result<BiPoly> {
        p.reduce_mod(&m.parent.f, 1).or_else(|_| p.reduce_mod(&m.parent.f, 0))
    };
    if reduce(&m.g_den)?.is_zero() {
        return Err(Error::InvalidMap(format!("{}: denominator of g vanishes on the curve", m.id)));
    }
    let deg = m.degree_in_curve_variable();
    if deg != 3 && deg != 1 {
        return Ok(false);
    }
    let ct = m.f.coeffs_in(1);
    let big_d = ct.len() - 1;
    let mut acc = BiPoly::zero(v0, v1);
    for (k, c) in ct.iter().enumerate() {
        let term = BiPoly::from_uni(c, ci, v0, v1).mul(&m.g_num.pow(k as u32)).mul(&m.g_den.pow((big_d - k) as u32));
        acc = acc.add(&term);
    }
    if !reduce(&acc)?.is_zero() {
        return Ok(false);
    }
    if deg == 1 {
        // the linear path must produce a genuine cubic
        return Ok(m.generic_fiber().is_ok());
    }
    Ok(true)
}

/// The specialised fiber polynomial at t0, without degeneracy checks.
pub fn specialize_fiber(m: &DegreeThreeMap, t0: &Rational) -> Result<UniPoly<Rational>> {
    let cs = m.generic_fiber()?;
    Ok(UniPoly::new(cs.iter().map(|c| c.eval(t0)).collect(), Rational::zero()))
}

/// The cubic whose root field is K_t at t = t0.
pub fn fiber_cubic(m: &DegreeThreeMap, t0: &Rational) -> Result<UniPoly<Rational>> {
    let h = specialize_fiber(m, t0)?;
    let t = fmt_rational(t0);
    if h.degree() != Some(3) {
        return Err(Error::DegenerateFiber { t, reason: "leading coefficient vanishes".into() });
    }
    if Zero::is_zero(&h.discriminant()?) {
        return Err(Error::DegenerateFiber { t, reason: "discriminant vanishes".into() });
    }
    Ok(h)
}

/// Leading part of the fiber at t = ∞ (coefficients of the top power of t).
pub fn fiber_at_infinity(m: &DegreeThreeMap) -> Result<UniPoly<Rational>> {
    let cs = m.generic_fiber()?;
    let top = cs.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    Ok(UniPoly::new(cs.iter().map(|c| c.coeff(top)).collect(), Rational::zero()))
}

/// Δ(f)(t) as a polynomial in t (unshifted).
pub fn raw_discriminant(m: &DegreeThreeMap) -> Result<UniPoly<Rational>> {
    let cs = m.generic_fiber()?;
    let d = cubic_discriminant(&cs[3], &cs[2], &cs[1], &cs[0]);
    if d.is_zero() {
        return Err(Error::InvalidMap(format!("{}: discriminant vanishes identically", m.id)));
    }
    Ok(d)
}

/// y² = squarefree part of Δ(f), written in τ = t + shift.
pub fn discriminant_curve(m: &DegreeThreeMap) -> Result<HyperellipticModel> {
    if !validate_map(m)? {
        return Err(Error::InvalidMap(format!("{}: f(v, g) does not vanish on the curve", m.id)));
    }
    let d = raw_discriminant(m)?;
    let z = Rational::zero();
    let back = UniPoly::new(vec![-m.shift.clone(), Rational::one()], z);
    let shifted = d.compose(&back);
    let (s, c) = squarefree_decompose(&shifted)?;
    let mut h = HyperellipticModel::new(&format!("disc({})", m.id), s)?;
    h.square_cofactor = Some(c);
    Ok(h)
}

/// λ with a = λ²·b when a/b is a constant rational square.
pub fn square_factor(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> Option<Rational> {
    if b.is_zero() || a.degree() != b.degree() {
        return None;
    }
    let k = a.lc() / b.lc();
    if b.scale(&k) != *a {
        return None;
    }
    rational_sqrt(&k)
}

/// Affine points with height(t) ≤ bound plus the rational points at infinity.
pub fn rational_point_search(h: &HyperellipticModel, height_bound: u64) -> Vec<CurvePoint> {
    let g = h.genus;
    let n = 2 * g + 2;
    let mut l = BigInt::one();
    for c in h.d.coeffs() {
        l = l.lcm(c.denom());
    }
    let e: Vec<BigInt> = (0..=n)
        .map(|i| (h.d.coeff(i) * Rational::from_integer(l.clone())).to_integer() * &l)
        .collect();
    let bound = height_bound as i64;
    let mut pts = Vec::new();
    for b in 1..=bound {
        let bb = BigInt::from(b);
        let bpow: Vec<BigInt> = (0..=n).map(|k| bb.pow(k as u32)).collect();
        for a in -bound..=bound {
            if a.gcd(&b) != 1 {
                continue;
            }
            let aa = BigInt::from(a);
            let mut hv = BigInt::zero();
            let mut apow = BigInt::one();
            for i in 0..=n {
                if !e[i].is_zero() {
                    hv += &e[i] * &apow * &bpow[n - i];
                }
                apow *= &aa;
            }
            if hv.is_negative() || !is_square_int(&hv) {
                continue;
            }
            let r = hv.sqrt();
            let t = Rational::new(aa.clone(), bb.clone());
            let y = Rational::new(r, &l * &bpow[g + 1]);
            if Zero::is_zero(&y) {
                pts.push(CurvePoint::Affine { t, y });
            } else {
                pts.push(CurvePoint::Affine { t: t.clone(), y: y.clone() });
                pts.push(CurvePoint::Affine { t, y: -y });
            }
        }
    }
    if h.is_odd() {
        pts.push(CurvePoint::Infinity { sign: 0 });
    } else if h.infinite_points == 2 {
        pts.push(CurvePoint::Infinity { sign: 1 });
        pts.push(CurvePoint::Infinity { sign: -1 });
    }
    pts.sort();
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn corpus_maps_validate_and_reproduce_curves() {
        let c = Corpus::default_corpus().unwrap();
        for rec in &c.curves {
            let m = c.map(&rec.map).unwrap();
            assert!(validate_map(m).unwrap(), "{}", m.id);
            let h = discriminant_curve(m).unwrap();
            assert!(square_factor(&rec.model.d, &h.d).is_some(), "{}", rec.id);
        }
        let m2 = c.map("16_2").unwrap().clone();
        let mut bad = m2.clone();
        bad.f = c.map("16_3").unwrap().f.clone();
        assert!(!validate_map(&bad).unwrap());
    }

    #[test]
    fn fibers() {
        let c = Corpus::default_corpus().unwrap();
        let f4 = fiber_cubic(c.map("16_4").unwrap(), &rat(-1, 4)).unwrap();
        assert_eq!(f4.monic(), tpoly(&[16, -15, -33, 16]).monic());
        assert!(matches!(fiber_cubic(c.map("16_2").unwrap(), &rat(0, 1)), Err(Error::DegenerateFiber { .. })));
        // y = 1 gives F(x, 1) = 1 + x - x² - x³, which has a double root
        let m20 = c.map("20_1").unwrap();
        assert_eq!(specialize_fiber(m20, &rat(0, 1)).unwrap().monic(), tpoly(&[-1, -1, 1, 1]));
        assert!(fiber_cubic(m20, &rat(0, 1)).is_err());
        assert!(fiber_cubic(m20, &rat(1, 1)).is_ok());
    }

    #[test]
    fn point_search_and_genus() {
        let c = Corpus::default_corpus().unwrap();
        let c2 = &c.curve("C2(16)").unwrap().model;
        assert_eq!(genus(c2), 3);
        assert_eq!(count_infinite_points(c2), 2);
        let pts = rational_point_search(c2, 10);
        assert_eq!(pts.len(), 3);
        let c120 = &c.curve("C1(20)").unwrap().model;
        assert_eq!(count_infinite_points(c120), 0);
        let pts = rational_point_search(c120, 10);
        assert_eq!(pts, vec![CurvePoint::affine(rat(-1, 1), rat(0, 1)), CurvePoint::affine(rat(1, 1), rat(0, 1))]);
        let c4 = &c.curve("C4(16)").unwrap().model;
        assert_eq!(genus(c4), 2);
        let pts = rational_point_search(c4, 10);
        assert!(pts.contains(&CurvePoint::affine(rat(-1, 4), rat(201, 64))));
        assert_eq!(pts.len(), 5);
        assert_eq!(genus(&c.curve("C2(20)").unwrap().model), 4);
        assert_eq!(count_infinite_points(&c.curve("C1(16)").unwrap().model), 1);
    }
}
