//! Elliptic curves y² + a·xy + b·y = x³ + b·x² over cubic fields and the
//! order of (0, 0).

use crate::algebra::numfield::nf_is_isomorphic;
use crate::algebra::rational::parse_rational;
use crate::algebra::{CubicField, Field, NumberFieldElement, Rational, Ring, UniPoly};
use crate::curves::DegreeThreeMap;
use crate::{Error, Result};
use num_traits::Zero;

/// General Weierstrass coefficients [a1, a2, a3, a4, a6].
#[derive(Clone, Debug, PartialEq)]
pub struct Weierstrass<F> {
    pub a: [F; 5],
}

/// An affine point, or None for O.
pub type EPoint<F> = Option<(F, F)>;

impl<F: Field> Weierstrass<F> {
    pub fn discriminant(&self) -> F {
        let [a1, a2, a3, a4, a6] = &self.a;
        let k = |n: i64| a1.from_int_like(n);
        let b2 = a1.times(a1).plus(&k(4).times(a2));
        let b4 = k(2).times(a4).plus(&a1.times(a3));
        let b6 = a3.times(a3).plus(&k(4).times(a6));
        let b8 = a1.times(a1).times(a6).plus(&k(4).times(a2).times(a6)).minus(&a1.times(a3).times(a4)).plus(&a2.times(a3).times(a3)).minus(&a4.times(a4));
        b2.times(&b2)
            .times(&b8)
            .negate()
            .minus(&k(8).times(&b4).times(&b4).times(&b4))
            .minus(&k(27).times(&b6).times(&b6))
            .plus(&k(9).times(&b2).times(&b4).times(&b6))
    }

    pub fn contains(&self, p: &EPoint<F>) -> bool {
        let Some((x, y)) = p else { return true };
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = y.times(y).plus(&a1.times(x).times(y)).plus(&a3.times(y));
        let rhs = x.times(x).times(x).plus(&a2.times(x).times(x)).plus(&a4.times(x)).plus(a6);
        lhs == rhs
    }

    pub fn neg(&self, p: &EPoint<F>) -> EPoint<F> {
        let (x, y) = p.as_ref()?;
        Some((x.clone(), y.negate().minus(&self.a[0].times(x)).minus(&self.a[2])))
    }

    pub fn add(&self, p: &EPoint<F>, q: &EPoint<F>) -> EPoint<F> {
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return p.clone().or_else(|| q.clone());
        };
        let [a1, a2, a3, a4, _] = &self.a;
        let lambda = if x1 != x2 {
            y2.minus(y1).divide(&x2.minus(x1)).expect("distinct x")
        } else {
            let den = y1.times(&y1.from_int_like(2)).plus(&a1.times(x1)).plus(a3);
            if y1 != y2 || den.is_zero() {
                return None;
            }
            let num = x1.times(x1).times(&x1.from_int_like(3)).plus(&a2.times(x1).times(&x1.from_int_like(2))).plus(a4).minus(&a1.times(y1));
            num.divide(&den).expect("nonzero denominator")
        };
        let nu = y1.minus(&lambda.times(x1));
        let x3 = lambda.times(&lambda).plus(&a1.times(&lambda)).minus(a2).minus(x1).minus(x2);
        let y3 = lambda.plus(a1).times(&x3).negate().minus(&nu).minus(a3);
        Some((x3, y3))
    }

    /// n·P by double-and-add.
    pub fn mul(&self, n: u64, p: &EPoint<F>) -> EPoint<F> {
        let mut acc = None;
        let mut base = p.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Exact order of P if it is at most n_max.
    pub fn order(&self, p: &EPoint<F>, n_max: u64) -> Option<u64> {
        let mut q = p.clone();
        for n in 1..=n_max {
            if q.is_none() {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }
}

/// y² + a·xy + b·y = x³ + b·x².
#[derive(Clone, Debug, PartialEq)]
pub struct TateCurve {
    pub a: NumberFieldElement,
    pub b: NumberFieldElement,
}

impl TateCurve {
    pub fn new(a: NumberFieldElement, b: NumberFieldElement) -> Result<TateCurve> {
        let e = TateCurve { a, b };
        if e.weierstrass().discriminant().is_zero() {
            return Err(Error::InvalidCurve(format!("singular Tate model a = {:?}, b = {:?}", e.a, e.b)));
        }
        Ok(e)
    }

    pub fn weierstrass(&self) -> Weierstrass<NumberFieldElement> {
        let z = self.a.zero_like();
        Weierstrass { a: [self.a.clone(), self.b.clone(), self.b.clone(), z.clone(), z] }
    }

    pub fn field_polynomial(&self) -> &UniPoly<Rational> {
        &self.a.k.h
    }

    pub fn origin(&self) -> EPoint<NumberFieldElement> {
        let z = self.a.zero_like();
        Some((z.clone(), z))
    }

    /// Image of the model at a prime p where the field has a degree-one prime
    /// given by the root r of its polynomial mod p.
    pub fn reduce_at_root(&self, r: u64, p: u64) -> Option<Weierstrass<crate::algebra::Fp>> {
        use crate::jacobian::reduce_rational;
        let ev = |e: &NumberFieldElement| -> Option<crate::algebra::Fp> {
            let cs = e.coeffs();
            let x = crate::algebra::Fp::from_u64(r, p);
            let mut acc = crate::algebra::Fp::zero(p);
            for c in cs.iter().rev() {
                acc = acc.times(&x).plus(&reduce_rational(c, p)?);
            }
            Some(acc)
        };
        let (a, b) = (ev(&self.a)?, ev(&self.b)?);
        let z = crate::algebra::Fp::zero(p);
        let w = Weierstrass { a: [a, b.clone(), b, z.clone(), z] };
        if w.discriminant().is_zero() {
            None
        } else {
            Some(w)
        }
    }
}

/// Order of (0, 0) on E if it is at most n_max; Ok(None) means "> n_max".
pub fn torsion_order_at_origin(e: &TateCurve, n_max: u64) -> Result<Option<u64>> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    let w = e.weierstrass();
    if w.discriminant().is_zero() {
        return Err(Error::InvalidCurve("singular Tate model".into()));
    }
    Ok(w.order(&e.origin(), n_max))
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

/// α with α³ − 8α² − α + 8/9 = 0.
pub fn exceptional_field_polynomial() -> UniPoly<Rational> {
    UniPoly::new(vec![q("8/9"), q("-1"), q("-8"), q("1")], Rational::zero())
}

/// The printed curve over ℚ(α): a = (−11α² + 2543α + 2240)/2232,
/// b = (481α² − 2465α − 376)/155682.
pub fn printed_exceptional_curve() -> Result<TateCurve> {
    let k = CubicField::new(&exceptional_field_polynomial())?;
    let a = k.element(&[q("2240/2232"), q("2543/2232"), q("-11/2232")]);
    let b = k.element(&[q("-376/155682"), q("-2465/155682"), q("481/155682")]);
    TateCurve::new(a, b)
}

/// Fiber of f₄ on X₁(16) at t = −1/4, scaled to 16x³ − 33x² − 15x + 16.
pub fn exceptional_fiber_polynomial() -> UniPoly<Rational> {
    crate::curves::tpoly(&[16, -15, -33, 16])
}

/// y on X₁(16) over the fiber field: g_num = A(x) + c·y with c constant, so
/// y = (t·g_den(x) − A(x))/c.
fn fiber_y(m: &DegreeThreeMap, t0: &Rational, x: &NumberFieldElement) -> Result<NumberFieldElement> {
    let yi = m.parent.vars.iter().position(|v| v == "y").ok_or_else(|| Error::InvalidMap(format!("{}: no y coordinate", m.id)))?;
    let xi = 1 - yi;
    if m.curve_variable != m.parent.vars[xi] {
        return Err(Error::InvalidMap(format!("{}: curve variable is not x", m.id)));
    }
    let num = m.g_num.coeffs_in(yi);
    if num.len() != 2 || num[1].degree() != Some(0) || m.g_den.degree_in(yi).unwrap_or(0) > 0 {
        return Err(Error::InvalidMap(format!("{}: numerator is not linear in y", m.id)));
    }
    let den = &m.g_den.coeffs_in(yi)[0];
    let ev = |p: &UniPoly<Rational>| -> NumberFieldElement {
        let mut acc = x.zero_like();
        for c in p.coeffs().iter().rev() {
            acc = acc.times(x).plus(&x.k.from_rational(c.clone()));
        }
        acc
    };
    let c = num[1].coeff(0);
    let top = ev(den).times(&x.k.from_rational(t0.clone())).minus(&ev(&num[0]));
    Ok(top.times(&x.k.from_rational(c.recip())))
}

/// Tate normal forms attached to a point (x, y) of X₁(16) over a cubic field,
/// one for each square root in the parametrisation.
pub fn x116_tate_forms(x: &NumberFieldElement, y: &NumberFieldElement) -> Vec<TateCurve> {
    let one = x.one_like();
    let k = |n: i64| x.from_int_like(n);
    let Some(m) = one.minus(x).divide(&one.plus(x)) else { return vec![] };
    let m2 = m.times(&m);
    let m3 = m2.times(&m);
    let a2 = m3.plus(&k(2).times(&m2)).minus(&m);
    let a1 = m3.negate().minus(&m2).plus(&k(3).times(&m)).minus(&one);
    let xp = one.plus(x);
    let Some(root) = k(4).times(y).divide(&xp.times(&xp).times(&xp)) else { return vec![] };
    let mut out = Vec::new();
    for sq in [root.clone(), root.negate()] {
        let Some(u) = a1.negate().plus(&sq).divide(&k(2).times(&a2)) else { continue };
        let w = one.plus(&m.times(&u.minus(&one)));
        let Some(s) = u.minus(&one).divide(&w).map(|v| one.plus(&v)) else { continue };
        let r = one.plus(&u.times(&s.minus(&one)));
        let bb = r.times(&s).times(&r.minus(&one));
        let cc = s.times(&r.minus(&one));
        if let Ok(e) = TateCurve::new(one.minus(&cc), bb.negate()) {
            out.push(e);
        }
    }
    out
}

/// The Tate form of the fiber of a map on X₁(16) at t0 (whose fiber cubic h
/// must be irreducible), preferring one on which (0, 0) has order 16.
pub fn fiber_tate_curve(m: &DegreeThreeMap, t0: &Rational, h: &UniPoly<Rational>) -> Result<Option<TateCurve>> {
    if m.parent.label != "X1(16)" {
        return Ok(None);
    }
    let k = CubicField::new(h)?;
    let x = k.generator();
    let y = fiber_y(m, t0, &x)?;
    let forms = x116_tate_forms(&x, &y);
    for e in &forms {
        if torsion_order_at_origin(e, 16)? == Some(16) {
            return Ok(Some(e.clone()));
        }
    }
    Ok(forms.into_iter().next())
}

/// The curve obtained from the t = −1/4 fiber of f₄.
pub fn derived_exceptional_curve(m: &DegreeThreeMap) -> Result<TateCurve> {
    let t0 = crate::algebra::rat(-1, 4);
    let h = crate::curves::fiber_cubic(m, &t0)?;
    fiber_tate_curve(m, &t0, &h)?.ok_or_else(|| Error::InvalidMap(format!("{}: no Tate form at t = -1/4", m.id)))
}

/// Whether the fields of definition of two curves are isomorphic.
pub fn same_field(e: &TateCurve, h: &UniPoly<Rational>) -> Result<bool> {
    nf_is_isomorphic(e.field_polynomial(), h)
}
