//! Cubic number fields ℚ[x]/(h) and field isomorphism tests.

use super::fp::is_prime;
use super::fq::{count_distinct_roots_fp, fp_from_int};
use super::rational::{primitive_part, rational_mod, rational_reconstruct, rational_roots};
use super::{is_rational_square, Field, Fp, Rational, Ring, UniPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq)]
pub struct CubicField {
    /// Defining polynomial normalised to be monic.
    pub h: UniPoly<Rational>,
}

impl fmt::Debug for CubicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℚ[θ]/({})", self.h)
    }
}

impl CubicField {
    pub fn new(h: &UniPoly<Rational>) -> Result<Arc<CubicField>> {
        if h.degree() != Some(3) {
            return Err(Error::InvalidInput(format!("cubic field needs a degree-3 polynomial, got {h}")));
        }
        if !rational_roots(h).is_empty() {
            return Err(Error::InvalidInput(format!("{h} is reducible over ℚ")));
        }
        Ok(Arc::new(CubicField { h: h.monic() }))
    }

    pub fn element(self: &Arc<Self>, c: &[Rational]) -> NumberFieldElement {
        let v = UniPoly::new(c.to_vec(), Rational::zero()).rem(&self.h);
        NumberFieldElement { k: self.clone(), v }
    }

    pub fn from_rational(self: &Arc<Self>, a: Rational) -> NumberFieldElement {
        self.element(&[a])
    }

    /// The class of x, a root of h.
    pub fn generator(self: &Arc<Self>) -> NumberFieldElement {
        self.element(&[Rational::zero(), Rational::one()])
    }
}

#[derive(Clone)]
pub struct NumberFieldElement {
    pub k: Arc<CubicField>,
    /// Representative of degree < 3.
    pub v: UniPoly<Rational>,
}

impl PartialEq for NumberFieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v && (Arc::ptr_eq(&self.k, &o.k) || self.k == o.k)
    }
}

impl fmt::Debug for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl NumberFieldElement {
    fn wrap(&self, v: UniPoly<Rational>) -> Self {
        NumberFieldElement { k: self.k.clone(), v: v.rem(&self.k.h) }
    }

    pub fn coeffs(&self) -> [Rational; 3] {
        [self.v.coeff(0), self.v.coeff(1), self.v.coeff(2)]
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.v.degree().unwrap_or(0) == 0 {
            Some(self.v.coeff(0))
        } else {
            None
        }
    }

    /// Norm to ℚ, computed as the resultant Res(h, v) for monic h.
    pub fn norm(&self) -> Rational {
        if self.v.is_zero() {
            return Rational::zero();
        }
        self.k.h.resultant(&self.v)
    }
}

impl Ring for NumberFieldElement {
    fn zero_like(&self) -> Self {
        self.wrap(UniPoly::zero(Rational::zero()))
    }
    fn one_like(&self) -> Self {
        self.wrap(UniPoly::one(&Rational::zero()))
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        NumberFieldElement { k: self.k.clone(), v: self.v.add(&o.v) }
    }
    fn minus(&self, o: &Self) -> Self {
        NumberFieldElement { k: self.k.clone(), v: self.v.sub(&o.v) }
    }
    fn times(&self, o: &Self) -> Self {
        self.wrap(self.v.mul(&o.v))
    }
    fn negate(&self) -> Self {
        NumberFieldElement { k: self.k.clone(), v: self.v.negate() }
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.wrap(UniPoly::constant(super::rational::rat_int(n)))
    }
}

impl Field for NumberFieldElement {
    fn inv(&self) -> Option<Self> {
        if self.v.is_zero() {
            return None;
        }
        let (g, s, _) = self.v.xgcd(&self.k.h);
        debug_assert!(g.degree() == Some(0));
        Some(self.wrap(s))
    }
}

/// Monic integral model: returns (H, D) with H(y) = D³·h̃(y/D), h̃ = h/lc(h),
/// so that y = D·x.
fn monic_integral(h: &UniPoly<Rational>) -> (Vec<BigInt>, BigInt) {
    let m = h.monic();
    let mut d = BigInt::one();
    for c in m.coeffs() {
        d = d.lcm(c.denom());
    }
    let coeffs: Vec<BigInt> = (0..4usize)
        .map(|i| (m.coeff(i) * Rational::from_integer(d.pow((3 - i) as u32))).to_integer())
        .collect();
    (coeffs, d)
}

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = (acc * x + a).mod_floor(m);
    }
    acc
}

fn deriv(c: &[BigInt]) -> Vec<BigInt> {
    c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect()
}

/// Lift a simple root r₀ mod q of an integer polynomial to a root mod q^(2^steps).
fn hensel_lift(c: &[BigInt], r0: u64, q: u64, steps: u32) -> (BigInt, BigInt) {
    let dc = deriv(c);
    let mut m = BigInt::from(q);
    let mut r = BigInt::from(r0);
    for _ in 0..steps {
        m = &m * &m;
        let f = eval_mod(c, &r, &m);
        let fd = eval_mod(&dc, &r, &m);
        let inv = super::rational::mod_inverse(&fd, &m).expect("simple root");
        r = (r - f * inv).mod_floor(&m);
    }
    (r, m)
}

fn roots_mod(c: &[BigInt], q: u64) -> Vec<u64> {
    (0..q).filter(|&a| eval_mod(c, &BigInt::from(a), &BigInt::from(q)).is_zero()).collect()
}

fn reduce_fp(c: &[BigInt], q: u64) -> UniPoly<Fp> {
    UniPoly::new(c.iter().map(|a| fp_from_int(a, q)).collect(), Fp::zero(q))
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Find a root of h₂ inside ℚ[x]/(h₁). Returns `Ok(None)` when the fields are
/// certified non-isomorphic (discriminant square class or a prime where the
/// number of degree-one primes differs), `Err(Inconclusive)` if the search
/// budget runs out.
pub fn nf_find_root(h1: &UniPoly<Rational>, h2: &UniPoly<Rational>) -> Result<Option<NumberFieldElement>> {
    let k1 = CubicField::new(h1)?;
    CubicField::new(h2)?;
    let d1 = h1.discriminant()?;
    let d2 = h2.discriminant()?;
    if !is_rational_square(&(&d1 / &d2)) {
        return Ok(None);
    }
    let (c1, s1) = monic_integral(h1);
    let (c2, s2) = monic_integral(h2);
    let bad: BigInt = {
        let p1 = UniPoly::new(c1.iter().map(|a| Rational::from_integer(a.clone())).collect(), Rational::zero());
        let p2 = UniPoly::new(c2.iter().map(|a| Rational::from_integer(a.clone())).collect(), Rational::zero());
        let (n1, _) = primitive_part(&UniPoly::constant(p1.discriminant()?));
        let (n2, _) = primitive_part(&UniPoly::constant(p2.discriminant()?));
        n1[0].clone() * n2[0].clone()
    };
    let mut tried_split = 0;
    let mut q = 2u64;
    while q < 50_000 {
        q += 1;
        if !is_prime(q) || (&bad % BigInt::from(q)).is_zero() {
            continue;
        }
        let n1 = count_distinct_roots_fp(&reduce_fp(&c1, q));
        let n2 = count_distinct_roots_fp(&reduce_fp(&c2, q));
        if n1 != n2 {
            return Ok(None);
        }
        if n1 != 3 || tried_split >= 3 || q > 2000 {
            continue;
        }
        tried_split += 1;
        let r1 = roots_mod(&c1, q);
        let r2 = roots_mod(&c2, q);
        for steps in 4..=12u32 {
            let a: Vec<(BigInt, BigInt)> = r1.iter().map(|&r| hensel_lift(&c1, r, q, steps)).collect();
            let b: Vec<BigInt> = r2.iter().map(|&r| hensel_lift(&c2, r, q, steps).0).collect();
            let m = a[0].1.clone();
            for perm in PERMS {
                if let Some(z) = interpolate(&a.iter().map(|x| x.0.clone()).collect::<Vec<_>>(), &perm.map(|j| b[j].clone()), &m)
                {
                    // z is a polynomial in y = s1·x giving the root y₂ = s2·x₂
                    let cs: Vec<Rational> = (0..3)
                        .map(|i| &z[i] * Rational::from_integer(s1.pow(i as u32)) / Rational::from_integer(s2.clone()))
                        .collect();
                    let e = k1.element(&cs);
                    if h2.map(e.zero_like(), |c| k1.from_rational(c.clone())).eval(&e).is_zero() {
                        return Ok(Some(e));
                    }
                }
            }
        }
    }
    Err(Error::Inconclusive("cubic field isomorphism search exhausted".into()))
}

/// Quadratic through (aᵢ, bᵢ) mod m, rationally reconstructed.
fn interpolate(a: &[BigInt], b: &[BigInt; 3], m: &BigInt) -> Option<[Rational; 3]> {
    let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let den = ((&a[i] - &a[j]) * (&a[i] - &a[k])).mod_floor(m);
        let w = (&b[i] * super::rational::mod_inverse(&den, m)?).mod_floor(m);
        // w·(y - a_j)(y - a_k)
        out[0] += &w * &a[j] * &a[k];
        out[1] -= &w * (&a[j] + &a[k]);
        out[2] += &w;
    }
    let r0 = rational_reconstruct(&out[0].mod_floor(m), m)?;
    let r1 = rational_reconstruct(&out[1].mod_floor(m), m)?;
    let r2 = rational_reconstruct(&out[2].mod_floor(m), m)?;
    debug_assert!(rational_mod(&r0, m).is_some());
    Some([r0, r1, r2])
}

/// Whether ℚ[x]/(h₁) ≅ ℚ[x]/(h₂) for irreducible cubics h₁, h₂.
pub fn nf_is_isomorphic(h1: &UniPoly<Rational>, h2: &UniPoly<Rational>) -> Result<bool> {
    Ok(nf_find_root(h1, h2)?.is_some())
}

/// Square-free decomposition over ℚ: d = s · c² with s square-free (content
/// reduced to a square-free integer) and c ∈ ℚ[t].
pub fn squarefree_decompose(d: &UniPoly<Rational>) -> Result<(UniPoly<Rational>, UniPoly<Rational>)> {
    if d.is_zero() {
        return Err(Error::InvalidInput("square-free decomposition of zero".into()));
    }
    let z = Rational::zero();
    let (lc, parts) = d.squarefree_factorisation();
    let mut s = UniPoly::one(&z);
    let mut c = UniPoly::one(&z);
    for (i, a) in parts.iter().enumerate() {
        let e = i + 1;
        c = c.mul(&a.pow((e / 2) as u32));
        if e % 2 == 1 {
            s = s.mul(a);
        }
    }
    let (core, root) = super::rational::rational_square_split(&lc);
    Ok((s.scale(&Rational::from_integer(core)), c.scale(&root)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn poly(c: &[Rational]) -> UniPoly<Rational> {
        UniPoly::new(c.to_vec(), Rational::zero())
    }

    #[test]
    fn field_arithmetic() {
        let k = CubicField::new(&poly(&[rat(-2, 1), rat(0, 1), rat(0, 1), rat(1, 1)])).unwrap();
        let a = k.generator();
        assert_eq!(a.pow_u(3), k.from_rational(rat(2, 1)));
        let b = a.plus(&k.from_rational(rat(1, 1)));
        assert!(b.times(&b.inv().unwrap()).is_one());
        assert_eq!(b.norm(), rat(3, 1));
    }

    #[test]
    fn isomorphism_tests() {
        let x3m2 = poly(&[rat(-2, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        let x3m3 = poly(&[rat(-3, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        let x3m16 = poly(&[rat(-16, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert!(!nf_is_isomorphic(&x3m2, &x3m3).unwrap());
        let r = nf_find_root(&x3m2, &x3m16).unwrap().unwrap();
        assert_eq!(r.pow_u(3), r.from_int_like(16));
        // a scaled, shifted copy
        let shifted = poly(&[rat(-2 * 27 + 1, 27), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert!(nf_is_isomorphic(&x3m2, &shifted).is_ok());
        assert!(CubicField::new(&poly(&[rat(-1, 1), rat(0, 1), rat(0, 1), rat(1, 1)])).is_err());
    }

    #[test]
    fn decompose() {
        let d = poly(&[rat(0, 1), rat(0, 1), rat(-4, 1), rat(0, 1), rat(4, 1)]);
        let (s, c) = squarefree_decompose(&d).unwrap();
        assert_eq!(s.mul(&c.square()), d);
        assert_eq!(s, poly(&[rat(-1, 1), rat(0, 1), rat(1, 1)]));
    }
}
