use crate::algebra::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// p^val·unit + O(p^prec). A value indistinguishable from zero at its
/// precision is stored with unit = 0 and val = prec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: i64,
}

fn pw(p: u64, e: i64) -> BigInt {
    BigInt::from(p).pow(u32::try_from(e.max(0)).expect("p-adic precision out of range"))
}

fn strip(p: u64, x: &mut BigInt) -> i64 {
    let pb = BigInt::from(p);
    let mut v = 0;
    while !x.is_zero() && (&*x % &pb).is_zero() {
        *x /= &pb;
        v += 1;
    }
    v
}

fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

impl PadicNumber {
    pub fn zero(p: u64, prec: i64) -> Self {
        PadicNumber { p, val: prec, unit: BigInt::zero(), prec }
    }

    /// p^shift·x + O(p^prec).
    pub fn from_scaled(p: u64, mut x: BigInt, shift: i64, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(p, prec);
        }
        let v = shift + strip(p, &mut x);
        if v >= prec {
            return Self::zero(p, prec);
        }
        PadicNumber { p, val: v, unit: x.mod_floor(&pw(p, prec - v)), prec }
    }

    pub fn from_int(n: &BigInt, p: u64, prec: i64) -> Self {
        Self::from_scaled(p, n.clone(), 0, prec)
    }

    pub fn from_rational(q: &Rational, p: u64, prec: i64) -> Self {
        let mut num = q.numer().clone();
        let mut den = q.denom().clone();
        if num.is_zero() {
            return Self::zero(p, prec);
        }
        let v = strip(p, &mut num) - strip(p, &mut den);
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = pw(p, prec - v);
        let u = (num * inv_mod(&den, &m).expect("unit denominator")).mod_floor(&m);
        PadicNumber { p, val: v, unit: u, prec }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Absolute precision N: the value is known modulo p^N.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Valuation, or None when the value is zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Lower bound for the valuation that is always valid.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.val
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_scaled(self.p, self.unit.clone(), self.val, prec)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = pw(self.p, self.prec - self.val);
        PadicNumber { p: self.p, val: self.val, unit: (&m - &self.unit).mod_floor(&m), prec: self.prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return o.with_precision(prec);
        }
        if o.is_zero() {
            return self.with_precision(prec);
        }
        let vm = self.val.min(o.val);
        let x = &self.unit * pw(self.p, self.val - vm) + &o.unit * pw(self.p, o.val - vm);
        Self::from_scaled(self.p, x, vm, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::from_scaled(self.p, &self.unit * &o.unit, self.val + o.val, prec)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::InsufficientPrecision("division by a p-adic number indistinguishable from 0".into()));
        }
        let rel_o = o.prec - o.val;
        if self.is_zero() {
            return Ok(Self::zero(self.p, (self.prec - o.val).min(self.val - o.val + rel_o)));
        }
        let val = self.val - o.val;
        let rel = (self.prec - self.val).min(rel_o);
        let m = pw(self.p, rel);
        let x = &self.unit * inv_mod(&o.unit, &m).expect("unit");
        Ok(Self::from_scaled(self.p, x, val, val + rel))
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let mut u = n.clone();
        if u.is_zero() {
            return Self::zero(self.p, i64::MAX / 4);
        }
        let e = strip(self.p, &mut u);
        if self.is_zero() {
            return Self::zero(self.p, self.prec + e);
        }
        Self::from_scaled(self.p, &self.unit * u, self.val + e, self.prec + e)
    }

    pub fn div_int(&self, n: &BigInt) -> Self {
        let mut u = n.clone();
        assert!(!u.is_zero(), "division by zero");
        let e = strip(self.p, &mut u);
        if self.is_zero() {
            return Self::zero(self.p, self.prec - e);
        }
        let rel = self.prec - self.val;
        let m = pw(self.p, rel);
        let x = &self.unit * inv_mod(&u, &m).expect("unit");
        Self::from_scaled(self.p, x, self.val - e, self.prec - e)
    }

    /// The value modulo p^k as an integer in [0, p^k), when it is integral and
    /// known to that precision.
    pub fn residue(&self, k: i64) -> Option<BigInt> {
        if self.prec < k || (self.val < 0 && !self.is_zero()) {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        Some((&self.unit * pw(self.p, self.val)).mod_floor(&pw(self.p, k)))
    }

    /// A rational representative p^val·unit.
    pub fn to_rational(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        if self.val >= 0 {
            Rational::from_integer(&self.unit * pw(self.p, self.val))
        } else {
            Rational::new(self.unit.clone(), pw(self.p, -self.val))
        }
    }

    /// True if the value is certified to be ≡ 0 mod p^k.
    pub fn certified_divisible(&self, k: i64) -> bool {
        self.val >= k && self.prec >= k
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.prec);
        }
        let u = self.unit.to_string();
        match self.val {
            0 => write!(f, "{u} + O({}^{})", self.p, self.prec),
            v => write!(f, "{u}·{}^{v} + O({}^{})", self.p, self.p, self.prec),
        }
    }
}

/// v_p(n) for a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> i64 {
    let mut x = n.abs();
    strip(p, &mut x)
}

/// v_p(n) for a machine integer, n ≥ 1.
pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn arithmetic_tracks_precision() {
        let a = PadicNumber::from_rational(&rat(10, 3), 5, 6);
        assert_eq!(a.valuation(), Some(1));
        let b = PadicNumber::from_rational(&rat(1, 25), 5, 6);
        assert_eq!(b.valuation(), Some(-2));
        let c = a.mul(&b);
        assert_eq!(c.valuation(), Some(-1));
        assert_eq!(c.precision(), 4);
        let d = a.sub(&a);
        assert!(d.is_zero());
        let e = a.div_int(&BigInt::from(5));
        assert_eq!(e.valuation(), Some(0));
        assert_eq!(e.precision(), 5);
        let q = a.div(&PadicNumber::from_rational(&rat(5, 1), 5, 6)).unwrap();
        assert_eq!(q.residue(4).unwrap(), (BigInt::from(2) * BigInt::from(3).modpow(&BigInt::from(4 * 125 - 1), &BigInt::from(625))) % 625);
    }
}
