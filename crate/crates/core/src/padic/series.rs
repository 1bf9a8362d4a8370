use super::number::PadicNumber;
use crate::algebra::{Fp, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// ℤ/p^k with p^k < 2⁶³, so products fit in u128.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Modulus {
    pub p: u64,
    pub k: u32,
    pub m: u128,
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let mut m: u128 = 1;
        for _ in 0..k {
            m *= p as u128;
            if m >= 1 << 63 {
                return Err(Error::BudgetExceeded(format!("{p}^{k} exceeds the fixed-width p-adic range")));
            }
        }
        Ok(Modulus { p, k, m })
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        (a + b) % self.m
    }
    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        (a + self.m - b % self.m) % self.m
    }
    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        a * b % self.m
    }
    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        (self.m - a % self.m) % self.m
    }

    pub fn inv(&self, a: u128) -> Option<u128> {
        let e = (a as i128).extended_gcd(&(self.m as i128));
        (e.gcd == 1).then(|| e.x.rem_euclid(self.m as i128) as u128)
    }

    pub fn from_i128(&self, a: i128) -> u128 {
        a.rem_euclid(self.m as i128) as u128
    }

    pub fn from_bigint(&self, a: &BigInt) -> u128 {
        a.mod_floor(&BigInt::from(self.m)).to_u128().unwrap()
    }

    /// Image of a p-integral rational.
    pub fn from_rational(&self, q: &Rational) -> Option<u128> {
        let d = self.from_bigint(q.denom());
        Some(self.mul(self.from_bigint(q.numer()), self.inv(d)?))
    }

    /// v_p(a), capped at k.
    pub fn valuation(&self, a: u128) -> u32 {
        let mut a = a % self.m;
        if a == 0 {
            return self.k;
        }
        let mut v = 0;
        while a % self.p as u128 == 0 {
            a /= self.p as u128;
            v += 1;
        }
        v
    }

    pub fn to_padic(&self, a: u128) -> PadicNumber {
        PadicNumber::from_int(&BigInt::from(a), self.p, self.k as i64)
    }

    /// Square root of a unit lifted from a given root mod p.
    pub fn sqrt_lift(&self, a: u128, r0: u64) -> Result<u128> {
        let a = a % self.m;
        let mut r = r0 as u128 % self.m;
        if self.mul(r, r) % self.p as u128 != a % self.p as u128 || r % self.p as u128 == 0 {
            return Err(Error::InvalidInput("square root lift needs a unit root mod p".into()));
        }
        for _ in 0..=self.k.ilog2() + 1 {
            let num = self.sub(self.mul(r, r), a);
            let den = self.inv(self.mul(2, r)).unwrap();
            r = self.sub(r, self.mul(num, den));
        }
        Ok(r)
    }

    /// Newton lift of a simple root mod p of a polynomial (low to high).
    pub fn root_lift(&self, c: &[u128], r0: u64) -> Result<u128> {
        let ev = |x: u128| c.iter().rev().fold(0, |acc, &ci| self.add(self.mul(acc, x), ci));
        let dev = |x: u128| {
            c.iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0, |acc, (i, &ci)| self.add(self.mul(acc, x), self.mul(ci, i as u128)))
        };
        let mut r = r0 as u128;
        for _ in 0..=self.k.ilog2() + 1 {
            let d = self.inv(dev(r)).ok_or_else(|| Error::InvalidInput("root is not simple mod p".into()))?;
            r = self.sub(r, self.mul(ev(r), d));
        }
        if ev(r) != 0 {
            return Err(Error::InvalidInput("Newton lift failed".into()));
        }
        Ok(r)
    }

    pub fn sqrt_mod_p(&self, a: u128) -> Option<u64> {
        Fp::from_u64((a % self.p as u128) as u64, self.p).sqrt().map(|x| x.v)
    }
}

/// A power series Σ c_n s^n known modulo (p^k, s^order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicSeries {
    pub md: Modulus,
    pub c: Vec<u128>,
}

impl PadicSeries {
    pub fn from_coeffs(md: Modulus, mut c: Vec<u128>, order: usize) -> Self {
        c.resize(order, 0);
        for x in c.iter_mut() {
            *x %= md.m;
        }
        PadicSeries { md, c }
    }

    pub fn constant(md: Modulus, a: u128, order: usize) -> Self {
        Self::from_coeffs(md, vec![a], order)
    }

    /// The parameter s itself.
    pub fn var(md: Modulus, order: usize) -> Self {
        Self::from_coeffs(md, vec![0, 1], order)
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, n: usize) -> u128 {
        self.c.get(n).copied().unwrap_or(0)
    }

    pub fn coefficient(&self, n: usize) -> PadicNumber {
        self.md.to_padic(self.coeff(n))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        PadicSeries { md: self.md, c: (0..n).map(|i| self.md.add(self.c[i], o.c[i])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        PadicSeries { md: self.md, c: (0..n).map(|i| self.md.sub(self.c[i], o.c[i])).collect() }
    }

    pub fn scale(&self, a: u128) -> Self {
        PadicSeries { md: self.md, c: self.c.iter().map(|&x| self.md.mul(x, a)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut c = vec![0u128; n];
        for (i, &a) in self.c.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate().take(n - i) {
                c[i + j] = (c[i + j] + a * b) % self.md.m;
            }
        }
        PadicSeries { md: self.md, c }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.order();
        let i0 = self.md.inv(self.coeff(0)).ok_or_else(|| Error::InvalidInput("series inverse needs a unit constant term".into()))?;
        let mut b = vec![0u128; n];
        if n == 0 {
            return Ok(self.clone());
        }
        b[0] = i0;
        for k in 1..n {
            let mut s = 0u128;
            for i in 1..=k {
                s = (s + self.c[i] * b[k - i]) % self.md.m;
            }
            b[k] = self.md.mul(self.md.neg(s), i0);
        }
        Ok(PadicSeries { md: self.md, c: b })
    }

    /// The square root with constant term y0 (a unit with y0² ≡ c₀).
    pub fn sqrt_with(&self, y0: u128) -> Result<Self> {
        let n = self.order();
        if self.md.mul(y0, y0) != self.coeff(0) {
            return Err(Error::InvalidInput("sqrt_with: y0² differs from the constant term".into()));
        }
        let inv2 = self.md.inv(self.md.mul(2, y0)).ok_or_else(|| Error::InvalidInput("sqrt of a non-unit".into()))?;
        let mut y = vec![0u128; n];
        if n == 0 {
            return Ok(self.clone());
        }
        y[0] = y0;
        for k in 1..n {
            let mut s = 0u128;
            for i in 1..k {
                s = (s + y[i] * y[k - i]) % self.md.m;
            }
            y[k] = self.md.mul(self.md.sub(self.c[k], s), inv2);
        }
        Ok(PadicSeries { md: self.md, c: y })
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(self.md, 1, self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// P(self) for a polynomial P (low to high).
    pub fn compose_poly(&self, p: &[u128]) -> Self {
        let mut acc = Self::constant(self.md, 0, self.order());
        for &c in p.iter().rev() {
            acc = acc.mul(self);
            acc.c[0] = self.md.add(acc.c[0], c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut c: Vec<u128> = (1..n).map(|i| self.md.mul(self.c[i], i as u128)).collect();
        c.push(0);
        PadicSeries { md: self.md, c }
    }

    /// self / s^k, requiring the first k coefficients to vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if self.c.iter().take(k).any(|&x| x != 0) {
            return Err(Error::InvalidInput("series is not divisible by the requested power".into()));
        }
        let mut c: Vec<u128> = self.c[k.min(self.order())..].to_vec();
        c.resize(self.order() - k.min(self.order()), 0);
        Ok(PadicSeries { md: self.md, c })
    }

    /// Truncate to a smaller order.
    pub fn truncate(&self, order: usize) -> Self {
        PadicSeries { md: self.md, c: self.c.iter().take(order).copied().collect() }
    }
}

/// Polynomial (low to high) in s0 + σ, as coefficients in σ.
pub fn taylor_shift(md: &Modulus, p: &[u128], s0: u128) -> Vec<u128> {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] = md.add(c[j], md.mul(s0, c[j + 1]));
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_identities() {
        let md = Modulus::new(5, 8).unwrap();
        let f = PadicSeries::from_coeffs(md, vec![4, 3, 0, 7], 20);
        let y = f.sqrt_with(2).unwrap();
        assert_eq!(y.mul(&y), f);
        let inv = f.inv().unwrap();
        assert_eq!(inv.mul(&f), PadicSeries::constant(md, 1, 20));
        let shifted = taylor_shift(&md, &[1, 2, 3], 2);
        // 1 + 2(2+σ) + 3(2+σ)² = 17 + 14σ + 3σ²
        assert_eq!(shifted, vec![17, 14, 3]);
        let r = md.root_lift(&[md.from_i128(-2), 0, 0, 1], 3).unwrap();
        assert_eq!(md.mul(md.mul(r, r), r), 2);
    }
}
