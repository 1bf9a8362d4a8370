use super::{Field, Ring};
use std::fmt;

/// Dense univariate polynomial, coefficients low to high.
///
/// The ring's zero is stored alongside so that the zero polynomial still knows
/// its coefficient ring (finite fields and number fields carry context).
#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    c: Vec<R>,
    zero: R,
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.c)
    }
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut c: Vec<R>, zero: R) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        let zero = zero.zero_like();
        UniPoly { c, zero }
    }

    pub fn zero(zero: R) -> Self {
        UniPoly { c: vec![], zero: zero.zero_like() }
    }

    pub fn constant(a: R) -> Self {
        let z = a.zero_like();
        UniPoly::new(vec![a], z)
    }

    pub fn one(zero: &R) -> Self {
        UniPoly::constant(zero.one_like())
    }

    /// The monomial `a·x^k`.
    pub fn monomial(a: R, k: usize) -> Self {
        let z = a.zero_like();
        let mut c = vec![z.clone(); k + 1];
        c[k] = a;
        UniPoly::new(c, z)
    }

    pub fn x(zero: &R) -> Self {
        UniPoly::monomial(zero.one_like(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn ring_zero(&self) -> &R {
        &self.zero
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> &R {
        self.c.last().unwrap_or(&self.zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            })
            .collect();
        UniPoly::new(c, self.zero.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.negate())
    }

    pub fn negate(&self) -> Self {
        UniPoly { c: self.c.iter().map(|a| a.negate()).collect(), zero: self.zero.clone() }
    }

    pub fn scale(&self, a: &R) -> Self {
        UniPoly::new(self.c.iter().map(|x| x.times(a)).collect(), self.zero.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.zero.clone());
        }
        let mut c = vec![self.zero.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        UniPoly::new(c, self.zero.clone())
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::one(&self.zero);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.zero.clone(); k];
        c.extend(self.c.iter().cloned());
        UniPoly::new(c, self.zero.clone())
    }

    /// Truncate to terms of degree < n.
    pub fn truncate(&self, n: usize) -> Self {
        UniPoly::new(self.c.iter().take(n).cloned().collect(), self.zero.clone())
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        for a in self.c.iter().rev() {
            acc = acc.times(x).plus(a);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return UniPoly::zero(self.zero.clone());
        }
        let c = self.c.iter().enumerate().skip(1).map(|(i, a)| a.times(&self.zero.from_int_like(i as i64))).collect();
        UniPoly::new(c, self.zero.clone())
    }

    /// Composition self(g(x)).
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = UniPoly::zero(self.zero.clone());
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&UniPoly::constant(a.clone()));
        }
        acc
    }

    /// Reverse with respect to degree n: x^n · p(1/x).
    pub fn reverse(&self, n: usize) -> Self {
        assert!(self.c.len() <= n + 1, "reverse degree too small");
        let mut c = vec![self.zero.clone(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[n - i] = a.clone();
        }
        UniPoly::new(c, self.zero.clone())
    }

    pub fn map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::new(self.c.iter().map(f).collect(), zero)
    }
}

impl<F: Field> UniPoly<F> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("leading coefficient invertible");
        self.scale(&inv)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return (UniPoly::zero(self.zero.clone()), self.clone());
        }
        let inv = d.lc().inv().expect("leading coefficient invertible");
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let f = r[i].times(&inv);
            for (j, b) in d.c.iter().enumerate() {
                let k = i - dd + j;
                r[k] = r[k].minus(&f.times(b));
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        (UniPoly::new(q, self.zero.clone()), UniPoly::new(r, self.zero.clone()))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; panics in debug builds if the division is not exact.
    pub fn divexact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·o = g, g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let z = self.zero.clone();
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(&z), UniPoly::zero(z.clone()));
        let (mut t0, mut t1) = (UniPoly::zero(z.clone()), UniPoly::one(&z));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = r1;
            r1 = r;
            let s2 = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s2;
            let t2 = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &num_bigint::BigUint, m: &Self) -> Self {
        let mut acc = UniPoly::one(&self.zero).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    /// Resultant via the Euclidean recursion
    /// Res(f, g) = (-1)^{mn} lc(g)^{m - deg r} Res(g, r), r = f mod g.
    pub fn resultant(&self, g: &Self) -> F {
        let z = self.zero.clone();
        if self.is_zero() || g.is_zero() {
            return z;
        }
        let (mut f, mut g) = (self.clone(), g.clone());
        let mut acc = z.one_like();
        loop {
            let m = f.degree().unwrap();
            let n = g.degree().unwrap();
            if n == 0 {
                return acc.times(&g.lc().pow_u(m as u64));
            }
            let r = f.rem(&g);
            if r.is_zero() {
                return z;
            }
            let k = r.degree().unwrap();
            if (m * n) % 2 == 1 {
                acc = acc.negate();
            }
            acc = acc.times(&g.lc().pow_u((m - k) as u64));
            f = g;
            g = r;
        }
    }

    /// Δ(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
    pub fn discriminant(&self) -> crate::Result<F> {
        let n = match self.degree() {
            None | Some(0) => {
                return Err(crate::Error::InvalidInput("discriminant of a constant polynomial".into()))
            }
            Some(n) => n,
        };
        let r = self.resultant(&self.derivative());
        let s = if (n * (n - 1) / 2) % 2 == 1 { r.negate() } else { r };
        s.divide(self.lc()).ok_or_else(|| crate::Error::InvalidInput("leading coefficient not invertible".into()))
    }

    /// Yun's square-free factorisation of a nonzero polynomial: returns
    /// (lc, [a₁, a₂, ...]) with self = lc · ∏ aᵢ^i and the aᵢ monic, squarefree,
    /// pairwise coprime (valid in characteristic 0 or when p exceeds the degree).
    pub fn squarefree_factorisation(&self) -> (F, Vec<Self>) {
        let lc = self.lc().clone();
        let f = self.monic();
        let mut out = Vec::new();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.divexact(&a);
        let mut d = fp.divexact(&a).sub(&b.derivative());
        while b.degree().unwrap_or(0) > 0 {
            let g = b.gcd(&d);
            b = b.divexact(&g);
            d = d.divexact(&g).sub(&b.derivative());
            out.push(g);
        }
        (lc, out)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*x")?,
                _ => write!(f, "({a})*x^{i}")?,
            }
        }
        Ok(())
    }
}
