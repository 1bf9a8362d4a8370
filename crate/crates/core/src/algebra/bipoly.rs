use super::{Field, Rational, Ring, UniPoly};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial in two named variables over ℚ; key (i, j) is the exponent pair
/// of (vars[0], vars[1]).
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    pub vars: [String; 2],
    terms: BTreeMap<(u32, u32), Rational>,
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", super::rational::fmt_rational(c))?;
            if i > 0 {
                write!(f, "*{}^{}", self.vars[0], i)?;
            }
            if j > 0 {
                write!(f, "*{}^{}", self.vars[1], j)?;
            }
        }
        Ok(())
    }
}

impl BiPoly {
    pub fn zero(v0: &str, v1: &str) -> Self {
        BiPoly { vars: [v0.to_string(), v1.to_string()], terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, v0: &str, v1: &str) -> Self {
        let mut p = Self::zero(v0, v1);
        p.add_term(0, 0, c);
        p
    }

    pub fn var(idx: usize, v0: &str, v1: &str) -> Self {
        let mut p = Self::zero(v0, v1);
        if idx == 0 {
            p.add_term(1, 0, Rational::one());
        } else {
            p.add_term(0, 1, Rational::one());
        }
        p
    }

    fn like(&self) -> Self {
        BiPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if Zero::is_zero(e) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| if idx == 0 { i } else { j }).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), c) in &o.terms {
            r.add_term(i, j, c.clone());
        }
        r
    }

    pub fn negate(&self) -> Self {
        let mut r = self.like();
        for (&(i, j), c) in &self.terms {
            r.add_term(i, j, -c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.negate())
    }

    pub fn scale(&self, a: &Rational) -> Self {
        let mut r = self.like();
        for (&(i, j), c) in &self.terms {
            r.add_term(i, j, c * a);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = self.like();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                r.add_term(i + k, j + l, c * d);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = BiPoly::constant(Rational::one(), &self.vars[0], &self.vars[1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * x.pow(i as i32) * y.pow(j as i32);
        }
        acc
    }

    /// Coefficients with respect to variable `idx`, as polynomials in the other
    /// variable: self = Σ_k coeffs[k] · var^k.
    pub fn coeffs_in(&self, idx: usize) -> Vec<UniPoly<Rational>> {
        let d = self.degree_in(idx).unwrap_or(0) as usize;
        let mut raw: Vec<Vec<Rational>> = vec![Vec::new(); d + 1];
        for (&(i, j), c) in &self.terms {
            let (k, other) = if idx == 0 { (i, j) } else { (j, i) };
            let v = &mut raw[k as usize];
            if v.len() <= other as usize {
                v.resize(other as usize + 1, Rational::zero());
            }
            v[other as usize] += c;
        }
        raw.into_iter().map(|v| UniPoly::new(v, Rational::zero())).collect()
    }

    /// Substitute a rational value for variable `idx`, giving a polynomial in the other.
    pub fn specialize(&self, idx: usize, value: &Rational) -> UniPoly<Rational> {
        let cs = self.coeffs_in(1 - idx);
        UniPoly::new(cs.iter().map(|p| p.eval(value)).collect(), Rational::zero())
    }

    /// Embed a univariate polynomial as a BiPoly in variable `idx`.
    pub fn from_uni(p: &UniPoly<Rational>, idx: usize, v0: &str, v1: &str) -> Self {
        let mut r = BiPoly::zero(v0, v1);
        for (k, c) in p.coeffs().iter().enumerate() {
            if idx == 0 {
                r.add_term(k as u32, 0, c.clone());
            } else {
                r.add_term(0, k as u32, c.clone());
            }
        }
        r
    }

    /// Rename/reorder variables into the frame (v0, v1); every variable used by
    /// self must appear in the new frame.
    pub fn reframe(&self, v0: &str, v1: &str) -> crate::Result<Self> {
        let mut r = BiPoly::zero(v0, v1);
        let pos = |name: &str| -> Option<usize> {
            if name == v0 {
                Some(0)
            } else if name == v1 {
                Some(1)
            } else {
                None
            }
        };
        let map0 = pos(&self.vars[0]);
        let map1 = pos(&self.vars[1]);
        for (&(i, j), c) in &self.terms {
            let mut e = [0u32; 2];
            for (src, exp) in [(map0, i), (map1, j)] {
                if exp == 0 {
                    continue;
                }
                match src {
                    Some(k) => e[k] += exp,
                    None => return Err(crate::Error::InvalidInput(format!("variable missing from frame {v0},{v1}"))),
                }
            }
            r.add_term(e[0], e[1], c.clone());
        }
        Ok(r)
    }

    /// Same terms under new variable names.
    pub fn rename(&self, v0: &str, v1: &str) -> Self {
        BiPoly { vars: [v0.to_string(), v1.to_string()], terms: self.terms.clone() }
    }

    /// Substitute a BiPoly (in the same frame) for variable `idx`.
    pub fn substitute(&self, idx: usize, val: &BiPoly) -> Self {
        let cs = self.coeffs_in(idx);
        let mut acc = self.like();
        for c in cs.iter().rev() {
            let cpoly = BiPoly::from_uni(c, 1 - idx, &self.vars[0], &self.vars[1]);
            acc = acc.mul(val).add(&cpoly);
        }
        acc
    }

    /// Remainder modulo F, where F has a constant leading coefficient as a
    /// polynomial in variable `idx`.
    pub fn reduce_mod(&self, f: &BiPoly, idx: usize) -> crate::Result<Self> {
        let df = f.degree_in(idx).unwrap_or(0);
        let fc = f.coeffs_in(idx);
        let lead = fc[df as usize].clone();
        if lead.degree() != Some(0) {
            return Err(crate::Error::InvalidInput("modulus not monic in the reduction variable".into()));
        }
        let lead_inv = lead.coeff(0).inv().unwrap();
        let mut cur = self.clone();
        loop {
            let d = match cur.degree_in(idx) {
                Some(d) if d >= df && !cur.is_zero() => d,
                _ => return Ok(cur),
            };
            let cc = cur.coeffs_in(idx);
            let top = BiPoly::from_uni(&cc[d as usize].scale(&lead_inv), 1 - idx, &self.vars[0], &self.vars[1]);
            let mut mono = self.like();
            if idx == 0 {
                mono.add_term(d - df, 0, Rational::one());
            } else {
                mono.add_term(0, d - df, Rational::one());
            }
            cur = cur.sub(&top.mul(&mono).mul(f));
        }
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    fn zero_like(&self) -> Self {
        UniPoly::zero(self.ring_zero().clone())
    }
    fn one_like(&self) -> Self {
        UniPoly::one(self.ring_zero())
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        UniPoly::negate(self)
    }
    fn from_int_like(&self, n: i64) -> Self {
        UniPoly::constant(self.ring_zero().from_int_like(n))
    }
}
