use super::fp::{is_prime, mulmod, Fp};
use super::{Field, Ring, UniPoly};
use num_bigint::BigUint;
use rand::Rng;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// 𝔽_{p^k} presented as 𝔽_p[x]/(m) for a fixed monic irreducible m.
#[derive(PartialEq, Eq)]
pub struct FiniteField {
    pub p: u64,
    pub k: usize,
    /// Monic modulus, low to high, length k + 1.
    pub modulus: Vec<u64>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

static MODULI: OnceLock<Mutex<HashMap<(u64, usize), Arc<FiniteField>>>> = OnceLock::new();

/// Rabin irreducibility test over 𝔽_p.
pub fn is_irreducible_fp(f: &UniPoly<Fp>) -> bool {
    let k = match f.degree() {
        Some(k) if k >= 1 => k,
        _ => return false,
    };
    if k == 1 {
        return true;
    }
    let p = f.lc().p;
    let z = Fp::zero(p);
    let x = UniPoly::x(&z);
    let frob = |e: usize| -> UniPoly<Fp> {
        let q = BigUint::from(p).pow(e as u32);
        x.powmod(&q, f)
    };
    if frob(k).sub(&x).rem(f).is_zero() == false {
        return false;
    }
    for (r, _) in super::fp::factor_u64(k as u64) {
        let h = frob(k / r as usize).sub(&x);
        if f.gcd(&h).degree() != Some(0) {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// The field of order p^k with the smallest irreducible modulus in the
    /// order that reads the coefficient vector (c₀, …, c_{k−1}) as a base-p
    /// integer. Memoised per (p, k).
    pub fn get(p: u64, k: usize) -> crate::Result<Arc<FiniteField>> {
        if p == 2 || !is_prime(p) || k == 0 {
            return Err(crate::Error::InvalidInput(format!("GF({p}^{k}) unsupported")));
        }
        let table = MODULI.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = table.lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let z = Fp::zero(p);
        let mut n: u128 = 0;
        let modulus = loop {
            let mut c = Vec::with_capacity(k + 1);
            let mut t = n;
            for _ in 0..k {
                c.push((t % p as u128) as u64);
                t /= p as u128;
            }
            c.push(1);
            let poly = UniPoly::new(c.iter().map(|&v| Fp::from_u64(v, p)).collect(), z);
            if is_irreducible_fp(&poly) {
                break c;
            }
            n += 1;
        };
        let f = Arc::new(FiniteField { p, k, modulus });
        table.lock().unwrap().insert((p, k), f.clone());
        Ok(f)
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn zero(self: &Arc<Self>) -> Fq {
        Fq { f: self.clone(), c: vec![0; self.k] }
    }

    pub fn one(self: &Arc<Self>) -> Fq {
        let mut c = vec![0; self.k];
        c[0] = 1;
        Fq { f: self.clone(), c }
    }

    pub fn from_fp(self: &Arc<Self>, a: u64) -> Fq {
        let mut c = vec![0; self.k];
        c[0] = a % self.p;
        Fq { f: self.clone(), c }
    }

    /// Element with the given index in base-p digit order.
    pub fn element(self: &Arc<Self>, mut idx: u128) -> Fq {
        let mut c = vec![0; self.k];
        for ci in c.iter_mut() {
            *ci = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        Fq { f: self.clone(), c }
    }

    pub fn random<R: Rng>(self: &Arc<Self>, rng: &mut R) -> Fq {
        Fq { f: self.clone(), c: (0..self.k).map(|_| rng.gen_range(0..self.p)).collect() }
    }

    /// Raw multiplication on coefficient slices (length k), reducing by the modulus.
    pub fn mul_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let (p, k) = (self.p, self.k);
        let mut prod = [0u128; 16];
        debug_assert!(2 * k - 1 <= 16);
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += a[i] as u128 * b[j] as u128;
            }
        }
        let mut r = [0u64; 16];
        for i in 0..2 * k - 1 {
            r[i] = (prod[i] % p as u128) as u64;
        }
        for i in (k..2 * k - 1).rev() {
            let t = r[i];
            if t == 0 {
                continue;
            }
            r[i] = 0;
            for j in 0..k {
                // x^i = x^{i-k}·x^k ≡ -x^{i-k}·Σ m_j x^j
                let sub = mulmod(t, self.modulus[j], p);
                let idx = i - k + j;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        out[..k].copy_from_slice(&r[..k]);
    }

    pub fn index_of(&self, c: &[u64]) -> u128 {
        let mut idx = 0u128;
        for &ci in c.iter().rev() {
            idx = idx * self.p as u128 + ci as u128;
        }
        idx
    }
}

/// Element of 𝔽_{p^k}.
#[derive(Clone)]
pub struct Fq {
    pub f: Arc<FiniteField>,
    pub c: Vec<u64>,
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.f, &o.f) || *self.f == *o.f)
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.k == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl Fq {
    pub fn is_in_prime_field(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    pub fn pow_big(&self, e: &BigUint) -> Fq {
        let mut acc = self.one_like();
        for i in (0..e.bits()).rev() {
            acc = acc.times(&acc);
            if e.bit(i) {
                acc = acc.times(self);
            }
        }
        acc
    }

    pub fn frobenius(&self) -> Fq {
        self.pow_big(&BigUint::from(self.f.p))
    }

    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let q = BigUint::from(self.f.order());
        self.pow_big(&((q - 1u32) / 2u32)).is_one()
    }

    /// Tonelli–Shanks over 𝔽_q.
    pub fn sqrt(&self) -> Option<Fq> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let q = BigUint::from(self.f.order());
        let one = BigUint::from(1u32);
        let mut t_exp = &q - &one;
        let mut s = 0u32;
        while !t_exp.bit(0) {
            t_exp >>= 1;
            s += 1;
        }
        // find a non-residue deterministically
        let mut idx = 2u128;
        let z = loop {
            let cand = self.f.element(idx);
            if !cand.is_square() {
                break cand;
            }
            idx += 1;
        };
        let mut m = s;
        let mut c = z.pow_big(&t_exp);
        let mut t = self.pow_big(&t_exp);
        let mut r = self.pow_big(&((&t_exp + &one) / 2u32));
        while !t.is_one() {
            let mut i = 0;
            let mut tt = t.clone();
            while !tt.is_one() {
                tt = tt.times(&tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.times(&b);
            }
            m = i;
            c = b.times(&b);
            t = t.times(&c);
            r = r.times(&b);
        }
        Some(r)
    }

    pub fn to_fp(&self) -> Option<Fp> {
        if self.is_in_prime_field() {
            Some(Fp::from_u64(self.c[0], self.f.p))
        } else {
            None
        }
    }
}

impl Ring for Fq {
    fn zero_like(&self) -> Self {
        self.f.zero()
    }
    fn one_like(&self) -> Self {
        self.f.one()
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    fn plus(&self, o: &Self) -> Self {
        let p = self.f.p;
        Fq { f: self.f.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| (a + b) % p).collect() }
    }
    fn minus(&self, o: &Self) -> Self {
        let p = self.f.p;
        Fq { f: self.f.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| (a + p - b) % p).collect() }
    }
    fn times(&self, o: &Self) -> Self {
        let mut out = vec![0; self.f.k];
        self.f.mul_raw(&self.c, &o.c, &mut out);
        Fq { f: self.f.clone(), c: out }
    }
    fn negate(&self) -> Self {
        let p = self.f.p;
        Fq { f: self.f.clone(), c: self.c.iter().map(|a| (p - a) % p).collect() }
    }
    fn from_int_like(&self, n: i64) -> Self {
        self.f.from_fp(n.rem_euclid(self.f.p as i64) as u64)
    }
}

impl Field for Fq {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let q = BigUint::from(self.f.order());
        Some(self.pow_big(&(q - 2u32)))
    }
}

/// Lift a polynomial over 𝔽_p into 𝔽_{p^k}.
pub fn lift_poly(f: &UniPoly<Fp>, field: &Arc<FiniteField>) -> UniPoly<Fq> {
    f.map(field.zero(), |a| field.from_fp(a.v))
}

/// All roots in 𝔽_q with multiplicity (ascending by index).
pub fn ff_poly_roots(f: &UniPoly<Fq>) -> crate::Result<Vec<Fq>> {
    if f.is_zero() {
        return Err(crate::Error::InvalidInput("roots of the zero polynomial".into()));
    }
    let field = f.ring_zero().f.clone();
    let q = field.order();
    let mut distinct: Vec<Fq> = Vec::new();
    if f.degree() == Some(0) {
        return Ok(vec![]);
    }
    if q <= 2048 {
        for i in 0..q {
            let e = field.element(i);
            if f.eval(&e).is_zero() {
                distinct.push(e);
            }
        }
    } else {
        let z = field.zero();
        let x = UniPoly::x(&z);
        let fm = f.monic();
        let xq = x.powmod(&BigUint::from(q), &fm);
        let g = fm.gcd(&xq.sub(&x));
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(q as u64 ^ 0x5eed);
        split_linear(&g, &field, &mut rng, &mut distinct);
    }
    let mut out = Vec::new();
    for r in distinct {
        let lin = UniPoly::new(vec![r.negate(), r.one_like()], r.zero_like());
        let mut cur = f.clone();
        while cur.rem(&lin).is_zero() {
            out.push(r.clone());
            cur = cur.divexact(&lin);
        }
    }
    out.sort_by_key(|e| field.index_of(&e.c));
    Ok(out)
}

fn split_linear<R: Rng>(g: &UniPoly<Fq>, field: &Arc<FiniteField>, rng: &mut R, out: &mut Vec<Fq>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push(m.coeff(0).negate());
        }
        Some(_) => loop {
            let a = field.random(rng);
            let z = field.zero();
            let base = UniPoly::new(vec![a, z.one_like()], z.clone());
            let e = (BigUint::from(field.order()) - 1u32) / 2u32;
            let h = base.powmod(&e, g).sub(&UniPoly::one(&z));
            let d = g.gcd(&h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                split_linear(&d, field, rng, out);
                split_linear(&g.divexact(&d), field, rng, out);
                return;
            }
        },
    }
}

/// Number of roots in 𝔽_p of a polynomial over 𝔽_p, counted without multiplicity.
pub fn count_distinct_roots_fp(f: &UniPoly<Fp>) -> usize {
    let p = f.lc().p;
    let z = Fp::zero(p);
    let x = UniPoly::x(&z);
    let fm = f.monic();
    let xp = x.powmod(&BigUint::from(p), &fm);
    fm.gcd(&xp.sub(&x)).degree().unwrap_or(0)
}

pub fn fp_from_int(v: &num_bigint::BigInt, p: u64) -> Fp {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    Fp::from_u64(v.mod_floor(&num_bigint::BigInt::from(p)).to_u64().unwrap(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fpoly(c: &[i64], field: &Arc<FiniteField>) -> UniPoly<Fq> {
        UniPoly::new(c.iter().map(|&v| field.from_fp(v.rem_euclid(field.p as i64) as u64)).collect(), field.zero())
    }

    #[test]
    fn roots_small() {
        let f5 = FiniteField::get(5, 1).unwrap();
        let r: Vec<u64> = ff_poly_roots(&fpoly(&[-1, 0, 1], &f5)).unwrap().iter().map(|e| e.c[0]).collect();
        assert_eq!(r, vec![1, 4]);
        assert!(ff_poly_roots(&fpoly(&[-2, 0, 1], &f5)).unwrap().is_empty());
        let r: Vec<u64> = ff_poly_roots(&fpoly(&[1, 0, 1], &f5)).unwrap().iter().map(|e| e.c[0]).collect();
        assert_eq!(r, vec![2, 3]);
    }

    #[test]
    fn extension_sqrt_and_roots() {
        let f = FiniteField::get(7, 3).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        for _ in 0..50 {
            let a = f.random(&mut rng);
            let sq = a.times(&a);
            let r = sq.sqrt().unwrap();
            assert_eq!(r.times(&r), sq);
        }
        // x^3 - 2 splits over GF(7^3)? 2 is not a cube mod 7, so its roots live in GF(7^3).
        let roots = ff_poly_roots(&fpoly(&[-2, 0, 0, 1], &f)).unwrap();
        assert_eq!(roots.len(), 3);
        let big = FiniteField::get(13, 3).unwrap();
        let g = fpoly(&[5, 1, 0, 3, 1], &big);
        let fast = ff_poly_roots(&g).unwrap();
        let slow: Vec<Fq> = (0..big.order()).map(|i| big.element(i)).filter(|e| g.eval(e).is_zero()).collect();
        assert_eq!(fast.len(), slow.len());
    }
}
