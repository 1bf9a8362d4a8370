use super::{Field, Ring, UniPoly};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Shorthand constructor `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_int_like(&self, n: i64) -> Self {
        rat_int(n)
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Exact square root of a rational square, if it is one.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == *n && &rd * &rd == *d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

pub fn is_rational_square(q: &Rational) -> bool {
    rational_sqrt(q).is_some()
}

/// Split a nonzero integer as `sign · core · square²` where `core` has no
/// square factor below the trial bound; the remaining cofactor is pulled into
/// the square part when it is itself a perfect square.
pub fn square_split_int(n: &BigInt, trial_bound: u64) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut core = BigInt::one();
    let mut sq = BigInt::one();
    let mut p: u64 = 2;
    while p <= trial_bound {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            sq *= bp.pow(e / 2);
            if e % 2 == 1 {
                core *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if is_square_int(&m) {
        sq *= m.sqrt();
    } else {
        core *= m;
    }
    (sign * core, sq)
}

/// Write a nonzero rational as `core · q²` with `core` a (mostly) squarefree integer.
pub fn rational_square_split(q: &Rational) -> (BigInt, Rational) {
    let prod = q.numer() * q.denom();
    let (core, sq) = square_split_int(&prod, 100_000);
    (core, Rational::new(sq, q.denom().clone()))
}

pub fn to_i64(q: &BigInt) -> Option<i64> {
    q.to_i64()
}

pub fn bigint_sign(q: &Rational) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Clear denominators: returns `(primitive integer coefficient vector, scale)`
/// with `poly = scale · Σ c_i xⁱ` and gcd(c) = 1, leading coefficient positive.
pub fn primitive_part(p: &UniPoly<Rational>) -> (Vec<BigInt>, Rational) {
    if p.is_zero() {
        return (vec![], Rational::zero());
    }
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        g = -g;
    }
    let out = ints.iter().map(|c| c / &g).collect();
    (out, Rational::new(g, l))
}

fn eval_int_poly(c: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = acc * x + a;
    }
    acc
}

/// Number of sign changes of a Sturm sequence evaluated at `x`.
fn sturm_changes(seq: &[UniPoly<Rational>], x: &Rational) -> usize {
    let mut last = 0i32;
    let mut ch = 0;
    for p in seq {
        let s = bigint_sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                ch += 1;
            }
            last = s;
        }
    }
    ch
}

pub fn sturm_sequence(p: &UniPoly<Rational>) -> Vec<UniPoly<Rational>> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.negate());
    }
    seq
}

/// Number of distinct real roots of a nonzero rational polynomial.
pub fn count_real_roots(p: &UniPoly<Rational>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(p);
    let b = cauchy_bound(p);
    let lo = -b.clone();
    sturm_changes(&seq, &lo) - sturm_changes(&seq, &b)
}

fn cauchy_bound(p: &UniPoly<Rational>) -> Rational {
    let lc = p.lc().clone();
    let mut m = Rational::zero();
    for c in p.coeffs() {
        let r = (c / &lc).abs();
        if r > m {
            m = r;
        }
    }
    m + Rational::one()
}

/// All rational roots (with multiplicity) of a nonzero rational polynomial.
/// Roots are located by Sturm bisection on the integer-root transform, so no
/// integer factorisation is needed.
pub fn rational_roots(p: &UniPoly<Rational>) -> Vec<Rational> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    // Work on the squarefree part, then recover multiplicities by division.
    let sf = p.divexact(&p.gcd(&p.derivative()));
    let (c, _) = primitive_part(&sf);
    let n = c.len() - 1;
    let a_n = c[n].clone();
    // Q(z) = a_n^{n-1} P(z / a_n) is monic integral; rational roots of P are z/a_n.
    let mut q = vec![BigInt::zero(); n + 1];
    for (i, ci) in c.iter().enumerate() {
        q[i] = ci * a_n.pow((n - i) as u32) / &a_n;
    }
    q[n] = BigInt::one();
    let qpoly = UniPoly::new(q.iter().map(|x| Rational::from_integer(x.clone())).collect(), Rational::zero());
    let seq = sturm_sequence(&qpoly);
    let bound: BigInt = q.iter().map(|x| x.abs()).max().unwrap() + BigInt::one();
    let mut stack = vec![(-bound.clone(), bound)];
    let mut int_roots = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        // roots in (lo, hi]
        let k = sturm_changes(&seq, &Rational::from_integer(lo.clone()))
            - sturm_changes(&seq, &Rational::from_integer(hi.clone()));
        if k == 0 {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if eval_int_poly(&q, &hi).is_zero() {
                int_roots.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    for z in int_roots {
        let r = Rational::new(z, a_n.clone());
        let lin = UniPoly::new(vec![-r.clone(), Rational::one()], Rational::zero());
        let mut cur = p.clone();
        while cur.rem(&lin).is_zero() {
            out.push(r.clone());
            cur = cur.divexact(&lin);
        }
    }
    out.sort();
    out
}

/// Rational roots of a cubic with multiplicity; an empty list certifies
/// irreducibility over ℚ.
pub fn cubic_rational_roots(h: &UniPoly<Rational>) -> crate::Result<Vec<Rational>> {
    if h.degree() != Some(3) {
        return Err(crate::Error::InvalidInput("cubic_rational_roots expects degree 3".into()));
    }
    Ok(rational_roots(h))
}

/// Continued-fraction style rational reconstruction of `a mod m` with
/// numerator and denominator bounded by √(m/2).
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !t1.gcd(m).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Reduce a rational modulo a prime power (denominator must be a unit).
pub fn rational_mod(q: &Rational, m: &BigInt) -> Option<BigInt> {
    let d = q.denom().mod_floor(m);
    let inv = mod_inverse(&d, m)?;
    Some((q.numer().mod_floor(m) * inv).mod_floor(m))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    let s = s.trim();
    let bad = || crate::Error::Parse(format!("bad rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(c.iter().map(|&x| rat_int(x)).collect(), Rational::zero())
    }

    #[test]
    fn squares() {
        assert!(is_rational_square(&rat(4, 9)));
        assert!(!is_rational_square(&rat(-4, 1)));
        assert!(!is_rational_square(&rat(2, 1)));
        assert!(is_rational_square(&rat(0, 1)));
    }

    #[test]
    fn cubic_roots() {
        let r = cubic_rational_roots(&poly(&[0, -1, 0, 1])).unwrap();
        assert_eq!(r, vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let h = UniPoly::new(vec![rat(8, 9), rat(-1, 1), rat(-8, 1), rat(1, 1)], Rational::zero());
        assert!(cubic_rational_roots(&h).unwrap().is_empty());
        assert!(cubic_rational_roots(&poly(&[-2, 0, 0, 1])).unwrap().is_empty());
        // (2x - 1)^2 (x + 3)
        let p = poly(&[-1, 2]).mul(&poly(&[-1, 2])).mul(&poly(&[3, 1]));
        assert_eq!(cubic_rational_roots(&p).unwrap(), vec![rat(-3, 1), rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn reconstruct() {
        let m = BigInt::from(1_000_003i64).pow(2);
        let q = rat(-37, 91);
        let a = rational_mod(&q, &m).unwrap();
        assert_eq!(rational_reconstruct(&a, &m), Some(q));
    }

    #[test]
    fn real_roots() {
        assert_eq!(count_real_roots(&poly(&[-2, 0, 0, 1])), 1);
        assert_eq!(count_real_roots(&poly(&[0, -1, 0, 1])), 3);
    }
}
