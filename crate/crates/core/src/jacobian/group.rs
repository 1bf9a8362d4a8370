use super::cantor::{Jacobian, MumfordDivisor};
use super::count::l_polynomial;
use super::{OddModel, ReducedCurve};
use crate::algebra::fp::factor_u64;
use crate::algebra::fq::lift_poly;
use crate::algebra::linalg::solve_mod_p;
use crate::algebra::{FiniteField, Fp, Fq, Ring, UniPoly};
use crate::curves::{CurvePoint, HyperellipticModel};
use crate::{Error, Result};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

const SYLOW_BUDGET: u64 = 1_000_000;

type Div = MumfordDivisor<Fp>;

/// Basis of the ℓ-Sylow subgroup: generators of orders ℓ^{exps[j]}, exps descending.
#[derive(Clone, Debug)]
pub struct SylowBasis {
    pub ell: u64,
    pub exp: u32,
    pub gens: Vec<Div>,
    pub exps: Vec<u32>,
    /// Element key → coordinates, for non-cyclic Sylow subgroups.
    table: Option<HashMap<Vec<u64>, Vec<u64>>>,
}

#[derive(Clone, Debug)]
pub struct AbelianGroupStructure {
    pub p: u64,
    pub order: u64,
    /// Invariant factors n₁ | n₂ | …, all > 1.
    pub invariants: Vec<u64>,
    pub generators: Vec<Div>,
    pub sylow: Vec<SylowBasis>,
    pub jac: Jacobian<Fp>,
}

/// A random prime divisor of degree k (a Galois orbit of points over 𝔽_{p^k}).
fn random_prime_divisor<R: Rng>(jac: &Jacobian<Fp>, k: usize, rng: &mut R) -> Result<Div> {
    let p = jac.f.lc().p;
    if k == 1 {
        for _ in 0..10_000 {
            let x = Fp::from_u64(rng.gen_range(0..p), p);
            if let Some(y) = jac.f.eval(&x).sqrt() {
                let y = if rng.gen_bool(0.5) { y } else { y.negate() };
                return Ok(jac.point(&x, &y));
            }
        }
        return Err(Error::BudgetExceeded("no 𝔽_p-point found".into()));
    }
    let field = FiniteField::get(p, k)?;
    let fq = lift_poly(&jac.f, &field);
    for _ in 0..10_000 {
        let a = field.random(rng);
        let mut conj = vec![a.clone()];
        for _ in 1..k {
            conj.push(conj.last().unwrap().frobenius());
        }
        if (1..k).any(|i| conj[i] == a) {
            continue;
        }
        let Some(y) = fq.eval(&a).sqrt() else { continue };
        let y = if rng.gen_bool(0.5) { y } else { y.negate() };
        let zq = field.zero();
        let mut u = UniPoly::one(&zq);
        for c in &conj {
            u = u.mul(&UniPoly::new(vec![c.negate(), zq.one_like()], zq.clone()));
        }
        let u: Option<Vec<Fp>> = u.coeffs().iter().map(Fq::to_fp).collect();
        let u = UniPoly::new(u.ok_or_else(|| Error::InvalidInput("norm polynomial not over 𝔽_p".into()))?, Fp::zero(p));
        // v of degree < k with v(a) = y
        let mut pw = vec![field.one()];
        for i in 1..k {
            pw.push(pw[i - 1].times(&a));
        }
        let m: Vec<Vec<u64>> = (0..k).map(|row| (0..k).map(|col| pw[col].c[row]).collect()).collect();
        let v = solve_mod_p(&m, &y.c, p).ok_or_else(|| Error::InvalidInput("singular power basis".into()))?;
        let v = UniPoly::new(v.into_iter().map(|x| Fp::from_u64(x, p)).collect(), Fp::zero(p));
        let d = MumfordDivisor { u, v };
        debug_assert!(jac.is_valid(&d));
        return Ok(d);
    }
    Err(Error::BudgetExceeded(format!("no prime divisor of degree {k}")))
}

/// A random class: a sum of random prime divisors of degree ≤ g, each slot
/// possibly empty, so the support generates J(𝔽_p).
pub fn random_element<R: Rng>(jac: &Jacobian<Fp>, rng: &mut R) -> Result<Div> {
    let mut acc = jac.zero();
    for _ in 0..jac.g + 1 {
        if rng.gen_bool(0.5) {
            continue;
        }
        let k = rng.gen_range(1..=jac.g);
        acc = jac.add(&acc, &random_prime_divisor(jac, k, rng)?);
    }
    Ok(acc)
}

fn ell_order(jac: &Jacobian<Fp>, x: &Div, ell: u64) -> u32 {
    let mut e = 0;
    let mut y = x.clone();
    while !y.is_zero() {
        y = jac.mul_u(ell, &y);
        e += 1;
    }
    e
}

fn span(jac: &Jacobian<Fp>, gens: &[(Div, u64)]) -> HashMap<Vec<u64>, (Div, Vec<u64>)> {
    let mut h: HashMap<Vec<u64>, (Div, Vec<u64>)> = HashMap::new();
    let z = jac.zero();
    h.insert(z.key(), (z, vec![0; gens.len()]));
    for (j, (g, ord)) in gens.iter().enumerate() {
        let current: Vec<(Div, Vec<u64>)> = h.values().cloned().collect();
        for (d, c) in current {
            let mut x = d;
            for k in 1..*ord {
                x = jac.add(&x, g);
                let mut cc = c.clone();
                cc[j] = k;
                h.entry(x.key()).or_insert((x.clone(), cc));
            }
        }
    }
    h
}

fn sylow_basis<R: Rng>(jac: &Jacobian<Fp>, n: u64, ell: u64, e: u32, rng: &mut R) -> Result<SylowBasis> {
    let size = ell.pow(e);
    if size > SYLOW_BUDGET {
        return Err(Error::BudgetExceeded(format!("{ell}-Sylow subgroup of order {size}")));
    }
    let cof = n / size;
    if e == 1 {
        loop {
            let x = jac.mul_u(cof, &random_element(jac, rng)?);
            if !x.is_zero() {
                return Ok(SylowBasis { ell, exp: 1, gens: vec![x], exps: vec![1], table: None });
            }
        }
    }
    // enumerate the whole Sylow subgroup
    let mut elems: HashMap<Vec<u64>, Div> = HashMap::new();
    let z = jac.zero();
    elems.insert(z.key(), z);
    let mut tries = 0;
    while (elems.len() as u64) < size {
        tries += 1;
        if tries > 10_000 {
            return Err(Error::BudgetExceeded(format!("{ell}-Sylow sampling did not saturate")));
        }
        let x = jac.mul_u(cof, &random_element(jac, rng)?);
        if elems.contains_key(&x.key()) {
            continue;
        }
        // H ← H + ⟨x⟩ = ⋃_k (H + k·x), k below the order of x modulo H
        let cur: Vec<Div> = elems.values().cloned().collect();
        let old: std::collections::HashSet<Vec<u64>> = elems.keys().cloned().collect();
        let mut m = x.clone();
        while !old.contains(&m.key()) {
            for d in &cur {
                let s = jac.add(d, &m);
                elems.entry(s.key()).or_insert(s);
            }
            m = jac.add(&m, &x);
        }
    }
    // invariants from the sizes of the ℓ^i-torsion layers
    let orders: Vec<(u32, &Div)> = elems.values().map(|d| (ell_order(jac, d, ell), d)).collect();
    let maxe = orders.iter().map(|o| o.0).max().unwrap_or(0);
    let layer = |i: u32| orders.iter().filter(|o| o.0 <= i).count() as u64;
    // r_i = number of invariants ≥ i = log_ℓ(|G[ℓ^i]| / |G[ℓ^{i−1}]|)
    let mut exps = Vec::new();
    let mut ge: Vec<u32> = vec![0; maxe as usize + 2];
    for i in 1..=maxe {
        let ratio = layer(i) / layer(i - 1);
        ge[i as usize] = ratio.ilog(ell);
    }
    for i in (1..=maxe).rev() {
        let cnt = ge[i as usize] - ge.get(i as usize + 1).copied().unwrap_or(0);
        for _ in 0..cnt {
            exps.push(i);
        }
    }
    // greedy basis with trivial intersections
    let mut gens: Vec<Div> = Vec::new();
    let mut spanned: HashMap<Vec<u64>, (Div, Vec<u64>)> = span(jac, &[]);
    for &a in &exps {
        let cand = orders.iter().filter(|o| o.0 == a).map(|o| o.1).find(|d| {
            let low = jac.mul_u(ell.pow(a - 1), d);
            !spanned.contains_key(&low.key())
        });
        let Some(c) = cand else {
            return Err(Error::Inconclusive(format!("no basis element of order {ell}^{a}")));
        };
        gens.push(c.clone());
        let with: Vec<(Div, u64)> = gens.iter().zip(&exps).map(|(g, &x)| (g.clone(), ell.pow(x))).collect();
        spanned = span(jac, &with);
    }
    if spanned.len() as u64 != size {
        return Err(Error::Inconclusive(format!("{ell}-Sylow basis spans {} of {size}", spanned.len())));
    }
    let table = if gens.len() > 1 { Some(spanned.into_iter().map(|(k, (_, c))| (k, c)).collect()) } else { None };
    Ok(SylowBasis { ell, exp: e, gens, exps, table })
}

/// Discrete log of h to base γ of order ℓ^a (Pohlig–Hellman over ℤ/ℓ^a,
/// baby-step giant-step in each ℓ-step).
fn cyclic_dlog(jac: &Jacobian<Fp>, gamma: &Div, a: u32, ell: u64, h: &Div) -> Option<u64> {
    let g0 = jac.mul_u(ell.pow(a - 1), gamma);
    let m = (ell as f64).sqrt().ceil() as u64;
    let mut baby: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut cur = jac.zero();
    for j in 0..m {
        baby.entry(cur.key()).or_insert(j);
        cur = jac.add(&cur, &g0);
    }
    let giant = jac.neg(&jac.mul_u(m, &g0));
    let mut x = 0u64;
    for i in 0..a {
        let rest = jac.sub(h, &jac.mul_u(x, gamma));
        let hi = jac.mul_u(ell.pow(a - 1 - i), &rest);
        let mut c = hi;
        let mut digit = None;
        for s in 0..=m {
            if let Some(&j) = baby.get(&c.key()) {
                digit = Some(s * m + j);
                break;
            }
            c = jac.add(&c, &giant);
        }
        x += digit? * ell.pow(i);
    }
    if jac.mul_u(x, gamma) == *h {
        Some(x)
    } else {
        None
    }
}

fn crt(res: &[(u64, u64)]) -> u64 {
    let mut x: i128 = 0;
    let mut m: i128 = 1;
    for &(r, mi) in res {
        let mi = mi as i128;
        // x + m·k ≡ r mod mi
        let inv = mod_inv(m.rem_euclid(mi), mi);
        let k = ((r as i128 - x).rem_euclid(mi) * inv).rem_euclid(mi);
        x += m * k;
        m *= mi;
    }
    x.rem_euclid(m) as u64
}

fn mod_inv(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

impl AbelianGroupStructure {
    /// Coordinates of (n/ℓ^e)·D in the ℓ-Sylow basis, corrected back to
    /// coordinates of D's ℓ-part; entry j is modulo ℓ^{exps[j]}.
    fn sylow_coords(&self, s: &SylowBasis, d: &Div) -> Result<Vec<u64>> {
        let size = s.ell.pow(s.exp);
        let cof = self.order / size;
        let part = self.jac.mul_u(cof, d);
        let raw: Vec<u64> = match &s.table {
            Some(t) => t
                .get(&part.key())
                .cloned()
                .ok_or_else(|| Error::InvalidInput("element outside the Sylow subgroup".into()))?,
            None => vec![cyclic_dlog(&self.jac, &s.gens[0], s.exps[0], s.ell, &part)
                .ok_or_else(|| Error::InvalidInput("discrete logarithm failed".into()))?],
        };
        Ok(raw
            .iter()
            .zip(&s.exps)
            .map(|(&c, &a)| {
                let m = s.ell.pow(a) as i128;
                let inv = mod_inv((cof as i128).rem_euclid(m), m);
                ((c as i128 * inv).rem_euclid(m)) as u64
            })
            .collect())
    }

    /// Coordinates of D modulo the invariant factors.
    pub fn coordinates(&self, d: &Div) -> Result<Vec<u64>> {
        let r = self.invariants.len();
        let mut parts: Vec<Vec<(u64, u64)>> = vec![Vec::new(); r];
        for s in &self.sylow {
            let c = self.sylow_coords(s, d)?;
            for (j, (&cj, &a)) in c.iter().zip(&s.exps).enumerate() {
                parts[r - 1 - j].push((cj, s.ell.pow(a)));
            }
        }
        Ok(parts.iter().map(|p| crt(p)).collect())
    }

    /// Moduli gcd(n_i, N) of J(𝔽_p)/N·J(𝔽_p) in invariant order.
    pub fn quotient_moduli(&self, n: u64) -> Vec<u64> {
        self.invariants.iter().map(|&ni| ni.gcd(&n)).collect()
    }

    /// Image of D in J(𝔽_p)/N·J(𝔽_p).
    pub fn quotient_coords(&self, d: &Div, n: u64) -> Result<Vec<u64>> {
        let c = self.coordinates(d)?;
        Ok(c.iter().zip(self.quotient_moduli(n)).map(|(&x, m)| x % m).collect())
    }

    /// Smallest n ≥ 0 with target ≡ n·gen in J(𝔽_p)/N, or None.
    pub fn dlog_multiple(&self, target: &Div, gen: &Div, n: u64) -> Result<Option<u64>> {
        let t = self.quotient_coords(target, n)?;
        let g = self.quotient_coords(gen, n)?;
        Ok(dlog_in_quotient(&t, &g, &self.quotient_moduli(n), n))
    }

    /// Exact order of a class.
    pub fn order_of(&self, d: &Div) -> u64 {
        let mut o = self.order;
        for (ell, _) in factor_u64(self.order) {
            while o % ell == 0 && self.jac.mul_u(o / ell, d).is_zero() {
                o /= ell;
            }
        }
        o
    }

    /// Check the generators have exactly their claimed orders.
    pub fn verify(&self) -> bool {
        self.invariants.iter().product::<u64>() == self.order
            && self.generators.iter().zip(&self.invariants).all(|(g, &n)| self.order_of(g) == n)
            && self.invariants.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

/// Smallest n in [0, N) with n·g ≡ t coordinatewise.
pub fn dlog_in_quotient(t: &[u64], g: &[u64], moduli: &[u64], n: u64) -> Option<u64> {
    (0..n).find(|&k| t.iter().zip(g).zip(moduli).all(|((&ti, &gi), &m)| (k as u128 * gi as u128 % m as u128) as u64 == ti % m))
}

/// Order of a coordinate vector in the quotient.
pub fn quotient_order(c: &[u64], moduli: &[u64]) -> u64 {
    c.iter().zip(moduli).fold(1u64, |acc, (&ci, &m)| acc.lcm(&(m / ci.gcd(&m))))
}

/// Invariant factors and certified generators of J(𝔽_p).
pub fn group_structure(rc: &ReducedCurve, order: u64) -> Result<AbelianGroupStructure> {
    let jac = &rc.jac;
    let mut rng = ChaCha8Rng::seed_from_u64(rc.p.wrapping_mul(0x9e37_79b9) ^ rc.g as u64);
    let mut sylow = Vec::new();
    for (ell, e) in factor_u64(order) {
        sylow.push(sylow_basis(jac, order, ell, e, &mut rng)?);
    }
    let r = sylow.iter().map(|s| s.gens.len()).max().unwrap_or(0);
    let mut invariants = vec![1u64; r];
    let mut generators = vec![jac.zero(); r];
    for s in &sylow {
        for (j, (g, &a)) in s.gens.iter().zip(&s.exps).enumerate() {
            invariants[r - 1 - j] *= s.ell.pow(a);
            generators[r - 1 - j] = jac.add(&generators[r - 1 - j], g);
        }
    }
    let gs = AbelianGroupStructure { p: rc.p, order, invariants, generators, sylow, jac: jac.clone() };
    if !gs.verify() {
        return Err(Error::Inconclusive(format!("group structure at p = {} failed verification", rc.p)));
    }
    Ok(gs)
}

/// gcd of #J(𝔽_p) over the good primes of the list; #J(ℚ)_tors divides it.
pub fn torsion_bound(h: &HyperellipticModel, primes: &[u64]) -> Result<u64> {
    let mut tb = 0u64;
    let mut used = 0;
    for &p in primes {
        match l_polynomial(h, p) {
            Ok(l) => {
                tb = tb.gcd(&l.jacobian_order());
                used += 1;
            }
            Err(Error::BadPrime(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    if used == 0 {
        return Err(Error::BadPrime(*primes.first().unwrap_or(&0)));
    }
    Ok(tb)
}

/// The first `count` odd primes of good reduction.
pub fn good_primes(h: &HyperellipticModel, count: usize) -> Vec<u64> {
    (3u64..)
        .filter(|&p| crate::algebra::fp::is_prime(p) && super::good_reduction(h, p))
        .take(count)
        .collect()
}

/// Ok(true) certifies [P1 − P2] has infinite order; Ok(false) means the class
/// is zero; Err(Inconclusive) otherwise.
pub fn certify_infinite_order(h: &HyperellipticModel, p1: &CurvePoint, p2: &CurvePoint, primes: &[u64]) -> Result<bool> {
    if p1 == p2 {
        return Ok(false);
    }
    let om = OddModel::new(h)?;
    let tb = torsion_bound(h, primes)?;
    let mut seen: Option<u64> = None;
    for &p in primes {
        let Ok(rc) = om.reduce(p) else { continue };
        let l = l_polynomial(h, p)?;
        let n = l.jacobian_order();
        let d = rc.jac.sub(&rc.divisor(&rc.reduce_point(p1)?), &rc.divisor(&rc.reduce_point(p2)?));
        let mut o = n;
        for (ell, _) in factor_u64(n) {
            while o % ell == 0 && rc.jac.mul_u(o / ell, &d).is_zero() {
                o /= ell;
            }
        }
        if tb % o != 0 {
            return Ok(true);
        }
        match seen {
            Some(s) if s != o => return Ok(true),
            _ => seen = Some(o),
        }
    }
    Err(Error::Inconclusive(format!("{}: reductions of [P1 − P2] are consistent with torsion", h.label)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Corpus;

    fn structure(id: &str, p: u64) -> AbelianGroupStructure {
        let c = Corpus::default_corpus().unwrap();
        let h = c.curve(id).unwrap().model.clone();
        let rc = OddModel::new(&h).unwrap().reduce(p).unwrap();
        let n = l_polynomial(&h, p).unwrap().jacobian_order();
        group_structure(&rc, n).unwrap()
    }

    #[test]
    fn structures() {
        assert_eq!(structure("C2(16)", 5).invariants, vec![363]);
        assert_eq!(structure("C2(16)", 11).invariants, vec![2, 1056]);
        assert_eq!(structure("C3(16)", 17).invariants, vec![5274]);
        assert_eq!(structure("C3(16)", 3).invariants, vec![54]);
        assert_eq!(structure("C2(20)", 3).invariants, vec![141]);
    }

    #[test]
    fn coordinates_round_trip() {
        let gs = structure("C2(16)", 11);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let d = random_element(&gs.jac, &mut rng).unwrap();
            let c = gs.coordinates(&d).unwrap();
            let mut back = gs.jac.zero();
            for (ci, g) in c.iter().zip(&gs.generators) {
                back = gs.jac.add(&back, &gs.jac.mul_u(*ci, g));
            }
            assert_eq!(back, d);
        }
    }
}

#[cfg(test)]
mod multiset_tests {
    use super::*;
    use crate::curves::Corpus;

    fn multiset(id: &str, p: u64, n: u64) -> (Vec<Option<u64>>, Vec<u64>) {
        let c = Corpus::default_corpus().unwrap();
        let h = c.curve(id).unwrap().model.clone();
        let rc = OddModel::new(&h).unwrap().reduce(p).unwrap();
        let ord = l_polynomial(&h, p).unwrap().jacobian_order();
        let gs = group_structure(&rc, ord).unwrap();
        let base = rc.reduce_point(&CurvePoint::Infinity { sign: 1 }).unwrap();
        let p1 = rc.reduce_point(&"(0,0)".parse().unwrap()).unwrap();
        let x = rc.mu_embed(&p1, &base);
        let mut out: Vec<Option<u64>> = rc.points().iter().map(|q| gs.dlog_multiple(&rc.mu_embed(q, &base), &x, n).unwrap()).collect();
        out.sort();
        (out, gs.invariants.clone())
    }

    fn matches_up_to_sign(got: &[Option<u64>], want: &[u64], n: u64) -> bool {
        let mut g: Vec<u64> = got.iter().flatten().copied().collect();
        let mut neg: Vec<u64> = g.iter().map(|&x| (n - x) % n).collect();
        let mut w: Vec<u64> = want.iter().map(|x| x % n).collect();
        g.sort();
        neg.sort();
        w.sort();
        g == w || neg == w
    }

    #[test]
    fn sieve_multisets() {
        let (m, _) = multiset("C2(16)", 5, 22);
        // J(𝔽₅)/22 ≅ ℤ/11
        assert!(matches_up_to_sign(&m, &[0, 2, 2, 4, 4, 5, 5, 7, 7, 9, 10], 11));
        let (m, _) = multiset("C2(16)", 11, 22);
        assert_eq!(m.iter().filter(|x| x.is_none()).count(), 8);
        assert!(matches_up_to_sign(&m, &[0, 3, 10, 10, 17, 20, 21, 21], 22));
        let (m, _) = multiset("C2(20)", 3, 47);
        assert!(matches_up_to_sign(&m, &[0, 19, 26, 45, 46], 47));
    }
}
