use super::local::{local_expansion, ResidueDisc};
use super::number::{vp_u64, PadicNumber};
use super::series::{taylor_shift, Modulus, PadicSeries};
use crate::algebra::fp::factor_u64;
use crate::algebra::linalg::nullspace_mod_p;
use crate::algebra::{Rational, Ring};
use crate::curves::{CurvePoint, HyperellipticModel};
use crate::jacobian::{l_polynomial, reduce_rational, Chart, FpPoint, OddModel, OddPoint, ReducedCurve};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

const EXACT: i64 = 1 << 40;

/// Order of [Q̄ − ∞̄] in J(𝔽_p).
fn class_order(rc: &ReducedCurve, q: &FpPoint, group_order: u64) -> u64 {
    let d = rc.divisor(q);
    let mut o = group_order;
    for (ell, _) in factor_u64(group_order) {
        while o % ell == 0 && rc.jac.mul_u(o / ell, &d).is_zero() {
            o /= ell;
        }
    }
    o
}

/// Integrals ∫_{∞′}^{Q} s^j ds/w, j < g, on the odd model w² = f(s), for an
/// affine point Q whose reduction is affine with w̄ ≠ 0.
///
/// With m the order of [Q̄ − ∞̄], a function F = a(σ) − b(σ)·w (σ = s − s₀)
/// whose reduction has divisor m·Q̄ − m·∞̄ has m zeros R_k in the disc of Q,
/// and m·[Q − ∞′] = Σ [Q − R_k]. The σ(R_k) are the roots of the norm
/// N = a² − b²·f(s₀ + σ), so the tiny integrals only need the power sums of
/// the roots of N.
fn norm_trick(f: &[Rational], g: usize, rc: &ReducedCurve, group_order: u64, s0: &Rational, w0: &Rational, target: i64) -> Result<Vec<PadicNumber>> {
    let p = rc.p;
    let sb = reduce_rational(s0, p).ok_or(Error::BadPrime(p))?;
    let wb = reduce_rational(w0, p).ok_or(Error::BadPrime(p))?;
    let q = rc_odd_point(rc, sb.v, wb.v);
    let m = class_order(rc, &q, group_order) as usize;

    // the function over 𝔽_p
    let md1 = Modulus::new(p, 1)?;
    let fbar: Vec<u128> = f.iter().map(|c| md1.from_rational(c).unwrap()).collect();
    let wser = PadicSeries::from_coeffs(md1, taylor_shift(&md1, &fbar, sb.v as u128), m).sqrt_with(wb.v as u128)?;
    let da = m / 2;
    let db: i64 = (m as i64 - 2 * g as i64 - 1).div_euclid(2);
    let nb = if db >= 0 { db as usize + 1 } else { 0 };
    let ncol = da + 1 + nb;
    let rows: Vec<Vec<u64>> = (0..m)
        .map(|k| {
            let mut row = vec![0u64; ncol];
            if k <= da {
                row[k] = 1;
            }
            for j in 0..nb.min(k + 1) {
                row[da + 1 + j] = (p - (wser.coeff(k - j) as u64 % p)) % p;
            }
            row
        })
        .collect();
    let ns = nullspace_mod_p(&rows, p);
    let v = ns.first().ok_or_else(|| Error::Inconclusive("no function with the required divisor".into()))?;
    let a: Vec<u128> = v[..=da].iter().map(|&x| x as u128).collect();
    let b: Vec<u128> = v[da + 1..].iter().map(|&x| x as u128).collect();
    if a[0] == 0 {
        return Err(Error::Inconclusive("degenerate norm function".into()));
    }

    let mut k_work = target as u32 + 4;
    loop {
        let md = Modulus::new(p, k_work)?;
        let fk: Vec<u128> = f.iter().map(|c| md.from_rational(c).ok_or(Error::BadPrime(p))).collect::<Result<_>>()?;
        let s0k = md.from_rational(s0).ok_or(Error::BadPrime(p))?;
        let w0k = md.from_rational(w0).ok_or(Error::BadPrime(p))?;
        let fs = taylor_shift(&md, &fk, s0k);
        let deg = (2 * da + 1).max(2 * nb + fs.len()) + 1;
        let pa = PadicSeries::from_coeffs(md, a.clone(), deg);
        let pb = PadicSeries::from_coeffs(md, b.clone(), deg);
        let pf = PadicSeries::from_coeffs(md, fs.clone(), deg);
        let norm = pa.mul(&pa).sub(&pb.mul(&pb).mul(&pf));
        let top = norm.coeff(m);
        if top % p as u128 == 0 || (m + 1..deg).any(|j| norm.coeff(j) != 0) || (0..m).any(|j| norm.coeff(j) % p as u128 != 0) {
            return Err(Error::Inconclusive("norm does not have the expected Newton polygon".into()));
        }
        // λ = min v(N_j)/(m − j), a lower bound for the valuations of the roots
        let (mut ln, mut ld) = (k_work as u64, 1u64);
        for j in 0..m {
            let v = md.valuation(norm.coeff(j)) as u64;
            if v * ld < ln * (m - j) as u64 {
                ln = v;
                ld = (m - j) as u64;
            }
        }
        let lam = ln as f64 / ld as f64;
        // tail: terms n > L have valuation ≥ nλ − log_p n, increasing once n > 1/(λ ln p)
        let tail_target = target + vp_u64(m as u64, p) as i64 + 1;
        let logp = (p as f64).ln();
        let mut l = (1.0 / (lam * logp)).ceil() as usize + 1;
        while ((l + 1) as f64) * lam - ((l + 1) as f64).ln() / logp < tail_target as f64 {
            l += 1;
        }
        let lost = (l as u64).ilog(p) as i64;
        if (k_work as i64) < tail_target + lost + 1 {
            k_work = (tail_target + lost + 1) as u32;
            continue;
        }
        let inv_top = md.inv(top).unwrap();
        let c: Vec<u128> = (0..=m).map(|j| md.mul(norm.coeff(j), inv_top)).collect();
        // Newton power sums of the roots of the monic norm
        let mut ps = vec![0u128; l + 1];
        for n in 1..=l {
            let mut s = 0u128;
            for j in 1..=(n - 1).min(m) {
                s = md.add(s, md.mul(c[m - j], ps[n - j]));
            }
            if n <= m {
                s = md.add(s, md.mul(n as u128, c[m - n]));
            }
            ps[n] = md.neg(s);
        }
        let wq = PadicSeries::from_coeffs(md, fs.clone(), l).sqrt_with(w0k)?;
        let winv = wq.inv()?;
        let s_plus = PadicSeries::from_coeffs(md, vec![s0k, 1], l);
        let mut out = Vec::with_capacity(g);
        let mut sj = PadicSeries::constant(md, 1, l);
        for _ in 0..g {
            let ser = sj.mul(&winv);
            let mut acc = PadicNumber::zero(p, EXACT);
            for n in 1..=l {
                let t = md.mul(ser.coeff(n - 1), ps[n]);
                acc = acc.add(&md.to_padic(t).div_int(&BigInt::from(n)));
            }
            let acc = acc.with_precision(tail_target);
            out.push(acc.neg().div_int(&BigInt::from(m)));
            sj = sj.mul(&s_plus);
        }
        return Ok(out);
    }
}

fn rc_odd_point(rc: &ReducedCurve, s: u64, w: u64) -> FpPoint {
    // an FpPoint whose odd-model image is (s, w)
    match rc.r {
        None => FpPoint::Affine { t: s, y: w },
        Some(r) => {
            if s == 0 {
                FpPoint::Infinity { w }
            } else {
                let p = rc.p;
                let sinv = crate::algebra::Field::inv(&crate::algebra::Fp::from_u64(s, p)).unwrap();
                let t = r.plus(&sinv);
                let y = crate::algebra::Fp::from_u64(w, p).times(&sinv.pow_u(rc.g as u64 + 1));
                FpPoint::Affine { t: t.v, y: y.v }
            }
        }
    }
}

/// ∫_{∞′}^{Q} of the odd-model basis for a rational point of the odd model.
fn integrals_from_infinity(om: &OddModel, hf: &HyperellipticModel, rc: &ReducedCurve, group_order: u64, q: &OddPoint<Rational>, target: i64) -> Result<Vec<PadicNumber>> {
    let g = om.g;
    let p = rc.p;
    let zeros = || vec![PadicNumber::zero(p, EXACT); g];
    let (s, w) = match q {
        OddPoint::Inf => return Ok(zeros()),
        OddPoint::Aff(s, w) => (s, w),
    };
    // Weierstrass points are 2-torsion: all integrals vanish
    if Zero::is_zero(w) {
        return Ok(zeros());
    }
    let pt = CurvePoint::Affine { t: s.clone(), y: w.clone() };
    let disc = ResidueDisc::of_point(hf, p, &pt)?;
    let k = target as u32 + 3;
    match disc.center {
        FpPoint::Infinity { .. } | FpPoint::Affine { y: 0, .. } => {
            // tiny integral from ∞′ or from the Weierstrass point of the disc (parameter 0)
            let order = super::local::terms_for(p, k as i64 + 1);
            let chart = local_expansion(hf, &disc, p, k, order)?;
            let sp = chart.parameter(hf, &pt)?;
            (0..g).map(|j| chart.antiderivative_at(&chart.omega[j], &sp)).collect()
        }
        FpPoint::Affine { .. } => norm_trick(om.f.coeffs(), g, rc, group_order, s, w, target),
    }
}

/// I_i = ∫_{P2}^{P1} t^i dt/y, i < g, by Coleman integration through the
/// odd model.
pub fn integrate_between(h: &HyperellipticModel, p1: &CurvePoint, p2: &CurvePoint, p: u64, k: u32) -> Result<Vec<PadicNumber>> {
    let om = OddModel::new(h)?;
    let rc = om.reduce(p)?;
    let hf = HyperellipticModel::new(&format!("{} (odd model)", h.label), om.f.clone())?;
    let n = l_polynomial(h, p)?.jacobian_order();
    let target = k as i64 + 3;
    let a = integrals_from_infinity(&om, &hf, &rc, n, &om.map_point(p1)?, target)?;
    let b = integrals_from_infinity(&om, &hf, &rc, n, &om.map_point(p2)?, target)?;
    let jodd: Vec<PadicNumber> = a.iter().zip(&b).map(|(x, y)| x.sub(y)).collect();
    let g = om.g;
    match &om.chart {
        Chart::Identity => Ok(jodd),
        Chart::Shift(r) => {
            // t^i dt/y = −Σ_k C(i,k) r^{i−k} s^{g−1−k} ds/w
            let mut out = Vec::with_capacity(g);
            for i in 0..g {
                let mut acc = PadicNumber::zero(p, EXACT);
                for kk in 0..=i {
                    let coef = Rational::from_integer(binom(i, kk)) * r.pow((i - kk) as i32);
                    let term = if Zero::is_zero(&coef) { continue } else { jodd[g - 1 - kk].mul_int(coef.numer()).div_int(coef.denom()) };
                    acc = acc.add(&term);
                }
                out.push(acc.neg());
            }
            Ok(out)
        }
    }
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Σ a_i I_i.
pub fn combine(a: &[BigInt], integrals: &[PadicNumber]) -> PadicNumber {
    let p = integrals[0].p();
    let mut acc = PadicNumber::zero(p, EXACT);
    for (ai, ii) in a.iter().zip(integrals) {
        acc = acc.add(&ii.mul_int(ai));
    }
    acc
}

/// Basis modulo p^k of the coefficient vectors a with Σ a_i I_i = 0, where I
/// are the integrals of a generator of J(ℚ) ⊗ ℚ. For rank 0 every vector
/// annihilates.
pub fn annihilator_space(integrals: &[PadicNumber], g: usize, rank: usize, k: u32) -> Result<Vec<Vec<BigInt>>> {
    if integrals.len() != g {
        return Err(Error::InvalidInput(format!("expected {g} integrals")));
    }
    if rank == 0 {
        return Ok((0..g).map(|i| (0..g).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect());
    }
    if rank != 1 || g < 2 {
        return Err(Error::InvalidInput(format!("rank {rank} with genus {g} is not a Chabauty setting")));
    }
    let p = integrals[0].p();
    let (jstar, _) = integrals
        .iter()
        .enumerate()
        .filter_map(|(i, x)| x.valuation().map(|v| (i, v)))
        .min_by_key(|x| (x.1, x.0))
        .ok_or_else(|| Error::InsufficientPrecision("all integrals vanish to working precision".into()))?;
    let modk = BigInt::from(p).pow(k);
    let mut out = Vec::new();
    for i in (0..g).filter(|&i| i != jstar) {
        let q = integrals[i].div(&integrals[jstar])?;
        let r = q.residue(k as i64).ok_or_else(|| Error::InsufficientPrecision(format!("I_{i}/I_{jstar} not known mod p^{k}")))?;
        let mut v = vec![BigInt::zero(); g];
        v[i] = BigInt::one();
        v[jstar] = (-r).mod_floor(&modk);
        out.push(v);
    }
    Ok(out)
}

/// a lies in the annihilator span mod p^k: (Σ a_i I_i)/I_{j*} ≡ 0 mod p^k.
pub fn in_annihilator_span(a: &[BigInt], integrals: &[PadicNumber], k: u32) -> Result<bool> {
    let vstar = integrals
        .iter()
        .filter_map(|x| x.valuation())
        .min()
        .ok_or_else(|| Error::InsufficientPrecision("all integrals vanish to working precision".into()))?;
    let s = combine(a, integrals);
    let need = k as i64 + vstar;
    if s.precision() < need {
        return Err(Error::InsufficientPrecision(format!("combination known only to p^{}", s.precision())));
    }
    Ok(s.certified_divisible(need))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Corpus;

    fn ints(id: &str, p: u64) -> Vec<PadicNumber> {
        let c = Corpus::default_corpus().unwrap();
        let h = c.curve(id).unwrap().model.clone();
        integrate_between(&h, &"(0,0)".parse().unwrap(), &CurvePoint::Infinity { sign: 1 }, p, 5).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn chabauty_congruences() {
        let i = ints("C2(16)", 5);
        assert!(combine(&big(&[2983, 0, 1]), &i).certified_divisible(5), "{:?}", i);
        assert!(in_annihilator_span(&big(&[2983, 0, 1]), &i, 5).unwrap());
        let i = ints("C3(16)", 3);
        assert!(combine(&big(&[118, 0, 1]), &i).certified_divisible(5), "{:?}", i);
        let i = ints("C2(20)", 3);
        assert!(combine(&big(&[1, 4, 0, 1]), &i).certified_divisible(5), "{:?}", i);
        assert!(in_annihilator_span(&big(&[1, 4, 0, 1]), &i, 5).unwrap());
    }
}
