use super::number::PadicNumber;
use super::series::{taylor_shift, Modulus, PadicSeries};
use crate::algebra::rational::rational_sqrt;
use crate::algebra::Rational;
use crate::curves::{CurvePoint, HyperellipticModel};
use crate::jacobian::{reduce_rational, FpPoint};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscKind {
    /// Parameter s = t − t₀.
    Affine,
    /// Parameter s = y.
    Weierstrass,
    /// Even degree: s = 1/t with Y = y/t^{g+1}. Odd degree: s = y/t^{g+1}.
    Infinite,
}

/// The residue disc of a point of C(𝔽_p) on y² = d(t).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueDisc {
    pub center: FpPoint,
    pub kind: DiscKind,
}

impl ResidueDisc {
    pub fn new(center: FpPoint) -> Self {
        let kind = match center {
            FpPoint::Infinity { .. } => DiscKind::Infinite,
            FpPoint::Affine { y: 0, .. } => DiscKind::Weierstrass,
            FpPoint::Affine { .. } => DiscKind::Affine,
        };
        ResidueDisc { center, kind }
    }

    pub fn of_point(h: &HyperellipticModel, p: u64, pt: &CurvePoint) -> Result<Self> {
        Ok(Self::new(reduce_on_model(h, p, pt)?))
    }
}

/// Reduction of a rational point of y² = d(t) modulo p.
pub fn reduce_on_model(h: &HyperellipticModel, p: u64, pt: &CurvePoint) -> Result<FpPoint> {
    let g1 = (h.genus + 1) as i32;
    match pt {
        CurvePoint::Affine { t, y } => match reduce_rational(t, p) {
            Some(tb) => Ok(FpPoint::Affine { t: tb.v, y: reduce_rational(y, p).ok_or(Error::BadPrime(p))?.v }),
            None if h.is_odd() => Ok(FpPoint::Infinity { w: 0 }),
            None => {
                let w = y / t.pow(g1);
                Ok(FpPoint::Infinity { w: reduce_rational(&w, p).ok_or(Error::BadPrime(p))?.v })
            }
        },
        CurvePoint::Infinity { .. } if h.is_odd() => Ok(FpPoint::Infinity { w: 0 }),
        CurvePoint::Infinity { sign } => {
            let r = rational_sqrt(h.d.lc()).ok_or_else(|| Error::InvalidInput("points at infinity are not rational".into()))?;
            let w = r * Rational::from_integer((*sign as i64).into());
            Ok(FpPoint::Infinity { w: reduce_rational(&w, p).ok_or(Error::BadPrime(p))?.v })
        }
    }
}

/// Local coordinates in a residue disc and the expansions of ω_i = t^i dt/y.
#[derive(Clone, Debug)]
pub struct LocalChart {
    pub disc: ResidueDisc,
    pub md: Modulus,
    pub genus: usize,
    pub odd: bool,
    /// t(s) for finite discs; for infinite discs the chart coordinate 1/t.
    pub x: PadicSeries,
    /// y(s) for finite discs; for infinite discs y/t^{g+1}.
    pub y: PadicSeries,
    /// ω_i = omega[i](s) ds.
    pub omega: Vec<PadicSeries>,
    /// Lift of the center's t-coordinate for affine discs.
    t0: u128,
}

fn model_mod(h: &HyperellipticModel, md: &Modulus) -> Result<Vec<u128>> {
    h.d.coeffs().iter().map(|c| md.from_rational(c).ok_or(Error::BadPrime(md.p))).collect()
}

/// Expansions in the disc parameter to O(s^order), coefficients mod p^k.
pub fn local_expansion(h: &HyperellipticModel, disc: &ResidueDisc, p: u64, k: u32, order: usize) -> Result<LocalChart> {
    let md = Modulus::new(p, k)?;
    let dm = model_mod(h, &md)?;
    let g = h.genus;
    let n = order + 2;
    let sig = PadicSeries::var(md, n);
    let (x, y, omega, t0) = match (disc.kind, disc.center) {
        (DiscKind::Affine, FpPoint::Affine { t, y: yb }) => {
            let t0 = t as u128;
            let shifted = taylor_shift(&md, &dm, t0);
            let y0 = md.sqrt_lift(shifted[0], yb)?;
            let y = PadicSeries::from_coeffs(md, shifted, n).sqrt_with(y0)?;
            let x = sig.add(&PadicSeries::constant(md, t0, n));
            let yi = y.inv()?;
            let omega: Vec<PadicSeries> = (0..g).map(|i| x.pow(i).mul(&yi)).collect();
            (x, y, omega, t0)
        }
        (DiscKind::Weierstrass, FpPoint::Affine { t, .. }) => {
            let e = md.root_lift(&dm, t)?;
            let c = taylor_shift(&md, &dm, e);
            let c1inv = md.inv(c[1]).ok_or_else(|| Error::InvalidInput("Weierstrass root is not simple".into()))?;
            let s2 = sig.mul(&sig);
            let mut tau = s2.scale(c1inv);
            // d(e + τ) = y² with y = s; τ = (s² − Σ_{j≥2} c_j τ^j)/c₁
            for _ in 0..n {
                let mut higher = c.clone();
                higher[0] = 0;
                higher[1] = 0;
                let rest = tau.compose_poly(&higher);
                tau = s2.sub(&rest).scale(c1inv);
            }
            let x = tau.add(&PadicSeries::constant(md, e, n));
            let dt_over_s = tau.derivative().shift_down(1)?;
            let omega = (0..g).map(|i| x.pow(i).mul(&dt_over_s)).collect();
            (x, sig.clone(), omega, e)
        }
        (DiscKind::Infinite, FpPoint::Infinity { w }) if !h.is_odd() => {
            let rev: Vec<u128> = dm.iter().rev().copied().collect();
            let y0 = md.sqrt_lift(rev[0], w)?;
            let yy = PadicSeries::from_coeffs(md, rev, n).sqrt_with(y0)?;
            let yi = yy.inv()?;
            let omega = (0..g).map(|i| sig.pow(g - 1 - i).mul(&yi).scale(md.neg(1))).collect();
            (sig.clone(), yy, omega, 0)
        }
        (DiscKind::Infinite, FpPoint::Infinity { .. }) => {
            // X = 1/t, Y = y/t^{g+1}: Y² = X·F(X), F = reversed d; parameter Y
            let rev: Vec<u128> = dm.iter().rev().copied().collect();
            let s2 = sig.mul(&sig);
            let mut xx = s2.scale(md.inv(rev[0]).ok_or(Error::BadPrime(p))?);
            for _ in 0..n {
                xx = s2.mul(&xx.compose_poly(&rev).inv()?);
            }
            let dx_over_s = xx.derivative().shift_down(1)?;
            let omega = (0..g).map(|i| xx.pow(g - 1 - i).mul(&dx_over_s).scale(md.neg(1))).collect();
            (xx, sig.clone(), omega, 0)
        }
        _ => return Err(Error::InvalidInput("disc kind does not match its center".into())),
    };
    let trunc = |s: &PadicSeries| s.truncate(order);
    Ok(LocalChart {
        disc: *disc,
        md,
        genus: g,
        odd: h.is_odd(),
        x: trunc(&x),
        y: trunc(&y),
        omega: omega.iter().map(trunc).collect(),
        t0,
    })
}

impl LocalChart {
    pub fn order(&self) -> usize {
        self.x.order()
    }

    /// Parameter value of a rational point in this disc.
    pub fn parameter(&self, h: &HyperellipticModel, pt: &CurvePoint) -> Result<PadicNumber> {
        let p = self.md.p;
        if ResidueDisc::of_point(h, p, pt)? != self.disc {
            return Err(Error::InvalidInput(format!("{pt} is not in the disc of {}", self.disc.center)));
        }
        let prec = self.md.k as i64 + 64;
        let g1 = (self.genus + 1) as i32;
        let q = match (self.disc.kind, pt) {
            (DiscKind::Affine, CurvePoint::Affine { t, .. }) => t - Rational::from_integer(BigInt::from(self.t0)),
            (DiscKind::Weierstrass, CurvePoint::Affine { y, .. }) => y.clone(),
            (DiscKind::Infinite, CurvePoint::Infinity { .. }) => Rational::zero(),
            (DiscKind::Infinite, CurvePoint::Affine { t, y }) => {
                if self.odd {
                    y / t.pow(g1)
                } else {
                    t.recip()
                }
            }
            _ => return Err(Error::InvalidInput("point does not match the disc".into())),
        };
        Ok(PadicNumber::from_rational(&q, p, prec))
    }

    /// Σ a_i ω_i as a series in s.
    pub fn differential(&self, a: &[u128]) -> PadicSeries {
        let mut acc = PadicSeries::constant(self.md, 0, self.order());
        for (ai, w) in a.iter().zip(&self.omega) {
            acc = acc.add(&w.scale(*ai % self.md.m));
        }
        acc
    }

    /// Λ(s) = ∫₀^s b(σ) dσ for the expansion b of a differential, with the
    /// truncation error folded into the reported precision.
    pub fn antiderivative_at(&self, b: &PadicSeries, s: &PadicNumber) -> Result<PadicNumber> {
        let p = self.md.p;
        let big = self.md.k as i64 + 64;
        if s.is_zero() && s.precision() >= big {
            return Ok(PadicNumber::zero(p, big));
        }
        let vs = s.valuation_lower_bound();
        if vs < 1 {
            return Err(Error::InvalidInput("parameter outside the disc".into()));
        }
        let mut acc = PadicNumber::zero(p, big);
        let mut spow = s.clone();
        for n in 0..b.order() {
            let term = b.coefficient(n).mul(&spow).div_int(&BigInt::from(n + 1));
            acc = acc.add(&term);
            spow = spow.mul(s);
        }
        // terms n ≥ order: valuation ≥ (n+1)·v(s) − log_p(n+1), increasing in n
        let m = b.order() as u64 + 1;
        let tail = m as i64 * vs - m.ilog(p) as i64;
        Ok(acc.with_precision(tail))
    }
}

/// Number of series terms so that (n+1)·v − log_p(n+1) ≥ target for n ≥ order (v = 1).
pub fn terms_for(p: u64, target: i64) -> usize {
    let mut n = 1u64;
    while (n as i64 + 1) - ((n + 1).ilog(p) as i64) < target {
        n += 1;
    }
    n as usize
}

/// ∫_P^Q t^i dt/y for P, Q in one residue disc.
pub fn tiny_integral(h: &HyperellipticModel, i: usize, pt_p: &CurvePoint, pt_q: &CurvePoint, p: u64, k: u32) -> Result<PadicNumber> {
    let dp = ResidueDisc::of_point(h, p, pt_p)?;
    let dq = ResidueDisc::of_point(h, p, pt_q)?;
    if dp != dq {
        return Err(Error::InvalidInput(format!("{pt_p} and {pt_q} lie in different residue discs")));
    }
    if i >= h.genus {
        return Err(Error::InvalidInput(format!("ω_{i} is not in the basis")));
    }
    let extra = (k as u64 + 8).ilog(p) + 2;
    let order = terms_for(p, k as i64 + extra as i64);
    let chart = local_expansion(h, &dp, p, k + extra, order)?;
    let b = &chart.omega[i];
    let lq = chart.antiderivative_at(b, &chart.parameter(h, pt_q)?)?;
    let lp = chart.antiderivative_at(b, &chart.parameter(h, pt_p)?)?;
    Ok(lq.sub(&lp))
}

/// The reduction of Σ a_i ω_i has no zero at the disc center.
pub fn nonvanishing_at(h: &HyperellipticModel, a: &[BigInt], disc: &ResidueDisc, p: u64) -> Result<bool> {
    let chart = local_expansion(h, disc, p, 1, 1)?;
    let am: Vec<u128> = a.iter().map(|x| chart.md.from_bigint(x)).collect();
    Ok(chart.differential(&am).coeff(0) != 0)
}

/// Strassmann: the number of zeros in ℤ_p of Σ c_n z^n is at most the largest
/// index of minimal valuation. `tail_lower_bound` bounds the valuations of
/// all coefficients beyond the list.
pub fn strassmann_bound(coeffs: &[PadicNumber], tail_lower_bound: i64) -> Result<usize> {
    let known: Vec<(usize, i64)> = coeffs.iter().enumerate().filter_map(|(n, c)| c.valuation().map(|v| (n, v))).collect();
    let Some(min) = known.iter().map(|x| x.1).min() else {
        return Err(Error::InsufficientPrecision("every coefficient is zero to working precision".into()));
    };
    let nstar = known.iter().filter(|x| x.1 == min).map(|x| x.0).max().unwrap();
    for (n, c) in coeffs.iter().enumerate() {
        if n > nstar && c.is_zero() && c.valuation_lower_bound() <= min {
            return Err(Error::InsufficientPrecision(format!("coefficient {n} is not resolved")));
        }
    }
    if tail_lower_bound <= min {
        return Err(Error::InsufficientPrecision("series tail is not resolved".into()));
    }
    Ok(nstar)
}

/// Upper bound for the rational points in a disc on which ∫ Σ a_i ω_i
/// vanishes, where a is known modulo p^k.
pub fn disc_point_bound(h: &HyperellipticModel, a: &[BigInt], disc: &ResidueDisc, p: u64, k: u32) -> Result<usize> {
    let order = terms_for(p, k as i64 + 1) + 1;
    let chart = local_expansion(h, disc, p, k, order)?;
    let am: Vec<u128> = a.iter().map(|x| chart.md.from_bigint(x)).collect();
    let b = chart.differential(&am);
    // λ(p·z) = const + Σ_{n≥1} b_{n−1} p^n z^n / n; the constant is left out
    let mut coeffs = vec![PadicNumber::zero(p, i64::MAX / 4)];
    for n in 1..=order {
        let c = b.coefficient(n - 1).mul_int(&BigInt::from(p).pow(n as u32)).div_int(&BigInt::from(n));
        coeffs.push(c);
    }
    let m = order as u64 + 1;
    let tail = m as i64 - m.ilog(p) as i64;
    strassmann_bound(&coeffs, tail)
}

/// Rational points in a disc whose annihilating integral has at most n zeros.
/// In a Weierstrass disc the integral from the Weierstrass point W is odd in y,
/// so two conjugate rational points force a zero at W as well; when W is not
/// rational, at most n − 1 zeros are rational and they come in conjugate pairs.
pub fn rational_disc_bound(h: &HyperellipticModel, disc: &ResidueDisc, p: u64, n: usize) -> usize {
    let FpPoint::Affine { t: tc, .. } = disc.center else { return n };
    if disc.kind != DiscKind::Weierstrass || n == 0 {
        return n;
    }
    let rational_w = h.rational_weierstrass().iter().any(|r| reduce_rational(r, p).map(|x| x.v) == Some(tc));
    if rational_w {
        return n;
    }
    let m = n - 1;
    m - m % 2
}

/// Valuation of a rational number (None for zero).
pub fn rational_valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let v = |n: &BigInt| super::number::vp_int(&n.abs(), p);
    Some(v(q.numer()) - v(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::curves::Corpus;

    fn c216() -> HyperellipticModel {
        Corpus::default_corpus().unwrap().curve("C2(16)").unwrap().model.clone()
    }

    #[test]
    fn expansions_satisfy_the_curve() {
        let h = c216();
        let p = 5;
        let md = Modulus::new(p, 6).unwrap();
        let dm = model_mod(&h, &md).unwrap();
        for center in [FpPoint::Affine { t: 1, y: 0 }, FpPoint::Infinity { w: 1 }] {
            let disc = ResidueDisc::new(center);
            if let Ok(ch) = local_expansion(&h, &disc, p, 6, 12) {
                let lhs = ch.y.mul(&ch.y);
                let rhs = match disc.kind {
                    DiscKind::Infinite => ch.x.compose_poly(&dm.iter().rev().copied().collect::<Vec<_>>()),
                    _ => ch.x.compose_poly(&dm),
                };
                assert_eq!(lhs, rhs, "{center}");
                if disc.kind == DiscKind::Infinite {
                    assert_eq!(ch.y.coeff(0), 1);
                }
            }
        }
    }

    #[test]
    fn strassmann_on_a_quadratic() {
        let p = 5;
        let c = vec![PadicNumber::zero(p, 10), PadicNumber::from_rational(&rat(-5, 1), p, 10), PadicNumber::from_rational(&rat(1, 1), p, 10)];
        assert_eq!(strassmann_bound(&c, 100).unwrap(), 2);
    }

    #[test]
    fn tiny_integrals_are_antisymmetric() {
        let h = c216();
        let a: CurvePoint = "(0,0)".parse().unwrap();
        let b = CurvePoint::Affine { t: rat(5, 1), y: Rational::zero() };
        let _ = b;
        let z = tiny_integral(&h, 0, &a, &a, 5, 5).unwrap();
        assert!(z.is_zero());
    }
}
