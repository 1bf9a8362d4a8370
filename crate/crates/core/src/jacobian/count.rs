use super::reduce_rational;
use crate::algebra::fp::{is_prime, powmod};
use crate::algebra::{FiniteField, Fp, UniPoly};
use crate::curves::HyperellipticModel;
use crate::{Error, Result};
use rayon::prelude::*;

const ENUMERATION_BUDGET: u128 = 100_000_000;

/// p odd, p ∤ lc(d), d squarefree mod p.
pub fn good_reduction(h: &HyperellipticModel, p: u64) -> bool {
    reduce_model(h, p).is_ok()
}

fn reduce_model(h: &HyperellipticModel, p: u64) -> Result<Vec<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let c: Option<Vec<u64>> = h.d.coeffs().iter().map(|a| reduce_rational(a, p).map(|x| x.v)).collect();
    let c = c.ok_or(Error::BadPrime(p))?;
    if *c.last().unwrap() == 0 {
        return Err(Error::BadPrime(p));
    }
    let dp = UniPoly::new(c.iter().map(|&v| Fp::from_u64(v, p)).collect(), Fp::zero(p));
    if dp.gcd(&dp.derivative()).degree() != Some(0) {
        return Err(Error::BadPrime(p));
    }
    Ok(c)
}

/// #C(𝔽_{p^k}) on the smooth model, points at infinity included.
pub fn count_points(h: &HyperellipticModel, p: u64, k: usize) -> Result<u64> {
    let c = reduce_model(h, p)?;
    let q = (p as u128).pow(k as u32);
    if q > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded(format!("{p}^{k} exceeds the enumeration budget")));
    }
    let lc = *c.last().unwrap();
    let infinity = if h.is_odd() {
        1
    } else if k % 2 == 0 || powmod(lc, (p - 1) / 2, p) == 1 {
        2
    } else {
        0
    };
    let affine = if k == 1 { count_prime_field(&c, p) } else { count_extension(&c, p, k)? };
    Ok(affine + infinity)
}

fn count_prime_field(c: &[u64], p: u64) -> u64 {
    let chi = |v: u64| -> i64 {
        if v == 0 {
            0
        } else if powmod(v, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    };
    let s: i64 = (0..p)
        .into_par_iter()
        .map(|t| {
            let mut acc = 0u64;
            for &ci in c.iter().rev() {
                acc = ((acc as u128 * t as u128 + ci as u128) % p as u128) as u64;
            }
            chi(acc)
        })
        .sum();
    (p as i64 + s) as u64
}

fn count_extension(c: &[u64], p: u64, k: usize) -> Result<u64> {
    let field = FiniteField::get(p, k)?;
    let q = field.order() as u64;
    // square table, as a bitset indexed by element index
    let mut squares = vec![0u64; (q as usize).div_ceil(64)];
    let mut sq = vec![0u64; k];
    for idx in 0..q {
        let e = field.element(idx as u128);
        field.mul_raw(&e.c, &e.c, &mut sq);
        let j = field.index_of(&sq) as usize;
        squares[j / 64] |= 1 << (j % 64);
    }
    let s: i64 = (0..q)
        .into_par_iter()
        .map_init(
            || (vec![0u64; k], vec![0u64; k]),
            |(acc, tmp), idx| {
                let x = field.element(idx as u128);
                acc.iter_mut().for_each(|a| *a = 0);
                for &ci in c.iter().rev() {
                    field.mul_raw(acc, &x.c, tmp);
                    tmp[0] = (tmp[0] + ci) % p;
                    acc.copy_from_slice(tmp);
                }
                let j = field.index_of(acc) as usize;
                if j == 0 {
                    0
                } else if squares[j / 64] >> (j % 64) & 1 == 1 {
                    1
                } else {
                    -1
                }
            },
        )
        .sum();
    Ok((q as i64 + s) as u64)
}

/// L(T) = Σ a_i T^i, the numerator of the zeta function of C/𝔽_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub p: u64,
    pub g: usize,
    pub a: Vec<i64>,
}

impl LPolynomial {
    pub fn eval(&self, t: i64) -> i128 {
        self.a.iter().rev().fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    }

    /// #J(𝔽_p) = L(1).
    pub fn jacobian_order(&self) -> u64 {
        self.eval(1) as u64
    }

    pub fn functional_equation_holds(&self) -> bool {
        let g = self.g;
        self.a.len() == 2 * g + 1
            && self.a[0] == 1
            && (0..=g).all(|i| self.a[2 * g - i] as i128 == (self.p as i128).pow((g - i) as u32) * self.a[i] as i128)
    }

    /// Power sums Σ α_i^k of the reciprocal roots, k = 1..=n.
    pub fn power_sums(&self, n: usize) -> Vec<i128> {
        let a = |i: usize| -> i128 { self.a.get(i).copied().unwrap_or(0) as i128 };
        let mut s: Vec<i128> = vec![0; n + 1];
        for k in 1..=n {
            let mut v = -(k as i128) * a(k);
            for i in 1..k {
                v -= a(i) * s[k - i];
            }
            s[k] = v;
        }
        s
    }

    /// #C(𝔽_{p^k}) predicted by L.
    pub fn predicted_count(&self, k: usize) -> i128 {
        (self.p as i128).pow(k as u32) + 1 - self.power_sums(k)[k]
    }

    /// Absolute values of the reciprocal roots (floating point, diagnostics only).
    pub fn reciprocal_root_moduli(&self) -> Vec<f64> {
        let n = 2 * self.g;
        // monic T^{2g}·L(1/T) = Σ a_i T^{2g−i}
        let coef: Vec<f64> = (0..=n).map(|i| self.a[n - i] as f64).collect();
        durand_kerner(&coef).into_iter().map(|(re, im)| (re * re + im * im).sqrt()).collect()
    }
}

/// Roots of a monic real polynomial (coefficients low to high).
fn durand_kerner(c: &[f64]) -> Vec<(f64, f64)> {
    let n = c.len() - 1;
    let scale = c.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let ang = 0.4 + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let r = scale.powf(1.0 / n as f64);
            (r * ang.cos(), r * ang.sin())
        })
        .collect();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut num = (0.0, 0.0);
            for &ck in c.iter().rev() {
                num = mul(num, z[i]);
                num.0 += ck;
            }
            let mut den = (1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den = mul(den, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = div(num, den);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-14 * scale {
            break;
        }
    }
    z
}

/// L-polynomial from #C(𝔽_{p^k}), k = 1..g, and the functional equation.
pub fn l_polynomial(h: &HyperellipticModel, p: u64) -> Result<LPolynomial> {
    let g = h.genus;
    if g > 4 {
        return Err(Error::InvalidInput(format!("genus {g} is above the supported range")));
    }
    let mut s = vec![0i128; g + 1];
    for k in 1..=g {
        let n = count_points(h, p, k)? as i128;
        s[k] = (p as i128).pow(k as u32) + 1 - n;
    }
    let mut a = vec![0i128; 2 * g + 1];
    a[0] = 1;
    for i in 1..=g {
        let mut acc = 0i128;
        for j in 1..=i {
            acc += s[j] * a[i - j];
        }
        if acc % i as i128 != 0 {
            return Err(Error::InvalidInput(format!("non-integral Newton step at p = {p}")));
        }
        a[i] = -acc / i as i128;
    }
    for i in 0..g {
        a[2 * g - i] = (p as i128).pow((g - i) as u32) * a[i];
    }
    Ok(LPolynomial { p, g, a: a.into_iter().map(|x| x as i64).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Corpus;

    #[test]
    fn counts_and_orders() {
        let c = Corpus::default_corpus().unwrap();
        let h = |id: &str| c.curve(id).unwrap().model.clone();
        assert_eq!(count_points(&h("C2(16)"), 5, 1).unwrap(), 11);
        assert_eq!(count_points(&h("C2(16)"), 11, 1).unwrap(), 16);
        assert_eq!(count_points(&h("C2(20)"), 3, 1).unwrap(), 5);
        assert_eq!(count_points(&h("C2(20)"), 37, 1).unwrap(), 39);
        assert_eq!(l_polynomial(&h("C2(16)"), 5).unwrap().jacobian_order(), 363);
        assert_eq!(l_polynomial(&h("C3(16)"), 3).unwrap().jacobian_order(), 54);
        assert_eq!(l_polynomial(&h("C2(20)"), 3).unwrap().jacobian_order(), 141);
        let l = l_polynomial(&h("C2(16)"), 11).unwrap();
        assert!(l.functional_equation_holds());
        assert_eq!(l.predicted_count(3), count_points(&h("C2(16)"), 11, 3).unwrap() as i128);
        for m in l.reciprocal_root_moduli() {
            assert!((m - 11f64.sqrt()).abs() < 1e-6);
        }
    }
}
