use crate::algebra::{Field, Fp, UniPoly};

/// Reduced Mumford pair (u, v) on w² = f with deg f = 2g + 1: u monic,
/// deg v < deg u ≤ g, u | v² − f.
#[derive(Clone, Debug, PartialEq)]
pub struct MumfordDivisor<F: Field> {
    pub u: UniPoly<F>,
    pub v: UniPoly<F>,
}

impl<F: Field> MumfordDivisor<F> {
    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 0
    }
}

impl MumfordDivisor<Fp> {
    /// Hashable canonical key (u coefficients, separator, v padded to deg u).
    pub fn key(&self) -> Vec<u64> {
        let n = self.degree();
        let mut k = Vec::with_capacity(2 * n + 1);
        k.extend(self.u.coeffs()[..n].iter().map(|c| c.v));
        k.push(u64::MAX);
        k.extend((0..n).map(|i| self.v.coeff(i).v));
        k
    }
}

/// Jacobian of w² = f(s), f of odd degree 2g + 1.
#[derive(Clone, Debug)]
pub struct Jacobian<F: Field> {
    pub f: UniPoly<F>,
    pub g: usize,
}

impl<F: Field> Jacobian<F> {
    pub fn new(f: UniPoly<F>) -> Self {
        let n = f.degree().expect("nonzero model");
        assert!(n % 2 == 1, "Cantor arithmetic needs an odd-degree model");
        Jacobian { g: (n - 1) / 2, f }
    }

    fn field_zero(&self) -> F {
        self.f.ring_zero().clone()
    }

    pub fn zero(&self) -> MumfordDivisor<F> {
        let z = self.field_zero();
        MumfordDivisor { u: UniPoly::one(&z), v: UniPoly::zero(z) }
    }

    /// The class [(x, y) − ∞].
    pub fn point(&self, x: &F, y: &F) -> MumfordDivisor<F> {
        let z = self.field_zero();
        MumfordDivisor {
            u: UniPoly::new(vec![x.negate(), z.one_like()], z.clone()),
            v: UniPoly::constant(y.clone()),
        }
    }

    pub fn is_valid(&self, d: &MumfordDivisor<F>) -> bool {
        if !d.u.lc().is_one() || d.degree() > self.g || d.v.deg_i() >= d.u.deg_i() {
            return false;
        }
        d.v.square().sub(&self.f).rem(&d.u).is_zero()
    }

    pub fn neg(&self, d: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        MumfordDivisor { u: d.u.clone(), v: d.v.negate() }
    }

    pub fn add(&self, a: &MumfordDivisor<F>, b: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let (d1, e1, e2) = a.u.xgcd(&b.u);
        let (d, c1, c2) = d1.xgcd(&a.v.add(&b.v));
        let s1 = c1.mul(&e1);
        let s2 = c1.mul(&e2);
        let mut u = a.u.mul(&b.u).divexact(&d.square());
        let num = s1
            .mul(&a.u)
            .mul(&b.v)
            .add(&s2.mul(&b.u).mul(&a.v))
            .add(&c2.mul(&a.v.mul(&b.v).add(&self.f)));
        let mut v = num.divexact(&d).rem(&u);
        while u.degree().unwrap_or(0) > self.g {
            u = self.f.sub(&v.square()).divexact(&u).monic();
            v = v.negate().rem(&u);
        }
        MumfordDivisor { u, v }
    }

    pub fn double(&self, a: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        self.add(a, a)
    }

    pub fn mul_u(&self, mut n: u64, d: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        let mut acc = self.zero();
        let mut base = d.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    pub fn mul_i(&self, n: i64, d: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        if n < 0 {
            self.mul_u(n.unsigned_abs(), &self.neg(d))
        } else {
            self.mul_u(n as u64, d)
        }
    }

    pub fn sub(&self, a: &MumfordDivisor<F>, b: &MumfordDivisor<F>) -> MumfordDivisor<F> {
        self.add(a, &self.neg(b))
    }
}
