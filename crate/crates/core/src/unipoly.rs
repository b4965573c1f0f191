//! Dense univariate polynomials over a field, plus the finite-field
//! algorithms (root finding, distinct-degree patterns) used by the
//! randomized certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::scalar::{Field, Rational, Zp};

/// `c[i]` is the coefficient of `s^i`; no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<C> {
    c: Vec<C>,
}

impl<C: Field> UniPoly<C> {
    pub fn new(mut c: Vec<C>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: vec![] }
    }

    pub fn one() -> Self {
        UniPoly { c: vec![C::one()] }
    }

    pub fn constant(v: C) -> Self {
        Self::new(vec![v])
    }

    /// The polynomial `s`.
    pub fn s() -> Self {
        UniPoly { c: vec![C::zero(), C::one()] }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> C {
        self.c.last().cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, i: usize) -> C {
        self.c.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + a.clone();
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.c.iter().map(|a| a.clone() * k.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().inv())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.clone() * C::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().inv();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![C::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd].clone() * inv.clone();
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - coef.clone() * b.clone();
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
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

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Strip factors of `s`; returns (multiplicity of s, cofactor).
    pub fn strip_s(&self) -> (usize, Self) {
        let k = self.c.iter().take_while(|a| a.is_zero()).count();
        (k, Self::new(self.c[k..].to_vec()))
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut acc = Self::one().rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// Resultant via the Euclidean remainder sequence.
    pub fn resultant(&self, o: &Self) -> C {
        let (mut a, mut b) = (self.clone(), o.clone());
        if a.is_zero() || b.is_zero() {
            return C::zero();
        }
        let mut res = C::one();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                return res * b.lc().pow_u32(da as u32);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return C::zero();
            }
            let dr = r.degree().unwrap();
            res = res * b.lc().pow_u32((da - dr) as u32);
            if da % 2 == 1 && db % 2 == 1 {
                res = -res;
            }
            a = b;
            b = r;
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[C], ys: &[C]) -> Self {
        let n = xs.len();
        let mut coef: Vec<C> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (coef[i].clone() - coef[i - 1].clone()) / (xs[i].clone() - xs[i - j].clone());
            }
        }
        let mut out = Self::constant(coef[n - 1].clone());
        for i in (0..n - 1).rev() {
            let lin = Self::new(vec![-xs[i].clone(), C::one()]);
            out = out.mul(&lin).add(&Self::constant(coef[i].clone()));
        }
        out
    }
}

impl UniPoly<Rational> {
    /// `(u, g)` with `self = u * g`, `g` integral, primitive, positive leading coefficient.
    pub fn primitive_integer(&self) -> (Rational, Vec<BigInt>) {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in &self.c {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut u = Rational::new(num, den);
        if self.lc().is_negative() {
            u = -u;
        }
        let g = self.c.iter().map(|c| (c / &u).to_integer()).collect();
        (u, g)
    }
}

impl<const P: u64> UniPoly<Zp<P>> {
    /// Monic product of the distinct linear factors (s - a), a in F_p.
    fn linear_part(&self) -> Self {
        let f = self.monic();
        let sp = Self::s().pow_mod(P, &f);
        sp.sub(&Self::s()).gcd(&f)
    }

    /// Distinct roots in F_p, sorted.
    pub fn roots<R: Rng>(&self, rng: &mut R) -> Vec<Zp<P>> {
        if self.is_zero() {
            return vec![];
        }
        let mut out = vec![];
        let g = self.linear_part();
        split_linear(&g, rng, &mut out);
        out.sort();
        out
    }

    /// Distinct nonzero roots in F_p.
    pub fn nonzero_roots<R: Rng>(&self, rng: &mut R) -> Vec<Zp<P>> {
        self.roots(rng).into_iter().filter(|r| !r.is_zero()).collect()
    }

    /// Degrees of the irreducible factors of a squarefree polynomial.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut f = self.monic();
        let mut out = vec![];
        let mut h = Self::s();
        let mut i = 1;
        while f.degree().unwrap_or(0) >= 2 * i {
            h = h.pow_mod(P, &f);
            let g = h.sub(&Self::s()).gcd(&f);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 {
                out.extend(std::iter::repeat(i).take(dg / i));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        if let Some(d) = f.degree().filter(|&d| d > 0) {
            out.push(d);
        }
        out
    }
}

fn split_linear<const P: u64, R: Rng>(g: &UniPoly<Zp<P>>, rng: &mut R, out: &mut Vec<Zp<P>>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeff(0) / g.coeff(1)),
        Some(d) => loop {
            let a = Zp::<P>::new(rng.gen_range(0..P));
            let shifted = UniPoly::new(vec![a, Zp::one()]);
            let w = shifted.pow_mod((P - 1) / 2, g).sub(&UniPoly::one());
            let h = w.gcd(g);
            let dh = h.degree().unwrap_or(0);
            if dh > 0 && dh < d {
                split_linear(&h, rng, out);
                split_linear(&g.div_rem(&h).0, rng, out);
                return;
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, F1};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zp(v: &[i64]) -> UniPoly<F1> {
        UniPoly::new(v.iter().map(|&a| F1::from_i64(a)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        // (s-1)(s-2) and (s-1)(s+3)
        let a = zp(&[2, -3, 1]);
        let b = zp(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), zp(&[-1, 1]));
        let (q, r) = a.div_rem(&zp(&[-1, 1]));
        assert_eq!(q, zp(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn roots_mod_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = zp(&[-6, 11, -6, 1]); // (s-1)(s-2)(s-3)
        assert_eq!(f.roots(&mut rng), vec![F1::from_i64(1), F1::from_i64(2), F1::from_i64(3)]);
        assert!(zp(&[1, 0, 0, 0, 1]).factor_degrees().iter().all(|&d| d <= 4));
    }

    #[test]
    fn factor_degree_pattern() {
        // s^2 - 2 times (s - 5): degrees {1,1,1} or {1,2}
        let f = zp(&[10, -2, -5, 1]);
        let mut d = f.factor_degrees();
        d.sort();
        assert!(d == vec![1, 1, 1] || d == vec![1, 2]);
    }

    #[test]
    fn resultant_matches_roots() {
        // Res(s^2-1, s-2) = (2-1)(2+1)... = product of g(roots of f) = (1-2)(-1-2) = 3
        let f = UniPoly::<Rational>::new(vec![int(-1), int(0), int(1)]);
        let g = UniPoly::<Rational>::new(vec![int(-2), int(1)]);
        assert_eq!(f.resultant(&g), int(3));
        assert_eq!(f.resultant(&f.derivative()), int(-4));
    }

    #[test]
    fn interpolation() {
        let f = zp(&[3, 0, 5, 7]);
        let xs: Vec<F1> = (1..=4).map(F1::from_i64).collect();
        let ys: Vec<F1> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), f);
    }
}
