//! Sparse polynomials in x, y, z, t.

mod parse;
mod subst;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::{Field, Rational};

pub use parse::{parse_polynomial, ParseError};
pub use subst::{Substitution, SubstitutionError};

pub const NVARS: usize = 4;
pub const VAR_NAMES: [char; NVARS] = ['x', 'y', 'z', 't'];

/// Exponents of one monomial, in the fixed order (x, y, z, t).
///
/// Ordered graded-lexicographically with x > y > z > t.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector(pub [u32; NVARS]);

impl ExponentVector {
    pub const ZERO: ExponentVector = ExponentVector([0; NVARS]);

    pub fn new(e: [u32; NVARS]) -> Self {
        ExponentVector(e)
    }

    pub fn unit(var: usize) -> Self {
        let mut e = [0; NVARS];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a += b;
        }
        ExponentVector(e)
    }

    /// `self - o` if every entry stays non-negative.
    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(o.0) {
            *a = a.checked_sub(b)?;
        }
        Some(ExponentVector(e))
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0).all(|(a, b)| *a <= b)
    }

    pub fn with(&self, var: usize, value: u32) -> Self {
        let mut e = self.0;
        e[var] = value;
        ExponentVector(e)
    }

    pub fn scaled(&self, k: u32) -> Self {
        ExponentVector(self.0.map(|a| a * k))
    }

    pub fn dot(&self, w: &[u64; NVARS]) -> u64 {
        self.0.iter().zip(w).map(|(a, b)| *a as u64 * b).sum()
    }

    pub fn as_i64(&self) -> [i64; NVARS] {
        self.0.map(|v| v as i64)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, &k) in self.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}", VAR_NAMES[v])?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Finite map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial<C> {
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Field> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(ExponentVector::ZERO, c)
    }

    pub fn monomial(e: ExponentVector, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Polynomial { terms }
    }

    pub fn var(v: usize) -> Self {
        Self::monomial(ExponentVector::unit(v), C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (ExponentVector, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: ExponentVector, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing grlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &C)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, e: &ExponentVector) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn contains(&self, e: &ExponentVector) -> bool {
        self.terms.contains_key(e)
    }

    /// Grlex-largest term.
    pub fn leading(&self) -> Option<(&ExponentVector, &C)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&ExponentVector::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).min()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e.get(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e.get(v)).min().unwrap_or(0)
    }

    /// Variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..NVARS).filter(|&v| self.degree_in(v) > 0).collect()
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|e| e.degree() == d)
    }

    pub fn filter<F: Fn(&ExponentVector) -> bool>(&self, keep: F) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_degree: u32) -> Self {
        self.filter(|e| e.degree() <= max_degree)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &ExponentVector, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(e, a)| (e.add(m), a.clone() * c.clone())).collect(),
        }
    }

    /// Product with all terms above `max_degree` dropped.
    pub fn mul_truncated(&self, o: &Self, max_degree: u32) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.add(e2);
                if e.degree() <= max_degree {
                    out.add_term(e, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        self.pow_truncated(n, u32::MAX)
    }

    pub fn pow_truncated(&self, n: u32, max_degree: u32) -> Self {
        let mut acc = Self::one().truncate(max_degree);
        for _ in 0..n {
            acc = acc.mul_truncated(self, max_degree);
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(v);
            if k > 0 {
                out.add_term(e.with(v, k - 1), c.clone() * C::from_i64(k as i64));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[C; NVARS]) -> C {
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for v in 0..NVARS {
                term = term * point[v].pow_u32(e.get(v));
            }
            acc = acc + term;
        }
        acc
    }

    /// Set variable `v` to the constant `value`.
    pub fn specialize(&self, v: usize, value: &C) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e.with(v, 0), c.clone() * value.pow_u32(e.get(v)));
        }
        out
    }

    /// Coefficients with respect to `v`: map exponent -> coefficient polynomial (free of `v`).
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.get(v)).or_insert_with(Self::zero).add_term(e.with(v, 0), c.clone());
        }
        out
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: usize) -> Self {
        let d = self.degree_in(v);
        self.filter(|e| e.get(v) == d).map_exponents(|e| e.with(v, 0))
    }

    pub fn map_exponents<F: Fn(&ExponentVector) -> ExponentVector>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    pub fn map_coeffs<D: Field, F: Fn(&C) -> D>(&self, f: F) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Componentwise minimum of the exponents (the monomial content).
    pub fn monomial_gcd(&self) -> ExponentVector {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return ExponentVector::ZERO;
        };
        let mut e = first.0;
        for k in it {
            for v in 0..NVARS {
                e[v] = e[v].min(k.0[v]);
            }
        }
        ExponentVector(e)
    }

    /// Exact division by a monomial; panics if it does not divide.
    pub fn div_monomial(&self, m: &ExponentVector) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.checked_sub(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (ld, lc) = d.leading()?;
        let (ld, lc) = (*ld, lc.clone());
        let mut rem = self.clone();
        let mut q = Self::zero();
        while let Some((lr, cr)) = rem.leading() {
            let m = lr.checked_sub(&ld)?;
            let c = cr.clone() / lc.clone();
            rem = &rem - &d.mul_monomial(&m, &c);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Normalize so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => Self::zero(),
        }
    }
}

impl Polynomial<Rational> {
    /// Scale to integer coefficients with gcd 1 and positive leading coefficient.
    /// Returns the scalar `u` with `self = u * result`.
    pub fn primitive_part(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (Rational::zero(), Self::zero());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut unit = BigRational::new(num, den);
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            unit = -unit;
        }
        let p = self.scale(&unit.recip());
        (unit, p)
    }

    pub fn primitive(&self) -> Self {
        self.primitive_part().1
    }
}

impl<C: Field> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, o: &Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<C: Field> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, o: &Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<C: Field> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, o: &Polynomial<C>) -> Polynomial<C> {
        self.mul_truncated(o, u32::MAX)
    }
}

impl<C: Field> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.scale(&-C::one())
    }
}

impl<C: Field> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<C: Field> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<C: Field> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<C: Field> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Self {
        -&self
    }
}

fn write_rational_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    e: &ExponentVector,
    c: &Rational,
) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if neg { " - " } else { " + " })?;
    }
    let is_const = e.degree() == 0;
    if is_const {
        return write!(f, "{a}");
    }
    if !a.is_one() {
        write!(f, "{a}*")?;
    }
    write!(f, "{e}")
}

/// Canonical form: decreasing grlex, `c*x^a*y^b` with unit coefficients omitted.
impl fmt::Display for Polynomial<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            write_rational_term(f, i == 0, e, c)?;
        }
        Ok(())
    }
}

impl<C: Field> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*{e}")?;
        }
        Ok(())
    }
}

impl Serialize for Polynomial<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn p(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn grlex_order() {
        let x = ExponentVector([1, 0, 0, 0]);
        let y = ExponentVector([0, 1, 0, 0]);
        let t2 = ExponentVector([0, 0, 0, 2]);
        assert!(x > y);
        assert!(t2 > x);
        assert_eq!(p("t + x^2 + y").to_string(), "x^2 + y + t");
    }

    #[test]
    fn printing() {
        assert_eq!(p("x^2 - 1/2*z*t^4").to_string(), "-1/2*z*t^4 + x^2");
        assert_eq!(p("-3 + x").to_string(), "x - 3");
        assert_eq!(p("0").to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - z^2*t^4");
        let b = p("x - z*t^2");
        assert_eq!(a.div_exact(&b).unwrap(), p("x + z*t^2"));
        assert!(a.div_exact(&p("x + y")).is_none());
    }

    #[test]
    fn primitive_part() {
        let (u, q) = p("-1/2*x + 3/4*y").primitive_part();
        assert_eq!(q, p("2*x - 3*y"));
        assert_eq!(u, rat(-1, 4));
        assert_eq!(q.scale(&u), p("-1/2*x + 3/4*y"));
    }

    #[test]
    fn derivative_and_eval() {
        let f = p("x^2 + y^2*z + z^3 + t^3");
        assert_eq!(f.derivative(3), p("3*t^2"));
        assert_eq!(f.evaluate(&[int(1), int(1), int(1), int(1)]), int(4));
    }
}
