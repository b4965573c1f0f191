//! Coefficient fields.
//!
//! Everything polynomial in this crate is generic over [`Field`]. Two
//! instantiations are used: exact rationals ([`Rational`]) for all claims
//! that end up in a report, and small prime fields ([`Zp`]) for randomized
//! certificates (non-degeneracy search, irreducibility patterns).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Exact field arithmetic. No rounding anywhere.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Integers modulo a prime `P < 2^32` (products fit in a `u64`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Zp<const P: u64>(u64);

impl<const P: u64> Zp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Zp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut acc = 1u64;
        let mut b = self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        Zp(acc)
    }

    /// Reduce a rational; `None` if the denominator vanishes mod `P`.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let n = q.numer().mod_floor(&p).to_u64()?;
        let d = q.denom().mod_floor(&p).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(Zp(n) / Zp(d))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Zp(v.mod_floor(&BigInt::from(P)).to_u64().unwrap_or(0))
    }
}

impl<const P: u64> fmt::Debug for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Zp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Zp((self.0 + o.0) % P)
    }
}

impl<const P: u64> Sub for Zp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Zp((self.0 + P - o.0) % P)
    }
}

impl<const P: u64> Mul for Zp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Zp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Div for Zp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        assert!(o.0 != 0, "division by zero in Z/{P}");
        self * o.pow(P - 2)
    }
}

impl<const P: u64> Neg for Zp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Zp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Zp<P> {
    fn one() -> Self {
        Zp(1)
    }
}

impl<const P: u64> Field for Zp<P> {
    fn from_i64(v: i64) -> Self {
        Zp(v.rem_euclid(P as i64) as u64)
    }
}

/// Five primes just below 2^31, all congruent to 1 mod 840 so that small
/// roots of unity exist in every field (useful for degree patterns).
pub const P1: u64 = 2147482681;
pub const P2: u64 = 2147480161;
pub const P3: u64 = 2147478481;
pub const P4: u64 = 2147472601;
pub const P5: u64 = 2147470081;

pub type F1 = Zp<P1>;
pub type F2 = Zp<P2>;
pub type F3 = Zp<P3>;
pub type F4 = Zp<P4>;
pub type F5 = Zp<P5>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact square root of a rational, if it is a square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Generalized binomial coefficient `binom(r, j)` for rational `r`.
pub fn binomial(r: &BigRational, j: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..j {
        acc = acc * (r - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zp_inverse() {
        for v in [1u64, 2, 3, 12345, P1 - 1] {
            let a = F1::new(v);
            assert_eq!(a * a.inv(), F1::one());
        }
        assert_eq!(F1::from_i64(-1), F1::new(P1 - 1));
    }

    #[test]
    fn zp_from_rational() {
        let half = F2::from_rational(&rat(1, 2)).unwrap();
        assert_eq!(half * F2::from_i64(2), F2::one());
        assert_eq!(F2::from_rational(&rat(-3, 1)).unwrap(), F2::from_i64(-3));
    }

    #[test]
    fn sqrt_and_binomial() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        // (1+u)^{-1/2} = 1 - u/2 + 3u^2/8 - ...
        assert_eq!(binomial(&rat(-1, 2), 1), rat(-1, 2));
        assert_eq!(binomial(&rat(-1, 2), 2), rat(3, 8));
    }
}
