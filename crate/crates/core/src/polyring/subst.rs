use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use super::{Polynomial, NVARS, VAR_NAMES};
use crate::scalar::{Field, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("replacement for {0} is the zero polynomial")]
    ZeroReplacement(char),
    #[error("truncation degree must be positive")]
    ZeroTruncation,
}

/// Coordinate change `v <- r_v` for each variable, truncated at a total degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Substitution<C> {
    replacements: [Polynomial<C>; NVARS],
    truncation: u32,
}

impl<C: Field> Substitution<C> {
    pub fn new(replacements: [Polynomial<C>; NVARS], truncation: u32) -> Result<Self, SubstitutionError> {
        if truncation == 0 {
            return Err(SubstitutionError::ZeroTruncation);
        }
        for (v, r) in replacements.iter().enumerate() {
            if r.is_zero() {
                return Err(SubstitutionError::ZeroReplacement(VAR_NAMES[v]));
            }
        }
        Ok(Substitution { replacements, truncation })
    }

    pub fn identity(truncation: u32) -> Self {
        Self::new(std::array::from_fn(Polynomial::var), truncation).expect("identity is valid")
    }

    /// Replace a single variable, others fixed.
    pub fn single(var: usize, replacement: Polynomial<C>, truncation: u32) -> Result<Self, SubstitutionError> {
        let mut r: [Polynomial<C>; NVARS] = std::array::from_fn(Polynomial::var);
        r[var] = replacement;
        Self::new(r, truncation)
    }

    pub fn replacement(&self, v: usize) -> &Polynomial<C> {
        &self.replacements[v]
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_identity(&self) -> bool {
        (0..NVARS).all(|v| self.replacements[v] == Polynomial::var(v))
    }

    pub fn apply(&self, f: &Polynomial<C>) -> Polynomial<C> {
        let t = self.truncation;
        // powers[v][k] = r_v^k truncated, built lazily up to the needed exponent
        let mut powers: [Vec<Polynomial<C>>; NVARS] =
            std::array::from_fn(|_| vec![Polynomial::one()]);
        for v in 0..NVARS {
            let need = f.degree_in(v) as usize;
            while powers[v].len() <= need {
                let next = powers[v].last().unwrap().mul_truncated(&self.replacements[v], t);
                powers[v].push(next);
            }
        }
        let mut out = Polynomial::zero();
        for (e, c) in f.terms() {
            let mut term = Polynomial::constant(c.clone());
            for v in 0..NVARS {
                let k = e.get(v) as usize;
                if k > 0 {
                    term = term.mul_truncated(&powers[v][k], t);
                }
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        out.truncate(t)
    }

    /// The substitution equal to applying `self` first and then `next`.
    pub fn then(&self, next: &Self) -> Self {
        let t = self.truncation.min(next.truncation);
        let r = std::array::from_fn(|v| next.apply(&self.replacements[v]).truncate(t));
        Substitution { replacements: r, truncation: t }
    }
}

impl fmt::Display for Substitution<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in 0..NVARS {
            if self.replacements[v] == Polynomial::var(v) {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{} <- {}", VAR_NAMES[v], self.replacements[v])?;
        }
        if first {
            f.write_str("identity")?;
        }
        write!(f, " (mod deg > {})", self.truncation)
    }
}

impl fmt::Debug for Substitution<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Substitution<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn p(s: &str) -> Polynomial<Rational> {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn complete_the_square() {
        let s = Substitution::single(0, p("x - t^3"), 12).unwrap();
        assert_eq!(s.apply(&p("x^2 + 2*x*t^3")), p("x^2 - t^6"));
    }

    #[test]
    fn identity_and_binomial() {
        let f = p("x^2 + y^3 + 7/3*z*t^5");
        assert_eq!(Substitution::identity(20).apply(&f), f);
        let s = Substitution::single(1, p("y + z"), 10).unwrap();
        assert_eq!(s.apply(&p("y^2")), p("y^2 + 2*y*z + z^2"));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let s = Substitution::single(1, p("y + z^2"), 3).unwrap();
        assert_eq!(s.apply(&p("y^2")), p("y^2 + 2*y*z^2"));
    }

    #[test]
    fn composition() {
        let s1 = Substitution::single(0, p("x - y*z"), 8).unwrap();
        let s2 = Substitution::single(1, p("y + t^2"), 8).unwrap();
        let f = p("x^2 + x*y*z + y^3");
        assert_eq!(s2.apply(&s1.apply(&f)), s1.then(&s2).apply(&f));
    }

    #[test]
    fn rejects_zero() {
        assert_eq!(
            Substitution::single(2, Polynomial::<Rational>::zero(), 5),
            Err(SubstitutionError::ZeroReplacement('z'))
        );
    }
}
