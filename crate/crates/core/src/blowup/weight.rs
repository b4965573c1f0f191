use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::polyring::{ExponentVector, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("weights must be positive, got {0:?}")]
    NotPositive([u64; NVARS]),
    #[error("weight {0:?} is not primitive (gcd {1})")]
    NotPrimitive([u64; NVARS], u64),
}

/// A primitive vector of positive integer weights for (x, y, z, t).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight([u64; NVARS]);

impl Weight {
    pub fn new(w: [u64; NVARS]) -> Result<Self, WeightError> {
        if w.iter().any(|&a| a == 0) {
            return Err(WeightError::NotPositive(w));
        }
        let g = w.iter().fold(0u64, |g, &a| g.gcd(&a));
        if g != 1 {
            return Err(WeightError::NotPrimitive(w, g));
        }
        Ok(Weight(w))
    }

    /// Divide out the gcd of a positive vector.
    pub fn primitive_of(w: [u64; NVARS]) -> Result<Self, WeightError> {
        if w.iter().any(|&a| a == 0) {
            return Err(WeightError::NotPositive(w));
        }
        let g = w.iter().fold(0u64, |g, &a| g.gcd(&a));
        Ok(Weight(w.map(|a| a / g)))
    }

    pub fn get(&self) -> [u64; NVARS] {
        self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn eval(&self, e: &ExponentVector) -> u64 {
        e.dot(&self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_vectors() {
        assert!(Weight::new([2, 1, 1, 1]).is_ok());
        assert_eq!(Weight::new([2, 2, 2, 2]), Err(WeightError::NotPrimitive([2, 2, 2, 2], 2)));
        assert!(matches!(Weight::new([1, 0, 1, 1]), Err(WeightError::NotPositive(_))));
        assert_eq!(Weight::primitive_of([4, 2, 2, 2]).unwrap().get(), [2, 1, 1, 1]);
    }
}
