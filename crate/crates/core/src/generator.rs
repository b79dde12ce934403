use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// A signed generator `sign · base^exp`.
///
/// Powers of a prime or of a single base are stored as such. Elements of a
/// multiplicative semigroup that are not pure prime powers are stored with
/// `base` equal to the element itself and `exp = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub sign: i8,
    pub base: u64,
    pub exp: u32,
}

impl Generator {
    pub fn new(sign: i8, base: u64, exp: u32) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Self { sign, base, exp }
    }

    pub fn magnitude(&self) -> BigInt {
        BigInt::from(self.base).pow(self.exp)
    }

    pub fn value(&self) -> BigInt {
        let m = self.magnitude();
        if self.sign < 0 {
            -m
        } else {
            m
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            sign: -self.sign,
            ..*self
        }
    }

    /// Total order used for deterministic tie-breaking: by magnitude, then
    /// negative before positive. For a single base this is the order by
    /// `(exponent, sign)`.
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.magnitude()
            .cmp(&other.magnitude())
            .then(self.sign.cmp(&other.sign))
            .then(self.base.cmp(&other.base))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{sign}{}^{}", self.base, self.exp)
    }
}

/// Sum of a word of generators.
pub fn word_sum<'a>(word: impl IntoIterator<Item = &'a Generator>) -> BigInt {
    word.into_iter().map(Generator::value).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_and_display() {
        let g = Generator::new(-1, 3, 4);
        assert_eq!(g.value(), BigInt::from(-81));
        assert_eq!(g.to_string(), "-3^4");
        assert_eq!(g.negated().value(), BigInt::from(81));
        assert_eq!(word_sum(&[g, Generator::new(1, 2, 0)]), BigInt::from(-80));
    }

    #[test]
    fn key_orders_by_magnitude_then_sign() {
        let two = Generator::new(1, 2, 1);
        let three = Generator::new(-1, 3, 1);
        let four = Generator::new(-1, 2, 2);
        assert_eq!(two.cmp_key(&three), Ordering::Less);
        assert_eq!(three.cmp_key(&four), Ordering::Less);
        assert_eq!(four.cmp_key(&four.negated()), Ordering::Less);
    }
}
