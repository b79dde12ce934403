//! Minimum-length signed-digit representations in base `g`.
//!
//! Every integer `n` has exactly one representation `n = Σ ε_i g^i` with
//!
//! * odd `g`: `|ε_i| ≤ (g-1)/2`;
//! * even `g`: `|ε_i| ≤ g/2`, and whenever `|ε_i| = g/2` the next digit obeys
//!   `|ε_{i+1}| < g/2` and `ε_i · ε_{i+1} ≥ 0`.
//!
//! For that representation the word length of `n` with respect to
//! `A_g = {0} ∪ {±g^i}` is `ℓ_g(n) = Σ |ε_i|`. For `g = 2` this is the
//! non-adjacent form, for `g = 3` balanced ternary.
//!
//! [`canonical_repr`] builds the representation directly by division with
//! balanced remainders. [`shorten`] is the independent rewriting route that
//! turns an arbitrary sum of `±g^i` into the same representation without ever
//! increasing the number of summands.

mod shorten;

pub use shorten::{shorten, shorten_traced, RawRepresentation, RewriteRule, ShortenStep, Summand};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::Generator;

/// Largest base accepted anywhere in the crate.
pub const MAX_BASE: u32 = 1 << 31;

pub(crate) fn check_base(base: u32) -> Result<()> {
    if (2..=MAX_BASE).contains(&base) {
        Ok(())
    } else {
        Err(Error::InvalidBase(base.into()))
    }
}

/// Canonical digit vector, little-endian, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDigits", into = "RawDigits")]
pub struct SignedDigitRepr {
    base: u32,
    digits: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct RawDigits {
    base: u32,
    digits: Vec<i64>,
}

impl TryFrom<RawDigits> for SignedDigitRepr {
    type Error = Error;

    fn try_from(raw: RawDigits) -> Result<Self> {
        SignedDigitRepr::from_digits(raw.base, raw.digits)
    }
}

impl From<SignedDigitRepr> for RawDigits {
    fn from(r: SignedDigitRepr) -> Self {
        RawDigits {
            base: r.base,
            digits: r.digits,
        }
    }
}

impl SignedDigitRepr {
    /// Wraps a digit vector after checking the canonicity conditions.
    pub fn from_digits(base: u32, mut digits: Vec<i64>) -> Result<Self> {
        check_base(base)?;
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if !satisfies_conditions(base, &digits) {
            return Err(Error::InvalidSet(format!(
                "digits {digits:?} are not a minimum-length base-{base} representation"
            )));
        }
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// `ε_0, ε_1, …, ε_r`.
    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    /// Index `r` of the leading term, `None` for zero.
    pub fn leading_index(&self) -> Option<usize> {
        self.digits.len().checked_sub(1)
    }

    pub fn leading_digit(&self) -> Option<i64> {
        self.digits.last().copied()
    }

    /// `ℓ_g = Σ |ε_i|`.
    pub fn length(&self) -> u64 {
        self.digits.iter().map(|d| d.unsigned_abs()).sum()
    }

    pub fn value(&self) -> BigInt {
        let g = BigInt::from(self.base);
        self.digits.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &g + d)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self {
            base: self.base,
            digits: self.digits.iter().map(|d| -d).collect(),
        }
    }

    /// The representation as a word of `ℓ_g(n)` generators, lowest order first.
    pub fn terms(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.length() as usize);
        for (i, &d) in self.digits.iter().enumerate() {
            let sign = if d < 0 { -1 } else { 1 };
            for _ in 0..d.unsigned_abs() {
                out.push(Generator::new(sign, self.base.into(), i as u32));
            }
        }
        out
    }

    /// Exponents and signs of the nonzero digits, lowest first.
    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| (i, d))
    }
}

impl fmt::Display for SignedDigitRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, d) in self.support().collect::<Vec<_>>().into_iter().rev() {
            let sign = if d < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let coeff = d.unsigned_abs();
            let coeff = if coeff == 1 {
                String::new()
            } else {
                format!("{coeff}·")
            };
            write!(f, "{sign}{coeff}{}^{i}", self.base)?;
            first = false;
        }
        Ok(())
    }
}

/// Checks digit range and (for even bases) the tie condition on `±g/2`.
/// Trailing zeros are tolerated.
pub fn satisfies_conditions(base: u32, digits: &[i64]) -> bool {
    let g = i64::from(base);
    if base % 2 == 1 {
        let bound = (g - 1) / 2;
        return digits.iter().all(|d| d.abs() <= bound);
    }
    let half = g / 2;
    if digits.iter().any(|d| d.abs() > half) {
        return false;
    }
    digits.iter().enumerate().all(|(i, &d)| {
        if d.abs() != half {
            return true;
        }
        let next = digits.get(i + 1).copied().unwrap_or(0);
        next.abs() < half && d * next >= 0
    })
}

/// The unique minimum-length base-`g` representation of `n`.
pub fn canonical_repr(base: u32, n: &BigInt) -> Result<SignedDigitRepr> {
    check_base(base)?;
    let digits = match n.to_i128() {
        Some(small) if small.unsigned_abs() < 1 << 120 => digits_i128(base, small),
        _ => digits_big(base, n, true),
    };
    Ok(SignedDigitRepr { base, digits })
}

/// `ℓ_g(n)`.
pub fn length(base: u32, n: &BigInt) -> Result<u64> {
    Ok(canonical_repr(base, n)?.length())
}

/// Convenience wrapper for machine integers.
pub fn length_i64(base: u32, n: i64) -> Result<u64> {
    check_base(base)?;
    Ok(digits_i128(base, n.into()).iter().map(|d| d.unsigned_abs()).sum())
}

fn digits_i128(base: u32, mut n: i128) -> Vec<i64> {
    let g = i128::from(base);
    let half = g / 2;
    let even = base.is_multiple_of(2);
    let mut digits = Vec::new();
    while n != 0 {
        let r = n.rem_euclid(g);
        let d = if even && r == half {
            // Tie at ±g/2: the residue of the next quotient decides the sign so
            // that the following digit is neither ±g/2 nor of opposite sign.
            let q_plus = (n - half) / g;
            if q_plus.rem_euclid(g) < half {
                half
            } else {
                -half
            }
        } else if 2 * r > g {
            r - g
        } else {
            r
        };
        digits.push(d as i64);
        n = (n - d) / g;
    }
    digits
}

fn digits_big(base: u32, n: &BigInt, small_tail: bool) -> Vec<i64> {
    let g = BigInt::from(base);
    let gi = i64::from(base);
    let half = gi / 2;
    let even = base.is_multiple_of(2);
    let mut n = n.clone();
    let mut digits = Vec::new();
    while !n.is_zero() {
        if let Some(small) = n.to_i128().filter(|_| small_tail) {
            if small.unsigned_abs() < 1 << 120 {
                digits.extend(digits_i128(base, small));
                break;
            }
        }
        let r = n.mod_floor(&g).to_i64().expect("residue below base");
        let d = if even && r == half {
            let q_plus = (&n - half) / &g;
            if q_plus.mod_floor(&g).to_i64().expect("residue below base") < half {
                half
            } else {
                -half
            }
        } else if 2 * r > gi {
            r - gi
        } else {
            r
        };
        digits.push(d);
        n = (n - d) / &g;
    }
    digits
}

/// A generator `a = ±g^k` with `ℓ_g(n + a) = ℓ_g(n) + 1`.
///
/// `k = r + 2` where `r` is the leading index of `n` (`k = 2` for `n = 0`),
/// and the sign of `a` follows the sign of `n` (positive for `n ≥ 0`). The new
/// digit lands above a zero digit and agrees in sign with the old leading
/// digit, so the extended vector is again canonical.
pub fn extend_length(base: u32, n: &BigInt) -> Result<Generator> {
    let repr = canonical_repr(base, n)?;
    let k = repr.leading_index().map_or(2, |r| r + 2);
    let sign = if n.is_negative() { -1 } else { 1 };
    Ok(Generator::new(sign, base.into(), k as u32))
}
