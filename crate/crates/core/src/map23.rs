//! The length-preserving bijection `f: (Z, d_2) → (Z, d_3)`.
//!
//! Write `n` in non-adjacent form, `n = Σ ε_i 2^{k_i}` with `k_{i+1} - k_i ≥ 2`.
//! Compressing the exponents to `k̃_i = k_i - i` gives strictly increasing
//! exponents, and `f(n) = Σ ε_i 3^{k̃_i}` is a balanced-ternary expansion with
//! the same number of nonzero digits. Every balanced-ternary support arises
//! this way, so `f` is a bijection with `ℓ_3(f(n)) = ℓ_2(n)`.
//!
//! `f` is not bi-Lipschitz: [`distortion_witness`] produces `m, n` at
//! 2-distance 1 whose images are at 3-distance `2r + 1`. This is a property
//! of `f` alone.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadic;

/// Signs and exponents of the nonzero digits of a canonical representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub signs: Vec<i8>,
    pub exponents: Vec<u32>,
}

impl ExponentProfile {
    fn of(base: u32, n: &BigInt) -> Self {
        let repr = gadic::canonical_repr(base, n).expect("fixed base");
        let (exponents, signs) = repr
            .support()
            .map(|(i, d)| {
                debug_assert!(d.abs() == 1);
                (i as u32, d.signum() as i8)
            })
            .unzip();
        Self { signs, exponents }
    }

    /// Profile of the non-adjacent form of `n`.
    pub fn binary(n: &BigInt) -> Self {
        Self::of(2, n)
    }

    /// Number of nonzero digits.
    pub fn h(&self) -> usize {
        self.signs.len()
    }

    /// Consecutive exponents differ by at least 2.
    pub fn has_gaps(&self) -> bool {
        self.exponents.windows(2).all(|w| w[1] >= w[0] + 2)
    }

    /// `k̃_i = k_i - i`.
    pub fn compressed(&self) -> Vec<u32> {
        self.exponents.iter().enumerate().map(|(i, &k)| k - i as u32).collect()
    }

    fn evaluate(base: u32, signs: &[i8], exponents: &[u32]) -> BigInt {
        let b = BigInt::from(base);
        signs
            .iter()
            .zip(exponents)
            .map(|(&s, &k)| BigInt::from(s) * b.pow(k))
            .sum()
    }
}

/// `f(n)`.
pub fn map23(n: &BigInt) -> BigInt {
    let p = ExponentProfile::binary(n);
    ExponentProfile::evaluate(3, &p.signs, &p.compressed())
}

/// `f^{-1}(t)`: read off the balanced-ternary support of `t` and spread the
/// exponents back out by `k_i = k̃_i + i`.
pub fn map23_inverse(t: &BigInt) -> BigInt {
    let p = ExponentProfile::of(3, t);
    let spread: Vec<u32> = p.exponents.iter().enumerate().map(|(i, &k)| k + i as u32).collect();
    ExponentProfile::evaluate(2, &p.signs, &spread)
}

/// One evaluation of `f` with both lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Map23Record {
    #[serde(with = "crate::bigjson")]
    pub n: BigInt,
    #[serde(with = "crate::bigjson")]
    pub f: BigInt,
    pub l2: u64,
    pub l3: u64,
}

impl Map23Record {
    pub fn forward(n: &BigInt) -> Self {
        Self::pair(n.clone(), map23(n))
    }

    pub fn inverse(t: &BigInt) -> Self {
        Self::pair(map23_inverse(t), t.clone())
    }

    fn pair(n: BigInt, f: BigInt) -> Self {
        let l2 = gadic::length(2, &n).expect("fixed base");
        let l3 = gadic::length(3, &f).expect("fixed base");
        Self { n, f, l2, l3 }
    }
}

/// `m = Σ_{i=0}^r 2^{3i}` and `n' = Σ_{i=0}^{r-1} 2^{3(i+1)}`, so `m - n' = 1`,
/// together with the measured distances before and after `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistortionWitness {
    pub r: u32,
    #[serde(with = "crate::bigjson")]
    pub m: BigInt,
    #[serde(with = "crate::bigjson")]
    pub nprime: BigInt,
    #[serde(with = "crate::bigjson")]
    pub fm: BigInt,
    #[serde(rename = "fn", with = "crate::bigjson")]
    pub fnprime: BigInt,
    pub d2: u64,
    pub d3: u64,
}

impl DistortionWitness {
    /// Recomputes every field from `r`.
    pub fn verify(&self) -> bool {
        distortion_witness(self.r).as_ref() == Ok(self)
    }
}

pub fn distortion_witness(r: u32) -> Result<DistortionWitness> {
    if r == 0 {
        return Err(Error::InvalidArgument("distortion witnesses need r >= 1".into()));
    }
    let eight = BigInt::from(8);
    let m: BigInt = (0..=r).map(|i| eight.pow(i)).sum();
    let nprime: BigInt = (1..=r).map(|i| eight.pow(i)).sum();
    debug_assert!((&m - &nprime).is_one());
    let fm = map23(&m);
    let fnprime = map23(&nprime);
    let d2 = gadic::length(2, &(&m - &nprime))?;
    let d3 = gadic::length(3, &(&fm - &fnprime))?;
    Ok(DistortionWitness {
        r,
        m,
        nprime,
        fm,
        fnprime,
        d2,
        d3,
    })
}

/// Balanced-ternary integers with exactly `h` nonzero digits, all below
/// `3^top`.
pub fn ternary_sphere(h: usize, top: u32) -> Vec<BigInt> {
    fn go(h: usize, from: u32, top: u32, acc: BigInt, out: &mut Vec<BigInt>) {
        if h == 0 {
            out.push(acc);
            return;
        }
        let three = BigInt::from(3);
        for k in from..top {
            let p = three.pow(k);
            go(h - 1, k + 1, top, &acc + &p, out);
            go(h - 1, k + 1, top, &acc - &p, out);
        }
    }
    let mut out = Vec::new();
    go(h, 0, top, BigInt::zero(), &mut out);
    out
}
