//! The standardizing and shortening rewrite system.
//!
//! Starting from any multiset of summands `0, ±g^i`, the rules below are
//! applied until none fires:
//!
//! * (a) delete `0` summands;
//! * (b) cancel pairs `g^i, -g^i`;
//! * (c) carry: `m ≥ g` copies of `±g^i` lose `q·g` copies and gain `q`
//!   copies of `±g^{i+1}` where `m = q·g + s`;
//! * (d) `m` copies of `±g^i` with `g/2 < m < g` become `g-m` copies of
//!   `∓g^i` plus one `±g^{i+1}`;
//! * (e) even `g` only: a digit `∓g/2` followed by a digit of the opposite
//!   sign flips to `±g/2` and moves the next digit one step toward zero;
//! * runs of two or more equal digits `±g/2` are rewritten as
//!   `∓g/2, ∓(g/2-1), …, ∓(g/2-1)` with a carry of `±1` above the run.
//!
//! Rules are tried lowest index first and the scan restarts at the lowest
//! index a rewrite touched. No rule increases the number of summands.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::SignedDigitRepr;

/// One summand of a raw `g`-adic representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Summand {
    Zero,
    /// `+g^exp`
    Pos(u32),
    /// `-g^exp`
    Neg(u32),
}

/// An arbitrary word over `A_g`, i.e. a multiset of summands `0, ±g^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRepresentation {
    pub base: u32,
    pub summands: Vec<Summand>,
}

impl RawRepresentation {
    pub fn new(base: u32, summands: Vec<Summand>) -> Self {
        Self { base, summands }
    }

    /// `count` copies of `sign · g^exp` appended.
    pub fn with(mut self, sign: i8, exp: u32, count: usize) -> Self {
        let s = if sign < 0 { Summand::Neg(exp) } else { Summand::Pos(exp) };
        self.summands.extend(std::iter::repeat_n(s, count));
        self
    }

    pub fn term_count(&self) -> usize {
        self.summands.len()
    }

    pub fn value(&self) -> BigInt {
        let g = BigInt::from(self.base);
        self.summands
            .iter()
            .map(|s| match *s {
                Summand::Zero => BigInt::zero(),
                Summand::Pos(e) => g.pow(e),
                Summand::Neg(e) => -g.pow(e),
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RewriteRule {
    DeleteZero,
    Cancel,
    Carry,
    Complement,
    SignClash,
    RunElimination,
}

/// A rewrite that fired, with the summand count it left behind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortenStep {
    pub rule: RewriteRule,
    pub index: usize,
    pub terms_after: u64,
}

/// Rewrites `rep` into the canonical representation of its value.
pub fn shorten(rep: &RawRepresentation) -> SignedDigitRepr {
    shorten_traced(rep).0
}

/// [`shorten`], also returning every rewrite step in order.
///
/// The base is trusted to be valid (`g ≥ 2`); the returned representation is
/// checked only in debug builds.
pub fn shorten_traced(rep: &RawRepresentation) -> (SignedDigitRepr, Vec<ShortenStep>) {
    let g = u64::from(rep.base);
    assert!(g >= 2, "base must be at least 2");

    let mut pos: Vec<u64> = Vec::new();
    let mut neg: Vec<u64> = Vec::new();
    let mut zeros = 0u64;
    for s in &rep.summands {
        match *s {
            Summand::Zero => zeros += 1,
            Summand::Pos(e) => bump(&mut pos, &mut neg, e as usize, 1, true),
            Summand::Neg(e) => bump(&mut pos, &mut neg, e as usize, 1, false),
        }
    }

    let mut trace = Vec::new();
    let count = |pos: &[u64], neg: &[u64]| pos.iter().chain(neg).sum::<u64>();

    // (a)
    if zeros > 0 {
        trace.push(ShortenStep {
            rule: RewriteRule::DeleteZero,
            index: 0,
            terms_after: count(&pos, &neg),
        });
    }

    // (b)–(d): one upward sweep. Rules at index i only touch i and i+1.
    let mut i = 0;
    while i < pos.len() {
        loop {
            let (p, n) = (pos[i], neg[i]);
            let rule = if p > 0 && n > 0 {
                let t = p.min(n);
                pos[i] -= t;
                neg[i] -= t;
                RewriteRule::Cancel
            } else {
                let (m, positive) = if p > 0 { (p, true) } else { (n, false) };
                if m >= g {
                    let q = m / g;
                    set(&mut pos, &mut neg, i, m - q * g, positive);
                    bump(&mut pos, &mut neg, i + 1, q, positive);
                    RewriteRule::Carry
                } else if 2 * m > g {
                    set(&mut pos, &mut neg, i, 0, positive);
                    set(&mut pos, &mut neg, i, g - m, !positive);
                    bump(&mut pos, &mut neg, i + 1, 1, positive);
                    RewriteRule::Complement
                } else {
                    break;
                }
            };
            trace.push(ShortenStep {
                rule,
                index: i,
                terms_after: count(&pos, &neg),
            });
        }
        i += 1;
    }

    let mut digits: Vec<i64> = pos.iter().zip(&neg).map(|(&p, &n)| p as i64 - n as i64).collect();

    if g % 2 == 0 {
        let half = (g / 2) as i64;
        let magnitude = |d: &[i64]| d.iter().map(|x| x.unsigned_abs()).sum::<u64>();
        let mut from = 0;
        loop {
            if let Some(i) = find_sign_clash(&digits, half, from) {
                let s = digits[i].signum();
                // -(g/2)g^i + e g^{i+1}  ->  (g/2)g^i + (e-1)g^{i+1}, and mirrored.
                digits[i] = -digits[i];
                digits[i + 1] += s;
                trace.push(ShortenStep {
                    rule: RewriteRule::SignClash,
                    index: i,
                    terms_after: magnitude(&digits),
                });
                from = i.saturating_sub(1);
                continue;
            }
            if let Some((i, k)) = find_run(&digits, half) {
                let s = digits[i].signum();
                digits[i] = -s * half;
                for d in &mut digits[i + 1..i + k] {
                    *d = -s * (half - 1);
                }
                if i + k == digits.len() {
                    digits.push(0);
                }
                digits[i + k] += s;
                trace.push(ShortenStep {
                    rule: RewriteRule::RunElimination,
                    index: i,
                    terms_after: magnitude(&digits),
                });
                from = i.saturating_sub(1);
                continue;
            }
            break;
        }
    }

    while digits.last() == Some(&0) {
        digits.pop();
    }
    debug_assert!(super::satisfies_conditions(rep.base, &digits));
    (SignedDigitRepr { base: rep.base, digits }, trace)
}

fn grow(pos: &mut Vec<u64>, neg: &mut Vec<u64>, i: usize) {
    if pos.len() <= i {
        pos.resize(i + 1, 0);
        neg.resize(i + 1, 0);
    }
}

fn bump(pos: &mut Vec<u64>, neg: &mut Vec<u64>, i: usize, by: u64, positive: bool) {
    grow(pos, neg, i);
    if positive {
        pos[i] += by;
    } else {
        neg[i] += by;
    }
}

fn set(pos: &mut Vec<u64>, neg: &mut Vec<u64>, i: usize, to: u64, positive: bool) {
    grow(pos, neg, i);
    if positive {
        pos[i] = to;
    } else {
        neg[i] = to;
    }
}

/// Lowest `i ≥ from` with `ε_i = ∓g/2` and `ε_{i+1}` of the opposite sign.
fn find_sign_clash(digits: &[i64], half: i64, from: usize) -> Option<usize> {
    (from..digits.len().saturating_sub(1)).find(|&i| {
        let (d, next) = (digits[i], digits[i + 1]);
        d.abs() == half && d * next < 0
    })
}

/// Lowest run start `i` of `k ≥ 2` equal digits `±g/2`, with `k` maximal.
fn find_run(digits: &[i64], half: i64) -> Option<(usize, usize)> {
    let mut i = 0;
    while i + 1 < digits.len() {
        let d = digits[i];
        if d.abs() == half && digits[i + 1] == d {
            let k = digits[i..].iter().take_while(|&&x| x == d).count();
            return Some((i, k));
        }
        i += 1;
    }
    None
}
