//! h-nets in `(Z, d_g)`.
//!
//! A set `C` is an h-net when every integer lies within word distance `h` of
//! it, i.e. `Z = A_g^h + C`. The nets built here are unions of spheres,
//! `C = ∪_{q ≥ 0} S(s·q)` with stride `s = h+1` or `s = 2h+1`, so membership
//! is simply `s | ℓ_g(n)`.
//!
//! [`cover_witness`] follows the constructive proof and gives a certificate
//! that holds for every integer. [`net_check_window`] is the independent,
//! window-bounded verifier that works for any set.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadic;
use crate::generator::{word_sum, Generator};
use crate::window::{IntegerSet, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stride {
    #[serde(rename = "h+1")]
    HPlusOne,
    #[serde(rename = "2h+1")]
    TwoHPlusOne,
}

/// The net `C = ∪_q S(s·q)` in `(Z, d_g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetSpec {
    pub base: u32,
    pub h: u32,
    pub stride: Stride,
}

impl NetSpec {
    pub fn new(base: u32, h: u32, stride: Stride) -> Result<Self> {
        gadic::check_base(base)?;
        Ok(Self { base, h, stride })
    }

    /// Spec from a numeric stride, which must be `h+1` or `2h+1`.
    pub fn with_stride_value(base: u32, h: u32, stride: u64) -> Result<Self> {
        let h64 = u64::from(h);
        let kind = if stride == h64 + 1 {
            Stride::HPlusOne
        } else if stride == 2 * h64 + 1 {
            Stride::TwoHPlusOne
        } else {
            return Err(Error::UnsupportedStride { stride, h: h64 });
        };
        Self::new(base, h, kind)
    }

    pub fn stride_value(&self) -> u64 {
        let h = u64::from(self.h);
        match self.stride {
            Stride::HPlusOne => h + 1,
            Stride::TwoHPlusOne => 2 * h + 1,
        }
    }

    /// Members of the net inside `window`, ascending.
    pub fn members_in(&self, window: Window) -> Vec<i64> {
        window.iter().filter(|&n| net_member(self, &BigInt::from(n))).collect()
    }
}

impl IntegerSet for NetSpec {
    fn contains(&self, n: &BigInt) -> bool {
        net_member(self, n)
    }
}

/// `s | ℓ_g(n)`.
pub fn net_member(spec: &NetSpec, n: &BigInt) -> bool {
    let len = gadic::length(spec.base, n).expect("base validated by NetSpec");
    len.is_multiple_of(spec.stride_value())
}

/// Proof that `n = c + Σ word` with `c` in a net and `|word| ≤ h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    #[serde(with = "crate::bigjson")]
    pub n: BigInt,
    #[serde(with = "crate::bigjson")]
    pub c: BigInt,
    pub word: Vec<Generator>,
}

impl CoverCertificate {
    /// Checks the sum, the word length and the generators against radius `h`
    /// and base `g`; membership of `c` is tested with `set`.
    pub fn validate_against<S: IntegerSet>(&self, base: u32, h: u32, set: &S) -> bool {
        self.word.len() <= h as usize
            && self
                .word
                .iter()
                .all(|a| a.base == u64::from(base) && (a.sign == 1 || a.sign == -1))
            && &self.c + word_sum(&self.word) == self.n
            && set.contains(&self.c)
    }

    pub fn validate(&self, spec: &NetSpec) -> bool {
        self.validate_against(spec.base, spec.h, spec)
    }
}

/// Cover certificate for `n` built as in the constructive proof.
///
/// With `ℓ_g(n) = s·q + r`: for `0 ≤ r ≤ h` the `r` highest-order canonical
/// terms are stripped off; otherwise (stride `2h+1` only) `r` is taken in
/// `[-h, -1]` and `n` is pushed up to the next sphere by `|r|` length
/// extensions.
pub fn cover_witness(spec: &NetSpec, n: &BigInt) -> Result<CoverCertificate> {
    let g = spec.base;
    let repr = gadic::canonical_repr(g, n)?;
    let len = repr.length();
    let s = spec.stride_value();
    let h = u64::from(spec.h);
    let r = len % s;

    if r <= h {
        let mut terms = repr.terms();
        let word: Vec<Generator> = terms.split_off(terms.len() - r as usize).into_iter().rev().collect();
        let c = n - word_sum(&word);
        return Ok(CoverCertificate { n: n.clone(), c, word });
    }

    let mut c = n.clone();
    let mut word = Vec::new();
    for _ in 0..s - r {
        let a = gadic::extend_length(g, &c)?;
        c += a.value();
        word.push(a.negated());
    }
    Ok(CoverCertificate { n: n.clone(), c, word })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum NetVerdict {
    /// Every integer of the window is covered.
    Covered { certificates: Vec<CoverCertificate> },
    /// `n` is provably at distance more than `h` from the set.
    Counterexample {
        #[serde(with = "crate::bigjson")]
        n: BigInt,
    },
    /// No cover of `n` exists using exponents up to the cap; a larger power
    /// might still reach the set.
    Undecided {
        #[serde(with = "crate::bigjson")]
        n: BigInt,
    },
}

impl NetVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, NetVerdict::Covered { .. })
    }
}

/// Values of length at most `h` that are sums of at most `h` generators
/// `±g^i`, `i ≤ cap`, sorted by `(ℓ_g, |v|, v)`.
fn capped_ball(base: u32, h: u32, cap: u32) -> Vec<(BigInt, u64)> {
    let g = BigInt::from(base);
    let gens: Vec<BigInt> = (0..=cap)
        .flat_map(|i| {
            let p = g.pow(i);
            [p.clone(), -p]
        })
        .collect();
    let mut seen: HashSet<BigInt> = HashSet::from([BigInt::zero()]);
    let mut frontier = vec![BigInt::zero()];
    for _ in 0..h {
        let mut next = Vec::new();
        for x in &frontier {
            for a in &gens {
                let y = x + a;
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut ball: Vec<(BigInt, u64)> = seen
        .into_iter()
        .map(|v| {
            let len = gadic::length(base, &v).expect("valid base");
            (v, len)
        })
        .collect();
    ball.sort_by(|(a, la), (b, lb)| la.cmp(lb).then(a.abs().cmp(&b.abs())).then(a.cmp(b)));
    ball
}

fn word_for(base: u32, v: &BigInt) -> Vec<Generator> {
    let mut w = gadic::canonical_repr(base, v).expect("valid base").terms();
    w.reverse();
    w
}

/// Checks that every `n` in `window` lies within `d_g`-distance `h` of `set`.
///
/// Finite sets (those reporting [`IntegerSet::finite_members`]) are decided
/// exactly. Otherwise the candidates `n - v` range over all `v` reachable
/// with at most `h` generators of exponent at most `cap`; an uncovered `n`
/// is then reported as [`NetVerdict::Undecided`], except for `h = 0` where
/// the search is complete.
pub fn net_check_window<S: IntegerSet + Sync>(
    base: u32,
    set: &S,
    h: u32,
    window: Window,
    cap: u32,
) -> Result<NetVerdict> {
    gadic::check_base(base)?;
    let found: Vec<std::result::Result<CoverCertificate, BigInt>> = match set.finite_members() {
        Some(members) => window
            .iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|n| {
                let n = BigInt::from(n);
                members
                    .iter()
                    .filter_map(|c| {
                        let v = &n - c;
                        let len = gadic::length(base, &v).expect("valid base");
                        (len <= u64::from(h)).then_some((len, v.abs(), v, c))
                    })
                    .min_by(|a, b| (a.0, &a.1, &a.2).cmp(&(b.0, &b.1, &b.2)))
                    .map(|(_, _, v, c)| CoverCertificate {
                        n: n.clone(),
                        c: c.clone(),
                        word: word_for(base, &v),
                    })
                    .ok_or(n)
            })
            .collect(),
        None => {
            let ball = capped_ball(base, h, cap);
            window
                .iter()
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|n| {
                    let n = BigInt::from(n);
                    ball.iter()
                        .find_map(|(v, _)| {
                            let c = &n - v;
                            set.contains(&c).then(|| CoverCertificate {
                                n: n.clone(),
                                c,
                                word: word_for(base, v),
                            })
                        })
                        .ok_or(n)
                })
                .collect()
        }
    };

    let exact = h == 0 || set.finite_members().is_some();
    let mut certificates = Vec::with_capacity(found.len());
    for item in found {
        match item {
            Ok(cert) => certificates.push(cert),
            Err(n) if exact => return Ok(NetVerdict::Counterexample { n }),
            Err(n) => return Ok(NetVerdict::Undecided { n }),
        }
    }
    Ok(NetVerdict::Covered { certificates })
}

/// `C + t`.
#[derive(Debug, Clone)]
pub struct Translated<S> {
    pub inner: S,
    pub shift: BigInt,
}

impl<S: IntegerSet> IntegerSet for Translated<S> {
    fn contains(&self, n: &BigInt) -> bool {
        self.inner.contains(&(n - &self.shift))
    }

    fn finite_members(&self) -> Option<Vec<BigInt>> {
        self.inner
            .finite_members()
            .map(|m| m.into_iter().map(|c| c + &self.shift).collect())
    }
}

/// `C ∪ extra`.
#[derive(Debug, Clone)]
pub struct WithExtra<S> {
    pub inner: S,
    pub extra: Vec<BigInt>,
}

impl<S: IntegerSet> IntegerSet for WithExtra<S> {
    fn contains(&self, n: &BigInt) -> bool {
        self.extra.contains(n) || self.inner.contains(n)
    }

    fn finite_members(&self) -> Option<Vec<BigInt>> {
        self.inner.finite_members().map(|mut m| {
            m.extend(self.extra.iter().cloned());
            m.sort();
            m.dedup();
            m
        })
    }
}

/// Confirms that `set` covers `window` enlarged by the largest shift, and
/// that every translate `set + t` and every superset `set ∪ {x}` then covers
/// `window` itself.
pub fn superset_translate_closure_check<S: IntegerSet + Sync>(
    base: u32,
    set: &S,
    h: u32,
    window: Window,
    cap: u32,
    shifts: &[i64],
    extras: &[i64],
) -> Result<bool> {
    let margin = shifts
        .iter()
        .map(|t| t.checked_abs().ok_or_else(|| Error::Overflow(format!("shift {t}"))))
        .try_fold(0i64, |m, t| t.map(|t| m.max(t)))?;
    if !net_check_window(base, set, h, window.enlarged(margin)?, cap)?.is_covered() {
        return Ok(false);
    }
    for &t in shifts {
        let shifted = Translated {
            inner: set,
            shift: BigInt::from(t),
        };
        if !net_check_window(base, &shifted, h, window, cap)?.is_covered() {
            return Ok(false);
        }
    }
    for &x in extras {
        let bigger = WithExtra {
            inner: set,
            extra: vec![BigInt::from(x)],
        };
        if !net_check_window(base, &bigger, h, window, cap)?.is_covered() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Heuristic experiment: greedily drops candidates, in the given order,
/// while the remaining finite set still covers `window` at radius `h`.
///
/// The result is minimal only relative to `window` and to the order tried;
/// it says nothing about minimal nets of `Z`.
pub fn greedy_minimal_net(base: u32, h: u32, candidates: &[i64], window: Window) -> Result<Vec<i64>> {
    gadic::check_base(base)?;
    let points: Vec<i64> = window.iter().collect();
    let covers: Vec<Vec<usize>> = candidates
        .par_iter()
        .map(|&c| {
            points
                .iter()
                .enumerate()
                .filter(|(_, &n)| {
                    let d = i128::from(n) - i128::from(c);
                    gadic::length(base, &BigInt::from(d)).expect("valid base") <= u64::from(h)
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut count = vec![0usize; points.len()];
    for list in &covers {
        for &i in list {
            count[i] += 1;
        }
    }
    if let Some(i) = count.iter().position(|&k| k == 0) {
        return Err(Error::InvalidSet(format!(
            "candidates do not cover {} at radius {h}",
            points[i]
        )));
    }
    let mut keep = vec![true; candidates.len()];
    for (j, list) in covers.iter().enumerate() {
        if list.iter().all(|&i| count[i] >= 2) {
            keep[j] = false;
            for &i in list {
                count[i] -= 1;
            }
        }
    }
    Ok(candidates
        .iter()
        .zip(keep)
        .filter_map(|(&c, k)| k.then_some(c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::{AllIntegers, ExplicitSet};
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn naive_distance(base: u32, n: i64, set: &[i64]) -> u64 {
        set.iter()
            .map(|&c| gadic::length_i64(base, n - c).unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn membership_examples() {
        let spec = NetSpec::new(2, 1, Stride::TwoHPlusOne).unwrap();
        assert!(net_member(&spec, &big(0)));
        assert_eq!(gadic::length_i64(2, 7).unwrap(), 2);
        assert!(!net_member(&spec, &big(7)));
        let zero = NetSpec::new(2, 0, Stride::TwoHPlusOne).unwrap();
        assert!((-50..=50).all(|n| net_member(&zero, &big(n))));
    }

    #[test]
    fn stride_values() {
        assert_eq!(NetSpec::with_stride_value(2, 2, 3).unwrap().stride, Stride::HPlusOne);
        assert_eq!(NetSpec::with_stride_value(2, 2, 5).unwrap().stride, Stride::TwoHPlusOne);
        assert_eq!(
            NetSpec::with_stride_value(2, 2, 4),
            Err(Error::UnsupportedStride { stride: 4, h: 2 })
        );
        assert!(NetSpec::new(1, 1, Stride::HPlusOne).is_err());
    }

    #[test]
    fn cover_examples() {
        let spec = NetSpec::new(2, 1, Stride::TwoHPlusOne).unwrap();
        let zero = cover_witness(&spec, &big(0)).unwrap();
        assert_eq!(zero.c, big(0));
        assert!(zero.word.is_empty());

        let seven = cover_witness(&spec, &big(7)).unwrap();
        assert_eq!(gadic::length_i64(2, 39).unwrap(), 3);
        assert_eq!(seven.c, big(39));
        assert_eq!(seven.word, vec![Generator::new(-1, 2, 5)]);
        assert!(seven.validate(&spec));

        let spec4 = NetSpec::new(4, 1, Stride::TwoHPlusOne).unwrap();
        let ten = cover_witness(&spec4, &big(10)).unwrap();
        assert_eq!(gadic::canonical_repr(4, &big(10)).unwrap().digits(), &[-2, -1, 1]);
        assert_eq!(gadic::length_i64(4, -6).unwrap(), 3);
        assert_eq!(ten.c, big(-6));
        assert_eq!(ten.word, vec![Generator::new(1, 4, 2)]);
        assert!(ten.validate(&spec4));
    }

    #[test]
    fn certificate_json() {
        let spec = NetSpec::new(2, 1, Stride::TwoHPlusOne).unwrap();
        let cert = cover_witness(&spec, &big(7)).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert_eq!(json, r#"{"n":7,"c":39,"word":[{"sign":-1,"base":2,"exp":5}]}"#);
        let back: CoverCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn certificates_for_every_base_and_stride() {
        for g in 2..=7u32 {
            for h in 0..=3u32 {
                for stride in [Stride::HPlusOne, Stride::TwoHPlusOne] {
                    let spec = NetSpec::new(g, h, stride).unwrap();
                    for n in -1500..=1500 {
                        let cert = cover_witness(&spec, &big(n)).unwrap();
                        assert!(cert.validate(&spec), "g={g} h={h} {stride:?} n={n}: {cert:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn stripped_parts_stay_geodesic() {
        for g in [2u32, 3, 4, 5, 6] {
            for n in -800i64..=800 {
                let terms = gadic::canonical_repr(g, &big(n)).unwrap().terms();
                for split in 0..=terms.len() {
                    let (lo, hi) = terms.split_at(split);
                    assert_eq!(gadic::length(g, &word_sum(lo)).unwrap(), lo.len() as u64);
                    assert_eq!(gadic::length(g, &word_sum(hi)).unwrap(), hi.len() as u64);
                }
            }
        }
    }

    #[test]
    fn window_check_examples() {
        let spec = NetSpec::new(2, 1, Stride::TwoHPlusOne).unwrap();
        let w = Window::new(-1000, 1000).unwrap();
        match net_check_window(2, &spec, 1, w, 16).unwrap() {
            NetVerdict::Covered { certificates } => {
                assert_eq!(certificates.len(), 2001);
                assert!(certificates.iter().all(|c| c.validate(&spec)));
            }
            other => panic!("{other:?}"),
        }

        let origin = ExplicitSet::from_values([0]);
        let w10 = Window::new(-10, 10).unwrap();
        let first_far = w10.iter().find(|&n| naive_distance(2, n, &[0]) > 1).unwrap();
        assert_eq!(
            net_check_window(2, &origin, 1, w10, 16).unwrap(),
            NetVerdict::Counterexample { n: big(first_far) }
        );
        assert_eq!(first_far, -10);
        // Within the window the ball of radius 1 is {0, ±1, ±2, ±4, ±8}.
        let positive_far = (0..=10).find(|&n| naive_distance(2, n, &[0]) > 1).unwrap();
        assert_eq!(positive_far, 3);
        let from_zero = ExplicitSet::from_values([0]);
        assert_eq!(
            net_check_window(2, &from_zero, 1, Window::new(0, 10).unwrap(), 16).unwrap(),
            NetVerdict::Counterexample { n: big(3) }
        );

        assert!(net_check_window(3, &AllIntegers, 0, w10, 4).unwrap().is_covered());
    }

    #[test]
    fn infinite_sets_are_undecided_not_refuted() {
        let far_away = crate::window::PredicateSet(|n: &BigInt| n > &big(1000));
        let w = Window::new(0, 5).unwrap();
        assert_eq!(
            net_check_window(2, &far_away, 1, w, 4).unwrap(),
            NetVerdict::Undecided { n: big(0) }
        );
        let nothing = crate::window::PredicateSet(|_: &BigInt| false);
        assert_eq!(
            net_check_window(2, &nothing, 0, w, 4).unwrap(),
            NetVerdict::Counterexample { n: big(0) }
        );
    }

    #[test]
    fn zero_net_is_everything() {
        let w = Window::new(-40, 40).unwrap();
        for g in 2..=6 {
            let spec = NetSpec::new(g, 0, Stride::TwoHPlusOne).unwrap();
            assert_eq!(spec.members_in(w), w.iter().collect::<Vec<_>>());
            let without = ExplicitSet::from_values(w.iter().filter(|&n| n != 7));
            assert_eq!(
                net_check_window(g, &without, 0, w, 8).unwrap(),
                NetVerdict::Counterexample { n: big(7) }
            );
        }
    }

    #[test]
    fn closure_under_translation_and_supersets() {
        let spec = NetSpec::new(2, 1, Stride::TwoHPlusOne).unwrap();
        let w = Window::new(-300, 300).unwrap();
        assert!(superset_translate_closure_check(2, &spec, 1, w, 14, &[0, 1, -7, 64], &[5, -123]).unwrap());
        let spec4 = NetSpec::new(4, 2, Stride::HPlusOne).unwrap();
        assert!(superset_translate_closure_check(4, &spec4, 2, w, 10, &[3], &[11]).unwrap());
    }

    #[test]
    fn finite_and_predicate_paths_agree() {
        let members: Vec<i64> = (-60..=60).filter(|n| n % 7 == 0).collect();
        let finite = ExplicitSet::from_values(members.iter().copied());
        let pred = crate::window::PredicateSet(|n: &BigInt| n.abs() <= big(60) && (n % 7u32).is_zero());
        let w = Window::new(-40, 40).unwrap();
        for h in 0..=2 {
            let exact = net_check_window(2, &finite, h, w, 12).unwrap();
            let searched = net_check_window(2, &pred, h, w, 12).unwrap();
            match (&exact, &searched) {
                (NetVerdict::Covered { .. }, NetVerdict::Covered { .. }) => {}
                (NetVerdict::Counterexample { n: a }, NetVerdict::Undecided { n: b }) => assert_eq!(a, b),
                (NetVerdict::Counterexample { n: a }, NetVerdict::Counterexample { n: b }) => assert_eq!(a, b),
                other => panic!("h={h}: {other:?}"),
            }
            let oracle = w.iter().find(|&n| naive_distance(2, n, &members) > u64::from(h));
            assert_eq!(exact.is_covered(), oracle.is_none());
        }
    }

    #[test]
    fn greedy_net_still_covers() {
        let w = Window::new(-64, 64).unwrap();
        let candidates: Vec<i64> = Window::new(-80, 80).unwrap().iter().collect();
        let net = greedy_minimal_net(2, 1, &candidates, w).unwrap();
        assert!(net.len() < candidates.len());
        for n in w.iter() {
            assert!(naive_distance(2, n, &net) <= 1);
        }
        for (j, _) in net.iter().enumerate() {
            let mut fewer = net.clone();
            fewer.remove(j);
            assert!(w.iter().any(|n| naive_distance(2, n, &fewer) > 1));
        }
    }

    proptest! {
        #[test]
        fn certificates_for_large_integers(n in any::<i64>(), g in 2u32..40, h in 0u32..5) {
            for stride in [Stride::HPlusOne, Stride::TwoHPlusOne] {
                let spec = NetSpec::new(g, h, stride).unwrap();
                let cert = cover_witness(&spec, &big(n)).unwrap();
                prop_assert!(cert.validate(&spec));
            }
        }
    }
}
