//! Bounded word-length search for mixed generating sets.
//!
//! Supported generating sets, all symmetric and containing 0:
//!
//! * a single base, `A_g = {±g^i}`;
//! * prime powers, `A_P = {±p^i : p ∈ P}` (with `P = {2, 3}` this is `A_{2,3}`);
//! * a multiplicative semigroup, `A_{S(P)} = {±s : s ∈ S(P)}`, where `S(P)`
//!   contains `1` and every product of primes from `P`.
//!
//! Exponents are capped at `B`; for the semigroup the cap is on magnitude,
//! `s ≤ max_p p^B`. Lengths are found by iterative deepening with a
//! meet-in-the-middle join: `ℓ(n) ≤ h` iff `n = x + y` with `x` in the ball of
//! radius `⌈h/2⌉` and `y` in the ball of radius `⌊h/2⌋`.
//!
//! For more than one base the result is only known to be an upper bound on
//! the true length (a shorter word could use a power above the cap), so such
//! results carry `capped = true`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadic;
use crate::generator::{word_sum, Generator};
use crate::window::Window;

/// Default exponent cap.
pub const DEFAULT_CAP: u32 = 20;
/// Default longest word searched.
pub const DEFAULT_MAX_LENGTH: usize = 8;
/// Default exponent bound for [`diophantine_search`].
pub const DEFAULT_DIOPHANTINE_BOUND: u32 = 200;

const MAX_GENERATORS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "params")]
pub enum SetKind {
    SingleBase(u32),
    PrimePowers(Vec<u64>),
    Semigroup(Vec<u64>),
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ps: &[u64]| ps.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            SetKind::SingleBase(g) => write!(f, "g={g}"),
            SetKind::PrimePowers(ps) => write!(f, "P={}", join(ps)),
            SetKind::Semigroup(ps) => write!(f, "S(P)={}", join(ps)),
        }
    }
}

impl FromStr for SetKind {
    type Err = Error;

    /// Accepts `g=4`, `4`, `P=2,3,5`, `2,3` and `S(P)=2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidGeneratingSet(format!("cannot parse {s:?}"));
        let list = |body: &str| -> Result<Vec<u64>> {
            body.split(',')
                .map(|p| p.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        if let Some(body) = s.strip_prefix("S(P)=") {
            return Ok(SetKind::Semigroup(list(body)?));
        }
        if let Some(body) = s.strip_prefix("P=") {
            return Ok(SetKind::PrimePowers(list(body)?));
        }
        if let Some(body) = s.strip_prefix("g=") {
            return body.trim().parse().map(SetKind::SingleBase).map_err(|_| bad());
        }
        let values = list(s)?;
        match values.as_slice() {
            [g] => u32::try_from(*g).map(SetKind::SingleBase).map_err(|_| bad()),
            _ => Ok(SetKind::PrimePowers(values)),
        }
    }
}

/// A generating set together with its search limits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratingSetSpec {
    pub kind: SetKind,
    /// Exponent cap `B`.
    pub cap: u32,
    /// Longest word the engine will search for.
    pub max_length: usize,
}

impl GeneratingSetSpec {
    pub fn new(kind: SetKind, cap: u32) -> Self {
        Self {
            kind,
            cap,
            max_length: DEFAULT_MAX_LENGTH,
        }
    }

    pub fn single_base(g: u32, cap: u32) -> Self {
        Self::new(SetKind::SingleBase(g), cap)
    }

    /// `A_{2,3}`.
    pub fn two_three(cap: u32) -> Self {
        Self::new(SetKind::PrimePowers(vec![2, 3]), cap)
    }

    pub fn with_max_length(mut self, max_length: usize) -> Self {
        self.max_length = max_length;
        self
    }

    pub fn is_single_base(&self) -> bool {
        matches!(self.kind, SetKind::SingleBase(_))
    }

    /// Largest generator magnitude admitted, `M`.
    pub fn magnitude_cap(&self) -> BigInt {
        match &self.kind {
            SetKind::SingleBase(g) => BigInt::from(*g).pow(self.cap),
            SetKind::PrimePowers(ps) | SetKind::Semigroup(ps) => ps
                .iter()
                .map(|&p| BigInt::from(p).pow(self.cap))
                .max()
                .unwrap_or_else(BigInt::one),
        }
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            SetKind::SingleBase(g) => gadic::check_base(*g),
            SetKind::PrimePowers(ps) | SetKind::Semigroup(ps) => {
                if ps.is_empty() {
                    return Err(Error::InvalidGeneratingSet("empty prime list".into()));
                }
                if let Some(p) = ps.iter().find(|&&p| !is_prime(p)) {
                    return Err(Error::InvalidGeneratingSet(format!("{p} is not prime")));
                }
                let distinct: HashSet<_> = ps.iter().collect();
                if distinct.len() != ps.len() {
                    return Err(Error::InvalidGeneratingSet("primes must be distinct".into()));
                }
                Ok(())
            }
        }
    }

    /// Positive generators, sorted by the tie-breaking key and deduplicated
    /// by value.
    fn positive_generators(&self) -> Result<Vec<Generator>> {
        self.validate()?;
        let mut out: Vec<Generator> = match &self.kind {
            SetKind::SingleBase(g) => (0..=self.cap).map(|i| Generator::new(1, (*g).into(), i)).collect(),
            SetKind::PrimePowers(ps) => ps
                .iter()
                .flat_map(|&p| (0..=self.cap).map(move |i| Generator::new(1, p, i)))
                .collect(),
            SetKind::Semigroup(ps) => semigroup_elements(ps, &self.magnitude_cap())?,
        };
        out.sort_by(Generator::cmp_key);
        out.dedup_by(|later, earlier| later.magnitude() == earlier.magnitude());
        if 2 * out.len() > MAX_GENERATORS {
            return Err(Error::InvalidGeneratingSet(format!(
                "{} generators under cap {}; lower the cap",
                2 * out.len(),
                self.cap
            )));
        }
        Ok(out)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Elements of `S(P)` up to `bound`, as generators. Pure prime powers keep
/// their base and exponent, `1` is `p^0` for the smallest prime and other
/// products are `s^1`.
fn semigroup_elements(primes: &[u64], bound: &BigInt) -> Result<Vec<Generator>> {
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    let mut found: Vec<(BigInt, Vec<u32>)> = vec![(BigInt::one(), vec![0; sorted.len()])];
    for (idx, &p) in sorted.iter().enumerate() {
        let mut extended = Vec::new();
        for (value, exps) in &found {
            let mut v = value * p;
            let mut e = exps.clone();
            while &v <= bound {
                e[idx] += 1;
                extended.push((v.clone(), e.clone()));
                if extended.len() > MAX_GENERATORS {
                    return Err(Error::InvalidGeneratingSet(
                        "semigroup has too many elements under the cap".into(),
                    ));
                }
                v *= p;
            }
        }
        found.extend(extended);
    }
    found
        .into_iter()
        .map(|(value, exps)| {
            let nonzero: Vec<_> = exps.iter().enumerate().filter(|(_, &e)| e > 0).collect();
            Ok(match nonzero.as_slice() {
                [] => Generator::new(1, sorted[0], 0),
                [(i, &e)] => Generator::new(1, sorted[*i], e),
                _ => {
                    let s = u64::try_from(&value)
                        .map_err(|_| Error::Overflow(format!("semigroup element {value} exceeds u64")))?;
                    Generator::new(1, s, 1)
                }
            })
        })
        .collect()
}

/// Outcome of a word-length search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthResult {
    #[serde(with = "crate::bigjson")]
    pub n: BigInt,
    pub length: usize,
    /// Generators summing to `n`, largest first.
    pub witness: Vec<Generator>,
    /// True when `length` is only an upper bound valid under the cap.
    pub capped: bool,
    pub cap: u32,
}

impl LengthResult {
    pub fn is_consistent(&self) -> bool {
        self.witness.len() == self.length && word_sum(&self.witness) == self.n
    }
}

/// Indices into the generator table, sorted descending. Comparing two of
/// these lexicographically compares witnesses largest generator first.
type Witness = Vec<u32>;

struct Ball {
    radius: usize,
    entries: HashMap<BigInt, Witness>,
}

/// Word-length engine for one [`GeneratingSetSpec`].
///
/// Generator tables are fixed at construction. Balls of small radius are
/// built on first use and shared by later queries, so one engine can serve
/// many concurrent queries.
pub struct WordLengthEngine {
    spec: GeneratingSetSpec,
    /// Signed generators ordered by [`Generator::cmp_key`].
    generators: Vec<Generator>,
    values: Vec<BigInt>,
    balls: Vec<OnceLock<Ball>>,
}

impl fmt::Debug for WordLengthEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordLengthEngine")
            .field("spec", &self.spec)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl WordLengthEngine {
    pub fn new(spec: GeneratingSetSpec) -> Result<Self> {
        let positive = spec.positive_generators()?;
        let mut generators: Vec<Generator> = positive.iter().flat_map(|g| [g.negated(), *g]).collect();
        generators.sort_by(Generator::cmp_key);
        let values = generators.iter().map(Generator::value).collect();
        let radius = spec.max_length.div_ceil(2);
        Ok(Self {
            spec,
            generators,
            values,
            balls: (0..=radius).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn spec(&self) -> &GeneratingSetSpec {
        &self.spec
    }

    /// Nonzero signed generators admitted under the cap.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    fn ball(&self, radius: usize) -> &Ball {
        self.balls[radius].get_or_init(|| {
            if radius == 0 {
                return Ball {
                    radius,
                    entries: HashMap::from([(BigInt::zero(), Vec::new())]),
                };
            }
            let inner = self.ball(radius - 1);
            let frontier: Vec<(&BigInt, &Witness)> =
                inner.entries.iter().filter(|(_, w)| w.len() == radius - 1).collect();
            let fresh = frontier
                .par_iter()
                .fold(HashMap::new, |mut acc: HashMap<BigInt, Witness>, (value, witness)| {
                    for (idx, g) in self.values.iter().enumerate() {
                        let v = *value + g;
                        if inner.entries.contains_key(&v) {
                            continue;
                        }
                        let w = insert_desc(witness, idx as u32);
                        keep_min(&mut acc, v, w);
                    }
                    acc
                })
                .reduce(HashMap::new, |mut a, b| {
                    for (v, w) in b {
                        keep_min(&mut a, v, w);
                    }
                    a
                });
            let mut entries = inner.entries.clone();
            entries.extend(fresh);
            Ball { radius, entries }
        })
    }

    fn decode(&self, witness: &[u32]) -> Vec<Generator> {
        witness.iter().map(|&i| self.generators[i as usize]).collect()
    }

    fn is_capped(&self, n: &BigInt) -> bool {
        match self.spec.kind {
            SetKind::SingleBase(g) => {
                // Every exponent of the canonical representation is within
                // the cap, so the search saw an optimal word.
                let r = gadic::canonical_repr(g, n).map(|r| r.leading_index());
                !matches!(r, Ok(lead) if lead.is_none_or(|r| r <= self.spec.cap as usize))
            }
            _ => true,
        }
    }

    /// Shortest word of length at most `bound`, or `None` if there is none
    /// under the cap.
    pub fn word_length_at_most(&self, n: &BigInt, bound: usize) -> Result<Option<LengthResult>> {
        if bound > self.spec.max_length {
            return Err(Error::InvalidGeneratingSet(format!(
                "search depth {bound} exceeds the configured maximum {}",
                self.spec.max_length
            )));
        }
        for h in 0..=bound {
            if let Some(witness) = self.search_exact(n, h) {
                return Ok(Some(LengthResult {
                    n: n.clone(),
                    length: h,
                    witness: self.decode(&witness),
                    capped: self.is_capped(n),
                    cap: self.spec.cap,
                }));
            }
        }
        Ok(None)
    }

    /// Shortest word for `n` under the cap.
    pub fn word_length(&self, n: &BigInt) -> Result<LengthResult> {
        self.word_length_at_most(n, self.spec.max_length)?
            .ok_or_else(|| Error::UnreachableWithinCap {
                n: n.to_string(),
                explored_depth: self.spec.max_length,
                cap: self.spec.cap,
            })
    }

    /// Lexicographically least witness of length exactly `h`, assuming no
    /// shorter word exists.
    fn search_exact(&self, n: &BigInt, h: usize) -> Option<Witness> {
        let large = self.ball(h.div_ceil(2));
        let small = self.ball(h / 2);
        debug_assert!(large.radius >= small.radius);
        let mut best: Option<Witness> = None;
        for (y, wy) in &small.entries {
            let x = n - y;
            if let Some(wx) = large.entries.get(&x) {
                if wx.len() + wy.len() != h {
                    continue;
                }
                let merged = merge_desc(wx, wy);
                if best.as_ref().is_none_or(|b| merged < *b) {
                    best = Some(merged);
                }
            }
        }
        best
    }

    /// All `n` in `window` of length exactly `h`, ascending.
    pub fn sphere(&self, h: usize, window: Window) -> Result<Vec<i64>> {
        let hits: Result<Vec<Option<i64>>> = window
            .iter()
            .into_par_iter()
            .map(|n| {
                let r = self.word_length_at_most(&BigInt::from(n), h)?;
                Ok(r.filter(|r| r.length == h).map(|_| n))
            })
            .collect();
        Ok(hits?.into_iter().flatten().collect())
    }

    /// Smallest positive `n ≤ search_limit` of length exactly `h`.
    pub fn lambda(&self, h: usize, search_limit: u64) -> Result<Option<u64>> {
        if h == 0 {
            return Err(Error::InvalidGeneratingSet("lambda needs h >= 1".into()));
        }
        // Build the balls once before fanning out.
        self.word_length_at_most(&BigInt::zero(), h)?;
        let found = (1..=search_limit).into_par_iter().find_first(|&n| {
            matches!(
                self.word_length_at_most(&BigInt::from(n), h),
                Ok(Some(ref r)) if r.length == h
            )
        });
        Ok(found)
    }

    /// Whether every contiguous sub-word of `witness` has length equal to its
    /// number of terms.
    pub fn geodesic_subword_check(&self, witness: &[Generator]) -> Result<bool> {
        for i in 0..witness.len() {
            for j in i..witness.len() {
                let part = &witness[i..=j];
                let value = word_sum(part);
                match self.word_length_at_most(&value, part.len())? {
                    Some(r) if r.length == part.len() => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }
}

fn keep_min(map: &mut HashMap<BigInt, Witness>, value: BigInt, witness: Witness) {
    match map.get_mut(&value) {
        Some(existing) if *existing <= witness => {}
        Some(existing) => *existing = witness,
        None => {
            map.insert(value, witness);
        }
    }
}

fn insert_desc(witness: &[u32], idx: u32) -> Witness {
    let pos = witness.partition_point(|&w| w > idx);
    let mut out = Vec::with_capacity(witness.len() + 1);
    out.extend_from_slice(&witness[..pos]);
    out.push(idx);
    out.extend_from_slice(&witness[pos..]);
    out
}

fn merge_desc(a: &[u32], b: &[u32]) -> Witness {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] >= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A solution of `2^a - 3^b = target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophantineSolution {
    pub a: u32,
    pub b: u32,
    #[serde(with = "crate::bigjson")]
    pub target: BigInt,
}

/// Every `(a, b)` with `1 ≤ a, b ≤ exponent_bound` and `2^a - 3^b` in
/// `targets`, ordered by `(a, b)`. Exact big-integer arithmetic.
pub fn diophantine_search(targets: &[BigInt], exponent_bound: u32) -> Vec<DiophantineSolution> {
    let wanted: BTreeSet<&BigInt> = targets.iter().collect();
    let threes: Vec<BigInt> = (1..=exponent_bound).map(|b| BigInt::from(3u8).pow(b)).collect();
    (1..=exponent_bound)
        .into_par_iter()
        .flat_map_iter(|a| {
            let two = BigInt::from(2u8).pow(a);
            let wanted = &wanted;
            threes.iter().zip(1u32..).filter_map(move |(three, b)| {
                let d = &two - three;
                wanted.contains(&d).then_some(DiophantineSolution { a, b, target: d })
            })
        })
        .collect()
}

/// `|n| ≤ h_max · M`, the range in which a representation may exist.
pub fn within_reach(spec: &GeneratingSetSpec, n: &BigInt) -> bool {
    n.abs() <= spec.magnitude_cap() * BigInt::from(spec.max_length)
}
