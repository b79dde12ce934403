//! Additive complements of finite sets.
//!
//! A set `C` is a complement to `W` when `W + C = Z`, and an asymptotic
//! complement when `Z ∖ (W + C)` is finite. Both are decided exactly for
//! eventually periodic `C`: outside a finite core window membership depends
//! only on the residue modulo a period, separately for each tail.
//!
//! [`prune_minimal`] follows the removal chain `C_0 ⊇ C_1 ⊇ …`: the candidates
//! are visited in a fixed order and each is dropped if the set without it is
//! still a complement. Whether `c` can be dropped depends only on membership
//! within `diameter(W)` of `c`, which is what makes the chain computable on
//! a window.
//!
//! Values are machine integers; every arithmetic step that could leave the
//! `i64` range is checked.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::{IntegerSet, Window};

/// Upper bound on explicit tables (core windows, pruning regions).
pub const MAX_TABLE: u64 = 1 << 26;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or_else(|| Error::Overflow(format!("{a} + {b}")))
}

fn sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or_else(|| Error::Overflow(format!("{a} - {b}")))
}

/// Membership test on machine integers.
pub trait Membership {
    fn contains(&self, x: i64) -> bool;
}

impl<M: Membership + ?Sized> Membership for &M {
    fn contains(&self, x: i64) -> bool {
        (**self).contains(x)
    }
}

/// A nonempty finite set of integers, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FiniteSetJson", into = "FiniteSetJson")]
pub struct FiniteSet {
    elements: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FiniteSetJson {
    Object { elements: Vec<i64> },
    Bare(Vec<i64>),
}

impl TryFrom<FiniteSetJson> for FiniteSet {
    type Error = Error;

    fn try_from(j: FiniteSetJson) -> Result<Self> {
        match j {
            FiniteSetJson::Object { elements } | FiniteSetJson::Bare(elements) => FiniteSet::new(elements),
        }
    }
}

impl From<FiniteSet> for FiniteSetJson {
    fn from(w: FiniteSet) -> Self {
        FiniteSetJson::Object { elements: w.elements }
    }
}

impl FiniteSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        let set: BTreeSet<i64> = elements.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidSet("W must be nonempty".into()));
        }
        let elements: Vec<i64> = set.into_iter().collect();
        sub(elements[elements.len() - 1], elements[0])?;
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    /// `w'`
    pub fn min(&self) -> i64 {
        self.elements[0]
    }

    /// `w''`
    pub fn max(&self) -> i64 {
        self.elements[self.elements.len() - 1]
    }

    pub fn diameter(&self) -> i64 {
        self.max() - self.min()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// An integer set that is periodic outside a finite core window.
///
/// `x < lo` is a member iff `x mod period` is in `neg_residues`; `x > hi` is
/// a member iff `x mod period` is in `pos_residues`; inside `[lo, hi]` the
/// core table decides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PeriodicJson", into = "PeriodicJson")]
pub struct EventuallyPeriodicSet {
    period: u64,
    lo: i64,
    hi: i64,
    core: Vec<bool>,
    pos: Vec<bool>,
    neg: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct CoreJson {
    lo: i64,
    hi: i64,
    members: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PeriodicJson {
    period: u64,
    core: CoreJson,
    pos_residues: Vec<u64>,
    neg_residues: Vec<u64>,
}

impl TryFrom<PeriodicJson> for EventuallyPeriodicSet {
    type Error = Error;

    fn try_from(j: PeriodicJson) -> Result<Self> {
        EventuallyPeriodicSet::new(
            j.period,
            j.core.lo,
            j.core.hi,
            &j.core.members,
            &j.pos_residues,
            &j.neg_residues,
        )
    }
}

impl From<EventuallyPeriodicSet> for PeriodicJson {
    fn from(s: EventuallyPeriodicSet) -> Self {
        PeriodicJson {
            period: s.period,
            core: CoreJson {
                lo: s.lo,
                hi: s.hi,
                members: s.core_members(),
            },
            pos_residues: residues_of(&s.pos),
            neg_residues: residues_of(&s.neg),
        }
    }
}

fn residues_of(table: &[bool]) -> Vec<u64> {
    table
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(r, _)| r as u64)
        .collect()
}

fn residue(x: i64, m: u64) -> usize {
    (i128::from(x).rem_euclid(i128::from(m))) as usize
}

impl EventuallyPeriodicSet {
    pub fn new(
        period: u64,
        lo: i64,
        hi: i64,
        members: &[i64],
        pos_residues: &[u64],
        neg_residues: &[u64],
    ) -> Result<Self> {
        if period == 0 || period > MAX_TABLE {
            return Err(Error::InvalidSet(format!("period {period} out of range")));
        }
        let window = Window::new(lo, hi)?;
        if window.len() > MAX_TABLE {
            return Err(Error::InvalidSet(format!("core window {lo}..{hi} is too large")));
        }
        let mut core = vec![false; window.len() as usize];
        for &x in members {
            if !window.contains(x) {
                return Err(Error::InvalidSet(format!("core member {x} outside [{lo}, {hi}]")));
            }
            core[(x - lo) as usize] = true;
        }
        let table = |rs: &[u64]| -> Result<Vec<bool>> {
            let mut t = vec![false; period as usize];
            for &r in rs {
                if r >= period {
                    return Err(Error::InvalidSet(format!("residue {r} not below period {period}")));
                }
                t[r as usize] = true;
            }
            Ok(t)
        };
        Ok(Self {
            period,
            lo,
            hi,
            pos: table(pos_residues)?,
            neg: table(neg_residues)?,
            core,
        })
    }

    /// The union of residue classes `r mod m` for `r` in `residues`.
    pub fn periodic(period: u64, residues: &[u64]) -> Result<Self> {
        let members: Vec<i64> = if residues.contains(&0) { vec![0] } else { vec![] };
        Self::new(period, 0, 0, &members, residues, residues)
    }

    /// `Z`.
    pub fn all_integers() -> Self {
        Self::periodic(1, &[0]).expect("valid")
    }

    /// A finite set, with empty tails.
    pub fn finite(members: &[i64]) -> Result<Self> {
        let lo = members.iter().copied().min().unwrap_or(0);
        let hi = members.iter().copied().max().unwrap_or(0);
        Self::new(1, lo, hi, members, &[], &[])
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn core_window(&self) -> Window {
        Window {
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn core_members(&self) -> Vec<i64> {
        self.core
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| self.lo + i as i64)
            .collect()
    }

    pub fn pos_residues(&self) -> Vec<u64> {
        residues_of(&self.pos)
    }

    pub fn neg_residues(&self) -> Vec<u64> {
        residues_of(&self.neg)
    }

    pub fn contains(&self, x: i64) -> bool {
        if x < self.lo {
            self.neg[residue(x, self.period)]
        } else if x > self.hi {
            self.pos[residue(x, self.period)]
        } else {
            self.core[(x - self.lo) as usize]
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.pos.iter().any(|&b| b) && !self.neg.iter().any(|&b| b)
    }

    /// `C + t`.
    pub fn translate(&self, t: i64) -> Result<Self> {
        let shift = |table: &[bool]| -> Vec<bool> {
            let m = self.period;
            (0..m)
                .map(|r| table[residue(r as i64 - t.rem_euclid(m as i64), m)])
                .collect()
        };
        Ok(Self {
            period: self.period,
            lo: add(self.lo, t)?,
            hi: add(self.hi, t)?,
            core: self.core.clone(),
            pos: shift(&self.pos),
            neg: shift(&self.neg),
        })
    }

    /// `C ∪ {x}`.
    pub fn with_member(&self, x: i64) -> Result<Self> {
        let lo = self.lo.min(x);
        let hi = self.hi.max(x);
        self.rebuild(lo, hi, self.period, |y| y == x || self.contains(y))
    }

    /// `C ∪ D`.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let period = self.period.lcm(&other.period);
        self.rebuild(self.lo.min(other.lo), self.hi.max(other.hi), period, |y| {
            self.contains(y) || other.contains(y)
        })
    }

    /// Re-tabulates `f` on the core `[lo, hi]` and on one period of each tail.
    /// `f` must be periodic with period `period` beyond `[lo, hi]`.
    fn rebuild(&self, lo: i64, hi: i64, period: u64, f: impl Fn(i64) -> bool) -> Result<Self> {
        let window = Window::new(lo, hi)?;
        if window.len() > MAX_TABLE || period > MAX_TABLE {
            return Err(Error::InvalidSet("set description is too large".into()));
        }
        let core = window.iter().map(&f).collect();
        let m = period as i64;
        let above = add(hi, 1)?;
        let below = sub(lo, m)?;
        let mut pos = vec![false; period as usize];
        let mut neg = vec![false; period as usize];
        for k in 0..m {
            let x = add(above, k)?;
            pos[residue(x, period)] = f(x);
            let y = add(below, k)?;
            neg[residue(y, period)] = f(y);
        }
        Ok(Self {
            period,
            lo,
            hi,
            core,
            pos,
            neg,
        })
    }
}

impl Membership for EventuallyPeriodicSet {
    fn contains(&self, x: i64) -> bool {
        EventuallyPeriodicSet::contains(self, x)
    }
}

impl IntegerSet for EventuallyPeriodicSet {
    fn contains(&self, n: &BigInt) -> bool {
        match n.to_i64() {
            Some(x) => EventuallyPeriodicSet::contains(self, x),
            None => {
                let r = n.mod_floor(&BigInt::from(self.period)).to_usize().expect("residue");
                if n.is_negative() {
                    self.neg[r]
                } else {
                    self.pos[r]
                }
            }
        }
    }

    fn finite_members(&self) -> Option<Vec<BigInt>> {
        self.is_finite()
            .then(|| self.core_members().into_iter().map(BigInt::from).collect())
    }
}

/// `W + C`, exactly.
pub fn sumset(w: &FiniteSet, c: &EventuallyPeriodicSet) -> Result<EventuallyPeriodicSet> {
    let lo = add(c.lo, w.min())?;
    let hi = add(c.hi, w.max())?;
    let window = Window::new(lo, hi)?;
    if window.len() > MAX_TABLE {
        return Err(Error::InvalidSet("sumset core is too large".into()));
    }
    let core = window
        .iter()
        .map(|x| w.elements().iter().any(|&e| c.contains(x - e)))
        .collect();
    let m = c.period;
    let tail = |table: &[bool]| -> Vec<bool> {
        (0..m)
            .map(|r| {
                w.elements()
                    .iter()
                    .any(|&e| table[residue(r as i64 - e.rem_euclid(m as i64), m)])
            })
            .collect()
    };
    Ok(EventuallyPeriodicSet {
        period: m,
        lo,
        hi,
        core,
        pos: tail(&c.pos),
        neg: tail(&c.neg),
    })
}

/// Whether `W + C = Z`.
pub fn is_complement(w: &FiniteSet, c: &EventuallyPeriodicSet) -> Result<bool> {
    let s = sumset(w, c)?;
    Ok(s.core.iter().all(|&b| b) && s.pos.iter().all(|&b| b) && s.neg.iter().all(|&b| b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum AsymptoticVerdict {
    /// `Z ∖ (W + C)` is finite and equal to `exceptional`.
    Asymptotic { exceptional: Vec<i64> },
    /// Every integer `≡ residue (mod modulus)` in the given tail is missed.
    NotAsymptotic { tail: Tail, residue: u64, modulus: u64 },
}

impl AsymptoticVerdict {
    pub fn is_asymptotic(&self) -> bool {
        matches!(self, AsymptoticVerdict::Asymptotic { .. })
    }
}

/// Whether `W + C` misses only finitely many integers.
pub fn is_asymptotic_complement(w: &FiniteSet, c: &EventuallyPeriodicSet) -> Result<AsymptoticVerdict> {
    let s = sumset(w, c)?;
    for (tail, table) in [(Tail::Negative, &s.neg), (Tail::Positive, &s.pos)] {
        if let Some(r) = table.iter().position(|&b| !b) {
            return Ok(AsymptoticVerdict::NotAsymptotic {
                tail,
                residue: r as u64,
                modulus: s.period,
            });
        }
    }
    let exceptional = s
        .core
        .iter()
        .enumerate()
        .filter(|(_, &b)| !b)
        .map(|(i, _)| s.lo + i as i64)
        .collect();
    Ok(AsymptoticVerdict::Asymptotic { exceptional })
}

/// Evidence that removing `element` from `C` uncovers `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub element: i64,
    pub target: i64,
}

impl MinimalityCertificate {
    /// Checks `target - element ∈ W` and that no other `c₂ ∈ C` in
    /// `[target - w'', target - w']` has `target - c₂ ∈ W`.
    pub fn verify<M: Membership>(&self, w: &FiniteSet, c: &M) -> bool {
        let Some(diff) = self.target.checked_sub(self.element) else {
            return false;
        };
        if !w.contains(diff) || !c.contains(self.element) {
            return false;
        }
        let (Some(from), Some(to)) = (self.target.checked_sub(w.max()), self.target.checked_sub(w.min())) else {
            return false;
        };
        (from..=to)
            .filter(|&c2| c2 != self.element)
            .all(|c2| !w.contains(self.target - c2) || !c.contains(c2))
    }
}

/// The first `n ∈ c + W` that has no representation `w + c₂` with
/// `c₂ ∈ C ∖ {c}`, if any.
fn uncovered_target<M: Membership>(w: &FiniteSet, c: &M, element: i64) -> Result<Option<i64>> {
    for &w1 in w.elements() {
        let n = add(element, w1)?;
        let mut covered = false;
        for &w2 in w.elements() {
            let c2 = sub(n, w2)?;
            if c2 != element && c.contains(c2) {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Whether `C ∖ {element}` still covers every `n ∈ element + W`. When `C` is
/// a complement, these are the only integers that can lose coverage.
pub fn removable<M: Membership>(w: &FiniteSet, c: &M, element: i64) -> Result<bool> {
    if !c.contains(element) {
        return Err(Error::NotMember(element));
    }
    Ok(uncovered_target(w, c, element)?.is_none())
}

/// Certificate that `element` cannot be removed, or `None` if it can.
pub fn non_removal_certificate<M: Membership>(
    w: &FiniteSet,
    c: &M,
    element: i64,
) -> Result<Option<MinimalityCertificate>> {
    if !c.contains(element) {
        return Err(Error::NotMember(element));
    }
    Ok(uncovered_target(w, c, element)?.map(|target| MinimalityCertificate { element, target }))
}

/// Outcome of a minimality check over a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowMinimality {
    pub minimal: bool,
    pub window: Window,
    pub certificates: Vec<MinimalityCertificate>,
    pub removable: Vec<i64>,
}

/// Whether no element of `C` inside `window` can be removed.
pub fn is_minimal_on_window<M: Membership>(w: &FiniteSet, c: &M, window: Window) -> Result<WindowMinimality> {
    let mut certificates = Vec::new();
    let mut removable_elements = Vec::new();
    for x in window.iter().filter(|&x| c.contains(x)) {
        match non_removal_certificate(w, c, x)? {
            Some(cert) => certificates.push(cert),
            None => removable_elements.push(x),
        }
    }
    Ok(WindowMinimality {
        minimal: removable_elements.is_empty(),
        window,
        certificates,
        removable: removable_elements,
    })
}

/// `0, -1, 1, -2, 2, …`: ascending absolute value, negative first.
pub fn pruning_order() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|k: i64| [-k, k]))
}

/// State of the removal chain after every candidate with `|c| ≤ radius` has
/// been processed.
///
/// Decisions are never revisited, so membership on `[-radius, radius]` equals
/// the membership of the limit set. Outside that range the set still agrees
/// with the original `C`; the whole view is itself a complement to `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedView {
    original: EventuallyPeriodicSet,
    radius: i64,
    table: Vec<bool>,
    window: Window,
    certificates: Vec<MinimalityCertificate>,
}

impl Membership for PrunedView {
    fn contains(&self, x: i64) -> bool {
        if x.unsigned_abs() <= self.radius as u64 {
            self.table[(x + self.radius) as usize]
        } else {
            self.original.contains(x)
        }
    }
}

impl PrunedView {
    /// Range on which the view equals the limit set.
    pub fn exact_region(&self) -> Window {
        Window {
            lo: -self.radius,
            hi: self.radius,
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Members inside the core window.
    pub fn members(&self) -> Vec<i64> {
        self.window.iter().filter(|&x| Membership::contains(self, x)).collect()
    }

    /// One certificate per retained member of the core window.
    pub fn certificates(&self) -> &[MinimalityCertificate] {
        &self.certificates
    }
}

/// Runs the removal chain over [`pruning_order`] until every element of
/// `window`, widened by twice the diameter of `W`, has been decided.
pub fn prune_minimal(w: &FiniteSet, c: &EventuallyPeriodicSet, window: Window) -> Result<PrunedView> {
    if !is_complement(w, c)? {
        return Err(Error::NotComplement);
    }
    let margin = w
        .diameter()
        .checked_mul(2)
        .ok_or_else(|| Error::Overflow("margin".into()))?;
    let wide = window.enlarged(margin)?;
    let radius = wide.lo.unsigned_abs().max(wide.hi.unsigned_abs());
    if 2 * radius + 1 > MAX_TABLE {
        return Err(Error::InvalidSet("pruning region is too large".into()));
    }
    let radius = radius as i64;

    let mut view = PrunedView {
        original: c.clone(),
        radius,
        table: (-radius..=radius).map(|x| c.contains(x)).collect(),
        window,
        certificates: Vec::new(),
    };
    for x in pruning_order().take((2 * radius + 1) as usize) {
        if !Membership::contains(&view, x) {
            continue;
        }
        if removable(w, &view, x)? {
            view.table[(x + radius) as usize] = false;
        }
    }

    let mut certificates = Vec::new();
    for x in window.iter().filter(|&x| Membership::contains(&view, x)) {
        let cert = non_removal_certificate(w, &view, x)?.expect("retained elements are not removable in the limit set");
        certificates.push(cert);
    }
    view.certificates = certificates;
    Ok(view)
}
