//! Finitely presented sequences and their classification.
//!
//! An [`FPSeq`] is a finite prefix followed by a round robin over a fixed
//! list of threads: position `|prefix| + T*q + r` holds thread `r`
//! evaluated at `q`. A thread is either constant or an injective affine
//! walk `q ↦ t[a*q + b]` along one tail. Every thread is visited
//! infinitely often, so the prefix never matters for limit behaviour.
//!
//! Subsequences are taken along [`AffineInj`], the affine part of the
//! monoid of monotone injections `ℕ → ℕ`. Selecting a single thread is
//! affine (`n ↦ T*n + |prefix| + r`), and every subsequence of a
//! presented sequence has a further subsequence that stays on one thread,
//! which is why the affine part suffices for the existence questions
//! asked here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exteriority;
use crate::sets::{EvSet, PointRef, TailId};
use crate::spaces::SpacePres;

/// `n ↦ a*n + b` with `a >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineInj {
    pub a: u64,
    pub b: u64,
}

impl AffineInj {
    pub const IDENTITY: AffineInj = AffineInj { a: 1, b: 0 };

    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::NotInjective(a));
        }
        Ok(AffineInj { a, b })
    }

    pub fn apply(&self, n: u64) -> u64 {
        self.a * n + self.b
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &AffineInj) -> AffineInj {
        AffineInj {
            a: self.a * other.a,
            b: self.a * other.b + self.b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Thread {
    Const(PointRef),
    Walk { tail: TailId, a: u64, b: u64 },
}

impl Thread {
    pub fn walk(tail: &str, a: u64, b: u64) -> Self {
        Thread::Walk { tail: TailId::from(tail), a, b }
    }

    pub fn at(&self, q: u64) -> PointRef {
        match self {
            Thread::Const(p) => p.clone(),
            Thread::Walk { tail, a, b } => PointRef::Tail { tail: tail.clone(), index: a * q + b },
        }
    }

    /// The thread evaluated along `q ↦ k*q + c`.
    fn reparam(&self, k: u64, c: u64) -> Thread {
        match self {
            Thread::Const(p) => Thread::Const(p.clone()),
            Thread::Walk { tail, a, b } => Thread::Walk {
                tail: tail.clone(),
                a: a * k,
                b: a * c + b,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FPSeq {
    #[serde(default)]
    pub prefix: Vec<PointRef>,
    pub threads: Vec<Thread>,
}

impl FPSeq {
    pub fn constant(p: PointRef) -> Self {
        FPSeq { prefix: vec![], threads: vec![Thread::Const(p)] }
    }

    pub fn walk(tail: &str, a: u64, b: u64) -> Self {
        FPSeq { prefix: vec![], threads: vec![Thread::walk(tail, a, b)] }
    }

    pub fn interleave(threads: Vec<Thread>) -> Self {
        FPSeq { prefix: vec![], threads }
    }

    pub fn validate(&self, space: &SpacePres) -> Result<()> {
        if self.threads.is_empty() {
            return Err(Error::NoThreads);
        }
        for p in &self.prefix {
            space.check_point(p)?;
        }
        for th in &self.threads {
            match th {
                Thread::Const(p) => space.check_point(p)?,
                Thread::Walk { tail, a, .. } => {
                    if *a == 0 {
                        return Err(Error::NotInjective(0));
                    }
                    if !space.tails().contains(tail) {
                        return Err(Error::UnknownTail(tail.0.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn period(&self) -> u64 {
        self.threads.len() as u64
    }

    pub fn at(&self, n: u64) -> PointRef {
        let p = self.prefix.len() as u64;
        if n < p {
            return self.prefix[n as usize].clone();
        }
        let t = self.period();
        let i = n - p;
        self.threads[(i % t) as usize].at(i / t)
    }

    /// Moves the next `e` values into the prefix.
    pub fn advance(&self, e: u64) -> FPSeq {
        let p = self.prefix.len() as u64;
        let t = self.period();
        let mut prefix = self.prefix.clone();
        prefix.extend((p..p + e).map(|n| self.at(n)));
        let threads = (0..t)
            .map(|r| {
                let i = e + r;
                self.threads[(i % t) as usize].reparam(1, i / t)
            })
            .collect();
        FPSeq { prefix, threads }
    }

    /// Same sequence presented with `k` times as many threads.
    pub fn rethread(&self, k: u64) -> FPSeq {
        let t = self.period();
        let threads = (0..k * t)
            .map(|i| self.threads[(i % t) as usize].reparam(k, i / t))
            .collect();
        FPSeq { prefix: self.prefix.clone(), threads }
    }

    /// `s ∘ u`, re-threaded along the residue cycle of `u` modulo the period.
    pub fn subseq(&self, u: &AffineInj) -> FPSeq {
        let p = self.prefix.len() as u64;
        let t = self.period();
        // first n with u(n) >= p
        let n0 = if u.b >= p { 0 } else { (p - u.b).div_ceil(u.a) };
        let prefix = (0..n0).map(|n| self.at(u.apply(n))).collect();
        let c = u.apply(n0) - p;
        let threads = (0..t)
            .map(|r| {
                let i = u.a * r + c;
                self.threads[(i % t) as usize].reparam(u.a, i / t)
            })
            .collect();
        FPSeq { prefix, threads }
    }

    /// The affine injection selecting thread `r` and nothing else.
    pub fn thread_selector(&self, r: usize) -> AffineInj {
        AffineInj { a: self.period(), b: self.prefix.len() as u64 + r as u64 }
    }

    /// `s⁻¹(S)` is cofinite.
    pub fn is_eventually_in(&self, s: &EvSet) -> bool {
        self.threads.iter().all(|th| match th {
            Thread::Const(p) => s.contains(p),
            Thread::Walk { tail, .. } => s.tails.get(tail).is_some_and(|tr| tr.eventual),
        })
    }

    /// Brings both sequences to a common prefix length and period.
    pub fn align(&self, other: &FPSeq) -> (FPSeq, FPSeq) {
        let n = self.prefix.len().max(other.prefix.len()) as u64;
        let a = self.advance(n - self.prefix.len() as u64);
        let b = other.advance(n - other.prefix.len() as u64);
        let l = lcm(a.period(), b.period());
        (a.rethread(l / a.period()), b.rethread(l / b.period()))
    }

    /// Extensional equality.
    pub fn same_as(&self, other: &FPSeq) -> bool {
        let (a, b) = self.align(other);
        a.prefix == b.prefix
            && a.threads.iter().zip(&b.threads).all(|(x, y)| match (x, y) {
                (Thread::Const(p), Thread::Const(q)) => p == q,
                (Thread::Walk { .. }, Thread::Walk { .. }) => x == y,
                _ => false,
            })
    }

    /// Smallest index where the two sequences differ. Distinct threads
    /// differ at their first or second value, so one extra round suffices.
    pub fn first_difference(&self, other: &FPSeq) -> Option<u64> {
        let (a, b) = self.align(other);
        let p = a.prefix.len() as u64;
        let t = a.period();
        (0..p + 2 * t).find(|&n| a.at(n) != b.at(n))
    }

    pub fn max_tail_index(&self) -> u64 {
        let pre = self.prefix.iter().filter_map(|p| match p {
            PointRef::Tail { index, .. } => Some(*index),
            _ => None,
        });
        let th = self.threads.iter().filter_map(|t| match t {
            Thread::Const(PointRef::Tail { index, .. }) => Some(*index),
            Thread::Walk { b, .. } => Some(*b),
            _ => None,
        });
        pre.chain(th).max().unwrap_or(0)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Limits of one thread, as a set of points.
pub fn thread_limits(space: &SpacePres, th: &Thread) -> BTreeSet<PointRef> {
    match th {
        Thread::Const(PointRef::Point(y)) => space
            .points()
            .iter()
            .filter(|x| space.min_open(x).contains(y))
            .map(|x| PointRef::Point(x.clone()))
            .collect(),
        Thread::Const(p @ PointRef::Tail { .. }) => [p.clone()].into(),
        Thread::Walk { tail, .. } => space
            .points()
            .iter()
            .filter(|x| space.captures(x, tail))
            .map(|x| PointRef::Point(x.clone()))
            .collect(),
    }
}

/// All limits of `s`; a point is a limit iff every thread converges to it.
pub fn limit_set(space: &SpacePres, s: &FPSeq) -> Result<BTreeSet<PointRef>> {
    s.validate(space)?;
    let mut iter = s.threads.iter();
    let first = thread_limits(space, iter.next().expect("validated"));
    Ok(iter.fold(first, |acc, th| acc.intersection(&thread_limits(space, th)).cloned().collect()))
}

/// The single-thread sequences every sequence has a subsequence of, up to
/// reindexing: constants at each point and the identity walk on each tail.
pub fn generic_sequences(space: &SpacePres) -> Vec<FPSeq> {
    let mut out: Vec<FPSeq> = space
        .points()
        .iter()
        .map(|x| FPSeq::constant(PointRef::Point(x.clone())))
        .collect();
    for t in space.tails() {
        out.push(FPSeq::constant(PointRef::Tail { tail: t.clone(), index: 0 }));
        out.push(FPSeq::walk(&t.0, 1, 0));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeqClass {
    pub convergent: bool,
    pub limit_set: BTreeSet<PointRef>,
    pub proper: bool,
    pub no_conv_subseq: bool,
}

/// Proper: eventually inside every member of the cocompact externology.
pub fn is_proper(space: &SpacePres, s: &FPSeq) -> Result<bool> {
    let cc = exteriority::cocompact_externology(space);
    exteriority::is_exterior_seq_in(space, &cc, s)
}

/// No subsequence converges. Checked by selecting each thread on its own:
/// a subsequence lives infinitely often on some thread, and the
/// subsequences of a single thread converge exactly when the thread does.
pub fn has_no_convergent_subsequence(space: &SpacePres, s: &FPSeq) -> Result<bool> {
    s.validate(space)?;
    for r in 0..s.threads.len() {
        let sub = s.subseq(&s.thread_selector(r));
        if !limit_set(space, &sub)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn classify(space: &SpacePres, s: &FPSeq) -> Result<SeqClass> {
    let limits = limit_set(space, s)?;
    Ok(SeqClass {
        convergent: !limits.is_empty(),
        limit_set: limits,
        proper: is_proper(space, s)?,
        no_conv_subseq: has_no_convergent_subsequence(space, s)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ConvergenceIdeal {
    Empty,
    Full,
    Partial { witness: AffineInj, non_witness: AffineInj },
}

/// The affine part of `{u : s∘u converges}`.
pub fn convergence_ideal(space: &SpacePres, s: &FPSeq) -> Result<ConvergenceIdeal> {
    if !limit_set(space, s)?.is_empty() {
        return Ok(ConvergenceIdeal::Full);
    }
    let mut good = None;
    let mut bad = None;
    for r in 0..s.threads.len() {
        let u = s.thread_selector(r);
        if limit_set(space, &s.subseq(&u))?.is_empty() {
            bad.get_or_insert(u);
        } else {
            good.get_or_insert(u);
        }
    }
    Ok(match good {
        None => ConvergenceIdeal::Empty,
        Some(witness) => ConvergenceIdeal::Partial {
            witness,
            // every thread converges but to no common limit: s itself is the non-witness
            non_witness: bad.unwrap_or(AffineInj::IDENTITY),
        },
    })
}
