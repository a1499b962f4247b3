//! Finitely presented subsets of a tail-space universe.
//!
//! A universe is a finite set of points together with finitely many tails,
//! each tail a copy of the naturals. A subset is stored as its finite part
//! plus, per tail, an eventual membership flag and a finite set of indices
//! where membership differs from that flag. The representation is unique,
//! so derived equality is extensional equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub String);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TailId(pub String);

impl From<&str> for PointId {
    fn from(s: &str) -> Self {
        PointId(s.to_string())
    }
}

impl From<&str> for TailId {
    fn from(s: &str) -> Self {
        TailId(s.to_string())
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for TailId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A point of a tail space: a finite point, or the `index`-th point of a tail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Point(PointId),
    Tail { tail: TailId, index: u64 },
}

impl PointRef {
    pub fn point(id: &str) -> Self {
        PointRef::Point(PointId::from(id))
    }

    pub fn tail(tail: &str, index: u64) -> Self {
        PointRef::Tail {
            tail: TailId::from(tail),
            index,
        }
    }

    pub fn as_point(&self) -> Option<&PointId> {
        match self {
            PointRef::Point(p) => Some(p),
            PointRef::Tail { .. } => None,
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Point(p) => write!(f, "{p}"),
            PointRef::Tail { tail, index } => write!(f, "{tail}[{index}]"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    pub points: BTreeSet<PointId>,
    pub tails: BTreeSet<TailId>,
}

impl Universe {
    pub fn check_point(&self, p: &PointRef) -> Result<()> {
        match p {
            PointRef::Point(x) if !self.points.contains(x) => Err(Error::UnknownPoint(x.0.clone())),
            PointRef::Tail { tail, .. } if !self.tails.contains(tail) => {
                Err(Error::UnknownTail(tail.0.clone()))
            }
            _ => Ok(()),
        }
    }
}

/// Membership pattern of a subset on one tail.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailTrace {
    pub eventual: bool,
    #[serde(default)]
    pub flips: BTreeSet<u64>,
}

impl TailTrace {
    pub fn all() -> Self {
        TailTrace {
            eventual: true,
            flips: BTreeSet::new(),
        }
    }

    pub fn none() -> Self {
        TailTrace::default()
    }

    /// Cofinite segment `{m : m >= k}`.
    pub fn from_index(k: u64) -> Self {
        TailTrace {
            eventual: true,
            flips: (0..k).collect(),
        }
    }

    pub fn contains(&self, m: u64) -> bool {
        self.eventual ^ self.flips.contains(&m)
    }

    fn combine(&self, other: &TailTrace, op: impl Fn(bool, bool) -> bool) -> TailTrace {
        let eventual = op(self.eventual, other.eventual);
        let flips = self
            .flips
            .union(&other.flips)
            .copied()
            .filter(|&m| op(self.contains(m), other.contains(m)) != eventual)
            .collect();
        TailTrace { eventual, flips }
    }

    pub fn complement(&self) -> TailTrace {
        TailTrace {
            eventual: !self.eventual,
            flips: self.flips.clone(),
        }
    }

    /// Indices outside the trace, when there are finitely many.
    pub fn missing(&self) -> Option<&BTreeSet<u64>> {
        self.eventual.then_some(&self.flips)
    }
}

/// A finitely presented subset of a tail-space universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvSet {
    #[serde(default)]
    pub finite: BTreeSet<PointId>,
    #[serde(default)]
    pub tails: BTreeMap<TailId, TailTrace>,
}

impl EvSet {
    pub fn empty(u: &Universe) -> Self {
        EvSet {
            finite: BTreeSet::new(),
            tails: u.tails.iter().map(|t| (t.clone(), TailTrace::none())).collect(),
        }
    }

    pub fn full(u: &Universe) -> Self {
        EvSet {
            finite: u.points.clone(),
            tails: u.tails.iter().map(|t| (t.clone(), TailTrace::all())).collect(),
        }
    }

    /// The finite set consisting of the given points.
    pub fn from_points<'a>(u: &Universe, points: impl IntoIterator<Item = &'a PointRef>) -> Self {
        let mut s = EvSet::empty(u);
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, p: &PointRef) {
        self.set_member(p, true);
    }

    pub fn remove(&mut self, p: &PointRef) {
        self.set_member(p, false);
    }

    fn set_member(&mut self, p: &PointRef, member: bool) {
        match p {
            PointRef::Point(x) => {
                if member {
                    self.finite.insert(x.clone());
                } else {
                    self.finite.remove(x);
                }
            }
            PointRef::Tail { tail, index } => {
                let trace = self.tails.entry(tail.clone()).or_default();
                if trace.contains(*index) != member {
                    if trace.flips.contains(index) {
                        trace.flips.remove(index);
                    } else {
                        trace.flips.insert(*index);
                    }
                }
            }
        }
    }

    /// Membership without universe checks; tails absent from the presentation are empty.
    pub fn contains(&self, p: &PointRef) -> bool {
        match p {
            PointRef::Point(x) => self.finite.contains(x),
            PointRef::Tail { tail, index } => {
                self.tails.get(tail).is_some_and(|tr| tr.contains(*index))
            }
        }
    }

    pub fn member(&self, u: &Universe, p: &PointRef) -> Result<bool> {
        u.check_point(p)?;
        Ok(self.contains(p))
    }

    pub fn trace(&self, t: &TailId) -> Result<&TailTrace> {
        self.tails.get(t).ok_or_else(|| Error::UnknownTail(t.0.clone()))
    }

    pub fn is_cofinite_on(&self, t: &TailId) -> Result<bool> {
        Ok(self.trace(t)?.eventual)
    }

    /// Checks that this set is presented over exactly the universe `u`.
    pub fn check(&self, u: &Universe) -> Result<()> {
        if let Some(x) = self.finite.iter().find(|x| !u.points.contains(*x)) {
            return Err(Error::UniverseMismatch(format!("point `{x}` is not in the universe")));
        }
        let keys: BTreeSet<&TailId> = self.tails.keys().collect();
        let expected: BTreeSet<&TailId> = u.tails.iter().collect();
        if keys != expected {
            return Err(Error::UniverseMismatch(
                "tail traces do not match the universe's tails".into(),
            ));
        }
        Ok(())
    }

    fn combine(&self, other: &EvSet, u: &Universe, op: impl Fn(bool, bool) -> bool) -> Result<EvSet> {
        self.check(u)?;
        other.check(u)?;
        let finite = u
            .points
            .iter()
            .filter(|x| op(self.finite.contains(*x), other.finite.contains(*x)))
            .cloned()
            .collect();
        let tails = u
            .tails
            .iter()
            .map(|t| (t.clone(), self.tails[t].combine(&other.tails[t], &op)))
            .collect();
        Ok(EvSet { finite, tails })
    }

    pub fn union(&self, other: &EvSet, u: &Universe) -> Result<EvSet> {
        self.combine(other, u, |a, b| a || b)
    }

    pub fn intersect(&self, other: &EvSet, u: &Universe) -> Result<EvSet> {
        self.combine(other, u, |a, b| a && b)
    }

    pub fn difference(&self, other: &EvSet, u: &Universe) -> Result<EvSet> {
        self.combine(other, u, |a, b| a && !b)
    }

    pub fn complement(&self, u: &Universe) -> Result<EvSet> {
        self.check(u)?;
        Ok(EvSet {
            finite: u.points.difference(&self.finite).cloned().collect(),
            tails: self.tails.iter().map(|(t, tr)| (t.clone(), tr.complement())).collect(),
        })
    }

    pub fn is_subset(&self, other: &EvSet, u: &Universe) -> Result<bool> {
        Ok(self.difference(other, u)?.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.tails.values().all(|tr| !tr.eventual && tr.flips.is_empty())
    }

    /// Largest flip index plus one, over all tails.
    pub fn flip_bound(&self) -> u64 {
        self.tails
            .values()
            .filter_map(|tr| tr.flips.iter().next_back())
            .map(|m| m + 1)
            .max()
            .unwrap_or(0)
    }
}
