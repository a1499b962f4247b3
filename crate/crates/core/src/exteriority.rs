//! Externologies on tail spaces.
//!
//! Every externology handled here has the form `ε(L, D)`: the open sets
//! containing `L` and cofinite on each tail of `D`. The canonical
//! presentation saturates `L` and adds to `D` every tail captured by a
//! point of `L`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::FPMap;
use crate::sequences::{self, FPSeq, Thread};
use crate::sets::{EvSet, PointId, PointRef, TailId, TailTrace};
use crate::spaces::SpacePres;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Externology {
    #[serde(rename = "L", default)]
    pub l: BTreeSet<PointId>,
    #[serde(rename = "D", default)]
    pub d: BTreeSet<TailId>,
}

impl Externology {
    pub fn new<'a, 'b>(l: impl IntoIterator<Item = &'a str>, d: impl IntoIterator<Item = &'b str>) -> Self {
        Externology {
            l: l.into_iter().map(PointId::from).collect(),
            d: d.into_iter().map(TailId::from).collect(),
        }
    }

    pub fn check(&self, space: &SpacePres) -> Result<()> {
        if let Some(x) = self.l.iter().find(|x| !space.points().contains(*x)) {
            return Err(Error::UnknownPoint(x.0.clone()));
        }
        if let Some(t) = self.d.iter().find(|t| !space.tails().contains(*t)) {
            return Err(Error::UnknownTail(t.0.clone()));
        }
        Ok(())
    }

    pub fn is_canonical(&self, space: &SpacePres) -> bool {
        canonicalize(space, self).map(|c| &c == self).unwrap_or(false)
    }
}

/// `∪_{x ∈ L} U_x`.
pub fn saturate(space: &SpacePres, l: &BTreeSet<PointId>) -> BTreeSet<PointId> {
    l.iter().flat_map(|x| space.min_open(x).iter().cloned()).collect()
}

pub fn canonicalize(space: &SpacePres, e: &Externology) -> Result<Externology> {
    e.check(space)?;
    let l = saturate(space, &e.l);
    let mut d = e.d.clone();
    for x in &l {
        d.extend(space.captured_tails(x).cloned());
    }
    Ok(Externology { l, d })
}

/// Membership in `ε(L, D)`.
pub fn is_member(space: &SpacePres, e: &Externology, s: &EvSet) -> Result<bool> {
    e.check(space)?;
    Ok(space.is_open(s)?
        && e.l.iter().all(|x| s.finite.contains(x))
        && e.d.iter().all(|t| s.tails[t].eventual))
}

/// `E*_k = sat(L) ∪ {t[m] : m ≥ k, t ∈ D}` for the canonical form of `e`.
pub fn base_member(space: &SpacePres, e: &Externology, k: u64) -> EvSet {
    let c = canonicalize(space, e).expect("externology over this space");
    let mut s = EvSet::empty(space.universe());
    s.finite = c.l;
    for t in &c.d {
        s.tails.insert(t.clone(), TailTrace::from_index(k));
    }
    s
}

/// `ε_cc`: the open sets whose complement is compact. Those are exactly
/// the opens that are cofinite on every tail converging nowhere.
pub fn cocompact_externology(space: &SpacePres) -> Externology {
    Externology {
        l: BTreeSet::new(),
        d: space.tails().iter().filter(|t| space.attach(t).is_empty()).cloned().collect(),
    }
}

/// Eventually inside every member of `ε(L, D)`: each thread must stay in
/// `sat(L)` or walk along a tail of the canonical `D`.
pub fn is_exterior_seq_in(space: &SpacePres, e: &Externology, s: &FPSeq) -> Result<bool> {
    s.validate(space)?;
    let c = canonicalize(space, e)?;
    Ok(s.threads.iter().all(|th| match th {
        Thread::Const(PointRef::Point(p)) => c.l.contains(p),
        Thread::Const(PointRef::Tail { .. }) => false,
        Thread::Walk { tail, .. } => c.d.contains(tail),
    }))
}

/// Membership recovered from a decider alone. A filter `ε(L', D')`
/// contains `X ∖ cl{x}` exactly when `x ∉ L'`, and `X ∖ cl(t)` exactly
/// when `t ∉ D'`; the result is canonicalized.
pub fn present_filter(space: &SpacePres, member: impl Fn(&EvSet) -> bool) -> Externology {
    let u = space.universe();
    let outside = |c: EvSet| c.complement(u).expect("closure lies in this universe");
    let l = space.points().iter().filter(|x| !member(&outside(space.point_closure(x)))).cloned().collect();
    let d = space.tails().iter().filter(|t| !member(&outside(space.tail_closure(t)))).cloned().collect();
    canonicalize(space, &Externology { l, d }).expect("ids come from the space")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtSpace {
    space: SpacePres,
    ext: Externology,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EReport {
    pub e_sequential: bool,
    pub e_first_countable: bool,
}

impl ExtSpace {
    pub fn new(space: SpacePres, ext: Externology) -> Result<Self> {
        let ext = canonicalize(&space, &ext)?;
        Ok(ExtSpace { space, ext })
    }

    pub fn cocompact(space: SpacePres) -> Self {
        let ext = cocompact_externology(&space);
        ExtSpace::new(space, ext).expect("cocompact externology is over its space")
    }

    pub fn space(&self) -> &SpacePres {
        &self.space
    }

    pub fn ext(&self) -> &Externology {
        &self.ext
    }

    pub fn into_parts(self) -> (SpacePres, Externology) {
        (self.space, self.ext)
    }

    pub fn is_e_open(&self, s: &EvSet) -> Result<bool> {
        is_member(&self.space, &self.ext, s)
    }

    /// `ℓ(X)`, the intersection of all exterior-open sets.
    pub fn limit_set(&self) -> BTreeSet<PointId> {
        self.ext.l.clone()
    }

    pub fn exterior_base(&self, k: u64) -> EvSet {
        base_member(&self.space, &self.ext, k)
    }

    pub fn is_exterior_seq(&self, s: &FPSeq) -> Result<bool> {
        is_exterior_seq_in(&self.space, &self.ext, s)
    }

    /// The generic sequences that are exterior: constants at points of
    /// `ℓ(X)` and identity walks along tails of `D`.
    pub fn generic_exterior_sequences(&self) -> Vec<FPSeq> {
        self.ext
            .l
            .iter()
            .map(|p| FPSeq::constant(PointRef::Point(p.clone())))
            .chain(self.ext.d.iter().map(|t| FPSeq::walk(&t.0, 1, 0)))
            .collect()
    }

    /// Sequentially open, and every exterior sequence is eventually in `s`.
    /// An exterior sequence not eventually in `s` has a generic exterior
    /// subsequence outside `s`, so only those are tested.
    pub fn is_sequentially_e_open(&self, s: &EvSet) -> Result<bool> {
        Ok(self.space.is_sequentially_open(s)?
            && self.generic_exterior_sequences().iter().all(|seq| seq.is_eventually_in(s)))
    }

    /// `σ`: replaces the externology by the sequentially e-open sets.
    pub fn coreflect(&self) -> ExtSpace {
        let ext = present_filter(&self.space, |s| self.is_sequentially_e_open(s).unwrap_or(false));
        ExtSpace { space: self.space.clone(), ext }
    }

    pub fn e_report(&self) -> EReport {
        EReport {
            e_sequential: self.coreflect() == *self,
            e_first_countable: true,
        }
    }
}

/// Continuous, and the preimage of every `E*_k(Y)` is exterior-open in `X`.
pub fn is_exterior_map(f: &FPMap, x: &ExtSpace, y: &ExtSpace) -> bool {
    f.validate(&x.space, &y.space).is_ok()
        && f.is_continuous(&x.space, &y.space)
        && f.pulls_back_base(&x.space, &y.space, &x.ext, &y.ext)
}

/// Sequentially continuous and maps exterior sequences to exterior sequences.
pub fn is_e_sequential_map(f: &FPMap, x: &ExtSpace, y: &ExtSpace) -> bool {
    f.validate(&x.space, &y.space).is_ok()
        && f.is_seq_continuous(&x.space, &y.space)
        && x.generic_exterior_sequences().iter().all(|s| y.is_exterior_seq(&f.after_seq(s)).unwrap_or(false))
}

/// Sampled limits of exterior sequences: every finite point that is a limit
/// of some exterior sequence. Points of `ℓ(X)` always are.
pub fn exterior_limits(e: &ExtSpace) -> BTreeSet<PointRef> {
    e.generic_exterior_sequences()
        .iter()
        .flat_map(|s| sequences::limit_set(&e.space, s).unwrap_or_default())
        .collect()
}
