//! Tail-space presentations and their topological deciders.
//!
//! A tail space has a finite preordered part `P`, where each point `x`
//! carries its minimal open set `U_x`, and finitely many tails of isolated
//! points `t[0], t[1], ...`. Each tail has an attach set `A(t) ⊆ P`. The
//! basic neighbourhoods of `x ∈ P` are `U_x` together with `t[m], m >= k`
//! for every tail whose attach set meets `U_x`. We say `x` *captures* `t`
//! in that case.
//!
//! Every space in the class is first countable, hence sequential, and
//! second countable, so compactness and countable compactness coincide on
//! all of its subspaces.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences;
use crate::sets::{EvSet, PointId, PointRef, TailId, TailTrace, Universe};

/// Unvalidated presentation as it appears on the wire.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RawSpace {
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub min_open: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub tails: Vec<String>,
    #[serde(default)]
    pub attach: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacePres {
    universe: Universe,
    min_open: BTreeMap<PointId, BTreeSet<PointId>>,
    attach: BTreeMap<TailId, BTreeSet<PointId>>,
}

impl SpacePres {
    /// Validates a raw presentation. A point without a `minOpen` entry gets `{x}`.
    pub fn new(raw: &RawSpace) -> Result<Self> {
        let points: BTreeSet<PointId> = raw.points.iter().map(|s| PointId(s.clone())).collect();
        let tails: BTreeSet<TailId> = raw.tails.iter().map(|s| TailId(s.clone())).collect();
        if let Some(clash) = raw.points.iter().find(|p| tails.contains(&TailId((*p).clone()))) {
            return Err(Error::NamespaceClash(clash.clone()));
        }
        let point = |s: &String| -> Result<PointId> {
            let id = PointId(s.clone());
            if points.contains(&id) {
                Ok(id)
            } else {
                Err(Error::UnknownPoint(s.clone()))
            }
        };
        let mut min_open = BTreeMap::new();
        for x in &points {
            let set = match raw.min_open.get(&x.0) {
                Some(list) => list.iter().map(&point).collect::<Result<BTreeSet<_>>>()?,
                None => [x.clone()].into(),
            };
            min_open.insert(x.clone(), set);
        }
        if let Some(k) = raw.min_open.keys().find(|k| !points.contains(&PointId((*k).clone()))) {
            return Err(Error::UnknownPoint(k.clone()));
        }
        let mut attach = BTreeMap::new();
        for t in &tails {
            let set = match raw.attach.get(&t.0) {
                Some(list) => list.iter().map(&point).collect::<Result<BTreeSet<_>>>()?,
                None => BTreeSet::new(),
            };
            attach.insert(t.clone(), set);
        }
        if let Some(k) = raw.attach.keys().find(|k| !tails.contains(&TailId((*k).clone()))) {
            return Err(Error::UnknownTail(k.clone()));
        }
        let space = SpacePres {
            universe: Universe { points, tails },
            min_open,
            attach,
        };
        space.check_preorder()?;
        Ok(space)
    }

    fn check_preorder(&self) -> Result<()> {
        for (x, ux) in &self.min_open {
            if !ux.contains(x) {
                return Err(Error::PreorderViolation(format!("`{x}` is not in its own minimal open set")));
            }
            for y in ux {
                if !self.min_open[y].is_subset(ux) {
                    return Err(Error::PreorderViolation(format!(
                        "`{y}` lies in the minimal open set of `{x}` but its own is not contained in it"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_raw(&self) -> RawSpace {
        RawSpace {
            points: self.universe.points.iter().map(|p| p.0.clone()).collect(),
            min_open: self
                .min_open
                .iter()
                .map(|(x, u)| (x.0.clone(), u.iter().map(|y| y.0.clone()).collect()))
                .collect(),
            tails: self.universe.tails.iter().map(|t| t.0.clone()).collect(),
            attach: self
                .attach
                .iter()
                .map(|(t, a)| (t.0.clone(), a.iter().map(|y| y.0.clone()).collect()))
                .collect(),
        }
    }

    pub(crate) fn from_parts(
        min_open: BTreeMap<PointId, BTreeSet<PointId>>,
        attach: BTreeMap<TailId, BTreeSet<PointId>>,
    ) -> Result<Self> {
        let universe = Universe {
            points: min_open.keys().cloned().collect(),
            tails: attach.keys().cloned().collect(),
        };
        let space = SpacePres { universe, min_open, attach };
        space.check_preorder()?;
        Ok(space)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn points(&self) -> &BTreeSet<PointId> {
        &self.universe.points
    }

    pub fn tails(&self) -> &BTreeSet<TailId> {
        &self.universe.tails
    }

    pub fn min_open(&self, x: &PointId) -> &BTreeSet<PointId> {
        &self.min_open[x]
    }

    pub fn attach(&self, t: &TailId) -> &BTreeSet<PointId> {
        &self.attach[t]
    }

    pub fn min_open_map(&self) -> &BTreeMap<PointId, BTreeSet<PointId>> {
        &self.min_open
    }

    pub fn attach_map(&self) -> &BTreeMap<TailId, BTreeSet<PointId>> {
        &self.attach
    }

    /// `A(t) ∩ U_x ≠ ∅`: every neighbourhood of `x` contains a cofinite part of `t`.
    pub fn captures(&self, x: &PointId, t: &TailId) -> bool {
        !self.attach[t].is_disjoint(&self.min_open[x])
    }

    pub fn captured_tails(&self, x: &PointId) -> impl Iterator<Item = &TailId> + '_ {
        let x = x.clone();
        self.universe.tails.iter().filter(move |t| self.captures(&x, t))
    }

    pub fn check_set(&self, s: &EvSet) -> Result<()> {
        s.check(&self.universe)
    }

    pub fn check_point(&self, p: &PointRef) -> Result<()> {
        self.universe.check_point(p)
    }

    pub fn is_open(&self, s: &EvSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(s.finite.iter().all(|x| {
            self.min_open[x].is_subset(&s.finite)
                && self.captured_tails(x).all(|t| s.tails[t].eventual)
        }))
    }

    pub fn is_closed(&self, s: &EvSet) -> Result<bool> {
        self.is_open(&s.complement(&self.universe)?)
    }

    /// Decided through sequences: every generic sequence converging to a
    /// point of `s` must be eventually in `s`. Any sequence converging to
    /// `x` that is not eventually in `s` has a subsequence outside `s` that
    /// is either constant or an injective walk along one tail, and both
    /// shapes are among the generic sequences tested here.
    pub fn is_sequentially_open(&self, s: &EvSet) -> Result<bool> {
        self.check_set(s)?;
        for p in self.point_refs_for_limits(s) {
            for seq in sequences::generic_sequences(self) {
                let limits = sequences::limit_set(self, &seq)?;
                if limits.contains(&p) && !seq.is_eventually_in(s) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn point_refs_for_limits(&self, s: &EvSet) -> Vec<PointRef> {
        // Tail points are isolated: sequences converging to them are eventually constant.
        s.finite.iter().cloned().map(PointRef::Point).collect()
    }

    pub fn is_sequentially_closed(&self, s: &EvSet) -> Result<bool> {
        self.is_sequentially_open(&s.complement(&self.universe)?)
    }

    /// Compact iff every tail on which `s` is cofinite is captured by a finite point of `s`.
    pub fn is_compact(&self, s: &EvSet) -> Result<bool> {
        self.check_set(s)?;
        Ok(self.universe.tails.iter().all(|t| {
            !s.tails[t].eventual || s.finite.iter().any(|x| self.captures(x, t))
        }))
    }

    pub fn set_properties(&self, s: &EvSet) -> Result<SetProperties> {
        let open = self.is_open(s)?;
        let closed = self.is_closed(s)?;
        let compact = self.is_compact(s)?;
        Ok(SetProperties {
            open,
            closed,
            seq_open: self.is_sequentially_open(s)?,
            seq_closed: self.is_sequentially_closed(s)?,
            compact,
            closed_compact: closed && compact,
        })
    }

    pub fn is_t0(&self) -> bool {
        let sets: BTreeSet<&BTreeSet<PointId>> = self.min_open.values().collect();
        sets.len() == self.min_open.len()
    }

    pub fn is_t1(&self) -> bool {
        self.min_open.iter().all(|(x, u)| u.len() == 1 && u.contains(x))
    }

    /// Hausdorff: `P` discrete and no tail accumulates at two distinct points.
    pub fn is_hausdorff(&self) -> bool {
        if !self.is_t1() {
            return false;
        }
        let points: Vec<&PointId> = self.points().iter().collect();
        for (i, x) in points.iter().enumerate() {
            for y in &points[i + 1..] {
                if self.tails().iter().any(|t| self.captures(x, t) && self.captures(y, t)) {
                    return false;
                }
            }
        }
        true
    }

    /// Unique sequential limits, decided over the generic single-thread
    /// sequences: every convergent sequence has such a subsequence, and a
    /// subsequence has at least the limits of the sequence.
    pub fn is_sequentially_hausdorff(&self) -> bool {
        sequences::generic_sequences(self).iter().all(|s| {
            sequences::limit_set(self, s).map(|l| l.len() <= 1).unwrap_or(false)
        })
    }

    /// Every sequence has a convergent subsequence. Decided by asking each
    /// generic sequence (constant or injective walk) for a non-empty
    /// convergence ideal: any sequence has a generic subsequence.
    pub fn is_sequentially_compact(&self) -> bool {
        sequences::generic_sequences(self).iter().all(|s| {
            !matches!(sequences::convergence_ideal(self, s), Ok(sequences::ConvergenceIdeal::Empty))
        })
    }

    pub fn report(&self) -> SpaceReport {
        let seq_hausdorff = self.is_sequentially_hausdorff();
        let sequential = true;
        let countably_compact = self.is_compact(&EvSet::full(&self.universe)).unwrap_or(false);
        SpaceReport {
            t0: self.is_t0(),
            t1: self.is_t1(),
            seq_hausdorff,
            s2: sequential && seq_hausdorff,
            hausdorff: self.is_hausdorff(),
            compact: countably_compact,
            seq_compact: self.is_sequentially_compact(),
            countably_compact,
            sequential,
        }
    }

    /// Closure of a finite point: `{y ∈ P : x ∈ U_y}`.
    pub fn point_closure(&self, x: &PointId) -> EvSet {
        let mut s = EvSet::empty(&self.universe);
        s.finite = self
            .min_open
            .iter()
            .filter(|(_, u)| u.contains(x))
            .map(|(y, _)| y.clone())
            .collect();
        s
    }

    /// Closure of a whole tail: the tail plus every point capturing it.
    pub fn tail_closure(&self, t: &TailId) -> EvSet {
        let mut s = EvSet::empty(&self.universe);
        s.tails.insert(t.clone(), TailTrace::all());
        s.finite = self.points().iter().filter(|x| self.captures(x, t)).cloned().collect();
        s
    }

    /// Subspace presentation of `c`. Tails on which `c` is cofinite keep
    /// their id and are re-indexed in order; the finitely many points of
    /// `c` on other tails become isolated finite points.
    pub fn subspace(&self, c: &EvSet) -> Result<Subspace> {
        self.check_set(c)?;
        let mut taken: BTreeSet<String> = self
            .points()
            .iter()
            .map(|p| p.0.clone())
            .chain(self.tails().iter().map(|t| t.0.clone()))
            .collect();
        let mut min_open: BTreeMap<PointId, BTreeSet<PointId>> = c
            .finite
            .iter()
            .map(|x| (x.clone(), self.min_open[x].intersection(&c.finite).cloned().collect()))
            .collect();
        let mut attach = BTreeMap::new();
        let mut embedding = BTreeMap::new();
        for (t, tr) in &c.tails {
            if tr.eventual {
                attach.insert(
                    t.clone(),
                    c.finite.iter().filter(|x| self.captures(x, t)).cloned().collect(),
                );
            } else {
                for &m in &tr.flips {
                    let id = fresh_id(&mut taken, &format!("{t}@{m}"));
                    min_open.insert(id.clone(), [id.clone()].into());
                    embedding.insert(id, PointRef::Tail { tail: t.clone(), index: m });
                }
            }
        }
        Ok(Subspace {
            space: SpacePres::from_parts(min_open, attach)?,
            embedding,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub space: SpacePres,
    /// Finite points of the subspace that came from tail points of the ambient space.
    pub embedding: BTreeMap<PointId, PointRef>,
}

pub(crate) fn fresh_id(taken: &mut BTreeSet<String>, base: &str) -> PointId {
    let mut candidate = base.to_string();
    while taken.contains(&candidate) {
        candidate.push('\'');
    }
    taken.insert(candidate.clone());
    PointId(candidate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SetProperties {
    pub open: bool,
    pub closed: bool,
    pub seq_open: bool,
    pub seq_closed: bool,
    pub compact: bool,
    pub closed_compact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaceReport {
    pub t0: bool,
    pub t1: bool,
    pub seq_hausdorff: bool,
    pub s2: bool,
    pub hausdorff: bool,
    pub compact: bool,
    pub seq_compact: bool,
    pub countably_compact: bool,
    pub sequential: bool,
}

/// Disjoint union. Ids of `y` that collide with ids of `x` are primed; the
/// returned renaming maps old ids of `y` to new ones.
pub fn coproduct(x: &SpacePres, y: &SpacePres) -> (SpacePres, Renaming) {
    let mut taken: BTreeSet<String> = x
        .points()
        .iter()
        .map(|p| p.0.clone())
        .chain(x.tails().iter().map(|t| t.0.clone()))
        .collect();
    let mut renaming = Renaming::default();
    for p in y.points() {
        let id = fresh_id(&mut taken, &p.0);
        renaming.points.insert(p.clone(), id);
    }
    for t in y.tails() {
        let id = fresh_id(&mut taken, &t.0);
        renaming.tails.insert(t.clone(), TailId(id.0));
    }
    let mut min_open = x.min_open.clone();
    for (p, u) in &y.min_open {
        min_open.insert(
            renaming.points[p].clone(),
            u.iter().map(|q| renaming.points[q].clone()).collect(),
        );
    }
    let mut attach = x.attach.clone();
    for (t, a) in &y.attach {
        attach.insert(
            renaming.tails[t].clone(),
            a.iter().map(|q| renaming.points[q].clone()).collect(),
        );
    }
    let sum = SpacePres::from_parts(min_open, attach).expect("disjoint union of preorders is a preorder");
    (sum, renaming)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    pub points: BTreeMap<PointId, PointId>,
    pub tails: BTreeMap<TailId, TailId>,
}

impl Renaming {
    pub fn point_ref(&self, p: &PointRef) -> PointRef {
        match p {
            PointRef::Point(x) => PointRef::Point(self.points[x].clone()),
            PointRef::Tail { tail, index } => PointRef::Tail {
                tail: self.tails[tail].clone(),
                index: *index,
            },
        }
    }

    pub fn set(&self, s: &EvSet) -> EvSet {
        EvSet {
            finite: s.finite.iter().map(|x| self.points[x].clone()).collect(),
            tails: s.tails.iter().map(|(t, tr)| (self.tails[t].clone(), tr.clone())).collect(),
        }
    }
}

/// Restricts a set on a coproduct to one summand, given that summand's renaming.
pub fn restrict_to_summand(s: &EvSet, renaming: &Renaming) -> EvSet {
    EvSet {
        finite: renaming
            .points
            .iter()
            .filter(|(_, new)| s.finite.contains(*new))
            .map(|(old, _)| old.clone())
            .collect(),
        tails: renaming
            .tails
            .iter()
            .map(|(old, new)| (old.clone(), s.tails[new].clone()))
            .collect(),
    }
}
