//! s-compact sets and the one-point constructions `X⁺`, `X^∧`, `X^∞`
//! together with the inverse `bar`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exteriority::{self, ExtSpace, Externology};
use crate::maps::FPMap;
use crate::sequences;
use crate::sets::{EvSet, PointId, PointRef, TailId, TailTrace};
use crate::spaces::{fresh_id, SpacePres};

/// A space with a distinguished finite point whose singleton is closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedSpace {
    space: SpacePres,
    base: PointId,
}

impl BasedSpace {
    pub fn new(space: SpacePres, base: PointRef) -> Result<Self> {
        let base = match base {
            PointRef::Point(p) => p,
            PointRef::Tail { .. } => return Err(Error::BasePointIsTail),
        };
        if !space.points().contains(&base) {
            return Err(Error::UnknownPoint(base.0));
        }
        if space.points().iter().any(|y| y != &base && space.min_open(y).contains(&base)) {
            return Err(Error::BasePointNotClosed(base.0));
        }
        Ok(BasedSpace { space, base })
    }

    pub fn space(&self) -> &SpacePres {
        &self.space
    }

    pub fn base(&self) -> &PointId {
        &self.base
    }
}

/// Every proper sequence is eventually outside `c`. Proper sequences are
/// the ones whose threads all walk along tails converging nowhere, so this
/// asks for `c` sequentially closed and finite on each such tail.
pub fn is_s_compact(space: &SpacePres, c: &EvSet) -> Result<bool> {
    Ok(space.is_sequentially_closed(c)?
        && space.tails().iter().all(|t| !space.attach(t).is_empty() || !c.tails[t].eventual))
}

/// `ε_sc`: open sets with s-compact complement.
pub fn epsilon_sc(space: &SpacePres) -> Externology {
    let u = space.universe();
    exteriority::present_filter(space, |s| {
        space.is_open(s).unwrap_or(false) && is_s_compact(space, &s.complement(u).expect("same universe")).unwrap_or(false)
    })
}

/// Largest presentation for which the enumeration in
/// [`is_omega_sequential`] is attempted.
const OMEGA_ENUMERATION_LIMIT: usize = 14;

/// s-compact sets agree with closed compact sets. Compares the two
/// filters, and for small spaces every set whose tail traces are empty or
/// full.
pub fn is_omega_sequential(space: &SpacePres) -> bool {
    if epsilon_sc(space) != exteriority::cocompact_externology(space) {
        return false;
    }
    let points: Vec<&PointId> = space.points().iter().collect();
    let tails: Vec<&TailId> = space.tails().iter().collect();
    let n = points.len() + tails.len();
    if n > OMEGA_ENUMERATION_LIMIT {
        return true;
    }
    (0u32..1 << n).all(|mask| {
        let mut c = EvSet::empty(space.universe());
        for (i, p) in points.iter().enumerate() {
            if mask & (1 << i) != 0 {
                c.finite.insert((*p).clone());
            }
        }
        for (j, t) in tails.iter().enumerate() {
            if mask & (1 << (points.len() + j)) != 0 {
                c.tails.insert((*t).clone(), TailTrace::all());
            }
        }
        let closed_compact = space.is_closed(&c).unwrap_or(false) && space.is_compact(&c).unwrap_or(false);
        is_s_compact(space, &c).unwrap_or(false) == closed_compact
    })
}

fn add_point_at_infinity(space: &SpacePres, ext: &Externology) -> BasedSpace {
    let ext = exteriority::canonicalize(space, ext).expect("externology over this space");
    let mut taken: BTreeSet<String> =
        space.points().iter().map(|p| p.0.clone()).chain(space.tails().iter().map(|t| t.0.clone())).collect();
    let inf = fresh_id(&mut taken, "inf");
    let mut min_open = space.min_open_map().clone();
    let mut u_inf = ext.l.clone();
    u_inf.insert(inf.clone());
    min_open.insert(inf.clone(), u_inf);
    let mut attach = space.attach_map().clone();
    for t in &ext.d {
        attach.get_mut(t).expect("tail of this space").insert(inf.clone());
    }
    let space = SpacePres::from_parts(min_open, attach).expect("saturated anchor keeps the preorder");
    BasedSpace { space, base: inf }
}

/// The Alexandroff compactification. Its neighbourhoods of `∞` come from
/// the open sets whose complement is closed and compact.
pub fn plus(space: &SpacePres) -> BasedSpace {
    let u = space.universe();
    let filter = exteriority::present_filter(space, |s| {
        let c = s.complement(u).expect("same universe");
        space.is_open(s).unwrap_or(false)
            && space.is_closed(&c).unwrap_or(false)
            && space.is_compact(&c).unwrap_or(false)
    });
    add_point_at_infinity(space, &filter)
}

/// The one-point sequential compactification: neighbourhoods of `∞` are
/// the open sets containing a tail of every sequence with no convergent
/// subsequence.
pub fn wedge(space: &SpacePres) -> BasedSpace {
    let divergent: Vec<_> = sequences::generic_sequences(space)
        .into_iter()
        .filter(|s| sequences::has_no_convergent_subsequence(space, s).unwrap_or(false))
        .collect();
    let filter = exteriority::present_filter(space, |s| {
        space.is_open(s).unwrap_or(false) && divergent.iter().all(|d| d.is_eventually_in(s))
    });
    add_point_at_infinity(space, &filter)
}

/// `X^∞`: the exterior-open sets become the neighbourhoods of `∞`.
pub fn infinity(e: &ExtSpace) -> BasedSpace {
    add_point_at_infinity(e.space(), e.ext())
}

/// Removes the base point and keeps its punctured neighbourhoods as the externology.
pub fn bar(b: &BasedSpace) -> ExtSpace {
    let x0 = &b.base;
    let u0 = b.space.min_open(x0);
    let mut min_open = b.space.min_open_map().clone();
    min_open.remove(x0);
    let mut attach = BTreeMap::new();
    let mut d = BTreeSet::new();
    for t in b.space.tails() {
        let a = b.space.attach(t);
        if a.iter().any(|x| u0.contains(x)) {
            d.insert(t.clone());
        }
        attach.insert(t.clone(), a.iter().filter(|x| *x != x0).cloned().collect());
    }
    let space = SpacePres::from_parts(min_open, attach).expect("removing a closed point keeps the preorder");
    let l = u0.iter().filter(|x| *x != x0).cloned().collect();
    ExtSpace::new(space, Externology { l, d }).expect("ids come from the space")
}

/// `f⁺`: `f` extended by `∞ ↦ ∞`.
pub fn plus_map(f: &FPMap, x: &SpacePres, y: &SpacePres) -> FPMap {
    let (px, py) = (plus(x), plus(y));
    let mut g = f.clone();
    g.on_points.insert(px.base.clone(), PointRef::Point(py.base.clone()));
    g
}

/// Labels carried through an isomorphism search: every finite point and
/// every tail gets a tag that must be preserved.
struct Labelled<'a> {
    space: &'a SpacePres,
    point_tag: BTreeMap<PointId, u8>,
    tail_tag: BTreeMap<TailId, u8>,
}

fn isomorphic(x: &Labelled, y: &Labelled) -> bool {
    let (sx, sy) = (x.space, y.space);
    if sx.points().len() != sy.points().len() || sx.tails().len() != sy.tails().len() {
        return false;
    }
    let signature = |l: &Labelled, p: &PointId| {
        let above = l.space.points().iter().filter(|y| l.space.min_open(y).contains(p)).count();
        let captured = l.space.captured_tails(p).count();
        (l.point_tag[p], l.space.min_open(p).len(), above, captured)
    };
    let xs: Vec<&PointId> = sx.points().iter().collect();
    let candidates: Vec<Vec<&PointId>> = xs
        .iter()
        .map(|p| sy.points().iter().filter(|q| signature(x, p) == signature(y, q)).collect())
        .collect();
    let mut assignment: BTreeMap<&PointId, &PointId> = BTreeMap::new();
    let mut used: BTreeSet<&PointId> = BTreeSet::new();
    search(x, y, &xs, &candidates, 0, &mut assignment, &mut used)
}

fn search<'a>(
    x: &Labelled,
    y: &Labelled,
    xs: &[&'a PointId],
    candidates: &[Vec<&'a PointId>],
    i: usize,
    assignment: &mut BTreeMap<&'a PointId, &'a PointId>,
    used: &mut BTreeSet<&'a PointId>,
) -> bool {
    if i == xs.len() {
        return tails_match(x, y, assignment);
    }
    for &q in &candidates[i] {
        if used.contains(q) {
            continue;
        }
        assignment.insert(xs[i], q);
        let consistent = assignment.iter().all(|(a, b)| {
            assignment.iter().all(|(c, d)| x.space.min_open(a).contains(*c) == y.space.min_open(b).contains(*d))
        });
        if consistent {
            used.insert(q);
            if search(x, y, xs, candidates, i + 1, assignment, used) {
                return true;
            }
            used.remove(q);
        }
        assignment.remove(xs[i]);
    }
    false
}

/// Tails are interchangeable apart from their tag and attach set, so a
/// bijection exists iff the multisets of (tag, mapped attach set) agree.
fn tails_match(x: &Labelled, y: &Labelled, assignment: &BTreeMap<&PointId, &PointId>) -> bool {
    let mut left: Vec<(u8, BTreeSet<&PointId>)> = x
        .space
        .tails()
        .iter()
        .map(|t| (x.tail_tag[t], x.space.attach(t).iter().map(|p| assignment[p]).collect()))
        .collect();
    let mut right: Vec<(u8, BTreeSet<&PointId>)> =
        y.space.tails().iter().map(|t| (y.tail_tag[t], y.space.attach(t).iter().collect())).collect();
    left.sort();
    right.sort();
    left == right
}

/// Isomorphism of based spaces fixing the base points.
pub fn based_iso(a: &BasedSpace, b: &BasedSpace) -> bool {
    fn label(s: &BasedSpace) -> Labelled<'_> {
        Labelled {
            space: &s.space,
            point_tag: s.space.points().iter().map(|p| (p.clone(), u8::from(p == &s.base))).collect(),
            tail_tag: s.space.tails().iter().map(|t| (t.clone(), 0)).collect(),
        }
    }
    isomorphic(&label(a), &label(b))
}

/// Isomorphism of exterior spaces: a homeomorphism carrying `L` to `L` and `D` to `D`.
pub fn ext_iso(a: &ExtSpace, b: &ExtSpace) -> bool {
    fn label(e: &ExtSpace) -> Labelled<'_> {
        Labelled {
            space: e.space(),
            point_tag: e.space().points().iter().map(|p| (p.clone(), u8::from(e.ext().l.contains(p)))).collect(),
            tail_tag: e.space().tails().iter().map(|t| (t.clone(), u8::from(e.ext().d.contains(t)))).collect(),
        }
    }
    isomorphic(&label(a), &label(b))
}

/// Isomorphism of plain spaces.
pub fn space_iso(a: &SpacePres, b: &SpacePres) -> bool {
    fn label(s: &SpacePres) -> Labelled<'_> {
        Labelled {
            space: s,
            point_tag: s.points().iter().map(|p| (p.clone(), 0)).collect(),
            tail_tag: s.tails().iter().map(|t| (t.clone(), 0)).collect(),
        }
    }
    isomorphic(&label(a), &label(b))
}

/// `X ⊔ {∞}` with `∞` isolated, based at `∞`.
pub fn with_isolated_point(space: &SpacePres) -> BasedSpace {
    add_point_at_infinity(space, &Externology::default())
}
