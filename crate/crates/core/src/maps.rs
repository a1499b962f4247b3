//! Finitely presented maps between tail spaces and their deciders.
//!
//! A map sends each finite point to a point, and each tail either along an
//! affine injection into a tail or to a constant, in both cases up to a
//! finite table of exceptions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exteriority::{self, Externology};
use crate::sequences::{self, FPSeq, Thread};
use crate::sets::{EvSet, PointId, PointRef, TailId, TailTrace};
use crate::spaces::SpacePres;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TailImage {
    #[serde(rename_all = "camelCase")]
    ToTail {
        tail: TailId,
        a: u64,
        b: u64,
        #[serde(default)]
        exceptions: BTreeMap<u64, PointRef>,
    },
    #[serde(rename_all = "camelCase")]
    ToConst {
        point: PointRef,
        #[serde(default)]
        exceptions: BTreeMap<u64, PointRef>,
    },
}

impl TailImage {
    pub fn exceptions(&self) -> &BTreeMap<u64, PointRef> {
        match self {
            TailImage::ToTail { exceptions, .. } | TailImage::ToConst { exceptions, .. } => exceptions,
        }
    }

    fn exceptions_mut(&mut self) -> &mut BTreeMap<u64, PointRef> {
        match self {
            TailImage::ToTail { exceptions, .. } | TailImage::ToConst { exceptions, .. } => exceptions,
        }
    }

    /// Image of index `m` ignoring exceptions.
    pub fn generic_at(&self, m: u64) -> PointRef {
        match self {
            TailImage::ToTail { tail, a, b, .. } => PointRef::Tail { tail: tail.clone(), index: a * m + b },
            TailImage::ToConst { point, .. } => point.clone(),
        }
    }

    pub fn at(&self, m: u64) -> PointRef {
        self.exceptions().get(&m).cloned().unwrap_or_else(|| self.generic_at(m))
    }

    fn canonical(mut self) -> Self {
        let generic: Vec<u64> = self
            .exceptions()
            .iter()
            .filter(|(m, p)| self.generic_at(**m) == **p)
            .map(|(m, _)| *m)
            .collect();
        for m in generic {
            self.exceptions_mut().remove(&m);
        }
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FPMap {
    #[serde(default)]
    pub on_points: BTreeMap<PointId, PointRef>,
    #[serde(default)]
    pub on_tails: BTreeMap<TailId, TailImage>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MapProperties {
    pub continuous: bool,
    pub proper: bool,
    pub seq_continuous: bool,
    pub seq_proper: bool,
}

impl FPMap {
    pub fn identity(x: &SpacePres) -> Self {
        FPMap {
            on_points: x.points().iter().map(|p| (p.clone(), PointRef::Point(p.clone()))).collect(),
            on_tails: x
                .tails()
                .iter()
                .map(|t| {
                    (t.clone(), TailImage::ToTail { tail: t.clone(), a: 1, b: 0, exceptions: BTreeMap::new() })
                })
                .collect(),
        }
    }

    pub fn validate(&self, x: &SpacePres, y: &SpacePres) -> Result<()> {
        let dom: BTreeSet<&PointId> = self.on_points.keys().collect();
        if dom != x.points().iter().collect() {
            return Err(Error::UniverseMismatch("onPoints must cover exactly the domain's points".into()));
        }
        let dom: BTreeSet<&TailId> = self.on_tails.keys().collect();
        if dom != x.tails().iter().collect() {
            return Err(Error::UniverseMismatch("onTails must cover exactly the domain's tails".into()));
        }
        for p in self.on_points.values() {
            y.check_point(p)?;
        }
        for img in self.on_tails.values() {
            match img {
                TailImage::ToTail { tail, a, .. } => {
                    if *a == 0 {
                        return Err(Error::NotInjective(0));
                    }
                    if !y.tails().contains(tail) {
                        return Err(Error::UnknownTail(tail.0.clone()));
                    }
                }
                TailImage::ToConst { point, .. } => y.check_point(point)?,
            }
            for p in img.exceptions().values() {
                y.check_point(p)?;
            }
        }
        Ok(())
    }

    pub fn apply(&self, p: &PointRef) -> PointRef {
        match p {
            PointRef::Point(x) => self.on_points[x].clone(),
            PointRef::Tail { tail, index } => self.on_tails[tail].at(*index),
        }
    }

    pub fn canonical(self) -> Self {
        FPMap {
            on_points: self.on_points,
            on_tails: self.on_tails.into_iter().map(|(t, i)| (t, i.canonical())).collect(),
        }
    }

    /// One past the largest tail index mentioned by constant images.
    pub fn index_bound(&self) -> u64 {
        let idx = |p: &PointRef| match p {
            PointRef::Tail { index, .. } => index + 1,
            PointRef::Point(_) => 0,
        };
        let points = self.on_points.values().map(idx);
        let tails = self.on_tails.values().flat_map(|img| {
            let base = match img {
                TailImage::ToConst { point, .. } => idx(point),
                TailImage::ToTail { .. } => 0,
            };
            std::iter::once(base).chain(img.exceptions().values().map(idx))
        });
        points.chain(tails).max().unwrap_or(0)
    }

    /// `f⁻¹(S)` as a set over the domain.
    pub fn preimage(&self, x: &SpacePres, s: &EvSet) -> EvSet {
        let mut pre = EvSet::empty(x.universe());
        pre.finite = self
            .on_points
            .iter()
            .filter(|(_, img)| s.contains(img))
            .map(|(p, _)| p.clone())
            .collect();
        for (t, img) in &self.on_tails {
            let (eventual, mut candidates): (bool, BTreeSet<u64>) = match img {
                TailImage::ToTail { tail, a, b, .. } => {
                    let tr = s.tails.get(tail).cloned().unwrap_or_default();
                    let hits = tr.flips.iter().filter(|&&v| v >= *b && (v - b) % a == 0).map(|v| (v - b) / a);
                    (tr.eventual, hits.collect())
                }
                TailImage::ToConst { point, .. } => (s.contains(point), BTreeSet::new()),
            };
            candidates.extend(img.exceptions().keys().copied());
            let flips = candidates.into_iter().filter(|&m| s.contains(&img.at(m)) != eventual).collect();
            pre.tails.insert(t.clone(), TailTrace { eventual, flips });
        }
        pre
    }

    /// `f ∘ s`. Exceptions hit by a walk thread are moved into the prefix first.
    pub fn after_seq(&self, s: &FPSeq) -> FPSeq {
        let t = s.period();
        let mut rounds = 0;
        for th in &s.threads {
            if let Thread::Walk { tail, a, b } = th {
                for &m in self.on_tails[tail].exceptions().keys() {
                    if m >= *b && (m - b) % a == 0 {
                        rounds = rounds.max((m - b) / a + 1);
                    }
                }
            }
        }
        let s = s.advance(rounds * t);
        FPSeq {
            prefix: s.prefix.iter().map(|p| self.apply(p)).collect(),
            threads: s
                .threads
                .iter()
                .map(|th| match th {
                    Thread::Const(p) => Thread::Const(self.apply(p)),
                    Thread::Walk { tail, a, b } => match &self.on_tails[tail] {
                        TailImage::ToTail { tail: t2, a: a2, b: b2, .. } => {
                            Thread::Walk { tail: t2.clone(), a: a2 * a, b: a2 * b + b2 }
                        }
                        TailImage::ToConst { point, .. } => Thread::Const(point.clone()),
                    },
                })
                .collect(),
        }
    }

    /// Pointwise continuity: at each finite point `x`, the image of `U_x`
    /// stays in every neighbourhood of `f(x)` and so does the image of every
    /// tail captured by `x`.
    pub fn is_continuous(&self, x: &SpacePres, y: &SpacePres) -> bool {
        x.points().iter().all(|p| match &self.on_points[p] {
            PointRef::Tail { .. } => {
                let target = &self.on_points[p];
                x.min_open(p).iter().all(|z| &self.on_points[z] == target)
                    && x.captured_tails(p).all(|t| {
                        matches!(&self.on_tails[t], TailImage::ToConst { point, .. } if point == target)
                    })
            }
            PointRef::Point(fx) => {
                let target = y.min_open(fx);
                x.min_open(p).iter().all(|z| {
                    matches!(&self.on_points[z], PointRef::Point(fz) if target.contains(fz))
                }) && x.captured_tails(p).all(|t| match &self.on_tails[t] {
                    TailImage::ToConst { point: PointRef::Point(c), .. } => target.contains(c),
                    TailImage::ToConst { .. } => false,
                    TailImage::ToTail { tail, .. } => target.iter().any(|z| y.attach(tail).contains(z)),
                })
            }
        })
    }

    /// Continuous, and the preimage of every member of the countable base of
    /// `ε_cc(Y)` is in `ε_cc(X)`. The base is decreasing and the preimages
    /// only change in finitely many flips past [`Self::index_bound`], so it
    /// is enough to test one index there.
    pub fn is_proper(&self, x: &SpacePres, y: &SpacePres) -> bool {
        if !self.is_continuous(x, y) {
            return false;
        }
        self.pulls_back_base(x, y, &exteriority::cocompact_externology(x), &exteriority::cocompact_externology(y))
    }

    pub(crate) fn pulls_back_base(&self, x: &SpacePres, y: &SpacePres, ex: &Externology, ey: &Externology) -> bool {
        let k = self.index_bound();
        let base = exteriority::base_member(y, ey, k);
        let pre = self.preimage(x, &base);
        exteriority::is_member(x, ex, &pre).unwrap_or(false)
    }

    /// Preserves convergent sequences together with their limits, checked
    /// on every generic sequence and every limit it has.
    pub fn is_seq_continuous(&self, x: &SpacePres, y: &SpacePres) -> bool {
        sequences::generic_sequences(x).iter().all(|s| {
            let limits = sequences::limit_set(x, s).unwrap_or_default();
            let image = self.after_seq(s);
            let image_limits = sequences::limit_set(y, &image).unwrap_or_default();
            limits.iter().all(|l| image_limits.contains(&self.apply(l)))
        })
    }

    pub fn is_seq_proper(&self, x: &SpacePres, y: &SpacePres) -> bool {
        self.is_seq_continuous(x, y)
            && sequences::generic_sequences(x).iter().all(|s| {
                !sequences::is_proper(x, s).unwrap_or(false)
                    || sequences::is_proper(y, &self.after_seq(s)).unwrap_or(false)
            })
    }

    pub fn properties(&self, x: &SpacePres, y: &SpacePres) -> Result<MapProperties> {
        self.validate(x, y)?;
        Ok(MapProperties {
            continuous: self.is_continuous(x, y),
            proper: self.is_proper(x, y),
            seq_continuous: self.is_seq_continuous(x, y),
            seq_proper: self.is_seq_proper(x, y),
        })
    }
}

/// `g ∘ f` for `f: X → Y`, `g: Y → Z`.
pub fn compose(f: &FPMap, g: &FPMap) -> FPMap {
    let on_points = f.on_points.iter().map(|(p, img)| (p.clone(), g.apply(img))).collect();
    let on_tails = f
        .on_tails
        .iter()
        .map(|(t, img)| {
            let mut exceptions: BTreeMap<u64, PointRef> =
                img.exceptions().iter().map(|(m, p)| (*m, g.apply(p))).collect();
            let composed = match img {
                TailImage::ToConst { point, .. } => TailImage::ToConst { point: g.apply(point), exceptions: BTreeMap::new() },
                TailImage::ToTail { tail, a, b, .. } => {
                    let inner = &g.on_tails[tail];
                    for &v in inner.exceptions().keys() {
                        if v >= *b && (v - b) % a == 0 {
                            let m = (v - b) / a;
                            exceptions.entry(m).or_insert_with(|| inner.at(v));
                        }
                    }
                    match inner {
                        TailImage::ToTail { tail: t2, a: a2, b: b2, .. } => TailImage::ToTail {
                            tail: t2.clone(),
                            a: a2 * a,
                            b: a2 * b + b2,
                            exceptions: BTreeMap::new(),
                        },
                        TailImage::ToConst { point, .. } => {
                            TailImage::ToConst { point: point.clone(), exceptions: BTreeMap::new() }
                        }
                    }
                }
            };
            let mut composed = composed;
            *composed.exceptions_mut() = exceptions;
            (t.clone(), composed.canonical())
        })
        .collect();
    FPMap { on_points, on_tails }
}
