//! Builders turning proptest entropy into instances.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use extseq_core::maps::{FPMap, TailImage};
use extseq_core::{EvSet, FPSeq, PointId, PointRef, RawSpace, SpacePres, TailTrace, Thread};
use proptest::prelude::*;

pub struct Entropy {
    words: Vec<u64>,
    pos: usize,
}

impl Entropy {
    pub fn new(words: Vec<u64>) -> Self {
        Entropy { words, pos: 0 }
    }

    pub fn next(&mut self, bound: u64) -> u64 {
        let w = self.words[self.pos % self.words.len()];
        self.pos += 1;
        // mix the position in so that cycling does not repeat values
        let mixed = w.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(self.pos as u64).rotate_left(29);
        if bound == 0 { 0 } else { mixed % bound }
    }

    pub fn flip(&mut self) -> bool {
        self.next(2) == 1
    }
}

pub fn entropy() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(any::<u64>(), 64)
}

/// Up to four finite points with a random preorder and up to three tails.
pub fn space(e: &mut Entropy) -> SpacePres {
    let n = e.next(5) as usize;
    let m = e.next(4) as usize;
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = i == j || e.next(4) == 0;
        }
    }
    // transitive closure: rel[i][j] means p_j ∈ U_{p_i}
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let min_open = (0..n)
        .map(|i| (points[i].clone(), (0..n).filter(|&j| rel[i][j]).map(|j| points[j].clone()).collect()))
        .collect();
    let tails: Vec<String> = (0..m).map(|i| format!("t{i}")).collect();
    let attach = tails
        .iter()
        .map(|t| (t.clone(), points.iter().filter(|_| e.next(3) == 0).cloned().collect()))
        .collect();
    SpacePres::new(&RawSpace { points, min_open, tails, attach }).expect("generated preorder")
}

pub fn point_ref(x: &SpacePres, e: &mut Entropy) -> PointRef {
    let pts: Vec<&PointId> = x.points().iter().collect();
    let tails: Vec<_> = x.tails().iter().collect();
    if !pts.is_empty() && (tails.is_empty() || e.flip()) {
        PointRef::Point(pts[e.next(pts.len() as u64) as usize].clone())
    } else {
        PointRef::Tail { tail: tails[e.next(tails.len() as u64) as usize].clone(), index: e.next(8) }
    }
}

pub fn has_points(x: &SpacePres) -> bool {
    !x.points().is_empty() || !x.tails().is_empty()
}

pub fn evset(x: &SpacePres, e: &mut Entropy) -> EvSet {
    let mut s = EvSet::empty(x.universe());
    s.finite = x.points().iter().filter(|_| e.flip()).cloned().collect();
    for t in x.tails() {
        let flips: BTreeSet<u64> = (0..e.next(4)).map(|_| e.next(10)).collect();
        s.tails.insert(t.clone(), TailTrace { eventual: e.flip(), flips });
    }
    s
}

/// An open set: a union of basic neighbourhoods and tail points.
pub fn open_set(x: &SpacePres, e: &mut Entropy) -> EvSet {
    let mut s = EvSet::empty(x.universe());
    for p in x.points() {
        if e.next(3) == 0 {
            let nb = basic_neighbourhood(x, p, e.next(6));
            s = s.union(&nb, x.universe()).unwrap();
        }
    }
    for t in x.tails() {
        let mut tr = s.tails[t].clone();
        for _ in 0..e.next(3) {
            let m = e.next(10);
            if !tr.contains(m) {
                tr.flips.insert(m);
            }
        }
        if !tr.eventual && e.next(4) == 0 {
            tr = TailTrace::from_index(e.next(6));
        }
        s.tails.insert(t.clone(), tr);
    }
    s
}

/// `U_x` together with every captured tail from index `k` on.
pub fn basic_neighbourhood(x: &SpacePres, p: &PointId, k: u64) -> EvSet {
    let mut s = EvSet::empty(x.universe());
    s.finite = x.min_open(p).clone();
    for t in x.captured_tails(p) {
        s.tails.insert(t.clone(), TailTrace::from_index(k));
    }
    s
}

pub fn thread(x: &SpacePres, e: &mut Entropy) -> Thread {
    let tails: Vec<_> = x.tails().iter().collect();
    if !tails.is_empty() && e.flip() {
        Thread::Walk { tail: tails[e.next(tails.len() as u64) as usize].clone(), a: 1 + e.next(3), b: e.next(5) }
    } else {
        Thread::Const(point_ref(x, e))
    }
}

pub fn seq(x: &SpacePres, e: &mut Entropy) -> FPSeq {
    let prefix = (0..e.next(4)).map(|_| point_ref(x, e)).collect();
    let threads = (0..1 + e.next(3)).map(|_| thread(x, e)).collect();
    FPSeq { prefix, threads }
}

fn tail_image(y: &SpacePres, e: &mut Entropy) -> TailImage {
    let tails: Vec<_> = y.tails().iter().collect();
    let mut exceptions = BTreeMap::new();
    for _ in 0..e.next(3) {
        exceptions.insert(e.next(6), point_ref(y, e));
    }
    if !tails.is_empty() && e.flip() {
        TailImage::ToTail { tail: tails[e.next(tails.len() as u64) as usize].clone(), a: 1 + e.next(2), b: e.next(4), exceptions }
    } else {
        TailImage::ToConst { point: point_ref(y, e), exceptions }
    }
}

/// A random map; biased towards continuity by copying structure when it can.
pub fn map(x: &SpacePres, y: &SpacePres, e: &mut Entropy) -> FPMap {
    FPMap {
        on_points: x.points().iter().map(|p| (p.clone(), point_ref(y, e))).collect(),
        on_tails: x.tails().iter().map(|t| (t.clone(), tail_image(y, e))).collect(),
    }
}

/// Pointwise evaluation of `s` over the window `[from, from + len)`.
pub fn window(s: &FPSeq, from: u64, len: u64) -> impl Iterator<Item = PointRef> + '_ {
    (from..from + len).map(move |n| s.at(n))
}
