//! Deciders checked against direct, pointwise computations.
mod common;

use common::*;
use extseq_core::maps::{compose, FPMap, TailImage};
use extseq_core::sequences::{self, AffineInj};
use extseq_core::{EvSet, FPSeq, PointRef, SpacePres};
use proptest::prelude::*;

/// Far enough along every tail that all flip sets generated by the helpers are behind us.
const HORIZON: u64 = 64;

fn covered_by(x: &SpacePres, s: &EvSet, k: u64, p: &PointRef) -> bool {
    s.finite.iter().any(|c| basic_neighbourhood(x, c, k).contains(p))
}

/// Compactness from the covers `{B(x, k) : x ∈ S ∩ P} ∪ {singletons}`: a
/// finite subcover exists iff only finitely many tail points of `S` escape
/// the neighbourhoods, which is read off a window past the horizon.
fn compact_by_covers(x: &SpacePres, s: &EvSet) -> bool {
    (0..4).all(|k| {
        x.tails().iter().all(|t| {
            (HORIZON..2 * HORIZON).all(|m| {
                let p = PointRef::Tail { tail: t.clone(), index: m };
                !s.contains(&p) || covered_by(x, s, k, &p)
            })
        })
    })
}

/// `x` is a limit of `s` iff `s` is eventually in each `B(x, k)`. Past the
/// largest index `s` mentions the neighbourhoods stop mattering.
fn is_limit_pointwise(x: &SpacePres, s: &FPSeq, l: &PointRef) -> bool {
    let start = s.prefix.len() as u64;
    let t = s.period();
    (0..s.max_tail_index() + 3).all(|k| {
        let nb = match l {
            PointRef::Point(p) => basic_neighbourhood(x, p, k),
            tail_point => EvSet::from_points(x.universe(), [tail_point]),
        };
        window(s, start + t * (k + 1), t * 20).all(|p| nb.contains(&p))
    })
}

/// Continuity from the subbasis `{B(y, k)} ∪ {{q}}`; past the largest index
/// mentioned by the map the preimages no longer change with `k`.
fn continuous_by_preimages(f: &FPMap, x: &SpacePres, y: &SpacePres) -> bool {
    let k_max = f.index_bound() + 1;
    let basics = y.points().iter().flat_map(|p| (0..=k_max).map(|k| basic_neighbourhood(y, p, k)));
    let singletons = y.tails().iter().flat_map(|t| {
        (0..k_max + 6).map(|m| EvSet::from_points(y.universe(), [&PointRef::Tail { tail: t.clone(), index: m }]))
    });
    basics.chain(singletons).all(|v| x.is_open(&f.preimage(x, &v)).unwrap())
}

fn all_points(x: &SpacePres) -> Vec<PointRef> {
    let mut out: Vec<PointRef> = x.points().iter().cloned().map(PointRef::Point).collect();
    for t in x.tails() {
        out.extend((0..12).map(|m| PointRef::Tail { tail: t.clone(), index: m }));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn compactness_matches_cover_oracle(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        let s = evset(&x, &mut e);
        prop_assert_eq!(x.is_compact(&s).unwrap(), compact_by_covers(&x, &s));
    }

    #[test]
    fn limit_sets_match_pointwise_oracle(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        prop_assume!(has_points(&x));
        let s = seq(&x, &mut e);
        let limits = sequences::limit_set(&x, &s).unwrap();
        for l in all_points(&x) {
            prop_assert_eq!(limits.contains(&l), is_limit_pointwise(&x, &s, &l), "{} {:?}", l, s);
        }
    }

    #[test]
    fn sequential_openness_agrees_with_openness(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        for _ in 0..4 {
            let s = if e.flip() { evset(&x, &mut e) } else { open_set(&x, &mut e) };
            prop_assert_eq!(x.is_open(&s).unwrap(), x.is_sequentially_open(&s).unwrap());
            prop_assert_eq!(x.is_closed(&s).unwrap(), x.is_sequentially_closed(&s).unwrap());
        }
    }

    #[test]
    fn generated_opens_are_open(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        let s = open_set(&x, &mut e);
        prop_assert!(x.is_open(&s).unwrap());
    }

    #[test]
    fn subsequences_are_pointwise(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        prop_assume!(has_points(&x));
        let s = seq(&x, &mut e);
        let u = AffineInj { a: 1 + e.next(4), b: e.next(9) };
        let sub = s.subseq(&u);
        for n in 0..200 {
            prop_assert_eq!(sub.at(n), s.at(u.apply(n)));
        }
        let adv = s.advance(e.next(7));
        let re = s.rethread(1 + e.next(3));
        prop_assert!(adv.same_as(&s) && re.same_as(&s));
        for n in 0..100 {
            prop_assert_eq!(adv.at(n), s.at(n));
            prop_assert_eq!(re.at(n), s.at(n));
        }
    }

    #[test]
    fn extensional_equality_is_pointwise(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        prop_assume!(has_points(&x));
        let (s, t) = (seq(&x, &mut e), seq(&x, &mut e));
        let pointwise = (0..300).all(|n| s.at(n) == t.at(n));
        prop_assert_eq!(s.same_as(&t), pointwise);
        prop_assert_eq!(s.first_difference(&t).is_none(), pointwise);
    }

    #[test]
    fn maps_act_pointwise(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        let y = space(&mut e);
        prop_assume!(has_points(&x) && has_points(&y));
        let f = map(&x, &y, &mut e);
        prop_assert!(f.validate(&x, &y).is_ok());
        let s = seq(&x, &mut e);
        let fs = f.after_seq(&s);
        for n in 0..200 {
            prop_assert_eq!(fs.at(n), f.apply(&s.at(n)));
        }
        let z = space(&mut e);
        prop_assume!(has_points(&z));
        let g = map(&y, &z, &mut e);
        let gf = compose(&f, &g);
        for p in all_points(&x) {
            prop_assert_eq!(gf.apply(&p), g.apply(&f.apply(&p)));
        }
        let v = evset(&y, &mut e);
        let pre = f.preimage(&x, &v);
        for p in all_points(&x) {
            prop_assert_eq!(pre.contains(&p), v.contains(&f.apply(&p)));
        }
    }

    #[test]
    fn continuity_matches_preimages_of_opens(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        let y = space(&mut e);
        prop_assume!(has_points(&y));
        let f = map(&x, &y, &mut e);
        let continuous = f.is_continuous(&x, &y);
        prop_assert_eq!(continuous, continuous_by_preimages(&f, &x, &y));
        prop_assert_eq!(continuous, f.is_seq_continuous(&x, &y));
        if continuous {
            for _ in 0..10 {
                let v = open_set(&y, &mut e);
                prop_assert!(x.is_open(&f.preimage(&x, &v)).unwrap());
            }
        }
    }

    #[test]
    fn identity_and_collapse_maps(words in entropy()) {
        let mut e = Entropy::new(words);
        let x = space(&mut e);
        let id = FPMap::identity(&x);
        let p = id.properties(&x, &x).unwrap();
        prop_assert!(p.continuous && p.proper && p.seq_continuous && p.seq_proper);
        // a constant map into a finite point is continuous, proper iff X is compact
        prop_assume!(!x.points().is_empty());
        let c = x.points().iter().next().unwrap().clone();
        let k = FPMap {
            on_points: x.points().iter().map(|p| (p.clone(), PointRef::Point(c.clone()))).collect(),
            on_tails: x.tails().iter().map(|t| (t.clone(), TailImage::ToConst { point: PointRef::Point(c.clone()), exceptions: Default::default() })).collect(),
        };
        let one = extseq_core::spaces::SpacePres::new(&extseq_core::RawSpace { points: vec![c.0.clone()], ..Default::default() }).unwrap();
        let q = k.properties(&x, &one).unwrap();
        prop_assert!(q.continuous);
        prop_assert_eq!(q.proper, x.is_compact(&EvSet::full(x.universe())).unwrap());
    }
}
