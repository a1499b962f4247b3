//! Case generation for each suite.

use extseq_core::compactify::{infinity, plus};
use extseq_core::exteriority::ExtSpace;
use extseq_core::sheaves::{build_sigma, CElem, CSet, Ideal, Monoid, YonedaN, YonedaNPlus, YonedaOne};
use extseq_core::{fixtures, sequences, EvSet, FPSeq, Thread};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::check::{Candidate, Check, Fixture};
use crate::gen::{self, Profile, MAX_AFFINE};

/// Sets sampled in the one-point extension per instance.
pub const PLUS_SETS: usize = 200;
/// Sets sampled per instance by the set-level suites.
pub const SETS: usize = 100;
/// Covering ideals per gluing instance.
pub const IDEALS: usize = 30;

const SHEAF: usize = 10;
const YONEDA: usize = 11;

pub fn case_count(suite: usize, samples: usize) -> usize {
    match suite {
        // 20 instances at the default scale, plus the non-covering fixture
        SHEAF => samples.div_ceil(10) + 1,
        YONEDA => 3,
        _ => samples,
    }
}

pub fn generate(suite: usize, case: usize, rng: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    match suite {
        0 => proper_vs_no_conv(rng),
        1 => vec![Check::CompactnessNotions { space: gen::space_where(rng, Profile::All, |x| x.is_t0()).to_raw() }],
        2 | 3 => maps(rng, suite == 2),
        4 => vec![Check::WedgeVsPlus { space: gen::space(rng, Profile::S2Only).to_raw() }],
        5 => plus_sequential(rng),
        6 => s_compact_sets(rng),
        7 => diagram(rng),
        8 => {
            let x = gen::space(rng, Profile::All);
            let raw = x.to_raw();
            (0..SETS).map(|_| Check::CocompactForm { space: raw.clone(), set: gen::mixed_set(rng, &x) }).collect()
        }
        9 => {
            let x = gen::space(rng, Profile::All);
            let externology = gen::externology(rng, &x);
            vec![Check::Coreflection { space: x.to_raw(), externology }]
        }
        SHEAF if case + 1 == case_count(suite, samples) => vec![Check::NonCover],
        SHEAF => gluing(rng),
        YONEDA => candidates(rng, [Fixture::One, Fixture::NPlus, Fixture::N][case], samples.div_ceil(2)),
        _ => unreachable!("suite index out of range"),
    }
}

fn proper_vs_no_conv(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let i = gen::instance_where(rng, Profile::S2Only, gen::nonempty);
    let x = i.ext.space();
    let raw = x.to_raw();
    i.sequences
        .iter()
        .cloned()
        .chain(sequences::generic_sequences(x))
        .map(|seq| Check::ProperVsNoConv { space: raw.clone(), seq })
        .collect()
}

fn maps(rng: &mut ChaCha8Rng, direct: bool) -> Vec<Check> {
    let i = gen::instance(rng, Profile::All);
    let domain = i.ext.space().to_raw();
    i.maps
        .into_iter()
        .map(|(y, map)| {
            let (domain, codomain) = (domain.clone(), y.to_raw());
            if direct {
                Check::ProperVsSeqProper { domain, codomain, map }
            } else {
                Check::PlusMap { domain, codomain, map }
            }
        })
        .collect()
}

fn plus_sequential(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let x = gen::space(rng, Profile::All);
    let p = plus(&x);
    let plus_space = p.space().to_raw();
    std::iter::once(Check::OmegaSequential { space: x.to_raw() })
        .chain((0..PLUS_SETS).map(|_| Check::PlusOpenSet { plus_space: plus_space.clone(), set: gen::mixed_set(rng, p.space()) }))
        .collect()
}

/// Closed sets: complements of open sets, or unions of closures.
fn closed_set(rng: &mut ChaCha8Rng, x: &extseq_core::SpacePres) -> EvSet {
    let u = x.universe();
    if rng.gen_bool(0.6) {
        return gen::open_set(rng, x).complement(u).expect("same universe");
    }
    let mut c = EvSet::empty(u);
    for p in x.points() {
        if rng.gen_bool(0.3) {
            c = c.union(&x.point_closure(p), u).expect("same universe");
        }
    }
    for t in x.tails() {
        if rng.gen_bool(0.3) {
            c = c.union(&x.tail_closure(t), u).expect("same universe");
        }
    }
    c
}

fn s_compact_sets(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let x = gen::space(rng, Profile::All);
    let raw = x.to_raw();
    (0..SETS).map(|_| Check::SCompactSet { space: raw.clone(), set: closed_set(rng, &x) }).collect()
}

fn diagram(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let x = gen::space(rng, Profile::All);
    let externology = gen::externology(rng, &x);
    let e = ExtSpace::new(x.clone(), externology.clone()).expect("generated externology is valid");
    let mut checks = vec![
        Check::DiagramPlus { space: x.to_raw() },
        Check::BarInfinity { space: x.to_raw(), externology },
    ];
    for b in [infinity(&e), plus(&x)] {
        checks.push(Check::InfinityBar { space: b.space().to_raw(), base: b.base().clone() });
    }
    checks
}

/// Every residue modulo `l` gets a progression; then a few extra generators.
fn covering_ideal(rng: &mut ChaCha8Rng) -> Ideal {
    let l = rng.gen_range(1..=MAX_AFFINE);
    let mut gens: Vec<(u64, u64)> = (0..l).map(|r| (l, r + l * rng.gen_range(0..=(MAX_AFFINE - r) / l))).collect();
    for _ in 0..rng.gen_range(0..=2) {
        gens.push((rng.gen_range(1..=MAX_AFFINE), rng.gen_range(0..=MAX_AFFINE)));
    }
    gens.shuffle(rng);
    Ideal::affine(Monoid::M, &gens)
}

/// An exterior sequence built from re-walked generic exterior threads.
fn exterior_seq(rng: &mut ChaCha8Rng, e: &ExtSpace, base: &[FPSeq]) -> FPSeq {
    let threads = (0..rng.gen_range(1..=3))
        .map(|_| match base.choose(rng).expect("nonempty").threads[0].clone() {
            Thread::Walk { tail, .. } => {
                Thread::Walk { tail, a: rng.gen_range(1..=MAX_AFFINE), b: rng.gen_range(0..=MAX_AFFINE) }
            }
            c => c,
        })
        .collect();
    let prefix = (0..rng.gen_range(0..=3)).map(|_| gen::point_ref(rng, e.space())).collect();
    FPSeq { prefix, threads }
}

fn gluing(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (e, base) = loop {
        let x = gen::space(rng, Profile::All);
        let ext = gen::externology(rng, &x);
        let e = ExtSpace::new(x, ext).expect("generated externology is valid");
        let base = e.generic_exterior_sequences();
        if !base.is_empty() {
            break (e, base);
        }
    };
    let space = e.space().to_raw();
    let externology = e.ext().clone();
    (0..IDEALS)
        .map(|_| Check::Gluing {
            space: space.clone(),
            externology: externology.clone(),
            ideal: covering_ideal(rng),
            seq: exterior_seq(rng, &e, &base),
            other: exterior_seq(rng, &e, &base),
        })
        .collect()
}

pub fn candidates(rng: &mut ChaCha8Rng, fixture: Fixture, count: usize) -> Vec<Check> {
    let (e, y): (ExtSpace, Box<dyn CSet>) = match fixture {
        Fixture::One => (fixtures::one_discrete(), Box::new(YonedaOne)),
        Fixture::NPlus => (
            ExtSpace::new(fixtures::nplus(), Default::default()).expect("fixture"),
            Box::new(YonedaNPlus),
        ),
        Fixture::N => (fixtures::nn_cocompact(), Box::new(YonedaN)),
    };
    let sigma = build_sigma(&e);
    let x = e.space();
    let (conv_y, conv_s, ext_y, ext_s) = (y.sample_conv(count), sigma.sample_conv(count), y.sample_ext(count), sigma.sample_ext(count));
    (0..count)
        .map(|k| {
            let candidate = match (k % 3, rng.gen_range(0..3)) {
                (0, _) => Candidate::Point(gen::point_ref(rng, x)),
                (1, 0) if !conv_y.is_empty() => Candidate::Conv(conv_y[k % conv_y.len()].clone()),
                (1, 1) if !conv_s.is_empty() => Candidate::Conv(conv_s[k % conv_s.len()].clone()),
                (1, _) => Candidate::Conv(CElem { seq: gen::seq(rng, x), limit: gen::point_ref(rng, x) }),
                (_, 0) if !ext_y.is_empty() => Candidate::Ext(ext_y[k % ext_y.len()].clone()),
                (_, 1) if !ext_s.is_empty() => Candidate::Ext(ext_s[k % ext_s.len()].clone()),
                _ => Candidate::Ext(gen::seq(rng, x)),
            };
            Check::Yoneda { fixture, candidate }
        })
        .collect()
}
