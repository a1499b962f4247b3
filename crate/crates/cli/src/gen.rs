//! Seeded instance generation.
//!
//! Everything is driven by a `ChaCha8Rng`, so a seed fixes the whole stream.
//! Bounds: at most 6 finite points, 4 tails, and affine parameters up to 8.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use extseq_core::exteriority::{ExtSpace, Externology};
use extseq_core::{EvSet, FPMap, FPSeq, PointId, PointRef, RawSpace, SpacePres, TailImage, TailTrace, Thread};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::io::{self, ParseError};

pub const MAX_POINTS: usize = 6;
pub const MAX_TAILS: usize = 4;
pub const MAX_AFFINE: u64 = 8;
pub const SEQS_PER_INSTANCE: usize = 50;
pub const MAPS_PER_INSTANCE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Finite,
    Tailed,
    S2Only,
    All,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "finite" => Ok(Profile::Finite),
            "tailed" => Ok(Profile::Tailed),
            "s2-only" => Ok(Profile::S2Only),
            "all" => Ok(Profile::All),
            _ => Err(format!("unknown profile `{s}` (expected finite, tailed, s2-only or all)")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Finite => "finite",
            Profile::Tailed => "tailed",
            Profile::S2Only => "s2-only",
            Profile::All => "all",
        })
    }
}

/// SplitMix64 finaliser; decorrelates the seeds of neighbouring cases.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn raw_space(rng: &mut ChaCha8Rng, tails_range: (usize, usize)) -> RawSpace {
    let n = rng.gen_range(0..=MAX_POINTS);
    let m = rng.gen_range(tails_range.0..=tails_range.1);
    let density = [0.0, 0.1, 0.25, 0.4][rng.gen_range(0..4)];
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    // rel[i][j]: p_j ∈ U_{p_i}
    let mut rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j || rng.gen_bool(density)).collect()).collect();
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
    let attach_p = [0.2, 0.35, 0.5][rng.gen_range(0..3)];
    let attach = tails
        .iter()
        .map(|t| (t.clone(), points.iter().filter(|_| rng.gen_bool(attach_p)).cloned().collect()))
        .collect();
    RawSpace { points, min_open, tails, attach }
}

pub fn space(rng: &mut ChaCha8Rng, profile: Profile) -> SpacePres {
    let tails = match profile {
        Profile::Finite => (0, 0),
        Profile::Tailed => (1, MAX_TAILS),
        Profile::S2Only | Profile::All => (0, MAX_TAILS),
    };
    loop {
        let x = SpacePres::new(&raw_space(rng, tails)).expect("generated presentations are valid");
        if profile != Profile::S2Only || x.report().s2 {
            return x;
        }
    }
}

/// A space drawn from `profile` that also satisfies `keep`.
pub fn space_where(rng: &mut ChaCha8Rng, profile: Profile, keep: impl Fn(&SpacePres) -> bool) -> SpacePres {
    loop {
        let x = space(rng, profile);
        if keep(&x) {
            return x;
        }
    }
}

pub fn nonempty(x: &SpacePres) -> bool {
    !x.points().is_empty() || !x.tails().is_empty()
}

/// A raw externology: not necessarily canonical.
pub fn externology(rng: &mut ChaCha8Rng, x: &SpacePres) -> Externology {
    let p_l = [0.0, 0.25, 0.5][rng.gen_range(0..3)];
    Externology {
        l: x.points().iter().filter(|_| rng.gen_bool(p_l)).cloned().collect(),
        d: x.tails().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect(),
    }
}

pub fn point_ref(rng: &mut ChaCha8Rng, x: &SpacePres) -> PointRef {
    let pts: Vec<&PointId> = x.points().iter().collect();
    let tails: Vec<_> = x.tails().iter().collect();
    assert!(!pts.is_empty() || !tails.is_empty(), "no points to pick from");
    if !pts.is_empty() && (tails.is_empty() || rng.gen_bool(0.5)) {
        PointRef::Point((*pts.choose(rng).unwrap()).clone())
    } else {
        PointRef::Tail { tail: (*tails.choose(rng).unwrap()).clone(), index: rng.gen_range(0..=MAX_AFFINE) }
    }
}

pub fn thread(rng: &mut ChaCha8Rng, x: &SpacePres) -> Thread {
    let tails: Vec<_> = x.tails().iter().collect();
    if !tails.is_empty() && rng.gen_bool(0.6) {
        Thread::Walk {
            tail: (*tails.choose(rng).unwrap()).clone(),
            a: rng.gen_range(1..=MAX_AFFINE),
            b: rng.gen_range(0..=MAX_AFFINE),
        }
    } else {
        Thread::Const(point_ref(rng, x))
    }
}

pub fn seq(rng: &mut ChaCha8Rng, x: &SpacePres) -> FPSeq {
    let prefix = (0..rng.gen_range(0..=3)).map(|_| point_ref(rng, x)).collect();
    let threads = (0..rng.gen_range(1..=3)).map(|_| thread(rng, x)).collect();
    FPSeq { prefix, threads }
}

fn exceptions(rng: &mut ChaCha8Rng, y: &SpacePres) -> BTreeMap<u64, PointRef> {
    (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(0..=MAX_AFFINE), point_ref(rng, y))).collect()
}

fn tail_image(rng: &mut ChaCha8Rng, y: &SpacePres) -> TailImage {
    let tails: Vec<_> = y.tails().iter().collect();
    let exceptions = exceptions(rng, y);
    if !tails.is_empty() && rng.gen_bool(0.5) {
        TailImage::ToTail {
            tail: (*tails.choose(rng).unwrap()).clone(),
            a: rng.gen_range(1..=MAX_AFFINE),
            b: rng.gen_range(0..=MAX_AFFINE),
            exceptions,
        }
    } else {
        TailImage::ToConst { point: point_ref(rng, y), exceptions }
    }
}

/// A map `x → y`, which must be nonempty unless `x` is.
pub fn map(rng: &mut ChaCha8Rng, x: &SpacePres, y: &SpacePres) -> FPMap {
    if !nonempty(y) {
        return FPMap::default();
    }
    FPMap {
        on_points: x.points().iter().map(|p| (p.clone(), point_ref(rng, y))).collect(),
        on_tails: x.tails().iter().map(|t| (t.clone(), tail_image(rng, y))).collect(),
    }
}

/// The identity with every tail re-walked and a few exceptions: continuous,
/// and worth testing for properness.
pub fn self_map(rng: &mut ChaCha8Rng, x: &SpacePres) -> FPMap {
    let mut f = FPMap::identity(x);
    for (t, img) in f.on_tails.iter_mut() {
        *img = TailImage::ToTail {
            tail: t.clone(),
            a: rng.gen_range(1..=3),
            b: rng.gen_range(0..=MAX_AFFINE),
            exceptions: exceptions(rng, x),
        };
    }
    f
}

/// A map together with its codomain.
pub fn map_case(rng: &mut ChaCha8Rng, x: &SpacePres) -> (SpacePres, FPMap) {
    match rng.gen_range(0..6) {
        0 | 1 => (x.clone(), self_map(rng, x)),
        2 => {
            let y = space_where(rng, Profile::All, nonempty);
            let p = point_ref(rng, &y);
            let f = FPMap {
                on_points: x.points().iter().map(|q| (q.clone(), p.clone())).collect(),
                on_tails: x
                    .tails()
                    .iter()
                    .map(|t| (t.clone(), TailImage::ToConst { point: p.clone(), exceptions: BTreeMap::new() }))
                    .collect(),
            };
            (y, f)
        }
        3 => {
            let f = map(rng, x, x);
            (x.clone(), f)
        }
        _ => {
            let y = space_where(rng, Profile::All, nonempty);
            let f = map(rng, x, &y);
            (y, f)
        }
    }
}

pub fn evset(rng: &mut ChaCha8Rng, x: &SpacePres) -> EvSet {
    let mut s = EvSet::empty(x.universe());
    s.finite = x.points().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    for t in x.tails() {
        let flips: BTreeSet<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..=MAX_AFFINE)).collect();
        s.tails.insert(t.clone(), TailTrace { eventual: rng.gen_bool(0.5), flips });
    }
    s
}

/// `U_x` together with every tail `x` captures, from index `k` on.
pub fn basic_neighbourhood(x: &SpacePres, p: &PointId, k: u64) -> EvSet {
    let mut s = EvSet::empty(x.universe());
    s.finite = x.min_open(p).clone();
    for t in x.captured_tails(p) {
        s.tails.insert(t.clone(), TailTrace::from_index(k));
    }
    s
}

/// An open set: basic neighbourhoods plus a few tail points.
pub fn open_set(rng: &mut ChaCha8Rng, x: &SpacePres) -> EvSet {
    let mut s = EvSet::empty(x.universe());
    for p in x.points() {
        if rng.gen_bool(0.35) {
            let nb = basic_neighbourhood(x, p, rng.gen_range(0..=MAX_AFFINE));
            s = s.union(&nb, x.universe()).expect("same universe");
        }
    }
    for t in x.tails() {
        let mut tr = s.tails[t].clone();
        for _ in 0..rng.gen_range(0..=2) {
            let m = rng.gen_range(0..=MAX_AFFINE);
            if !tr.contains(m) {
                tr.flips.insert(m);
            }
        }
        if !tr.eventual && rng.gen_bool(0.25) {
            tr = TailTrace::from_index(rng.gen_range(0..=MAX_AFFINE));
        }
        s.tails.insert(t.clone(), tr);
    }
    s
}

/// Open, closed or arbitrary, in equal measure.
pub fn mixed_set(rng: &mut ChaCha8Rng, x: &SpacePres) -> EvSet {
    match rng.gen_range(0..3) {
        0 => open_set(rng, x),
        1 => open_set(rng, x).complement(x.universe()).expect("same universe"),
        _ => evset(rng, x),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ext: ExtSpace,
    pub sequences: Vec<FPSeq>,
    pub maps: Vec<(SpacePres, FPMap)>,
}

pub fn instance(rng: &mut ChaCha8Rng, profile: Profile) -> Instance {
    instance_where(rng, profile, |_| true)
}

pub fn instance_where(rng: &mut ChaCha8Rng, profile: Profile, keep: impl Fn(&SpacePres) -> bool) -> Instance {
    let x = space_where(rng, profile, keep);
    let e = externology(rng, &x);
    let sequences = if nonempty(&x) { (0..SEQS_PER_INSTANCE).map(|_| seq(rng, &x)).collect() } else { Vec::new() };
    let maps = (0..MAPS_PER_INSTANCE).map(|_| map_case(rng, &x)).collect();
    Instance { ext: ExtSpace::new(x, e).expect("generated externology is valid"), sequences, maps }
}

/// `count` instances; the `i`-th depends only on `seed` and `i`.
pub fn generate_instances(seed: u64, count: usize, profile: Profile) -> Vec<Instance> {
    (0..count as u64).map(|i| instance(&mut rng(sub_seed(seed, i)), profile)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub codomain: RawSpace,
    pub map: FPMap,
}

/// On-disk form of an [`Instance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub space: RawSpace,
    pub externology: Externology,
    #[serde(default)]
    pub sequences: Vec<FPSeq>,
    #[serde(default)]
    pub maps: Vec<MapFile>,
}

impl From<&Instance> for InstanceFile {
    fn from(i: &Instance) -> Self {
        InstanceFile {
            space: i.ext.space().to_raw(),
            externology: i.ext.ext().clone(),
            sequences: i.sequences.clone(),
            maps: i.maps.iter().map(|(y, f)| MapFile { codomain: y.to_raw(), map: f.clone() }).collect(),
        }
    }
}

impl InstanceFile {
    pub fn validate(&self) -> Result<Instance, ParseError> {
        let x = io::check_space(&self.space, "space")?;
        let ext = io::in_space(ExtSpace::new(x.clone(), self.externology.clone()), "externology")?;
        for (i, s) in self.sequences.iter().enumerate() {
            let at = format!("sequences[{i}]");
            io::check_seq(s, &at)?;
            io::in_space(s.validate(&x), &at)?;
        }
        let mut maps = Vec::new();
        for (i, m) in self.maps.iter().enumerate() {
            let y = io::check_space(&m.codomain, &format!("maps[{i}].codomain"))?;
            let at = format!("maps[{i}].map");
            io::check_map(&m.map, &at)?;
            io::in_space(m.map.validate(&x, &y), &at)?;
            maps.push((y, m.map.clone()));
        }
        Ok(Instance { ext, sequences: self.sequences.clone(), maps })
    }
}
