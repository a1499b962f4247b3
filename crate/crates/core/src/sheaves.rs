//! ℂ-sets, ideals of the monoids `M` and `M⁺`, the covering families of
//! `J_c` and `J_e`, and the gluing checker.
//!
//! `ℕ` is the tail space [`fixtures::nn`] and `ℕ⁺` is [`fixtures::nplus`].
//! An element of `M` is an [`FPSeq`] over `ℕ` all of whose threads walk,
//! that is a finite-to-one self-map of `ℕ`. An element of `M⁺`, and more
//! generally a convergent sequence with a chosen limit, is a [`CElem`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exteriority::ExtSpace;
use crate::fixtures;
use crate::maps::FPMap;
use crate::sequences::{self, gcd, lcm, AffineInj, FPSeq, Thread};
use crate::sets::{PointRef, TailId};
use crate::spaces::SpacePres;

/// The tail carrying the naturals in both `ℕ` and `ℕ⁺`.
pub const NAT_TAIL: &str = "n";
/// The point at infinity of `ℕ⁺`.
pub const INF: &str = "inf";

pub fn nat(m: u64) -> PointRef {
    PointRef::tail(NAT_TAIL, m)
}

pub fn inf() -> PointRef {
    PointRef::point(INF)
}

/// A map `ℕ⁺ → X`: the sequence of its values on the naturals and its value at `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CElem {
    pub seq: FPSeq,
    pub limit: PointRef,
}

impl CElem {
    pub fn constant(p: PointRef) -> Self {
        CElem { seq: FPSeq::constant(p.clone()), limit: p }
    }

    /// `u ↦ a*u + b` on the naturals and `∞ ↦ ∞`.
    pub fn affine(u: AffineInj) -> Self {
        CElem { seq: FPSeq::walk(NAT_TAIL, u.a, u.b), limit: inf() }
    }

    pub fn same_as(&self, other: &CElem) -> bool {
        self.limit == other.limit && self.seq.same_as(&other.seq)
    }

    pub fn ev(&self, n: u64) -> PointRef {
        self.seq.at(n)
    }
}

fn nat_index(p: &PointRef) -> Result<u64> {
    match p {
        PointRef::Tail { tail, index } if tail.0 == NAT_TAIL => Ok(*index),
        _ => Err(Error::CarrierMismatch(format!("`{p}` is not a natural number"))),
    }
}

/// `outer ∘ inner`, where `inner` is a sequence in `ℕ` or `ℕ⁺` and `outer`
/// is defined on it; `at_inf` is the value of `outer` at `∞`, if it has one.
pub fn precompose(outer: &FPSeq, at_inf: Option<&PointRef>, inner: &FPSeq) -> Result<FPSeq> {
    let value = |p: &PointRef| -> Result<PointRef> {
        match p {
            PointRef::Point(x) if x.0 == INF => {
                at_inf.cloned().ok_or_else(|| Error::CarrierMismatch("∞ is outside the domain".into()))
            }
            _ => Ok(outer.at(nat_index(p)?)),
        }
    };
    let pieces = inner
        .threads
        .iter()
        .map(|th| match th {
            Thread::Walk { tail, a, b } if tail.0 == NAT_TAIL => Ok(outer.subseq(&AffineInj { a: *a, b: *b })),
            Thread::Walk { tail, .. } => Err(Error::UnknownTail(tail.0.clone())),
            Thread::Const(p) => Ok(FPSeq::constant(value(p)?)),
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pieces.iter().map(|s| s.prefix.len()).max().unwrap_or(0) as u64;
    let pieces: Vec<FPSeq> = pieces.iter().map(|s| s.advance(n - s.prefix.len() as u64)).collect();
    let t = pieces.iter().fold(1, |acc, s| lcm(acc, s.period()));
    let pieces: Vec<FPSeq> = pieces.iter().map(|s| s.rethread(t / s.period())).collect();
    let tw = inner.period();
    let prefix_len = inner.prefix.len() as u64 + tw * n;
    let prefix = (0..prefix_len).map(|k| value(&inner.at(k))).collect::<Result<Vec<_>>>()?;
    let threads = (0..tw * t)
        .map(|i| pieces[(i % tw) as usize].threads[(i / tw) as usize].clone())
        .collect();
    Ok(FPSeq { prefix, threads })
}

/// `c ∘ u` for `c: ℕ⁺ → X` and `u: ℕ⁺ → ℕ⁺`.
pub fn compose_c(c: &CElem, u: &CElem) -> Result<CElem> {
    let seq = precompose(&c.seq, Some(&c.limit), &u.seq)?;
    let limit = if u.limit == inf() { c.limit.clone() } else { c.seq.at(nat_index(&u.limit)?) };
    Ok(CElem { seq, limit })
}

/// `s ∘ u` for `s: ℕ → X` and `u ∈ M`.
pub fn compose_e(s: &FPSeq, u: &FPSeq) -> Result<FPSeq> {
    precompose(s, None, u)
}

/// `s ∘ c_n`, the constant map at `s(n)`.
pub fn compose_const(s: &FPSeq, n: u64) -> CElem {
    CElem::constant(s.at(n))
}

/// `s ∘ c` for `s: ℕ → X` and `c: ℕ⁺ → ℕ`.
pub fn compose_e_c(s: &FPSeq, c: &CElem) -> Result<CElem> {
    Ok(CElem { seq: precompose(s, None, &c.seq)?, limit: s.at(nat_index(&c.limit)?) })
}

/// An element of `M`: every value is a natural and every thread walks.
pub fn is_m_elem(s: &FPSeq) -> bool {
    s.validate(&fixtures::nn()).is_ok() && s.threads.iter().all(|th| matches!(th, Thread::Walk { .. }))
}

/// An element of `M⁺`: a continuous self-map of `ℕ⁺`.
pub fn is_mplus_elem(c: &CElem) -> bool {
    let np = fixtures::nplus();
    c.seq.validate(&np).is_ok()
        && np.check_point(&c.limit).is_ok()
        && sequences::limit_set(&np, &c.seq).is_ok_and(|l| l.contains(&c.limit))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Monoid {
    M,
    MPlus,
}

/// A generator of a right ideal. Over `M⁺` affine generators fix `∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Generator {
    Affine(AffineInj),
    Const(PointRef),
}

impl Generator {
    pub fn as_m_elem(&self) -> Option<FPSeq> {
        match self {
            Generator::Affine(u) => Some(FPSeq::walk(NAT_TAIL, u.a, u.b)),
            Generator::Const(_) => None,
        }
    }

    pub fn as_mplus_elem(&self) -> CElem {
        match self {
            Generator::Affine(u) => CElem::affine(*u),
            Generator::Const(p) => CElem::constant(p.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ideal {
    pub carrier: Monoid,
    pub generators: Vec<Generator>,
}

/// An element of one of the two monoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    M(FPSeq),
    MPlus(CElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes { generator: usize, witness: Element },
    No,
}

/// `w` with `gen ∘ w = g`, if one exists.
pub fn affine_divide(g: &AffineInj, gen: &AffineInj) -> Option<AffineInj> {
    if g.a.is_multiple_of(gen.a) && g.b >= gen.b && (g.b - gen.b).is_multiple_of(gen.a) {
        Some(AffineInj { a: g.a / gen.a, b: (g.b - gen.b) / gen.a })
    } else {
        None
    }
}

/// Divides every value of `s` by the affine map, thread by thread.
fn divide_seq(s: &FPSeq, gen: &AffineInj) -> Option<FPSeq> {
    let divide_point = |p: &PointRef| -> Option<PointRef> {
        match p {
            PointRef::Tail { index, .. } => {
                let q = affine_divide(&AffineInj { a: gen.a, b: *index }, gen)?;
                Some(nat(q.b))
            }
            PointRef::Point(_) => Some(p.clone()),
        }
    };
    let prefix = s.prefix.iter().map(divide_point).collect::<Option<Vec<_>>>()?;
    let threads = s
        .threads
        .iter()
        .map(|th| match th {
            Thread::Walk { tail, a, b } => {
                let w = affine_divide(&AffineInj { a: *a, b: *b }, gen)?;
                Some(Thread::Walk { tail: tail.clone(), a: w.a, b: w.b })
            }
            Thread::Const(p) => Some(Thread::Const(divide_point(p)?)),
        })
        .collect::<Option<Vec<_>>>()?;
    Some(FPSeq { prefix, threads })
}

impl Ideal {
    pub fn new(carrier: Monoid, generators: Vec<Generator>) -> Result<Self> {
        let ideal = Ideal { carrier, generators };
        ideal.validate()?;
        Ok(ideal)
    }

    pub fn affine(carrier: Monoid, gens: &[(u64, u64)]) -> Self {
        Ideal {
            carrier,
            generators: gens.iter().map(|&(a, b)| Generator::Affine(AffineInj { a, b })).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.generators {
            match g {
                Generator::Affine(u) if u.a == 0 => return Err(Error::NotInjective(0)),
                Generator::Const(_) if self.carrier == Monoid::M => {
                    return Err(Error::CarrierMismatch("M has no constant elements".into()))
                }
                Generator::Const(p) => fixtures::nplus().check_point(p)?,
                Generator::Affine(_) => {}
            }
        }
        Ok(())
    }

    fn affine_generators(&self) -> impl Iterator<Item = (usize, &AffineInj)> {
        self.generators.iter().enumerate().filter_map(|(i, g)| match g {
            Generator::Affine(u) => Some((i, u)),
            Generator::Const(_) => None,
        })
    }

    /// `g ∈ I`. Exact: `g = gen ∘ w` forces `w = (g - b) / a` value by
    /// value, and such a quotient is again in the monoid.
    pub fn member(&self, g: &Element) -> Result<Membership> {
        match (self.carrier, g) {
            (Monoid::M, Element::M(s)) => {
                if !is_m_elem(s) {
                    return Err(Error::CarrierMismatch("not an element of M".into()));
                }
                for (i, gen) in self.affine_generators() {
                    if let Some(w) = divide_seq(s, gen) {
                        return Ok(Membership::Yes { generator: i, witness: Element::M(w) });
                    }
                }
                Ok(Membership::No)
            }
            (Monoid::MPlus, Element::MPlus(c)) => {
                if !is_mplus_elem(c) {
                    return Err(Error::CarrierMismatch("not an element of M⁺".into()));
                }
                for (i, gen) in self.generators.iter().enumerate() {
                    match gen {
                        Generator::Affine(u) => {
                            let limit = match &c.limit {
                                PointRef::Tail { index, .. } => affine_divide(&AffineInj { a: u.a, b: *index }, u)
                                    .map(|q| nat(q.b)),
                                p => Some(p.clone()),
                            };
                            if let (Some(seq), Some(limit)) = (divide_seq(&c.seq, u), limit) {
                                return Ok(Membership::Yes { generator: i, witness: Element::MPlus(CElem { seq, limit }) });
                            }
                        }
                        Generator::Const(p) => {
                            if c.same_as(&CElem::constant(p.clone())) {
                                let id = CElem::affine(AffineInj::IDENTITY);
                                return Ok(Membership::Yes { generator: i, witness: Element::MPlus(id) });
                            }
                        }
                    }
                }
                Ok(Membership::No)
            }
            _ => Err(Error::CarrierMismatch("element and ideal live over different monoids".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Topology {
    Jc,
    Je,
}

/// Every residue modulo `modulus` is hit, past `offset`, by the affine
/// generator listed for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverCertificate {
    pub modulus: u64,
    pub offset: u64,
    pub residue_generator: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CoverWitness {
    /// `u ∘ v ∉ I` for every monotone injective `v`.
    Affine(AffineInj),
    /// A constant map missing from the ideal.
    Constant(PointRef),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Cover {
    Yes(CoverCertificate),
    No(CoverWitness),
    Unknown,
}

/// Residue enumeration is skipped beyond this modulus.
pub const CERTIFICATE_MODULUS_CAP: u64 = 1 << 20;

/// The two progressions `a*n + b` meet infinitely often.
fn progressions_meet(u: &AffineInj, v: &AffineInj) -> bool {
    (u.b.max(v.b) - u.b.min(v.b)).is_multiple_of(gcd(u.a, v.a))
}

fn in_progression(m: u64, u: &AffineInj) -> bool {
    m >= u.b && (m - u.b).is_multiple_of(u.a)
}

/// Covering test.
///
/// A right ideal generated by affine maps satisfies the second covering
/// condition iff every infinite set of naturals meets one progression
/// infinitely often, that is iff the progressions cover all but finitely
/// many naturals. That is decided on residues modulo the lcm of the
/// steps. When the modulus exceeds [`CERTIFICATE_MODULUS_CAP`], affine `u`
/// with parameters up to `budget` are tested one at a time.
pub fn is_cover(ideal: &Ideal, topology: Topology, budget: u64) -> Result<Cover> {
    ideal.validate()?;
    let expected = match topology {
        Topology::Jc => Monoid::MPlus,
        Topology::Je => Monoid::M,
    };
    if ideal.carrier != expected {
        return Err(Error::CarrierMismatch(format!("{topology:?} lives over {expected:?}")));
    }
    let affine: Vec<(usize, AffineInj)> = ideal.affine_generators().map(|(i, u)| (i, *u)).collect();
    let constants: BTreeSet<&PointRef> = ideal
        .generators
        .iter()
        .filter_map(|g| match g {
            Generator::Const(p) => Some(p),
            Generator::Affine(_) => None,
        })
        .collect();
    if affine.is_empty() {
        return Ok(Cover::No(CoverWitness::Affine(AffineInj::IDENTITY)));
    }
    let modulus = affine.iter().try_fold(1u64, |acc, (_, u)| {
        let l = lcm(acc, u.a);
        (l <= CERTIFICATE_MODULUS_CAP).then_some(l)
    });
    let offset = affine.iter().map(|(_, u)| u.b).max().unwrap_or(0);
    let Some(modulus) = modulus else {
        for a in 1..=budget {
            for b in 0..=budget {
                let u = AffineInj { a, b };
                if !affine.iter().any(|(_, g)| progressions_meet(&u, g)) {
                    return Ok(Cover::No(CoverWitness::Affine(u)));
                }
            }
        }
        return Ok(Cover::Unknown);
    };
    let mut residue_generator = Vec::with_capacity(modulus as usize);
    for r in 0..modulus {
        // smallest representative of r at or past the offset
        let v = offset + (r + modulus - offset % modulus) % modulus;
        match affine.iter().find(|(_, g)| in_progression(v, g)) {
            Some((i, _)) => residue_generator.push(*i),
            None => return Ok(Cover::No(CoverWitness::Affine(AffineInj { a: modulus, b: v }))),
        }
    }
    if topology == Topology::Jc {
        for m in 0..offset {
            let p = nat(m);
            if !constants.contains(&p) && !affine.iter().any(|(_, g)| in_progression(m, g)) {
                return Ok(Cover::No(CoverWitness::Constant(p)));
            }
        }
    }
    Ok(Cover::Yes(CoverCertificate { modulus, offset, residue_generator }))
}

/// A presheaf on `ℂ` presented by deciders for its three components and
/// deterministic enumerators of sample elements. Restriction along
/// morphisms of `ℂ` is composition, given by [`compose_c`], [`compose_e`],
/// [`compose_const`] and evaluation.
pub trait CSet {
    fn is_point(&self, p: &PointRef) -> bool;
    fn is_conv(&self, c: &CElem) -> bool;
    fn is_ext(&self, s: &FPSeq) -> bool;
    fn sample_points(&self, count: usize) -> Vec<PointRef>;
    fn sample_conv(&self, count: usize) -> Vec<CElem>;
    fn sample_ext(&self, count: usize) -> Vec<FPSeq>;
}

/// `Σ(E) = (X, Σ_c⁺(X), Σ_e(X))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma {
    pub ext: ExtSpace,
}

pub fn build_sigma(e: &ExtSpace) -> Sigma {
    Sigma { ext: e.clone() }
}

fn all_point_refs(space: &SpacePres, per_tail: u64) -> Vec<PointRef> {
    let finite = space.points().iter().map(|p| PointRef::Point(p.clone()));
    let tails = space
        .tails()
        .iter()
        .flat_map(|t| (0..per_tail).map(move |m| PointRef::Tail { tail: t.clone(), index: m }));
    finite.chain(tails).collect()
}

/// Small variations of a base sequence: prefixes and re-indexed walks.
fn variations(base: &[FPSeq], extra: &[PointRef], count: usize) -> Vec<FPSeq> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0usize;
    while out.len() < count && !base.is_empty() {
        let mut s = base[i % base.len()].clone();
        let round = (i / base.len()) as u64;
        if round % 2 == 1 {
            s = s.subseq(&AffineInj { a: 1 + round % 3, b: round % 5 });
        }
        if !extra.is_empty() {
            for k in 0..(round % 3) as usize {
                s.prefix.insert(0, extra[(i + k) % extra.len()].clone());
            }
        }
        if round % 4 == 2 && base.len() > 1 {
            let other = &base[(i + 1) % base.len()];
            let mut threads = s.threads.clone();
            threads.extend(other.threads.iter().cloned());
            s = FPSeq { prefix: s.prefix, threads };
        }
        out.push(s);
        i += 1;
    }
    out
}

impl CSet for Sigma {
    fn is_point(&self, p: &PointRef) -> bool {
        self.ext.space().check_point(p).is_ok()
    }

    fn is_conv(&self, c: &CElem) -> bool {
        let x = self.ext.space();
        x.check_point(&c.limit).is_ok() && sequences::limit_set(x, &c.seq).is_ok_and(|l| l.contains(&c.limit))
    }

    fn is_ext(&self, s: &FPSeq) -> bool {
        self.ext.is_exterior_seq(s).unwrap_or(false)
    }

    fn sample_points(&self, count: usize) -> Vec<PointRef> {
        all_point_refs(self.ext.space(), 4).into_iter().cycle().take(count).collect()
    }

    fn sample_conv(&self, count: usize) -> Vec<CElem> {
        let x = self.ext.space();
        let mut base = Vec::new();
        for s in sequences::generic_sequences(x) {
            for l in sequences::limit_set(x, &s).unwrap_or_default() {
                base.push(CElem { seq: s.clone(), limit: l });
            }
        }
        let extra = all_point_refs(x, 3);
        let mut out = Vec::with_capacity(count);
        let mut i = 0usize;
        while out.len() < count && !base.is_empty() {
            let c = &base[i % base.len()];
            let round = i / base.len();
            let mut seq = variations(std::slice::from_ref(&c.seq), &extra, round + 1).pop().expect("nonempty");
            // mix in further threads converging to the same limit
            if round % 3 == 2 {
                if let Some(other) = base.iter().find(|d| d.limit == c.limit && d.seq != c.seq) {
                    seq.threads.extend(other.seq.threads.iter().cloned());
                }
            }
            out.push(CElem { seq, limit: c.limit.clone() });
            i += 1;
        }
        out
    }

    fn sample_ext(&self, count: usize) -> Vec<FPSeq> {
        let base = self.ext.generic_exterior_sequences();
        variations(&base, &all_point_refs(self.ext.space(), 3), count)
    }
}

/// `y(1) = (1, 1, ∅)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct YonedaOne;

/// `y(ℕ⁺) = (ℕ⁺, M⁺, ∅)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct YonedaNPlus;

/// `y(ℕ) = (ℕ, ℂ(ℕ⁺, ℕ), M)`. The morphisms `ℕ⁺ → ℕ` of `ℂ` are the
/// continuous ones, so the middle component consists of eventually constant
/// maps whose value at `∞` is the eventual value.
#[derive(Clone, Copy, Debug, Default)]
pub struct YonedaN;

pub const ONE_POINT: &str = "pt";

impl CSet for YonedaOne {
    fn is_point(&self, p: &PointRef) -> bool {
        *p == PointRef::point(ONE_POINT)
    }

    fn is_conv(&self, c: &CElem) -> bool {
        c.same_as(&CElem::constant(PointRef::point(ONE_POINT)))
    }

    fn is_ext(&self, _: &FPSeq) -> bool {
        false
    }

    fn sample_points(&self, count: usize) -> Vec<PointRef> {
        vec![PointRef::point(ONE_POINT); count.min(1)]
    }

    fn sample_conv(&self, count: usize) -> Vec<CElem> {
        vec![CElem::constant(PointRef::point(ONE_POINT)); count.min(1)]
    }

    fn sample_ext(&self, _: usize) -> Vec<FPSeq> {
        Vec::new()
    }
}

impl CSet for YonedaNPlus {
    fn is_point(&self, p: &PointRef) -> bool {
        *p == inf() || nat_index(p).is_ok()
    }

    fn is_conv(&self, c: &CElem) -> bool {
        is_mplus_elem(c)
    }

    fn is_ext(&self, _: &FPSeq) -> bool {
        false
    }

    fn sample_points(&self, count: usize) -> Vec<PointRef> {
        std::iter::once(inf()).chain((0..).map(nat)).take(count).collect()
    }

    fn sample_conv(&self, count: usize) -> Vec<CElem> {
        sample_mplus(count)
    }

    fn sample_ext(&self, _: usize) -> Vec<FPSeq> {
        Vec::new()
    }
}

impl CSet for YonedaN {
    fn is_point(&self, p: &PointRef) -> bool {
        nat_index(p).is_ok()
    }

    fn is_conv(&self, c: &CElem) -> bool {
        nat_index(&c.limit).is_ok()
            && c.seq.prefix.iter().all(|p| nat_index(p).is_ok())
            && c.seq.threads.iter().all(|th| *th == Thread::Const(c.limit.clone()))
    }

    fn is_ext(&self, s: &FPSeq) -> bool {
        is_m_elem(s)
    }

    fn sample_points(&self, count: usize) -> Vec<PointRef> {
        (0..count as u64).map(nat).collect()
    }

    fn sample_conv(&self, count: usize) -> Vec<CElem> {
        (0..count as u64)
            .map(|i| {
                let mut c = CElem::constant(nat(i % 7));
                c.seq.prefix = (0..i % 3).map(|k| nat(k + i)).collect();
                c
            })
            .collect()
    }

    fn sample_ext(&self, count: usize) -> Vec<FPSeq> {
        sample_m(count)
    }
}

/// Deterministic sample of `M`: affine maps, interleavings and prefixes.
pub fn sample_m(count: usize) -> Vec<FPSeq> {
    (0..count as u64)
        .map(|i| {
            let mut s = FPSeq::walk(NAT_TAIL, 1 + i % 4, i % 5);
            if i % 3 == 1 {
                s.threads.push(Thread::walk(NAT_TAIL, 2 + i % 3, i % 2));
            }
            if i % 5 >= 3 {
                s.prefix = (0..i % 4).map(|k| nat((k * 7 + i) % 11)).collect();
            }
            s
        })
        .collect()
}

/// Deterministic sample of `M⁺`, including constants.
pub fn sample_mplus(count: usize) -> Vec<CElem> {
    (0..count as u64)
        .map(|i| match i % 6 {
            5 => CElem::constant(if i % 4 == 1 { inf() } else { nat(i % 9) }),
            4 => {
                let mut c = CElem::constant(nat(i % 5));
                c.seq.prefix = vec![inf(), nat(i)];
                c
            }
            _ => {
                let seq = sample_m(i as usize + 1).pop().expect("nonempty");
                let mut seq = seq;
                if i % 6 == 3 {
                    seq.threads.push(Thread::Const(inf()));
                }
                CElem { seq, limit: inf() }
            }
        })
        .collect()
}

/// A ℂ-map `(f, f_c, f_e)`.
pub struct CMap<'a> {
    pub f: Box<dyn Fn(&PointRef) -> PointRef + 'a>,
    pub f_c: Box<dyn Fn(&CElem) -> CElem + 'a>,
    pub f_e: Box<dyn Fn(&FPSeq) -> FPSeq + 'a>,
}

impl<'a> CMap<'a> {
    /// `Σ(g) = (g, g ∘ -, g ∘ -)`.
    pub fn sigma(g: &'a FPMap) -> Self {
        CMap {
            f: Box::new(move |p| g.apply(p)),
            f_c: Box::new(move |c| CElem { seq: g.after_seq(&c.seq), limit: g.apply(&c.limit) }),
            f_e: Box::new(move |s| g.after_seq(s)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Square {
    Typing,
    ConvAction,
    ExtAction,
    EvConv,
    EvInfinity,
    EvExt,
    Cte,
    ConstRestriction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CMapCheck {
    Pass,
    Fail { square: Square, detail: String },
}

/// Number of evaluation indices tested per element.
pub const EV_INDICES: u64 = 8;

/// Checks typing, equivariance and the evaluation and constant squares on samples.
pub fn cmap_check(phi: &CMap, p: &dyn CSet, q: &dyn CSet, samples: usize) -> CMapCheck {
    let fail = |square, detail: String| CMapCheck::Fail { square, detail };
    let mplus = sample_mplus(samples);
    let m = sample_m(samples);
    for x in p.sample_points(samples) {
        let fx = (phi.f)(&x);
        if !q.is_point(&fx) {
            return fail(Square::Typing, format!("f({x}) = {fx} is not a point of the target"));
        }
        if !(phi.f_c)(&CElem::constant(x.clone())).same_as(&CElem::constant(fx.clone())) {
            return fail(Square::Cte, format!("f_c(cte {x}) differs from cte f({x})"));
        }
    }
    for c in p.sample_conv(samples) {
        let fc = (phi.f_c)(&c);
        if !q.is_conv(&fc) {
            return fail(Square::Typing, format!("f_c sends {c:?} outside the target"));
        }
        if let Some(n) = (0..EV_INDICES).find(|&n| (phi.f)(&c.ev(n)) != fc.ev(n)) {
            return fail(Square::EvConv, format!("ev_{n} disagrees on {c:?}"));
        }
        if (phi.f)(&c.limit) != fc.limit {
            return fail(Square::EvInfinity, format!("ev_∞ disagrees on {c:?}"));
        }
        for u in &mplus {
            let (Ok(cu), Ok(fcu)) = (compose_c(&c, u), compose_c(&fc, u)) else {
                return fail(Square::Typing, format!("cannot restrict {c:?} along {u:?}"));
            };
            if !(phi.f_c)(&cu).same_as(&fcu) {
                return fail(Square::ConvAction, format!("f_c(c ∘ u) ≠ f_c(c) ∘ u for c = {c:?}, u = {u:?}"));
            }
        }
    }
    for s in p.sample_ext(samples) {
        let fs = (phi.f_e)(&s);
        if !q.is_ext(&fs) {
            return fail(Square::Typing, format!("f_e sends {s:?} outside the target"));
        }
        if let Some(n) = (0..EV_INDICES).find(|&n| (phi.f)(&s.at(n)) != fs.at(n)) {
            return fail(Square::EvExt, format!("ev_{n} disagrees on {s:?}"));
        }
        for n in 0..EV_INDICES {
            if !(phi.f_c)(&compose_const(&s, n)).same_as(&compose_const(&fs, n)) {
                return fail(Square::ConstRestriction, format!("f_c(s ∘ c_{n}) ≠ f_e(s) ∘ c_{n} for {s:?}"));
            }
        }
        for u in &m {
            let (Ok(su), Ok(fsu)) = (compose_e(&s, u), compose_e(&fs, u)) else {
                return fail(Square::Typing, format!("cannot restrict {s:?} along {u:?}"));
            };
            if !(phi.f_e)(&su).same_as(&fsu) {
                return fail(Square::ExtAction, format!("f_e(s ∘ u) ≠ f_e(s) ∘ u for s = {s:?}, u = {u:?}"));
            }
        }
    }
    CMapCheck::Pass
}

/// A compatible family on a covering sieve of `ℕ`: values on the ideal's
/// generators, the points `s(n)`, and a sample of the `ℕ⁺ → ℕ` component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Family {
    pub on_generators: Vec<(AffineInj, FPSeq)>,
    pub point_values: FPSeq,
    #[serde(default)]
    pub conv_values: Vec<(CElem, CElem)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Glue {
    Amalgamation(FPSeq),
    NoAmalgamation(String),
    Incompatible {
        generator: AffineInj,
        at: u64,
        family_value: PointRef,
        point_value: PointRef,
    },
}

/// The family induced by `s` on the generators of `ideal`.
pub fn restrict(s: &FPSeq, ideal: &Ideal, conv_sample: &[CElem]) -> Result<Family> {
    let on_generators = ideal
        .affine_generators()
        .map(|(_, u)| (*u, s.subseq(u)))
        .collect();
    let conv_values = conv_sample
        .iter()
        .map(|c| Ok((c.clone(), compose_e_c(s, c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Family { on_generators, point_values: s.clone(), conv_values })
}

/// Glues a family over an ideal of `M` into an element of `F(ℕ)`.
///
/// The candidate amalgamation is forced by the point values, so it is
/// unique whenever it exists; what remains is to compare it with the
/// family and ask `F` whether it is exterior.
pub fn glue(f: &dyn CSet, ideal: &Ideal, family: &Family) -> Result<Glue> {
    if ideal.carrier != Monoid::M {
        return Err(Error::CarrierMismatch("gluing is over ideals of M".into()));
    }
    let gens: BTreeSet<AffineInj> = ideal.affine_generators().map(|(_, u)| *u).collect();
    let given: BTreeSet<AffineInj> = family.on_generators.iter().map(|(u, _)| *u).collect();
    if gens != given {
        return Err(Error::Malformed("the family must assign exactly one value to each generator".into()));
    }
    let s = &family.point_values;
    if s.threads.is_empty() {
        return Err(Error::NoThreads);
    }
    for (u, h) in &family.on_generators {
        if !f.is_ext(h) {
            return Err(Error::Malformed(format!("value on {u:?} is not exterior")));
        }
        let restricted = s.subseq(u);
        if let Some(k) = h.first_difference(&restricted) {
            return Ok(Glue::Incompatible {
                generator: *u,
                at: u.apply(k),
                family_value: h.at(k),
                point_value: restricted.at(k),
            });
        }
    }
    for (c, value) in &family.conv_values {
        let expected = compose_e_c(s, c)?;
        if !expected.same_as(value) {
            return Err(Error::Malformed(format!("convergent component disagrees with the points on {c:?}")));
        }
    }
    if !f.is_ext(s) {
        return Ok(Glue::NoAmalgamation("the sequence determined by the points is not exterior".into()));
    }
    Ok(Glue::Amalgamation(s.clone()))
}

/// The tail walked by every thread of an element of `M`.
pub fn nat_tail() -> TailId {
    TailId::from(NAT_TAIL)
}
