//! Self-contained checks. Each carries its own presentations, so a failure
//! can be written to disk and replayed.

use extseq_core::compactify::{self, bar, based_iso, ext_iso, infinity, plus, plus_map, wedge, BasedSpace};
use extseq_core::exteriority::{self, ExtSpace, Externology};
use extseq_core::sheaves::{
    build_sigma, glue, is_cover, nat, restrict, CElem, CSet, Cover, Glue, Ideal, Monoid, Topology, YonedaN,
    YonedaNPlus, YonedaOne, NAT_TAIL,
};
use extseq_core::{fixtures, sequences, EvSet, FPMap, FPSeq, PointId, PointRef, RawSpace, SpacePres, Thread};
use serde::{Deserialize, Serialize};

use super::Deciders;
use crate::io::{self, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    One,
    NPlus,
    N,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Candidate {
    Point(PointRef),
    Conv(CElem),
    Ext(FPSeq),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    /// proper ⇔ no convergent subsequence
    ProperVsNoConv { space: RawSpace, seq: FPSeq },
    /// countably compact ⇔ sequentially compact
    CompactnessNotions { space: RawSpace },
    ProperVsSeqProper { domain: RawSpace, codomain: RawSpace, map: FPMap },
    /// seqProper(f) ⇔ f⁺ sequentially continuous
    PlusMap { domain: RawSpace, codomain: RawSpace, map: FPMap },
    WedgeVsPlus { space: RawSpace },
    OmegaSequential { space: RawSpace },
    /// `set` lives in `plus_space`, the one-point extension of some space.
    PlusOpenSet { plus_space: RawSpace, set: EvSet },
    SCompactSet { space: RawSpace, set: EvSet },
    DiagramPlus { space: RawSpace },
    BarInfinity { space: RawSpace, externology: Externology },
    InfinityBar { space: RawSpace, base: PointId },
    CocompactForm { space: RawSpace, set: EvSet },
    Coreflection { space: RawSpace, externology: Externology },
    Gluing { space: RawSpace, externology: Externology, ideal: Ideal, seq: FPSeq, other: FPSeq },
    NonCover,
    Yoneda { fixture: Fixture, candidate: Candidate },
}

pub enum Outcome {
    Pass,
    Fail(String),
    Unknown(String),
}

fn space(raw: &RawSpace) -> extseq_core::Result<SpacePres> {
    SpacePres::new(raw)
}

fn fixture(f: Fixture) -> (ExtSpace, Box<dyn CSet>) {
    match f {
        Fixture::One => (fixtures::one_discrete(), Box::new(YonedaOne)),
        Fixture::NPlus => {
            (ExtSpace::new(fixtures::nplus(), Externology::default()).expect("fixture"), Box::new(YonedaNPlus))
        }
        Fixture::N => (fixtures::nn_cocompact(), Box::new(YonedaN)),
    }
}

/// The sequence `0, 0, 1, 0, 2, 0, …`: exterior on the even positions only.
pub fn non_cover_sequence() -> FPSeq {
    FPSeq::interleave(vec![Thread::walk(NAT_TAIL, 1, 0), Thread::Const(nat(0))])
}

fn agree(what: &str, left: bool, right: bool) -> Outcome {
    if left == right {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("{what}: {left} vs {right}"))
    }
}

impl Check {
    /// Structural validation, reporting paths under `prefix`.
    pub fn validate(&self, prefix: &str) -> Result<(), ParseError> {
        let at = |f: &str| format!("{prefix}.{f}");
        match self {
            Check::ProperVsNoConv { space, seq } => {
                let x = io::check_space(space, &at("space"))?;
                io::check_seq(seq, &at("seq"))?;
                io::in_space(seq.validate(&x), &at("seq"))
            }
            Check::CompactnessNotions { space }
            | Check::WedgeVsPlus { space }
            | Check::OmegaSequential { space }
            | Check::DiagramPlus { space } => io::check_space(space, &at("space")).map(drop),
            Check::ProperVsSeqProper { domain, codomain, map } | Check::PlusMap { domain, codomain, map } => {
                let x = io::check_space(domain, &at("domain"))?;
                let y = io::check_space(codomain, &at("codomain"))?;
                io::check_map(map, &at("map"))?;
                io::in_space(map.validate(&x, &y), &at("map"))
            }
            Check::PlusOpenSet { plus_space: space, set }
            | Check::SCompactSet { space, set }
            | Check::CocompactForm { space, set } => {
                let x = io::check_space(space, &at("space"))?;
                io::in_space(x.check_set(set), &at("set"))
            }
            Check::BarInfinity { space, externology } | Check::Coreflection { space, externology } => {
                let x = io::check_space(space, &at("space"))?;
                io::in_space(externology.check(&x), &at("externology"))
            }
            Check::InfinityBar { space, base } => {
                let x = io::check_space(space, &at("space"))?;
                io::in_space(BasedSpace::new(x, PointRef::Point(base.clone())), &at("base")).map(drop)
            }
            Check::Gluing { space, externology, ideal, seq, other } => {
                let x = io::check_space(space, &at("space"))?;
                io::in_space(externology.check(&x), &at("externology"))?;
                io::in_space(ideal.validate(), &at("ideal"))?;
                io::check_seq(seq, &at("seq"))?;
                io::in_space(seq.validate(&x), &at("seq"))?;
                io::check_seq(other, &at("other"))?;
                io::in_space(other.validate(&x), &at("other"))
            }
            Check::NonCover | Check::Yoneda { .. } => Ok(()),
        }
    }

    pub fn run(&self, d: &Deciders, budget: u64) -> Outcome {
        match self.try_run(d, budget) {
            Ok(o) => o,
            Err(e) => Outcome::Fail(format!("decider error: {e}")),
        }
    }

    fn try_run(&self, d: &Deciders, budget: u64) -> extseq_core::Result<Outcome> {
        Ok(match self {
            Check::ProperVsNoConv { space: raw, seq } => {
                let x = space(raw)?;
                let proper = (d.seq_proper)(&x, seq);
                agree("proper vs no convergent subsequence", proper, sequences::has_no_convergent_subsequence(&x, seq)?)
            }
            Check::CompactnessNotions { space: raw } => {
                let r = space(raw)?.report();
                agree("countably compact vs sequentially compact", r.countably_compact, r.seq_compact)
            }
            Check::ProperVsSeqProper { domain, codomain, map } => {
                let (x, y) = (space(domain)?, space(codomain)?);
                agree("proper vs sequentially proper", (d.map_proper)(map, &x, &y), map.is_seq_proper(&x, &y))
            }
            Check::PlusMap { domain, codomain, map } => {
                let (x, y) = (space(domain)?, space(codomain)?);
                let g = plus_map(map, &x, &y);
                let (px, py) = (plus(&x), plus(&y));
                agree(
                    "sequentially proper vs plus map sequentially continuous",
                    map.is_seq_proper(&x, &y),
                    g.is_seq_continuous(px.space(), py.space()),
                )
            }
            Check::WedgeVsPlus { space: raw } => {
                let x = space(raw)?;
                agree("wedge isomorphic to plus", based_iso(&wedge(&x), &plus(&x)), true)
            }
            Check::OmegaSequential { space: raw } => {
                agree("omega-sequential", compactify::is_omega_sequential(&space(raw)?), true)
            }
            Check::PlusOpenSet { plus_space, set } => {
                let p = space(plus_space)?;
                agree("open vs sequentially open", p.is_open(set)?, p.is_sequentially_open(set)?)
            }
            Check::SCompactSet { space: raw, set } => {
                let x = space(raw)?;
                if !x.is_closed(set)? {
                    return Ok(Outcome::Fail("sampled set is not closed".into()));
                }
                let s_compact = compactify::is_s_compact(&x, set)?;
                let sub = x.subspace(set)?.space.report();
                if s_compact && !sub.countably_compact {
                    Outcome::Fail("s-compact closed set that is not countably compact".into())
                } else if x.report().s2 && (s_compact != sub.countably_compact || s_compact != sub.seq_compact) {
                    Outcome::Fail(format!(
                        "on an S2 space: s-compact {s_compact}, countably compact {}, sequentially compact {}",
                        sub.countably_compact, sub.seq_compact
                    ))
                } else {
                    Outcome::Pass
                }
            }
            Check::DiagramPlus { space: raw } => {
                let x = space(raw)?;
                agree("infinity of cocompact vs plus", based_iso(&infinity(&ExtSpace::cocompact(x.clone())), &plus(&x)), true)
            }
            Check::BarInfinity { space: raw, externology } => {
                let e = ExtSpace::new(space(raw)?, externology.clone())?;
                agree("bar(infinity(E)) isomorphic to E", ext_iso(&bar(&infinity(&e)), &e), true)
            }
            Check::InfinityBar { space: raw, base } => {
                let b = BasedSpace::new(space(raw)?, PointRef::Point(base.clone()))?;
                agree("infinity(bar(B)) isomorphic to B", based_iso(&infinity(&bar(&b)), &b), true)
            }
            Check::CocompactForm { space: raw, set } => {
                let x = space(raw)?;
                let cc = exteriority::cocompact_externology(&x);
                let c = set.complement(x.universe())?;
                let direct = x.is_open(set)? && x.is_closed(&c)? && x.is_compact(&c)?;
                agree("cocompact membership vs closed compact complement", exteriority::is_member(&x, &cc, set)?, direct)
            }
            Check::Coreflection { space: raw, externology } => {
                let e = ExtSpace::new(space(raw)?, externology.clone())?;
                let c = e.coreflect();
                if c.coreflect() != c {
                    Outcome::Fail("coreflection is not idempotent".into())
                } else if c != e {
                    Outcome::Fail("coreflection moved a canonical in-class space".into())
                } else {
                    agree("e-sequential vs counit isomorphism", e.e_report().e_sequential, ext_iso(&c, &e))
                }
            }
            Check::Gluing { space: raw, externology, ideal, seq, other } => {
                let e = ExtSpace::new(space(raw)?, externology.clone())?;
                gluing(&e, ideal, seq, other, budget)?
            }
            Check::NonCover => non_cover(budget)?,
            Check::Yoneda { fixture: which, candidate } => {
                let (e, y) = fixture(*which);
                let sigma = build_sigma(&e);
                match candidate {
                    Candidate::Point(p) => agree("point", sigma.is_point(p), y.is_point(p)),
                    Candidate::Conv(c) => agree("convergent element", sigma.is_conv(c), y.is_conv(c)),
                    Candidate::Ext(s) => agree("exterior element", sigma.is_ext(s), y.is_ext(s)),
                }
            }
        })
    }
}

fn gluing(e: &ExtSpace, ideal: &Ideal, s: &FPSeq, other: &FPSeq, budget: u64) -> extseq_core::Result<Outcome> {
    match is_cover(ideal, Topology::Je, budget)? {
        Cover::Yes(_) => {}
        Cover::Unknown => return Ok(Outcome::Unknown("cover check exhausted its budget".into())),
        Cover::No(w) => return Ok(Outcome::Fail(format!("sampled ideal does not cover: {w:?}"))),
    }
    let f = build_sigma(e);
    if !f.is_ext(s) {
        return Ok(Outcome::Fail("sampled sequence is not exterior".into()));
    }
    let family = restrict(s, ideal, &YonedaN.sample_conv(6))?;
    let glued = glue(&f, ideal, &family)?;
    if glued != Glue::Amalgamation(s.clone()) {
        return Ok(Outcome::Fail(format!("restriction then glue gave {glued:?}")));
    }
    // a second candidate glues exactly when it agrees on every generator
    let mut forged = family.clone();
    forged.point_values = other.clone();
    forged.conv_values.clear();
    let agrees = family.on_generators.iter().all(|(u, h)| other.subseq(u).same_as(h));
    let glued = glue(&f, ideal, &forged)?;
    Ok(match (agrees, &glued) {
        (true, Glue::Amalgamation(t)) if t == other => Outcome::Pass,
        (false, Glue::Incompatible { .. }) => Outcome::Pass,
        _ => Outcome::Fail(format!("forged family (agrees: {agrees}) gave {glued:?}")),
    })
}

fn non_cover(budget: u64) -> extseq_core::Result<Outcome> {
    let ideal = Ideal::affine(Monoid::M, &[(2, 0)]);
    if !matches!(is_cover(&ideal, Topology::Je, budget)?, Cover::No(_)) {
        return Ok(Outcome::Fail("the even progression was accepted as a cover".into()));
    }
    let e = fixtures::nn_cocompact();
    let family = restrict(&non_cover_sequence(), &ideal, &[])?;
    Ok(match glue(&build_sigma(&e), &ideal, &family)? {
        Glue::NoAmalgamation(_) => Outcome::Pass,
        g => Outcome::Fail(format!("expected no amalgamation, got {g:?}")),
    })
}
