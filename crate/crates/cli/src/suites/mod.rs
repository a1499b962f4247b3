//! The property suites, one per acceptance criterion.
//!
//! A suite is a list of cases; a case is a list of [`Check`]s generated from
//! the case's own sub-seed. Cases run in parallel and are collected in order,
//! so reports do not depend on scheduling.

mod cases;
mod check;

pub use check::{non_cover_sequence, Candidate, Check, Fixture, Outcome};

use extseq_core::sequences;
use extseq_core::{FPMap, FPSeq, SpacePres};
use rayon::prelude::*;

use crate::gen;
use crate::report::{CheckReport, Verdict, Witness};

pub const SUITES: [&str; 12] = [
    "proper-eq-no-conv-subseq",
    "countably-compact-eq-seq-compact",
    "proper-eq-seq-proper",
    "seq-proper-eq-plus-seq-continuous",
    "wedge-eq-plus",
    "plus-sequential",
    "s-compact-countably-compact",
    "infinity-plus-diagram",
    "cocompact-closed-form",
    "coreflection",
    "sheaf-gluing",
    "yoneda-fixtures",
];

pub const DEFAULT_BUDGET: u64 = 8;
pub const DEFAULT_SAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    /// Instances per suite; the sheaf and Yoneda suites scale from it.
    pub samples: usize,
    pub budget: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 0, samples: DEFAULT_SAMPLES, budget: DEFAULT_BUDGET }
    }
}

/// Deciders that tests may swap for deliberately broken ones.
#[derive(Clone, Copy)]
pub struct Deciders {
    pub seq_proper: fn(&SpacePres, &FPSeq) -> bool,
    pub map_proper: fn(&FPMap, &SpacePres, &SpacePres) -> bool,
}

impl Default for Deciders {
    fn default() -> Self {
        Deciders {
            seq_proper: |x, s| sequences::is_proper(x, s).unwrap_or(false),
            map_proper: |f, x, y| f.is_proper(x, y),
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown suite `{0}`; known suites: {list}", list = SUITES.join(", "))]
pub struct UnknownSuite(pub String);

pub fn suite_index(name: &str) -> Result<usize, UnknownSuite> {
    SUITES.iter().position(|s| *s == name).ok_or_else(|| UnknownSuite(name.to_string()))
}

/// Expands `all` into every suite name.
pub fn resolve(name: &str) -> Result<Vec<&'static str>, UnknownSuite> {
    if name == "all" {
        Ok(SUITES.to_vec())
    } else {
        Ok(vec![SUITES[suite_index(name)?]])
    }
}

pub fn run_suite(name: &str, cfg: Config) -> Result<CheckReport, UnknownSuite> {
    run_suite_with(name, cfg, &Deciders::default())
}

pub fn run_suite_with(name: &str, cfg: Config, d: &Deciders) -> Result<CheckReport, UnknownSuite> {
    let count = case_count(name, cfg.samples)?;
    let results: Vec<(Verdict, Option<Witness>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| Ok(run_case(name, i, &case_checks(name, cfg, i)?, d, cfg.budget)))
        .collect::<Result<_, UnknownSuite>>()?;
    let mut report = CheckReport {
        suite: name.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        budget: cfg.budget,
        cases: count,
        pass: 0,
        fail: 0,
        unknown: 0,
        witnesses: Vec::new(),
    };
    for (v, w) in results {
        match v {
            Verdict::Pass => report.pass += 1,
            Verdict::Fail => report.fail += 1,
            Verdict::Unknown => report.unknown += 1,
        }
        report.witnesses.extend(w);
    }
    Ok(report)
}

pub fn case_count(name: &str, samples: usize) -> Result<usize, UnknownSuite> {
    Ok(cases::case_count(suite_index(name)?, samples))
}

/// The checks of case `i`; they depend only on the suite, seed, sample count and `i`.
pub fn case_checks(name: &str, cfg: Config, i: u64) -> Result<Vec<Check>, UnknownSuite> {
    let idx = suite_index(name)?;
    let mut rng = gen::rng(gen::sub_seed(gen::sub_seed(cfg.seed, 1_000 + idx as u64), i));
    Ok(cases::generate(idx, i as usize, &mut rng, cfg.samples))
}

/// A case fails on its first failing check; otherwise it is unknown if any
/// check is.
fn run_case(suite: &str, case: u64, checks: &[Check], d: &Deciders, budget: u64) -> (Verdict, Option<Witness>) {
    let mut unknown = None;
    for c in checks {
        match c.run(d, budget) {
            Outcome::Pass => {}
            Outcome::Fail(detail) => {
                let w = Witness { suite: suite.into(), case, verdict: Verdict::Fail, detail, check: c.clone() };
                return (Verdict::Fail, Some(w));
            }
            Outcome::Unknown(detail) => {
                if unknown.is_none() {
                    unknown = Some(Witness { suite: suite.into(), case, verdict: Verdict::Unknown, detail, check: c.clone() });
                }
            }
        }
    }
    match unknown {
        Some(w) => (Verdict::Unknown, Some(w)),
        None => (Verdict::Pass, None),
    }
}

/// Replays a witness; returns the verdict it now produces.
pub fn recheck(w: &Witness, d: &Deciders, budget: u64) -> Verdict {
    match w.check.run(d, budget) {
        Outcome::Pass => Verdict::Pass,
        Outcome::Fail(_) => Verdict::Fail,
        Outcome::Unknown(_) => Verdict::Unknown,
    }
}
