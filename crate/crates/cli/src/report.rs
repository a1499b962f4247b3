//! Suite reports and failure witnesses.

use serde::{Deserialize, Serialize};

use crate::suites::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

/// A check that did not pass, with everything needed to run it again.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub suite: String,
    pub case: u64,
    pub verdict: Verdict,
    pub detail: String,
    pub check: Check,
}

/// Outcome of one suite run. Wall time is deliberately absent: the document
/// depends only on the suite, seed, sample count and budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub budget: u64,
    pub cases: usize,
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn verdict(&self) -> Verdict {
        if self.fail > 0 {
            Verdict::Fail
        } else if self.unknown > 0 {
            Verdict::Unknown
        } else {
            Verdict::Pass
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Process exit code for a set of reports: 0 all pass, 1 any failure,
/// 2 when the only shortfalls are unknowns.
pub fn exit_code<'a>(reports: impl IntoIterator<Item = &'a CheckReport>) -> i32 {
    let mut code = 0;
    for r in reports {
        match r.verdict() {
            Verdict::Fail => return 1,
            Verdict::Unknown => code = 2,
            Verdict::Pass => {}
        }
    }
    code
}
