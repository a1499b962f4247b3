//! Small named spaces used throughout the tests and the CLI.

use std::collections::BTreeMap;

use crate::exteriority::{ExtSpace, Externology};
use crate::spaces::{RawSpace, SpacePres};

fn build(points: &[&str], min_open: &[(&str, &[&str])], tails: &[&str], attach: &[(&str, &[&str])]) -> SpacePres {
    let list = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let map = |xs: &[(&str, &[&str])]| -> BTreeMap<String, Vec<String>> {
        xs.iter().map(|(k, v)| (k.to_string(), list(v))).collect()
    };
    SpacePres::new(&RawSpace {
        points: list(points),
        min_open: map(min_open),
        tails: list(tails),
        attach: map(attach),
    })
    .expect("fixture is valid")
}

/// `{0, 1}` with `{1}` open: `minOpen(0) = {0, 1}`.
pub fn sierpinski() -> SpacePres {
    build(&["0", "1"], &[("0", &["0", "1"]), ("1", &["1"])], &[], &[])
}

/// The discrete naturals as one unattached tail `n`.
pub fn nn() -> SpacePres {
    build(&[], &[], &["n"], &[])
}

/// The one-point compactification of the naturals: tail `n` attached to `inf`.
pub fn nplus() -> SpacePres {
    build(&["inf"], &[], &["n"], &[("n", &["inf"])])
}

/// One point `v` with tail `t1` converging to it and a free tail `t2`.
pub fn mix() -> SpacePres {
    build(&["v"], &[], &["t1", "t2"], &[("t1", &["v"])])
}

pub fn one_point() -> SpacePres {
    build(&["pt"], &[], &[], &[])
}

/// The one-point space whose only exterior-open set is the whole space.
pub fn one_indiscrete() -> ExtSpace {
    ExtSpace::new(one_point(), Externology::new(["pt"], [])).expect("fixture is valid")
}

/// The one-point space with every open set exterior.
pub fn one_discrete() -> ExtSpace {
    ExtSpace::new(one_point(), Externology::default()).expect("fixture is valid")
}

pub fn nn_cocompact() -> ExtSpace {
    ExtSpace::cocompact(nn())
}
