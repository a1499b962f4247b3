//! File formats: detection, validation and error locations.

use extseq::io::{parse_entity, parse_str, Entity, ParseError};
use extseq_core::Error as CoreError;

const SPACE: &str = r#"{"points":["x","y"],"minOpen":{"x":["x","y"]},"tails":["n"],"attach":{"n":["x"]}}"#;

fn invalid_path(text: &str) -> (String, CoreError) {
    match parse_str(text) {
        Err(ParseError::Invalid { path, source }) => (path, source),
        other => panic!("expected a validation error, got {other:?}"),
    }
}

#[test]
fn well_formed_space() {
    let Entity::Space(x) = parse_str(SPACE).unwrap() else { panic!("not a space") };
    assert_eq!(x.points().len(), 2);
    assert_eq!(x.min_open(&"y".into()).len(), 1);
    assert!(x.captures(&"x".into(), &"n".into()));
}

#[test]
fn attach_to_unknown_tail_names_the_field() {
    let (path, e) = invalid_path(r#"{"points":["x"],"tails":["n"],"attach":{"m":["x"]}}"#);
    assert_eq!(path, "attach.m");
    assert_eq!(e, CoreError::UnknownTail("m".into()));
    let (path, _) = invalid_path(r#"{"points":["x"],"tails":["n"],"attach":{"n":["x","z"]}}"#);
    assert_eq!(path, "attach.n[1]");
    let (path, _) = invalid_path(r#"{"points":["x"],"minOpen":{"x":["x","q"]}}"#);
    assert_eq!(path, "minOpen.x[1]");
}

#[test]
fn non_transitive_order_is_rejected() {
    let (path, e) = invalid_path(r#"{"points":["x","y","z"],"minOpen":{"x":["x","y"],"y":["y","z"]}}"#);
    assert_eq!(path, ".");
    assert!(matches!(e, CoreError::PreorderViolation(_)), "{e:?}");
}

#[test]
fn walk_with_zero_stride_is_rejected() {
    let (path, e) = invalid_path(r#"{"prefix":["x"],"threads":[{"const":"x"},{"walk":{"tail":"n","a":0,"b":1}}]}"#);
    assert_eq!(path, "threads[1].walk.a");
    assert_eq!(e, CoreError::NotInjective(0));
    let (path, _) = invalid_path(r#"{"onTails":{"n":{"toTail":{"tail":"n","a":0,"b":0}}}}"#);
    assert_eq!(path, "onTails.n.toTail.a");
    let (path, e) = invalid_path(r#"{"prefix":[],"threads":[]}"#);
    assert_eq!((path.as_str(), e), ("threads", CoreError::NoThreads));
}

#[test]
fn shape_errors_carry_a_path() {
    match parse_str(r#"{"points":["x", 3]}"#) {
        Err(ParseError::Shape { path, .. }) => assert_eq!(path, "points[1]"),
        other => panic!("{other:?}"),
    }
    match parse_str(r#"{"threads":[{"walk":{"tail":"n","a":"two","b":0}}]}"#) {
        Err(ParseError::Shape { path, .. }) => assert_eq!(path, "threads[0].walk.a"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_carry_a_position() {
    match parse_str("{\n  \"points\": [\"x\",\n}") {
        Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_str("[1, 2]"), Err(ParseError::Shape { .. })));
    assert!(matches!(parse_str(r#"{"colour":"red"}"#), Err(ParseError::UnknownKind(_))));
}

#[test]
fn every_kind_is_detected() {
    assert!(matches!(parse_str("{}").unwrap(), Entity::Space(_)));
    assert!(matches!(parse_str(r#"{"L":["x"],"D":[]}"#).unwrap(), Entity::Externology(_)));
    let Entity::Seq(s) = parse_str(r#"{"threads":[{"walk":{"tail":"n","a":2,"b":1}}]}"#).unwrap() else {
        panic!("not a sequence")
    };
    assert!(s.prefix.is_empty());
    assert_eq!(s.at(3), extseq_core::PointRef::tail("n", 7));
    let m = r#"{"onPoints":{"x":"y"},"onTails":{"n":{"toConst":{"point":{"tail":"n","index":4}}}}}"#;
    assert!(matches!(parse_str(m).unwrap(), Entity::Map(_)));
}

#[test]
fn missing_file_is_an_io_error() {
    let e = parse_entity(std::path::Path::new("/nonexistent/space.json")).unwrap_err();
    assert!(matches!(e, ParseError::Io { .. }));
}

#[test]
fn instance_files_are_validated_against_their_space() {
    let bad = r#"{"space":{"points":["x"]},"externology":{"L":[],"D":[]},
                  "sequences":[{"threads":[{"const":"y"}]}]}"#;
    let (path, e) = invalid_path(bad);
    assert_eq!(path, "sequences[0]");
    assert_eq!(e, CoreError::UnknownPoint("y".into()));
}
