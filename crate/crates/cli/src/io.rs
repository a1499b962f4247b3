//! JSON file formats. The kind of a document is detected from its keys.

use std::collections::BTreeSet;
use std::path::Path;

use extseq_core::exteriority::Externology;
use extseq_core::{Error as CoreError, FPMap, FPSeq, RawSpace, SpacePres, TailImage, Thread};
use serde::de::DeserializeOwned;
use serde_json::Value;
use thiserror::Error;

use crate::gen::InstanceFile;
use crate::report::Witness;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read {file}: {source}")]
    Io { file: String, source: std::io::Error },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("at `{path}`: {message}")]
    Shape { path: String, message: String },
    #[error("cannot tell what kind of entity this is (keys: {0})")]
    UnknownKind(String),
    #[error("invalid at `{path}`: {source}")]
    Invalid { path: String, source: CoreError },
}

#[derive(Clone, Debug)]
pub enum Entity {
    Space(SpacePres),
    Externology(Externology),
    Seq(FPSeq),
    Map(FPMap),
    Instance(Box<InstanceFile>),
    Witness(Box<Witness>),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Space(_) => "space",
            Entity::Externology(_) => "externology",
            Entity::Seq(_) => "sequence",
            Entity::Map(_) => "map",
            Entity::Instance(_) => "instance",
            Entity::Witness(_) => "witness",
        }
    }
}

pub fn parse_entity(path: &Path) -> Result<Entity, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ParseError::Io { file: path.display().to_string(), source })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Entity, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let keys: BTreeSet<&str> = match &value {
        Value::Object(m) => m.keys().map(String::as_str).collect(),
        _ => return Err(ParseError::Shape { path: ".".into(), message: "expected a JSON object".into() }),
    };
    let has = |k: &str| keys.contains(k);
    if has("suite") && has("check") {
        let w: Witness = typed(value)?;
        w.check.validate("check")?;
        Ok(Entity::Witness(Box::new(w)))
    } else if has("space") {
        let inst: InstanceFile = typed(value)?;
        inst.validate()?;
        Ok(Entity::Instance(Box::new(inst)))
    } else if has("threads") || has("prefix") {
        let s: FPSeq = typed(value)?;
        check_seq(&s, "")?;
        Ok(Entity::Seq(s))
    } else if has("onPoints") || has("onTails") {
        let f: FPMap = typed(value)?;
        check_map(&f, "")?;
        Ok(Entity::Map(f))
    } else if has("L") || has("D") {
        Ok(Entity::Externology(typed(value)?))
    } else if keys.is_empty() || ["points", "minOpen", "tails", "attach"].iter().any(|k| has(k)) {
        let raw: RawSpace = typed(value)?;
        Ok(Entity::Space(check_space(&raw, "")?))
    } else {
        Err(ParseError::UnknownKind(keys.into_iter().collect::<Vec<_>>().join(", ")))
    }
}

fn typed<T: DeserializeOwned>(value: Value) -> Result<T, ParseError> {
    serde_path_to_error::deserialize(value).map_err(|e| ParseError::Shape {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn join(prefix: &str, rest: &str) -> String {
    match (prefix.is_empty(), rest.starts_with('[')) {
        (true, _) => rest.to_string(),
        (false, _) if rest.is_empty() => prefix.to_string(),
        (false, true) => format!("{prefix}{rest}"),
        (false, false) => format!("{prefix}.{rest}"),
    }
}

fn invalid(prefix: &str, rest: &str, source: CoreError) -> ParseError {
    let path = join(prefix, rest);
    ParseError::Invalid { path: if path.is_empty() { ".".into() } else { path }, source }
}

/// Validates a raw space, naming the offending field for dangling references.
pub fn check_space(raw: &RawSpace, prefix: &str) -> Result<SpacePres, ParseError> {
    let points: BTreeSet<&str> = raw.points.iter().map(String::as_str).collect();
    let tails: BTreeSet<&str> = raw.tails.iter().map(String::as_str).collect();
    for (x, us) in &raw.min_open {
        if !points.contains(x.as_str()) {
            return Err(invalid(prefix, &format!("minOpen.{x}"), CoreError::UnknownPoint(x.clone())));
        }
        for (i, y) in us.iter().enumerate() {
            if !points.contains(y.as_str()) {
                return Err(invalid(prefix, &format!("minOpen.{x}[{i}]"), CoreError::UnknownPoint(y.clone())));
            }
        }
    }
    for (t, xs) in &raw.attach {
        if !tails.contains(t.as_str()) {
            return Err(invalid(prefix, &format!("attach.{t}"), CoreError::UnknownTail(t.clone())));
        }
        for (i, x) in xs.iter().enumerate() {
            if !points.contains(x.as_str()) {
                return Err(invalid(prefix, &format!("attach.{t}[{i}]"), CoreError::UnknownPoint(x.clone())));
            }
        }
    }
    SpacePres::new(raw).map_err(|e| invalid(prefix, "", e))
}

/// Checks that need no ambient space: at least one thread, injective walks.
pub fn check_seq(s: &FPSeq, prefix: &str) -> Result<(), ParseError> {
    if s.threads.is_empty() {
        return Err(invalid(prefix, "threads", CoreError::NoThreads));
    }
    for (i, th) in s.threads.iter().enumerate() {
        if let Thread::Walk { a: 0, .. } = th {
            return Err(invalid(prefix, &format!("threads[{i}].walk.a"), CoreError::NotInjective(0)));
        }
    }
    Ok(())
}

pub fn check_map(f: &FPMap, prefix: &str) -> Result<(), ParseError> {
    for (t, img) in &f.on_tails {
        if let TailImage::ToTail { a: 0, .. } = img {
            return Err(invalid(prefix, &format!("onTails.{t}.toTail.a"), CoreError::NotInjective(0)));
        }
    }
    Ok(())
}

/// Validation against a space, reported under `prefix`.
pub fn in_space<T>(r: extseq_core::Result<T>, prefix: &str) -> Result<T, ParseError> {
    r.map_err(|e| invalid(prefix, "", e))
}
