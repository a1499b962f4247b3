//! `extseq eval <op> <files…>`: one decider applied to parsed entities.

use anyhow::{bail, Context, Result};
use extseq_core::compactify::{self, BasedSpace};
use extseq_core::exteriority::{self, ExtSpace, Externology};
use extseq_core::{sequences, FPMap, FPSeq, SpacePres};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{self, Entity};
use crate::report::Witness;
use crate::suites::{self, Deciders};

pub const OPS: [&str; 12] = [
    "space-report",
    "classify",
    "convergence-ideal",
    "map-properties",
    "cocompact",
    "e-report",
    "coreflect",
    "omega-sequential",
    "plus",
    "wedge",
    "infinity",
    "recheck",
];

fn space(e: &Entity) -> Result<&SpacePres> {
    match e {
        Entity::Space(x) => Ok(x),
        other => bail!("expected a space, got a {}", other.kind()),
    }
}

fn seq(e: &Entity) -> Result<&FPSeq> {
    match e {
        Entity::Seq(s) => Ok(s),
        other => bail!("expected a sequence, got a {}", other.kind()),
    }
}

fn map(e: &Entity) -> Result<&FPMap> {
    match e {
        Entity::Map(f) => Ok(f),
        other => bail!("expected a map, got a {}", other.kind()),
    }
}

fn ext(e: &Entity) -> Result<&Externology> {
    match e {
        Entity::Externology(x) => Ok(x),
        other => bail!("expected an externology, got a {}", other.kind()),
    }
}

fn witness(e: &Entity) -> Result<&Witness> {
    match e {
        Entity::Witness(w) => Ok(w),
        other => bail!("expected a witness, got a {}", other.kind()),
    }
}

fn ext_space(x: &Entity, e: &Entity) -> Result<ExtSpace> {
    let x = space(x)?.clone();
    Ok(io::in_space(ExtSpace::new(x, ext(e)?.clone()), "externology")?)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn based(b: &BasedSpace) -> Value {
    json!({ "space": b.space().to_raw(), "base": b.base() })
}

fn arity(op: &str, args: &[Entity], n: usize, shape: &str) -> Result<()> {
    if args.len() != n {
        bail!("`{op}` takes {n} file(s): {shape}");
    }
    Ok(())
}

/// Runs `op` on already parsed arguments and returns a JSON result.
pub fn eval(op: &str, args: &[Entity], budget: u64) -> Result<Value> {
    Ok(match op {
        "space-report" => {
            arity(op, args, 1, "<space>")?;
            to_value(&space(&args[0])?.report())
        }
        "classify" | "convergence-ideal" => {
            arity(op, args, 2, "<space> <sequence>")?;
            let (x, s) = (space(&args[0])?, seq(&args[1])?);
            io::in_space(s.validate(x), "sequence")?;
            if op == "classify" {
                to_value(&sequences::classify(x, s)?)
            } else {
                to_value(&sequences::convergence_ideal(x, s)?)
            }
        }
        "map-properties" => {
            arity(op, args, 3, "<domain> <codomain> <map>")?;
            let (x, y, f) = (space(&args[0])?, space(&args[1])?, map(&args[2])?);
            to_value(&io::in_space(f.properties(x, y), "map")?)
        }
        "cocompact" => {
            arity(op, args, 1, "<space>")?;
            to_value(&exteriority::cocompact_externology(space(&args[0])?))
        }
        "e-report" => {
            arity(op, args, 2, "<space> <externology>")?;
            to_value(&ext_space(&args[0], &args[1])?.e_report())
        }
        "coreflect" => {
            arity(op, args, 2, "<space> <externology>")?;
            to_value(ext_space(&args[0], &args[1])?.coreflect().ext())
        }
        "omega-sequential" => {
            arity(op, args, 1, "<space>")?;
            json!(compactify::is_omega_sequential(space(&args[0])?))
        }
        "plus" | "wedge" => {
            arity(op, args, 1, "<space>")?;
            let x = space(&args[0])?;
            based(&if op == "plus" { compactify::plus(x) } else { compactify::wedge(x) })
        }
        "infinity" => {
            arity(op, args, 2, "<space> <externology>")?;
            based(&compactify::infinity(&ext_space(&args[0], &args[1])?))
        }
        "recheck" => {
            arity(op, args, 1, "<witness>")?;
            let w = witness(&args[0])?;
            let verdict = suites::recheck(w, &Deciders::default(), budget);
            json!({ "suite": w.suite, "recorded": w.verdict, "now": verdict })
        }
        _ => bail!("unknown op `{op}`; known ops: {}", OPS.join(", ")),
    })
}

pub fn eval_files(op: &str, files: &[std::path::PathBuf], budget: u64) -> Result<Value> {
    let args = files
        .iter()
        .map(|f| io::parse_entity(f).with_context(|| format!("parsing {}", f.display())))
        .collect::<Result<Vec<_>>>()?;
    eval(op, &args, budget)
}
