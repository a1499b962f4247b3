use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use extseq::gen::{self, InstanceFile, Profile};
use extseq::report::{exit_code, CheckReport};
use extseq::suites::{self, Config, DEFAULT_BUDGET, DEFAULT_SAMPLES};
use extseq::{eval, io};

/// Exit status for usage, parse and I/O errors.
const ERROR_EXIT: u8 = 3;

#[derive(Parser)]
#[command(name = "extseq", version, about = "Deciders and property suites for tail spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a space, externology, sequence, map, instance or witness file.
    Validate { file: PathBuf },
    /// Run one property suite, or `all` of them.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Defaults to $EXTSEQ_BUDGET, then 8.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print wall time per suite on stderr.
        #[arg(long)]
        timing: bool,
    },
    /// Apply one decider to parsed files and print the result as JSON.
    Eval {
        op: String,
        files: Vec<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Write generated instances to a directory.
    Gen {
        #[arg(long, default_value = "all")]
        profile: Profile,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("EXTSEQ_BUDGET") {
        Ok(v) => v.trim().parse().with_context(|| format!("EXTSEQ_BUDGET is not a number: `{v}`")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { file } => {
            let e = io::parse_entity(&file)?;
            println!("ok: {} is a valid {}", file.display(), e.kind());
            Ok(0)
        }
        Command::Check { suite, seed, samples, budget: b, report, timing } => {
            let cfg = Config { seed, samples, budget: budget(b)? };
            let mut reports: Vec<CheckReport> = Vec::new();
            for name in suites::resolve(&suite)? {
                let start = Instant::now();
                let r = suites::run_suite(name, cfg)?;
                if timing {
                    eprintln!("{name}: {:.2?}", start.elapsed());
                }
                println!(
                    "{:<36} {:?}  cases={} pass={} fail={} unknown={}",
                    name,
                    r.verdict(),
                    r.cases,
                    r.pass,
                    r.fail,
                    r.unknown
                );
                reports.push(r);
            }
            if let Some(path) = report {
                let doc = if reports.len() == 1 {
                    reports[0].to_json()
                } else {
                    serde_json::to_string_pretty(&reports)?
                };
                std::fs::write(&path, doc + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(exit_code(&reports) as u8)
        }
        Command::Eval { op, files, budget: b } => {
            let v = eval::eval_files(&op, &files, budget(b)?)?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(0)
        }
        Command::Gen { profile, count, seed, out } => {
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for (i, inst) in gen::generate_instances(seed, count, profile).iter().enumerate() {
                let path = out.join(format!("instance-{i:04}.json"));
                let doc = serde_json::to_string_pretty(&InstanceFile::from(inst))?;
                std::fs::write(&path, doc + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            println!("wrote {count} {profile} instance(s) to {}", out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}
