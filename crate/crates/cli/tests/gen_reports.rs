//! Generation determinism and bounds; report reproducibility and witnesses.

use extseq::gen::{generate_instances, InstanceFile, Profile, MAX_AFFINE, MAX_POINTS, MAX_TAILS};
use extseq::io::{parse_str, Entity};
use extseq::report::{exit_code, CheckReport, Verdict};
use extseq::suites::{self, recheck, run_suite, run_suite_with, Config, Deciders};
use extseq_core::{FPSeq, SpacePres, TailImage, Thread};

fn small(seed: u64) -> Config {
    Config { seed, samples: 30, budget: 8 }
}

#[test]
fn same_seed_same_stream() {
    for p in [Profile::Finite, Profile::Tailed, Profile::S2Only, Profile::All] {
        assert_eq!(generate_instances(7, 5, p), generate_instances(7, 5, p));
        assert_ne!(generate_instances(7, 5, p), generate_instances(8, 5, p));
    }
    assert!(generate_instances(7, 0, Profile::All).is_empty());
    // a prefix of a longer stream is the shorter stream
    assert_eq!(generate_instances(3, 4, Profile::All)[..], generate_instances(3, 9, Profile::All)[..4]);
}

fn params(s: &FPSeq) -> impl Iterator<Item = u64> + '_ {
    s.threads.iter().flat_map(|t| match t {
        Thread::Walk { a, b, .. } => vec![*a, *b],
        Thread::Const(_) => vec![],
    })
}

#[test]
fn size_bounds_and_profiles() {
    for p in [Profile::Finite, Profile::Tailed, Profile::S2Only, Profile::All] {
        for inst in generate_instances(11, 40, p) {
            let x = inst.ext.space();
            assert!(x.points().len() <= MAX_POINTS && x.tails().len() <= MAX_TAILS);
            match p {
                Profile::Finite => assert!(x.tails().is_empty()),
                Profile::Tailed => assert!(!x.tails().is_empty()),
                Profile::S2Only => assert!(x.report().s2),
                Profile::All => {}
            }
            assert!(inst.sequences.iter().flat_map(params).all(|v| v <= MAX_AFFINE));
            for (y, f) in &inst.maps {
                f.validate(x, y).unwrap();
                for img in f.on_tails.values() {
                    if let TailImage::ToTail { a, b, .. } = img {
                        assert!(*a >= 1 && *a <= MAX_AFFINE && *b <= MAX_AFFINE);
                    }
                }
            }
            for s in &inst.sequences {
                s.validate(x).unwrap();
            }
        }
    }
}

#[test]
fn instance_files_round_trip() {
    for inst in generate_instances(5, 10, Profile::All) {
        let text = serde_json::to_string(&InstanceFile::from(&inst)).unwrap();
        let Entity::Instance(file) = parse_str(&text).unwrap() else { panic!("not an instance") };
        assert_eq!(file.validate().unwrap(), inst);
    }
}

#[test]
fn reports_are_byte_identical() {
    for name in suites::SUITES {
        let a = run_suite(name, small(99)).unwrap();
        let b = run_suite(name, small(99)).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{name}");
        assert_eq!(a.pass + a.fail + a.unknown, a.cases);
        assert_eq!(a.verdict(), Verdict::Pass, "{name}: {:?}", a.witnesses.first());
    }
    let a = run_suite("coreflection", small(1)).unwrap();
    let b = run_suite("coreflection", small(2)).unwrap();
    assert_ne!(suites::case_checks("coreflection", small(1), 0).unwrap(), suites::case_checks("coreflection", small(2), 0).unwrap());
    assert_eq!(a.cases, b.cases);
}

#[test]
fn unknown_suite_is_an_error() {
    let e = run_suite("nosuch", small(0)).unwrap_err();
    assert!(e.to_string().contains("nosuch"));
    assert!(suites::resolve("nosuch").is_err());
    assert_eq!(suites::resolve("all").unwrap().len(), 12);
}

/// Calls a sequence proper as soon as every thread walks a tail, ignoring
/// whether the tail converges somewhere.
fn walks_only(_: &SpacePres, s: &FPSeq) -> bool {
    s.threads.iter().all(|t| matches!(t, Thread::Walk { .. }))
}

#[test]
fn mutant_decider_fails_with_replayable_witness() {
    let mutant = Deciders { seq_proper: walks_only, ..Deciders::default() };
    let r = run_suite_with("proper-eq-no-conv-subseq", small(4), &mutant).unwrap();
    assert!(r.fail > 0, "mutant went unnoticed");
    assert_eq!(r.witnesses.len(), r.fail + r.unknown);
    assert_eq!(exit_code([&r]), 1);
    for w in &r.witnesses {
        // written out, read back and replayed, the failure persists
        let text = serde_json::to_string_pretty(w).unwrap();
        let Entity::Witness(back) = parse_str(&text).unwrap() else { panic!("not a witness") };
        assert_eq!(&*back, w);
        assert_eq!(recheck(&back, &mutant, 8), Verdict::Fail);
        // and the real decider passes the same check
        assert_eq!(recheck(&back, &Deciders::default(), 8), Verdict::Pass);
    }
    let text = serde_json::to_string(&r).unwrap();
    let back: CheckReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn map_mutant_is_caught() {
    let mutant = Deciders { map_proper: |f, x, y| f.is_continuous(x, y), ..Deciders::default() };
    let r = run_suite_with("proper-eq-seq-proper", small(4), &mutant).unwrap();
    assert!(r.fail > 0);
    assert!(r.witnesses.iter().all(|w| recheck(w, &mutant, 8) == Verdict::Fail));
}

#[test]
fn exit_codes() {
    let mut r = run_suite("wedge-eq-plus", small(0)).unwrap();
    assert_eq!(exit_code([&r]), 0);
    r.unknown = 1;
    r.pass -= 1;
    assert_eq!(exit_code([&r]), 2);
    let mut f = r.clone();
    f.fail = 1;
    assert_eq!(exit_code([&r, &f]), 1);
    assert_eq!(exit_code(std::iter::empty()), 0);
}

#[test]
fn case_seeds_do_not_depend_on_sample_count() {
    let a = suites::case_checks("cocompact-closed-form", Config { samples: 10, ..small(6) }, 3).unwrap();
    let b = suites::case_checks("cocompact-closed-form", Config { samples: 500, ..small(6) }, 3).unwrap();
    assert_eq!(a, b);
}
