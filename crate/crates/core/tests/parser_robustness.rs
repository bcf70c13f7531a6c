use std::path::PathBuf;

use proptest::prelude::*;
use symfermat::curvedb::{verify, CurveDatabase};
use symfermat::freypipe::{parse_triple, ScenarioFile};
use symfermat::qrsolver::parse;

fn expr(text: &str) {
    if let Ok(e) = parse(text) {
        let printed = e.to_string();
        let again = parse(&printed).unwrap_or_else(|err| panic!("{printed:?}: {err}"));
        assert_eq!(again.to_string(), printed);
    }
}

fn curves(text: &str) {
    if let Ok(db) = CurveDatabase::parse(text) {
        for r in db.records() {
            let _ = r.to_string();
            let _ = verify(r);
        }
    }
}

fn scenarios(text: &str) {
    if let Ok(file) = ScenarioFile::parse(text) {
        let db = CurveDatabase::embedded();
        for eq in file.equations() {
            let _ = file.scenarios(&eq.coefficients, &db);
        }
    }
}

fn triple(text: &str) {
    if let Ok([a, b, c]) = parse_triple(text, 1) {
        assert_eq!(parse_triple(&format!("{a},{b},{c}"), 1).unwrap(), [a, b, c]);
    }
}

fn corpus(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus {target}");
    files
        .iter()
        .map(|f| String::from_utf8_lossy(&std::fs::read(f).unwrap()).into_owned())
        .collect()
}

#[test]
fn seed_corpora_replay_cleanly() {
    for (target, check) in [
        ("parse_expr", expr as fn(&str)),
        ("parse_curves", curves),
        ("parse_scenarios", scenarios),
        ("parse_triple", triple),
    ] {
        for seed in corpus(target) {
            check(&seed);
        }
    }
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let deep = "(".repeat(100_000) + "(2)=1" + &")".repeat(100_000);
    assert!(parse(&deep).is_err());
    let negs = "!".repeat(100_000) + "(2)=1";
    let _ = parse(&negs);
}

/// Replace a byte range of `seed` with `patch`, on char boundaries.
fn mutate(seed: &str, at: usize, len: usize, patch: &str) -> String {
    let chars: Vec<char> = seed.chars().collect();
    let at = at % (chars.len() + 1);
    let end = (at + len).min(chars.len());
    chars[..at]
        .iter()
        .chain(patch.chars().collect::<Vec<_>>().iter())
        .chain(chars[end..].iter())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn expression_parser_never_panics(text in r"[()!&|=+\-0-9 a-z]{0,40}") {
        expr(&text);
    }

    #[test]
    fn mutated_seeds_never_panic(
        which in 0usize..4,
        pick in any::<prop::sample::Index>(),
        at in any::<usize>(),
        len in 0usize..6,
        patch in r"[|:,\[\]0-9a-z=~<>+\- \n]{0,6}",
    ) {
        let (target, check): (&str, fn(&str)) = [
            ("parse_expr", expr as fn(&str)),
            ("parse_curves", curves),
            ("parse_scenarios", scenarios),
            ("parse_triple", triple),
        ][which];
        let seeds = corpus(target);
        let seed = &seeds[pick.index(seeds.len())];
        check(&mutate(seed, at, len, &patch));
    }
}
