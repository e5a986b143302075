use std::fs;
use std::path::Path;

use relext::qdsl::{parse, serialize, ParseErrorKind};

fn kind_name(k: &ParseErrorKind) -> &'static str {
    match k {
        ParseErrorKind::Syntax(_) => "syntax",
        ParseErrorKind::UnknownArrow(_) => "unknown_arrow",
        ParseErrorKind::UnknownVertex(_) => "unknown_vertex",
        ParseErrorKind::UnknownAlgebra(_) => "unknown_algebra",
        ParseErrorKind::DuplicateName(_) => "duplicate_name",
        ParseErrorKind::RelationTooShort(_) => "relation_too_short",
        ParseErrorKind::NonParallel { .. } => "non_parallel",
        ParseErrorKind::NotComposable(_) => "not_composable",
        ParseErrorKind::DuplicateTerm(_) => "duplicate_term",
        ParseErrorKind::ExtensionMismatch(_) => "extension_mismatch",
    }
}

const ALL_KINDS: [&str; 10] = [
    "syntax",
    "unknown_arrow",
    "unknown_vertex",
    "unknown_algebra",
    "duplicate_name",
    "relation_too_short",
    "non_parallel",
    "not_composable",
    "duplicate_term",
    "extension_mismatch",
];

fn fixtures() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[test]
fn every_error_class_has_a_located_failing_fixture() {
    let mut seen = Vec::new();
    let mut entries: Vec<_> = fs::read_dir(fixtures().join("errors")).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        let text = fs::read_to_string(&path).unwrap();
        let header = text.lines().next().unwrap().strip_prefix("# expect ").expect("expectation header");
        let (loc, kind) = header.split_once(' ').unwrap();
        let (line, col) = loc.split_once(':').unwrap();
        let err = parse(&text).expect_err(path.to_str().unwrap());
        assert_eq!(kind_name(&err.kind), kind, "{}: {err}", path.display());
        assert_eq!((err.line, err.column), (line.parse().unwrap(), col.parse().unwrap()), "{}: {err}", path.display());
        assert!(err.to_string().starts_with(&format!("{line}:{col}: ")));
        seen.push(kind.to_string());
    }
    seen.sort();
    let mut all = ALL_KINDS.map(String::from).to_vec();
    all.sort();
    assert_eq!(seen, all);
}

#[test]
fn example_fixtures_round_trip_byte_for_byte() {
    for name in ["ex1.quiv", "ex2.quiv"] {
        let text = fs::read_to_string(fixtures().join(name)).unwrap();
        let parsed = parse(&text).unwrap();
        assert_eq!(serialize(&parsed), text);
        assert_eq!(parse(&serialize(&parsed)).unwrap(), parsed);
    }
}
