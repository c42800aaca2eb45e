//! The hand-written suffix table checked in both directions.

use akkadian::stems::PngCell;
use akkadian::suffixes::{parse_suffix, realize_suffix, suffix_label, SuffixContext, SuffixFeatures};

struct Row {
    line: usize,
    features: SuffixFeatures,
    context: SuffixContext,
    surface: String,
}

fn flag(text: &str) -> bool {
    match text {
        "yes" => true,
        "no" => false,
        other => panic!("expected yes/no, got {other:?}"),
    }
}

fn cell(text: &str) -> Option<PngCell> {
    (text != "-").then(|| text.parse().unwrap())
}

fn rows() -> Vec<Row> {
    include_str!("../fixtures/suffixes.tsv")
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let c: Vec<&str> = l.split('\t').collect();
            assert_eq!(c.len(), 6, "line {}", i + 1);
            Row {
                line: i + 1,
                features: SuffixFeatures {
                    ventive: flag(c[0]),
                    dative: cell(c[1]),
                    accusative: cell(c[2]),
                    ma: flag(c[3]),
                },
                context: c[4].parse().unwrap(),
                surface: c[5].to_string(),
            }
        })
        .collect()
}

#[test]
fn fixture_is_substantial() {
    let rows = rows();
    assert!(rows.len() >= 30, "{} rows", rows.len());
    for ctx in SuffixContext::ALL {
        assert!(rows.iter().any(|r| r.context == ctx), "no row for {ctx}");
    }
    assert!(rows.iter().all(|r| r.features.is_valid()));
}

#[test]
fn realize_matches_fixture() {
    for row in rows() {
        let got = realize_suffix(&row.features, row.context).to_ascii();
        assert_eq!(got, row.surface, "line {}", row.line);
    }
}

#[test]
fn parse_recovers_fixture_features() {
    for row in rows() {
        let surface = row.surface.parse().unwrap();
        let parsed = parse_suffix(&surface, row.context);
        assert!(
            parsed.contains(&row.features),
            "line {}: {} parsed to {:?}",
            row.line,
            row.surface,
            parsed.iter().map(suffix_label).collect::<Vec<_>>()
        );
    }
}
