#![allow(dead_code)]

use akkadian::segform::Consonant;
use akkadian::stems::{FeatureBundle, PngCell, RootClass, Stem, Tense};

#[derive(Debug, Clone)]
pub struct FixtureRow {
    pub line: usize,
    pub root: [Consonant; 3],
    pub bundle: FeatureBundle,
    pub form: String,
}

pub fn parse_root(text: &str) -> [Consonant; 3] {
    let parts: Vec<Consonant> = text
        .split('-')
        .map(|r| Consonant::parse(r).unwrap_or_else(|| panic!("bad radical {r:?}")))
        .collect();
    parts.try_into().unwrap_or_else(|_| panic!("root {text:?} is not triliteral"))
}

pub fn paradigm_rows() -> Vec<FixtureRow> {
    let text = include_str!("../../fixtures/paradigm.tsv");
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            assert_eq!(cols.len(), 6, "line {}: {l:?}", i + 1);
            FixtureRow {
                line: i + 1,
                root: parse_root(cols[0]),
                bundle: FeatureBundle {
                    stem: cols[1].parse::<Stem>().unwrap(),
                    tense: cols[2].parse::<Tense>().unwrap(),
                    png: cols[3].parse::<PngCell>().unwrap(),
                    root_class: cols[4].parse::<RootClass>().unwrap(),
                },
                form: cols[5].to_string(),
            }
        })
        .collect()
}
