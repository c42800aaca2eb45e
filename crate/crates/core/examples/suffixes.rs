//! Attach pronominal suffixes to a verb and split them off again.

use akkadian::analyzer::{Engine, GenRequest};
use akkadian::segform::Consonant;
use akkadian::stems::{PngCell, Stem, Tense};
use akkadian::suffixes::{parse_suffix, realize_suffix, suffix_label, SuffixContext, SuffixFeatures};

fn cell(text: &str) -> PngCell {
    text.parse().expect("valid cell")
}

fn main() -> anyhow::Result<()> {
    // The same chain surfaces differently after a consonant, a vowel, and a
    // person/number ending.
    let chain = SuffixFeatures { ventive: true, dative: Some(cell("3ms")), accusative: None, ma: false };
    for ctx in SuffixContext::ALL {
        let surface = realize_suffix(&chain, ctx);
        let back: Vec<String> = parse_suffix(&surface, ctx).iter().map(suffix_label).collect();
        println!("{:<9} -{:<10} {back:?}", ctx.to_string(), surface.to_ascii());
    }

    let root = ["m", "l", "&"].map(|r| Consonant::parse(r).unwrap());
    let suffix = SuffixFeatures { ventive: true, dative: Some(cell("2fs")), accusative: None, ma: false };
    let req = GenRequest {
        radicals: root,
        stem: Some(Stem::D),
        tense: Some(Tense::Preterite),
        png: Some(cell("2fs")),
        suffix: Some(suffix),
    };
    for g in Engine::builtin().generate(&req)? {
        println!("{:<16} {}", g.display.ascii, g.analysis.label);
    }
    Ok(())
}
