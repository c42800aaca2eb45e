//! Print the full subject paradigm of a root across stems and tenses.
//!
//!     cargo run --example generate_paradigm -- p r s

use akkadian::analyzer::{root_text, Engine, GenRequest};
use akkadian::segform::Consonant;
use akkadian::stems::{PngCell, RootClass, Stem, Tense};
use anyhow::{anyhow, bail};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let radicals: Vec<&str> = if args.is_empty() { vec!["p", "r", "s"] } else { args.iter().map(String::as_str).collect() };
    let radicals: Vec<Consonant> = radicals
        .iter()
        .map(|r| Consonant::parse(r).ok_or_else(|| anyhow!("not a consonant: {r}")))
        .collect::<anyhow::Result<_>>()?;
    let radicals: [Consonant; 3] = radicals.try_into().map_err(|_| anyhow!("need three radicals"))?;

    if RootClass::of_root(radicals).is_empty() {
        bail!("{} fits no root class", root_text(radicals));
    }
    let engine = Engine::builtin();
    for stem in Stem::ALL {
        for tense in Tense::ALL {
            println!("{stem} {tense}");
            for png in PngCell::SUBJECTS {
                let req = GenRequest { radicals, stem: Some(stem), tense: Some(tense), png: Some(png), suffix: None };
                // Unsupported cells (e.g. a third-person imperative) are skipped.
                let Ok(forms) = engine.generate(&req) else { continue };
                let text: Vec<String> = forms.iter().map(|g| g.display.unicode.clone()).collect();
                println!("  {:<4} {}", png.to_string(), text.join(", "));
            }
        }
    }
    Ok(())
}
