//! Rule files are plain TOML and can be replaced at run time. This builds a
//! one-rule grammar, runs it in both directions, then points an engine at a
//! directory of stem files.

use akkadian::analyzer::Engine;
use akkadian::rulekit::{load_rules, Bindings, Entry, FeatureArg};
use akkadian::segform::{decode, Consonant};
use akkadian::stems::{stem_source, Stem};

const TOY: &str = r#"
version = 1
rules = [
  { name = "stative", features = ["3","m","s"], body = ["radical:1", "literal:a", "radical:2", "class:ai", "radical:3"] },
]

[classes]
ai = ["a", "i"]
"#;

fn main() -> anyhow::Result<()> {
    let rules = load_rules(TOY)?;
    let root = ["d", "m", "q"].map(|r| Consonant::parse(r).unwrap());
    let entry = Entry::new("stative", ["3", "m", "s"].map(FeatureArg::constant).to_vec());
    for form in rules.realize(&entry, &Bindings::with_radicals(root))? {
        println!("realized {form}");
    }
    let query = Entry::new("stative", ["P", "G", "N"].map(FeatureArg::var).to_vec());
    for (bindings, rest) in rules.recognize(&query, &decode("damiq")?)? {
        println!("recognized root {:?} features {:?} remainder {:?}", bindings.root(), bindings.features, rest.to_ascii());
    }

    // An engine over a copy of the shipped files, as `--rules-dir` would load.
    let dir = std::env::temp_dir().join("akkad-custom-rules");
    std::fs::create_dir_all(&dir)?;
    for stem in Stem::ALL {
        std::fs::write(dir.join(format!("{}.toml", stem.code())), stem_source(stem))?;
    }
    let engine = Engine::from_dir(&dir)?;
    for a in engine.parse("iprus")? {
        println!("from {}: {} {}", dir.display(), a.root_text(), a.label);
    }
    Ok(())
}
