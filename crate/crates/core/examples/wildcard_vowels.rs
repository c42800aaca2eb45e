//! A `*` after a vowel tries it short, long and overlong. Useful when the
//! vowel length of an inscription is unknown.
//!
//!     cargo run --example wildcard_vowels -- 'idda*k'

use akkadian::analyzer::Engine;
use akkadian::segform::{decode, expand_wildcards};

fn main() -> anyhow::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "idda*k".to_string());
    let form = decode(&text)?;
    let engine = Engine::builtin();
    for concrete in expand_wildcards(&form) {
        let analyses = engine.parse_form(&concrete);
        println!("{concrete}");
        if analyses.is_empty() {
            println!("  (no reading)");
        }
        for a in analyses {
            println!("  {:<8} {}", a.root_text(), a.label);
        }
    }
    Ok(())
}
