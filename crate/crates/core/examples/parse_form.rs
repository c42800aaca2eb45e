//! Parse transliterated verbs and print every reading.
//!
//!     cargo run --example parse_form -- liqbi inadduu\$i

use akkadian::analyzer::Engine;

fn main() -> anyhow::Result<()> {
    let mut forms: Vec<String> = std::env::args().skip(1).collect();
    if forms.is_empty() {
        forms = ["iprus", "liqbi", "iqabbuuma", "inadduu$i"].map(String::from).to_vec();
    }
    let engine = Engine::builtin();
    for form in &forms {
        let analyses = engine.parse(form)?;
        println!("{form}: {} reading(s)", analyses.len());
        for a in &analyses {
            println!("  {:<8} {:<48} {}", a.root_text(), a.label, a.normalized);
        }
    }
    Ok(())
}
