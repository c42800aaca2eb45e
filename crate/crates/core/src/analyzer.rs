//! Parsing and generation over all stems, tenses and root classes.
//!
//! Parsing expands vowel wildcards, then for every stem, tense and root class
//! runs the tense rules twice: once requiring the whole form to be consumed,
//! once handing the unconsumed remainder to the suffix grammar.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rulekit::{load_rules, Bindings, Entry, RuleError, RuleSet};
use crate::segform::{decode, expand_wildcards, Consonant, DecodeError, Display, SegmentedForm};
use crate::stems::{
    probe_supported, query_entry, raw_entry_name, stem_rules, FeatureBundle, PngCell, RootClass,
    Stem, Tense,
};
use crate::suffixes::{parse_suffix, realize_suffix, suffix_label, SuffixContext, SuffixFeatures};

#[derive(Debug, Error)]
pub enum AnalyzerError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("unsupported cell: {0}")]
    Unsupported(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("rule data for stem {stem}: {source}")]
    Rules { stem: Stem, source: RuleError },
    #[error("reading rule data: {0}")]
    Io(#[from] std::io::Error),
}

/// One reading of a surface form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Analysis {
    pub radicals: [Consonant; 3],
    pub bundle: FeatureBundle,
    pub suffix: SuffixFeatures,
    /// The wildcard-free surface form this reading accounts for.
    pub normalized: SegmentedForm,
    pub label: String,
}

impl Analysis {
    /// Radicals joined with hyphens, e.g. `q-b-&`.
    pub fn root_text(&self) -> String {
        root_text(self.radicals)
    }

    fn same_reading(&self, other: &Analysis) -> bool {
        self.radicals == other.radicals && self.bundle == other.bundle && self.suffix == other.suffix
    }
}

pub fn root_text(root: [Consonant; 3]) -> String {
    root.map(|c| c.ascii().to_string()).join("-")
}

/// `G Precative Third Weak 3 c s`, followed by the suffix label if any.
pub fn label(bundle: &FeatureBundle, suffix: &SuffixFeatures) -> String {
    let mut parts = vec![bundle.stem.name().to_string(), bundle.tense.name().to_string()];
    let q = bundle.root_class.qualifier();
    if !q.is_empty() {
        parts.push(q.to_string());
    }
    parts.push(bundle.png.spaced());
    let s = suffix_label(suffix);
    if !s.is_empty() {
        parts.push(s);
    }
    parts.join(" ")
}

/// A generation query. `None` in stem, tense or png means any value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenRequest {
    pub radicals: [Consonant; 3],
    #[serde(default)]
    pub stem: Option<Stem>,
    #[serde(default)]
    pub tense: Option<Tense>,
    #[serde(default)]
    pub png: Option<PngCell>,
    #[serde(default)]
    pub suffix: Option<SuffixFeatures>,
}

impl GenRequest {
    pub fn is_concrete(&self) -> bool {
        self.stem.is_some() && self.tense.is_some() && self.png.is_some()
    }
}

/// A generated form with its analysis and renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generated {
    pub analysis: Analysis,
    pub display: Display,
}

/// Whether the base's final vowel is a person/number ending or the
/// contracted third-weak vowel, which take the `-nim` ventive.
fn vocalic_ending(bundle: &FeatureBundle) -> bool {
    bundle.root_class == RootClass::ThirdWeak
        || matches!(bundle.png.to_string().as_str(), "2fs" | "3mp" | "3fp" | "2cp")
}

pub struct Engine {
    rules: [&'static RuleSet; 3],
    supported: HashSet<FeatureBundle>,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine").field("supported_cells", &self.supported.len()).finish()
    }
}

impl Engine {
    /// The engine over the shipped rule data, built once per process.
    pub fn builtin() -> &'static Engine {
        static ENGINE: OnceLock<Engine> = OnceLock::new();
        ENGINE.get_or_init(|| Engine::with_rules(Stem::ALL.map(stem_rules)))
    }

    /// Loads `g.toml`, `d.toml` and `n.toml` from `dir`. The rule sets live
    /// for the rest of the process.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Engine, AnalyzerError> {
        let mut loaded = Vec::with_capacity(3);
        for stem in Stem::ALL {
            let path = dir.as_ref().join(format!("{}.toml", stem.code()));
            let text = std::fs::read_to_string(path)?;
            let rules = load_rules(&text).map_err(|source| AnalyzerError::Rules { stem, source })?;
            loaded.push(&*Box::leak(Box::new(rules)));
        }
        let rules: [&'static RuleSet; 3] = loaded.try_into().expect("three stems");
        Ok(Engine::with_rules(rules))
    }

    fn with_rules(rules: [&'static RuleSet; 3]) -> Engine {
        let supported = probe_supported(&|s: Stem| rules[s as usize]);
        Engine { rules, supported }
    }

    pub fn rules(&self, stem: Stem) -> &RuleSet {
        self.rules[stem as usize]
    }

    pub fn is_supported(&self, bundle: &FeatureBundle) -> bool {
        self.supported.contains(bundle)
    }

    /// Every supported cell, in stem, tense, class, png order.
    pub fn supported_bundles(&self) -> Vec<FeatureBundle> {
        let mut all: Vec<FeatureBundle> = self.supported.iter().copied().collect();
        all.sort();
        all
    }

    /// All readings of `text`, ordered by stem, then tense, then wildcard
    /// expansion. An empty list means no parse.
    pub fn parse(&self, text: &str) -> Result<Vec<Analysis>, AnalyzerError> {
        let form = decode(text)?;
        Ok(self.parse_form(&form))
    }

    pub fn parse_form(&self, form: &SegmentedForm) -> Vec<Analysis> {
        let expansions = expand_wildcards(form);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for stem in Stem::ALL {
            let rules = self.rules(stem);
            for tense in Tense::ALL {
                for expansion in &expansions {
                    for class in RootClass::ALL {
                        self.parse_cell(rules, stem, tense, class, expansion, &mut seen, &mut out);
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn parse_cell(
        &self,
        rules: &RuleSet,
        stem: Stem,
        tense: Tense,
        class: RootClass,
        form: &SegmentedForm,
        seen: &mut HashSet<Analysis>,
        out: &mut Vec<Analysis>,
    ) {
        let entry = query_entry(stem, tense, class);
        if !rules.contains(&entry.name) {
            return;
        }
        let Ok(results) = rules.recognize(&entry, form) else { return };
        for (bindings, remainder) in results {
            let Some(root) = bindings.root() else { continue };
            if !class.admits(root) {
                continue;
            }
            let png = match (bindings.features.get("P"), bindings.features.get("G"), bindings.features.get("N")) {
                (Some(p), Some(g), Some(n)) => PngCell::from_features(p, g, n),
                _ => None,
            };
            let Some(png) = png else { continue };
            let bundle = FeatureBundle { stem, tense, png, root_class: class };
            if !self.is_supported(&bundle) {
                continue;
            }
            let suffixes = if remainder.is_empty() {
                vec![SuffixFeatures::NONE]
            } else {
                let base = SegmentedForm::new(form.segments()[..form.len() - remainder.len()].to_vec());
                let context = SuffixContext::of_base(&base, vocalic_ending(&bundle));
                parse_suffix(&remainder, context)
            };
            for suffix in suffixes {
                let analysis = Analysis {
                    radicals: root,
                    bundle,
                    suffix,
                    normalized: form.clone(),
                    label: label(&bundle, &suffix),
                };
                if seen.insert(analysis.clone()) {
                    out.push(analysis);
                }
            }
        }
    }

    /// Forms for every cell the request matches. Wildcard fields skip
    /// unsupported cells; a fully concrete request for an unsupported cell
    /// is an error.
    pub fn generate(&self, req: &GenRequest) -> Result<Vec<Generated>, AnalyzerError> {
        let suffix = req.suffix.unwrap_or_default();
        if !suffix.is_valid() {
            return Err(AnalyzerError::InvalidRequest(format!("no suffix for {suffix:?}")));
        }
        if let Some(png) = req.png {
            if !png.is_subject() {
                return Err(AnalyzerError::InvalidRequest(format!("{png} is not a subject cell")));
            }
        }
        let classes = RootClass::of_root(req.radicals);
        if classes.is_empty() {
            return Err(AnalyzerError::Unsupported(format!(
                "root {} belongs to no supported class",
                root_text(req.radicals)
            )));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut matched = false;
        let bindings = Bindings::with_radicals(req.radicals);
        for stem in Stem::ALL.into_iter().filter(|s| req.stem.is_none_or(|r| r == *s)) {
            for tense in Tense::ALL.into_iter().filter(|t| req.tense.is_none_or(|r| r == *t)) {
                for &class in &classes {
                    for png in PngCell::SUBJECTS.into_iter().filter(|p| req.png.is_none_or(|r| r == *p)) {
                        let bundle = FeatureBundle { stem, tense, png, root_class: class };
                        if !self.is_supported(&bundle) {
                            continue;
                        }
                        matched = true;
                        let entry = Entry::new(raw_entry_name(stem, tense, class), png.features());
                        let bases = self
                            .rules(stem)
                            .realize(&entry, &bindings)
                            .map_err(|source| AnalyzerError::Rules { stem, source })?;
                        for base in bases {
                            let context = SuffixContext::of_base(&base, vocalic_ending(&bundle));
                            let form = base.concat(&realize_suffix(&suffix, context));
                            if !seen.insert((bundle, form.clone())) {
                                continue;
                            }
                            let display = Display::of(&form).expect("realized forms are wildcard-free");
                            out.push(Generated {
                                analysis: Analysis {
                                    radicals: req.radicals,
                                    bundle,
                                    suffix,
                                    normalized: form,
                                    label: label(&bundle, &suffix),
                                },
                                display,
                            });
                        }
                    }
                }
            }
        }
        if !matched && req.is_concrete() {
            return Err(AnalyzerError::Unsupported(format!(
                "{} {} {} for root {}",
                req.stem.unwrap(),
                req.tense.unwrap(),
                req.png.unwrap(),
                root_text(req.radicals)
            )));
        }
        Ok(out)
    }

    /// Generates every form of one cell and checks each parses back to the
    /// same root, cell and suffix.
    pub fn round_trip_check(&self, root: [Consonant; 3], bundle: FeatureBundle, suffix: SuffixFeatures) -> bool {
        if !bundle.root_class.admits(root) {
            return false;
        }
        let req = GenRequest {
            radicals: root,
            stem: Some(bundle.stem),
            tense: Some(bundle.tense),
            png: Some(bundle.png),
            suffix: Some(suffix),
        };
        let Ok(generated) = self.generate(&req) else { return false };
        let mine: Vec<&Generated> = generated.iter().filter(|g| g.analysis.bundle == bundle).collect();
        !mine.is_empty()
            && mine.iter().all(|g| {
                self.parse_form(&g.analysis.normalized)
                    .iter()
                    .any(|a| a.same_reading(&g.analysis))
            })
    }
}

/// [`Engine::parse`] on the shipped rules.
pub fn parse(text: &str) -> Result<Vec<Analysis>, AnalyzerError> {
    Engine::builtin().parse(text)
}

/// [`Engine::generate`] on the shipped rules.
pub fn generate(req: &GenRequest) -> Result<Vec<Generated>, AnalyzerError> {
    Engine::builtin().generate(req)
}

/// [`Engine::round_trip_check`] on the shipped rules, without suffixes.
pub fn round_trip_check(root: [Consonant; 3], bundle: FeatureBundle) -> bool {
    Engine::builtin().round_trip_check(root, bundle, SuffixFeatures::NONE)
}
