//! Paradigm coordinates and the shipped G, D and N rule data.
//!
//! Rule entries are named `<class><stem><tense>`, e.g. `strgdur` for the
//! strong G durative or `w3gprec` for the third-weak G precative. The person,
//! gender and number of a cell travel as the rule's feature arguments.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rulekit::{load_rules, Bindings, Entry, FeatureArg, RuleError, RuleSet};
use crate::segform::Consonant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stem {
    G,
    D,
    N,
}

impl Stem {
    pub const ALL: [Stem; 3] = [Stem::G, Stem::D, Stem::N];

    pub fn code(self) -> &'static str {
        match self {
            Stem::G => "g",
            Stem::D => "d",
            Stem::N => "n",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stem::G => "G",
            Stem::D => "D",
            Stem::N => "N",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tense {
    Preterite,
    Durative,
    Perfect,
    Imperative,
    Precative,
    Vetitive,
}

impl Tense {
    pub const ALL: [Tense; 6] = [
        Tense::Preterite,
        Tense::Durative,
        Tense::Perfect,
        Tense::Imperative,
        Tense::Precative,
        Tense::Vetitive,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Tense::Preterite => "pret",
            Tense::Durative => "dur",
            Tense::Perfect => "perf",
            Tense::Imperative => "imp",
            Tense::Precative => "prec",
            Tense::Vetitive => "vet",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tense::Preterite => "Preterite",
            Tense::Durative => "Durative",
            Tense::Perfect => "Perfect",
            Tense::Imperative => "Imperative",
            Tense::Precative => "Precative",
            Tense::Vetitive => "Vetitive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum RootClass {
    Strong,
    FirstN,
    FirstW_Active,
    FirstW_Stative,
    FirstAleph,
    SecondAleph,
    ThirdWeak,
}

fn is_weak(c: Consonant) -> bool {
    matches!(c, Consonant::Weak | Consonant::Aleph | Consonant::W | Consonant::Y)
}

impl RootClass {
    pub const ALL: [RootClass; 7] = [
        RootClass::Strong,
        RootClass::FirstN,
        RootClass::FirstW_Active,
        RootClass::FirstW_Stative,
        RootClass::FirstAleph,
        RootClass::SecondAleph,
        RootClass::ThirdWeak,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RootClass::Strong => "str",
            RootClass::FirstN => "n1",
            RootClass::FirstW_Active => "w1a",
            RootClass::FirstW_Stative => "w1s",
            RootClass::FirstAleph => "a1",
            RootClass::SecondAleph => "a2",
            RootClass::ThirdWeak => "w3",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RootClass::Strong => "Strong",
            RootClass::FirstN => "FirstN",
            RootClass::FirstW_Active => "FirstW_Active",
            RootClass::FirstW_Stative => "FirstW_Stative",
            RootClass::FirstAleph => "FirstAleph",
            RootClass::SecondAleph => "SecondAleph",
            RootClass::ThirdWeak => "ThirdWeak",
        }
    }

    /// Label fragment inserted after the tense; empty for strong roots.
    pub fn qualifier(self) -> &'static str {
        match self {
            RootClass::Strong => "",
            RootClass::FirstN => "First N",
            RootClass::FirstW_Active => "First W Active",
            RootClass::FirstW_Stative => "First W Stative",
            RootClass::FirstAleph => "First Aleph",
            RootClass::SecondAleph => "Second Aleph",
            RootClass::ThirdWeak => "Third Weak",
        }
    }

    /// Whether a root belongs to this class. Doubly weak roots belong to none,
    /// except that a third-weak root may begin with n.
    pub fn admits(self, [r1, r2, r3]: [Consonant; 3]) -> bool {
        use Consonant::{Aleph, Weak, N, W};
        match self {
            RootClass::Strong => r1 != N && !is_weak(r1) && !is_weak(r2) && !is_weak(r3),
            RootClass::FirstN => r1 == N && !is_weak(r2) && !is_weak(r3),
            RootClass::FirstW_Active | RootClass::FirstW_Stative => {
                r1 == W && !is_weak(r2) && !is_weak(r3)
            }
            RootClass::FirstAleph => r1 == Aleph && !is_weak(r2) && !is_weak(r3),
            RootClass::SecondAleph => r2 == Aleph && !is_weak(r1) && !is_weak(r3),
            RootClass::ThirdWeak => r3 == Weak && !is_weak(r1) && !is_weak(r2),
        }
    }

    /// A representative root, used to probe which cells the rule data covers.
    pub fn sample_root(self) -> [Consonant; 3] {
        use Consonant::*;
        match self {
            RootClass::Strong => [P, R, S],
            RootClass::FirstN => [N, D, N],
            RootClass::FirstW_Active => [W, Shin, B],
            RootClass::FirstW_Stative => [W, Q, R],
            RootClass::FirstAleph => [Aleph, K, L],
            RootClass::SecondAleph => [Shin, Aleph, L],
            RootClass::ThirdWeak => [Q, B, Weak],
        }
    }

    /// Classes admitting `root`, in declaration order.
    pub fn of_root(root: [Consonant; 3]) -> Vec<RootClass> {
        RootClass::ALL.into_iter().filter(|c| c.admits(root)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    M,
    F,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    S,
    P,
}

/// Person, gender and number. Subject cells use common gender where the
/// verb does not distinguish it; pronominal suffixes use the full set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PngCell {
    pub person: u8,
    pub gender: Gender,
    pub number: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid person/gender/number cell {0:?}")]
pub struct InvalidCell(pub String);

impl PngCell {
    pub const fn new(person: u8, gender: Gender, number: Number) -> PngCell {
        PngCell { person, gender, number }
    }

    /// The eight licit subject cells, in paradigm order.
    pub const SUBJECTS: [PngCell; 8] = [
        PngCell::new(3, Gender::C, Number::S),
        PngCell::new(2, Gender::M, Number::S),
        PngCell::new(2, Gender::F, Number::S),
        PngCell::new(1, Gender::C, Number::S),
        PngCell::new(3, Gender::M, Number::P),
        PngCell::new(3, Gender::F, Number::P),
        PngCell::new(2, Gender::C, Number::P),
        PngCell::new(1, Gender::C, Number::P),
    ];

    /// Cells that pronominal suffixes distinguish.
    pub const OBJECTS: [PngCell; 10] = [
        PngCell::new(1, Gender::C, Number::S),
        PngCell::new(2, Gender::M, Number::S),
        PngCell::new(2, Gender::F, Number::S),
        PngCell::new(3, Gender::M, Number::S),
        PngCell::new(3, Gender::F, Number::S),
        PngCell::new(1, Gender::C, Number::P),
        PngCell::new(2, Gender::M, Number::P),
        PngCell::new(2, Gender::F, Number::P),
        PngCell::new(3, Gender::M, Number::P),
        PngCell::new(3, Gender::F, Number::P),
    ];

    pub fn is_subject(self) -> bool {
        PngCell::SUBJECTS.contains(&self)
    }

    fn gender_char(self) -> char {
        match self.gender {
            Gender::M => 'm',
            Gender::F => 'f',
            Gender::C => 'c',
        }
    }

    fn number_char(self) -> char {
        match self.number {
            Number::S => 's',
            Number::P => 'p',
        }
    }

    /// Spaced form used in analysis labels: `3 c s`.
    pub fn spaced(self) -> String {
        format!("{} {} {}", self.person, self.gender_char(), self.number_char())
    }

    pub fn features(self) -> Vec<FeatureArg> {
        vec![
            FeatureArg::constant(self.person.to_string()),
            FeatureArg::constant(self.gender_char().to_string()),
            FeatureArg::constant(self.number_char().to_string()),
        ]
    }

    /// Reads back the constants a rule bound for the `P`, `G`, `N` variables.
    pub fn from_features(p: &str, g: &str, n: &str) -> Option<PngCell> {
        format!("{p}{g}{n}").parse().ok()
    }
}

impl fmt::Display for PngCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.person, self.gender_char(), self.number_char())
    }
}

impl FromStr for PngCell {
    type Err = InvalidCell;

    /// Accepts `3cs` and `3 c s`.
    fn from_str(s: &str) -> Result<PngCell, InvalidCell> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || InvalidCell(s.to_string());
        let mut chars = compact.chars();
        let (Some(p), Some(g), Some(n), None) = (chars.next(), chars.next(), chars.next(), chars.next())
        else {
            return Err(bad());
        };
        let person = match p {
            '1' => 1,
            '2' => 2,
            '3' => 3,
            _ => return Err(bad()),
        };
        let gender = match g {
            'm' => Gender::M,
            'f' => Gender::F,
            'c' => Gender::C,
            _ => return Err(bad()),
        };
        let number = match n {
            's' => Number::S,
            'p' => Number::P,
            _ => return Err(bad()),
        };
        Ok(PngCell::new(person, gender, number))
    }
}

impl Serialize for PngCell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PngCell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! parse_by_name {
    ($ty:ident, $what:literal) => {
        impl FromStr for $ty {
            type Err = String;

            /// Case-insensitive on the display name or the short code.
            fn from_str(s: &str) -> Result<$ty, String> {
                $ty::ALL
                    .into_iter()
                    .find(|v| v.name().eq_ignore_ascii_case(s) || v.code().eq_ignore_ascii_case(s))
                    .ok_or_else(|| format!("unknown {} {s:?}", $what))
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

parse_by_name!(Stem, "stem");
parse_by_name!(Tense, "tense");
parse_by_name!(RootClass, "root class");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeatureBundle {
    pub stem: Stem,
    pub tense: Tense,
    pub png: PngCell,
    pub root_class: RootClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StemError {
    #[error("unsupported cell: {0}")]
    UnsupportedCell(String),
    #[error("rule data for stem {stem}: {source}")]
    Rules { stem: Stem, source: RuleError },
}

/// Rule entry for `(stem, tense, root_class)`.
///
/// Errors with [`StemError::UnsupportedCell`] when the shipped data cannot
/// realize the cell for the class's sample root.
pub fn entry_name(bundle: FeatureBundle) -> Result<String, StemError> {
    let name = raw_entry_name(bundle.stem, bundle.tense, bundle.root_class);
    if is_supported(bundle) {
        Ok(name)
    } else {
        Err(StemError::UnsupportedCell(format!(
            "{} {} {} {}",
            bundle.stem, bundle.tense, bundle.root_class, bundle.png
        )))
    }
}

/// Whether the shipped data covers `bundle`. Computed once for all cells.
pub fn is_supported(bundle: FeatureBundle) -> bool {
    static SUPPORTED: OnceLock<HashSet<FeatureBundle>> = OnceLock::new();
    SUPPORTED.get_or_init(|| probe_supported(&stem_rules)).contains(&bundle)
}

/// Every supported bundle, in stem, tense, class, png order.
pub fn supported_bundles() -> Vec<FeatureBundle> {
    let mut all = Vec::new();
    for stem in Stem::ALL {
        for tense in Tense::ALL {
            for root_class in RootClass::ALL {
                for png in PngCell::SUBJECTS {
                    let b = FeatureBundle { stem, tense, png, root_class };
                    if is_supported(b) {
                        all.push(b);
                    }
                }
            }
        }
    }
    all
}

/// Cells that `rules_for` can realize for each class's sample root.
pub fn probe_supported<'a>(rules_for: &dyn Fn(Stem) -> &'a RuleSet) -> HashSet<FeatureBundle> {
    let mut set = HashSet::new();
    for stem in Stem::ALL {
        let rules = rules_for(stem);
        for tense in Tense::ALL {
            for root_class in RootClass::ALL {
                let name = raw_entry_name(stem, tense, root_class);
                if !rules.contains(&name) {
                    continue;
                }
                let bindings = Bindings::with_radicals(root_class.sample_root());
                for png in PngCell::SUBJECTS {
                    let entry = Entry::new(name.clone(), png.features());
                    if rules.realize(&entry, &bindings).is_ok_and(|f| !f.is_empty()) {
                        set.insert(FeatureBundle { stem, tense, png, root_class });
                    }
                }
            }
        }
    }
    set
}

/// The naming scheme alone, without checking that the entry exists.
pub fn raw_entry_name(stem: Stem, tense: Tense, class: RootClass) -> String {
    format!("{}{}{}", class.code(), stem.code(), tense.code())
}

/// Query entry with `P`, `G`, `N` variables, for recognition.
pub fn query_entry(stem: Stem, tense: Tense, class: RootClass) -> Entry {
    Entry::new(
        raw_entry_name(stem, tense, class),
        vec![FeatureArg::var("P"), FeatureArg::var("G"), FeatureArg::var("N")],
    )
}

/// Concrete entry for one bundle, for realization.
pub fn concrete_entry(bundle: FeatureBundle) -> Result<Entry, StemError> {
    Ok(Entry::new(entry_name(bundle)?, bundle.png.features()))
}

pub fn stem_source(stem: Stem) -> &'static str {
    match stem {
        Stem::G => include_str!("../data/g.toml"),
        Stem::D => include_str!("../data/d.toml"),
        Stem::N => include_str!("../data/n.toml"),
    }
}

/// Loads the shipped rule file for `stem`, bypassing the cache.
pub fn load_stem(stem: Stem) -> Result<RuleSet, StemError> {
    load_rules(stem_source(stem)).map_err(|source| StemError::Rules { stem, source })
}

/// The cached rule set for `stem`. The shipped files are validated by the
/// test suite, so a load failure here is a build defect and panics.
pub fn stem_rules(stem: Stem) -> &'static RuleSet {
    static CACHE: [OnceLock<RuleSet>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = &CACHE[stem as usize];
    slot.get_or_init(|| load_stem(stem).unwrap_or_else(|e| panic!("{e}")))
}
