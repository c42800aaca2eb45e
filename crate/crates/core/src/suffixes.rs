//! Ventive, dative and accusative suffixes and conjunctive -ma.
//!
//! Surface order is ventive, dative, accusative, -ma. A suffix-final m
//! assimilates completely to the consonant that opens the next suffix:
//! `nim` + `kim` is `nikkim`, `am` + `šum` is `aššum`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::segform::{decode, Consonant, Segment, SegmentedForm};
use crate::stems::PngCell;

/// What the verb base ends in, which selects the ventive allomorph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuffixContext {
    /// Final consonant: `-am`.
    Consonant,
    /// Final short or long vowel that is not an ending: `-m`.
    Vowel,
    /// Person/number ending, overlong vowel, or third-weak final vowel: `-nim`.
    Ending,
}

impl SuffixContext {
    pub const ALL: [SuffixContext; 3] =
        [SuffixContext::Consonant, SuffixContext::Vowel, SuffixContext::Ending];

    /// Context for a base. `vocalic_ending` is true when the base's final
    /// vowel belongs to an ending rather than to the stem.
    pub fn of_base(base: &SegmentedForm, vocalic_ending: bool) -> SuffixContext {
        match base.last() {
            Some(Segment::Consonant(_)) | None => SuffixContext::Consonant,
            Some(Segment::Vowel(_, crate::segform::Length::Overlong)) => SuffixContext::Ending,
            Some(_) if vocalic_ending => SuffixContext::Ending,
            Some(_) => SuffixContext::Vowel,
        }
    }
}

impl fmt::Display for SuffixContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SuffixContext::Consonant => "consonant",
            SuffixContext::Vowel => "vowel",
            SuffixContext::Ending => "ending",
        })
    }
}

impl std::str::FromStr for SuffixContext {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SuffixContext::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown suffix context {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SuffixFeatures {
    pub ventive: bool,
    pub dative: Option<PngCell>,
    pub accusative: Option<PngCell>,
    pub ma: bool,
}

impl SuffixFeatures {
    pub const NONE: SuffixFeatures =
        SuffixFeatures { ventive: false, dative: None, accusative: None, ma: false };

    pub fn is_empty(&self) -> bool {
        *self == SuffixFeatures::NONE
    }

    /// Whether the table covers the requested cells.
    pub fn is_valid(&self) -> bool {
        let t = table();
        self.dative.is_none_or(|c| t.dative.contains_key(&c))
            && self.accusative.is_none_or(|c| t.accusative.contains_key(&c))
    }

    /// The whole feature space, in a fixed order.
    pub fn all() -> Vec<SuffixFeatures> {
        let t = table();
        let datives: Vec<Option<PngCell>> =
            std::iter::once(None).chain(t.dative.keys().copied().map(Some)).collect();
        let accusatives: Vec<Option<PngCell>> =
            std::iter::once(None).chain(t.accusative.keys().copied().map(Some)).collect();
        let mut out = Vec::new();
        for ventive in [false, true] {
            for &dative in &datives {
                for &accusative in &accusatives {
                    for ma in [false, true] {
                        out.push(SuffixFeatures { ventive, dative, accusative, ma });
                    }
                }
            }
        }
        out
    }
}

/// Segment tables for the pronominal suffixes.
#[derive(Debug, Clone)]
pub struct SuffixTable {
    pub accusative: BTreeMap<PngCell, SegmentedForm>,
    pub dative: BTreeMap<PngCell, SegmentedForm>,
    ventive: [SegmentedForm; 3],
    ma: SegmentedForm,
}

impl SuffixTable {
    pub fn ventive(&self, context: SuffixContext) -> &SegmentedForm {
        &self.ventive[context as usize]
    }
}

const ACCUSATIVE: [(&str, &str); 10] = [
    ("1cs", "ni"),
    ("2ms", "ka"),
    ("2fs", "ki"),
    ("3ms", "$u"),
    ("3fs", "$i"),
    ("1cp", "niaati"),
    ("2mp", "kunuuti"),
    ("2fp", "kinaati"),
    ("3mp", "$unuuti"),
    ("3fp", "$inaati"),
];

// No 1cs dative: the ventive alone carries "to me".
const DATIVE: [(&str, &str); 9] = [
    ("2ms", "kum"),
    ("2fs", "kim"),
    ("3ms", "$um"),
    ("3fs", "$im"),
    ("1cp", "niaa$im"),
    ("2mp", "kunuu$im"),
    ("2fp", "kinaa$im"),
    ("3mp", "$unuu$im"),
    ("3fp", "$inaa$im"),
];

pub fn table() -> &'static SuffixTable {
    static TABLE: OnceLock<SuffixTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let form = |s: &str| decode(s).expect("suffix table entry decodes");
        let cells = |rows: &[(&str, &str)]| {
            rows.iter()
                .map(|(c, s)| (c.parse::<PngCell>().expect("suffix table cell"), form(s)))
                .collect()
        };
        SuffixTable {
            accusative: cells(&ACCUSATIVE),
            dative: cells(&DATIVE),
            ventive: [form("am"), form("m"), form("nim")],
            ma: form("ma"),
        }
    })
}

fn pieces(f: &SuffixFeatures, context: SuffixContext) -> Vec<&'static SegmentedForm> {
    let t = table();
    let mut out = Vec::with_capacity(4);
    if f.ventive {
        out.push(t.ventive(context));
    }
    if let Some(c) = f.dative {
        out.push(&t.dative[&c]);
    }
    if let Some(c) = f.accusative {
        out.push(&t.accusative[&c]);
    }
    if f.ma {
        out.push(&t.ma);
    }
    out
}

const M: Segment = Segment::Consonant(Consonant::M);

/// Surface form of a suffix chain after a base in `context`.
///
/// Panics if `features` names a cell outside the tables (see
/// [`SuffixFeatures::is_valid`]).
pub fn realize_suffix(features: &SuffixFeatures, context: SuffixContext) -> SegmentedForm {
    let parts = pieces(features, context);
    let mut out: Vec<Segment> = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let segs = part.segments();
        match parts.get(i + 1) {
            Some(next) if segs.last() == Some(&M) => {
                out.extend_from_slice(&segs[..segs.len() - 1]);
                out.push(next.segments()[0]);
            }
            _ => out.extend_from_slice(segs),
        }
    }
    SegmentedForm::new(out)
}

/// Every feature set whose realization after `context` is exactly `remainder`,
/// in sorted order.
pub fn parse_suffix(remainder: &SegmentedForm, context: SuffixContext) -> Vec<SuffixFeatures> {
    let mut found = BTreeSet::new();
    let search = Search { segs: remainder.segments(), context, table: table() };
    search.go(0, 0, Link::Free, SuffixFeatures::NONE, &mut found);
    found.into_iter().collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Link {
    /// Nothing constrains the next piece.
    Free,
    /// The previous piece ended in an unassimilated m, so nothing may follow.
    Closed,
    /// The previous piece's m surfaced as this consonant; the next piece
    /// must start with it.
    Expect(Segment),
}

struct Search<'a> {
    segs: &'a [Segment],
    context: SuffixContext,
    table: &'static SuffixTable,
}

impl Search<'_> {
    fn options(&self, slot: usize) -> Vec<(SuffixFeatures, &'static SegmentedForm)> {
        let none = SuffixFeatures::NONE;
        match slot {
            0 => vec![(SuffixFeatures { ventive: true, ..none }, self.table.ventive(self.context))],
            1 => self
                .table
                .dative
                .iter()
                .map(|(c, f)| (SuffixFeatures { dative: Some(*c), ..none }, f))
                .collect(),
            2 => self
                .table
                .accusative
                .iter()
                .map(|(c, f)| (SuffixFeatures { accusative: Some(*c), ..none }, f))
                .collect(),
            3 => vec![(SuffixFeatures { ma: true, ..none }, &self.table.ma)],
            _ => Vec::new(),
        }
    }

    fn go(
        &self,
        slot: usize,
        pos: usize,
        link: Link,
        acc: SuffixFeatures,
        found: &mut BTreeSet<SuffixFeatures>,
    ) {
        if slot == 4 {
            if pos == self.segs.len() && !matches!(link, Link::Expect(_)) {
                found.insert(acc);
            }
            return;
        }
        // Leave the slot empty.
        self.go(slot + 1, pos, link, acc, found);
        if link == Link::Closed {
            return;
        }
        for (feature, piece) in self.options(slot) {
            let p = piece.segments();
            if let Link::Expect(c) = link {
                if p[0] != c {
                    continue;
                }
            }
            let merged = merge(acc, feature);
            let rest = &self.segs[pos..];
            if rest.starts_with(p) {
                let next = if p.last() == Some(&M) { Link::Closed } else { Link::Free };
                self.go(slot + 1, pos + p.len(), next, merged, found);
            }
            if p.last() == Some(&M) {
                let stem = &p[..p.len() - 1];
                if rest.starts_with(stem) {
                    if let Some(&c @ Segment::Consonant(_)) = rest.get(stem.len()) {
                        self.go(slot + 1, pos + stem.len() + 1, Link::Expect(c), merged, found);
                    }
                }
            }
        }
    }
}

fn merge(a: SuffixFeatures, b: SuffixFeatures) -> SuffixFeatures {
    SuffixFeatures {
        ventive: a.ventive || b.ventive,
        dative: a.dative.or(b.dative),
        accusative: a.accusative.or(b.accusative),
        ma: a.ma || b.ma,
    }
}

/// Human-readable label. A ventive with a dative reads `Ventive 2 f s`;
/// -ma contributes nothing.
pub fn suffix_label(features: &SuffixFeatures) -> String {
    let mut parts = Vec::new();
    match (features.ventive, features.dative) {
        (true, Some(d)) => parts.push(format!("Ventive {}", d.spaced())),
        (true, None) => parts.push("Ventive".to_string()),
        (false, Some(d)) => parts.push(format!("Dative {d}")),
        (false, None) => {}
    }
    if let Some(a) = features.accusative {
        parts.push(format!("Accusative {a}"));
    }
    parts.join(" ")
}
