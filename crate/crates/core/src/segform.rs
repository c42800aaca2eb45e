//! Segment inventory and the normal-form encoding of verb forms.
//!
//! A verb form is a flat sequence of [`Segment`]s. The ASCII transliteration
//! convention is the canonical wire format:
//!
//! | segment            | ASCII | Unicode |
//! |--------------------|-------|---------|
//! | short vowel        | `a`   | `a`     |
//! | long vowel         | `aa`  | `ā`     |
//! | overlong vowel     | `aaa` | `â`     |
//! | wildcard vowel     | `a*`  | none    |
//! | š                  | `$`   | `š`     |
//! | ṣ                  | `S`   | `ṣ`     |
//! | ṭ                  | `T`   | `ṭ`     |
//! | ḫ                  | `x`   | `ḫ`     |
//! | aleph              | `'`   | `ʔ`     |
//! | generic weak radical | `&` | `&`     |
//!
//! All other consonants are written as themselves
//! (`b d g h k l m n p q r s t w y z`).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Consonant {
    B,
    D,
    G,
    H,
    /// ḫ
    Het,
    K,
    L,
    M,
    N,
    P,
    Q,
    R,
    S,
    T,
    W,
    Y,
    Z,
    /// š
    Shin,
    /// ṣ
    Sade,
    /// ṭ
    Tet,
    /// ʔ
    Aleph,
    /// `&`, the contracted weak radical. Only meaningful as a root radical.
    Weak,
}

impl Consonant {
    pub const ALL: [Consonant; 22] = [
        Consonant::B,
        Consonant::D,
        Consonant::G,
        Consonant::H,
        Consonant::Het,
        Consonant::K,
        Consonant::L,
        Consonant::M,
        Consonant::N,
        Consonant::P,
        Consonant::Q,
        Consonant::R,
        Consonant::S,
        Consonant::T,
        Consonant::W,
        Consonant::Y,
        Consonant::Z,
        Consonant::Shin,
        Consonant::Sade,
        Consonant::Tet,
        Consonant::Aleph,
        Consonant::Weak,
    ];

    pub fn ascii(self) -> char {
        match self {
            Consonant::B => 'b',
            Consonant::D => 'd',
            Consonant::G => 'g',
            Consonant::H => 'h',
            Consonant::Het => 'x',
            Consonant::K => 'k',
            Consonant::L => 'l',
            Consonant::M => 'm',
            Consonant::N => 'n',
            Consonant::P => 'p',
            Consonant::Q => 'q',
            Consonant::R => 'r',
            Consonant::S => 's',
            Consonant::T => 't',
            Consonant::W => 'w',
            Consonant::Y => 'y',
            Consonant::Z => 'z',
            Consonant::Shin => '$',
            Consonant::Sade => 'S',
            Consonant::Tet => 'T',
            Consonant::Aleph => '\'',
            Consonant::Weak => '&',
        }
    }

    pub fn unicode(self) -> char {
        match self {
            Consonant::Het => 'ḫ',
            Consonant::Shin => 'š',
            Consonant::Sade => 'ṣ',
            Consonant::Tet => 'ṭ',
            Consonant::Aleph => 'ʔ',
            other => other.ascii(),
        }
    }

    fn html(self) -> &'static str {
        match self {
            Consonant::Het => "&#7723;",
            Consonant::Shin => "&scaron;",
            Consonant::Sade => "&#7779;",
            Consonant::Tet => "&#7789;",
            Consonant::Aleph => "&#660;",
            Consonant::Weak => "&amp;",
            _ => "",
        }
    }

    pub fn from_ascii(c: char) -> Option<Consonant> {
        Consonant::ALL.iter().copied().find(|k| k.ascii() == c)
    }

    fn from_unicode(c: char) -> Option<Consonant> {
        match c {
            'ḫ' => Some(Consonant::Het),
            'š' => Some(Consonant::Shin),
            'ṣ' => Some(Consonant::Sade),
            'ṭ' => Some(Consonant::Tet),
            'ʔ' | 'ʾ' => Some(Consonant::Aleph),
            _ => None,
        }
    }

    /// Parses a single radical written in either convention.
    pub fn parse(text: &str) -> Option<Consonant> {
        let mut chars = text.chars();
        let c = chars.next()?;
        if chars.next().is_some() {
            return None;
        }
        Consonant::from_ascii(c).or_else(|| Consonant::from_unicode(c))
    }
}

impl fmt::Display for Consonant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ascii())
    }
}

impl Serialize for Consonant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.ascii())
    }
}

impl<'de> Deserialize<'de> for Consonant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Consonant::parse(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("not a consonant: {text:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quality {
    A,
    E,
    I,
    U,
}

impl Quality {
    pub const ALL: [Quality; 4] = [Quality::A, Quality::E, Quality::I, Quality::U];

    pub fn ascii(self) -> char {
        match self {
            Quality::A => 'a',
            Quality::E => 'e',
            Quality::I => 'i',
            Quality::U => 'u',
        }
    }

    fn from_ascii(c: char) -> Option<Quality> {
        match c {
            'a' => Some(Quality::A),
            'e' => Some(Quality::E),
            'i' => Some(Quality::I),
            'u' => Some(Quality::U),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Short,
    Long,
    Overlong,
}

impl Length {
    pub const ALL: [Length; 3] = [Length::Short, Length::Long, Length::Overlong];

    fn run(self) -> usize {
        match self {
            Length::Short => 1,
            Length::Long => 2,
            Length::Overlong => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Consonant(Consonant),
    Vowel(Quality, Length),
    /// A vowel of known quality but unknown length; legal only in parse input.
    WildVowel(Quality),
}

impl Segment {
    pub fn is_vowel(self) -> bool {
        !matches!(self, Segment::Consonant(_))
    }

    fn quality(self) -> Option<Quality> {
        match self {
            Segment::Vowel(q, _) | Segment::WildVowel(q) => Some(q),
            Segment::Consonant(_) => None,
        }
    }
}

/// Output style for [`encode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Ascii,
    Unicode,
    Html,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("empty form")]
    Empty,
    #[error("unknown character {ch:?} at position {pos}")]
    UnknownChar { ch: char, pos: usize },
    #[error("vowel run of length {len} at position {pos} (at most 3 allowed)")]
    VowelRun { pos: usize, len: usize },
    #[error("`*` at position {pos} must follow a single vowel")]
    DanglingStar { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("wildcard vowel cannot be encoded as output")]
pub struct WildcardInOutput;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentedForm(pub Vec<Segment>);

impl SegmentedForm {
    pub fn new(segments: Vec<Segment>) -> Self {
        SegmentedForm(segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Segment> {
        self.0.last().copied()
    }

    pub fn wildcard_count(&self) -> usize {
        self.0
            .iter()
            .filter(|s| matches!(s, Segment::WildVowel(_)))
            .count()
    }

    pub fn has_wildcards(&self) -> bool {
        self.wildcard_count() > 0
    }

    /// True when the ASCII rendering decodes back to exactly these segments:
    /// no two adjacent vowels share a quality.
    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| match (w[0].quality(), w[1].quality()) {
            (Some(a), Some(b)) => a != b,
            _ => true,
        })
    }

    pub fn concat(&self, other: &SegmentedForm) -> SegmentedForm {
        let mut segments = self.0.clone();
        segments.extend_from_slice(&other.0);
        SegmentedForm(segments)
    }

    /// ASCII rendering, with wildcards written as `v*`.
    pub fn to_ascii(&self) -> String {
        let mut out = String::with_capacity(self.0.len() + 4);
        for seg in &self.0 {
            match *seg {
                Segment::Consonant(c) => out.push(c.ascii()),
                Segment::Vowel(q, len) => {
                    for _ in 0..len.run() {
                        out.push(q.ascii());
                    }
                }
                Segment::WildVowel(q) => {
                    out.push(q.ascii());
                    out.push('*');
                }
            }
        }
        out
    }
}

impl fmt::Display for SegmentedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// Serialized as its ASCII transliteration.
impl Serialize for SegmentedForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SegmentedForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text.is_empty() {
            return Ok(SegmentedForm::default());
        }
        decode(&text).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for SegmentedForm {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        decode(s)
    }
}

fn unicode_vowel(c: char) -> Option<(Quality, Length)> {
    use Length::*;
    use Quality::*;
    Some(match c {
        'ā' | 'ä' => (A, Long),
        'ē' | 'ë' => (E, Long),
        'ī' | 'ï' => (I, Long),
        'ū' | 'ü' => (U, Long),
        'â' => (A, Overlong),
        'ê' => (E, Overlong),
        'î' => (I, Overlong),
        'û' => (U, Overlong),
        _ => return None,
    })
}

/// Decodes a transliteration into segments.
///
/// Runs of one, two or three identical ASCII vowel letters are a single short,
/// long or overlong vowel. A single vowel letter followed by `*` is a wildcard.
/// Precomposed Unicode vowels and consonants are accepted as well.
pub fn decode(text: &str) -> Result<SegmentedForm, DecodeError> {
    let chars: Vec<char> = text.trim().nfc().collect();
    if chars.is_empty() {
        return Err(DecodeError::Empty);
    }
    let mut segments = Vec::with_capacity(chars.len());
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        if let Some(q) = Quality::from_ascii(c) {
            let start = pos;
            while pos < chars.len() && chars[pos] == c {
                pos += 1;
            }
            let len = pos - start;
            if chars.get(pos) == Some(&'*') {
                if len != 1 {
                    return Err(DecodeError::DanglingStar { pos });
                }
                pos += 1;
                push_vowel(&mut segments, Segment::WildVowel(q), start)?;
                continue;
            }
            let length = match len {
                1 => Length::Short,
                2 => Length::Long,
                3 => Length::Overlong,
                _ => return Err(DecodeError::VowelRun { pos: start, len }),
            };
            push_vowel(&mut segments, Segment::Vowel(q, length), start)?;
        } else if let Some((q, length)) = unicode_vowel(c) {
            push_vowel(&mut segments, Segment::Vowel(q, length), pos)?;
            pos += 1;
        } else if c == '*' {
            return Err(DecodeError::DanglingStar { pos });
        } else if let Some(k) = Consonant::from_ascii(c).or_else(|| Consonant::from_unicode(c)) {
            segments.push(Segment::Consonant(k));
            pos += 1;
        } else {
            return Err(DecodeError::UnknownChar { ch: c, pos });
        }
    }
    Ok(SegmentedForm(segments))
}

// Rejects input such as "āa" whose vowel boundary has no ASCII spelling.
fn push_vowel(segments: &mut Vec<Segment>, seg: Segment, pos: usize) -> Result<(), DecodeError> {
    if let (Some(prev), Some(q)) = (segments.last().and_then(|s| s.quality()), seg.quality()) {
        if prev == q {
            return Err(DecodeError::VowelRun { pos, len: 4 });
        }
    }
    segments.push(seg);
    Ok(())
}

fn unicode_vowel_char(q: Quality, len: Length) -> char {
    use Length::*;
    use Quality::*;
    match (q, len) {
        (A, Short) => 'a',
        (E, Short) => 'e',
        (I, Short) => 'i',
        (U, Short) => 'u',
        (A, Long) => 'ā',
        (E, Long) => 'ē',
        (I, Long) => 'ī',
        (U, Long) => 'ū',
        (A, Overlong) => 'â',
        (E, Overlong) => 'ê',
        (I, Overlong) => 'î',
        (U, Overlong) => 'û',
    }
}

fn html_vowel(q: Quality, len: Length) -> String {
    let mark = match len {
        Length::Short => return q.ascii().to_string(),
        Length::Long => "macr",
        Length::Overlong => "circ",
    };
    format!("&{}{};", q.ascii(), mark)
}

pub fn encode(form: &SegmentedForm, style: Style) -> Result<String, WildcardInOutput> {
    if form.has_wildcards() {
        return Err(WildcardInOutput);
    }
    Ok(match style {
        Style::Ascii => form.to_ascii(),
        Style::Unicode => form
            .0
            .iter()
            .map(|seg| match *seg {
                Segment::Consonant(c) => c.unicode(),
                Segment::Vowel(q, len) => unicode_vowel_char(q, len),
                Segment::WildVowel(_) => unreachable!(),
            })
            .collect(),
        Style::Html => {
            let mut out = String::new();
            for seg in &form.0 {
                match *seg {
                    Segment::Consonant(c) => match c.html() {
                        "" => out.push(c.ascii()),
                        entity => out.push_str(entity),
                    },
                    Segment::Vowel(q, len) => out.push_str(&html_vowel(q, len)),
                    Segment::WildVowel(_) => unreachable!(),
                }
            }
            out
        }
    })
}

/// Every concrete form obtained by giving each wildcard vowel each of its
/// three lengths. Quality is never varied. Order is Short < Long < Overlong,
/// leftmost wildcard varying slowest.
pub fn expand_wildcards(form: &SegmentedForm) -> Vec<SegmentedForm> {
    let mut out = vec![Vec::with_capacity(form.len())];
    for seg in &form.0 {
        match *seg {
            Segment::WildVowel(q) => {
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        Length::ALL.iter().map(move |&len| {
                            let mut next = prefix.clone();
                            next.push(Segment::Vowel(q, len));
                            next
                        })
                    })
                    .collect();
            }
            other => out.iter_mut().for_each(|p| p.push(other)),
        }
    }
    out.into_iter().map(SegmentedForm).collect()
}

/// Renderings of one form in every output style.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Display {
    pub ascii: String,
    pub unicode: String,
    pub html: String,
}

impl Display {
    pub fn of(form: &SegmentedForm) -> Result<Display, WildcardInOutput> {
        Ok(Display {
            ascii: encode(form, Style::Ascii)?,
            unicode: encode(form, Style::Unicode)?,
            html: encode(form, Style::Html)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Length::*;
    use Quality::*;

    fn c(k: Consonant) -> Segment {
        Segment::Consonant(k)
    }

    fn v(q: Quality) -> Segment {
        Segment::Vowel(q, Short)
    }

    #[test]
    fn decodes_plain_form() {
        use Consonant::*;
        let form = decode("iprus").unwrap();
        assert_eq!(form.0, vec![v(I), c(P), c(R), v(U), c(S)]);
    }

    #[test]
    fn decodes_wildcard() {
        use Consonant::*;
        let form = decode("idda*k").unwrap();
        assert_eq!(form.0, vec![v(I), c(D), c(D), Segment::WildVowel(A), c(K)]);
    }

    #[test]
    fn decodes_long_and_overlong() {
        use Consonant::*;
        assert_eq!(
            decode("iddaak").unwrap().0,
            vec![v(I), c(D), c(D), Segment::Vowel(A, Long), c(K)]
        );
        assert_eq!(
            decode("iddaaak").unwrap().0[3],
            Segment::Vowel(A, Overlong)
        );
        assert_eq!(decode("a").unwrap().0, vec![v(A)]);
    }

    #[test]
    fn decodes_shin() {
        let form = decode("inaddu$i").unwrap();
        assert_eq!(form.0[6], c(Consonant::Shin));
        assert_eq!(form.0[7], v(I));
    }

    #[test]
    fn mixed_quality_runs_are_separate() {
        assert_eq!(decode("ai").unwrap().0, vec![v(A), v(I)]);
    }

    #[test]
    fn decode_errors() {
        assert_eq!(decode(""), Err(DecodeError::Empty));
        assert_eq!(decode("   "), Err(DecodeError::Empty));
        assert!(matches!(
            decode("ipr0s"),
            Err(DecodeError::UnknownChar { ch: '0', pos: 3 })
        ));
        assert!(matches!(
            decode("iddaaaak"),
            Err(DecodeError::VowelRun { len: 4, .. })
        ));
        assert!(matches!(decode("*a"), Err(DecodeError::DanglingStar { pos: 0 })));
        assert!(matches!(decode("id*k"), Err(DecodeError::DanglingStar { .. })));
        assert!(matches!(decode("idaa*k"), Err(DecodeError::DanglingStar { .. })));
    }

    #[test]
    fn decodes_unicode_input() {
        assert_eq!(decode("iddāk").unwrap(), decode("iddaak").unwrap());
        assert_eq!(decode("iddâk").unwrap(), decode("iddaaak").unwrap());
        assert_eq!(decode("inaddûšî").unwrap(), decode("inadduuu$iii").unwrap());
        // combining macron
        assert_eq!(decode("idda\u{304}k").unwrap(), decode("iddaak").unwrap());
        assert!(decode("āa").is_err());
    }

    #[test]
    fn encodes_styles() {
        let form = decode("iddaak").unwrap();
        assert_eq!(encode(&form, Style::Unicode).unwrap(), "iddāk");
        assert_eq!(encode(&form, Style::Html).unwrap(), "idd&amacr;k");
        let form = decode("iddaaak").unwrap();
        assert_eq!(encode(&form, Style::Ascii).unwrap(), "iddaaak");
        assert_eq!(encode(&form, Style::Unicode).unwrap(), "iddâk");
        let form = decode("inadduu$iii").unwrap();
        assert_eq!(encode(&form, Style::Unicode).unwrap(), "inaddūšî");
        assert_eq!(
            encode(&form, Style::Html).unwrap(),
            "inadd&umacr;&scaron;&icirc;"
        );
    }

    #[test]
    fn encode_rejects_wildcards() {
        let form = decode("idda*k").unwrap();
        assert_eq!(encode(&form, Style::Ascii), Err(WildcardInOutput));
    }

    #[test]
    fn expands_single_wildcard() {
        let forms = expand_wildcards(&decode("idda*k").unwrap());
        let ascii: Vec<String> = forms.iter().map(|f| f.to_ascii()).collect();
        assert_eq!(ascii, ["iddak", "iddaak", "iddaaak"]);
    }

    #[test]
    fn wildcard_free_expands_to_itself() {
        let form = decode("iprus").unwrap();
        assert_eq!(expand_wildcards(&form), vec![form]);
    }

    #[test]
    fn two_wildcards_expand_to_nine() {
        let form = decode("ta*mi*").unwrap();
        let got: std::collections::BTreeSet<String> =
            expand_wildcards(&form).iter().map(|f| f.to_ascii()).collect();
        // independent brute force over the two length choices
        let mut want = std::collections::BTreeSet::new();
        for a in ["a", "aa", "aaa"] {
            for i in ["i", "ii", "iii"] {
                want.insert(format!("t{a}m{i}"));
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn parses_radicals() {
        assert_eq!(Consonant::parse("$"), Some(Consonant::Shin));
        assert_eq!(Consonant::parse("š"), Some(Consonant::Shin));
        assert_eq!(Consonant::parse("&"), Some(Consonant::Weak));
        assert_eq!(Consonant::parse("'"), Some(Consonant::Aleph));
        assert_eq!(Consonant::parse("a"), None);
        assert_eq!(Consonant::parse("pr"), None);
    }
}
