//! Bidirectional rule engine.
//!
//! A [`RuleSet`] is a list of [`RuleTemplate`]s, the analog of definite clause
//! grammar productions. The same rules run in two directions:
//! [`RuleSet::recognize`] consumes a prefix of a surface form and binds the
//! root radicals, and [`RuleSet::realize`] substitutes bound radicals and
//! enumerates vowel-class members to produce surface forms.
//!
//! Rule documents are TOML:
//!
//! ```toml
//! version = 1
//! rules = [
//!   { name = "pret", features = ["3", "c", "s"], body = ["literal:i", "radical:1", "radical:2", "class:vs", "radical:3"] },
//!   { name = "pret", features = ["3", "m", "p"], body = ["call:pret(3,c,s)", "literal:uu"] },
//! ]
//!
//! [classes]
//! ae_l = ["aa", "ee"]
//! ```
//!
//! Body items are `literal:<ascii>`, `radical:<1|2|3>`, `class:<id>`,
//! `call:<name>(<features>)` and `bind:<1|2|3>=<consonant>`. The last one
//! consumes nothing; it fixes a radical that does not surface (the weak `&`,
//! aleph, or an assimilated `n`/`w`). Feature arguments starting with an
//! uppercase letter are variables, anything else is a constant.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::segform::{decode, Consonant, Length, Quality, Segment, SegmentedForm};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("malformed rule document: {0}")]
    Syntax(String),
    #[error("unsupported rule schema version {0} (expected {SCHEMA_VERSION})")]
    Version(u32),
    #[error("rule `{rule}`: {reason}")]
    Invalid { rule: String, reason: String },
    #[error("unknown vowel class `{0}`")]
    UnknownClass(String),
    #[error("unknown rule `{0}`")]
    UnknownEntry(String),
    #[error("radical {0} is not bound")]
    UnboundRadical(u8),
    #[error("entry `{0}` must be realized with constant features")]
    NonConstantFeature(String),
}

fn invalid(rule: &str, reason: impl Into<String>) -> RuleError {
    RuleError::Invalid {
        rule: rule.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureArg {
    Const(String),
    Var(String),
}

impl FeatureArg {
    pub fn parse(text: &str) -> FeatureArg {
        if text.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
            FeatureArg::Var(text.to_string())
        } else {
            FeatureArg::Const(text.to_string())
        }
    }

    pub fn constant(text: impl Into<String>) -> FeatureArg {
        FeatureArg::Const(text.into())
    }

    pub fn var(text: impl Into<String>) -> FeatureArg {
        FeatureArg::Var(text.into())
    }
}

impl fmt::Display for FeatureArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureArg::Const(s) | FeatureArg::Var(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleItem {
    Literal(SegmentedForm),
    /// 1-based radical index.
    RadicalRef(u8),
    ClassSlot(String),
    Call {
        rule: String,
        features: Vec<FeatureArg>,
    },
    /// Fixes a radical without consuming input.
    Bind { index: u8, consonant: Consonant },
}

impl RuleItem {
    pub fn parse(text: &str) -> Result<RuleItem, String> {
        let (tag, rest) = text
            .split_once(':')
            .ok_or_else(|| format!("item {text:?} has no tag"))?;
        match tag {
            "literal" => {
                let form = decode(rest).map_err(|e| format!("literal {rest:?}: {e}"))?;
                if form.has_wildcards() {
                    return Err(format!("literal {rest:?} contains a wildcard"));
                }
                Ok(RuleItem::Literal(form))
            }
            "radical" => Ok(RuleItem::RadicalRef(parse_radical_index(rest)?)),
            "class" => Ok(RuleItem::ClassSlot(rest.to_string())),
            "call" => {
                let (name, args) = rest
                    .strip_suffix(')')
                    .and_then(|r| r.split_once('('))
                    .ok_or_else(|| format!("call {rest:?} must look like name(args)"))?;
                if !valid_name(name) {
                    return Err(format!("bad rule name {name:?} in call"));
                }
                let features = args
                    .split(',')
                    .map(str::trim)
                    .filter(|a| !a.is_empty())
                    .map(FeatureArg::parse)
                    .collect();
                Ok(RuleItem::Call {
                    rule: name.to_string(),
                    features,
                })
            }
            "bind" => {
                let (index, cons) = rest
                    .split_once('=')
                    .ok_or_else(|| format!("bind {rest:?} must look like n=c"))?;
                let consonant = Consonant::parse(cons)
                    .ok_or_else(|| format!("bind {rest:?}: not a consonant"))?;
                Ok(RuleItem::Bind {
                    index: parse_radical_index(index)?,
                    consonant,
                })
            }
            other => Err(format!("unknown item tag {other:?}")),
        }
    }
}

fn parse_radical_index(text: &str) -> Result<u8, String> {
    match text {
        "1" => Ok(1),
        "2" => Ok(2),
        "3" => Ok(3),
        _ => Err(format!("radical index {text:?} outside 1..=3")),
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTemplate {
    pub name: String,
    pub features: Vec<FeatureArg>,
    pub body: Vec<RuleItem>,
}

/// Vowel classes available to `class:` items, in a fixed member order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VowelClassTable {
    classes: Vec<(String, Vec<Segment>)>,
}

impl Default for VowelClassTable {
    fn default() -> Self {
        let all = |len| Quality::ALL.iter().map(move |&q| Segment::Vowel(q, len)).collect();
        let short = |qs: &[Quality]| qs.iter().map(|&q| Segment::Vowel(q, Length::Short)).collect();
        VowelClassTable {
            classes: vec![
                ("vs".into(), all(Length::Short)),
                ("vl".into(), all(Length::Long)),
                ("vdl".into(), all(Length::Overlong)),
                ("ae".into(), short(&[Quality::A, Quality::E])),
                ("ui".into(), short(&[Quality::U, Quality::I])),
            ],
        }
    }
}

impl VowelClassTable {
    pub fn get(&self, id: &str) -> Option<&[Segment]> {
        self.position(id).map(|i| self.classes[i].1.as_slice())
    }

    fn position(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|(name, _)| name == id)
    }

    pub fn insert(&mut self, id: impl Into<String>, members: Vec<Segment>) {
        let id = id.into();
        match self.position(&id) {
            Some(i) => self.classes[i].1 = members,
            None => self.classes.push((id, members)),
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|(name, _)| name.as_str())
    }
}

/// Radicals and top-level feature variables bound by a derivation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bindings {
    pub radicals: [Option<Consonant>; 3],
    pub features: BTreeMap<String, String>,
}

impl Bindings {
    pub fn with_radicals(radicals: [Consonant; 3]) -> Bindings {
        Bindings {
            radicals: radicals.map(Some),
            features: BTreeMap::new(),
        }
    }

    pub fn root(&self) -> Option<[Consonant; 3]> {
        match self.radicals {
            [Some(a), Some(b), Some(c)] => Some([a, b, c]),
            _ => None,
        }
    }
}

/// A rule name plus the feature arguments it is invoked with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    pub name: String,
    pub features: Vec<FeatureArg>,
}

impl Entry {
    pub fn new(name: impl Into<String>, features: Vec<FeatureArg>) -> Entry {
        Entry {
            name: name.into(),
            features,
        }
    }

    /// `name(a,b,c)` notation, the same as a `call:` body item.
    pub fn parse(text: &str) -> Result<Entry, String> {
        match RuleItem::parse(&format!("call:{text}"))? {
            RuleItem::Call { rule, features } => Ok(Entry::new(rule, features)),
            _ => unreachable!(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: Option<u32>,
    #[serde(default)]
    #[allow(dead_code)]
    stem: Option<String>,
    #[serde(default)]
    rules: Vec<RuleRecord>,
    #[serde(default)]
    classes: BTreeMap<String, Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleRecord {
    name: String,
    #[serde(default)]
    features: Vec<String>,
    body: Vec<String>,
}

pub fn load_rules(source: &str) -> Result<RuleSet, RuleError> {
    let doc: Document = toml::from_str(source).map_err(|e| RuleError::Syntax(e.to_string()))?;
    if let Some(v) = doc.version {
        if v != SCHEMA_VERSION {
            return Err(RuleError::Version(v));
        }
    }
    let mut classes = VowelClassTable::default();
    for (id, members) in doc.classes {
        let mut segs = Vec::with_capacity(members.len());
        for m in members {
            match decode(&m).map(|f| f.0) {
                Ok(s) if s.len() == 1 && matches!(s[0], Segment::Vowel(..)) => segs.push(s[0]),
                _ => return Err(invalid(&id, format!("class member {m:?} is not one vowel"))),
            }
        }
        classes.insert(id, segs);
    }
    let mut templates = Vec::with_capacity(doc.rules.len());
    for rec in doc.rules {
        if !valid_name(&rec.name) {
            return Err(invalid(&rec.name, "rule names are lowercase identifiers"));
        }
        let body = rec
            .body
            .iter()
            .map(|item| RuleItem::parse(item).map_err(|e| invalid(&rec.name, e)))
            .collect::<Result<Vec<_>, _>>()?;
        templates.push(RuleTemplate {
            features: rec.features.iter().map(|f| FeatureArg::parse(f)).collect(),
            name: rec.name,
            body,
        });
    }
    RuleSet::new(templates, classes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    Const(u16),
    Var(u16),
}

#[derive(Debug, Clone)]
enum CItem {
    Lit(Vec<Segment>),
    Rad(usize),
    Class(usize),
    Call { target: usize, args: Vec<Term> },
    Bind(usize, Consonant),
}

#[derive(Debug, Clone)]
struct CRule {
    head: Vec<Term>,
    body: Vec<CItem>,
    nvars: usize,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Free,
    Const(u16),
    Link(u32),
}

#[derive(Debug, Clone)]
struct State {
    radicals: [Option<Consonant>; 3],
    vars: Vec<Slot>,
}

impl State {
    fn deref(&self, mut v: u32) -> Result<u16, u32> {
        loop {
            match self.vars[v as usize] {
                Slot::Free => return Err(v),
                Slot::Const(c) => return Ok(c),
                Slot::Link(next) => v = next,
            }
        }
    }

    fn resolve(&self, t: Term, base: usize) -> Result<u16, u32> {
        match t {
            Term::Const(c) => Ok(c),
            Term::Var(v) => self.deref((base + v as usize) as u32),
        }
    }

    fn unify(&mut self, a: Term, abase: usize, b: Term, bbase: usize) -> bool {
        match (self.resolve(a, abase), self.resolve(b, bbase)) {
            (Ok(x), Ok(y)) => x == y,
            (Err(v), Ok(c)) | (Ok(c), Err(v)) => {
                self.vars[v as usize] = Slot::Const(c);
                true
            }
            (Err(v), Err(w)) => {
                if v != w {
                    self.vars[v as usize] = Slot::Link(w);
                }
                true
            }
        }
    }

    fn bind_radical(&mut self, index: usize, c: Consonant) -> bool {
        match self.radicals[index] {
            Some(bound) => bound == c,
            None => {
                self.radicals[index] = Some(c);
                true
            }
        }
    }
}

/// A validated, immutable rule set.
#[derive(Debug, Clone)]
pub struct RuleSet {
    templates: Vec<RuleTemplate>,
    classes: VowelClassTable,
    class_members: Vec<Vec<Segment>>,
    symbols: Vec<String>,
    names: HashMap<String, usize>,
    alternatives: Vec<Vec<CRule>>,
}

impl RuleSet {
    pub fn empty() -> RuleSet {
        RuleSet::new(Vec::new(), VowelClassTable::default()).expect("empty rule set is valid")
    }

    pub fn new(templates: Vec<RuleTemplate>, classes: VowelClassTable) -> Result<RuleSet, RuleError> {
        let mut names: HashMap<String, usize> = HashMap::new();
        for t in &templates {
            let next = names.len();
            names.entry(t.name.clone()).or_insert(next);
        }
        let class_ids: Vec<String> = classes.ids().map(String::from).collect();
        let class_members: Vec<Vec<Segment>> = class_ids
            .iter()
            .map(|id| classes.get(id).unwrap().to_vec())
            .collect();
        let mut symbols: Vec<String> = Vec::new();
        let mut intern = |s: &str| -> u16 {
            match symbols.iter().position(|x| x == s) {
                Some(i) => i as u16,
                None => {
                    symbols.push(s.to_string());
                    (symbols.len() - 1) as u16
                }
            }
        };
        let mut alternatives: Vec<Vec<CRule>> = vec![Vec::new(); names.len()];
        for t in &templates {
            let mut locals: Vec<String> = Vec::new();
            let mut term = |arg: &FeatureArg, intern: &mut dyn FnMut(&str) -> u16| match arg {
                FeatureArg::Const(c) => Term::Const(intern(c)),
                FeatureArg::Var(v) => {
                    let i = locals.iter().position(|x| x == v).unwrap_or_else(|| {
                        locals.push(v.clone());
                        locals.len() - 1
                    });
                    Term::Var(i as u16)
                }
            };
            let head: Vec<Term> = t.features.iter().map(|a| term(a, &mut intern)).collect();
            let mut body = Vec::with_capacity(t.body.len());
            for item in &t.body {
                body.push(match item {
                    RuleItem::Literal(form) => {
                        if form.is_empty() {
                            return Err(invalid(&t.name, "empty literal"));
                        }
                        if form.has_wildcards() {
                            return Err(invalid(&t.name, "literal contains a wildcard"));
                        }
                        CItem::Lit(form.0.clone())
                    }
                    RuleItem::RadicalRef(i) => CItem::Rad(radical_slot(&t.name, *i)?),
                    RuleItem::ClassSlot(id) => CItem::Class(
                        class_ids
                            .iter()
                            .position(|c| c == id)
                            .ok_or_else(|| invalid(&t.name, format!("unknown class `{id}`")))?,
                    ),
                    RuleItem::Call { rule, features } => {
                        let target = *names.get(rule).ok_or_else(|| {
                            invalid(&t.name, format!("calls undefined rule `{rule}`"))
                        })?;
                        let arity_ok = templates
                            .iter()
                            .any(|c| &c.name == rule && c.features.len() == features.len());
                        if !arity_ok {
                            return Err(invalid(
                                &t.name,
                                format!("no `{rule}` rule takes {} features", features.len()),
                            ));
                        }
                        CItem::Call {
                            target,
                            args: features.iter().map(|a| term(a, &mut intern)).collect(),
                        }
                    }
                    RuleItem::Bind { index, consonant } => {
                        CItem::Bind(radical_slot(&t.name, *index)?, *consonant)
                    }
                });
            }
            check_head_variables(t)?;
            alternatives[names[&t.name]].push(CRule {
                head,
                body,
                nvars: locals.len(),
            });
        }
        let set = RuleSet {
            templates,
            classes,
            class_members,
            symbols,
            names,
            alternatives,
        };
        set.check_zero_consumption_cycles()?;
        Ok(set)
    }

    pub fn templates(&self) -> &[RuleTemplate] {
        &self.templates
    }

    /// All alternatives named `name`, in file order.
    pub fn rules_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a RuleTemplate> + 'a {
        self.templates.iter().filter(move |t| t.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn classes(&self) -> &VowelClassTable {
        &self.classes
    }

    /// Whether some alternative of `name` has a head compatible with `features`.
    pub fn accepts(&self, name: &str, features: &[FeatureArg]) -> bool {
        let Some(&id) = self.names.get(name) else {
            return false;
        };
        let (query, state) = self.query_frame(features);
        self.alternatives[id].iter().any(|rule| {
            let mut st = state.clone();
            let base = st.vars.len();
            st.vars.resize(base + rule.nvars, Slot::Free);
            rule.head.len() == query.len()
                && query
                    .iter()
                    .zip(&rule.head)
                    .all(|(&q, &h)| st.unify(q, 0, h, base))
        })
    }

    fn check_zero_consumption_cycles(&self) -> Result<(), RuleError> {
        // nodes are individual alternatives; a call links only to callee
        // alternatives whose head constants are compatible with its arguments
        let nodes: Vec<(usize, usize)> = self
            .alternatives
            .iter()
            .enumerate()
            .flat_map(|(id, alts)| (0..alts.len()).map(move |a| (id, a)))
            .collect();
        if nodes.is_empty() {
            return Ok(());
        }
        let index_of = |id: usize, alt: usize| nodes.iter().position(|&n| n == (id, alt)).unwrap();
        let rule = |n: usize| &self.alternatives[nodes[n].0][nodes[n].1];
        let callees = |args: &[Term], target: usize| -> Vec<usize> {
            self.alternatives[target]
                .iter()
                .enumerate()
                .filter(|(_, r)| {
                    r.head.len() == args.len()
                        && args.iter().zip(&r.head).all(|pair| match pair {
                            (Term::Const(a), Term::Const(b)) => a == b,
                            _ => true,
                        })
                })
                .map(|(a, _)| index_of(target, a))
                .collect()
        };
        let mut nullable = vec![false; nodes.len()];
        loop {
            let mut changed = false;
            for n in 0..nodes.len() {
                if nullable[n] {
                    continue;
                }
                let all = rule(n).body.iter().all(|it| match it {
                    CItem::Bind(..) => true,
                    CItem::Call { target, args } => {
                        callees(args, *target).iter().any(|&c| nullable[c])
                    }
                    _ => false,
                });
                if all {
                    nullable[n] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let edges: Vec<Vec<usize>> = (0..nodes.len())
            .map(|n| {
                let mut out = Vec::new();
                for it in &rule(n).body {
                    let passes = match it {
                        CItem::Bind(..) => true,
                        CItem::Call { target, args } => {
                            let cs = callees(args, *target);
                            let any_nullable = cs.iter().any(|&c| nullable[c]);
                            out.extend(cs);
                            any_nullable
                        }
                        _ => false,
                    };
                    if !passes {
                        break;
                    }
                }
                out
            })
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; nodes.len()];
        fn visit(v: usize, edges: &[Vec<usize>], mark: &mut [u8]) -> Option<usize> {
            mark[v] = 1;
            for &w in &edges[v] {
                if mark[w] == 1 {
                    return Some(w);
                }
                if mark[w] == 0 {
                    if let Some(c) = visit(w, edges, mark) {
                        return Some(c);
                    }
                }
            }
            mark[v] = 2;
            None
        }
        for v in 0..nodes.len() {
            if mark[v] == 0 {
                if let Some(c) = visit(v, &edges, &mut mark) {
                    let name = self
                        .names
                        .iter()
                        .find(|(_, &id)| id == nodes[c].0)
                        .map(|(n, _)| n.as_str())
                        .unwrap_or("?");
                    return Err(invalid(name, "left-recursive call cycle consumes no input"));
                }
            }
        }
        Ok(())
    }

    /// Maps a top-level argument list into a fresh state whose first slots are
    /// the query's variables.
    fn query_frame(&self, features: &[FeatureArg]) -> (Vec<Term>, State) {
        let mut vars: Vec<&str> = Vec::new();
        let mut extra = self.symbols.len();
        let terms = features
            .iter()
            .map(|f| match f {
                FeatureArg::Const(c) => Term::Const(match self.symbols.iter().position(|s| s == c) {
                    Some(i) => i as u16,
                    None => {
                        // unknown constant: unifies only with variables
                        extra += 1;
                        (extra - 1) as u16
                    }
                }),
                FeatureArg::Var(v) => Term::Var(match vars.iter().position(|x| x == v) {
                    Some(i) => i as u16,
                    None => {
                        vars.push(v);
                        (vars.len() - 1) as u16
                    }
                }),
            })
            .collect();
        let state = State {
            radicals: [None; 3],
            vars: vec![Slot::Free; vars.len()],
        };
        (terms, state)
    }

    fn call_alternatives(
        &self,
        target: usize,
        args: &[Term],
        base: usize,
        state: &State,
        mut each: impl FnMut(&CRule, State, usize),
    ) {
        for rule in &self.alternatives[target] {
            if rule.head.len() != args.len() {
                continue;
            }
            let mut st = state.clone();
            let nb = st.vars.len();
            st.vars.resize(nb + rule.nvars, Slot::Free);
            if args
                .iter()
                .zip(&rule.head)
                .all(|(&a, &h)| st.unify(a, base, h, nb))
            {
                each(rule, st, nb);
            }
        }
    }

    fn recognize_items(
        &self,
        items: &[CItem],
        base: usize,
        mut st: State,
        pos: usize,
        input: &[Segment],
        k: &mut dyn FnMut(State, usize),
    ) {
        let Some((item, rest)) = items.split_first() else {
            return k(st, pos);
        };
        match item {
            CItem::Lit(segs) => {
                if input[pos..].starts_with(segs) {
                    self.recognize_items(rest, base, st, pos + segs.len(), input, k);
                }
            }
            CItem::Rad(i) => {
                if let Some(&Segment::Consonant(c)) = input.get(pos) {
                    if st.bind_radical(*i, c) {
                        self.recognize_items(rest, base, st, pos + 1, input, k);
                    }
                }
            }
            CItem::Class(ci) => {
                if let Some(seg) = input.get(pos) {
                    if self.class_members[*ci].contains(seg) {
                        self.recognize_items(rest, base, st, pos + 1, input, k);
                    }
                }
            }
            CItem::Bind(i, c) => {
                if st.bind_radical(*i, *c) {
                    self.recognize_items(rest, base, st, pos, input, k);
                }
            }
            CItem::Call { target, args } => {
                self.call_alternatives(*target, args, base, &st, |rule, st2, nb| {
                    self.recognize_items(&rule.body, nb, st2, pos, input, &mut |s, p| {
                        self.recognize_items(rest, base, s, p, input, &mut *k)
                    });
                });
            }
        }
    }

    fn realize_items(
        &self,
        items: &[CItem],
        base: usize,
        mut st: State,
        out: &mut Vec<Segment>,
        k: &mut dyn FnMut(&State, &[Segment]),
    ) {
        let Some((item, rest)) = items.split_first() else {
            return k(&st, out);
        };
        match item {
            CItem::Lit(segs) => {
                let mark = out.len();
                out.extend_from_slice(segs);
                self.realize_items(rest, base, st, out, k);
                out.truncate(mark);
            }
            CItem::Rad(i) => {
                // the weak marker never surfaces
                if let Some(c) = st.radicals[*i].filter(|&c| c != Consonant::Weak) {
                    out.push(Segment::Consonant(c));
                    self.realize_items(rest, base, st, out, k);
                    out.pop();
                }
            }
            CItem::Class(ci) => {
                for &seg in &self.class_members[*ci] {
                    out.push(seg);
                    self.realize_items(rest, base, st.clone(), out, k);
                    out.pop();
                }
            }
            CItem::Bind(i, c) => {
                if st.bind_radical(*i, *c) {
                    self.realize_items(rest, base, st, out, k);
                }
            }
            CItem::Call { target, args } => {
                self.call_alternatives(*target, args, base, &st, |rule, st2, nb| {
                    self.realize_items(&rule.body, nb, st2, out, &mut |s, o| {
                        let mut tail = o.to_vec();
                        self.realize_items(rest, base, s.clone(), &mut tail, &mut *k);
                    });
                });
            }
        }
    }

    /// Every distinct (bindings, remainder) such that some expansion of
    /// `entry` consumes a prefix of `form`, leaving `remainder`.
    ///
    /// Results are sorted by remainder, then bindings.
    pub fn recognize(
        &self,
        entry: &Entry,
        form: &SegmentedForm,
    ) -> Result<Vec<(Bindings, SegmentedForm)>, RuleError> {
        self.recognize_with(entry, Bindings::default(), form)
    }

    /// Like [`RuleSet::recognize`], starting from already bound radicals.
    pub fn recognize_with(
        &self,
        entry: &Entry,
        seed: Bindings,
        form: &SegmentedForm,
    ) -> Result<Vec<(Bindings, SegmentedForm)>, RuleError> {
        let target = *self
            .names
            .get(&entry.name)
            .ok_or_else(|| RuleError::UnknownEntry(entry.name.clone()))?;
        let (args, mut state) = self.query_frame(&entry.features);
        state.radicals = seed.radicals;
        let input = form.segments();
        let mut found: BTreeSet<(SegmentedForm, Bindings)> = BTreeSet::new();
        let call = [CItem::Call { target, args }];
        self.recognize_items(&call, 0, state, 0, input, &mut |st, pos| {
            let mut features = seed.features.clone();
            for (i, arg) in entry.features.iter().enumerate() {
                if let (FeatureArg::Var(name), Term::Var(v)) = (arg, call_arg(&call, i)) {
                    if let Ok(c) = st.deref(v as u32) {
                        features.insert(name.clone(), self.symbol(c).to_string());
                    }
                }
            }
            let bindings = Bindings {
                radicals: st.radicals,
                features,
            };
            found.insert((SegmentedForm(input[pos..].to_vec()), bindings));
        });
        Ok(found.into_iter().map(|(rem, b)| (b, rem)).collect())
    }

    /// Every surface form `entry` produces under `bindings`, sorted by ASCII
    /// rendering and deduplicated.
    pub fn realize(
        &self,
        entry: &Entry,
        bindings: &Bindings,
    ) -> Result<Vec<SegmentedForm>, RuleError> {
        let target = *self
            .names
            .get(&entry.name)
            .ok_or_else(|| RuleError::UnknownEntry(entry.name.clone()))?;
        if let Some(i) = bindings.radicals.iter().position(Option::is_none) {
            return Err(RuleError::UnboundRadical(i as u8 + 1));
        }
        if entry.features.iter().any(|f| matches!(f, FeatureArg::Var(_))) {
            return Err(RuleError::NonConstantFeature(entry.name.clone()));
        }
        let (args, mut state) = self.query_frame(&entry.features);
        state.radicals = bindings.radicals;
        let mut found: BTreeMap<String, SegmentedForm> = BTreeMap::new();
        let mut out = Vec::new();
        self.realize_items(
            &[CItem::Call { target, args }],
            0,
            state,
            &mut out,
            &mut |_, segs| {
                let form = SegmentedForm(segs.to_vec());
                found.entry(form.to_ascii()).or_insert(form);
            },
        );
        Ok(found.into_values().collect())
    }

    fn symbol(&self, id: u16) -> &str {
        self.symbols.get(id as usize).map(String::as_str).unwrap_or("?")
    }
}

fn call_arg(call: &[CItem; 1], i: usize) -> Term {
    match &call[0] {
        CItem::Call { args, .. } => args[i],
        _ => unreachable!(),
    }
}

fn radical_slot(rule: &str, index: u8) -> Result<usize, RuleError> {
    match index {
        1..=3 => Ok(index as usize - 1),
        _ => Err(invalid(rule, format!("radical index {index} outside 1..=3"))),
    }
}

// Head variables must be passed on to exactly one body call.
fn check_head_variables(t: &RuleTemplate) -> Result<(), RuleError> {
    for arg in &t.features {
        let FeatureArg::Var(v) = arg else { continue };
        let uses = t
            .body
            .iter()
            .filter(|item| match item {
                RuleItem::Call { features, .. } => features.iter().any(|f| f == arg),
                _ => false,
            })
            .count();
        if uses != 1 {
            return Err(invalid(
                &t.name,
                format!("head variable `{v}` appears in {uses} body calls (expected 1)"),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segform::decode;
    use Consonant::*;

    const MINI: &str = r#"
version = 1
rules = [
  { name = "pret", features = ["3", "c", "s"], body = ["literal:i", "radical:1", "radical:2", "class:vs", "radical:3"] },
  { name = "pret", features = ["3", "m", "p"], body = ["call:pret(3,c,s)", "literal:uu"] },
  { name = "dur", features = ["3", "c", "s"], body = ["literal:i", "radical:1", "literal:a", "radical:2", "radical:2", "class:vs", "radical:3"] },
  { name = "vet", features = ["P", "G", "N"], body = ["literal:ee", "call:pret(P,G,N)"] },
  { name = "weak", features = ["3", "c", "s"], body = ["bind:3=&", "literal:i", "radical:1", "radical:2", "class:vs"] },
]
"#;

    fn cs() -> Vec<FeatureArg> {
        ["3", "c", "s"].map(FeatureArg::constant).to_vec()
    }

    fn ascii(forms: &[SegmentedForm]) -> Vec<String> {
        forms.iter().map(|f| f.to_ascii()).collect()
    }

    #[test]
    fn empty_document_is_empty_ruleset() {
        let set = load_rules("").unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn missing_call_target_names_rule() {
        let doc = r#"rules = [ { name = "lonely", features = [], body = ["call:nowhere()"] } ]"#;
        match load_rules(doc) {
            Err(RuleError::Invalid { rule, reason }) => {
                assert_eq!(rule, "lonely");
                assert!(reason.contains("nowhere"));
            }
            other => panic!("expected load error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_class_is_rejected() {
        let doc = r#"rules = [ { name = "r", features = [], body = ["class:nope"] } ]"#;
        assert!(matches!(load_rules(doc), Err(RuleError::Invalid { .. })));
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(load_rules("rules = 3"), Err(RuleError::Syntax(_))));
        assert!(matches!(load_rules("version = 7"), Err(RuleError::Version(7))));
        let bad_item = r#"rules = [ { name = "r", body = ["radical:4"] } ]"#;
        assert!(matches!(load_rules(bad_item), Err(RuleError::Invalid { .. })));
        let dangling = r#"rules = [ { name = "r", features = ["P"], body = ["literal:a"] } ]"#;
        assert!(matches!(load_rules(dangling), Err(RuleError::Invalid { .. })));
    }

    #[test]
    fn rejects_left_recursion() {
        let doc = r#"rules = [
  { name = "a", body = ["call:b()", "literal:a"] },
  { name = "b", body = ["bind:1=p", "call:a()"] },
]"#;
        match load_rules(doc) {
            Err(RuleError::Invalid { reason, .. }) => assert!(reason.contains("cycle")),
            other => panic!("expected cycle error, got {other:?}"),
        }
        // recursion guarded by a consuming item is fine
        let ok = r#"rules = [
  { name = "a", body = ["literal:a"] },
  { name = "a", body = ["literal:a", "call:a()"] },
]"#;
        assert!(load_rules(ok).is_ok());
    }

    #[test]
    fn realize_enumerates_class_members() {
        let set = load_rules(MINI).unwrap();
        let forms = set
            .realize(&Entry::new("pret", cs()), &Bindings::with_radicals([P, R, S]))
            .unwrap();
        assert_eq!(ascii(&forms), ["ipras", "ipres", "ipris", "iprus"]);
    }

    #[test]
    fn realize_through_calls() {
        let set = load_rules(MINI).unwrap();
        let mp = ["3", "m", "p"].map(FeatureArg::constant).to_vec();
        let forms = set
            .realize(&Entry::new("vet", mp), &Bindings::with_radicals([P, R, S]))
            .unwrap();
        assert_eq!(forms.len(), 4);
        assert!(ascii(&forms).contains(&"eeiprusuu".to_string()));
    }

    #[test]
    fn realize_single_literal() {
        let set = load_rules(r#"rules = [ { name = "lit", body = ["literal:ana"] } ]"#).unwrap();
        let forms = set
            .realize(&Entry::new("lit", vec![]), &Bindings::with_radicals([B, B, B]))
            .unwrap();
        assert_eq!(ascii(&forms), ["ana"]);
    }

    #[test]
    fn realize_errors() {
        let set = load_rules(MINI).unwrap();
        assert_eq!(
            set.realize(&Entry::new("nope", cs()), &Bindings::with_radicals([P, R, S])),
            Err(RuleError::UnknownEntry("nope".into()))
        );
        let partial = Bindings {
            radicals: [Some(P), None, Some(S)],
            ..Default::default()
        };
        assert_eq!(
            set.realize(&Entry::new("pret", cs()), &partial),
            Err(RuleError::UnboundRadical(2))
        );
    }

    #[test]
    fn recognize_binds_radicals_and_features() {
        let set = load_rules(MINI).unwrap();
        let vars = ["P", "G", "N"].map(FeatureArg::var).to_vec();
        let got = set
            .recognize(&Entry::new("vet", vars), &decode("eeiprusuu").unwrap())
            .unwrap();
        let full: Vec<_> = got.iter().filter(|(_, rem)| rem.is_empty()).collect();
        assert_eq!(full.len(), 1);
        let (b, _) = full[0];
        assert_eq!(b.root(), Some([P, R, S]));
        assert_eq!(b.features["P"], "3");
        assert_eq!(b.features["G"], "m");
        assert_eq!(b.features["N"], "p");
        // the 3cs reading consumes a prefix and leaves the plural ending
        assert!(got
            .iter()
            .any(|(b, rem)| rem.to_ascii() == "uu" && b.features["N"] == "s"));
    }

    #[test]
    fn recognize_returns_remainder() {
        let set = load_rules(MINI).unwrap();
        let got = set
            .recognize(&Entry::new("pret", cs()), &decode("iprusma").unwrap())
            .unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0.root(), Some([P, R, S]));
        assert_eq!(got[0].1.to_ascii(), "ma");
    }

    #[test]
    fn gemination_requires_identical_radicals() {
        let set = load_rules(MINI).unwrap();
        let ok = set.recognize(&Entry::new("dur", cs()), &decode("iparras").unwrap()).unwrap();
        assert_eq!(ok.len(), 1);
        let bad = set.recognize(&Entry::new("dur", cs()), &decode("iparkas").unwrap()).unwrap();
        assert!(bad.is_empty());
    }

    #[test]
    fn bind_fixes_silent_radical() {
        let set = load_rules(MINI).unwrap();
        let got = set.recognize(&Entry::new("weak", cs()), &decode("iqbi").unwrap()).unwrap();
        assert_eq!(got[0].0.root(), Some([Q, B, Weak]));
        let forms = set
            .realize(&Entry::new("weak", cs()), &Bindings::with_radicals([Q, B, Weak]))
            .unwrap();
        assert_eq!(forms.len(), 4);
        // a root whose third radical is not & has no realization here
        let none = set
            .realize(&Entry::new("weak", cs()), &Bindings::with_radicals([Q, B, S]))
            .unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn recognize_empty_input_and_unknown_entry() {
        let set = load_rules(MINI).unwrap();
        let got = set.recognize(&Entry::new("pret", cs()), &SegmentedForm::default()).unwrap();
        assert!(got.is_empty());
        assert!(matches!(
            set.recognize(&Entry::new("x", cs()), &decode("a").unwrap()),
            Err(RuleError::UnknownEntry(_))
        ));
    }

    #[test]
    fn accepts_checks_heads() {
        let set = load_rules(MINI).unwrap();
        assert!(set.accepts("pret", &cs()));
        assert!(!set.accepts("pret", &["2", "m", "s"].map(FeatureArg::constant)));
        assert!(set.accepts("vet", &["2", "m", "s"].map(FeatureArg::constant)));
        assert!(!set.accepts("missing", &cs()));
    }

    #[test]
    fn cardinality_is_product_of_class_sizes() {
        let doc = r#"rules = [ { name = "two", body = ["radical:1", "class:vs", "radical:2", "class:ae", "radical:3"] } ]"#;
        let set = load_rules(doc).unwrap();
        let forms = set
            .realize(&Entry::new("two", vec![]), &Bindings::with_radicals([P, R, S]))
            .unwrap();
        assert_eq!(forms.len(), 4 * 2);
    }

    #[test]
    fn file_classes_extend_builtins() {
        let doc = r#"
rules = [ { name = "r", body = ["radical:1", "class:ae_l", "radical:3"] } ]
[classes]
ae_l = ["aa", "ee"]
"#;
        let set = load_rules(doc).unwrap();
        let forms = set
            .realize(&Entry::new("r", vec![]), &Bindings::with_radicals([S, Aleph, L]))
            .unwrap();
        assert_eq!(ascii(&forms), ["saal", "seel"]);
    }
}
