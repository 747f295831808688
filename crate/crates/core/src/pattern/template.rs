use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::chunk::{ChunkKind, ChunkedSentence, Role, VerbKind};
use super::lexicon::is_be_form;
use super::PosTag;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PatternTemplate {
    SubjPassiveVerb,
    SubjActiveVerb,
    SubjActiveVerbDobj,
    SubjVerbInfinitive,
    SubjAuxNoun,
    ActiveVerbDobj,
    InfinitiveDobj,
    VerbInfinitiveDobj,
    NounAuxDobj,
    NounPrepNp,
    ActiveVerbPrepNp,
    PassiveVerbPrepNp,
    InfinitivePrepNp,
}

impl PatternTemplate {
    pub const ALL: [PatternTemplate; 13] = [
        PatternTemplate::SubjPassiveVerb,
        PatternTemplate::SubjActiveVerb,
        PatternTemplate::SubjActiveVerbDobj,
        PatternTemplate::SubjVerbInfinitive,
        PatternTemplate::SubjAuxNoun,
        PatternTemplate::ActiveVerbDobj,
        PatternTemplate::InfinitiveDobj,
        PatternTemplate::VerbInfinitiveDobj,
        PatternTemplate::NounAuxDobj,
        PatternTemplate::NounPrepNp,
        PatternTemplate::ActiveVerbPrepNp,
        PatternTemplate::PassiveVerbPrepNp,
        PatternTemplate::InfinitivePrepNp,
    ];

    pub fn id(self) -> &'static str {
        match self {
            PatternTemplate::SubjPassiveVerb => "SUBJ_PASSIVE_VERB",
            PatternTemplate::SubjActiveVerb => "SUBJ_ACTIVE_VERB",
            PatternTemplate::SubjActiveVerbDobj => "SUBJ_ACTIVE_VERB_DOBJ",
            PatternTemplate::SubjVerbInfinitive => "SUBJ_VERB_INFINITIVE",
            PatternTemplate::SubjAuxNoun => "SUBJ_AUX_NOUN",
            PatternTemplate::ActiveVerbDobj => "ACTIVE_VERB_DOBJ",
            PatternTemplate::InfinitiveDobj => "INFINITIVE_DOBJ",
            PatternTemplate::VerbInfinitiveDobj => "VERB_INFINITIVE_DOBJ",
            PatternTemplate::NounAuxDobj => "NOUN_AUX_DOBJ",
            PatternTemplate::NounPrepNp => "NOUN_PREP_NP",
            PatternTemplate::ActiveVerbPrepNp => "ACTIVE_VERB_PREP_NP",
            PatternTemplate::PassiveVerbPrepNp => "PASSIVE_VERB_PREP_NP",
            PatternTemplate::InfinitivePrepNp => "INFINITIVE_PREP_NP",
        }
    }

    /// Syntactic shape, e.g. `<subj> passive-verb`.
    pub fn shape(self) -> &'static str {
        match self {
            PatternTemplate::SubjPassiveVerb => "<subj> passive-verb",
            PatternTemplate::SubjActiveVerb => "<subj> active-verb",
            PatternTemplate::SubjActiveVerbDobj => "<subj> active-verb dobj",
            PatternTemplate::SubjVerbInfinitive => "<subj> verb infinitive",
            PatternTemplate::SubjAuxNoun => "<subj> aux noun",
            PatternTemplate::ActiveVerbDobj => "active-verb <dobj>",
            PatternTemplate::InfinitiveDobj => "infinitive <dobj>",
            PatternTemplate::VerbInfinitiveDobj => "verb infinitive <dobj>",
            PatternTemplate::NounAuxDobj => "noun aux <dobj>",
            PatternTemplate::NounPrepNp => "noun prep <np>",
            PatternTemplate::ActiveVerbPrepNp => "active-verb prep <np>",
            PatternTemplate::PassiveVerbPrepNp => "passive-verb prep <np>",
            PatternTemplate::InfinitivePrepNp => "infinitive prep <np>",
        }
    }

    /// Instance with its placeholder, e.g. `<subj> was explained`.
    pub fn render(self, fill: &str) -> String {
        let id = self.id();
        if id.starts_with("SUBJ_") {
            format!("<subj> {fill}")
        } else if id.ends_with("_DOBJ") {
            format!("{fill} <dobj>")
        } else {
            format!("{fill} <np>")
        }
    }
}

impl fmt::Display for PatternTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PatternTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternTemplate::ALL
            .into_iter()
            .find(|t| t.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown template {s:?}")))
    }
}

/// A template together with its lexical fill.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternKey {
    pub template: PatternTemplate,
    pub fill: String,
}

impl PatternKey {
    pub fn new(template: PatternTemplate, fill: impl Into<String>) -> Self {
        PatternKey {
            template,
            fill: fill.into(),
        }
    }
}

impl fmt::Display for PatternKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.template.render(&self.fill))
    }
}

struct Slots<'a> {
    s: &'a ChunkedSentence,
}

impl Slots<'_> {
    fn words(&self, c: usize, keep: impl Fn(PosTag, &str) -> bool) -> Vec<&str> {
        let ch = &self.s.chunks[c];
        self.s.tokens[ch.start..ch.end]
            .iter()
            .filter(|t| keep(t.tag, &t.lower))
            .map(|t| t.lower.as_str())
            .collect()
    }

    fn kind(&self, c: usize) -> Option<ChunkKind> {
        self.s.chunks.get(c).map(|ch| ch.kind)
    }

    fn is_verb(&self, c: usize, kind: VerbKind) -> bool {
        self.kind(c) == Some(ChunkKind::Verb(kind))
    }

    fn head_is_noun(&self, c: usize) -> bool {
        self.kind(c) == Some(ChunkKind::Np)
            && self.s.tokens[self.s.chunks[c].end - 1].tag == PosTag::Noun
    }

    fn active(&self, c: usize) -> String {
        self.words(c, |t, _| t == PosTag::Verb)
            .last()
            .copied()
            .unwrap_or_default()
            .to_string()
    }

    /// Last be-form and the participle, without adverbs.
    fn passive(&self, c: usize) -> String {
        let w = self.words(c, |t, _| matches!(t, PosTag::Aux | PosTag::Verb));
        let verb = w.last().copied().unwrap_or_default();
        match w.iter().rev().skip(1).find(|x| is_be_form(x)) {
            Some(be) => format!("{be} {verb}"),
            None => verb.to_string(),
        }
    }

    fn infinitive(&self, c: usize) -> String {
        self.words(c, |t, _| t != PosTag::Adv).join(" ")
    }

    fn aux(&self, c: usize) -> String {
        self.words(c, |t, _| matches!(t, PosTag::Aux | PosTag::Modal))
            .last()
            .copied()
            .unwrap_or_default()
            .to_string()
    }

    /// Noun phrase without determiners and adjectives.
    fn content(&self, c: usize) -> String {
        self.words(c, |t, _| {
            !matches!(t, PosTag::Det | PosTag::Adj | PosTag::Adv)
        })
        .join(" ")
    }

    fn head(&self, c: usize) -> String {
        self.words(c, |_, _| true)
            .last()
            .copied()
            .unwrap_or_default()
            .to_string()
    }

    fn prep(&self, c: usize) -> String {
        self.head(c)
    }
}

/// Every template instance in a chunked sentence.
pub fn instantiate_templates(chunked: &ChunkedSentence) -> BTreeSet<PatternKey> {
    use PatternTemplate as T;
    let s = Slots { s: chunked };
    let mut out = BTreeSet::new();
    let mut emit = |t: PatternTemplate, fill: String| {
        if !fill.trim().is_empty() {
            out.insert(PatternKey::new(t, fill));
        }
    };
    let np = |c: usize| s.kind(c) == Some(ChunkKind::Np);
    let prep = |c: usize| s.kind(c) == Some(ChunkKind::Prep);

    for c in 0..chunked.chunks.len() {
        if chunked.has_role(c, Role::Subj) {
            let v = c + 1;
            if s.is_verb(v, VerbKind::Passive) {
                emit(T::SubjPassiveVerb, s.passive(v));
            }
            if s.is_verb(v, VerbKind::Active) {
                emit(T::SubjActiveVerb, s.active(v));
                if np(v + 1) {
                    emit(
                        T::SubjActiveVerbDobj,
                        format!("{} {}", s.active(v), s.content(v + 1)),
                    );
                }
                if s.is_verb(v + 1, VerbKind::Infinitive) {
                    emit(
                        T::SubjVerbInfinitive,
                        format!("{} {}", s.active(v), s.infinitive(v + 1)),
                    );
                }
            }
            if s.is_verb(v, VerbKind::Aux) && s.head_is_noun(v + 1) {
                emit(T::SubjAuxNoun, format!("{} {}", s.aux(v), s.content(v + 1)));
            }
        }
        if s.is_verb(c, VerbKind::Active) {
            if np(c + 1) {
                emit(T::ActiveVerbDobj, s.active(c));
            }
            if s.is_verb(c + 1, VerbKind::Infinitive) && np(c + 2) {
                emit(
                    T::VerbInfinitiveDobj,
                    format!("{} {}", s.active(c), s.infinitive(c + 1)),
                );
            }
            if prep(c + 1) && np(c + 2) {
                emit(
                    T::ActiveVerbPrepNp,
                    format!("{} {}", s.active(c), s.prep(c + 1)),
                );
            }
        }
        if s.is_verb(c, VerbKind::Infinitive) {
            if np(c + 1) {
                emit(T::InfinitiveDobj, s.infinitive(c));
            }
            if prep(c + 1) && np(c + 2) {
                emit(
                    T::InfinitivePrepNp,
                    format!("{} {}", s.infinitive(c), s.prep(c + 1)),
                );
            }
        }
        if s.is_verb(c, VerbKind::Passive) && prep(c + 1) && np(c + 2) {
            emit(
                T::PassiveVerbPrepNp,
                format!("{} {}", s.passive(c), s.prep(c + 1)),
            );
        }
        if s.head_is_noun(c) {
            if s.is_verb(c + 1, VerbKind::Aux) && np(c + 2) {
                emit(T::NounAuxDobj, format!("{} {}", s.head(c), s.aux(c + 1)));
            }
            if prep(c + 1) && np(c + 2) {
                emit(T::NounPrepNp, format!("{} {}", s.head(c), s.prep(c + 1)));
            }
        }
    }
    out
}
