//! Shallow syntax and extraction patterns: a rule-and-lexicon tagger, a
//! finite-state chunker, the thirteen templates, and pattern learning and
//! classification.

mod chunk;
mod learn;
mod lexicon;
mod pos;
mod template;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use chunk::{chunk, Chunk, ChunkKind, ChunkedSentence, Role, RoleSpan, VerbKind};
pub use learn::{
    classify_patterns, learn_patterns, load_pretagged, pattern_is_class, pattern_statistics,
    patterns_from_json, patterns_to_json, read_pretagged, sweep_patterns, ExtractionPattern,
    PatternConfig, PatternExtractor, PatternGrid,
};
pub use pos::{pos_tag, split_tagged, tag_sentences, tag_words};
pub use template::{instantiate_templates, PatternKey, PatternTemplate};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Pron,
    Verb,
    Aux,
    Modal,
    Adj,
    Adv,
    Det,
    Prep,
    To,
    Punct,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::Pron,
        PosTag::Verb,
        PosTag::Aux,
        PosTag::Modal,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Det,
        PosTag::Prep,
        PosTag::To,
        PosTag::Punct,
        PosTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Pron => "PRON",
            PosTag::Verb => "VERB",
            PosTag::Aux => "AUX",
            PosTag::Modal => "MODAL",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Det => "DET",
            PosTag::Prep => "PREP",
            PosTag::To => "TO",
            PosTag::Punct => "PUNCT",
            PosTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown tag {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosToken {
    pub surface: String,
    pub lower: String,
    pub tag: PosTag,
}

impl PosToken {
    pub fn new(surface: impl Into<String>, tag: PosTag) -> Self {
        let surface = surface.into();
        PosToken {
            lower: surface.to_lowercase(),
            surface,
            tag,
        }
    }
}
