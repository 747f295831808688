use super::lexicon::{Lex, Lexicon, VerbForm};
use super::{PosTag, PosToken};
use crate::indicators::tokenize_with_offsets;

fn nominal(lex: Option<Lex>) -> bool {
    matches!(
        lex,
        Some(
            Lex::Fixed(PosTag::Noun | PosTag::Adj)
                | Lex::Verb(VerbForm::Base | VerbForm::ThirdSingular)
                | Lex::UnknownIng
        )
    )
}

fn participle_like(lex: &Lexicon, word: Option<&str>, class: Option<Lex>) -> bool {
    match (word, class) {
        (Some("been" | "got"), _) => true,
        (
            _,
            Some(Lex::Verb(VerbForm::Participle | VerbForm::PastOrParticiple) | Lex::UnknownEd),
        ) => true,
        (Some(w), Some(Lex::Verb(VerbForm::Base))) => lex.is_participle(w) && w != "have",
        _ => false,
    }
}

/// Tags lowercased words with the bundled lexicon and context rules.
pub fn tag_words(words: &[String]) -> Vec<PosTag> {
    let lex = Lexicon::get();
    let classes: Vec<Lex> = words.iter().map(|w| lex.lookup(w)).collect();
    let mut tags: Vec<PosTag> = Vec::with_capacity(words.len());
    for i in 0..words.len() {
        let prev = tags.last().copied();
        let next = classes.get(i + 1).copied();
        let next_word = words.get(i + 1).map(String::as_str);
        let tag = match classes[i] {
            Lex::Fixed(t) => t,
            Lex::DetPron => {
                if nominal(next) {
                    PosTag::Det
                } else {
                    PosTag::Pron
                }
            }
            Lex::DetOther => {
                if nominal(next) {
                    PosTag::Det
                } else {
                    PosTag::Other
                }
            }
            Lex::Have => {
                let after_adv = next == Some(Lex::Fixed(PosTag::Adv))
                    && participle_like(
                        lex,
                        words.get(i + 2).map(String::as_str),
                        classes.get(i + 2).copied(),
                    );
                if participle_like(lex, next_word, next) || after_adv {
                    PosTag::Aux
                } else {
                    PosTag::Verb
                }
            }
            Lex::Do => match (prev, next) {
                (Some(PosTag::To | PosTag::Modal | PosTag::Aux), _) => PosTag::Verb,
                (
                    _,
                    None
                    | Some(Lex::Fixed(
                        PosTag::Punct | PosTag::Prep | PosTag::Det | PosTag::To | PosTag::Other,
                    )),
                ) => PosTag::Verb,
                _ => PosTag::Aux,
            },
            Lex::Like => match prev {
                Some(PosTag::Modal | PosTag::To | PosTag::Pron | PosTag::Aux) => PosTag::Verb,
                _ => PosTag::Prep,
            },
            Lex::Verb(VerbForm::Base | VerbForm::ThirdSingular) => match prev {
                Some(PosTag::Det | PosTag::Adj | PosTag::Prep) => PosTag::Noun,
                Some(
                    PosTag::To
                    | PosTag::Modal
                    | PosTag::Aux
                    | PosTag::Pron
                    | PosTag::Noun
                    | PosTag::Adv,
                ) => PosTag::Verb,
                _ if classes[i] == Lex::Verb(VerbForm::Base) => PosTag::Verb,
                _ => PosTag::Noun,
            },
            Lex::Verb(VerbForm::Ing) | Lex::UnknownIng => match prev {
                Some(PosTag::Det) if nominal(next) => PosTag::Adj,
                Some(PosTag::Det | PosTag::Adj) => PosTag::Noun,
                _ => PosTag::Verb,
            },
            Lex::Verb(_) | Lex::UnknownEd => match prev {
                Some(PosTag::Det) => PosTag::Adj,
                Some(PosTag::Adj) => PosTag::Noun,
                _ => PosTag::Verb,
            },
        };
        tags.push(tag);
    }
    tags
}

/// Tokenizes with the canonical tokenizer and tags every token.
pub fn pos_tag(text: &str) -> Vec<PosToken> {
    let toks = tokenize_with_offsets(text);
    let words: Vec<String> = toks.iter().map(|t| t.text.clone()).collect();
    let tags = tag_words(&words);
    toks.into_iter()
        .zip(tags)
        .map(|(t, tag)| PosToken {
            surface: t.surface,
            lower: t.text,
            tag,
        })
        .collect()
}

pub(crate) fn is_sentence_end(lower: &str) -> bool {
    matches!(lower, "." | "!" | "?")
}

/// Splits text into tagged sentences at `.`, `!` or `?` followed by
/// whitespace or the end of the text. Tagging runs per sentence.
pub fn tag_sentences(text: &str) -> Vec<Vec<PosToken>> {
    let toks = tokenize_with_offsets(text);
    let chars: Vec<char> = text.chars().collect();
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut begin = 0;
    for (i, t) in toks.iter().enumerate() {
        let boundary =
            is_sentence_end(&t.text) && chars.get(t.end).is_none_or(|c| c.is_whitespace());
        if boundary {
            spans.push((begin, i + 1));
            begin = i + 1;
        }
    }
    if begin < toks.len() {
        spans.push((begin, toks.len()));
    }
    spans
        .into_iter()
        .map(|(s, e)| {
            let slice = &toks[s..e];
            let words: Vec<String> = slice.iter().map(|t| t.text.clone()).collect();
            slice
                .iter()
                .zip(tag_words(&words))
                .map(|(t, tag)| PosToken {
                    surface: t.surface.clone(),
                    lower: t.text.clone(),
                    tag,
                })
                .collect()
        })
        .collect()
}

/// Splits an already tagged token stream after every `.`, `!` or `?`.
pub fn split_tagged(tokens: &[PosToken]) -> Vec<Vec<PosToken>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for t in tokens {
        cur.push(t.clone());
        if t.tag == PosTag::Punct && is_sentence_end(&t.lower) {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}
