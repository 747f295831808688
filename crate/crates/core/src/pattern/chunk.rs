use serde::{Deserialize, Serialize};

use super::lexicon::{is_be_form, Lexicon};
use super::{PosTag, PosToken};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    Subj,
    ActiveVerb,
    PassiveVerb,
    Aux,
    Infinitive,
    Dobj,
    Np,
    Prep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleSpan {
    pub role: Role,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerbKind {
    Active,
    Passive,
    Infinitive,
    /// Auxiliary with no main verb, followed by a noun phrase.
    Aux,
    /// Auxiliary with no main verb and no noun phrase after it.
    Copula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChunkKind {
    Np,
    Verb(VerbKind),
    Prep,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub kind: ChunkKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChunkedSentence {
    pub tokens: Vec<PosToken>,
    pub chunks: Vec<Chunk>,
    pub roles: Vec<RoleSpan>,
}

fn verbal(t: PosTag) -> bool {
    matches!(t, PosTag::Aux | PosTag::Modal | PosTag::Verb)
}

/// End of a run of verbal tokens starting at `i`; adverbs are absorbed only
/// when a verbal token follows them.
fn verb_run(tags: &[PosTag], mut i: usize) -> usize {
    let mut end = i;
    while i < tags.len() {
        if verbal(tags[i]) {
            i += 1;
            end = i;
        } else if tags[i] == PosTag::Adv {
            i += 1;
        } else {
            break;
        }
    }
    end
}

fn starts_verb_group(tags: &[PosTag], i: usize) -> bool {
    verb_run(tags, i) > i
}

fn noun_phrase_end(tags: &[PosTag], i: usize) -> Option<usize> {
    if tags[i] == PosTag::Pron {
        return Some(i + 1);
    }
    let mut k = i;
    while k < tags.len() {
        match tags[k] {
            PosTag::Det | PosTag::Adj => k += 1,
            PosTag::Adv if k > i && tags.get(k + 1) == Some(&PosTag::Adj) => k += 1,
            _ => break,
        }
    }
    let mut m = k;
    while m < tags.len() && tags[m] == PosTag::Noun {
        m += 1;
    }
    (m > k).then_some(m)
}

fn verb_kind(tokens: &[PosToken], start: usize, end: usize) -> VerbKind {
    let lex = Lexicon::get();
    let main = (start..end).rev().find(|&i| tokens[i].tag == PosTag::Verb);
    match main {
        None => VerbKind::Copula,
        Some(m) => {
            let be_before =
                (start..m).any(|i| tokens[i].tag == PosTag::Aux && is_be_form(&tokens[i].lower));
            if be_before && lex.is_participle(&tokens[m].lower) {
                VerbKind::Passive
            } else {
                VerbKind::Active
            }
        }
    }
}

/// First verbal token is an auxiliary, a modal, or a verb not in `-ing`.
fn is_finite(tokens: &[PosToken], chunk: &Chunk) -> bool {
    tokens[chunk.start..chunk.end]
        .iter()
        .find(|t| verbal(t.tag))
        .is_some_and(|t| t.tag != PosTag::Verb || !t.lower.ends_with("ing"))
}

/// Groups tokens into noun phrases, verb groups and prepositions, then
/// assigns grammatical roles.
pub fn chunk(tokens: &[PosToken]) -> ChunkedSentence {
    let tags: Vec<PosTag> = tokens.iter().map(|t| t.tag).collect();
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let (kind, end) = match tags[i] {
            PosTag::To => {
                let end = verb_run(&tags, i + 1);
                if end > i + 1 {
                    (ChunkKind::Verb(VerbKind::Infinitive), end)
                } else {
                    (ChunkKind::Prep, i + 1)
                }
            }
            PosTag::Prep => (ChunkKind::Prep, i + 1),
            t if verbal(t) || (t == PosTag::Adv && starts_verb_group(&tags, i)) => {
                let end = verb_run(&tags, i);
                (ChunkKind::Verb(verb_kind(tokens, i, end)), end)
            }
            PosTag::Det | PosTag::Adj | PosTag::Noun | PosTag::Pron => {
                match noun_phrase_end(&tags, i) {
                    Some(end) => (ChunkKind::Np, end),
                    None => (ChunkKind::Other, i + 1),
                }
            }
            _ => (ChunkKind::Other, i + 1),
        };
        chunks.push(Chunk {
            kind,
            start: i,
            end,
        });
        i = end;
    }

    for c in 0..chunks.len() {
        if chunks[c].kind == ChunkKind::Verb(VerbKind::Copula)
            && chunks.get(c + 1).is_some_and(|n| n.kind == ChunkKind::Np)
        {
            chunks[c].kind = ChunkKind::Verb(VerbKind::Aux);
        }
    }

    let mut roles = Vec::new();
    for (c, ch) in chunks.iter().enumerate() {
        let span = |role| RoleSpan {
            role,
            start: ch.start,
            end: ch.end,
        };
        match ch.kind {
            ChunkKind::Np => {
                roles.push(span(Role::Np));
                let next = chunks.get(c + 1);
                if next.is_some_and(|n| {
                    matches!(n.kind, ChunkKind::Verb(k) if k != VerbKind::Infinitive)
                        && is_finite(tokens, n)
                }) {
                    roles.push(span(Role::Subj));
                }
                let prev = c.checked_sub(1).map(|p| chunks[p].kind);
                if matches!(
                    prev,
                    Some(ChunkKind::Verb(
                        VerbKind::Active | VerbKind::Infinitive | VerbKind::Aux
                    ))
                ) {
                    roles.push(span(Role::Dobj));
                }
            }
            ChunkKind::Verb(VerbKind::Active) => roles.push(span(Role::ActiveVerb)),
            ChunkKind::Verb(VerbKind::Passive) => roles.push(span(Role::PassiveVerb)),
            ChunkKind::Verb(VerbKind::Infinitive) => roles.push(span(Role::Infinitive)),
            ChunkKind::Verb(VerbKind::Aux) => roles.push(span(Role::Aux)),
            ChunkKind::Prep => roles.push(span(Role::Prep)),
            ChunkKind::Verb(VerbKind::Copula) | ChunkKind::Other => {}
        }
    }

    ChunkedSentence {
        tokens: tokens.to_vec(),
        chunks,
        roles,
    }
}

impl ChunkedSentence {
    pub fn has_role(&self, chunk: usize, role: Role) -> bool {
        let ch = &self.chunks[chunk];
        self.roles
            .iter()
            .any(|r| r.role == role && r.start == ch.start && r.end == ch.end)
    }

    pub fn role_text(&self, role: Role) -> Vec<String> {
        self.roles
            .iter()
            .filter(|r| r.role == role)
            .map(|r| {
                self.tokens[r.start..r.end]
                    .iter()
                    .map(|t| t.lower.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}
