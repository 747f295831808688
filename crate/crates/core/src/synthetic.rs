//! Planted-cue corpus generator for end-to-end checks.
//!
//! CLASS utterances carry single-word cue interjections and pattern-bearing
//! frame sentences at controlled rates; COUNTER utterances carry them rarely,
//! and only the second half of the cue list.
//! Both classes share neutral filler sentences. Sarcasm annotations and
//! indicator spans are generated to match.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    AnnotationRecord, Corpus, IndicatorAnnotation, SplitName, SplitSpec, Task, Utterance,
};

pub const CUES: [&str; 8] = [
    "genius",
    "brilliant",
    "wow",
    "bravo",
    "shocking",
    "riveting",
    "congratulations",
    "fascinating",
];

/// COUNTER utterances draw cues only from `CUES[SHARED_FROM..]`.
const SHARED_FROM: usize = 4;

const CUE_SHAPES: [(&str, &str); 4] = [("", "."), ("Well, ", "."), ("Oh ", "!"), ("Just ", ".")];

const NOUNS: [&str; 8] = [
    "law",
    "policy",
    "report",
    "study",
    "proposal",
    "tax",
    "program",
    "amendment",
];

const NEUTRAL: [&str; 6] = [
    "The {} was discussed at the meeting.",
    "Nobody voted on the {} last week.",
    "I wrote about the {} yesterday.",
    "We need more data on the {}.",
    "The {} depends on the budget.",
    "Several states argued over the {}.",
];

const COUNTER_ONLY: [&str; 3] = [
    "I think you make a fair point about the {}.",
    "The evidence supports your reading of the {}.",
    "Thanks for the link to the {}.",
];

const FRAMES: [(&str, &[&str]); 5] = [
    (
        "It was explained to you {}.",
        &["already", "twice", "before", "repeatedly"],
    ),
    (
        "You are looking for {}.",
        &["an excuse", "an audience", "a fight", "attention"],
    ),
    (
        "You want to take the {} away.",
        &["credit", "money", "floor", "spotlight"],
    ),
    (
        "I have to do everything for {}.",
        &["you", "them", "everyone"],
    ),
    (
        "Clearly you were put in charge of {}.",
        &["logic", "science", "history"],
    ),
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub class_count: usize,
    pub counter_count: usize,
    /// Probabilities of carrying two and one cues.
    pub class_cues: (f64, f64),
    pub counter_cues: (f64, f64),
    /// Probabilities of carrying two and one frames.
    pub class_frames: (f64, f64),
    pub counter_frame: f64,
    pub sarcasm_annotators: usize,
    pub indicator_annotators: usize,
    /// Chance that an annotator selects a given cue occurrence.
    pub cue_selection: f64,
    /// Chance that an annotator also selects one non-cue word.
    pub noise_selection: f64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        PlantedSpec {
            class_count: 220,
            counter_count: 180,
            class_cues: (0.5, 0.25),
            counter_cues: (0.03, 0.15),
            class_frames: (0.35, 0.5),
            counter_frame: 0.02,
            sarcasm_annotators: 7,
            indicator_annotators: 10,
            cue_selection: 0.75,
            noise_selection: 0.05,
        }
    }
}

impl PlantedSpec {
    /// Split sizes that fit the default corpus.
    pub fn splits(&self) -> Vec<SplitSpec> {
        vec![
            SplitSpec::new(SplitName::MtExpDev, 40, None),
            SplitSpec::new(SplitName::HpTrain, 60, Some(60)),
            SplitSpec::new(SplitName::HpDevTest, 60, Some(60)),
            SplitSpec::new(SplitName::PeEval, 60, Some(60)),
        ]
    }
}

struct Sentence {
    text: String,
    /// Char offsets of a cue word within `text`.
    cue: Option<(usize, usize)>,
    /// Filler that annotators may select words from by mistake.
    filler: bool,
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().expect("non-empty list")
}

fn filled<R: Rng>(rng: &mut R, template: &str, slot: &[&str], filler: bool) -> Sentence {
    Sentence {
        text: template.replacen("{}", pick(rng, slot), 1),
        cue: None,
        filler,
    }
}

fn cue_sentence<R: Rng>(rng: &mut R, word: &str) -> Sentence {
    let &(pre, post) = CUE_SHAPES.choose(rng).expect("shapes");
    let shown = if pre.is_empty() {
        let mut c = word.chars();
        let first = c
            .next()
            .expect("cue word")
            .to_uppercase()
            .collect::<String>();
        first + c.as_str()
    } else {
        word.to_string()
    };
    let start = pre.chars().count();
    Sentence {
        cue: Some((start, start + shown.chars().count())),
        text: format!("{pre}{shown}{post}"),
        filler: false,
    }
}

fn count<R: Rng>(rng: &mut R, (two, one): (f64, f64)) -> usize {
    let x: f64 = rng.gen();
    if x < two {
        2
    } else if x < two + one {
        1
    } else {
        0
    }
}

fn frame_sentences<R: Rng>(rng: &mut R, n: usize) -> Vec<Sentence> {
    let mut frames: Vec<&(&str, &[&str])> = FRAMES.iter().collect();
    frames.shuffle(rng);
    frames
        .into_iter()
        .take(n)
        .map(|(t, slot)| filled(rng, t, slot, false))
        .collect()
}

fn cue_sentences<R: Rng>(rng: &mut R, pool: &[&str], n: usize) -> Vec<Sentence> {
    let words: Vec<&str> = pool.choose_multiple(rng, n).copied().collect();
    words.into_iter().map(|w| cue_sentence(rng, w)).collect()
}

/// Builds the planted-cue corpus. Identical seeds give identical corpora.
pub fn planted_corpus(spec: &PlantedSpec, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classes: Vec<bool> = std::iter::repeat_n(true, spec.class_count)
        .chain(std::iter::repeat_n(false, spec.counter_count))
        .collect();
    classes.shuffle(&mut rng);

    let width = (classes.len().max(1) as f64).log10().floor() as usize + 1;
    let mut corpus = Corpus::default();
    for (i, &is_class) in classes.iter().enumerate() {
        let id = format!("u{:0width$}", i + 1);
        let mut sentences: Vec<Sentence> = Vec::new();
        let neutral = if is_class {
            rng.gen_range(1..=2)
        } else {
            rng.gen_range(2..=3)
        };
        for _ in 0..neutral {
            let t = pick(&mut rng, &NEUTRAL);
            sentences.push(filled(&mut rng, t, &NOUNS, true));
        }
        let (cues, frames) = if is_class {
            (
                count(&mut rng, spec.class_cues),
                count(&mut rng, spec.class_frames),
            )
        } else {
            let extra = rng.gen_range(1..=2);
            for _ in 0..extra {
                let t = pick(&mut rng, &COUNTER_ONLY);
                sentences.push(filled(&mut rng, t, &NOUNS, true));
            }
            (
                count(&mut rng, spec.counter_cues),
                usize::from(rng.gen_bool(spec.counter_frame)),
            )
        };
        sentences.extend(frame_sentences(&mut rng, frames));
        let pool = if is_class {
            &CUES[..]
        } else {
            &CUES[SHARED_FROM..]
        };
        sentences.extend(cue_sentences(&mut rng, pool, cues));
        sentences.shuffle(&mut rng);

        let mut response = String::new();
        let mut cue_spans = Vec::new();
        let mut other_words = Vec::new();
        for s in &sentences {
            if !response.is_empty() {
                response.push(' ');
            }
            let base = response.chars().count();
            if let Some((a, b)) = s.cue {
                cue_spans.push((base + a, base + b));
            } else if s.filler {
                let mut at = base;
                for w in s.text.split(' ') {
                    let len = w.trim_end_matches(['.', '!', '?']).chars().count();
                    if len > 0 {
                        other_words.push((at, at + len));
                    }
                    at += w.chars().count() + 1;
                }
            }
            response.push_str(&s.text);
        }

        let ones = if is_class {
            rng.gen_range(spec.sarcasm_annotators.saturating_sub(2)..=spec.sarcasm_annotators)
        } else {
            rng.gen_range(0..=3.min(spec.sarcasm_annotators))
        };
        let mut votes: Vec<bool> = (0..spec.sarcasm_annotators).map(|k| k < ones).collect();
        votes.shuffle(&mut rng);
        for (k, v) in votes.into_iter().enumerate() {
            corpus.annotations.push(AnnotationRecord {
                utterance_id: id.clone(),
                annotator_id: format!("s{}", k + 1),
                task: Task::Sarcasm,
                value: if v { 1.0 } else { 0.0 },
            });
        }

        if is_class {
            corpus
                .indicator_annotators
                .insert(id.clone(), spec.indicator_annotators);
            for k in 0..spec.indicator_annotators {
                let annotator = format!("m{}", k + 1);
                let mut chosen: Vec<(usize, usize)> = cue_spans
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(spec.cue_selection))
                    .collect();
                if !other_words.is_empty() && rng.gen_bool(spec.noise_selection) {
                    chosen.push(*other_words.choose(&mut rng).expect("non-empty"));
                }
                chosen.sort_unstable();
                chosen.dedup();
                for (start, end) in chosen {
                    let phrase: String = response.chars().skip(start).take(end - start).collect();
                    corpus.spans.push(IndicatorAnnotation {
                        utterance_id: id.clone(),
                        annotator_id: annotator.clone(),
                        start,
                        end,
                        phrase,
                    });
                }
            }
        }
        corpus.utterances.push(Utterance::new(id, response));
    }
    corpus
}
