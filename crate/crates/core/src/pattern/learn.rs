use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chunk::chunk;
use super::pos::{split_tagged, tag_sentences};
use super::template::{instantiate_templates, PatternKey, PatternTemplate};
use super::{PosTag, PosToken};
use crate::corpus::{Label, LabeledUtterance, Utterance};
use crate::error::{Error, Result};
use crate::hp::{Classification, Evidence, EPS};
use crate::metrics::{Metrics, SweepParams, SweepResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionPattern {
    pub template: PatternTemplate,
    pub fill: String,
    pub freq: usize,
    pub pct_class: f64,
}

impl ExtractionPattern {
    pub fn key(&self) -> PatternKey {
        PatternKey::new(self.template, self.fill.clone())
    }

    pub fn passes(&self, config: &PatternConfig) -> bool {
        self.freq >= config.theta1 && self.pct_class + EPS >= config.theta2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternConfig {
    pub theta1: usize,
    pub theta2: f64,
}

impl PatternConfig {
    pub fn new(theta1: usize, theta2: f64) -> Self {
        PatternConfig { theta1, theta2 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta1 < 1 || !(0.0..=1.0).contains(&self.theta2) {
            return Err(Error::InvalidConfig(format!(
                "pattern thresholds need theta1 >= 1 and theta2 in [0, 1], got {} and {}",
                self.theta1, self.theta2
            )));
        }
        Ok(())
    }
}

impl SweepParams for PatternConfig {
    fn sort_key(&self) -> Vec<f64> {
        vec![self.theta1 as f64, self.theta2]
    }

    fn regime_label(&self) -> String {
        "pattern".into()
    }

    fn describe(&self) -> String {
        format!("theta1={},theta2={:.2}", self.theta1, self.theta2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternGrid {
    pub theta1: Vec<usize>,
    pub theta2: Vec<f64>,
}

impl PatternGrid {
    pub fn standard() -> Self {
        PatternGrid {
            theta1: vec![2, 4, 6, 8, 10],
            theta2: (55..=100).step_by(5).map(|v| v as f64 / 100.0).collect(),
        }
    }

    pub fn configs(&self) -> Vec<PatternConfig> {
        self.theta1
            .iter()
            .flat_map(|&t1| {
                self.theta2
                    .iter()
                    .map(move |&t2| PatternConfig::new(t1, t2))
            })
            .collect()
    }
}

impl Default for PatternGrid {
    fn default() -> Self {
        PatternGrid::standard()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaggedLine {
    id: String,
    tagged: Vec<(String, PosTag)>,
}

/// Reads `{"id": ..., "tagged": [[surface, TAG], ...]}` lines.
pub fn read_pretagged(reader: impl BufRead) -> Result<HashMap<String, Vec<PosToken>>> {
    let mut out = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TaggedLine = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        let tokens = parsed
            .tagged
            .into_iter()
            .map(|(surface, tag)| PosToken {
                lower: surface.to_lowercase(),
                surface,
                tag,
            })
            .collect();
        if out.insert(parsed.id.clone(), tokens).is_some() {
            return Err(Error::DuplicateId(parsed.id));
        }
    }
    Ok(out)
}

pub fn load_pretagged(path: impl AsRef<Path>) -> Result<HashMap<String, Vec<PosToken>>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_pretagged(std::io::BufReader::new(file))
}

/// Finds pattern instances in utterances, preferring supplied tags over the
/// bundled tagger.
#[derive(Clone, Debug, Default)]
pub struct PatternExtractor {
    pretagged: HashMap<String, Vec<PosToken>>,
}

impl PatternExtractor {
    pub fn new() -> Self {
        PatternExtractor::default()
    }

    pub fn with_pretagged(pretagged: HashMap<String, Vec<PosToken>>) -> Self {
        PatternExtractor { pretagged }
    }

    pub fn sentences(&self, utterance: &Utterance) -> Vec<Vec<PosToken>> {
        match self.pretagged.get(&utterance.id) {
            Some(tokens) => split_tagged(tokens),
            None => tag_sentences(&utterance.response),
        }
    }

    /// Pattern instances per sentence.
    pub fn extract_by_sentence(&self, utterance: &Utterance) -> Vec<BTreeSet<PatternKey>> {
        self.sentences(utterance)
            .iter()
            .map(|s| instantiate_templates(&chunk(s)))
            .collect()
    }

    pub fn extract(&self, utterance: &Utterance) -> BTreeSet<PatternKey> {
        self.extract_by_sentence(utterance)
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn extract_all<'a, I>(&self, utterances: I) -> Vec<BTreeSet<PatternKey>>
    where
        I: IntoParallelIterator<Item = &'a Utterance>,
        I::Iter: IndexedParallelIterator,
    {
        utterances
            .into_par_iter()
            .map(|u| self.extract(u))
            .collect()
    }
}

/// FREQ and %CLASS for every pattern occurring in `sets`; abstentions are
/// skipped. Sorted by template, then fill.
pub fn pattern_statistics(
    sets: &[BTreeSet<PatternKey>],
    labels: &[Label],
) -> Vec<ExtractionPattern> {
    let mut counts: BTreeMap<&PatternKey, (usize, usize)> = BTreeMap::new();
    for (set, label) in sets.iter().zip(labels) {
        if *label == Label::Abstain {
            continue;
        }
        for key in set {
            let e = counts.entry(key).or_default();
            e.0 += 1;
            e.1 += usize::from(label.is_class());
        }
    }
    counts
        .into_iter()
        .map(|(k, (freq, class))| ExtractionPattern {
            template: k.template,
            fill: k.fill.clone(),
            freq,
            pct_class: class as f64 / freq as f64,
        })
        .collect()
}

/// Learns class patterns from labeled (or predicted-labeled) utterances.
pub fn learn_patterns(
    extractor: &PatternExtractor,
    classified: &[(Utterance, Label)],
    config: &PatternConfig,
) -> Result<Vec<ExtractionPattern>> {
    if classified.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sets = extractor.extract_all(classified.par_iter().map(|(u, _)| u));
    let labels: Vec<Label> = classified.iter().map(|(_, l)| *l).collect();
    Ok(pattern_statistics(&sets, &labels)
        .into_iter()
        .filter(|p| p.passes(config))
        .collect())
}

pub fn pattern_is_class(matched: usize) -> bool {
    matched >= 2
}

/// CLASS when at least two distinct retained patterns occur.
pub fn classify_patterns(
    extractor: &PatternExtractor,
    utterance: &Utterance,
    patterns: &[ExtractionPattern],
    config: &PatternConfig,
) -> Classification {
    let retained: HashMap<PatternKey, &ExtractionPattern> = patterns
        .iter()
        .filter(|p| p.passes(config))
        .map(|p| (p.key(), p))
        .collect();
    let mut hits: BTreeMap<&PatternKey, Vec<usize>> = BTreeMap::new();
    let by_sentence = extractor.extract_by_sentence(utterance);
    for (i, set) in by_sentence.iter().enumerate() {
        for key in set {
            if let Some((k, _)) = retained.get_key_value(key) {
                hits.entry(k).or_default().push(i);
            }
        }
    }
    let label = if pattern_is_class(hits.len()) {
        Label::Class
    } else {
        Label::Counter
    };
    Classification {
        label,
        evidence: hits
            .into_iter()
            .map(|(k, positions)| Evidence {
                cue: k.to_string(),
                positions,
            })
            .collect(),
    }
}

fn label_with(
    set: &BTreeSet<PatternKey>,
    stats: &HashMap<&PatternKey, &ExtractionPattern>,
    config: &PatternConfig,
) -> Label {
    let matched = set
        .iter()
        .filter(|k| stats.get(k).is_some_and(|p| p.passes(config)))
        .count();
    if pattern_is_class(matched) {
        Label::Class
    } else {
        Label::Counter
    }
}

/// Labels `targets` with patterns learned from `learn_from`, once per grid
/// combination.
pub fn sweep_patterns(
    extractor: &PatternExtractor,
    learn_from: &[(Utterance, Label)],
    eval_set: &[LabeledUtterance],
    grid: &PatternGrid,
) -> Vec<SweepResult<PatternConfig>> {
    let learn_sets = extractor.extract_all(learn_from.par_iter().map(|(u, _)| u));
    let learn_labels: Vec<Label> = learn_from.iter().map(|(_, l)| *l).collect();
    let stats = pattern_statistics(&learn_sets, &learn_labels);
    let keys: Vec<PatternKey> = stats.iter().map(ExtractionPattern::key).collect();
    let index: HashMap<&PatternKey, &ExtractionPattern> = keys.iter().zip(&stats).collect();

    let scored: Vec<&LabeledUtterance> = eval_set
        .iter()
        .filter(|l| l.label != Label::Abstain)
        .collect();
    let eval_sets = extractor.extract_all(scored.par_iter().map(|l| &l.utterance));
    let gold: Vec<Label> = scored.iter().map(|l| l.label).collect();

    grid.configs()
        .into_par_iter()
        .map(|config| {
            let predicted: Vec<Label> = eval_sets
                .iter()
                .map(|s| label_with(s, &index, &config))
                .collect();
            SweepResult::new(config, &Metrics::from_labels(&predicted, &gold))
        })
        .collect()
}

pub fn patterns_to_json(patterns: &[ExtractionPattern]) -> String {
    serde_json::to_string_pretty(patterns).expect("patterns serialize")
}

pub fn patterns_from_json(json: &str) -> Result<Vec<ExtractionPattern>> {
    let patterns: Vec<ExtractionPattern> =
        serde_json::from_str(json).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    for p in &patterns {
        if p.fill.trim().is_empty() || p.freq == 0 || !(0.0..=1.0).contains(&p.pct_class) {
            return Err(Error::InvalidConfig(format!("invalid pattern {p:?}")));
        }
    }
    Ok(patterns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Task;

    fn pair(id: &str, text: &str, label: Label) -> (Utterance, Label) {
        (Utterance::new(id, text), label)
    }

    fn sample() -> Vec<(Utterance, Label)> {
        vec![
            pair(
                "1",
                "It was explained to me. They are looking for a fight.",
                Label::Class,
            ),
            pair(
                "2",
                "It was explained badly. Thieves looking for an open window.",
                Label::Class,
            ),
            pair("3", "It was explained again.", Label::Counter),
            pair("4", "We are looking for a house.", Label::Class),
            pair("5", "Nothing here.", Label::Counter),
        ]
    }

    #[test]
    fn statistics_and_thresholds() {
        let ex = PatternExtractor::new();
        let learned = learn_patterns(&ex, &sample(), &PatternConfig::new(1, 0.0)).unwrap();
        let explained = learned
            .iter()
            .find(|p| p.template == PatternTemplate::SubjPassiveVerb && p.fill == "was explained")
            .unwrap();
        assert_eq!(explained.freq, 3);
        assert!((explained.pct_class - 2.0 / 3.0).abs() < 1e-12);
        let looking = learned
            .iter()
            .find(|p| p.template == PatternTemplate::ActiveVerbPrepNp && p.fill == "looking for")
            .unwrap();
        assert_eq!((looking.freq, looking.pct_class), (3, 1.0));

        let strict = learn_patterns(&ex, &sample(), &PatternConfig::new(2, 0.70)).unwrap();
        assert!(strict.iter().any(|p| p.fill == "looking for"));
        assert!(!strict.iter().any(|p| p.fill == "was explained"));
        assert!(matches!(
            learn_patterns(&ex, &[], &PatternConfig::new(2, 0.5)),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn two_distinct_patterns_needed() {
        let ex = PatternExtractor::new();
        let pats = vec![
            ExtractionPattern {
                template: PatternTemplate::SubjPassiveVerb,
                fill: "was explained".into(),
                freq: 2,
                pct_class: 1.0,
            },
            ExtractionPattern {
                template: PatternTemplate::ActiveVerbPrepNp,
                fill: "looking for".into(),
                freq: 14,
                pct_class: 0.92,
            },
        ];
        let cfg = PatternConfig::new(2, 0.70);
        let both = Utterance::new("a", "It was explained. Thieves looking for an open window.");
        let c = classify_patterns(&ex, &both, &pats, &cfg);
        assert_eq!(c.label, Label::Class);
        assert_eq!(c.evidence.len(), 2);
        let once = Utterance::new("b", "It was explained.");
        assert_eq!(
            classify_patterns(&ex, &once, &pats, &cfg).label,
            Label::Counter
        );
        let twice = Utterance::new("c", "It was explained. It was explained again.");
        assert_eq!(
            classify_patterns(&ex, &twice, &pats, &cfg).label,
            Label::Counter
        );
        assert_eq!(
            classify_patterns(&ex, &both, &pats, &PatternConfig::new(3, 0.7)).label,
            Label::Counter
        );
    }

    #[test]
    fn sweep_on_gold_labels() {
        let ex = PatternExtractor::new();
        let data = sample();
        let eval: Vec<LabeledUtterance> = data
            .iter()
            .map(|(u, l)| LabeledUtterance {
                utterance: u.clone(),
                label: *l,
                task: Task::Sarcasm,
                mean_score: 0.0,
            })
            .collect();
        let grid = PatternGrid {
            theta1: vec![1, 2],
            theta2: vec![0.55, 1.0],
        };
        let res = sweep_patterns(&ex, &data, &eval, &grid);
        assert_eq!(res.len(), 4);
        for r in &res {
            let learned = learn_patterns(&ex, &data, &r.config).unwrap();
            let tp = data
                .iter()
                .filter(|(u, l)| {
                    l.is_class()
                        && classify_patterns(&ex, u, &learned, &r.config).label == Label::Class
                })
                .count();
            assert_eq!(r.true_positives, tp);
        }
    }

    #[test]
    fn pretagged_lines() {
        let input = "{\"id\":\"u1\",\"tagged\":[[\"It\",\"PRON\"],[\"was\",\"AUX\"],[\"explained\",\"VERB\"]]}\n";
        let map = read_pretagged(input.as_bytes()).unwrap();
        let ex = PatternExtractor::with_pretagged(map);
        let got = ex.extract(&Utterance::new("u1", "ignored text entirely"));
        assert!(got.contains(&PatternKey::new(
            PatternTemplate::SubjPassiveVerb,
            "was explained"
        )));
        assert!(matches!(
            read_pretagged("{\"id\":\"u1\",\"tagged\":[[\"x\",\"BOGUS\"]]}".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let pats = vec![ExtractionPattern {
            template: PatternTemplate::NounPrepNp,
            fill: "argument against".into(),
            freq: 4,
            pct_class: 0.75,
        }];
        let json = patterns_to_json(&pats);
        assert!(json.contains("\"NOUN_PREP_NP\""));
        assert_eq!(patterns_from_json(&json).unwrap(), pats);
    }
}
