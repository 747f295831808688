//! Corpus ingestion, gold-label derivation and experimental splits.
//!
//! A corpus file is JSON Lines. Most lines describe one utterance with its
//! annotations nested inside; annotation and indicator-span records may also
//! appear on their own lines, keyed by `utterance_id`, in which case they must
//! resolve to an utterance somewhere in the same file.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub id: String,
    pub response: String,
    /// Context only. Never tokenized for classification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quote: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl Utterance {
    pub fn new(id: impl Into<String>, response: impl Into<String>) -> Self {
        Utterance {
            id: id.into(),
            response: response.into(),
            quote: None,
            source: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Sarcasm,
    Nasty,
}

impl Task {
    /// Name of the positive class in reports (`sarc` / `nasty`).
    pub fn class_name(self) -> &'static str {
        match self {
            Task::Sarcasm => "sarc",
            Task::Nasty => "nasty",
        }
    }

    pub fn counter_name(self) -> &'static str {
        match self {
            Task::Sarcasm => "notsarc",
            Task::Nasty => "nice",
        }
    }

    fn value_range(self) -> (f64, f64) {
        match self {
            Task::Sarcasm => (0.0, 1.0),
            Task::Nasty => (-5.0, 5.0),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Sarcasm => "sarcasm",
            Task::Nasty => "nasty",
        })
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sarcasm" | "sarc" => Ok(Task::Sarcasm),
            "nasty" | "nastiness" => Ok(Task::Nasty),
            other => Err(Error::InvalidConfig(format!("unknown task {other:?}"))),
        }
    }
}

/// Three-way decision shared by gold labels and classifiers. Gold labels are
/// always `Class` or `Counter`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// sarc / nasty
    Class,
    /// notsarc / nice
    Counter,
    Abstain,
}

impl Label {
    pub fn is_class(self) -> bool {
        self == Label::Class
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Class => "class",
            Label::Counter => "counter",
            Label::Abstain => "abstain",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub utterance_id: String,
    pub annotator_id: String,
    pub task: Task,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorAnnotation {
    pub utterance_id: String,
    pub annotator_id: String,
    /// Character offsets into the response, half open.
    pub start: usize,
    pub end: usize,
    pub phrase: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledUtterance {
    pub utterance: Utterance,
    pub label: Label,
    pub task: Task,
    pub mean_score: f64,
}

impl LabeledUtterance {
    pub fn id(&self) -> &str {
        &self.utterance.id
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldThresholds {
    pub sarc_min: f64,
    pub nasty_max: f64,
    pub nice_min: f64,
}

impl Default for GoldThresholds {
    fn default() -> Self {
        GoldThresholds {
            sarc_min: 0.5,
            nasty_max: -1.0,
            nice_min: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplitName {
    #[serde(rename = "MT_EXP_DEV")]
    MtExpDev,
    #[serde(rename = "HP_TRAIN")]
    HpTrain,
    #[serde(rename = "HP_DEV_TEST")]
    HpDevTest,
    #[serde(rename = "PE_EVAL")]
    PeEval,
}

impl SplitName {
    pub const ALL: [SplitName; 4] = [
        SplitName::MtExpDev,
        SplitName::HpTrain,
        SplitName::HpDevTest,
        SplitName::PeEval,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SplitName::MtExpDev => "MT_EXP_DEV",
            SplitName::HpTrain => "HP_TRAIN",
            SplitName::HpDevTest => "HP_DEV_TEST",
            SplitName::PeEval => "PE_EVAL",
        }
    }
}

impl fmt::Display for SplitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_uppercase().replace(['-', ' '], "_");
        SplitName::ALL
            .into_iter()
            .find(|n| n.as_str() == norm)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown split {s:?}")))
    }
}

/// Requested size of one split. `counter_count` of `None` means the split
/// takes class members only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub name: SplitName,
    pub class_count: usize,
    pub counter_count: Option<usize>,
}

impl SplitSpec {
    pub fn new(name: SplitName, class_count: usize, counter_count: Option<usize>) -> Self {
        SplitSpec {
            name,
            class_count,
            counter_count,
        }
    }

    /// The split sizes used for the IAC sarcasm and nastiness experiments.
    pub fn iac(task: Task) -> Vec<SplitSpec> {
        use SplitName::*;
        match task {
            Task::Sarcasm => vec![
                SplitSpec::new(MtExpDev, 617, None),
                SplitSpec::new(HpTrain, 1407, Some(1404)),
                SplitSpec::new(HpDevTest, 1614, Some(1614)),
                SplitSpec::new(PeEval, 1616, Some(1616)),
            ],
            Task::Nasty => vec![
                SplitSpec::new(MtExpDev, 510, None),
                SplitSpec::new(HpTrain, 1147, Some(1147)),
                SplitSpec::new(HpDevTest, 691, Some(691)),
                SplitSpec::new(PeEval, 691, Some(691)),
            ],
        }
    }

    pub fn total(&self) -> usize {
        self.class_count + self.counter_count.unwrap_or(0)
    }
}

impl FromStr for SplitSpec {
    type Err = Error;

    /// `NAME:CLASS:COUNTER`, with `NA` or an empty counter for class-only splits.
    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidConfig(format!("bad split spec {s:?}, expected NAME:CLASS:COUNTER"));
        let mut parts = s.split(':');
        let name = parts.next().ok_or_else(bad)?.parse()?;
        let class_count = parts
            .next()
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let counter_count = match parts.next().map(str::trim) {
            None | Some("") => None,
            Some(na) if na.eq_ignore_ascii_case("na") => None,
            Some(n) => Some(n.parse().map_err(|_| bad())?),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(SplitSpec {
            name,
            class_count,
            counter_count,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub name: SplitName,
    /// Sorted utterance ids.
    pub members: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CorpusFormat {
    #[default]
    Jsonl,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    pub utterances: Vec<Utterance>,
    pub annotations: Vec<AnnotationRecord>,
    pub spans: Vec<IndicatorAnnotation>,
    /// Number of annotators shown each utterance during indicator selection,
    /// where the file declares it.
    pub indicator_annotators: BTreeMap<String, usize>,
}

impl Corpus {
    pub fn get(&self, id: &str) -> Option<&Utterance> {
        self.utterances.iter().find(|u| u.id == id)
    }

    pub fn by_id(&self) -> HashMap<&str, &Utterance> {
        self.utterances.iter().map(|u| (u.id.as_str(), u)).collect()
    }

    /// Gold labels for every utterance carrying at least one annotation for
    /// `task`, in corpus order.
    pub fn gold_labels(
        &self,
        task: Task,
        thresholds: GoldThresholds,
    ) -> Result<Vec<LabeledUtterance>> {
        let annotated: HashSet<&str> = self
            .annotations
            .iter()
            .filter(|a| a.task == task)
            .map(|a| a.utterance_id.as_str())
            .collect();
        let utterances: Vec<Utterance> = self
            .utterances
            .iter()
            .filter(|u| annotated.contains(u.id.as_str()))
            .cloned()
            .collect();
        derive_gold_labels(&utterances, &self.annotations, task, thresholds)
    }

    /// Annotators exposed to each utterance during indicator selection: the
    /// declared count if present, otherwise the number of distinct annotators
    /// with at least one span on it.
    pub fn annotators_per_utterance(&self) -> BTreeMap<String, usize> {
        let mut seen: BTreeMap<String, HashSet<&str>> = BTreeMap::new();
        for span in &self.spans {
            seen.entry(span.utterance_id.clone())
                .or_default()
                .insert(span.annotator_id.as_str());
        }
        let mut counts: BTreeMap<String, usize> =
            seen.into_iter().map(|(id, s)| (id, s.len())).collect();
        for (id, n) in &self.indicator_annotators {
            let entry = counts.entry(id.clone()).or_insert(0);
            *entry = (*entry).max(*n);
        }
        counts
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLine {
    Utterance(RawUtterance),
    Span(RawStandaloneSpan),
    Annotation(RawStandaloneAnnotation),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUtterance {
    id: String,
    response: String,
    #[serde(default)]
    quote: Option<String>,
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    annotations: Vec<RawAnnotation>,
    #[serde(default)]
    indicator_spans: Vec<RawSpan>,
    #[serde(default)]
    indicator_annotators: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnnotation {
    annotator: String,
    task: Task,
    value: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpan {
    annotator: String,
    start: usize,
    end: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStandaloneAnnotation {
    utterance_id: String,
    annotator: String,
    task: Task,
    value: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStandaloneSpan {
    utterance_id: String,
    annotator: String,
    start: usize,
    end: usize,
}

pub fn load_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    match format {
        CorpusFormat::Jsonl => read_jsonl(BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        }),
    }
}

pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    let mut ids: HashSet<String> = HashSet::new();
    let mut pending_annotations = Vec::new();
    let mut pending_spans = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<reader>", e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let raw: RawLine = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        match raw {
            RawLine::Utterance(raw) => {
                if !ids.insert(raw.id.clone()) {
                    return Err(Error::DuplicateId(raw.id));
                }
                if raw.response.trim().is_empty() {
                    return Err(Error::InvalidRecord {
                        id: raw.id,
                        message: "empty response".into(),
                    });
                }
                for a in raw.annotations {
                    corpus.annotations.push(check_annotation(AnnotationRecord {
                        utterance_id: raw.id.clone(),
                        annotator_id: a.annotator,
                        task: a.task,
                        value: a.value,
                    })?);
                }
                for s in raw.indicator_spans {
                    corpus.spans.push(make_span(
                        &raw.id,
                        &raw.response,
                        s.annotator,
                        s.start,
                        s.end,
                    )?);
                }
                if let Some(n) = raw.indicator_annotators {
                    corpus.indicator_annotators.insert(raw.id.clone(), n);
                }
                corpus.utterances.push(Utterance {
                    id: raw.id,
                    response: raw.response,
                    quote: raw.quote,
                    source: raw.source,
                });
            }
            RawLine::Annotation(a) => pending_annotations.push(AnnotationRecord {
                utterance_id: a.utterance_id,
                annotator_id: a.annotator,
                task: a.task,
                value: a.value,
            }),
            RawLine::Span(s) => pending_spans.push(s),
        }
    }

    for a in pending_annotations {
        if !ids.contains(&a.utterance_id) {
            return Err(Error::DanglingReference(a.utterance_id));
        }
        corpus.annotations.push(check_annotation(a)?);
    }
    if !pending_spans.is_empty() {
        let texts: HashMap<&str, &str> = corpus
            .utterances
            .iter()
            .map(|u| (u.id.as_str(), u.response.as_str()))
            .collect();
        let mut resolved = Vec::with_capacity(pending_spans.len());
        for s in pending_spans {
            let text = texts
                .get(s.utterance_id.as_str())
                .ok_or_else(|| Error::DanglingReference(s.utterance_id.clone()))?;
            resolved.push(make_span(
                &s.utterance_id,
                text,
                s.annotator,
                s.start,
                s.end,
            )?);
        }
        corpus.spans.extend(resolved);
    }
    Ok(corpus)
}

#[derive(Serialize)]
struct OutAnnotation<'a> {
    annotator: &'a str,
    task: Task,
    value: f64,
}

#[derive(Serialize)]
struct OutSpan<'a> {
    annotator: &'a str,
    start: usize,
    end: usize,
}

#[derive(Serialize)]
struct OutUtterance<'a> {
    id: &'a str,
    response: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    quote: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<&'a str>,
    annotations: Vec<OutAnnotation<'a>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    indicator_spans: Vec<OutSpan<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indicator_annotators: Option<usize>,
}

/// Writes one line per utterance with its annotations and spans nested, in
/// corpus order. The output reads back to an equal corpus.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut writer: W) -> Result<()> {
    let mut anns: HashMap<&str, Vec<OutAnnotation>> = HashMap::new();
    for a in &corpus.annotations {
        anns.entry(&a.utterance_id)
            .or_default()
            .push(OutAnnotation {
                annotator: &a.annotator_id,
                task: a.task,
                value: a.value,
            });
    }
    let mut spans: HashMap<&str, Vec<OutSpan>> = HashMap::new();
    for s in &corpus.spans {
        spans.entry(&s.utterance_id).or_default().push(OutSpan {
            annotator: &s.annotator_id,
            start: s.start,
            end: s.end,
        });
    }
    for u in &corpus.utterances {
        let line = OutUtterance {
            id: &u.id,
            response: &u.response,
            quote: u.quote.as_deref(),
            source: u.source.as_deref(),
            annotations: anns.remove(u.id.as_str()).unwrap_or_default(),
            indicator_spans: spans.remove(u.id.as_str()).unwrap_or_default(),
            indicator_annotators: corpus.indicator_annotators.get(&u.id).copied(),
        };
        let json = serde_json::to_string(&line).expect("utterance serializes");
        writeln!(writer, "{json}").map_err(|e| Error::io("<writer>", e))?;
    }
    Ok(())
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_jsonl(corpus, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn check_annotation(a: AnnotationRecord) -> Result<AnnotationRecord> {
    let (lo, hi) = a.task.value_range();
    let in_range = a.value.is_finite() && a.value >= lo && a.value <= hi;
    let binary_ok = a.task != Task::Sarcasm || a.value == 0.0 || a.value == 1.0;
    if !in_range || !binary_ok {
        return Err(Error::InvalidRecord {
            id: a.utterance_id,
            message: format!("{} annotation value {} out of range", a.task, a.value),
        });
    }
    Ok(a)
}

fn make_span(
    id: &str,
    text: &str,
    annotator: String,
    start: usize,
    end: usize,
) -> Result<IndicatorAnnotation> {
    let len = text.chars().count();
    if start >= end || end > len {
        return Err(Error::InvalidRecord {
            id: id.to_string(),
            message: format!("span {start}..{end} outside response of {len} characters"),
        });
    }
    let phrase: String = text.chars().skip(start).take(end - start).collect();
    Ok(IndicatorAnnotation {
        utterance_id: id.to_string(),
        annotator_id: annotator,
        start,
        end,
        phrase,
    })
}

/// Mean-score gold labels. Every utterance passed in must have at least one
/// annotation for `task`. Nasty-task utterances whose mean falls in
/// `[nasty_max, nice_min]` are dropped.
pub fn derive_gold_labels(
    utterances: &[Utterance],
    annotations: &[AnnotationRecord],
    task: Task,
    thresholds: GoldThresholds,
) -> Result<Vec<LabeledUtterance>> {
    let mut sums: HashMap<&str, (f64, usize)> = HashMap::new();
    for a in annotations.iter().filter(|a| a.task == task) {
        let e = sums.entry(a.utterance_id.as_str()).or_insert((0.0, 0));
        e.0 += a.value;
        e.1 += 1;
    }

    let mut out = Vec::with_capacity(utterances.len());
    for u in utterances {
        let &(sum, n) = sums
            .get(u.id.as_str())
            .ok_or_else(|| Error::NoAnnotations(u.id.clone()))?;
        let mean = sum / n as f64;
        let label = match task {
            Task::Sarcasm if mean > thresholds.sarc_min => Some(Label::Class),
            Task::Sarcasm => Some(Label::Counter),
            Task::Nasty if mean < thresholds.nasty_max => Some(Label::Class),
            Task::Nasty if mean > thresholds.nice_min => Some(Label::Counter),
            Task::Nasty => None,
        };
        if let Some(label) = label {
            out.push(LabeledUtterance {
                utterance: u.clone(),
                label,
                task,
                mean_score: mean,
            });
        }
    }
    Ok(out)
}

/// Disjoint, seed-deterministic splits with exact per-class counts. Splits
/// are filled in the order given, so earlier entries draw first.
pub fn make_splits(
    labeled: &[LabeledUtterance],
    spec: &[SplitSpec],
    seed: u64,
) -> Result<Vec<DatasetSplit>> {
    let mut class_pool: Vec<&str> = Vec::new();
    let mut counter_pool: Vec<&str> = Vec::new();
    for l in labeled {
        match l.label {
            Label::Class => class_pool.push(l.id()),
            Label::Counter => counter_pool.push(l.id()),
            Label::Abstain => {}
        }
    }
    class_pool.sort_unstable();
    counter_pool.sort_unstable();
    class_pool.dedup();
    counter_pool.dedup();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    class_pool.shuffle(&mut rng);
    counter_pool.shuffle(&mut rng);

    let mut seen_names = HashSet::new();
    let (mut ci, mut ki) = (0usize, 0usize);
    let mut splits = Vec::with_capacity(spec.len());
    for s in spec {
        if !seen_names.insert(s.name) {
            return Err(Error::InvalidConfig(format!(
                "split {} requested twice",
                s.name
            )));
        }
        let take = |pool: &[&str], at: &mut usize, n: usize, class: &str| -> Result<Vec<String>> {
            let available = pool.len() - *at;
            if n > available {
                return Err(Error::InsufficientData {
                    split: s.name.to_string(),
                    class: class.to_string(),
                    requested: n,
                    available,
                });
            }
            let out = pool[*at..*at + n].iter().map(|s| s.to_string()).collect();
            *at += n;
            Ok(out)
        };
        let mut members = take(&class_pool, &mut ci, s.class_count, "class")?;
        members.extend(take(
            &counter_pool,
            &mut ki,
            s.counter_count.unwrap_or(0),
            "counter",
        )?);
        members.sort_unstable();
        splits.push(DatasetSplit {
            name: s.name,
            members,
        });
    }
    Ok(splits)
}

pub fn splits_to_json(splits: &[DatasetSplit]) -> String {
    let map: BTreeMap<&str, &Vec<String>> = splits
        .iter()
        .map(|s| (s.name.as_str(), &s.members))
        .collect();
    serde_json::to_string_pretty(&map).expect("split map serializes")
}

pub fn splits_from_json(json: &str) -> Result<Vec<DatasetSplit>> {
    let map: BTreeMap<String, Vec<String>> =
        serde_json::from_str(json).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    let mut splits = Vec::with_capacity(map.len());
    for (name, mut members) in map {
        members.sort_unstable();
        splits.push(DatasetSplit {
            name: name.parse()?,
            members,
        });
    }
    splits.sort_by_key(|s| s.name);
    Ok(splits)
}

/// Labeled utterances belonging to one split, in split-member order.
pub fn select_split<'a>(
    labeled: &'a [LabeledUtterance],
    split: &DatasetSplit,
) -> Vec<&'a LabeledUtterance> {
    let by_id: HashMap<&str, &LabeledUtterance> = labeled.iter().map(|l| (l.id(), l)).collect();
    split
        .members
        .iter()
        .filter_map(|id| by_id.get(id.as_str()).copied())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ann(id: &str, annotator: &str, task: Task, value: f64) -> AnnotationRecord {
        AnnotationRecord {
            utterance_id: id.into(),
            annotator_id: annotator.into(),
            task,
            value,
        }
    }

    fn labeled(id: &str, label: Label) -> LabeledUtterance {
        LabeledUtterance {
            utterance: Utterance::new(id, "text"),
            label,
            task: Task::Sarcasm,
            mean_score: 0.0,
        }
    }

    #[test]
    fn loads_nested_records() {
        let mut text = String::new();
        for i in 0..3 {
            let anns: Vec<String> = (0..7)
                .map(|a| {
                    format!(
                        r#"{{"annotator":"a{a}","task":"sarcasm","value":{}}}"#,
                        (a + i) % 2
                    )
                })
                .collect();
            text.push_str(&format!(
                r#"{{"id":"r{i}","response":"oh really now","quote":null,"annotations":[{}],"indicator_spans":[{{"annotator":"m1","start":0,"end":9}}]}}"#,
                anns.join(",")
            ));
            text.push('\n');
        }
        let corpus = read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(corpus.utterances.len(), 3);
        assert_eq!(corpus.annotations.len(), 21);
        assert_eq!(corpus.spans[0].phrase, "oh really");
    }

    #[test]
    fn dangling_reference_is_reported() {
        let text = concat!(
            r#"{"id":"r1","response":"fine"}"#,
            "\n",
            r#"{"utterance_id":"x9","annotator":"a","task":"nasty","value":-2}"#,
            "\n"
        );
        match read_jsonl(text.as_bytes()) {
            Err(Error::DanglingReference(id)) => assert_eq!(id, "x9"),
            other => panic!("expected dangling reference, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let corpus = read_jsonl("".as_bytes()).unwrap();
        assert!(corpus.utterances.is_empty());
        assert!(corpus.annotations.is_empty());
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = "{\"id\":\"a\",\"response\":\"x\"}\n\n{not json}\n";
        match read_jsonl(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = "{\"id\":\"a\",\"response\":\"x\"}\n{\"id\":\"a\",\"response\":\"y\"}\n";
        assert!(matches!(
            read_jsonl(text.as_bytes()),
            Err(Error::DuplicateId(_))
        ));
    }

    #[test]
    fn out_of_range_values_rejected() {
        let sarc = r#"{"id":"a","response":"x","annotations":[{"annotator":"1","task":"sarcasm","value":0.5}]}"#;
        assert!(matches!(
            read_jsonl(sarc.as_bytes()),
            Err(Error::InvalidRecord { .. })
        ));
        let nasty = r#"{"id":"a","response":"x","annotations":[{"annotator":"1","task":"nasty","value":-6}]}"#;
        assert!(matches!(
            read_jsonl(nasty.as_bytes()),
            Err(Error::InvalidRecord { .. })
        ));
        let span =
            r#"{"id":"a","response":"xy","indicator_spans":[{"annotator":"1","start":1,"end":3}]}"#;
        assert!(matches!(
            read_jsonl(span.as_bytes()),
            Err(Error::InvalidRecord { .. })
        ));
    }

    #[test]
    fn sarcasm_means_above_half_are_class() {
        let us = vec![Utterance::new("R1", "a"), Utterance::new("R3", "b")];
        let mut anns = Vec::new();
        for i in 0..5 {
            anns.push(ann("R1", &i.to_string(), Task::Sarcasm, 1.0));
            anns.push(ann(
                "R3",
                &i.to_string(),
                Task::Sarcasm,
                if i == 0 { 0.0 } else { 1.0 },
            ));
        }
        let out = derive_gold_labels(&us, &anns, Task::Sarcasm, GoldThresholds::default()).unwrap();
        assert_eq!(out.len(), 2);
        assert!((out[0].mean_score - 1.0).abs() < 1e-12);
        assert!((out[1].mean_score - 0.8).abs() < 1e-12);
        assert!(out.iter().all(|l| l.label == Label::Class));
    }

    #[test]
    fn sarcasm_boundary_is_counter() {
        let us = vec![Utterance::new("a", "x")];
        let anns = vec![
            ann("a", "1", Task::Sarcasm, 1.0),
            ann("a", "2", Task::Sarcasm, 0.0),
        ];
        let out = derive_gold_labels(&us, &anns, Task::Sarcasm, GoldThresholds::default()).unwrap();
        assert_eq!(out[0].label, Label::Counter);
    }

    #[test]
    fn nasty_thresholds_are_strict() {
        let us = vec![
            Utterance::new("R1", "a"),
            Utterance::new("R2", "b"),
            Utterance::new("R4", "c"),
        ];
        let anns = vec![
            ann("R1", "1", Task::Nasty, -3.6),
            ann("R2", "1", Task::Nasty, -1.0),
            ann("R4", "1", Task::Nasty, 3.0),
        ];
        let out = derive_gold_labels(&us, &anns, Task::Nasty, GoldThresholds::default()).unwrap();
        let labels: Vec<(&str, Label)> = out.iter().map(|l| (l.id(), l.label)).collect();
        assert_eq!(labels, vec![("R1", Label::Class), ("R4", Label::Counter)]);
    }

    #[test]
    fn missing_annotations_error() {
        let us = vec![Utterance::new("a", "x")];
        let anns = vec![ann("a", "1", Task::Nasty, 2.0)];
        assert!(matches!(
            derive_gold_labels(&us, &anns, Task::Sarcasm, GoldThresholds::default()),
            Err(Error::NoAnnotations(_))
        ));
    }

    #[test]
    fn iac_split_sizes() {
        let sizes = |task| {
            SplitSpec::iac(task)
                .iter()
                .map(SplitSpec::total)
                .collect::<Vec<_>>()
        };
        assert_eq!(sizes(Task::Sarcasm), vec![617, 2811, 3228, 3232]);
        assert_eq!(sizes(Task::Nasty), vec![510, 2294, 1382, 1382]);
    }

    #[test]
    fn splits_at_iac_scale() {
        let mut pool = Vec::new();
        for i in 0..5254 {
            pool.push(labeled(&format!("s{i}"), Label::Class));
        }
        for i in 0..4635 {
            pool.push(labeled(&format!("n{i}"), Label::Counter));
        }
        let splits = make_splits(&pool, &SplitSpec::iac(Task::Sarcasm), 7).unwrap();
        let sizes: Vec<usize> = splits.iter().map(|s| s.members.len()).collect();
        assert_eq!(sizes, vec![617, 2811, 3228, 3232]);
        let again = make_splits(&pool, &SplitSpec::iac(Task::Sarcasm), 7).unwrap();
        assert_eq!(splits, again);
        let mt = &splits[0];
        assert!(mt.members.iter().all(|id| id.starts_with('s')));
    }

    #[test]
    fn insufficient_data_names_split() {
        let pool: Vec<_> = (0..5)
            .map(|i| labeled(&format!("c{i}"), Label::Class))
            .collect();
        let spec = [SplitSpec::new(SplitName::HpTrain, 3, Some(1))];
        match make_splits(&pool, &spec, 1) {
            Err(Error::InsufficientData { split, class, .. }) => {
                assert_eq!(split, "HP_TRAIN");
                assert_eq!(class, "counter");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn split_spec_parsing() {
        let s: SplitSpec = "MT_EXP_DEV:617:NA".parse().unwrap();
        assert_eq!(s, SplitSpec::new(SplitName::MtExpDev, 617, None));
        let s: SplitSpec = "hp-train:1407:1404".parse().unwrap();
        assert_eq!(s, SplitSpec::new(SplitName::HpTrain, 1407, Some(1404)));
        assert!("bogus:1:2".parse::<SplitSpec>().is_err());
    }

    #[test]
    fn split_json_roundtrip() {
        let splits = vec![
            DatasetSplit {
                name: SplitName::HpTrain,
                members: vec!["a".into(), "b".into()],
            },
            DatasetSplit {
                name: SplitName::PeEval,
                members: vec!["c".into()],
            },
        ];
        let json = splits_to_json(&splits);
        assert!(json.contains("\"HP_TRAIN\""));
        assert_eq!(splits_from_json(&json).unwrap(), splits);
    }

    #[test]
    fn writer_round_trips() {
        let text = concat!(
            r#"{"id":"a","response":"oh really now","quote":"q","annotations":[{"annotator":"x","task":"sarcasm","value":1}],"indicator_spans":[{"annotator":"m","start":0,"end":9}],"indicator_annotators":5}"#,
            "\n",
            r#"{"id":"b","response":"fine","annotations":[{"annotator":"x","task":"nasty","value":-2.5}]}"#,
            "\n",
        );
        let corpus = read_jsonl(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_jsonl(&corpus, &mut out).unwrap();
        assert_eq!(read_jsonl(out.as_slice()).unwrap(), corpus);
    }
}
