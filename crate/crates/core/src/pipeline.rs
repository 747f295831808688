//! End-to-end runs: configuration, stage helpers shared with the CLI, and the
//! run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bootstrap::{run_phase1, BootstrapState, PatternSource, PatternStage};
use crate::corpus::{
    load_corpus, make_splits, select_split, splits_to_json, Corpus, CorpusFormat, DatasetSplit,
    GoldThresholds, LabeledUtterance, SplitName, SplitSpec, Task,
};
use crate::error::{Error, Result};
use crate::hp::{sweep, HpConfig, Regime, SweepGrid};
use crate::indicators::{
    aggregate_mt_indicators, indicators_to_tsv, recompute_statistics, select_chi2_indicators,
    Indicator, IndicatorSource,
};
use crate::metrics::{select_best, Metrics, SelectionPolicy, SweepResult};
use crate::pattern::{
    load_pretagged, patterns_to_json, sweep_patterns, PatternConfig, PatternExtractor, PatternGrid,
};
use crate::report::{
    history_stages, metrics_text, metrics_tsv, predictions_tsv, sweep_text, sweep_tsv,
};

fn default_regime() -> Regime {
    Regime::Percent
}

fn default_seed() -> u64 {
    13
}

fn default_rounds() -> usize {
    1
}

fn default_min_freq() -> usize {
    2
}

fn default_top_k() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Task,
    pub corpus: PathBuf,
    /// Split sizes; the IAC sizes for `task` when absent.
    #[serde(default)]
    pub splits: Option<Vec<SplitSpec>>,
    #[serde(default = "default_regime")]
    pub regime: Regime,
    #[serde(default)]
    pub hp_grid: SweepGrid,
    #[serde(default)]
    pub selection: SelectionPolicy,
    /// Skips the HP sweep when set.
    #[serde(default)]
    pub hp_config: Option<HpConfig>,
    #[serde(default)]
    pub pattern_grid: PatternGrid,
    /// Skips the pattern sweep when set.
    #[serde(default)]
    pub pattern_config: Option<PatternConfig>,
    #[serde(default)]
    pub pattern_source: PatternSource,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    #[serde(default = "default_min_freq")]
    pub chi2_min_freq: usize,
    #[serde(default = "default_top_k")]
    pub chi2_top_k: usize,
    #[serde(default)]
    pub gold: GoldThresholds,
    #[serde(default)]
    pub pretagged: Option<PathBuf>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl RunConfig {
    pub fn new(task: Task, corpus: impl Into<PathBuf>) -> Self {
        RunConfig {
            task,
            corpus: corpus.into(),
            splits: None,
            regime: default_regime(),
            hp_grid: SweepGrid::default(),
            selection: SelectionPolicy::default(),
            hp_config: None,
            pattern_grid: PatternGrid::default(),
            pattern_config: None,
            pattern_source: PatternSource::default(),
            rounds: default_rounds(),
            chi2_min_freq: default_min_freq(),
            chi2_top_k: default_top_k(),
            gold: GoldThresholds::default(),
            pretagged: None,
            seed: default_seed(),
        }
    }

    pub fn split_specs(&self) -> Vec<SplitSpec> {
        self.splits
            .clone()
            .unwrap_or_else(|| SplitSpec::iac(self.task))
    }

    pub fn validate(&self) -> Result<()> {
        for path in std::iter::once(&self.corpus).chain(self.pretagged.as_ref()) {
            if !path.is_file() {
                return Err(Error::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
                ));
            }
        }
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        if self.chi2_min_freq == 0 {
            return Err(Error::InvalidConfig(
                "chi2_min_freq must be at least 1".into(),
            ));
        }
        if let Some(c) = &self.hp_config {
            c.validate()?;
            if c.regime != self.regime {
                return Err(Error::InvalidConfig(format!(
                    "hp_config regime {} differs from regime {}",
                    c.regime, self.regime
                )));
            }
        }
        if let Some(c) = &self.pattern_config {
            c.validate()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        sha256_hex(self.to_json().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// A loaded corpus with gold labels and splits.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub corpus: Corpus,
    pub labeled: Vec<LabeledUtterance>,
    pub splits: Vec<DatasetSplit>,
}

impl Dataset {
    pub fn load(config: &RunConfig) -> Result<Self> {
        let (corpus, labeled) = load_labeled(config)?;
        let splits = make_splits(&labeled, &config.split_specs(), config.seed)?;
        Ok(Dataset {
            corpus,
            labeled,
            splits,
        })
    }

    pub fn with_splits(config: &RunConfig, splits: Vec<DatasetSplit>) -> Result<Self> {
        let (corpus, labeled) = load_labeled(config)?;
        Ok(Dataset {
            corpus,
            labeled,
            splits,
        })
    }

    /// Members of one split; an empty list when the split is absent.
    pub fn members(&self, name: SplitName) -> Vec<LabeledUtterance> {
        self.splits
            .iter()
            .find(|s| s.name == name)
            .map(|s| {
                select_split(&self.labeled, s)
                    .into_iter()
                    .cloned()
                    .collect()
            })
            .unwrap_or_default()
    }
}

fn load_labeled(config: &RunConfig) -> Result<(Corpus, Vec<LabeledUtterance>)> {
    let corpus = load_corpus(&config.corpus, CorpusFormat::Jsonl)?;
    if corpus.utterances.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let labeled = corpus.gold_labels(config.task, config.gold)?;
    Ok((corpus, labeled))
}

/// MT indicators aggregated on MT_EXP_DEV, or chi-square indicators selected
/// on HP_TRAIN. MT indicators get FREQ and %CLASS recounted on HP_TRAIN.
pub fn mine_indicators(
    config: &RunConfig,
    data: &Dataset,
    source: IndicatorSource,
) -> Result<Vec<Indicator>> {
    let train = data.members(SplitName::HpTrain);
    match source {
        IndicatorSource::Mt => {
            let mt: Vec<_> = data
                .members(SplitName::MtExpDev)
                .into_iter()
                .map(|l| l.utterance)
                .collect();
            if mt.is_empty() {
                return Err(Error::EmptyCorpus);
            }
            let ids: std::collections::HashSet<&str> = mt.iter().map(|u| u.id.as_str()).collect();
            let spans: Vec<_> = data
                .corpus
                .spans
                .iter()
                .filter(|s| ids.contains(s.utterance_id.as_str()))
                .cloned()
                .collect();
            let raw =
                aggregate_mt_indicators(&mt, &spans, &data.corpus.annotators_per_utterance())?;
            if train.is_empty() {
                return Err(Error::EmptyCorpus);
            }
            Ok(recompute_statistics(&raw, &train))
        }
        IndicatorSource::Chi2 => {
            select_chi2_indicators(&train, config.chi2_min_freq, config.chi2_top_k)
        }
    }
}

pub fn regime_source(regime: Regime) -> IndicatorSource {
    match regime {
        Regime::Ia | Regime::Percent => IndicatorSource::Mt,
        Regime::Chi2 => IndicatorSource::Chi2,
    }
}

/// Sweeps the HP grid on HP_TRAIN and picks the best configuration, unless
/// one is fixed in the config.
pub fn select_hp(
    config: &RunConfig,
    data: &Dataset,
    indicators: &[Indicator],
) -> Result<(Vec<SweepResult<HpConfig>>, HpConfig)> {
    if let Some(c) = config.hp_config {
        return Ok((Vec::new(), c));
    }
    let results = sweep(
        &data.members(SplitName::HpTrain),
        indicators,
        config.regime,
        &config.hp_grid,
    );
    let best = select_best(&results, config.selection)?;
    Ok((results, best))
}

pub fn extractor(config: &RunConfig) -> Result<PatternExtractor> {
    Ok(match &config.pretagged {
        Some(path) => PatternExtractor::with_pretagged(load_pretagged(path)?),
        None => PatternExtractor::new(),
    })
}

/// Learns patterns from PE_EVAL gold labels at every grid point, scores them
/// on HP_TRAIN, and picks the best, unless a configuration is fixed.
pub fn select_pattern_config(
    config: &RunConfig,
    data: &Dataset,
    extractor: &PatternExtractor,
) -> Result<(Vec<SweepResult<PatternConfig>>, PatternConfig)> {
    if let Some(c) = config.pattern_config {
        return Ok((Vec::new(), c));
    }
    let learn: Vec<_> = data
        .members(SplitName::PeEval)
        .into_iter()
        .map(|l| (l.utterance, l.label))
        .collect();
    if learn.is_empty() {
        return Err(Error::EmptyInput);
    }
    let results = sweep_patterns(
        extractor,
        &learn,
        &data.members(SplitName::HpTrain),
        &config.pattern_grid,
    );
    let best = select_best(&results, config.selection)?;
    Ok((results, best))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub stage: String,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub seed: u64,
    pub task: Task,
    pub corpus: PathBuf,
    pub corpus_sha256: String,
    pub config: RunConfig,
    pub split_sizes: BTreeMap<String, usize>,
    pub indicator_count: usize,
    pub hp_config: HpConfig,
    pub pattern_config: PatternConfig,
    pub pattern_count: usize,
    pub iterations: usize,
    pub converged: bool,
    pub phases: Vec<PhaseRecord>,
    /// Artifact file name to SHA-256 of its contents.
    pub artifacts: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

pub struct RunOutput {
    pub manifest: RunManifest,
    pub state: BootstrapState,
    /// File name to contents, including `manifest.json`.
    pub artifacts: BTreeMap<String, String>,
}

impl RunOutput {
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, body) in &self.artifacts {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Runs every stage: splits, indicators, HP selection, phase 1, pattern
/// selection, phase 2 and any further rounds.
pub fn run_pipeline(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let corpus_bytes = std::fs::read(&config.corpus).map_err(|e| Error::io(&config.corpus, e))?;
    let data = Dataset::load(config)?;
    let indicators = mine_indicators(config, &data, regime_source(config.regime))?;
    let (hp_sweep, hp_config) = select_hp(config, &data, &indicators)?;

    let dev_test = data.members(SplitName::HpDevTest);
    let phase1 = run_phase1(&dev_test, &indicators, &hp_config)?;

    let extractor = extractor(config)?;
    let (pattern_sweep, pattern_config) = select_pattern_config(config, &data, &extractor)?;
    let pe_eval = data.members(SplitName::PeEval);
    let stage = PatternStage {
        extractor: &extractor,
        gold: &dev_test,
        pe_eval: &pe_eval,
        config: pattern_config,
        source: config.pattern_source,
    };
    let state = stage.iterate(&phase1, config.rounds)?;

    let stages = history_stages(&state.metrics_history);
    let mut artifacts = BTreeMap::new();
    artifacts.insert("config.json".to_string(), config.to_json() + "\n");
    artifacts.insert(
        "splits.json".to_string(),
        splits_to_json(&data.splits) + "\n",
    );
    artifacts.insert("indicators.tsv".to_string(), indicators_to_tsv(&indicators));
    if !hp_sweep.is_empty() {
        artifacts.insert("hp_sweep.tsv".to_string(), sweep_tsv(&hp_sweep));
        artifacts.insert("hp_sweep.txt".to_string(), sweep_text(&hp_sweep));
    }
    if !pattern_sweep.is_empty() {
        artifacts.insert("pattern_sweep.tsv".to_string(), sweep_tsv(&pattern_sweep));
        artifacts.insert("pattern_sweep.txt".to_string(), sweep_text(&pattern_sweep));
    }
    artifacts.insert(
        "hp_predictions.tsv".to_string(),
        predictions_tsv(&phase1.classified_pool),
    );
    artifacts.insert(
        "pattern_predictions.tsv".to_string(),
        predictions_tsv(&state.classified_pool),
    );
    artifacts.insert(
        "patterns.json".to_string(),
        patterns_to_json(&state.pattern_set) + "\n",
    );
    artifacts.insert("metrics.tsv".to_string(), metrics_tsv(&stages));
    artifacts.insert("metrics.txt".to_string(), metrics_text(&stages));

    let manifest = RunManifest {
        config_hash: config.hash(),
        seed: config.seed,
        task: config.task,
        corpus: config.corpus.clone(),
        corpus_sha256: sha256_hex(&corpus_bytes),
        config: config.clone(),
        split_sizes: data
            .splits
            .iter()
            .map(|s| (s.name.to_string(), s.members.len()))
            .collect(),
        indicator_count: indicators.len(),
        hp_config,
        pattern_config,
        pattern_count: state.pattern_set.len(),
        iterations: state.iteration,
        converged: state.converged,
        phases: stages
            .into_iter()
            .map(|(stage, metrics)| PhaseRecord { stage, metrics })
            .collect(),
        artifacts: artifacts
            .iter()
            .map(|(k, v)| (k.clone(), sha256_hex(v.as_bytes())))
            .collect(),
    };
    artifacts.insert("manifest.json".to_string(), manifest.to_json());
    Ok(RunOutput {
        manifest,
        state,
        artifacts,
    })
}
