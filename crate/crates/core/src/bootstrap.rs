//! Two-phase bootstrapping: high-precision cue classification, then pattern
//! learning and pattern classification, optionally iterated.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Label, LabeledUtterance, Utterance};
use crate::error::{Error, Result};
use crate::hp::{classify, HpConfig};
use crate::indicators::Indicator;
use crate::metrics::{evaluate, Metrics};
use crate::pattern::{
    classify_patterns, learn_patterns, pattern_is_class, ExtractionPattern, PatternConfig,
    PatternExtractor, PatternKey,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapState {
    pub iteration: usize,
    pub indicator_set: Vec<Indicator>,
    pub pattern_set: Vec<ExtractionPattern>,
    pub classified_pool: Vec<(Utterance, Label)>,
    pub metrics_history: Vec<Metrics>,
    /// Set when a round left the pattern set unchanged.
    pub converged: bool,
}

/// Which labels pattern learning draws on in the first pattern round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternSource {
    /// Patterns learned from PE_EVAL gold labels that also occur in at least
    /// one utterance the high-precision classifier labeled CLASS.
    #[default]
    Validated,
    /// Patterns learned from the phase-1 pool's predicted labels.
    Pool,
    /// Patterns learned from PE_EVAL gold labels alone.
    Eval,
}

impl FromStr for PatternSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "validated" => Ok(PatternSource::Validated),
            "pool" => Ok(PatternSource::Pool),
            "eval" => Ok(PatternSource::Eval),
            _ => Err(Error::InvalidConfig(format!(
                "unknown pattern source {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternClassifier {
    pub patterns: Vec<ExtractionPattern>,
    pub config: PatternConfig,
}

impl PatternClassifier {
    pub fn label_set(&self, found: &BTreeSet<PatternKey>) -> Label {
        let matched = self
            .patterns
            .iter()
            .filter(|p| p.passes(&self.config) && found.contains(&p.key()))
            .count();
        if pattern_is_class(matched) {
            Label::Class
        } else {
            Label::Counter
        }
    }

    pub fn classify(&self, extractor: &PatternExtractor, utterance: &Utterance) -> Label {
        classify_patterns(extractor, utterance, &self.patterns, &self.config).label
    }

    pub fn classify_all(
        &self,
        extractor: &PatternExtractor,
        utterances: &[Utterance],
    ) -> Vec<(Utterance, Label)> {
        let found = extractor.extract_all(utterances);
        utterances
            .iter()
            .zip(&found)
            .map(|(u, f)| (u.clone(), self.label_set(f)))
            .collect()
    }
}

fn score(pool: &[(Utterance, Label)], gold: &[LabeledUtterance]) -> Result<Metrics> {
    let preds: Vec<(String, Label)> = pool.iter().map(|(u, l)| (u.id.clone(), *l)).collect();
    evaluate(&preds, gold)
}

/// Labels every dev-test utterance with the high-precision classifier and
/// scores the result against its gold labels.
pub fn run_phase1(
    dev_test: &[LabeledUtterance],
    indicators: &[Indicator],
    hp_config: &HpConfig,
) -> Result<BootstrapState> {
    hp_config.validate()?;
    let pool: Vec<(Utterance, Label)> = dev_test
        .par_iter()
        .map(|l| {
            (
                l.utterance.clone(),
                classify(&l.utterance, indicators, hp_config).label,
            )
        })
        .collect();
    let metrics = score(&pool, dev_test)?;
    Ok(BootstrapState {
        iteration: 0,
        indicator_set: indicators.to_vec(),
        pattern_set: Vec::new(),
        classified_pool: pool,
        metrics_history: vec![metrics],
        converged: false,
    })
}

/// Inputs shared by every pattern round.
pub struct PatternStage<'a> {
    pub extractor: &'a PatternExtractor,
    /// Gold labels of the utterances being classified (HP_DEV_TEST).
    pub gold: &'a [LabeledUtterance],
    pub pe_eval: &'a [LabeledUtterance],
    pub config: PatternConfig,
    pub source: PatternSource,
}

pub struct Phase2 {
    pub classifier: PatternClassifier,
    pub metrics: Metrics,
    pub state: BootstrapState,
}

fn with_gold(set: &[LabeledUtterance]) -> Vec<(Utterance, Label)> {
    set.iter().map(|l| (l.utterance.clone(), l.label)).collect()
}

fn sort_patterns(patterns: &mut [ExtractionPattern]) {
    patterns.sort_by(|a, b| {
        a.template
            .cmp(&b.template)
            .then_with(|| a.fill.cmp(&b.fill))
    });
}

impl PatternStage<'_> {
    /// First-round patterns for a phase-1 pool, according to `source`.
    pub fn learn(&self, pool: &[(Utterance, Label)]) -> Result<Vec<ExtractionPattern>> {
        let mut patterns = match self.source {
            PatternSource::Pool => learn_patterns(self.extractor, pool, &self.config)?,
            PatternSource::Eval => {
                learn_patterns(self.extractor, &with_gold(self.pe_eval), &self.config)?
            }
            PatternSource::Validated => {
                let learned =
                    learn_patterns(self.extractor, &with_gold(self.pe_eval), &self.config)?;
                let predicted: Vec<Utterance> = pool
                    .iter()
                    .filter(|(_, l)| l.is_class())
                    .map(|(u, _)| u.clone())
                    .collect();
                let seen: BTreeSet<PatternKey> = self
                    .extractor
                    .extract_all(&predicted)
                    .into_iter()
                    .flatten()
                    .collect();
                learned
                    .into_iter()
                    .filter(|p| seen.contains(&p.key()))
                    .collect()
            }
        };
        sort_patterns(&mut patterns);
        Ok(patterns)
    }

    fn apply(&self, state: &BootstrapState, classifier: PatternClassifier) -> Result<Phase2> {
        let utterances: Vec<Utterance> = state
            .classified_pool
            .iter()
            .map(|(u, _)| u.clone())
            .collect();
        let pool = classifier.classify_all(self.extractor, &utterances);
        let metrics = score(&pool, self.gold)?;
        let mut history = state.metrics_history.clone();
        history.push(metrics);
        Ok(Phase2 {
            state: BootstrapState {
                iteration: state.iteration + 1,
                indicator_set: state.indicator_set.clone(),
                pattern_set: classifier.patterns.clone(),
                classified_pool: pool,
                metrics_history: history,
                converged: false,
            },
            classifier,
            metrics,
        })
    }

    /// Learns patterns and classifies the phase-1 pool with them.
    pub fn run_phase2(&self, state: &BootstrapState) -> Result<Phase2> {
        if state.classified_pool.is_empty() {
            return Err(Error::EmptyPool);
        }
        self.config.validate()?;
        let patterns = self.learn(&state.classified_pool)?;
        self.apply(
            state,
            PatternClassifier {
                patterns,
                config: self.config,
            },
        )
    }

    /// Runs up to `rounds` pattern rounds from a phase-1 state. Later rounds
    /// add the patterns learned from the previous round's predictions and
    /// stop early once the pattern set stops changing.
    pub fn iterate(&self, state: &BootstrapState, rounds: usize) -> Result<BootstrapState> {
        if rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be at least 1".into()));
        }
        let mut cur = self.run_phase2(state)?.state;
        for _ in 1..rounds {
            let learned = learn_patterns(self.extractor, &cur.classified_pool, &self.config)?;
            let mut merged: BTreeMap<PatternKey, ExtractionPattern> = cur
                .pattern_set
                .iter()
                .map(|p| (p.key(), p.clone()))
                .collect();
            let before = merged.len();
            for p in learned {
                merged.entry(p.key()).or_insert(p);
            }
            if merged.len() == before {
                cur.converged = true;
                break;
            }
            let mut patterns: Vec<ExtractionPattern> = merged.into_values().collect();
            sort_patterns(&mut patterns);
            cur = self
                .apply(
                    &cur,
                    PatternClassifier {
                        patterns,
                        config: self.config,
                    },
                )?
                .state;
        }
        Ok(cur)
    }
}
