//! Threshold-gated high-precision classifiers over cue indicators.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Label, LabeledUtterance, Utterance};
use crate::error::{Error, Result};
use crate::indicators::{extract_ngrams, tokenize, Indicator, Ngram};
use crate::metrics::{Metrics, SweepParams, SweepResult};

/// Slack for comparing fractions against grid thresholds such as `.55`.
pub(crate) const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "IA_FEATURES")]
    Ia,
    #[serde(rename = "PERCENT_FEATURES")]
    Percent,
    #[serde(rename = "CHI2_FEATURES")]
    Chi2,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Ia => "IA",
            Regime::Percent => "%",
            Regime::Chi2 => "chi2",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Ia => "ia",
            Regime::Percent => "percent",
            Regime::Chi2 => "chi2",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ia" | "ia_features" => Ok(Regime::Ia),
            "percent" | "%" | "percent_features" => Ok(Regime::Percent),
            "chi2" | "chi2_features" => Ok(Regime::Chi2),
            _ => Err(Error::InvalidConfig(format!("unknown regime {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HpConfig {
    pub regime: Regime,
    pub theta1: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl HpConfig {
    pub fn ia(theta1: usize, alpha: f64, beta: f64) -> Self {
        HpConfig {
            regime: Regime::Ia,
            theta1,
            theta2: None,
            alpha: Some(alpha),
            beta: Some(beta),
        }
    }

    pub fn percent(theta1: usize, theta2: f64) -> Self {
        HpConfig {
            regime: Regime::Percent,
            theta1,
            theta2: Some(theta2),
            alpha: None,
            beta: None,
        }
    }

    pub fn chi2(theta1: usize, theta2: f64) -> Self {
        HpConfig {
            regime: Regime::Chi2,
            ..HpConfig::percent(theta1, theta2)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.theta1 < 1 {
            return bad("theta1 must be at least 1".into());
        }
        match self.regime {
            Regime::Ia => match (self.alpha, self.beta) {
                (Some(a), Some(b))
                    if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && a <= b =>
                {
                    Ok(())
                }
                (Some(a), Some(b)) => bad(format!(
                    "need 0 <= alpha <= beta <= 1, got alpha={a} beta={b}"
                )),
                _ => bad("IA regime needs alpha and beta".into()),
            },
            Regime::Percent | Regime::Chi2 => match self.theta2 {
                Some(t) if (0.0..=1.0).contains(&t) => Ok(()),
                Some(t) => bad(format!("theta2 {t} outside [0, 1]")),
                None => bad(format!("{} regime needs theta2", self.regime)),
            },
        }
    }

    fn tiers(&self) -> (f64, f64) {
        (self.alpha.unwrap_or(0.0), self.beta.unwrap_or(1.0))
    }
}

impl SweepParams for HpConfig {
    fn sort_key(&self) -> Vec<f64> {
        vec![
            self.theta1 as f64,
            self.theta2.unwrap_or(0.0),
            self.alpha.unwrap_or(0.0),
            self.beta.unwrap_or(0.0),
        ]
    }

    fn regime_label(&self) -> String {
        self.regime.label().to_string()
    }

    fn describe(&self) -> String {
        match self.regime {
            Regime::Ia => format!(
                "beta={:.2},alpha={:.2},theta1={}",
                self.beta.unwrap_or(f64::NAN),
                self.alpha.unwrap_or(f64::NAN),
                self.theta1
            ),
            _ => format!(
                "theta1={},theta2={:.2}",
                self.theta1,
                self.theta2.unwrap_or(f64::NAN)
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Strength {
    Weak,
    Medium,
    Strong,
}

pub fn strength_tier(indicator: &Indicator, alpha: f64, beta: f64) -> Result<Strength> {
    let ia = indicator
        .ia
        .ok_or_else(|| Error::MissingIa(indicator.ngram.to_string()))?;
    Ok(tier_of(ia, alpha, beta))
}

fn tier_of(ia: f64, alpha: f64, beta: f64) -> Strength {
    if ia + EPS >= beta {
        Strength::Strong
    } else if ia + EPS >= alpha {
        Strength::Medium
    } else {
        Strength::Weak
    }
}

pub fn ia_is_class(strong: usize, medium: usize) -> bool {
    strong >= 1 || medium >= 2
}

pub fn ia_is_counter(strong: usize, medium: usize) -> bool {
    strong == 0 && medium <= 1
}

pub fn percent_is_class(firing: usize) -> bool {
    firing >= 2
}

pub fn percent_is_counter(firing: usize) -> bool {
    firing <= 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub cue: String,
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    pub evidence: Vec<Evidence>,
}

/// Whether a percent/chi-square indicator passes both thresholds.
pub fn fires(indicator: &Indicator, theta1: usize, theta2: f64) -> bool {
    indicator.freq >= theta1 && indicator.pct_class.is_some_and(|p| p + EPS >= theta2)
}

fn matches<'a>(tokens: &[String], indicators: &'a [Indicator]) -> Vec<(&'a Indicator, Vec<usize>)> {
    let mut seen = BTreeSet::new();
    indicators
        .iter()
        .filter(|ind| seen.insert(&ind.ngram))
        .filter_map(|ind| {
            let pos = ind.ngram.positions_in(tokens);
            (!pos.is_empty()).then_some((ind, pos))
        })
        .collect()
}

fn evidence(ind: &Indicator, positions: Vec<usize>) -> Evidence {
    Evidence {
        cue: ind.ngram.to_string(),
        positions,
    }
}

pub fn classify_ia(
    utterance: &Utterance,
    indicators: &[Indicator],
    config: &HpConfig,
) -> Classification {
    let (alpha, beta) = config.tiers();
    let tokens = tokenize(&utterance.response);
    let (mut strong, mut medium) = (0, 0);
    let mut ev = Vec::new();
    for (ind, pos) in matches(&tokens, indicators) {
        if ind.freq < config.theta1 {
            continue;
        }
        let Some(ia) = ind.ia else { continue };
        match tier_of(ia, alpha, beta) {
            Strength::Strong => strong += 1,
            Strength::Medium => medium += 1,
            Strength::Weak => continue,
        }
        ev.push(evidence(ind, pos));
    }
    let label = if ia_is_class(strong, medium) {
        Label::Class
    } else if ia_is_counter(strong, medium) {
        Label::Counter
    } else {
        Label::Abstain
    };
    Classification {
        label,
        evidence: ev,
    }
}

pub fn classify_percent(
    utterance: &Utterance,
    indicators: &[Indicator],
    config: &HpConfig,
) -> Classification {
    let theta2 = config.theta2.unwrap_or(0.0);
    let tokens = tokenize(&utterance.response);
    let ev: Vec<Evidence> = matches(&tokens, indicators)
        .into_iter()
        .filter(|(ind, _)| fires(ind, config.theta1, theta2))
        .map(|(ind, pos)| evidence(ind, pos))
        .collect();
    let label = if percent_is_class(ev.len()) {
        Label::Class
    } else if percent_is_counter(ev.len()) {
        Label::Counter
    } else {
        Label::Abstain
    };
    Classification {
        label,
        evidence: ev,
    }
}

pub fn classify(
    utterance: &Utterance,
    indicators: &[Indicator],
    config: &HpConfig,
) -> Classification {
    match config.regime {
        Regime::Ia => classify_ia(utterance, indicators, config),
        Regime::Percent | Regime::Chi2 => classify_percent(utterance, indicators, config),
    }
}

pub fn classify_corpus(
    corpus: &[Utterance],
    indicators: &[Indicator],
    config: &HpConfig,
) -> Vec<(Utterance, Classification)> {
    corpus
        .par_iter()
        .map(|u| (u.clone(), classify(u, indicators, config)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub theta1: Vec<usize>,
    pub theta2: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

fn hundredths(from: u32, to: u32, step: u32) -> Vec<f64> {
    (from..=to)
        .step_by(step as usize)
        .map(|v| v as f64 / 100.0)
        .collect()
}

impl SweepGrid {
    pub fn standard() -> Self {
        SweepGrid {
            theta1: vec![2, 4, 6, 8, 10],
            theta2: hundredths(55, 100, 5),
            alpha: hundredths(35, 70, 5),
            beta: hundredths(70, 100, 5),
        }
    }

    pub fn configs(&self, regime: Regime) -> Vec<HpConfig> {
        let mut out = Vec::new();
        match regime {
            Regime::Ia => {
                for &b in &self.beta {
                    for &a in &self.alpha {
                        for &t1 in &self.theta1 {
                            out.push(HpConfig::ia(t1, a, b));
                        }
                    }
                }
            }
            Regime::Percent | Regime::Chi2 => {
                for &t1 in &self.theta1 {
                    for &t2 in &self.theta2 {
                        out.push(HpConfig {
                            regime,
                            ..HpConfig::percent(t1, t2)
                        });
                    }
                }
            }
        }
        out
    }
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid::standard()
    }
}

/// Which indicators occur in each utterance, computed once per sweep.
struct MatchTable<'a> {
    indicators: Vec<&'a Indicator>,
    per_utterance: Vec<Vec<usize>>,
}

impl<'a> MatchTable<'a> {
    fn build(utterances: &[&Utterance], indicators: &'a [Indicator]) -> Self {
        let mut index: HashMap<&Ngram, usize> = HashMap::new();
        let mut unique = Vec::new();
        for ind in indicators {
            index.entry(&ind.ngram).or_insert_with(|| {
                unique.push(ind);
                unique.len() - 1
            });
        }
        let per_utterance = utterances
            .par_iter()
            .map(|u| {
                let grams: BTreeSet<Ngram> = extract_ngrams(&tokenize(&u.response), Ngram::MAX_LEN)
                    .into_iter()
                    .collect();
                let mut hit: Vec<usize> =
                    grams.iter().filter_map(|g| index.get(g).copied()).collect();
                hit.sort_unstable();
                hit
            })
            .collect();
        MatchTable {
            indicators: unique,
            per_utterance,
        }
    }

    fn label(&self, hits: &[usize], config: &HpConfig) -> Label {
        match config.regime {
            Regime::Ia => {
                let (alpha, beta) = config.tiers();
                let (mut strong, mut medium) = (0, 0);
                for &i in hits {
                    let ind = self.indicators[i];
                    if ind.freq < config.theta1 {
                        continue;
                    }
                    match ind.ia.map(|ia| tier_of(ia, alpha, beta)) {
                        Some(Strength::Strong) => strong += 1,
                        Some(Strength::Medium) => medium += 1,
                        _ => {}
                    }
                }
                if ia_is_class(strong, medium) {
                    Label::Class
                } else {
                    Label::Counter
                }
            }
            Regime::Percent | Regime::Chi2 => {
                let theta2 = config.theta2.unwrap_or(0.0);
                let firing = hits
                    .iter()
                    .filter(|&&i| fires(self.indicators[i], config.theta1, theta2))
                    .count();
                if percent_is_class(firing) {
                    Label::Class
                } else {
                    Label::Counter
                }
            }
        }
    }
}

/// Scores every grid combination of `regime` on `train`.
pub fn sweep(
    train: &[LabeledUtterance],
    indicators: &[Indicator],
    regime: Regime,
    grid: &SweepGrid,
) -> Vec<SweepResult<HpConfig>> {
    let scored: Vec<&LabeledUtterance> =
        train.iter().filter(|l| l.label != Label::Abstain).collect();
    let utterances: Vec<&Utterance> = scored.iter().map(|l| &l.utterance).collect();
    let gold: Vec<Label> = scored.iter().map(|l| l.label).collect();
    let table = MatchTable::build(&utterances, indicators);
    grid.configs(regime)
        .into_par_iter()
        .map(|config| {
            let predicted: Vec<Label> = table
                .per_utterance
                .iter()
                .map(|h| table.label(h, &config))
                .collect();
            SweepResult::new(config, &Metrics::from_labels(&predicted, &gold))
        })
        .collect()
}
