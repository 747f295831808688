//! Precision/recall bookkeeping shared by every classifier stage.
//!
//! `Class` is the positive label. Abstentions count as negative predictions,
//! so an abstention on a gold-class utterance is a false negative.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Label, LabeledUtterance};
use crate::error::{Error, Result};

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Metrics {
    /// Undefined precision or recall is reported as 0.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        let precision = if tp + fp > 0 {
            tp as f64 / (tp + fp) as f64
        } else {
            0.0
        };
        let recall = if tp + fn_ > 0 {
            tp as f64 / (tp + fn_) as f64
        } else {
            0.0
        };
        Metrics {
            precision,
            recall,
            f1: f1(precision, recall),
            tp,
            fp,
            fn_,
            tn,
        }
    }

    /// Pairs up predicted and gold labels position by position.
    pub fn from_labels(predicted: &[Label], gold: &[Label]) -> Self {
        let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
        for (p, g) in predicted.iter().zip(gold) {
            match (p.is_class(), g.is_class()) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => tn += 1,
            }
        }
        Metrics::from_counts(tp, fp, fn_, tn)
    }

    pub fn predicted_positives(&self) -> usize {
        self.tp + self.fp
    }

    pub fn gold_positives(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

/// Scores predictions keyed by utterance id against gold labels.
pub fn evaluate(predictions: &[(String, Label)], gold: &[LabeledUtterance]) -> Result<Metrics> {
    let gold: HashMap<&str, Label> = gold.iter().map(|g| (g.id(), g.label)).collect();
    let mut pred = Vec::with_capacity(predictions.len());
    let mut truth = Vec::with_capacity(predictions.len());
    for (id, label) in predictions {
        let g = gold
            .get(id.as_str())
            .ok_or_else(|| Error::MissingGold(id.clone()))?;
        pred.push(*label);
        truth.push(*g);
    }
    Ok(Metrics::from_labels(&pred, &truth))
}

/// A parameter combination that can be swept and ranked.
pub trait SweepParams: Clone {
    /// Parameter values in their canonical order, for deterministic
    /// tie-breaking.
    fn sort_key(&self) -> Vec<f64>;
    /// Short regime label for reports (`%`, `IA`, `chi2`, `pattern`).
    fn regime_label(&self) -> String;
    /// Compact `name=value` listing for reports.
    fn describe(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult<C> {
    pub config: C,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub true_positives: usize,
    pub predicted_positives: usize,
    pub gold_positives: usize,
}

impl<C> SweepResult<C> {
    pub fn new(config: C, m: &Metrics) -> Self {
        SweepResult {
            config,
            precision: m.precision,
            recall: m.recall,
            f1: m.f1,
            true_positives: m.tp,
            predicted_positives: m.predicted_positives(),
            gold_positives: m.gold_positives(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionPolicy {
    pub min_recall: f64,
}

impl Default for SelectionPolicy {
    fn default() -> Self {
        SelectionPolicy { min_recall: 0.3 }
    }
}

fn cmp_keys(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Best-first ordering: F1, then precision, then recall, all descending,
/// then parameters ascending.
pub fn rank_order<C: SweepParams>(a: &SweepResult<C>, b: &SweepResult<C>) -> Ordering {
    b.f1.partial_cmp(&a.f1)
        .unwrap_or(Ordering::Equal)
        .then(
            b.precision
                .partial_cmp(&a.precision)
                .unwrap_or(Ordering::Equal),
        )
        .then(b.recall.partial_cmp(&a.recall).unwrap_or(Ordering::Equal))
        .then_with(|| cmp_keys(&a.config.sort_key(), &b.config.sort_key()))
}

/// Highest-F1 configuration among those meeting the recall floor.
pub fn select_best<C: SweepParams>(
    results: &[SweepResult<C>],
    policy: SelectionPolicy,
) -> Result<C> {
    results
        .iter()
        .filter(|r| r.recall + 1e-12 >= policy.min_recall)
        .min_by(|a, b| rank_order(a, b))
        .map(|r| r.config.clone())
        .ok_or(Error::NoFeasibleConfig {
            min_recall: policy.min_recall,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Task, Utterance};

    #[derive(Clone, Debug, PartialEq)]
    struct P(u32, f64);

    impl SweepParams for P {
        fn sort_key(&self) -> Vec<f64> {
            vec![self.0 as f64, self.1]
        }
        fn regime_label(&self) -> String {
            "t".into()
        }
        fn describe(&self) -> String {
            format!("{},{}", self.0, self.1)
        }
    }

    fn res(p: P, precision: f64, recall: f64) -> SweepResult<P> {
        SweepResult {
            config: p,
            precision,
            recall,
            f1: f1(precision, recall),
            true_positives: 0,
            predicted_positives: 0,
            gold_positives: 0,
        }
    }

    #[test]
    fn reference_row_arithmetic() {
        // 616 true positives among 770 predicted and 1616 gold positives.
        let m = Metrics::from_counts(616, 154, 1000, 1462);
        assert!((m.precision - 0.80).abs() < 1e-12);
        assert!((m.recall - 616.0 / 1616.0).abs() < 1e-12);
        assert_eq!((m.recall * 100.0).round(), 38.0);
    }

    #[test]
    fn all_abstain_and_perfect() {
        let gold = [Label::Class, Label::Counter, Label::Class];
        let m = Metrics::from_labels(&[Label::Abstain; 3], &gold);
        assert_eq!((m.precision, m.recall, m.f1), (0.0, 0.0, 0.0));
        assert_eq!(m.fn_, 2);
        let m = Metrics::from_labels(&[Label::Class, Label::Counter, Label::Class], &gold);
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn evaluate_requires_gold() {
        let gold = vec![LabeledUtterance {
            utterance: Utterance::new("a", "x"),
            label: Label::Class,
            task: Task::Sarcasm,
            mean_score: 1.0,
        }];
        let preds = vec![
            ("a".to_string(), Label::Class),
            ("b".to_string(), Label::Counter),
        ];
        assert!(matches!(evaluate(&preds, &gold), Err(Error::MissingGold(id)) if id == "b"));
        let m = evaluate(&preds[..1], &gold).unwrap();
        assert_eq!(m.tp, 1);
    }

    #[test]
    fn selection_respects_recall_floor_and_ties() {
        let results = vec![
            res(P(4, 0.75), 0.92, 0.01),
            res(P(4, 0.55), 0.62, 0.55),
            res(P(4, 0.60), 0.72, 0.32),
            res(P(2, 0.55), 0.62, 0.55),
        ];
        let best = select_best(&results, SelectionPolicy { min_recall: 0.3 }).unwrap();
        assert_eq!(best, P(2, 0.55));
        let best = select_best(&results, SelectionPolicy { min_recall: 0.0 }).unwrap();
        assert_eq!(best, P(2, 0.55));
        assert!(matches!(
            select_best(&results, SelectionPolicy { min_recall: 0.9 }),
            Err(Error::NoFeasibleConfig { .. })
        ));
        let single = vec![res(P(8, 0.8), 0.98, 0.03)];
        assert_eq!(
            select_best(&single, SelectionPolicy { min_recall: 0.0 }).unwrap(),
            P(8, 0.8)
        );
    }
}
