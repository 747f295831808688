use std::collections::{BTreeSet, HashSet};

use cuestrap::bootstrap::PatternClassifier;
use cuestrap::corpus::{
    make_splits, Label, LabeledUtterance, SplitName, SplitSpec, Task, Utterance,
};
use cuestrap::hp::{
    classify, classify_corpus, ia_is_class, ia_is_counter, percent_is_class, percent_is_counter,
    sweep, HpConfig, Regime, SweepGrid,
};
use cuestrap::indicators::{chi2_score, Indicator, IndicatorSource, Ngram};
use cuestrap::metrics::{evaluate, Metrics, SweepResult};
use cuestrap::pattern::{
    learn_patterns, ExtractionPattern, PatternConfig, PatternExtractor, PatternKey, PatternTemplate,
};
use proptest::prelude::*;

const VOCAB: [&str; 10] = [
    "oh", "right", "sure", "the", "cat", "we", "so", "really", "yeah", "no",
];

fn text(ids: &[usize]) -> String {
    ids.iter().map(|&i| VOCAB[i]).collect::<Vec<_>>().join(" ")
}

fn ngram(ids: &[usize]) -> Ngram {
    text(ids).parse().unwrap()
}

fn labeled(i: usize, ids: &[usize], class: bool) -> LabeledUtterance {
    LabeledUtterance {
        utterance: Utterance::new(format!("u{i}"), text(ids)),
        label: if class { Label::Class } else { Label::Counter },
        task: Task::Sarcasm,
        mean_score: 0.0,
    }
}

fn corpus_strategy() -> impl Strategy<Value = Vec<(Vec<usize>, bool)>> {
    prop::collection::vec(
        (
            prop::collection::vec(0usize..VOCAB.len(), 1..8),
            any::<bool>(),
        ),
        1..25,
    )
}

fn indicator_strategy() -> impl Strategy<Value = Vec<Indicator>> {
    prop::collection::vec(
        (
            prop::collection::vec(0usize..VOCAB.len(), 1..3),
            1usize..12,
            0u32..=20,
            0u32..=20,
        ),
        0..10,
    )
    .prop_map(|raw| {
        raw.into_iter()
            .map(|(ids, freq, pct, ia)| Indicator {
                ngram: ngram(&ids),
                source: IndicatorSource::Mt,
                freq,
                ia: Some(ia as f64 / 20.0),
                pct_class: Some(pct as f64 / 20.0),
                chi2: None,
            })
            .collect()
    })
}

fn grid_value() -> impl Strategy<Value = f64> {
    (11u32..=20).prop_map(|v| v as f64 / 20.0)
}

fn class_set(utts: &[Utterance], inds: &[Indicator], cfg: &HpConfig) -> HashSet<String> {
    utts.iter()
        .filter(|u| classify(u, inds, cfg).label == Label::Class)
        .map(|u| u.id.clone())
        .collect()
}

fn to_labeled(raw: &[(Vec<usize>, bool)]) -> Vec<LabeledUtterance> {
    raw.iter()
        .enumerate()
        .map(|(i, (ids, c))| labeled(i, ids, *c))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn percent_class_set_shrinks_as_thresholds_rise(
        raw in corpus_strategy(),
        inds in indicator_strategy(),
        t1 in 1usize..10, dt1 in 0usize..5,
        t2 in grid_value(), dt2 in 0u32..5,
    ) {
        let utts: Vec<Utterance> = to_labeled(&raw).into_iter().map(|l| l.utterance).collect();
        let base = class_set(&utts, &inds, &HpConfig::percent(t1, t2));
        let hi2 = (t2 + dt2 as f64 * 0.05).min(1.0);
        let raised2 = class_set(&utts, &inds, &HpConfig::percent(t1, hi2));
        let raised1 = class_set(&utts, &inds, &HpConfig::percent(t1 + dt1, t2));
        prop_assert!(raised2.is_subset(&base));
        prop_assert!(raised1.is_subset(&base));
    }

    #[test]
    fn pattern_class_set_shrinks_as_thresholds_rise(
        stats in prop::collection::vec((0usize..13, 0usize..6, 1usize..12, 0u32..=20), 0..20),
        docs in prop::collection::vec(prop::collection::btree_set((0usize..13, 0usize..6), 0..6), 1..20),
        t1 in 1usize..10, dt1 in 0usize..5,
        t2 in grid_value(), dt2 in 0u32..5,
    ) {
        let key = |t: usize, f: usize| PatternKey { template: PatternTemplate::ALL[t], fill: format!("w{f}") };
        let mut seen = BTreeSet::new();
        let patterns: Vec<ExtractionPattern> = stats
            .into_iter()
            .filter(|(t, f, _, _)| seen.insert((*t, *f)))
            .map(|(t, f, freq, pct)| ExtractionPattern {
                template: PatternTemplate::ALL[t],
                fill: format!("w{f}"),
                freq,
                pct_class: pct as f64 / 20.0,
            })
            .collect();
        let sets: Vec<BTreeSet<PatternKey>> = docs
            .into_iter()
            .map(|d| d.into_iter().map(|(t, f)| key(t, f)).collect())
            .collect();
        let positives = |config: PatternConfig| -> Vec<bool> {
            let c = PatternClassifier { patterns: patterns.clone(), config };
            sets.iter().map(|s| c.label_set(s) == Label::Class).collect()
        };
        let base = positives(PatternConfig::new(t1, t2));
        let raised = [
            positives(PatternConfig::new(t1 + dt1, t2)),
            positives(PatternConfig::new(t1, (t2 + dt2 as f64 * 0.05).min(1.0))),
        ];
        for r in raised {
            for (hi, lo) in r.iter().zip(&base) {
                prop_assert!(!hi || *lo);
            }
        }
    }

    #[test]
    fn rules_are_exclusive_and_exhaustive(strong in 0usize..50, medium in 0usize..50, firing in 0usize..50) {
        prop_assert!(ia_is_class(strong, medium) != ia_is_counter(strong, medium));
        prop_assert!(percent_is_class(firing) != percent_is_counter(firing));
    }

    #[test]
    fn ia_classifier_never_abstains(
        raw in corpus_strategy(),
        inds in indicator_strategy(),
        t1 in 1usize..10, a in 7u32..=14, b in 14u32..=20,
    ) {
        let cfg = HpConfig::ia(t1, a as f64 / 20.0, b as f64 / 20.0);
        for l in to_labeled(&raw) {
            prop_assert_ne!(classify(&l.utterance, &inds, &cfg).label, Label::Abstain);
        }
    }

    #[test]
    fn splits_are_disjoint_with_exact_counts(
        n_class in 0usize..40, n_counter in 0usize..40,
        sizes in prop::collection::vec((0usize..10, prop::option::of(0usize..10)), 1..4),
        seed in any::<u64>(),
    ) {
        let raw: Vec<(Vec<usize>, bool)> = (0..n_class + n_counter).map(|i| (vec![i % VOCAB.len()], i < n_class)).collect();
        let data = to_labeled(&raw);
        let specs: Vec<SplitSpec> = sizes
            .iter()
            .zip(SplitName::ALL)
            .map(|(&(c, k), name)| SplitSpec::new(name, c, k))
            .collect();
        let need_class: usize = specs.iter().map(|s| s.class_count).sum();
        let need_counter: usize = specs.iter().map(|s| s.counter_count.unwrap_or(0)).sum();
        match make_splits(&data, &specs, seed) {
            Ok(splits) => {
                prop_assert!(need_class <= n_class && need_counter <= n_counter);
                let mut all = HashSet::new();
                for (s, spec) in splits.iter().zip(&specs) {
                    prop_assert_eq!(s.members.len(), spec.total());
                    for m in &s.members {
                        prop_assert!(all.insert(m.clone()));
                    }
                }
                prop_assert_eq!(make_splits(&data, &specs, seed).unwrap(), splits);
            }
            Err(_) => prop_assert!(need_class > n_class || need_counter > n_counter),
        }
    }

    #[test]
    fn chi2_is_symmetric_under_label_swap(raw in corpus_strategy(), g in prop::collection::vec(0usize..VOCAB.len(), 1..3)) {
        let data = to_labeled(&raw);
        let swapped: Vec<LabeledUtterance> = raw.iter().enumerate().map(|(i, (ids, c))| labeled(i, ids, !c)).collect();
        let x = chi2_score(&ngram(&g), &data).unwrap();
        let y = chi2_score(&ngram(&g), &swapped).unwrap();
        prop_assert!(x >= 0.0);
        prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
    }

    #[test]
    fn sweep_results_are_internally_consistent(raw in corpus_strategy(), inds in indicator_strategy()) {
        let data = to_labeled(&raw);
        let grid = SweepGrid { theta1: vec![1, 3], theta2: vec![0.55, 0.8], alpha: vec![0.4], beta: vec![0.8] };
        for regime in [Regime::Percent, Regime::Ia] {
            for r in sweep(&data, &inds, regime, &grid) {
                let f = if r.precision + r.recall > 0.0 { 2.0 * r.precision * r.recall / (r.precision + r.recall) } else { 0.0 };
                prop_assert!((r.f1 - f).abs() <= 1e-12);
                prop_assert!(r.true_positives <= r.predicted_positives);
                if r.predicted_positives > 0 {
                    prop_assert!((r.precision * r.predicted_positives as f64 - r.true_positives as f64).abs() < 1e-9);
                }
                if r.gold_positives > 0 {
                    prop_assert!((r.recall * r.gold_positives as f64 - r.true_positives as f64).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn evaluate_count_identities(pairs in prop::collection::vec((0u8..3, any::<bool>()), 0..40)) {
        let gold: Vec<LabeledUtterance> = pairs.iter().enumerate().map(|(i, (_, g))| labeled(i, &[0], *g)).collect();
        let preds: Vec<(String, Label)> = pairs
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (format!("u{i}"), [Label::Class, Label::Counter, Label::Abstain][*p as usize]))
            .collect();
        let m: Metrics = evaluate(&preds, &gold).unwrap();
        let predicted = preds.iter().filter(|(_, l)| *l == Label::Class).count();
        let positives = gold.iter().filter(|g| g.label == Label::Class).count();
        prop_assert_eq!(m.tp + m.fp, predicted);
        prop_assert_eq!(m.tp + m.fn_, positives);
        prop_assert_eq!(m.total(), pairs.len());
        let r = SweepResult::new((), &m);
        prop_assert_eq!(r.true_positives, m.tp);
    }

    #[test]
    fn classification_is_order_independent(raw in corpus_strategy(), inds in indicator_strategy(), rot in 0usize..25) {
        let data = to_labeled(&raw);
        let utts: Vec<Utterance> = data.iter().map(|l| l.utterance.clone()).collect();
        let mut rotated = utts.clone();
        let k = rot % rotated.len();
        rotated.rotate_left(k);
        let cfg = HpConfig::percent(2, 0.6);
        let mut a = classify_corpus(&utts, &inds, &cfg);
        let mut b = classify_corpus(&rotated, &inds, &cfg);
        a.sort_by(|x, y| x.0.id.cmp(&y.0.id));
        b.sort_by(|x, y| x.0.id.cmp(&y.0.id));
        prop_assert_eq!(a, b);

        let mut rdata = data.clone();
        rdata.rotate_left(k);
        let grid = SweepGrid { theta1: vec![1, 2], theta2: vec![0.55, 0.9], alpha: vec![], beta: vec![] };
        prop_assert_eq!(sweep(&data, &inds, Regime::Percent, &grid), sweep(&rdata, &inds, Regime::Percent, &grid));
    }
}

const PHRASES: [&str; 6] = [
    "It was explained to you.",
    "You are looking for trouble.",
    "We read the report.",
    "They want to take the money.",
    "The plan is fine.",
    "I have to do it.",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lower_thresholds_learn_a_superset(
        docs in prop::collection::vec((prop::collection::vec(0usize..PHRASES.len(), 1..4), any::<bool>()), 1..20),
        t1 in 1usize..5, dt1 in 0usize..3, t2 in grid_value(), dt2 in 0u32..4,
    ) {
        let ex = PatternExtractor::new();
        let classified: Vec<(Utterance, Label)> = docs
            .iter()
            .enumerate()
            .map(|(i, (ps, c))| {
                let t: Vec<&str> = ps.iter().map(|&p| PHRASES[p]).collect();
                (Utterance::new(format!("d{i}"), t.join(" ")), if *c { Label::Class } else { Label::Counter })
            })
            .collect();
        let lo = learn_patterns(&ex, &classified, &PatternConfig::new(t1, t2)).unwrap();
        let hi = learn_patterns(&ex, &classified, &PatternConfig::new(t1 + dt1, (t2 + dt2 as f64 * 0.05).min(1.0))).unwrap();
        let lo_keys: BTreeSet<PatternKey> = lo.iter().map(|p| p.key()).collect();
        for p in &hi {
            prop_assert!(lo_keys.contains(&p.key()));
        }
    }
}
