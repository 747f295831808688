use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use super::tokenize::{extract_ngrams, tokenize, Ngram};
use super::{Indicator, IndicatorSource};
use crate::corpus::{Label, LabeledUtterance};
use crate::error::{Error, Result};

/// Utterance-level 2x2 presence table for one n-gram.
///
/// `a`: class utterances containing it, `b`: counter utterances containing
/// it, `c`/`d`: class/counter utterances without it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Contingency {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Contingency {
    /// Pearson chi-square without continuity correction; 0 when any
    /// marginal is empty.
    pub fn chi2(&self) -> f64 {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        let denom = (a + b) * (c + d) * (a + c) * (b + d);
        if denom == 0.0 {
            return 0.0;
        }
        let n = a + b + c + d;
        let diff = a * d - b * c;
        n * diff * diff / denom
    }

    pub fn freq(&self) -> u64 {
        self.a + self.b
    }

    pub fn pct_class(&self) -> f64 {
        if self.freq() == 0 {
            0.0
        } else {
            self.a as f64 / self.freq() as f64
        }
    }
}

pub fn contingency(ngram: &Ngram, labeled: &[LabeledUtterance]) -> Contingency {
    let mut t = Contingency::default();
    for l in labeled {
        let present = !ngram
            .positions_in(&tokenize(&l.utterance.response))
            .is_empty();
        match (l.label, present) {
            (Label::Class, true) => t.a += 1,
            (Label::Counter, true) => t.b += 1,
            (Label::Class, false) => t.c += 1,
            (Label::Counter, false) => t.d += 1,
            (Label::Abstain, _) => {}
        }
    }
    t
}

pub fn chi2_score(ngram: &Ngram, labeled: &[LabeledUtterance]) -> Result<f64> {
    if labeled.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(contingency(ngram, labeled).chi2())
}

/// Ranks every n-gram of the labeled set by chi-square and keeps the best
/// `top_k` of each order. Ties go to the more frequent n-gram, then to the
/// lexicographically smaller one.
pub fn select_chi2_indicators(
    labeled: &[LabeledUtterance],
    min_freq: usize,
    top_k: usize,
) -> Result<Vec<Indicator>> {
    if labeled.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts: BTreeMap<Ngram, (u64, u64)> = BTreeMap::new();
    let (mut n_class, mut n_counter) = (0u64, 0u64);
    for l in labeled {
        let is_class = match l.label {
            Label::Class => true,
            Label::Counter => false,
            Label::Abstain => continue,
        };
        if is_class {
            n_class += 1;
        } else {
            n_counter += 1;
        }
        let grams: HashSet<Ngram> =
            extract_ngrams(&tokenize(&l.utterance.response), Ngram::MAX_LEN)
                .into_iter()
                .collect();
        for g in grams {
            let e = counts.entry(g).or_default();
            if is_class {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }

    let mut by_order: BTreeMap<usize, Vec<(Ngram, Contingency, f64)>> = BTreeMap::new();
    for (g, (a, b)) in counts {
        if ((a + b) as usize) < min_freq {
            continue;
        }
        let t = Contingency {
            a,
            b,
            c: n_class - a,
            d: n_counter - b,
        };
        let score = t.chi2();
        by_order.entry(g.len()).or_default().push((g, t, score));
    }

    let mut out = Vec::new();
    for (_, mut ranked) in by_order {
        ranked.sort_by(|x, y| {
            y.2.partial_cmp(&x.2)
                .unwrap_or(Ordering::Equal)
                .then(y.1.freq().cmp(&x.1.freq()))
                .then_with(|| x.0.cmp(&y.0))
        });
        out.extend(
            ranked
                .into_iter()
                .take(top_k)
                .map(|(g, t, score)| Indicator {
                    ngram: g,
                    source: IndicatorSource::Chi2,
                    freq: t.freq() as usize,
                    ia: None,
                    pct_class: Some(t.pct_class()),
                    chi2: Some(score),
                }),
        );
    }
    Ok(out)
}
