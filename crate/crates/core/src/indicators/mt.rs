use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::tokenize::{extract_ngrams, tokenize_with_offsets, Ngram};
use super::{Indicator, IndicatorSource};
use crate::corpus::{IndicatorAnnotation, Utterance};
use crate::error::{Error, Result};

/// Token index range `[first, last)` overlapped by a character span.
pub(crate) fn covered_tokens(
    offsets: &[(usize, usize)],
    start: usize,
    end: usize,
) -> (usize, usize) {
    let first = offsets.iter().position(|&(s, e)| e > start && s < end);
    match first {
        None => (0, 0),
        Some(first) => {
            let last = offsets[first..]
                .iter()
                .take_while(|&&(s, _)| s < end)
                .count();
            (first, first + last)
        }
    }
}

/// Per-utterance tokens plus, for each annotator, the n-grams their spans cover.
pub(crate) struct AnnotatedUtterance {
    pub tokens: Vec<String>,
    pub selections: BTreeMap<String, Vec<Ngram>>,
}

pub(crate) fn index_spans<'a>(
    utterances: &'a [Utterance],
    spans: &[IndicatorAnnotation],
) -> Result<BTreeMap<&'a str, AnnotatedUtterance>> {
    let mut out: BTreeMap<&str, AnnotatedUtterance> = BTreeMap::new();
    let mut offsets: HashMap<&str, Vec<(usize, usize)>> = HashMap::new();
    for u in utterances {
        let toks = tokenize_with_offsets(&u.response);
        offsets.insert(&u.id, toks.iter().map(|t| (t.start, t.end)).collect());
        out.insert(
            &u.id,
            AnnotatedUtterance {
                tokens: toks.into_iter().map(|t| t.text).collect(),
                selections: BTreeMap::new(),
            },
        );
    }
    for span in spans {
        let entry = out
            .get_mut(span.utterance_id.as_str())
            .ok_or_else(|| Error::DanglingReference(span.utterance_id.clone()))?;
        let (first, last) =
            covered_tokens(&offsets[span.utterance_id.as_str()], span.start, span.end);
        let grams = extract_ngrams(&entry.tokens[first..last], Ngram::MAX_LEN);
        entry
            .selections
            .entry(span.annotator_id.clone())
            .or_default()
            .extend(grams);
    }
    Ok(out)
}

/// Pools human indicator selections into MT indicators.
///
/// Every n-gram covered by at least one span is a candidate. FREQ counts the
/// utterances of the set containing it; IA divides the annotators who
/// selected it by the annotators who saw it, pooled over those utterances.
/// An utterance's exposure count is the larger of `annotators_per_utterance`
/// and the number of distinct annotators with spans on it (0 if neither is
/// known).
pub fn aggregate_mt_indicators(
    utterances: &[Utterance],
    spans: &[IndicatorAnnotation],
    annotators_per_utterance: &BTreeMap<String, usize>,
) -> Result<Vec<Indicator>> {
    let indexed = index_spans(utterances, spans)?;

    let candidates: BTreeSet<&Ngram> = indexed
        .values()
        .flat_map(|u| u.selections.values().flatten())
        .collect();

    let mut stats: BTreeMap<&Ngram, (usize, usize, usize)> =
        candidates.iter().map(|g| (*g, (0, 0, 0))).collect();
    for (id, u) in &indexed {
        let exposed = annotators_per_utterance
            .get(*id)
            .copied()
            .unwrap_or(0)
            .max(u.selections.len());
        let present: HashSet<Ngram> = extract_ngrams(&u.tokens, Ngram::MAX_LEN)
            .into_iter()
            .collect();
        let mut selectors: HashMap<&Ngram, usize> = HashMap::new();
        for grams in u.selections.values() {
            let distinct: HashSet<&Ngram> = grams.iter().collect();
            for g in distinct {
                *selectors.entry(g).or_default() += 1;
            }
        }
        for g in &present {
            if let Some(s) = stats.get_mut(g) {
                s.0 += 1;
                s.1 += selectors.get(g).copied().unwrap_or(0);
                s.2 += exposed;
            }
        }
    }

    let mut out: Vec<Indicator> = stats
        .into_iter()
        .filter(|(_, (freq, _, exposed))| *freq > 0 && *exposed > 0)
        .map(|(g, (freq, selected, exposed))| Indicator {
            ngram: g.clone(),
            source: IndicatorSource::Mt,
            freq,
            ia: Some(selected as f64 / exposed as f64),
            pct_class: None,
            chi2: None,
        })
        .collect();
    out.sort_by(|x, y| {
        x.ngram
            .len()
            .cmp(&y.ngram.len())
            .then(y.ia.partial_cmp(&x.ia).unwrap_or(std::cmp::Ordering::Equal))
            .then(y.freq.cmp(&x.freq))
            .then_with(|| x.ngram.cmp(&y.ngram))
    });
    Ok(out)
}
