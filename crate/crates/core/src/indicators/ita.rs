use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mt::index_spans;
use super::tokenize::{extract_ngrams, Ngram};
use crate::corpus::{IndicatorAnnotation, Utterance};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItaPoint {
    pub k: usize,
    pub mean_correlation: f64,
}

/// Pearson correlation, `None` when either vector is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn mean_pairwise(vectors: &[Vec<f64>]) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            if let Some(r) = pearson(&vectors[i], &vectors[j]) {
                sum += r;
                n += 1;
            }
        }
    }
    (n > 0).then(|| sum / n as f64)
}

/// Interannotator agreement as a function of annotator count.
///
/// For each `k`, every resample draws `k` annotators per utterance (without
/// replacement) into slots `0..k`, accumulates each slot's selection counts
/// over the n-gram vocabulary of the responses, and averages all pairwise
/// Pearson correlations between slots. Pairs involving a constant vector are
/// skipped. The point is the mean over resamples.
pub fn ita_curve(
    spans: &[IndicatorAnnotation],
    utterances: &[Utterance],
    k_values: &[usize],
    resamples: usize,
    seed: u64,
) -> Result<Vec<ItaPoint>> {
    if resamples == 0 {
        return Err(Error::InvalidConfig("resamples must be at least 1".into()));
    }
    if let Some(&k) = k_values.iter().find(|&&k| k < 2) {
        return Err(Error::InvalidConfig(format!(
            "annotator count {k} is below 2"
        )));
    }
    let indexed = index_spans(utterances, spans)?;
    let max_k = k_values.iter().copied().max().unwrap_or(0);

    let mut vocab: BTreeMap<Ngram, usize> = BTreeMap::new();
    for u in indexed.values() {
        for g in extract_ngrams(&u.tokens, Ngram::MAX_LEN) {
            vocab.entry(g).or_insert(0);
        }
    }
    for (i, v) in vocab.values_mut().enumerate() {
        *v = i;
    }

    // Per utterance: one sparse count vector per annotator.
    let mut pools: Vec<Vec<Vec<usize>>> = Vec::with_capacity(indexed.len());
    for (id, u) in &indexed {
        if u.selections.len() < max_k {
            return Err(Error::InsufficientAnnotators {
                id: id.to_string(),
                available: u.selections.len(),
                required: max_k,
            });
        }
        pools.push(
            u.selections
                .values()
                .map(|grams| grams.iter().map(|g| vocab[g]).collect())
                .collect(),
        );
    }

    let dim = vocab.len();
    k_values
        .iter()
        .map(|&k| {
            let per_resample: Vec<Option<f64>> = (0..resamples)
                .into_par_iter()
                .map(|r| {
                    let stream = (k as u64) << 32 | r as u64;
                    let mut rng = ChaCha8Rng::seed_from_u64(
                        seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15),
                    );
                    let mut slots = vec![vec![0.0; dim]; k];
                    for pool in &pools {
                        for (slot, pick) in sample(&mut rng, pool.len(), k).into_iter().enumerate()
                        {
                            for &g in &pool[pick] {
                                slots[slot][g] += 1.0;
                            }
                        }
                    }
                    mean_pairwise(&slots)
                })
                .collect();
            let defined: Vec<f64> = per_resample.into_iter().flatten().collect();
            let mean = if defined.is_empty() {
                0.0
            } else {
                defined.iter().sum::<f64>() / defined.len() as f64
            };
            Ok(ItaPoint {
                k,
                mean_correlation: mean,
            })
        })
        .collect()
}
