//! Lexical cue indicators: chi-square selection, crowd-annotation
//! aggregation and the interannotator-agreement curve.

mod chi2;
mod ita;
mod mt;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use chi2::{chi2_score, contingency, select_chi2_indicators, Contingency};
pub use ita::{ita_curve, pearson, ItaPoint};
pub use mt::aggregate_mt_indicators;
pub use tokenize::{extract_ngrams, tokenize, tokenize_with_offsets, Ngram, Token};

use crate::corpus::{Label, LabeledUtterance};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndicatorSource {
    #[serde(rename = "MT")]
    Mt,
    #[serde(rename = "CHI2")]
    Chi2,
}

impl fmt::Display for IndicatorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndicatorSource::Mt => "MT",
            IndicatorSource::Chi2 => "CHI2",
        })
    }
}

impl FromStr for IndicatorSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MT" => Ok(IndicatorSource::Mt),
            "CHI2" => Ok(IndicatorSource::Chi2),
            _ => Err(Error::InvalidConfig(format!(
                "unknown indicator source {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Indicator {
    pub ngram: Ngram,
    pub source: IndicatorSource,
    /// Number of utterances containing the n-gram.
    pub freq: usize,
    /// Interannotator agreement; MT indicators only.
    pub ia: Option<f64>,
    /// Fraction of containing utterances in the target class.
    pub pct_class: Option<f64>,
    /// Chi-square indicators only.
    pub chi2: Option<f64>,
}

/// Replaces `freq` and `pct_class` with counts over `labeled`, dropping
/// indicators that never occur there. IA and chi-square are kept as is.
pub fn recompute_statistics(
    indicators: &[Indicator],
    labeled: &[LabeledUtterance],
) -> Vec<Indicator> {
    let docs: Vec<(Vec<String>, bool)> = labeled
        .iter()
        .filter(|l| l.label != Label::Abstain)
        .map(|l| (tokenize(&l.utterance.response), l.label == Label::Class))
        .collect();
    indicators
        .iter()
        .filter_map(|ind| {
            let (mut freq, mut class) = (0usize, 0usize);
            for (toks, is_class) in &docs {
                if !ind.ngram.positions_in(toks).is_empty() {
                    freq += 1;
                    class += usize::from(*is_class);
                }
            }
            (freq > 0).then(|| Indicator {
                freq,
                pct_class: Some(class as f64 / freq as f64),
                ..ind.clone()
            })
        })
        .collect()
}

pub const TSV_HEADER: &str = "ngram\tsource\tfreq\tia\tpct_class\tchi2";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn indicators_to_tsv(indicators: &[Indicator]) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for i in indicators {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            i.ngram,
            i.source,
            i.freq,
            opt(i.ia),
            opt(i.pct_class),
            opt(i.chi2)
        ));
    }
    out
}

pub fn indicators_from_tsv(tsv: &str) -> Result<Vec<Indicator>> {
    let mut out = Vec::new();
    for (idx, line) in tsv.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || (idx == 0 && line == TSV_HEADER) {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| err(format!("bad number {s:?}")))
            }
        };
        let ind = Indicator {
            ngram: fields[0].parse().map_err(|e: Error| err(e.to_string()))?,
            source: fields[1].parse().map_err(|e: Error| err(e.to_string()))?,
            freq: fields[2]
                .parse()
                .map_err(|_| err(format!("bad freq {:?}", fields[2])))?,
            ia: num(fields[3])?,
            pct_class: num(fields[4])?,
            chi2: num(fields[5])?,
        };
        if ind.freq == 0 {
            return Err(err("freq must be at least 1".into()));
        }
        if ind.ia.is_some_and(|v| !(0.0..=1.0).contains(&v))
            || ind.pct_class.is_some_and(|v| !(0.0..=1.0).contains(&v))
        {
            return Err(err("fraction outside [0, 1]".into()));
        }
        out.push(ind);
    }
    Ok(out)
}
