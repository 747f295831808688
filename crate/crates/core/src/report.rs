//! Sweep, metrics and classification reports as TSV and aligned text.

use std::fmt::Write;

use crate::corpus::{Label, Utterance};
use crate::metrics::{rank_order, Metrics, SweepParams, SweepResult};

pub const SWEEP_HEADER: [&str; 8] = ["regime", "params", "P", "R", "F", "tp", "predicted", "gold"];
pub const METRICS_HEADER: [&str; 9] = ["stage", "P", "R", "F", "tp", "fp", "fn", "tn", "n"];

fn fixed(x: f64) -> String {
    format!("{x:.4}")
}

fn percent(x: f64) -> String {
    format!("{:.0}%", x * 100.0)
}

/// Tab-separated rows with a header line.
pub fn tsv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

/// Left-aligned columns separated by two spaces, with a rule under the header.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.chars().count());
            } else {
                widths.push(cell.chars().count());
            }
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| -> String {
        let mut s = String::new();
        for (i, c) in cells.enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let _ = write!(s, "{c:<w$}", w = widths[i]);
        }
        s.trim_end().to_string()
    };
    let mut out = line(&mut header.iter().copied());
    out.push('\n');
    let total: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
        out.push('\n');
    }
    out
}

fn ranked<C: SweepParams>(results: &[SweepResult<C>]) -> Vec<&SweepResult<C>> {
    let mut sorted: Vec<&SweepResult<C>> = results.iter().collect();
    sorted.sort_by(|a, b| rank_order(a, b));
    sorted
}

fn sweep_row<C: SweepParams>(r: &SweepResult<C>, p: String, rc: String, f: String) -> Vec<String> {
    vec![
        r.config.regime_label(),
        r.config.describe(),
        p,
        rc,
        f,
        r.true_positives.to_string(),
        r.predicted_positives.to_string(),
        r.gold_positives.to_string(),
    ]
}

/// Sweep results best first, with full-precision fractions.
pub fn sweep_tsv<C: SweepParams>(results: &[SweepResult<C>]) -> String {
    let rows: Vec<Vec<String>> = ranked(results)
        .into_iter()
        .map(|r| sweep_row(r, fixed(r.precision), fixed(r.recall), fixed(r.f1)))
        .collect();
    tsv(&SWEEP_HEADER, &rows)
}

/// Sweep results best first, with P and R as whole percentages.
pub fn sweep_text<C: SweepParams>(results: &[SweepResult<C>]) -> String {
    let rows: Vec<Vec<String>> = ranked(results)
        .into_iter()
        .map(|r| {
            sweep_row(
                r,
                percent(r.precision),
                percent(r.recall),
                format!("{:.2}", r.f1),
            )
        })
        .collect();
    text_table(&SWEEP_HEADER, &rows)
}

fn metrics_row(stage: &str, m: &Metrics) -> Vec<String> {
    vec![
        stage.to_string(),
        fixed(m.precision),
        fixed(m.recall),
        fixed(m.f1),
        m.tp.to_string(),
        m.fp.to_string(),
        m.fn_.to_string(),
        m.tn.to_string(),
        m.total().to_string(),
    ]
}

pub fn metrics_tsv(stages: &[(String, Metrics)]) -> String {
    let rows: Vec<Vec<String>> = stages.iter().map(|(s, m)| metrics_row(s, m)).collect();
    tsv(&METRICS_HEADER, &rows)
}

pub fn metrics_text(stages: &[(String, Metrics)]) -> String {
    let rows: Vec<Vec<String>> = stages
        .iter()
        .map(|(s, m)| {
            let mut row = metrics_row(s, m);
            row[1] = percent(m.precision);
            row[2] = percent(m.recall);
            row[3] = format!("{:.2}", m.f1);
            row
        })
        .collect();
    text_table(&METRICS_HEADER, &rows)
}

/// Stage names for a metrics history: `phase1`, then `phase2`, then
/// `round2`, `round3`, ...
pub fn history_stages(history: &[Metrics]) -> Vec<(String, Metrics)> {
    history
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let name = match i {
                0 => "phase1".to_string(),
                1 => "phase2".to_string(),
                n => format!("round{n}"),
            };
            (name, *m)
        })
        .collect()
}

/// `id<TAB>label` per utterance, in input order.
pub fn predictions_tsv(pool: &[(Utterance, Label)]) -> String {
    let rows: Vec<Vec<String>> = pool
        .iter()
        .map(|(u, l)| vec![u.id.clone(), l.to_string()])
        .collect();
    tsv(&["id", "label"], &rows)
}

/// Parses `predictions_tsv` output back into `(id, label)` pairs.
pub fn predictions_from_tsv(text: &str) -> crate::Result<Vec<(String, Label)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: &str| crate::Error::Parse {
            line: i + 1,
            message: m.to_string(),
        };
        let (id, label) = line
            .split_once('\t')
            .ok_or_else(|| bad("expected id and label"))?;
        let label = match label.trim() {
            "class" => Label::Class,
            "counter" => Label::Counter,
            "abstain" => Label::Abstain,
            other => return Err(bad(&format!("unknown label {other:?}"))),
        };
        out.push((id.to_string(), label));
    }
    Ok(out)
}
