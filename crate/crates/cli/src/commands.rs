use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cuestrap::bootstrap::{PatternClassifier, PatternSource, PatternStage};
use cuestrap::corpus::{
    save_corpus, splits_from_json, splits_to_json, Label, SplitName, Utterance,
};
use cuestrap::hp::{classify, HpConfig};
use cuestrap::indicators::{indicators_from_tsv, indicators_to_tsv, Indicator, IndicatorSource};
use cuestrap::metrics::{evaluate, select_best};
use cuestrap::pattern::{patterns_from_json, patterns_to_json, sweep_patterns, PatternConfig};
use cuestrap::pipeline::{
    extractor, mine_indicators, regime_source, run_pipeline, sha256_hex, Dataset, RunConfig,
};
use cuestrap::report::{
    metrics_text, metrics_tsv, predictions_from_tsv, predictions_tsv, sweep_text, sweep_tsv,
    text_table,
};
use cuestrap::synthetic::{planted_corpus, PlantedSpec};
use serde_json::json;

use crate::{config, Cli, Command, SourceArg, Stage};

/// Writes files into the output directory plus a `<command>.run.json`
/// record carrying the seed and config hash.
struct Outputs<'a> {
    dir: &'a Path,
    command: &'static str,
    files: BTreeMap<String, String>,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path, command: &'static str) -> Self {
        Outputs {
            dir,
            command,
            files: BTreeMap::new(),
        }
    }

    fn add(&mut self, name: &str, body: String) {
        self.files.insert(name.to_string(), body);
    }

    fn finish(self, config: &RunConfig) -> Result<()> {
        std::fs::create_dir_all(self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        let hashes: BTreeMap<&str, String> = self
            .files
            .iter()
            .map(|(k, v)| (k.as_str(), sha256_hex(v.as_bytes())))
            .collect();
        let record = json!({
            "command": self.command,
            "seed": config.seed,
            "task": config.task,
            "config_hash": config.hash(),
            "outputs": hashes,
        });
        for (name, body) in &self.files {
            write(self.dir, name, body)?;
        }
        let record = serde_json::to_string_pretty(&record)? + "\n";
        write(self.dir, &format!("{}.run.json", self.command), &record)
    }
}

fn write(dir: &Path, name: &str, body: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn remove_stale(dir: &Path, name: &str) -> Result<()> {
    let path = dir.join(name);
    if path.is_file() {
        std::fs::remove_file(&path).with_context(|| format!("removing {}", path.display()))?;
    }
    Ok(())
}

fn read_artifact(dir: &Path, name: &str, producer: &str) -> Result<String> {
    let path = dir.join(name);
    if !path.is_file() {
        bail!(
            "{} not found; run `cuestrap {producer}` first",
            path.display()
        );
    }
    std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
}

fn dataset(cli: &Cli, config: &RunConfig) -> Result<Dataset> {
    let splits = splits_from_json(&read_artifact(&cli.out, "splits.json", "ingest")?)?;
    Ok(Dataset::with_splits(config, splits)?)
}

fn indicator_file(source: IndicatorSource) -> &'static str {
    match source {
        IndicatorSource::Mt => "indicators_mt.tsv",
        IndicatorSource::Chi2 => "indicators_chi2.tsv",
    }
}

fn regime_indicators(cli: &Cli, config: &RunConfig) -> Result<Vec<Indicator>> {
    let name = indicator_file(regime_source(config.regime));
    Ok(indicators_from_tsv(&read_artifact(
        &cli.out,
        name,
        "indicators",
    )?)?)
}

fn hp_config(cli: &Cli, config: &RunConfig) -> Result<HpConfig> {
    if let Some(c) = config.hp_config {
        return Ok(c);
    }
    let text = read_artifact(&cli.out, "hp_config.json", "sweep --stage hp")?;
    serde_json::from_str(&text).context("parsing hp_config.json")
}

fn pattern_config(cli: &Cli, config: &RunConfig) -> Result<PatternConfig> {
    if let Some(c) = config.pattern_config {
        return Ok(c);
    }
    let text = read_artifact(&cli.out, "pattern_config.json", "sweep --stage pattern")?;
    serde_json::from_str(&text).context("parsing pattern_config.json")
}

fn summary(stage: &str, m: cuestrap::metrics::Metrics) {
    print!("{}", metrics_text(&[(stage.to_string(), m)]));
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Synth {
            corpus_seed,
            output,
        } => {
            save_corpus(
                &planted_corpus(&PlantedSpec::default(), *corpus_seed),
                output,
            )?;
            println!("wrote {}", output.display());
            Ok(())
        }
        Command::Report { files } => report(cli, files),
        Command::Ingest => ingest(cli, &config::load(cli)?),
        Command::Indicators { source } => indicators(cli, &config::load(cli)?, *source),
        Command::Sweep { stage, regime } => {
            let mut config = config::load(cli)?;
            if let Some(r) = regime {
                config.regime = *r;
            }
            match stage {
                Stage::Hp => sweep_hp(cli, &config),
                Stage::Pattern => sweep_pattern(cli, &config),
            }
        }
        Command::HpClassify { split } => hp_classify(cli, &config::load(cli)?, *split),
        Command::LearnPatterns { source } => {
            let mut config = config::load(cli)?;
            if let Some(s) = source {
                config.pattern_source = *s;
            }
            learn(cli, &config)
        }
        Command::PatternClassify { split } => pattern_classify(cli, &config::load(cli)?, *split),
        Command::Bootstrap { rounds } => {
            let mut config = config::load(cli)?;
            if let Some(r) = rounds {
                config.rounds = *r;
            }
            bootstrap(cli, &config)
        }
    }
}

fn ingest(cli: &Cli, config: &RunConfig) -> Result<()> {
    let data = Dataset::load(config)?;
    let mut out = Outputs::new(&cli.out, "ingest");
    out.add("splits.json", splits_to_json(&data.splits) + "\n");
    let mut labeled = String::new();
    for l in &data.labeled {
        labeled.push_str(&serde_json::to_string(l)?);
        labeled.push('\n');
    }
    out.add("labeled.jsonl", labeled);
    out.finish(config)?;
    let rows: Vec<Vec<String>> = data
        .splits
        .iter()
        .map(|s| vec![s.name.to_string(), s.members.len().to_string()])
        .collect();
    print!("{}", text_table(&["split", "size"], &rows));
    Ok(())
}

fn indicators(cli: &Cli, config: &RunConfig, source: SourceArg) -> Result<()> {
    let data = dataset(cli, config)?;
    let sources: &[IndicatorSource] = match source {
        SourceArg::Mt => &[IndicatorSource::Mt],
        SourceArg::Chi2 => &[IndicatorSource::Chi2],
        SourceArg::Both => &[IndicatorSource::Mt, IndicatorSource::Chi2],
    };
    let mut out = Outputs::new(&cli.out, "indicators");
    for &s in sources {
        let inds = mine_indicators(config, &data, s)?;
        println!("{}: {} indicators", indicator_file(s), inds.len());
        out.add(indicator_file(s), indicators_to_tsv(&inds));
    }
    out.finish(config)
}

fn sweep_hp(cli: &Cli, config: &RunConfig) -> Result<()> {
    let data = dataset(cli, config)?;
    let inds = regime_indicators(cli, config)?;
    let results = cuestrap::hp::sweep(
        &data.members(SplitName::HpTrain),
        &inds,
        config.regime,
        &config.hp_grid,
    );
    let mut out = Outputs::new(&cli.out, "sweep");
    out.add("hp_sweep.tsv", sweep_tsv(&results));
    out.add("hp_sweep.txt", sweep_text(&results));
    let best = select_best(&results, config.selection);
    match &best {
        Ok(best) => out.add("hp_config.json", serde_json::to_string_pretty(best)? + "\n"),
        Err(_) => remove_stale(&cli.out, "hp_config.json")?,
    }
    out.finish(config)?;
    let best = best?;
    println!(
        "{} rows; best {}",
        results.len(),
        cuestrap::metrics::SweepParams::describe(&best)
    );
    Ok(())
}

fn sweep_pattern(cli: &Cli, config: &RunConfig) -> Result<()> {
    let data = dataset(cli, config)?;
    let ex = extractor(config)?;
    let learn: Vec<(Utterance, Label)> = data
        .members(SplitName::PeEval)
        .into_iter()
        .map(|l| (l.utterance, l.label))
        .collect();
    if learn.is_empty() {
        return Err(cuestrap::Error::EmptyInput.into());
    }
    let results = sweep_patterns(
        &ex,
        &learn,
        &data.members(SplitName::HpTrain),
        &config.pattern_grid,
    );
    let mut out = Outputs::new(&cli.out, "sweep");
    out.add("pattern_sweep.tsv", sweep_tsv(&results));
    out.add("pattern_sweep.txt", sweep_text(&results));
    let best = select_best(&results, config.selection);
    match &best {
        Ok(best) => out.add(
            "pattern_config.json",
            serde_json::to_string_pretty(best)? + "\n",
        ),
        Err(_) => remove_stale(&cli.out, "pattern_config.json")?,
    }
    out.finish(config)?;
    let best = best?;
    println!(
        "{} rows; best {}",
        results.len(),
        cuestrap::metrics::SweepParams::describe(&best)
    );
    Ok(())
}

fn hp_classify(cli: &Cli, config: &RunConfig, split: SplitName) -> Result<()> {
    let data = dataset(cli, config)?;
    let inds = regime_indicators(cli, config)?;
    let hp = hp_config(cli, config)?;
    let members = data.members(split);
    let pool: Vec<(Utterance, Label)> = members
        .iter()
        .map(|l| {
            (
                l.utterance.clone(),
                classify(&l.utterance, &inds, &hp).label,
            )
        })
        .collect();
    let preds: Vec<(String, Label)> = pool.iter().map(|(u, l)| (u.id.clone(), *l)).collect();
    let m = evaluate(&preds, &members)?;
    let mut out = Outputs::new(&cli.out, "hp-classify");
    out.add("hp_predictions.tsv", predictions_tsv(&pool));
    out.add("hp_metrics.tsv", metrics_tsv(&[(split.to_string(), m)]));
    out.finish(config)?;
    summary(split.as_str(), m);
    Ok(())
}

fn learn(cli: &Cli, config: &RunConfig) -> Result<()> {
    let data = dataset(cli, config)?;
    let ex = extractor(config)?;
    let pc = pattern_config(cli, config)?;
    let pool: Vec<(Utterance, Label)> = if config.pattern_source == PatternSource::Eval {
        Vec::new()
    } else {
        let preds = predictions_from_tsv(&read_artifact(
            &cli.out,
            "hp_predictions.tsv",
            "hp-classify",
        )?)?;
        let by_id = data.corpus.by_id();
        let mut pool = Vec::with_capacity(preds.len());
        for (id, label) in preds {
            let u = by_id
                .get(id.as_str())
                .ok_or_else(|| cuestrap::Error::DanglingReference(id.clone()))?;
            pool.push(((*u).clone(), label));
        }
        if pool.is_empty() {
            return Err(cuestrap::Error::EmptyPool.into());
        }
        pool
    };
    let dev = data.members(SplitName::HpDevTest);
    let pe = data.members(SplitName::PeEval);
    let stage = PatternStage {
        extractor: &ex,
        gold: &dev,
        pe_eval: &pe,
        config: pc,
        source: config.pattern_source,
    };
    let patterns = stage.learn(&pool)?;
    let mut out = Outputs::new(&cli.out, "learn-patterns");
    out.add("patterns.json", patterns_to_json(&patterns) + "\n");
    out.finish(config)?;
    println!(
        "{} patterns at {}",
        patterns.len(),
        cuestrap::metrics::SweepParams::describe(&pc)
    );
    Ok(())
}

fn pattern_classify(cli: &Cli, config: &RunConfig, split: SplitName) -> Result<()> {
    let data = dataset(cli, config)?;
    let ex = extractor(config)?;
    let classifier = PatternClassifier {
        patterns: patterns_from_json(&read_artifact(&cli.out, "patterns.json", "learn-patterns")?)?,
        config: pattern_config(cli, config)?,
    };
    let members = data.members(split);
    let utterances: Vec<Utterance> = members.iter().map(|l| l.utterance.clone()).collect();
    let pool = classifier.classify_all(&ex, &utterances);
    let preds: Vec<(String, Label)> = pool.iter().map(|(u, l)| (u.id.clone(), *l)).collect();
    let m = evaluate(&preds, &members)?;
    let mut out = Outputs::new(&cli.out, "pattern-classify");
    out.add("pattern_predictions.tsv", predictions_tsv(&pool));
    out.add(
        "pattern_metrics.tsv",
        metrics_tsv(&[(split.to_string(), m)]),
    );
    out.finish(config)?;
    summary(split.as_str(), m);
    Ok(())
}

fn bootstrap(cli: &Cli, config: &RunConfig) -> Result<()> {
    let run = run_pipeline(config)?;
    run.write_to(&cli.out)?;
    print!("{}", run.artifacts["metrics.txt"]);
    if run.manifest.converged {
        println!("converged after {} iteration(s)", run.manifest.iterations);
    }
    println!("manifest: {}", cli.out.join("manifest.json").display());
    Ok(())
}

const KNOWN_REPORTS: [&str; 6] = [
    "hp_sweep.tsv",
    "pattern_sweep.tsv",
    "hp_metrics.tsv",
    "pattern_metrics.tsv",
    "metrics.tsv",
    "indicators_mt.tsv",
];

fn report(cli: &Cli, files: &[std::path::PathBuf]) -> Result<()> {
    let paths: Vec<std::path::PathBuf> = if files.is_empty() {
        KNOWN_REPORTS
            .iter()
            .map(|n| cli.out.join(n))
            .filter(|p| p.is_file())
            .collect()
    } else {
        files.to_vec()
    };
    if paths.is_empty() {
        bail!("no reports found in {}", cli.out.display());
    }
    let mut stdout = std::io::stdout().lock();
    for path in paths {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().unwrap_or_default().split('\t').collect();
        let rows: Vec<Vec<String>> = lines
            .filter(|l| !l.is_empty())
            .map(|l| l.split('\t').map(str::to_string).collect())
            .collect();
        let shown = writeln!(stdout, "== {}", path.display())
            .and_then(|_| write!(stdout, "{}", text_table(&header, &rows)));
        match shown {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return Ok(()),
            other => other?,
        }
    }
    Ok(())
}
