use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cuestrap::corpus::Task;
use cuestrap::pipeline::RunConfig;
use serde_json::{Map, Value};

use crate::Cli;

fn read_table(path: &Path) -> Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let value: Value = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    } else {
        let table: toml::Table =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        serde_json::to_value(table)?
    };
    match value {
        Value::Object(map) => Ok(map),
        _ => bail!("{} must contain a table", path.display()),
    }
}

/// Relative paths in a config file are taken relative to the file.
fn resolve(base: &Path, map: &mut Map<String, Value>, key: &str) {
    if let Some(Value::String(p)) = map.get(key) {
        let p = PathBuf::from(p);
        if p.is_relative() {
            map.insert(
                key.into(),
                Value::String(base.join(p).to_string_lossy().into_owned()),
            );
        }
    }
}

/// Config file values, then command-line overrides.
pub fn load(cli: &Cli) -> Result<RunConfig> {
    let mut map = match &cli.config {
        Some(path) => {
            let mut map = read_table(path)?;
            let base = path.parent().unwrap_or(Path::new(""));
            resolve(base, &mut map, "corpus");
            resolve(base, &mut map, "pretagged");
            map
        }
        None => Map::new(),
    };
    let task = cli.task.map(|t| t.to_string());
    if let Some(t) = task {
        map.insert("task".into(), Value::String(t));
    } else if !map.contains_key("task") {
        map.insert("task".into(), Value::String(Task::Sarcasm.to_string()));
    }
    if let Some(c) = &cli.corpus {
        map.insert(
            "corpus".into(),
            Value::String(c.to_string_lossy().into_owned()),
        );
    }
    if !map.contains_key("corpus") {
        bail!(cuestrap::Error::InvalidConfig(
            "no corpus given; use --corpus or --config".into()
        ));
    }
    if let Some(p) = &cli.pretagged {
        map.insert(
            "pretagged".into(),
            Value::String(p.to_string_lossy().into_owned()),
        );
    }
    if let Some(s) = cli.seed {
        map.insert("seed".into(), Value::from(s));
    }
    if !cli.splits.is_empty() {
        map.insert("splits".into(), serde_json::to_value(&cli.splits)?);
    }
    let config: RunConfig = serde_json::from_value(Value::Object(map))
        .map_err(|e| cuestrap::Error::InvalidConfig(e.to_string()))?;
    config.validate()?;
    Ok(config)
}
