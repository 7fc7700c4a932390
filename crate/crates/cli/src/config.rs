//! Config files: TOML `key = value` lines, top-level keys for every
//! subcommand and `[subcommand]` sections for one. Keys become `--key value`
//! arguments unless the command line already sets that flag.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::args::SUBCOMMANDS;

fn flag_value(argv: &[String], flag: &str) -> Option<String> {
    let eq = format!("{flag}=");
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == flag {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix(&eq).map(str::to_string)
        }
    })
}

fn has_flag(argv: &[String], flag: &str) -> bool {
    let eq = format!("{flag}=");
    argv.iter().any(|a| a == flag || a.starts_with(&eq))
}

fn render(key: &str, v: &toml::Value) -> Result<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|x| render(key, x))
            .collect::<Result<Vec<_>>>()?
            .join(","),
        _ => bail!("config key `{key}` has an unsupported value"),
    })
}

/// Config entries for `sub`: top-level keys, then the section's keys.
pub fn entries(path: &Path, sub: &str) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| lsjulia_core::Error::Parse(format!("config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (k, v) in &table {
        match v {
            toml::Value::Table(section) => {
                if !SUBCOMMANDS.contains(&k.as_str()) {
                    return Err(lsjulia_core::Error::Parse(format!("unknown config section [{k}]")).into());
                }
                if k == sub {
                    for (sk, sv) in section {
                        out.push((sk.clone(), render(sk, sv)?));
                    }
                }
            }
            _ => out.push((k.clone(), render(k, v)?)),
        }
    }
    Ok(out)
}

/// Appends config entries to `argv` as flags, keeping command-line values.
pub fn merge(argv: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = flag_value(&argv, "--config") else {
        return Ok(argv);
    };
    let Some(sub) = argv.iter().skip(1).find(|a| SUBCOMMANDS.contains(&a.as_str())).cloned() else {
        return Ok(argv);
    };
    let mut merged = argv.clone();
    // section keys come last so they override top-level ones
    let mut flags = BTreeMap::new();
    for (k, v) in entries(Path::new(&path), &sub)? {
        flags.insert(format!("--{}", k.replace('_', "-")), v);
    }
    for (flag, v) in flags {
        if flag == "--config" || has_flag(&argv, &flag) {
            continue;
        }
        merged.push(format!("{flag}={v}"));
    }
    Ok(merged)
}
