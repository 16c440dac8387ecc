//! Flat `key = value` configuration files.
//!
//! One setting per line; `#` starts a comment; blank lines are ignored.
//! Keys are long flag names without the leading dashes (`eps`, `n`,
//! `metallic-pair`). A value with spaces expands to several arguments,
//! and `true` / `false` switch boolean flags on or off. Keys the running
//! subcommand does not accept are skipped. Flags on the command line win
//! over the file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Command};

pub fn parse(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key = value", i + 1);
        };
        let key = k.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            bail!("config line {}: bad key {key:?}", i + 1);
        }
        out.insert(key.to_string(), v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

/// Finds `--config FILE` (or `--config=FILE`) anywhere in `args`.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Inserts settings from the config file right after the subcommand name,
/// so that later command-line flags override them.
pub fn merge(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let settings = parse(&text)?;
    let Some(pos) = args.iter().position(|a| {
        cmd.get_subcommands()
            .any(|s| s.get_name() == a.to_string_lossy())
    }) else {
        return Ok(args);
    };
    let sub = cmd
        .find_subcommand(args[pos].to_string_lossy().as_ref())
        .expect("matched above");
    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in &settings {
        let Some(arg) = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
        else {
            continue;
        };
        let flag = OsString::from(format!("--{key}"));
        match arg.get_action() {
            ArgAction::SetTrue => match value.as_str() {
                "true" => injected.push(flag),
                "false" => {}
                _ => bail!("config key {key}: expected true or false"),
            },
            _ => {
                injected.push(flag);
                injected.extend(value.split_whitespace().map(OsString::from));
            }
        }
    }
    let mut out = args[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
