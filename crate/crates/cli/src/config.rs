//! Flat `key = value` configuration merged beneath command-line flags.

use crate::error::CliError;
use clap::CommandFactory;
use std::ffi::OsString;
use std::path::Path;

const VALUED_GLOBALS: [&str; 5] = ["--seed", "--out", "--format", "--threads", "--config"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Position of the subcommand token and the `--config` path, if any.
fn scan(argv: &[OsString]) -> (Option<usize>, Option<OsString>) {
    let mut config = None;
    let mut i = 1;
    while i < argv.len() {
        let t = argv[i].to_string_lossy();
        if let Some(p) = t.strip_prefix("--config=") {
            config = Some(OsString::from(p));
        } else if VALUED_GLOBALS.contains(&t.as_ref()) {
            if t == "--config" {
                config = argv.get(i + 1).cloned();
            }
            i += 1;
        } else if !t.starts_with('-') {
            // the config flag may also follow the subcommand
            let rest = &argv[i + 1..];
            for (j, a) in rest.iter().enumerate() {
                let s = a.to_string_lossy();
                if let Some(p) = s.strip_prefix("--config=") {
                    config = Some(OsString::from(p));
                } else if s == "--config" {
                    config = rest.get(j + 1).cloned();
                }
            }
            return (Some(i), config);
        }
        i += 1;
    }
    (None, config)
}

/// Rebuild argv as `rmt <sub> <config flags> <user flags>` so that any flag
/// the user gives overrides the config file.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let (sub_at, config) = scan(&argv);
    let (Some(sub_at), Some(path)) = (sub_at, config) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let entries = parse(&text)?;

    let cmd = crate::args::Cli::command();
    let sub_name = argv[sub_at].to_string_lossy().to_string();
    let Some(sub) = cmd.find_subcommand(&sub_name) else {
        return Ok(argv);
    };
    let known_anywhere = |key: &str| {
        cmd.get_arguments().chain(cmd.get_subcommands().flat_map(|s| s.get_arguments())).any(|a| a.get_long() == Some(key))
    };

    let mut injected = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let arg = cmd.get_arguments().chain(sub.get_arguments()).find(|a| a.get_long() == Some(key.as_str()));
        match arg {
            Some(a) if a.get_action().takes_values() => {
                injected.push(OsString::from(format!("--{key}")));
                injected.push(OsString::from(value));
            }
            Some(_) => match value.as_str() {
                "true" | "1" | "yes" => injected.push(OsString::from(format!("--{key}"))),
                "false" | "0" | "no" => {}
                _ => return Err(CliError::Usage(format!("config key `{key}` expects true or false"))),
            },
            // valid for another command; a shared file may carry it
            None if known_anywhere(&key) => {}
            None => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
        }
    }

    let mut out = vec![argv[0].clone(), argv[sub_at].clone()];
    out.extend(injected);
    out.extend(argv[1..sub_at].iter().cloned());
    out.extend(argv[sub_at + 1..].iter().cloned());
    Ok(out)
}
