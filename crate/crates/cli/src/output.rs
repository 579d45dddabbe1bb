//! Report formatting and artifact destinations.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// Resolved run context shared by every subcommand.
pub struct Context {
    pub config: ScenarioConfig,
    pub hash: String,
    pub json: bool,
    pub out: Option<PathBuf>,
}

impl Context {
    pub fn new(config: ScenarioConfig, json: bool, out: Option<PathBuf>) -> Self {
        let out = out.or_else(|| config.output.clone());
        Context { hash: config.hash(), config, json, out }
    }

    /// Writes `name` under the output directory, or to stdout when none is set.
    pub fn artifact(&self, name: &str, content: &str) -> Result<(), CliError> {
        match &self.out {
            Some(dir) => write_file(dir, name, content),
            None => {
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
        }
    }

    pub fn print_json<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        let s = serde_json::to_string_pretty(value).map_err(macqc_core::Error::from)?;
        println!("{s}");
        Ok(())
    }
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}", dir.display()), e))?;
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
    f.write_all(content.as_bytes()).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Parses a comma-separated list of numbers; `sqrt3` is accepted as a value.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "sqrt3" => Ok(3f64.sqrt()),
            _ => t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")),
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err("empty list".to_string()) } else { Ok(v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("0, 1.5,sqrt3").unwrap(), vec![0.0, 1.5, 3f64.sqrt()]);
        assert!(parse_list("1,x").is_err());
        assert!(parse_list("").is_err());
    }

    #[test]
    fn twelve_digits() {
        assert_eq!(num(1.0), "1.00000000000e0");
    }
}
