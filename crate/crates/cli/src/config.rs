//! Run configuration: built-in defaults, then a key=value file, then flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use parity_sumrules::sumrules::{SummationConfig, TailMethod, VerificationConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[value(alias = "json")]
    Jsonl,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            _ => bail!("unknown format `{s}` (expected jsonl, csv or table)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[derive(Default)]
pub struct RunConfig {
    pub sum: SummationConfig,
    pub tolerances: BTreeMap<String, f64>,
    /// `None` lets each subcommand pick its natural format.
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}


/// Flag values that override the file; `None` leaves the lower layer alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub explicit_terms: Option<usize>,
    pub refine_upto: Option<usize>,
    pub tail: Option<TailMethod>,
    pub tolerances: Vec<(String, f64)>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

fn parse_tail(s: &str) -> Result<TailMethod> {
    match s {
        "integral_euler_maclaurin" | "integral" => Ok(TailMethod::IntegralEulerMaclaurin),
        "none" => Ok(TailMethod::None),
        _ => bail!("unknown tail method `{s}` (expected integral_euler_maclaurin or none)"),
    }
}

pub fn parse_tail_flag(s: &str) -> std::result::Result<TailMethod, String> {
    parse_tail(s).map_err(|e| e.to_string())
}

/// `id=value` as used by `--tol`.
pub fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (id, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected ID=VALUE, got `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance in `{s}`: {e}"))?;
    Ok((id.trim().to_string(), v))
}

impl RunConfig {
    /// Applies a config file's `key = value` lines.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        self.apply_text(&text)
            .with_context(|| format!("in config file {}", path.display()))
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn std::fmt::Display| anyhow!("line {}: {key}: {e}", lineno + 1);
            match key {
                "explicit_terms" => self.sum.explicit_terms = value.parse().map_err(|e| bad(&e))?,
                "refine_upto" => self.sum.refine_upto = value.parse().map_err(|e| bad(&e))?,
                "tail" => self.sum.tail = parse_tail(value).map_err(|e| bad(&e))?,
                "tail_rel_tol" => self.sum.tail_rel_tol = value.parse().map_err(|e| bad(&e))?,
                "format" => self.format = Some(value.parse().map_err(|e| bad(&e))?),
                "output" => self.output = Some(PathBuf::from(value)),
                _ => match key.strip_prefix("tol.") {
                    Some(id) => {
                        let v: f64 = value.parse().map_err(|e| bad(&e))?;
                        self.tolerances.insert(id.to_string(), v);
                    }
                    None => bail!("line {}: unknown key `{key}`", lineno + 1),
                },
            }
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(v) = o.explicit_terms {
            self.sum.explicit_terms = v;
        }
        if let Some(v) = o.refine_upto {
            self.sum.refine_upto = v;
        }
        if let Some(v) = o.tail {
            self.sum.tail = v;
        }
        for (id, v) in &o.tolerances {
            self.tolerances.insert(id.clone(), *v);
        }
        if o.format.is_some() {
            self.format = o.format;
        }
        if let Some(p) = &o.output {
            self.output = Some(p.clone());
        }
    }

    /// Defaults, then the file (if any), then the flags.
    pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            cfg.apply_file(path)?;
        }
        cfg.apply_overrides(overrides);
        cfg.verification().validate()?;
        Ok(cfg)
    }

    pub fn verification(&self) -> VerificationConfig {
        VerificationConfig {
            sum: self.sum.clone(),
            tolerances: self.tolerances.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nexplicit_terms = 5000\ntol.linear.trk = 1e-4 # loose\nformat = csv\n")
            .unwrap();
        assert_eq!(cfg.sum.explicit_terms, 5000);
        assert_eq!(cfg.tolerances["linear.trk"], 1e-4);
        assert_eq!(cfg.format, Some(Format::Csv));
        cfg.apply_overrides(&Overrides {
            explicit_terms: Some(3000),
            tolerances: vec![("linear.trk".into(), 1e-3)],
            ..Default::default()
        });
        assert_eq!(cfg.sum.explicit_terms, 3000);
        assert_eq!(cfg.tolerances["linear.trk"], 1e-3);
        assert_eq!(cfg.format, Some(Format::Csv));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(RunConfig::default().apply_text("bogus = 1").is_err());
        assert!(RunConfig::default().apply_text("explicit_terms").is_err());
        assert!(RunConfig::default().apply_text("tail = fast").is_err());
    }

    #[test]
    fn tolerance_flag_syntax() {
        assert_eq!(
            parse_tolerance("bouncer.trk=1e-5").unwrap(),
            ("bouncer.trk".to_string(), 1e-5)
        );
        assert!(parse_tolerance("bouncer.trk").is_err());
    }
}
