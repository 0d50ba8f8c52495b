//! `key = value` configuration files for `estimate`. Command-line flags take
//! precedence over anything read here.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::CliError;
use crate::Format;

const KEYS: [&str; 11] = [
    "input",
    "forcing",
    "temperature",
    "k_min",
    "k_max",
    "k_step",
    "level",
    "out_dir",
    "format",
    "robust_se",
    "no_timestamp",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    path: PathBuf,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{}:{line_no}: expected `key = value`", path.display())))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{}:{line_no}: unknown key `{key}`",
                    path.display()
                )));
            }
            entries.insert(key, (line_no, value.trim().to_string()));
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
        })
    }

    fn invalid(&self, key: &str, line: usize, value: &str) -> CliError {
        CliError::Usage(format!(
            "{}:{line}: invalid value `{value}` for `{key}`",
            self.path.display()
        ))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, value)) => value.parse().map(Some).map_err(|_| self.invalid(key, *line, value)),
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.entries.get(key).map(|(_, v)| PathBuf::from(v))
    }

    pub fn formats(&self) -> Result<Option<Vec<Format>>, CliError> {
        match self.entries.get("format") {
            None => Ok(None),
            Some((line, value)) => value
                .split(',')
                .map(|f| Format::from_str(f.trim(), true).map_err(|_| self.invalid("format", *line, value)))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }
}
