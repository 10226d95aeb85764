//! Optional `key=value` config files and flag/file/default resolution.
//!
//! Keys match the long flag names without dashes (`steps`, `p-up`, `fees`).
//! Flags always win over file entries; file entries win over defaults, so a
//! run is reproducible from its emitted spec line alone.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, Context};

use crate::CliError;

#[derive(Debug, Default)]
pub struct FileConfig {
    entries: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))
            .map_err(CliError::Usage)?;
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(anyhow!(
                    "{}:{}: expected key=value, got `{line}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { entries })
    }

    fn parse<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                CliError::Usage(anyhow!("config key `{key}`: cannot parse `{raw}`: {e}"))
            }),
        }
    }

    /// Flag value if given, else the file entry, else the default.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.parse(key)?.unwrap_or(default)),
        }
    }

    /// Flag value if given, else the file entry, else `None`.
    pub fn resolve_optional<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.parse(key),
        }
    }

    /// As `resolve`, but the value must come from the flag or the file.
    pub fn resolve_required<T>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => self.parse(key)?.ok_or_else(|| {
                CliError::Usage(anyhow!("missing required parameter `{key}` (flag or config)"))
            }),
        }
    }

    /// Comma-separated list, e.g. `fees = 0.001,0.002`.
    pub fn resolve_list<T>(
        &self,
        flag: Option<Vec<T>>,
        key: &str,
        default: &[T],
    ) -> Result<Vec<T>, CliError>
    where
        T: FromStr + Clone,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.entries.get(key) {
            None => Ok(default.to_vec()),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse::<T>().map_err(|e| {
                        CliError::Usage(anyhow!(
                            "config key `{key}`: cannot parse `{}`: {e}",
                            item.trim()
                        ))
                    })
                })
                .collect(),
        }
    }
}
