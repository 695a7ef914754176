//! Parameters merged from command-line flags and an optional INI file.
//!
//! Flags win over the file. The file has one section per subcommand
//! (`[scatter]`, `[pb-solve]`, ...) plus an optional `[defaults]` section
//! consulted by every command; keys are the long flag names.

use ini::Ini;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct FileConfig {
    ini: Option<Ini>,
    section: String,
}

impl FileConfig {
    pub fn load(path: Option<&Path>, section: &str) -> Result<Self, CliError> {
        let ini = match path {
            None => None,
            Some(p) => Some(Ini::load_from_file(p).map_err(|e| match e {
                ini::Error::Io(io) => CliError::Io(format!("{}: {io}", p.display())),
                ini::Error::Parse(parse) => CliError::Usage(format!("{}: {parse}", p.display())),
            })?),
        };
        Ok(Self { ini, section: section.to_string() })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        let ini = self.ini.as_ref()?;
        ini.section(Some(self.section.as_str()))
            .and_then(|s| s.get(key))
            .or_else(|| ini.section(Some("defaults")).and_then(|s| s.get(key)))
    }

    /// `flag`, else the file value for `key`, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.pick_opt(flag, key)?.unwrap_or(default))
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(text) => text
                .trim()
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}' = '{text}': {e}"))),
        }
    }

    pub fn pick_flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.pick_opt::<bool>(None, key)?.unwrap_or(false))
    }
}

/// Comma-separated list such as `64,128,256`.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("'{p}': {e}")))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|v| if v.is_empty() { Err("empty list".into()) } else { Ok(List(v)) })
    }
}
