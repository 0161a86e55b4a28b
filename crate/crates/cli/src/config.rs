//! Optional TOML configuration: the same keys as the command-line flags.
//! Flags always win over file values.

use serde::Deserialize;

use crate::output::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<u64>,
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub lambda: Option<String>,
    pub orbit_type: Option<String>,
    pub m_max: Option<u64>,
    pub budget: Option<u64>,
    pub format: Option<String>,
    pub check: Option<bool>,
    pub out: Option<String>,
    pub route: Option<String>,
    pub max_d: Option<u64>,
    pub max_k: Option<u64>,
    pub primes: Option<String>,
    pub min_n: Option<u64>,
    pub max_n: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|err| format!("cannot read config `{path}`: {err}"))?;
        toml::from_str(&text).map_err(|err| format!("invalid config `{path}`: {err}"))
    }

    pub fn format(&self) -> Option<Format> {
        match self.format.as_deref() {
            Some("json") => Some(Format::Json),
            Some("csv") => Some(Format::Csv),
            _ => None,
        }
    }
}
