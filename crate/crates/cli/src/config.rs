use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context};
use padyn::Prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Records,
}

/// Prime, precision, seed and output mode for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prime: Prime,
    pub precision: u32,
    pub seed: u64,
    pub format: Format,
}

pub const MIN_PRECISION: u32 = 8;

/// `key = value` lines; `#` starts a comment.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {}: expected key = value", n + 1);
            };
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the config entry.
    pub fn pick(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.get(key).map(str::to_string))
    }

    pub fn require(&self, flag: &Option<String>, key: &str) -> anyhow::Result<String> {
        self.pick(flag, key)
            .with_context(|| format!("missing input --{key} (flag or config entry)"))
    }
}

impl RunConfig {
    pub fn resolve(
        p: Option<u64>,
        precision: Option<u32>,
        seed: Option<u64>,
        format: Option<Format>,
        file: &ConfigFile,
    ) -> anyhow::Result<Self> {
        let p = match p {
            Some(p) => p,
            None => file
                .get("p")
                .map_or(Ok(3), str::parse)
                .context("config entry p")?,
        };
        let precision = match precision {
            Some(n) => n,
            None => file
                .get("precision")
                .map_or(Ok(padyn::DEFAULT_PRECISION), str::parse)
                .context("config entry precision")?,
        };
        let seed = match seed {
            Some(s) => s,
            None => file
                .get("seed")
                .map_or(Ok(0), str::parse)
                .context("config entry seed")?,
        };
        let format = match (format, file.get("format")) {
            (Some(f), _) => f,
            (None, None) => Format::Text,
            (None, Some(s)) => <Format as clap::ValueEnum>::from_str(s, true)
                .map_err(|e| anyhow::anyhow!("config entry format: {e}"))?,
        };
        if precision < MIN_PRECISION {
            bail!("precision must be at least {MIN_PRECISION}, got {precision}");
        }
        let prime = Prime::new(p).map_err(|_| anyhow::anyhow!("--p {p} is not a prime"))?;
        Ok(RunConfig {
            prime,
            precision,
            seed,
            format,
        })
    }
}
