//! Run configuration: a flat `key = value` text file plus command-line overrides.
//!
//! ```text
//! # comment
//! dataset.a.checkins = data/checkins.csv
//! dataset.b.flows = data/flows.csv
//! dataset.b.label = official
//! k = 1,2,3
//! seed = 7
//! ```
//!
//! Recognized keys (defaults in parentheses):
//!
//! | key | meaning |
//! |-----|---------|
//! | `dataset.<name>.checkins` | check-in log for dataset `<name>` |
//! | `dataset.<name>.flows` | flow matrix for dataset `<name>` |
//! | `dataset.<name>.label` | graph label (`<name>`) |
//! | `dataset.<name>.format` | check-in format, `csv` or `ndjson` (from extension) |
//! | `checkin_threshold` | countries need strictly more check-ins (1000) |
//! | `parse_mode` | `strict` or `lenient` (strict) |
//! | `k` | comma-separated Top-k values (1,2,3) |
//! | `pagerank.damping` | (0.85) |
//! | `pagerank.tolerance` | L1 convergence threshold (1e-9) |
//! | `pagerank.max_iter` | (1000000) |
//! | `ensemble.size` | randomized graphs per census (1000) |
//! | `ensemble.swaps_per_edge` | swap attempts per edge (100) |
//! | `relevance.min_z` | (2) |
//! | `relevance.min_count` | (4) |
//! | `seed` | root seed (1) |
//! | `n_clusters` | clusters per subgraph, capped at the node count (20) |
//! | `region_map` | `country,region` CSV, or `continents` for the built-in map |
//! | `output_dir` | (`out`) |
//!
//! Dataset names sort lexicographically; with two datasets the second one is
//! the reference side of every difference.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::census::{derive_seed, Relevance};
use crate::error::{Error, Result};
use crate::ingest::{InputFormat, ParseMode, DEFAULT_CHECKIN_THRESHOLD};
use crate::metrics::PageRankParams;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Checkins {
        path: PathBuf,
        format: Option<InputFormat>,
    },
    Flows {
        path: PathBuf,
    },
}

impl Source {
    pub fn path(&self) -> &Path {
        match self {
            Source::Checkins { path, .. } | Source::Flows { path } => path,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct DatasetEntry {
    checkins: Option<String>,
    flows: Option<String>,
    label: Option<String>,
    format: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetConfig {
    pub name: String,
    pub label: String,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    datasets: BTreeMap<String, DatasetEntry>,
    /// Directory that relative input paths are resolved against.
    base_dir: PathBuf,
    pub checkin_threshold: u64,
    pub parse_mode: ParseMode,
    pub k: Vec<usize>,
    pub pagerank: PageRankParams,
    pub ensemble_size: usize,
    pub swaps_per_edge: usize,
    pub relevance: Relevance,
    pub seed: u64,
    pub n_clusters: usize,
    region_map: Option<String>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            datasets: BTreeMap::new(),
            base_dir: PathBuf::from("."),
            checkin_threshold: DEFAULT_CHECKIN_THRESHOLD,
            parse_mode: ParseMode::Strict,
            k: vec![1, 2, 3],
            pagerank: PageRankParams::default(),
            ensemble_size: 1000,
            swaps_per_edge: 100,
            relevance: Relevance::default(),
            seed: 1,
            n_clusters: 20,
            region_map: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

impl RunConfig {
    /// Parses config text; relative input paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg = RunConfig {
            base_dir: base_dir.into(),
            ..Default::default()
        };
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::from(e).context(path.display().to_string()))?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Self::parse(&text, base)
    }

    /// Applies one setting; used for file lines and command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if let Some(rest) = key.strip_prefix("dataset.") {
            let (name, field) = rest
                .split_once('.')
                .ok_or_else(|| Error::Config(format!("bad dataset key `{key}`")))?;
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(Error::Config(format!("bad dataset name `{name}`")));
            }
            let entry = self.datasets.entry(name.to_string()).or_default();
            let slot = match field {
                "checkins" => &mut entry.checkins,
                "flows" => &mut entry.flows,
                "label" => &mut entry.label,
                "format" => &mut entry.format,
                _ => return Err(Error::Config(format!("unknown key `{key}`"))),
            };
            *slot = Some(value.to_string());
            return Ok(());
        }
        match key {
            "checkin_threshold" => self.checkin_threshold = parse_num(key, value)?,
            "parse_mode" => {
                self.parse_mode = match value {
                    "strict" => ParseMode::Strict,
                    "lenient" => ParseMode::Lenient,
                    _ => {
                        return Err(Error::Config(format!(
                            "`parse_mode` must be strict or lenient, got `{value}`"
                        )))
                    }
                }
            }
            "k" => {
                self.k = value
                    .split(',')
                    .map(|s| parse_num(key, s.trim()))
                    .collect::<Result<_>>()?;
            }
            "pagerank.damping" => self.pagerank.damping = parse_num(key, value)?,
            "pagerank.tolerance" => self.pagerank.tolerance = parse_num(key, value)?,
            "pagerank.max_iter" => self.pagerank.max_iter = parse_num(key, value)?,
            "ensemble.size" => self.ensemble_size = parse_num(key, value)?,
            "ensemble.swaps_per_edge" => self.swaps_per_edge = parse_num(key, value)?,
            "relevance.min_z" => self.relevance.min_z = parse_num(key, value)?,
            "relevance.min_count" => self.relevance.min_count = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "n_clusters" => self.n_clusters = parse_num(key, value)?,
            "region_map" => {
                self.region_map = match value {
                    "" | "continents" => None,
                    v => Some(v.to_string()),
                }
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key=value` override strings in order.
    pub fn apply_overrides<'a>(
        &mut self,
        overrides: impl IntoIterator<Item = &'a str>,
    ) -> Result<()> {
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    fn resolve(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Datasets in name order, each with exactly one source.
    pub fn datasets(&self) -> Result<Vec<DatasetConfig>> {
        self.datasets
            .iter()
            .map(|(name, e)| {
                let source = match (&e.checkins, &e.flows) {
                    (Some(c), None) => Source::Checkins {
                        path: self.resolve(c),
                        format: e.format.as_deref().map(str::parse).transpose()?,
                    },
                    (None, Some(f)) => Source::Flows {
                        path: self.resolve(f),
                    },
                    _ => {
                        return Err(Error::Config(format!(
                            "dataset `{name}` needs exactly one of `checkins` or `flows`"
                        )))
                    }
                };
                Ok(DatasetConfig {
                    name: name.clone(),
                    label: e.label.clone().unwrap_or_else(|| name.clone()),
                    source,
                })
            })
            .collect()
    }

    pub fn dataset_names(&self) -> Vec<String> {
        self.datasets.keys().cloned().collect()
    }

    /// `None` selects the built-in continent map.
    pub fn region_map_path(&self) -> Option<PathBuf> {
        self.region_map.as_deref().map(|p| self.resolve(p))
    }

    /// Checks parameter ranges and that every referenced input path exists.
    pub fn validate(&self) -> Result<()> {
        let datasets = self.datasets()?;
        if datasets.len() > 2 {
            return Err(Error::Config(format!(
                "at most two datasets supported, got {}",
                datasets.len()
            )));
        }
        for d in &datasets {
            if !d.source.path().exists() {
                return Err(Error::Config(format!(
                    "dataset `{}`: input {} does not exist",
                    d.name,
                    d.source.path().display()
                )));
            }
        }
        if let Some(p) = self.region_map_path() {
            if !p.exists() {
                return Err(Error::Config(format!(
                    "region map {} does not exist",
                    p.display()
                )));
            }
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return Err(Error::Config("`k` must list positive integers".into()));
        }
        if self.ensemble_size < 2 {
            return Err(Error::Config("`ensemble.size` must be at least 2".into()));
        }
        if self.n_clusters == 0 {
            return Err(Error::Config("`n_clusters` must be positive".into()));
        }
        let d = self.pagerank.damping;
        if !(0.0..1.0).contains(&d) || self.pagerank.tolerance <= 0.0 || self.pagerank.max_iter == 0
        {
            return Err(Error::Config("pagerank parameters out of range".into()));
        }
        Ok(())
    }

    /// Every effective setting except `output_dir`, one `key=value` per line in
    /// key order. Paths appear as written.
    pub fn canonical(&self) -> String {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (name, e) in &self.datasets {
            for (field, v) in [
                ("checkins", &e.checkins),
                ("flows", &e.flows),
                ("label", &e.label),
                ("format", &e.format),
            ] {
                if let Some(v) = v {
                    kv.insert(format!("dataset.{name}.{field}"), v.clone());
                }
            }
        }
        let k: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
        let mode = match self.parse_mode {
            ParseMode::Strict => "strict",
            ParseMode::Lenient => "lenient",
        };
        let entries = [
            ("checkin_threshold", self.checkin_threshold.to_string()),
            ("parse_mode", mode.to_string()),
            ("k", k.join(",")),
            ("pagerank.damping", format!("{:?}", self.pagerank.damping)),
            (
                "pagerank.tolerance",
                format!("{:?}", self.pagerank.tolerance),
            ),
            ("pagerank.max_iter", self.pagerank.max_iter.to_string()),
            ("ensemble.size", self.ensemble_size.to_string()),
            ("ensemble.swaps_per_edge", self.swaps_per_edge.to_string()),
            ("relevance.min_z", format!("{:?}", self.relevance.min_z)),
            ("relevance.min_count", self.relevance.min_count.to_string()),
            ("seed", self.seed.to_string()),
            ("n_clusters", self.n_clusters.to_string()),
            (
                "region_map",
                self.region_map
                    .clone()
                    .unwrap_or_else(|| "continents".into()),
            ),
        ];
        for (key, v) in entries {
            kv.insert(key.to_string(), v);
        }
        kv.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    /// Seed for a named module, derived from the root seed.
    pub fn module_seed(&self, module: &str) -> u64 {
        derive_seed(self.seed, module)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = RunConfig::parse(
            "# run\ndataset.a.flows = f.csv\nk = 2, 3\nseed=9\nensemble.size = 50\n",
            "/data",
        )
        .unwrap();
        assert_eq!(cfg.k, vec![2, 3]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.ensemble_size, 50);
        let ds = cfg.datasets().unwrap();
        assert_eq!(
            ds[0].source,
            Source::Flows {
                path: PathBuf::from("/data/f.csv")
            }
        );
        assert_eq!(ds[0].label, "a");
    }

    #[test]
    fn unknown_key_and_bad_line() {
        assert!(matches!(
            RunConfig::parse("colour = red", "."),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            RunConfig::parse("seed 3", "."),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn exactly_one_source_per_dataset() {
        let cfg =
            RunConfig::parse("dataset.a.flows = f.csv\ndataset.a.checkins = c.csv\n", ".").unwrap();
        assert!(matches!(cfg.datasets(), Err(Error::Config(_))));
    }

    #[test]
    fn overrides_win_and_change_hash() {
        let mut cfg = RunConfig::parse("seed = 3\n", ".").unwrap();
        let h = cfg.hash();
        cfg.apply_overrides(["seed=4"]).unwrap();
        assert_eq!(cfg.seed, 4);
        assert_ne!(cfg.hash(), h);
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = RunConfig::parse("output_dir = x\n", ".").unwrap();
        let b = RunConfig::parse("output_dir = y\n", ".").unwrap();
        assert_eq!(a.hash(), b.hash());
    }
}
