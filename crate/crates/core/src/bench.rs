//! Benchmark manifests and Max/Avg aggregation over seeds.
//!
//! A manifest is TOML with one `[[instance]]` table per graph:
//!
//! ```toml
//! [[instance]]
//! path = "graphs/c5.txt"   # relative to the manifest
//! format = "auto"          # optional: metis, edgelist, auto
//! cutoff_s = 60.0
//! variants = ["arir2", "arir3"]
//! seeds = [1, 2, 3, 4, 5]
//! max_iterations = 100000  # optional
//! ```

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{self, RunConfig, RunStats, Variant};
use crate::graph::io::{read_graph, Format, IndexBase};
use crate::graph::StaticGraph;
use crate::par;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    path: PathBuf,
    #[serde(default)]
    format: Option<String>,
    cutoff_s: f64,
    variants: Vec<String>,
    seeds: Vec<u64>,
    #[serde(default)]
    m: Option<u64>,
    #[serde(default)]
    adapt_n: Option<u64>,
    #[serde(default)]
    max_iterations: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    instance: Vec<RawEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchEntry {
    pub instance_path: PathBuf,
    pub format: Format,
    pub cutoff_s: f64,
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    pub m: u64,
    pub adapt_n: u64,
    pub max_iterations: Option<u64>,
}

impl BenchEntry {
    /// Instance name: the file stem.
    pub fn name(&self) -> String {
        self.instance_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.instance_path.display().to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchManifest {
    pub entries: Vec<BenchEntry>,
}

impl BenchManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        let root = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, root)
    }

    /// Parses and validates a manifest; relative paths resolve against `root`.
    pub fn parse(text: &str, root: &Path) -> Result<Self> {
        let raw: RawManifest = toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        if raw.instance.is_empty() {
            return Err(Error::Manifest("no [[instance]] entries".into()));
        }
        let defaults = RunConfig::default();
        let mut entries = Vec::with_capacity(raw.instance.len());
        for e in raw.instance {
            let instance_path = root.join(&e.path);
            let label = e.path.display();
            if !instance_path.exists() {
                return Err(Error::Manifest(format!("{label}: file not found")));
            }
            if e.seeds.is_empty() {
                return Err(Error::Manifest(format!("{label}: seeds must be non-empty")));
            }
            if e.variants.is_empty() {
                return Err(Error::Manifest(format!(
                    "{label}: variants must be non-empty"
                )));
            }
            if e.cutoff_s.is_nan() || e.cutoff_s <= 0.0 {
                return Err(Error::Manifest(format!(
                    "{label}: cutoff_s must be positive"
                )));
            }
            let format = match e.format.as_deref() {
                None => Format::Auto,
                Some(f) => f
                    .parse()
                    .map_err(|m| Error::Manifest(format!("{label}: {m}")))?,
            };
            let variants = e
                .variants
                .iter()
                .map(|v| {
                    v.parse()
                        .map_err(|m| Error::Manifest(format!("{label}: {m}")))
                })
                .collect::<Result<Vec<Variant>>>()?;
            entries.push(BenchEntry {
                instance_path,
                format,
                cutoff_s: e.cutoff_s,
                variants,
                seeds: e.seeds,
                m: e.m.unwrap_or(defaults.m),
                adapt_n: e.adapt_n.unwrap_or(defaults.n),
                max_iterations: e.max_iterations,
            });
        }
        Ok(Self { entries })
    }
}

/// One CSV line. Failed instances have `runs = 0` and empty numeric fields.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub variant: String,
    pub runs: usize,
    pub max: Option<usize>,
    pub avg: Option<f64>,
    pub avg_time_to_best_s: Option<f64>,
    #[serde(skip)]
    pub error: Option<String>,
}

impl BenchRow {
    pub fn from_runs(instance: &str, variant: Variant, runs: &[RunStats]) -> Self {
        let n = runs.len();
        let max = runs.iter().map(|r| r.best_size).max();
        let mean = |f: &dyn Fn(&RunStats) -> f64| {
            (n > 0).then(|| runs.iter().map(f).sum::<f64>() / n as f64)
        };
        BenchRow {
            instance: instance.to_string(),
            variant: variant.name().to_string(),
            runs: n,
            max,
            avg: mean(&|r| r.best_size as f64),
            avg_time_to_best_s: mean(&|r| r.time_to_best_s),
            error: None,
        }
    }

    pub fn failed(instance: &str, variant: Variant, error: String) -> Self {
        BenchRow {
            instance: instance.to_string(),
            variant: variant.name().to_string(),
            runs: 0,
            max: None,
            avg: None,
            avg_time_to_best_s: None,
            error: Some(error),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub runs: Vec<RunStats>,
}

struct Job {
    instance: usize,
    variant: Variant,
    seed: u64,
}

/// Runs every (instance × variant × seed) combination, at most `jobs` at a
/// time, and aggregates rows sorted by instance then variant.
pub fn run_manifest(manifest: &BenchManifest, jobs: usize) -> BenchReport {
    let loaded: Vec<Result<Arc<StaticGraph>>> = par::map(&manifest.entries, jobs, |e| {
        read_graph(&e.instance_path, e.format, IndexBase::Auto).map(Arc::new)
    });

    let mut work = Vec::new();
    let mut rows = Vec::new();
    for (i, (entry, graph)) in manifest.entries.iter().zip(&loaded).enumerate() {
        match graph {
            Ok(_) => {
                for &variant in &entry.variants {
                    for &seed in &entry.seeds {
                        work.push(Job {
                            instance: i,
                            variant,
                            seed,
                        });
                    }
                }
            }
            Err(e) => {
                log::error!("{}: {e}", entry.instance_path.display());
                for &variant in &entry.variants {
                    rows.push(BenchRow::failed(&entry.name(), variant, e.to_string()));
                }
            }
        }
    }

    let results = par::map(&work, jobs, |job| {
        let entry = &manifest.entries[job.instance];
        let graph = loaded[job.instance]
            .as_ref()
            .expect("only loaded instances are scheduled");
        let config = RunConfig {
            variant: job.variant,
            m: entry.m,
            n: entry.adapt_n,
            cutoff_seconds: entry.cutoff_s,
            seed: job.seed,
            max_iterations: entry.max_iterations,
            ..RunConfig::default()
        };
        framework::run(graph, &config).map(|mut out| {
            out.stats.instance = entry.name();
            out.stats
        })
    });

    let mut grouped: BTreeMap<(usize, Variant), (Vec<RunStats>, Option<String>)> = BTreeMap::new();
    for (job, result) in work.iter().zip(results) {
        let slot = grouped.entry((job.instance, job.variant)).or_default();
        match result {
            Ok(stats) => slot.0.push(stats),
            Err(e) => {
                log::error!("run failed: {e}");
                slot.1.get_or_insert(e.to_string());
            }
        }
    }
    let mut runs = Vec::new();
    for ((i, variant), (stats, error)) in grouped {
        let name = manifest.entries[i].name();
        rows.push(match error {
            Some(e) => BenchRow::failed(&name, variant, e),
            None => BenchRow::from_runs(&name, variant, &stats),
        });
        runs.extend(stats);
    }
    rows.sort_by(|a, b| (&a.instance, &a.variant).cmp(&(&b.instance, &b.variant)));
    BenchReport { rows, runs }
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
