//! Run-directory persistence.
//!
//! Layout:
//!
//! ```text
//! run/
//!   manifest.toml   # format version, crate version, rng seed
//!   config.toml     # fully resolved configuration snapshot
//!   fitness.csv     # birth, generation, member digest, relative fitness
//!   elites/gen{G}_rank{K}.rle
//!   census.csv      # census cache keyed by seed digest (written by analyze)
//! ```
//!
//! Directories are append-only while a run is live, and a rerun with the same
//! manifest reproduces every file bit-exactly (no timestamps are stored).

use crate::census::CensusReport;
use crate::config::Config;
use crate::evolution::{BirthRecord, GenerationSnapshot, RunObserver};
use crate::genome::Seed;
use crate::rle;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunDirError {
    #[error("run directory {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed {what}: {reason}")]
    Malformed { what: &'static str, reason: String },
}

fn io_err(path: &Path, source: std::io::Error) -> RunDirError {
    RunDirError::Io { path: path.display().to_string(), source }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub format: u32,
    pub version: String,
    pub rng_seed: u64,
}

/// Streams a run to disk as the evolution loop reports it.
pub struct RunWriter {
    dir: PathBuf,
    fitness: csv::Writer<BufWriter<File>>,
    failed: Option<RunDirError>,
}

impl RunWriter {
    pub fn create(dir: &Path, config: &Config) -> Result<Self, RunDirError> {
        fs::create_dir_all(dir.join("elites")).map_err(|e| io_err(dir, e))?;
        let manifest = Manifest {
            format: 1,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            rng_seed: config.evolution.rng_seed,
        };
        let manifest_text =
            toml::to_string_pretty(&manifest).expect("manifest serializes");
        fs::write(dir.join("manifest.toml"), manifest_text)
            .map_err(|e| io_err(dir, e))?;
        fs::write(dir.join("config.toml"), config.to_toml()).map_err(|e| io_err(dir, e))?;
        let fitness_path = dir.join("fitness.csv");
        let file = File::create(&fitness_path).map_err(|e| io_err(&fitness_path, e))?;
        let mut fitness = csv::Writer::from_writer(BufWriter::new(file));
        fitness
            .write_record(["birth", "generation", "digest", "fitness"])
            .map_err(|e| RunDirError::Malformed { what: "fitness.csv", reason: e.to_string() })?;
        Ok(Self { dir: dir.to_owned(), fitness, failed: None })
    }

    /// First I/O error hit while observing, if any.
    pub fn finish(mut self) -> Result<(), RunDirError> {
        if let Err(e) = self.fitness.flush() {
            return Err(io_err(&self.dir.join("fitness.csv"), e));
        }
        match self.failed.take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

impl RunObserver for RunWriter {
    fn on_birth(&mut self, record: &BirthRecord) {
        if self.failed.is_some() {
            return;
        }
        let row = [
            record.birth.to_string(),
            record.generation.to_string(),
            record.child_digest.clone(),
            format!("{:.6}", record.relative_fitness),
        ];
        if let Err(e) = self.fitness.write_record(row) {
            self.failed =
                Some(RunDirError::Malformed { what: "fitness.csv", reason: e.to_string() });
        }
    }

    fn on_generation(&mut self, snapshot: &GenerationSnapshot) {
        if self.failed.is_some() {
            return;
        }
        for (rank, elite) in snapshot.elites.iter().enumerate() {
            let name = format!("gen{}_rank{}.rle", snapshot.generation, rank + 1);
            let path = self.dir.join("elites").join(name);
            if let Err(e) = fs::write(&path, rle::write_rle(&elite.seed)) {
                self.failed = Some(io_err(&path, e));
                return;
            }
        }
    }
}

/// Read access to a finished run directory.
pub struct RunReader {
    dir: PathBuf,
}

impl RunReader {
    pub fn open(dir: &Path) -> Result<Self, RunDirError> {
        if !dir.join("manifest.toml").exists() {
            return Err(RunDirError::Malformed {
                what: "run directory",
                reason: format!("{} has no manifest.toml", dir.display()),
            });
        }
        Ok(Self { dir: dir.to_owned() })
    }

    pub fn manifest(&self) -> Result<Manifest, RunDirError> {
        let path = self.dir.join("manifest.toml");
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        toml::from_str(&text)
            .map_err(|e| RunDirError::Malformed { what: "manifest.toml", reason: e.to_string() })
    }

    pub fn config(&self) -> Result<Config, RunDirError> {
        let path = self.dir.join("config.toml");
        let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
        Config::from_toml(&text)
            .map_err(|e| RunDirError::Malformed { what: "config.toml", reason: e.to_string() })
    }

    /// Highest generation number with stored elites.
    pub fn last_generation(&self) -> Result<u32, RunDirError> {
        let mut last = None;
        for entry in self.elite_entries()? {
            let (generation, _) = entry;
            last = Some(last.map_or(generation, |g: u32| g.max(generation)));
        }
        last.ok_or(RunDirError::Malformed {
            what: "elites",
            reason: "run directory has no elite files".into(),
        })
    }

    /// Elite seeds of one generation, ordered by rank.
    pub fn elites(&self, generation: u32) -> Result<Vec<Seed>, RunDirError> {
        let mut ranked: Vec<(u32, PathBuf)> = self
            .elite_entries()?
            .into_iter()
            .filter(|&(g, _)| g == generation)
            .map(|(_, p)| {
                let rank = parse_rank(&p).unwrap_or(u32::MAX);
                (rank, p)
            })
            .collect();
        ranked.sort();
        ranked
            .into_iter()
            .map(|(_, path)| {
                let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
                rle::parse_rle(&text).map_err(|e| RunDirError::Malformed {
                    what: "elite RLE",
                    reason: format!("{}: {e}", path.display()),
                })
            })
            .collect()
    }

    fn elite_entries(&self) -> Result<Vec<(u32, PathBuf)>, RunDirError> {
        let dir = self.dir.join("elites");
        let mut out = Vec::new();
        let entries = fs::read_dir(&dir).map_err(|e| io_err(&dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| io_err(&dir, e))?;
            let path = entry.path();
            if let Some(generation) = parse_generation(&path) {
                out.push((generation, path));
            }
        }
        Ok(out)
    }
}

fn parse_generation(path: &Path) -> Option<u32> {
    let name = path.file_name()?.to_str()?;
    let rest = name.strip_prefix("gen")?;
    let end = rest.find('_')?;
    rest[..end].parse().ok()
}

fn parse_rank(path: &Path) -> Option<u32> {
    let name = path.file_stem()?.to_str()?;
    let idx = name.find("_rank")?;
    name[idx + 5..].parse().ok()
}

/// Census cache: one CSV keyed by seed digest so repeated analyses skip
/// finished censuses. Counts are stored as `name=count` pairs joined by `;`
/// over canonical codes.
#[derive(Default)]
pub struct CensusCache {
    entries: BTreeMap<String, CachedCensus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CachedCensus {
    pub num_objects: u32,
    pub num_types: u32,
    pub counts: BTreeMap<String, u32>,
}

impl CensusCache {
    pub fn load(path: &Path) -> Result<Self, RunDirError> {
        if !path.exists() {
            return Ok(Self::default());
        }
        let mut reader = csv::Reader::from_path(path)
            .map_err(|e| RunDirError::Malformed { what: "census.csv", reason: e.to_string() })?;
        let mut entries = BTreeMap::new();
        for row in reader.records() {
            let row = row.map_err(|e| RunDirError::Malformed {
                what: "census.csv",
                reason: e.to_string(),
            })?;
            if row.len() != 4 {
                return Err(RunDirError::Malformed {
                    what: "census.csv",
                    reason: format!("expected 4 columns, got {}", row.len()),
                });
            }
            let counts = parse_counts(&row[3]).ok_or_else(|| RunDirError::Malformed {
                what: "census.csv",
                reason: format!("bad counts field '{}'", &row[3]),
            })?;
            entries.insert(
                row[0].to_owned(),
                CachedCensus {
                    num_objects: row[1].parse().map_err(|_| RunDirError::Malformed {
                        what: "census.csv",
                        reason: format!("bad num_objects '{}'", &row[1]),
                    })?,
                    num_types: row[2].parse().map_err(|_| RunDirError::Malformed {
                        what: "census.csv",
                        reason: format!("bad num_types '{}'", &row[2]),
                    })?,
                    counts,
                },
            );
        }
        Ok(Self { entries })
    }

    pub fn save(&self, path: &Path) -> Result<(), RunDirError> {
        let mut writer =
            csv::Writer::from_path(path).map_err(|e| RunDirError::Malformed {
                what: "census.csv",
                reason: e.to_string(),
            })?;
        writer
            .write_record(["digest", "num_objects", "num_types", "counts"])
            .map_err(|e| RunDirError::Malformed { what: "census.csv", reason: e.to_string() })?;
        for (digest, entry) in &self.entries {
            let counts: Vec<String> =
                entry.counts.iter().map(|(code, n)| format!("{code}={n}")).collect();
            writer
                .write_record([
                    digest.as_str(),
                    &entry.num_objects.to_string(),
                    &entry.num_types.to_string(),
                    &counts.join(";"),
                ])
                .map_err(|e| RunDirError::Malformed {
                    what: "census.csv",
                    reason: e.to_string(),
                })?;
        }
        writer
            .flush()
            .map_err(|e| RunDirError::Malformed { what: "census.csv", reason: e.to_string() })
    }

    pub fn get(&self, digest: &str) -> Option<&CachedCensus> {
        self.entries.get(digest)
    }

    pub fn insert_report(&mut self, report: &CensusReport) {
        let counts =
            report.counts.iter().map(|(ty, &n)| (ty.code().to_owned(), n)).collect();
        self.entries.insert(
            report.seed_digest.clone(),
            CachedCensus {
                num_objects: report.num_objects(),
                num_types: report.num_types(),
                counts,
            },
        );
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn parse_counts(field: &str) -> Option<BTreeMap<String, u32>> {
    let mut counts = BTreeMap::new();
    if field.is_empty() {
        return Some(counts);
    }
    for part in field.split(';') {
        let (code, n) = part.rsplit_once('=')?;
        counts.insert(code.to_owned(), n.parse().ok()?);
    }
    Some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, EvoParams};
    use sha2::{Digest, Sha256};

    fn desk_config() -> Config {
        let mut config = Config::default();
        config.evolution.pop_size = 6;
        config.evolution.generations = 1;
        config.evolution.elite_k = 3;
        config.evolution.rng_seed = 42;
        config
    }

    fn run_into(dir: &Path, config: &Config) {
        let mut writer = RunWriter::create(dir, config).unwrap();
        let params = EvoParams { ..config.evo_params() };
        evolve(&params, &mut writer).unwrap();
        writer.finish().unwrap();
    }

    fn dir_digests(dir: &Path) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        let mut stack = vec![dir.to_owned()];
        while let Some(d) = stack.pop() {
            for entry in fs::read_dir(&d).unwrap() {
                let path = entry.unwrap().path();
                if path.is_dir() {
                    stack.push(path);
                } else {
                    let rel =
                        path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                    let bytes = fs::read(&path).unwrap();
                    let digest: String =
                        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
                    out.insert(rel, digest);
                }
            }
        }
        out
    }

    #[test]
    fn run_directory_layout_and_replay_determinism() {
        let config = desk_config();
        let tmp = tempfile::tempdir().unwrap();
        let dir_a = tmp.path().join("a");
        let dir_b = tmp.path().join("b");
        run_into(&dir_a, &config);
        run_into(&dir_b, &config);

        assert!(dir_a.join("manifest.toml").exists());
        assert!(dir_a.join("config.toml").exists());
        assert!(dir_a.join("fitness.csv").exists());
        assert!(dir_a.join("elites/gen0_rank1.rle").exists());
        assert!(dir_a.join("elites/gen1_rank3.rle").exists());

        assert_eq!(dir_digests(&dir_a), dir_digests(&dir_b));
    }

    #[test]
    fn reader_round_trips_run_metadata() {
        let config = desk_config();
        let tmp = tempfile::tempdir().unwrap();
        run_into(tmp.path(), &config);
        let reader = RunReader::open(tmp.path()).unwrap();
        assert_eq!(reader.manifest().unwrap().rng_seed, 42);
        assert_eq!(reader.config().unwrap().evolution.pop_size, 6);
        assert_eq!(reader.last_generation().unwrap(), 1);
        let elites = reader.elites(1).unwrap();
        assert_eq!(elites.len(), 3);
    }

    #[test]
    fn census_cache_round_trips() {
        use crate::census::{census, CensusLimits};
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("census.csv");
        let block = crate::genome::Seed::from_art("oo\noo").unwrap();
        let report = census(&block, &CensusLimits::default()).unwrap();
        let mut cache = CensusCache::default();
        cache.insert_report(&report);
        cache.save(&path).unwrap();

        let loaded = CensusCache::load(&path).unwrap();
        assert_eq!(loaded.len(), 1);
        let entry = loaded.get(&report.seed_digest).unwrap();
        assert_eq!(entry.num_objects, 1);
        assert_eq!(entry.num_types, 1);
        assert_eq!(entry.counts.len(), 1);
    }

    #[test]
    fn missing_cache_file_is_empty() {
        let tmp = tempfile::tempdir().unwrap();
        let cache = CensusCache::load(&tmp.path().join("nope.csv")).unwrap();
        assert!(cache.is_empty());
    }
}
