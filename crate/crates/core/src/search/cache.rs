//! Append-only JSON-lines cache of search results. Only optimal records
//! written by the current engine version are ever reused.

use serde::{Deserialize, Serialize};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::{count_family, ex_pi_search, ex_sigma_search, Mode, SearchConfig, SearchOutcome, SearchStats};
use crate::error::{Error, Result};
use crate::multigraph::Multigraph;

/// Bumped whenever a change could alter a returned value or witness.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "-bb1");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub s: usize,
    pub q: u64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    /// Decimal string.
    pub value: String,
    pub optimal: bool,
    pub witness: Option<Multigraph>,
    pub stats: SearchStats,
    pub engine_version: String,
}

impl CacheRecord {
    pub fn from_outcome(o: &SearchOutcome) -> Self {
        CacheRecord {
            key: CacheKey { n: o.n, s: o.s, q: o.q, mode: o.mode },
            value: o.value.to_string(),
            optimal: o.optimal,
            witness: o.witness.clone(),
            stats: o.stats.clone(),
            engine_version: ENGINE_VERSION.to_string(),
        }
    }

    pub fn to_outcome(&self) -> Result<SearchOutcome> {
        let value = self
            .value
            .parse()
            .map_err(|_| Error::Format(format!("cached value {:?} is not a decimal integer", self.value)))?;
        Ok(SearchOutcome {
            mode: self.key.mode,
            n: self.key.n,
            s: self.key.s,
            q: self.key.q,
            value,
            witness: self.witness.clone(),
            optimal: self.optimal,
            stats: self.stats.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ResultCache {
    path: PathBuf,
}

impl ResultCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ResultCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every record in file order; a missing file is an empty cache.
    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line)
                .map_err(|e| Error::Format(format!("{}:{}: {e}", self.path.display(), i + 1)))?;
            out.push(rec);
        }
        Ok(out)
    }

    /// The latest optimal record for `key` from this engine version.
    pub fn lookup(&self, key: CacheKey) -> Result<Option<SearchOutcome>> {
        self.records()?
            .iter()
            .rev()
            .find(|r| r.key == key && r.optimal && r.engine_version == ENGINE_VERSION)
            .map(CacheRecord::to_outcome)
            .transpose()
    }

    /// Appends one line and flushes it.
    pub fn append(&self, outcome: &SearchOutcome) -> Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut line = serde_json::to_vec(&CacheRecord::from_outcome(outcome))?;
        line.push(b'\n');
        file.write_all(&line)?;
        file.flush()?;
        Ok(())
    }
}

/// Runs `mode` at `(n, s, q)`, answering from `cache` when it holds an
/// optimal record. The flag says whether the cache answered.
pub fn cached_run(
    mode: Mode,
    n: usize,
    s: usize,
    q: u64,
    cfg: &SearchConfig,
    cache: Option<&ResultCache>,
) -> Result<(SearchOutcome, bool)> {
    let key = CacheKey { n, s, q, mode };
    if let Some(c) = cache {
        if let Some(hit) = c.lookup(key)? {
            return Ok((hit, true));
        }
    }
    let out = match mode {
        Mode::Sum => ex_sigma_search(n, s, q, cfg)?,
        Mode::Product => ex_pi_search(n, s, q, cfg)?,
        Mode::Count => count_family(n, s, q, cfg.node_budget)?,
    };
    if let Some(c) = cache {
        c.append(&out)?;
    }
    Ok((out, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_path(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("sqgraph-cache-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("cache.jsonl");
        let _ = std::fs::remove_file(&p);
        p
    }

    #[test]
    fn roundtrip_and_short_circuit() {
        let cache = ResultCache::new(temp_path("rt"));
        let cfg = SearchConfig::default();
        let (first, hit) = cached_run(Mode::Product, 4, 4, 15, &cfg, Some(&cache)).unwrap();
        assert!(!hit);
        let (second, hit) = cached_run(Mode::Product, 4, 4, 15, &cfg, Some(&cache)).unwrap();
        assert!(hit);
        assert_eq!(first, second);
        let recs = cache.records().unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].value, "216");
        assert_eq!(CacheRecord::from_outcome(&second), recs[0]);
    }

    #[test]
    fn stale_or_partial_records_are_ignored() {
        let cache = ResultCache::new(temp_path("stale"));
        let out = ex_sigma_search(4, 3, 5, &SearchConfig::default()).unwrap();
        let mut rec = CacheRecord::from_outcome(&out);
        rec.engine_version = "0.0.0-old".into();
        let mut partial = CacheRecord::from_outcome(&out);
        partial.optimal = false;
        let text = [rec, partial].map(|r| serde_json::to_string(&r).unwrap()).join("\n");
        std::fs::write(cache.path(), text + "\n").unwrap();
        let key = CacheKey { n: 4, s: 3, q: 5, mode: Mode::Sum };
        assert!(cache.lookup(key).unwrap().is_none());
        cache.append(&out).unwrap();
        assert_eq!(cache.lookup(key).unwrap().unwrap(), out);
    }

    #[test]
    fn malformed_line_is_a_format_error() {
        let cache = ResultCache::new(temp_path("bad"));
        std::fs::write(cache.path(), "{not json}\n").unwrap();
        assert!(matches!(cache.records(), Err(Error::Format(_))));
        let missing = ResultCache::new(temp_path("missing"));
        assert!(missing.records().unwrap().is_empty());
    }
}
