//! On-disk cache for ideal and lattice enumerations.
//!
//! File layout, one record per line:
//!
//! ```text
//! # vercong-cache v1 <kind> <key>
//! <record> #<checksum>
//! ...
//! # end <record count>
//! ```
//!
//! `<checksum>` is the first 16 hex digits of the SHA-256 of `<record>`.
//! Ideal records are `<norm> <q:slot^e,...>` (`1` for the unit ideal);
//! lattice records are the period coordinates separated by spaces. A file
//! failing any check is recomputed and rewritten; contents always equal a
//! fresh computation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::field::{AbelianFieldSpec, AlgebraicInt};
use super::ideals::{enumerate_ideals, IdealFactored};
use super::lattice::enumerate_tot_pos_trace;
use crate::error::Result;

#[derive(Debug, Default)]
pub struct CacheStats {
    hits: AtomicU64,
    misses: AtomicU64,
    corrupt: AtomicU64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CacheSnapshot {
    pub hits: u64,
    pub misses: u64,
    pub corrupt: u64,
}

impl CacheStats {
    pub fn snapshot(&self) -> CacheSnapshot {
        CacheSnapshot {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            corrupt: self.corrupt.load(Ordering::Relaxed),
        }
    }
}

/// Enumeration cache rooted at a directory; `None` disables persistence.
#[derive(Debug, Default)]
pub struct EnumerationCache {
    dir: Option<PathBuf>,
    stats: CacheStats,
}

impl EnumerationCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        EnumerationCache { dir, stats: CacheStats::default() }
    }

    pub fn disabled() -> Self {
        Self::new(None)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn stats(&self) -> CacheSnapshot {
        self.stats.snapshot()
    }

    pub fn ideals_path(&self, spec: &AbelianFieldSpec, bound: u64, s_primes: &[u64]) -> Option<PathBuf> {
        let s: Vec<String> = sorted(s_primes).iter().map(|q| q.to_string()).collect();
        self.dir.as_ref().map(|d| {
            d.join(format!(
                "ideals-p{}-l{}-B{}-S{}.txt",
                spec.degree(),
                spec.conductor(),
                bound,
                s.join("_")
            ))
        })
    }

    pub fn totpos_path(&self, spec: &AbelianFieldSpec, t: i64) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("totpos-p{}-l{}-t{}.txt", spec.degree(), spec.conductor(), t)))
    }

    pub fn ideals(&self, spec: &AbelianFieldSpec, bound: u64, s_primes: &[u64]) -> Result<Vec<IdealFactored>> {
        let s = sorted(s_primes);
        let key = format!("p={} l={} B={} S={:?}", spec.degree(), spec.conductor(), bound, s);
        let path = self.ideals_path(spec, bound, &s);
        self.load_or_compute(
            path.as_deref(),
            "ideals",
            &key,
            |line| {
                let (norm, fac) = line.split_once(' ')?;
                let b = IdealFactored::decode(spec, fac)?;
                (b.norm().to_string() == norm).then_some(b)
            },
            |b| format!("{} {}", b.norm(), b.encode()),
            || enumerate_ideals(spec, bound, &s),
        )
    }

    pub fn tot_pos(&self, spec: &AbelianFieldSpec, t: i64) -> Result<Vec<AlgebraicInt>> {
        let key = format!("p={} l={} t={}", spec.degree(), spec.conductor(), t);
        let path = self.totpos_path(spec, t);
        self.load_or_compute(
            path.as_deref(),
            "totpos",
            &key,
            |line| {
                let coords: Option<Vec<i64>> = line.split(' ').map(|c| c.parse().ok()).collect();
                let nu = AlgebraicInt::new(coords?);
                (nu.coords().len() == spec.degree() as usize && spec.trace(&nu) == t).then_some(nu)
            },
            |nu| nu.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
            || enumerate_tot_pos_trace(spec, t),
        )
    }

    fn load_or_compute<T>(
        &self,
        path: Option<&Path>,
        kind: &str,
        key: &str,
        parse: impl Fn(&str) -> Option<T>,
        render: impl Fn(&T) -> String,
        compute: impl FnOnce() -> Vec<T>,
    ) -> Result<Vec<T>> {
        let Some(path) = path else {
            return Ok(compute());
        };
        let header = format!("# vercong-cache v1 {kind} {key}");
        if let Ok(text) = fs::read_to_string(path) {
            match parse_file(&text, &header, &parse) {
                Some(items) => {
                    self.stats.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(items);
                }
                None => {
                    self.stats.corrupt.fetch_add(1, Ordering::Relaxed);
                }
            }
        }
        self.stats.misses.fetch_add(1, Ordering::Relaxed);
        let items = compute();
        let mut body = String::new();
        body.push_str(&header);
        body.push('\n');
        for item in &items {
            let rec = render(item);
            body.push_str(&format!("{rec} #{}\n", checksum(&rec)));
        }
        body.push_str(&format!("# end {}\n", items.len()));
        write_atomic(path, body.as_bytes())?;
        Ok(items)
    }
}

fn sorted(s: &[u64]) -> Vec<u64> {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn checksum(record: &str) -> String {
    let digest = Sha256::digest(record.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_file<T>(text: &str, header: &str, parse: &impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    let mut lines = text.lines();
    if lines.next()? != header {
        return None;
    }
    let mut items = Vec::new();
    for line in lines {
        if let Some(count) = line.strip_prefix("# end ") {
            return (count.parse::<usize>().ok()? == items.len()).then_some(items);
        }
        let (rec, sum) = line.rsplit_once(" #")?;
        if checksum(rec) != sum {
            return None;
        }
        items.push(parse(rec)?);
    }
    None
}

/// Write to a sibling temporary file and rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warm_reload_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let spec = AbelianFieldSpec::new(3, 7).unwrap();
        let cache = EnumerationCache::new(Some(dir.path().to_path_buf()));
        let fresh = enumerate_ideals(&spec, 100, &[3, 7]);
        assert_eq!(cache.ideals(&spec, 100, &[7, 3]).unwrap(), fresh);
        let path = cache.ideals_path(&spec, 100, &[3, 7]).unwrap();
        let first = fs::read(&path).unwrap();
        assert_eq!(cache.ideals(&spec, 100, &[3, 7]).unwrap(), fresh);
        assert_eq!(cache.stats(), CacheSnapshot { hits: 1, misses: 1, corrupt: 0 });

        // flip a digit inside one record
        let text = String::from_utf8(first.clone()).unwrap();
        let broken = text.replacen("13 13:0^1", "13 13:1^1", 1);
        assert_ne!(broken, text);
        fs::write(&path, broken).unwrap();
        assert_eq!(cache.ideals(&spec, 100, &[3, 7]).unwrap(), fresh);
        assert_eq!(cache.stats().corrupt, 1);
        assert_eq!(fs::read(&path).unwrap(), first);

        // truncated file
        fs::write(&path, &first[..first.len() / 2]).unwrap();
        assert_eq!(cache.ideals(&spec, 100, &[3, 7]).unwrap(), fresh);
        assert_eq!(fs::read(&path).unwrap(), first);

        let lat = cache.tot_pos(&spec, 5).unwrap();
        assert_eq!(lat, enumerate_tot_pos_trace(&spec, 5));
        assert_eq!(cache.tot_pos(&spec, 5).unwrap(), lat);
    }
}
