use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::{Error, Result};

/// Largest limit [`sieve_primes`] accepts without an explicit [`Sieve`] budget.
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000_000;

const SEGMENT: usize = 1 << 18;
const MAGIC: &[u8; 8] = b"SGPRIMES";
const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 8 + 8;

/// Every prime up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The primes `≤ x`. Fails when `x` lies beyond the sieved range.
    pub fn primes_up_to(&self, x: u64) -> Result<&[u64]> {
        if x > self.limit {
            return Err(Error::invalid(format!(
                "x = {x} exceeds sieve limit {}",
                self.limit
            )));
        }
        let end = self.primes.partition_point(|&p| p <= x);
        Ok(&self.primes[..end])
    }

    /// Membership test for `n ≤ limit`.
    pub fn contains(&self, n: u64) -> bool {
        debug_assert!(n <= self.limit);
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes over `[2, limit]`, processed in fixed-size segments.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    Sieve::default().table(limit)
}

fn segmented(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }

    let estimate = (limit as f64 / (limit as f64).ln().max(1.0) * 1.2) as usize + 16;
    let mut primes = Vec::with_capacity(estimate);
    let mut seg = vec![true; SEGMENT];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + SEGMENT as u64 - 1).min(limit);
        let len = (high - low + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut start = (low.div_ceil(p) * p).max(p * p);
            while start <= high {
                seg[(start - low) as usize] = false;
                start += p;
            }
        }
        primes.extend(
            seg[..len]
                .iter()
                .enumerate()
                .filter(|(_, &is_p)| is_p)
                .map(|(i, _)| low + i as u64),
        );
        low = high + 1;
    }
    primes
}

/// Sieve front end with a size budget and an optional on-disk cache.
///
/// Cache files are named `primes-<limit>.bin`: an 8-byte magic `SGPRIMES`,
/// a little-endian `u32` format version, 4 reserved bytes, the limit and the
/// prime count as little-endian `u64`, then the primes as little-endian `u64`.
/// A file whose header does not match the requested limit is ignored and
/// rewritten.
#[derive(Debug, Clone)]
pub struct Sieve {
    pub max_limit: u64,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Sieve {
    fn default() -> Self {
        Sieve {
            max_limit: DEFAULT_SIEVE_LIMIT,
            cache_dir: None,
        }
    }
}

impl Sieve {
    pub fn with_cache(cache_dir: impl Into<PathBuf>) -> Self {
        Sieve {
            cache_dir: Some(cache_dir.into()),
            ..Sieve::default()
        }
    }

    pub fn table(&self, limit: u64) -> Result<PrimeTable> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be >= 2, got {limit}")));
        }
        if limit > self.max_limit {
            return Err(Error::resource(format!(
                "sieve limit {limit} exceeds budget {}",
                self.max_limit
            )));
        }
        let Some(dir) = &self.cache_dir else {
            return Ok(PrimeTable {
                limit,
                primes: segmented(limit),
            });
        };
        let path = cache_path(dir, limit);
        if let Some(table) = read_cache(&path, limit)? {
            return Ok(table);
        }
        let table = PrimeTable {
            limit,
            primes: segmented(limit),
        };
        write_cache(dir, &path, &table)?;
        Ok(table)
    }
}

fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.bin"))
}

/// `Ok(None)` when the file is missing or stale.
fn read_cache(path: &Path, limit: u64) -> Result<Option<PrimeTable>> {
    let mut file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    if u32_at(8) != FORMAT_VERSION || u64_at(16) != limit {
        return Ok(None);
    }
    let count = u64_at(24) as usize;
    if bytes.len() != HEADER_LEN + 8 * count {
        return Err(Error::Cache(format!(
            "{}: truncated ({} bytes for {count} primes)",
            path.display(),
            bytes.len()
        )));
    }
    let primes = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Some(PrimeTable { limit, primes }))
}

fn write_cache(dir: &Path, path: &Path, table: &PrimeTable) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * table.primes.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&[0u8; 4]);
    buf.extend_from_slice(&table.limit.to_le_bytes());
    buf.extend_from_slice(&(table.primes.len() as u64).to_le_bytes());
    for p in &table.primes {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
