//! On-disk store for assembled operators.
//!
//! File layout, all integers little-endian:
//!
//! ```text
//! magic      8 bytes  "FRACOPM\0"
//! version    u32
//! kind       u32      0 = operator (2N x 2N), 1 = coefficient vector (2N)
//! alpha      f64      IEEE-754 bits
//! n          u64
//! nlevels    u32
//! levels     nlevels x u32
//! checksum   32 bytes SHA-256 of the payload
//! payload    row-major complex doubles, (re, im) as f64, 16 bytes each
//! ```

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::assemble::AssemblyBudget;
use super::ladder::{assemble_ladder, check_levels};
use super::matrix::FracOpMatrix;
use crate::error::{Error, Result};
use crate::fourier::FourierField;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"FRACOPM\0";
const KIND_OPERATOR: u32 = 0;
const KIND_COEFFS: u32 = 1;
const EXTENSION: &str = "fop";

/// Identity of a cached operator. `L` is not part of it.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheKey {
    pub alpha: f64,
    pub n: usize,
    pub levels: Vec<u32>,
}

impl CacheKey {
    pub fn new(alpha: f64, n: usize, levels: Vec<u32>) -> Self {
        Self { alpha, n, levels }
    }

    pub fn of(op: &FracOpMatrix) -> Self {
        Self::new(op.alpha(), op.n(), op.levels().to_vec())
    }

    pub fn file_name(&self) -> String {
        let levels: Vec<String> = self.levels.iter().map(u32::to_string).collect();
        format!("op_a{:016x}_n{}_m{}.{EXTENSION}", self.alpha.to_bits(), self.n, levels.join("-"))
    }
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "alpha={} N={} m={:?}", self.alpha, self.n, self.levels)
    }
}

/// Header fields of a stored file.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryInfo {
    pub key: CacheKey,
    pub path: PathBuf,
    pub checksum: [u8; 32],
}

impl EntryInfo {
    pub fn checksum_hex(&self) -> String {
        self.checksum.iter().map(|b| format!("{b:02x}")).collect()
    }
}

struct Header {
    kind: u32,
    key: CacheKey,
    checksum: [u8; 32],
}

fn payload_bytes(values: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * 16);
    for c in values {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

fn write_file(path: &Path, kind: u32, key: &CacheKey, values: &[Complex64]) -> Result<[u8; 32]> {
    let payload = payload_bytes(values);
    let checksum: [u8; 32] = Sha256::digest(&payload).into();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // Write to a sibling and rename so readers never see a partial file.
    let tmp = path.with_extension(format!("{EXTENSION}.tmp{}", std::process::id()));
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&kind.to_le_bytes())?;
        w.write_all(&key.alpha.to_bits().to_le_bytes())?;
        w.write_all(&(key.n as u64).to_le_bytes())?;
        w.write_all(&(key.levels.len() as u32).to_le_bytes())?;
        for m in &key.levels {
            w.write_all(&m.to_le_bytes())?;
        }
        w.write_all(&checksum)?;
        w.write_all(&payload)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(checksum)
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> std::io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_header(path: &Path, r: &mut impl Read) -> Result<Header> {
    let bad = |reason: &str| Error::CacheFormat { path: path.to_path_buf(), reason: reason.to_string() };
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(|_| bad("truncated header"))?;
    if &magic != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = read_u32(r).map_err(|_| bad("truncated header"))?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch { found: version, expected: FORMAT_VERSION });
    }
    let kind = read_u32(r).map_err(|_| bad("truncated header"))?;
    let alpha = f64::from_bits(read_u64(r).map_err(|_| bad("truncated header"))?);
    let n = read_u64(r).map_err(|_| bad("truncated header"))? as usize;
    let nlevels = read_u32(r).map_err(|_| bad("truncated header"))?;
    if nlevels > 64 {
        return Err(bad("implausible level count"));
    }
    let levels = (0..nlevels)
        .map(|_| read_u32(r))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|_| bad("truncated header"))?;
    let mut checksum = [0u8; 32];
    r.read_exact(&mut checksum).map_err(|_| bad("truncated header"))?;
    Ok(Header { kind, key: CacheKey { alpha, n, levels }, checksum })
}

fn read_payload(path: &Path, r: &mut impl Read, expected_len: usize, checksum: &[u8; 32]) -> Result<Vec<Complex64>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != expected_len * 16 {
        return Err(Error::CacheFormat {
            path: path.to_path_buf(),
            reason: format!("payload has {} bytes, expected {}", bytes.len(), expected_len * 16),
        });
    }
    let digest: [u8; 32] = Sha256::digest(&bytes).into();
    if &digest != checksum {
        return Err(Error::ChecksumMismatch(path.to_path_buf()));
    }
    Ok(bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect())
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    match fs::File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingKey(path.to_path_buf())),
        Err(e) => Err(e.into()),
    }
}

/// Writes an operator to `path`.
pub fn write_operator(path: &Path, op: &FracOpMatrix) -> Result<[u8; 32]> {
    write_file(path, KIND_OPERATOR, &CacheKey::of(op), op.entries())
}

/// Reads an operator from `path` and checks it against `expected`.
pub fn read_operator(path: &Path, expected: &CacheKey) -> Result<FracOpMatrix> {
    let mut r = open(path)?;
    let header = read_header(path, &mut r)?;
    if header.kind != KIND_OPERATOR {
        return Err(Error::CacheFormat { path: path.to_path_buf(), reason: "not an operator file".into() });
    }
    if header.key.n != expected.n
        || header.key.alpha.to_bits() != expected.alpha.to_bits()
        || header.key.levels != expected.levels
    {
        return Err(Error::KeyMismatch {
            path: path.to_path_buf(),
            found: header.key.to_string(),
            requested: expected.to_string(),
        });
    }
    let dim = 2 * header.key.n;
    let entries = read_payload(path, &mut r, dim * dim, &header.checksum)?;
    FracOpMatrix::from_parts(header.key.n, header.key.alpha, header.key.levels, entries)
}

/// Dumps Fourier coefficients in the same container (kind 1). `alpha` and
/// `levels` record the operator the run used.
pub fn write_coefficients(path: &Path, field: &FourierField, alpha: f64, levels: &[u32]) -> Result<[u8; 32]> {
    let key = CacheKey::new(alpha, field.n(), levels.to_vec());
    write_file(path, KIND_COEFFS, &key, field.coeffs())
}

pub fn read_coefficients(path: &Path) -> Result<(CacheKey, FourierField)> {
    let mut r = open(path)?;
    let header = read_header(path, &mut r)?;
    if header.kind != KIND_COEFFS {
        return Err(Error::CacheFormat { path: path.to_path_buf(), reason: "not a coefficient file".into() });
    }
    let coeffs = read_payload(path, &mut r, 2 * header.key.n, &header.checksum)?;
    Ok((header.key, FourierField::from_coeffs(coeffs, true)?))
}

/// Directory-backed operator cache. Reads may happen concurrently; stores
/// land atomically through rename.
#[derive(Debug)]
pub struct OperatorCache {
    dir: PathBuf,
    budget: AssemblyBudget,
    assemblies: AtomicUsize,
}

impl OperatorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into(), budget: AssemblyBudget::default(), assemblies: AtomicUsize::new(0) }
    }

    pub fn with_budget(mut self, budget: AssemblyBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Number of operators this cache had to assemble.
    pub fn assemblies(&self) -> usize {
        self.assemblies.load(Ordering::Relaxed)
    }

    pub fn store(&self, op: &FracOpMatrix) -> Result<EntryInfo> {
        let key = CacheKey::of(op);
        let path = self.path_for(&key);
        let checksum = write_operator(&path, op)?;
        Ok(EntryInfo { key, path, checksum })
    }

    pub fn load(&self, key: &CacheKey) -> Result<FracOpMatrix> {
        read_operator(&self.path_for(key), key)
    }

    /// Loads the operator, assembling and storing it on a miss.
    pub fn get_or_build(&self, key: &CacheKey) -> Result<FracOpMatrix> {
        match self.load(key) {
            Ok(op) => Ok(op),
            Err(Error::MissingKey(_)) => {
                let op = self.build(key)?;
                self.store(&op)?;
                Ok(op)
            }
            Err(e) => Err(e),
        }
    }

    /// Assembles without consulting the disk.
    pub fn build(&self, key: &CacheKey) -> Result<FracOpMatrix> {
        check_levels(&key.levels)?;
        self.assemblies.fetch_add(1, Ordering::Relaxed);
        assemble_ladder(key.alpha, key.n, &key.levels, self.budget)
    }

    pub fn list(&self) -> Result<Vec<EntryInfo>> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some(EXTENSION) {
                continue;
            }
            let mut r = open(&path)?;
            let header = read_header(&path, &mut r)?;
            if header.kind == KIND_OPERATOR {
                out.push(EntryInfo { key: header.key, path, checksum: header.checksum });
            }
        }
        out.sort_by(|a, b| a.path.cmp(&b.path));
        Ok(out)
    }

    /// Removes one entry, or every entry when `key` is `None`. Returns the
    /// number of files deleted.
    pub fn purge(&self, key: Option<&CacheKey>) -> Result<usize> {
        match key {
            Some(k) => match fs::remove_file(self.path_for(k)) {
                Ok(()) => Ok(1),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
                Err(e) => Err(e.into()),
            },
            None => {
                let entries = self.list()?;
                for e in &entries {
                    fs::remove_file(&e.path)?;
                }
                Ok(entries.len())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path());
        let key = CacheKey::new(1.0 / 3.0, 16, vec![1, 2]);
        let op = cache.build(&key).unwrap();
        cache.store(&op).unwrap();
        let back = cache.load(&key).unwrap();
        assert_eq!(back.levels(), op.levels());
        assert_eq!(back.alpha().to_bits(), op.alpha().to_bits());
        for (a, b) in op.entries().iter().zip(back.entries()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn wrong_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path());
        let key = CacheKey::new(0.5, 8, vec![1]);
        let op = cache.build(&key).unwrap();
        let info = cache.store(&op).unwrap();
        let wrong_n = CacheKey::new(0.5, 16, vec![1]);
        assert!(matches!(cache.load(&wrong_n), Err(Error::MissingKey(_))));
        assert!(matches!(read_operator(&info.path, &wrong_n), Err(Error::KeyMismatch { .. })));
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path());
        let key = CacheKey::new(0.25, 4, vec![1]);
        let info = cache.store(&cache.build(&key).unwrap()).unwrap();
        let mut bytes = fs::read(&info.path).unwrap();
        let last = bytes.len() - 3;
        bytes[last] ^= 0x40;
        fs::write(&info.path, &bytes).unwrap();
        assert!(matches!(cache.load(&key), Err(Error::ChecksumMismatch(_))));

        bytes[8] = 99;
        fs::write(&info.path, &bytes).unwrap();
        assert!(matches!(cache.load(&key), Err(Error::VersionMismatch { found: 99, .. })));
    }

    #[test]
    fn hit_skips_assembly_and_purge_removes() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OperatorCache::new(dir.path());
        let key = CacheKey::new(0.7, 8, vec![1, 2, 3]);
        cache.get_or_build(&key).unwrap();
        assert_eq!(cache.assemblies(), 1);
        cache.get_or_build(&key).unwrap();
        assert_eq!(cache.assemblies(), 1);

        let listed = cache.list().unwrap();
        assert_eq!(listed.len(), 1);
        assert_eq!(listed[0].key, key);
        assert_eq!(listed[0].checksum_hex().len(), 64);

        assert_eq!(cache.purge(Some(&key)).unwrap(), 1);
        assert!(matches!(cache.load(&key), Err(Error::MissingKey(_))));
        assert!(cache.list().unwrap().is_empty());
    }

    #[test]
    fn coefficient_dump_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.fop");
        let mut f = FourierField::zeros(4, true);
        f.set_mode(1, Complex64::new(0.25, -1.5));
        f.set_mode(-1, Complex64::new(0.25, 1.5));
        write_coefficients(&path, &f, 1.0 / 3.0, &[1, 2, 3]).unwrap();
        let (key, back) = read_coefficients(&path).unwrap();
        assert_eq!(key.n, 4);
        assert_eq!(back.coeffs(), f.coeffs());
        assert!(read_operator(&path, &key).is_err());
    }
}
