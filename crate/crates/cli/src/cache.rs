//! Enumeration caches: P^1 point keys and orbit simplex bases, one file per
//! ring descriptor. Files carry a format magic and the descriptor hash; any
//! mismatch (or torn file) reads as a miss and the data is rebuilt.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

const P1_MAGIC: &[u8; 8] = b"HNSLP1\x00\x01";
const ORBITS_MAGIC: &[u8; 8] = b"HNSLOR\x00\x01";

pub fn p1_path(dir: &Path, ring_hash: u64) -> PathBuf {
    dir.join(format!("p1_{ring_hash:016x}.dat"))
}

pub fn orbits_path(dir: &Path, ring_hash: u64) -> PathBuf {
    dir.join(format!("orbits_{ring_hash:016x}.dat"))
}

fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Point keys are (chart tag, element key) pairs in canonical order.
pub fn write_p1(dir: &Path, ring_hash: u64, keys: &[(u8, u128)]) -> std::io::Result<()> {
    let mut bytes = Vec::with_capacity(24 + keys.len() * 17);
    bytes.extend_from_slice(P1_MAGIC);
    bytes.extend_from_slice(&ring_hash.to_le_bytes());
    bytes.extend_from_slice(&(keys.len() as u64).to_le_bytes());
    for &(tag, key) in keys {
        bytes.push(tag);
        bytes.extend_from_slice(&key.to_le_bytes());
    }
    atomic_write(&p1_path(dir, ring_hash), &bytes)
}

pub fn read_p1(dir: &Path, ring_hash: u64) -> Option<Vec<(u8, u128)>> {
    let bytes = fs::read(p1_path(dir, ring_hash)).ok()?;
    if bytes.len() < 24 || &bytes[..8] != P1_MAGIC {
        return None;
    }
    if u64::from_le_bytes(bytes[8..16].try_into().ok()?) != ring_hash {
        return None;
    }
    let count = u64::from_le_bytes(bytes[16..24].try_into().ok()?) as usize;
    if bytes.len() != 24 + count * 17 {
        return None;
    }
    let mut keys = Vec::with_capacity(count);
    for i in 0..count {
        let at = 24 + i * 17;
        let tag = bytes[at];
        let key = u128::from_le_bytes(bytes[at + 1..at + 17].try_into().ok()?);
        keys.push((tag, key));
    }
    Some(keys)
}

/// Orbit bases: per degree, the simplices as flat u32 index tuples.
pub fn write_orbits(
    dir: &Path,
    ring_hash: u64,
    bases: &[Vec<Vec<u32>>],
) -> std::io::Result<()> {
    let mut bytes = Vec::new();
    bytes.extend_from_slice(ORBITS_MAGIC);
    bytes.extend_from_slice(&ring_hash.to_le_bytes());
    bytes.extend_from_slice(&(bases.len() as u64).to_le_bytes());
    for (d, level) in bases.iter().enumerate() {
        bytes.extend_from_slice(&(level.len() as u64).to_le_bytes());
        for tuple in level {
            debug_assert_eq!(tuple.len(), d + 1);
            for &i in tuple {
                bytes.extend_from_slice(&i.to_le_bytes());
            }
        }
    }
    atomic_write(&orbits_path(dir, ring_hash), &bytes)
}

pub fn read_orbits(dir: &Path, ring_hash: u64) -> Option<Vec<Vec<Vec<u32>>>> {
    let bytes = fs::read(orbits_path(dir, ring_hash)).ok()?;
    if bytes.len() < 24 || &bytes[..8] != ORBITS_MAGIC {
        return None;
    }
    if u64::from_le_bytes(bytes[8..16].try_into().ok()?) != ring_hash {
        return None;
    }
    let levels = u64::from_le_bytes(bytes[16..24].try_into().ok()?) as usize;
    let mut at = 24;
    let mut bases = Vec::with_capacity(levels);
    for d in 0..levels {
        if bytes.len() < at + 8 {
            return None;
        }
        let count = u64::from_le_bytes(bytes[at..at + 8].try_into().ok()?) as usize;
        at += 8;
        let width = d + 1;
        if bytes.len() < at + count * width * 4 {
            return None;
        }
        let mut level = Vec::with_capacity(count);
        for _ in 0..count {
            let mut tuple = Vec::with_capacity(width);
            for _ in 0..width {
                tuple.push(u32::from_le_bytes(bytes[at..at + 4].try_into().ok()?));
                at += 4;
            }
            level.push(tuple);
        }
        bases.push(level);
    }
    if at != bytes.len() {
        return None;
    }
    Some(bases)
}
