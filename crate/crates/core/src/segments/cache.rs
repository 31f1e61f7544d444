//! Binary memo store for [`super::SegmentSolver`].
//!
//! Layout, little endian: the 8-byte magic, a `u32` version, a `u64` entry
//! count, then per entry a `u16` part count, the parts as `i16`, and the
//! lower and upper bounds on the Left score as `i16`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::MemoEntry;
use crate::{Error, Result, Score};

pub const CACHE_MAGIC: &[u8; 8] = b"INFSEGv2";
pub const CACHE_VERSION: u32 = 2;

pub fn save_cache(path: impl AsRef<Path>, entries: &[MemoEntry]) -> Result<()> {
    let path = path.as_ref();
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&(entries.len() as u64).to_le_bytes())?;
        for e in entries {
            let len =
                u16::try_from(e.parts.len()).map_err(|_| Error::InvalidArgument("cache entry too long".into()))?;
            w.write_all(&len.to_le_bytes())?;
            for &p in &e.parts {
                w.write_all(&narrow(p)?.to_le_bytes())?;
            }
            w.write_all(&narrow(e.lo)?.to_le_bytes())?;
            w.write_all(&narrow(e.hi)?.to_le_bytes())?;
        }
        w.flush()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_cache(path: impl AsRef<Path>) -> Result<Vec<MemoEntry>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Parse("not a segment cache file".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != CACHE_VERSION {
        return Err(Error::Parse(format!("unsupported segment cache version {version}")));
    }
    let count = u64::from_le_bytes(read_array(&mut r)?);
    let mut out = Vec::with_capacity(count.min(1 << 24) as usize);
    for _ in 0..count {
        let len = u16::from_le_bytes(read_array(&mut r)?) as usize;
        let mut parts = Vec::with_capacity(len);
        for _ in 0..len {
            parts.push(i16::from_le_bytes(read_array(&mut r)?) as i32);
        }
        let lo = i16::from_le_bytes(read_array(&mut r)?) as Score;
        let hi = i16::from_le_bytes(read_array(&mut r)?) as Score;
        out.push(MemoEntry { parts, lo, hi });
    }
    Ok(out)
}

fn narrow(v: i32) -> Result<i16> {
    i16::try_from(v).map_err(|_| Error::InvalidArgument(format!("value {v} does not fit the cache")))
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Parse(format!("truncated segment cache: {e}")))?;
    Ok(buf)
}
