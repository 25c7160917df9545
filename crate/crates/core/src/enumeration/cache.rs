//! On-disk store for enumerations.
//!
//! Layout (little endian): magic `GKGRAPH\0`, format version `u32`, `g: u32`,
//! `n: u32`, mode tag `u8`, `max_edges: u64` (`u64::MAX` for none), payload
//! length `u64`, payload, SHA-256 of the payload. File names are derived from
//! a hash of the parameters and the code version, so stale files are never
//! picked up after an upgrade.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::canonical::{AutData, CanonicalKey, Mode, OrientationCharacter};
use crate::enumeration::{enumerate_graphs, Enumeration, GraphClass};
use crate::error::{Error, Result};
use crate::graph::StableGraph;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "GKGRAPH_CACHE_DIR";

const MAGIC: &[u8; 8] = b"GKGRAPH\0";
const FORMAT_VERSION: u32 = 1;
const NONE: u32 = u32::MAX;

pub fn cache_file_name(g: u32, n: usize, mode: Mode, max_edges: Option<usize>) -> String {
    let id = format!(
        "{g}:{n}:{mode}:{max_edges:?}:{}:{FORMAT_VERSION}",
        env!("CARGO_PKG_VERSION")
    );
    let digest = Sha256::digest(id.as_bytes());
    format!("enum-{}.bin", hex::encode(&digest[..12]))
}

/// Enumerates through the cache in `dir` (or the directory named by
/// [`CACHE_ENV`]); without either, enumerates directly. Corrupt files are
/// reported and regenerated.
pub fn enumerate_cached(
    g: u32,
    n: usize,
    mode: Mode,
    max_edges: Option<usize>,
    dir: Option<&Path>,
) -> Result<Enumeration> {
    let dir: Option<PathBuf> = dir
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let Some(dir) = dir else {
        return enumerate_graphs(g, n, mode, max_edges);
    };
    let path = dir.join(cache_file_name(g, n, mode, max_edges));
    if path.exists() {
        match load_cache(&path) {
            Ok(e) if e.g == g && e.n == n && e.mode == mode && e.max_edges == max_edges => {
                log::debug!("cache hit {}", path.display());
                return Ok(e);
            }
            Ok(_) => log::warn!("cache file {} has other parameters; regenerating", path.display()),
            Err(err) => log::warn!("{err}; regenerating"),
        }
    }
    let e = enumerate_graphs(g, n, mode, max_edges)?;
    fs::create_dir_all(&dir)?;
    save_cache(&e, &path)?;
    Ok(e)
}

pub fn save_cache(e: &Enumeration, path: &Path) -> Result<()> {
    let payload = encode_payload(&e.classes);
    let mut out = Vec::with_capacity(payload.len() + 80);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&e.g.to_le_bytes());
    out.extend_from_slice(&(e.n as u32).to_le_bytes());
    out.push(e.mode.tag());
    out.extend_from_slice(&e.max_edges.map_or(u64::MAX, |m| m as u64).to_le_bytes());
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    out.extend_from_slice(&Sha256::digest(&payload));
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, &out)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<Enumeration> {
    let bytes = fs::read(path)?;
    let bad = |reason: &str| Error::CacheFormat {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    let mut r = Reader { b: &bytes, pos: 0 };
    if r.take(8).ok_or_else(|| bad("truncated header"))? != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = r.u32().ok_or_else(|| bad("truncated header"))?;
    if version != FORMAT_VERSION {
        return Err(bad("unsupported format version"));
    }
    let g = r.u32().ok_or_else(|| bad("truncated header"))?;
    let n = r.u32().ok_or_else(|| bad("truncated header"))? as usize;
    let mode = r
        .u8()
        .and_then(Mode::from_tag)
        .ok_or_else(|| bad("bad mode tag"))?;
    let max_edges = match r.u64().ok_or_else(|| bad("truncated header"))? {
        u64::MAX => None,
        m => Some(m as usize),
    };
    let len = r.u64().ok_or_else(|| bad("truncated header"))? as usize;
    let payload = r.take(len).ok_or_else(|| bad("truncated payload"))?;
    let sum = r.take(32).ok_or_else(|| bad("missing checksum"))?;
    if r.pos != bytes.len() {
        return Err(bad("trailing bytes"));
    }
    if Sha256::digest(payload)[..] != sum[..] {
        return Err(Error::CacheChecksum(path.display().to_string()));
    }
    let classes = decode_payload(payload).ok_or_else(|| bad("undecodable payload"))?;
    Ok(Enumeration {
        g,
        n,
        mode,
        max_edges,
        classes,
    })
}

fn put(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

fn encode_payload(classes: &[GraphClass]) -> Vec<u8> {
    let mut out = Vec::new();
    put(&mut out, classes.len() as u32);
    for c in classes {
        let key = c.key.as_bytes();
        put(&mut out, key.len() as u32);
        out.extend_from_slice(key);
        let gr = &c.graph;
        put(&mut out, gr.num_vertices() as u32);
        for &w in gr.weights() {
            put(&mut out, w);
        }
        let nh = gr.num_half_edges();
        put(&mut out, nh as u32);
        for h in 0..nh {
            put(&mut out, gr.vertex_of(h) as u32);
            put(&mut out, gr.partner(h).map_or(NONE, |p| p as u32));
            put(&mut out, gr.label(h).unwrap_or(0));
        }
        out.extend_from_slice(&c.aut.order.to_le_bytes());
        out.push(match c.aut.orientation {
            OrientationCharacter::Trivial => 0,
            OrientationCharacter::Nontrivial => 1,
        });
        put(&mut out, c.aut.generators.len() as u32);
        for gen in &c.aut.generators {
            for &x in gen {
                put(&mut out, x as u32);
            }
        }
    }
    out
}

fn decode_payload(b: &[u8]) -> Option<Vec<GraphClass>> {
    let mut r = Reader { b, pos: 0 };
    let count = r.u32()? as usize;
    let mut classes = Vec::with_capacity(count.min(1 << 20));
    for _ in 0..count {
        let klen = r.u32()? as usize;
        let key = CanonicalKey::from_bytes(r.take(klen)?.to_vec());
        let nv = r.u32()? as usize;
        let weights = (0..nv).map(|_| r.u32()).collect::<Option<Vec<_>>>()?;
        let nh = r.u32()? as usize;
        let mut vertex_of = Vec::with_capacity(nh);
        let mut partner = Vec::with_capacity(nh);
        let mut labels = Vec::with_capacity(nh);
        for _ in 0..nh {
            vertex_of.push(r.u32()? as usize);
            partner.push(match r.u32()? {
                NONE => None,
                p => Some(p as usize),
            });
            labels.push(match r.u32()? {
                0 => None,
                l => Some(l),
            });
        }
        let graph = StableGraph::from_parts(weights, vertex_of, partner, labels).ok()?;
        let order = r.u64()?;
        let orientation = match r.u8()? {
            0 => OrientationCharacter::Trivial,
            1 => OrientationCharacter::Nontrivial,
            _ => return None,
        };
        let ng = r.u32()? as usize;
        let mut generators = Vec::with_capacity(ng);
        for _ in 0..ng {
            generators.push((0..nh).map(|_| r.u32().map(|x| x as usize)).collect::<Option<Vec<_>>>()?);
        }
        classes.push(GraphClass {
            key,
            graph,
            aut: AutData {
                order,
                generators,
                orientation,
            },
        });
    }
    (r.pos == b.len()).then_some(classes)
}

struct Reader<'a> {
    b: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let s = self.b.get(self.pos..end)?;
        self.pos = end;
        Some(s)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|s| s[0])
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|s| u32::from_le_bytes(s.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|s| u64::from_le_bytes(s.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let e = enumerate_graphs(1, 1, Mode::Labeled, None).unwrap();
        let p = dir.path().join("x.bin");
        save_cache(&e, &p).unwrap();
        assert_eq!(load_cache(&p).unwrap(), e);
    }

    #[test]
    fn missing_file_is_regenerated() {
        let dir = tempfile::tempdir().unwrap();
        let e = enumerate_cached(1, 2, Mode::Hairy, None, Some(dir.path())).unwrap();
        assert_eq!(e, enumerate_graphs(1, 2, Mode::Hairy, None).unwrap());
        let p = dir.path().join(cache_file_name(1, 2, Mode::Hairy, None));
        assert!(p.exists());
        assert_eq!(enumerate_cached(1, 2, Mode::Hairy, None, Some(dir.path())).unwrap(), e);
    }

    #[test]
    fn mutated_byte_is_a_checksum_error() {
        let dir = tempfile::tempdir().unwrap();
        let e = enumerate_graphs(1, 2, Mode::Labeled, None).unwrap();
        let p = dir.path().join(cache_file_name(1, 2, Mode::Labeled, None));
        save_cache(&e, &p).unwrap();
        let mut b = fs::read(&p).unwrap();
        let mid = 40 + (b.len() - 72) / 2;
        b[mid] ^= 0x5a;
        fs::write(&p, &b).unwrap();
        assert!(matches!(load_cache(&p), Err(Error::CacheChecksum(_))));
        let again = enumerate_cached(1, 2, Mode::Labeled, None, Some(dir.path())).unwrap();
        assert_eq!(again, e);
        assert_eq!(load_cache(&p).unwrap(), e);
    }
}
