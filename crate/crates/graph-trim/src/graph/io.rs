//! Text edge-list and binary CSR codecs.
//!
//! The binary layout is little-endian throughout:
//!
//! ```text
//! "CSRG"            4 bytes magic
//! version           u32 = 1
//! n                 u64
//! m                 u64
//! offsets[0..=n]    (n + 1) x u64
//! targets[0..m]     m x u32
//! ```
//!
//! Reading validates magic, version, and the CSR invariants, so a round trip
//! is bit-exact and a corrupt stream is rejected rather than mis-loaded.

use std::io::{BufRead, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::Error;
use crate::graph::{CsrGraph, VertexId};

const MAGIC: &[u8; 4] = b"CSRG";
const VERSION: u32 = 1;

/// Parses a whitespace-separated `src dst` edge list.
///
/// Lines starting with `#` are comments; a `# n=<N>` comment declares the
/// vertex count explicitly, which allows trailing isolated vertices. Without
/// it, `n` is one past the largest id seen. Duplicate edges are preserved.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<CsrGraph, Error> {
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut max_id: Option<u64> = None;
    let mut declared_n: u64 = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(value) = comment.strip_prefix("n=") {
                declared_n = value.trim().parse::<u64>().map_err(|e| Error::Parse {
                    line: line_no,
                    msg: format!("bad n header: {e}"),
                })?;
            }
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let src = parse_id(fields.next(), line_no)?;
        let dst = parse_id(fields.next(), line_no)?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected exactly two fields".into(),
            });
        }
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        edges.push((src as VertexId, dst as VertexId));
    }

    let n = declared_n.max(max_id.map_or(0, |m| m + 1));
    if n > u32::MAX as u64 {
        return Err(Error::Capacity(format!(
            "vertex count {n} exceeds the 32-bit id space"
        )));
    }
    CsrGraph::from_edges(n as usize, &edges)
}

fn parse_id(field: Option<&str>, line: usize) -> Result<u64, Error> {
    let field = field.ok_or(Error::Parse {
        line,
        msg: "expected two fields".into(),
    })?;
    let id = field.parse::<u64>().map_err(|e| Error::Parse {
        line,
        msg: format!("bad vertex id {field:?}: {e}"),
    })?;
    if id >= u32::MAX as u64 {
        return Err(Error::Capacity(format!(
            "vertex id {id} exceeds the 32-bit id space"
        )));
    }
    Ok(id)
}

/// Writes one `src dst` line per edge, preceded by a `# n=<N>` header so
/// isolated vertices survive a round trip.
pub fn write_edge_list<W: Write>(g: &CsrGraph, mut sink: W) -> Result<(), Error> {
    writeln!(sink, "# n={}", g.vertex_count())?;
    for (src, dst) in g.edges() {
        writeln!(sink, "{src} {dst}")?;
    }
    Ok(())
}

/// Serializes a graph in the binary CSR format described at module level.
pub fn write_csr<W: Write>(g: &CsrGraph, mut sink: W) -> Result<(), Error> {
    sink.write_all(MAGIC)?;
    sink.write_u32::<LittleEndian>(VERSION)?;
    sink.write_u64::<LittleEndian>(g.vertex_count() as u64)?;
    sink.write_u64::<LittleEndian>(g.edge_count() as u64)?;
    for &off in g.offsets() {
        sink.write_u64::<LittleEndian>(off as u64)?;
    }
    for &t in g.targets() {
        sink.write_u32::<LittleEndian>(t)?;
    }
    Ok(())
}

/// Reads a stream produced by [`write_csr`], validating structure.
pub fn read_csr<R: Read>(mut source: R) -> Result<CsrGraph, Error> {
    let mut magic = [0u8; 4];
    source.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = source.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n = source.read_u64::<LittleEndian>()?;
    let m = source.read_u64::<LittleEndian>()?;
    if n > u32::MAX as u64 {
        return Err(Error::Format(format!("vertex count {n} exceeds u32 range")));
    }
    // Capacity grows with successful reads rather than trusting the header,
    // so a corrupt size field fails with an I/O error instead of exhausting
    // memory up front.
    let cap = |claimed: u64| (claimed as usize).min(1 << 20);
    let mut offsets = Vec::with_capacity(cap(n + 1));
    for _ in 0..=n {
        let off = source.read_u64::<LittleEndian>()?;
        if off > m {
            return Err(Error::Format(format!("offset {off} exceeds m = {m}")));
        }
        offsets.push(off as usize);
    }
    let mut targets = Vec::with_capacity(cap(m));
    for _ in 0..m {
        targets.push(source.read_u32::<LittleEndian>()?);
    }
    CsrGraph::from_parts(offsets, targets)
}
