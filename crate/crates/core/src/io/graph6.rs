//! graph6 text encoding (one graph per line).
//!
//! Orders up to 62 use a single size byte `n + 63`; orders 63 and 64 use the
//! four-byte form `~` followed by an 18-bit big-endian size.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{bit, Graph, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("line {line}: malformed graph6 size header")]
    Header { line: usize },
    #[error("line {line}: graph order {order} exceeds the supported maximum of {MAX_ORDER}")]
    Order { line: usize, order: usize },
    #[error("line {line}: byte {byte:#04x} is outside the graph6 range")]
    Byte { line: usize, byte: u8 },
    #[error("line {line}: truncated bit section ({found} of {expected} bytes)")]
    Truncated { line: usize, expected: usize, found: usize },
    #[error("line {line}: {extra} unexpected bytes after the bit section")]
    Trailing { line: usize, extra: usize },
    #[error("line {line}: nonzero padding bits")]
    Padding { line: usize },
}

const HEADER: &[u8] = b">>graph6<<";

fn bit_bytes(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Encodes `g`, without a trailing newline.
pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + bit_bytes(n));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let rows = g.rows();
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | ((rows[j] >> i) & 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

pub fn encode_string(g: &Graph) -> String {
    String::from_utf8(encode(g)).expect("graph6 is ASCII")
}

/// Decodes one graph6 line; a trailing newline is accepted.
pub fn decode(bytes: &[u8]) -> Result<Graph, Graph6Error> {
    decode_line(bytes, 1)
}

/// Like [`decode`], reporting errors against `line`.
pub fn decode_line(bytes: &[u8], line: usize) -> Result<Graph, Graph6Error> {
    let mut s = bytes;
    while let [rest @ .., b'\n' | b'\r'] = s {
        s = rest;
    }
    if let Some(rest) = s.strip_prefix(HEADER) {
        s = rest;
    }
    if let Some(&b) = s.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::Byte { line, byte: b });
    }
    let (n, body) = match s {
        [] => return Err(Graph6Error::Header { line }),
        [126, 126, ..] => {
            // 36-bit sizes are far beyond what we support.
            return Err(Graph6Error::Order { line, order: usize::MAX });
        }
        [126, a, b, c, rest @ ..] => {
            let n = (((a - 63) as usize) << 12) | (((b - 63) as usize) << 6) | (c - 63) as usize;
            if n <= 62 {
                return Err(Graph6Error::Header { line });
            }
            (n, rest)
        }
        [126, ..] => return Err(Graph6Error::Header { line }),
        [h, rest @ ..] => ((h - 63) as usize, rest),
    };
    if n > MAX_ORDER {
        return Err(Graph6Error::Order { line, order: n });
    }
    let expected = bit_bytes(n);
    if body.len() < expected {
        return Err(Graph6Error::Truncated { line, expected, found: body.len() });
    }
    if body.len() > expected {
        return Err(Graph6Error::Trailing { line, extra: body.len() - expected });
    }
    let total_bits = n * n.saturating_sub(1) / 2;
    let pad = expected * 6 - total_bits;
    if pad > 0 && (body[expected - 1] - 63) & ((1u8 << pad) - 1) != 0 {
        return Err(Graph6Error::Padding { line });
    }
    let mut adj = vec![0u64; n];
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                adj[i] |= bit(j);
                adj[j] |= bit(i);
            }
            k += 1;
        }
    }
    Ok(Graph::from_rows_unchecked(adj))
}

/// Iterates over the graphs of a graph6 stream, skipping blank lines.
pub fn read_graphs<R: BufRead>(reader: R) -> impl Iterator<Item = crate::Result<Graph>> {
    reader.split(b'\n').enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) if l.iter().all(|b| b.is_ascii_whitespace()) => None,
        Ok(l) => Some(decode_line(&l, i + 1).map_err(Into::into)),
    })
}

pub fn read_file<P: AsRef<Path>>(path: P) -> crate::Result<Vec<Graph>> {
    read_graphs(BufReader::new(File::open(path)?)).collect()
}

pub fn write_graphs<'a, W: Write, I: IntoIterator<Item = &'a Graph>>(w: W, graphs: I) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    for g in graphs {
        w.write_all(&encode(g))?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
