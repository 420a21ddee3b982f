//! graph6 interchange format, plus a plain edge-list reader.
//!
//! graph6 encodes the upper triangle of the adjacency matrix column by
//! column — bits a(0,1); a(0,2), a(1,2); a(0,3), ... — packed into 6-bit
//! groups, high bit first, each group offset by 63. Node counts up to 62 use
//! the one-byte header n+63; larger counts (up to the crate cap) use the
//! '~' three-byte big-endian header.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_NODES};

pub fn graph6_encode(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        // 63 <= n <= 258047: '~' then three 6-bit chunks, big-endian.
        out.push(126);
        out.push(63 + ((n >> 12) & 63) as u8);
        out.push(63 + ((n >> 6) & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let mut group = 0u8;
    let mut used = 0u8;
    for j in 1..n {
        for i in 0..j {
            group = (group << 1) | u8::from(g.has_edge(i, j));
            used += 1;
            if used == 6 {
                out.push(63 + group);
                group = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push(63 + (group << (6 - used)));
    }
    String::from_utf8(out).expect("ascii")
}

pub fn graph6_decode(s: &str) -> Result<Graph> {
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Graph6("empty string".into()));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::Graph6(format!("byte {b:#04x} at position {i} outside 63..=126")));
        }
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::Graph6("node counts above 258047 are not supported".into()));
        }
        if bytes.len() < 4 {
            return Err(Error::Graph6("truncated node count".into()));
        }
        let n = ((bytes[1] as usize - 63) << 12)
            | ((bytes[2] as usize - 63) << 6)
            | (bytes[3] as usize - 63);
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    if n > MAX_NODES {
        return Err(Error::TooManyNodes { n, max: MAX_NODES });
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() != pos + nbytes {
        return Err(Error::Graph6(format!(
            "expected {} data bytes for n = {n}, found {}",
            nbytes,
            bytes.len() - pos
        )));
    }
    let mut edges = Vec::new();
    let mut group = 0u8;
    let mut avail = 0u8;
    for j in 1..n {
        for i in 0..j {
            if avail == 0 {
                group = bytes[pos] - 63;
                pos += 1;
                avail = 6;
            }
            if group & 0x20 != 0 {
                edges.push((i, j));
            }
            group = (group << 1) & 0x3f;
            avail -= 1;
        }
    }
    // padding bits must be zero
    if avail > 0 && group != 0 {
        return Err(Error::Graph6("nonzero padding bits".into()));
    }
    Graph::build(n, &edges)
}

/// Parses "n\nx y\n..." edge-list text. Blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines
        .next()
        .ok_or_else(|| Error::EdgeList("empty input".into()))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| Error::EdgeList(format!("bad node count line {first:?}")))?;
    let mut edges = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let x: usize = it
            .next()
            .ok_or_else(|| Error::EdgeList(format!("bad edge line {line:?}")))?
            .parse()
            .map_err(|_| Error::EdgeList(format!("bad edge line {line:?}")))?;
        let y: usize = it
            .next()
            .ok_or_else(|| Error::EdgeList(format!("bad edge line {line:?}")))?
            .parse()
            .map_err(|_| Error::EdgeList(format!("bad edge line {line:?}")))?;
        if it.next().is_some() {
            return Err(Error::EdgeList(format!("trailing tokens on edge line {line:?}")));
        }
        edges.push((x, y));
    }
    Graph::build(n, &edges)
}

/// Reads one or more graphs from text: an edge list if the first non-blank
/// line is an integer (digits never occur in graph6), otherwise one graph6
/// string per line.
pub fn read_graphs(text: &str) -> Result<Vec<Graph>> {
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Graph6("no graphs in input".into()))?;
    if first.trim().chars().all(|c| c.is_ascii_digit()) {
        return Ok(vec![parse_edge_list(text)?]);
    }
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| graph6_decode(l.trim()))
        .collect()
}
