//! Edge-list text format and graph6.
//!
//! Edge list: a header line `p <N> <M>` followed by `M` lines `e <u> <v>`
//! with 0-based endpoints. Writers emit `u < v` in lexicographic order;
//! readers accept any order but reject duplicates and self-loops.

use crate::error::{Error, Result};
use crate::graph::Graph;
use std::fmt::Write as _;
use std::path::Path;

fn parse_err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Parse(format!("line {line}: {msg}")))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "p {} {}", g.order(), g.edge_count()).unwrap();
    for (u, v) in g.edge_list() {
        writeln!(s, "e {u} {v}").unwrap();
    }
    s
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("c ") || line == "c" {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("p") => {
                if header.is_some() {
                    return parse_err(lineno, "second header");
                }
                let n = it.next().and_then(|t| t.parse().ok());
                let m = it.next().and_then(|t| t.parse().ok());
                match (n, m, it.next()) {
                    (Some(n), Some(m), None) => header = Some((n, m)),
                    _ => return parse_err(lineno, "expected `p <N> <M>`"),
                }
            }
            Some("e") => {
                if header.is_none() {
                    return parse_err(lineno, "edge before header");
                }
                let u = it.next().and_then(|t| t.parse::<usize>().ok());
                let v = it.next().and_then(|t| t.parse::<usize>().ok());
                match (u, v, it.next()) {
                    (Some(u), Some(v), None) => edges.push((u, v)),
                    _ => return parse_err(lineno, "expected `e <u> <v>`"),
                }
            }
            Some(tok) => return parse_err(lineno, format!("unknown record `{tok}`")),
            None => {}
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Parse("missing `p` header".into()))?;
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header declares {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, &edges).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    std::fs::write(path, to_edge_list(g))?;
    Ok(())
}

fn encode_n(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_n(n, &mut out);
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ascii")
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let mut s = text.trim().as_bytes();
    if let Some(rest) = s.strip_prefix(b">>graph6<<") {
        s = rest;
    }
    if s.iter().any(|&c| !(63..=126).contains(&c)) {
        return Err(Error::Parse("graph6 byte outside 63..=126".into()));
    }
    let take = |s: &[u8], k: usize| -> Result<usize> {
        if s.len() < k {
            return Err(Error::Parse("truncated graph6 size".into()));
        }
        Ok(s[..k]
            .iter()
            .fold(0usize, |a, &c| (a << 6) | (c - 63) as usize))
    };
    let (n, body) = match s {
        [] => return Err(Error::Parse("empty graph6".into())),
        [126, 126, rest @ ..] => (take(rest, 6)?, &rest[6..]),
        [126, rest @ ..] => (take(rest, 3)?, &rest[3..]),
        [c, rest @ ..] => ((*c - 63) as usize, rest),
    };
    let need_bits = n * n.saturating_sub(1) / 2;
    if body.len() != need_bits.div_ceil(6) {
        return Err(Error::Parse(format!(
            "graph6 body has {} bytes, expected {}",
            body.len(),
            need_bits.div_ceil(6)
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// Reads either format, choosing by extension (`.g6` / `.graph6` → graph6).
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("g6") | Some("graph6") => parse_graph6(&text),
        _ => parse_edge_list(&text),
    }
}
