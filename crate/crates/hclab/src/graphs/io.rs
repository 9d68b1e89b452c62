//! Plain-text graph files.
//!
//! ```text
//! n 4 delta 2
//! parity EOEO
//! 0 1
//! 1 2
//! 2 3
//! 0 3
//! ```
//!
//! Line 1: `n <vertices> delta <degree|irregular>`. Line 2: `parity` followed
//! by one character per vertex, `E`/`O` for the bipartition or `?` everywhere
//! when none is recorded. Every further non-blank line is one edge `u v` with
//! `0 <= u < v < n`. Lines starting with `#` and blank lines are ignored.
//! Declared degree and parity are validated against the edges on read.

use std::path::Path;

use super::{Graph, Side};
use crate::error::{Error, Result};

pub fn render_graph(g: &Graph) -> String {
    let mut out = String::new();
    let delta = match g.regular_degree() {
        Some(d) => d.to_string(),
        None => "irregular".into(),
    };
    out.push_str(&format!("n {} delta {}\n", g.n(), delta));
    out.push_str("parity ");
    match g.bipartition() {
        Some(p) => {
            for s in p {
                out.push(if s == Side::E { 'E' } else { 'O' });
            }
        }
        None => out.push_str(&"?".repeat(g.n())),
    }
    out.push('\n');
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let bad_header = |msg: &str| Error::Parse { line: ln, msg: msg.into() };
    if parts.len() != 4 || parts[0] != "n" || parts[2] != "delta" {
        return Err(bad_header("expected `n <count> delta <degree|irregular>`"));
    }
    let n: usize = parts[1]
        .parse()
        .map_err(|_| bad_header("vertex count is not a number"))?;
    let delta: Option<usize> = if parts[3] == "irregular" {
        None
    } else {
        Some(parts[3].parse().map_err(|_| bad_header("degree is not a number"))?)
    };

    let (ln, pline) = lines
        .next()
        .ok_or(Error::Parse { line: ln, msg: "missing parity line".into() })?;
    let pstr = pline
        .strip_prefix("parity")
        .ok_or(Error::Parse { line: ln, msg: "expected `parity <E|O|?>{n}`".into() })?
        .trim();
    if pstr.len() != n {
        return Err(Error::Parse {
            line: ln,
            msg: format!("parity string has length {}, want n = {n}", pstr.len()),
        });
    }
    let parity: Option<Vec<Side>> = if pstr.bytes().all(|b| b == b'?') {
        None
    } else {
        let mut p = Vec::with_capacity(n);
        for (i, b) in pstr.bytes().enumerate() {
            p.push(match b {
                b'E' => Side::E,
                b'O' => Side::O,
                _ => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("parity char {} at position {i} (mixing ? with E/O is not allowed)", b as char),
                    })
                }
            });
        }
        Some(p)
    };

    let mut edges = Vec::new();
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        let (u, v) = (it.next(), it.next());
        if it.next().is_some() {
            return Err(Error::Parse { line: ln, msg: "edge line has more than two fields".into() });
        }
        let (u, v) = match (u, v) {
            (Some(u), Some(v)) => (u, v),
            _ => return Err(Error::Parse { line: ln, msg: "edge line needs two vertex ids".into() }),
        };
        let u: u32 = u.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad vertex id {u:?}") })?;
        let v: u32 = v.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad vertex id {v:?}") })?;
        if u >= v {
            return Err(Error::Parse { line: ln, msg: format!("edges must satisfy u < v, got {u} {v}") });
        }
        edges.push((u, v));
    }

    let g = Graph::new(n, edges).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    if let Some(want) = delta {
        match g.regular_degree() {
            Some(d) if d == want => {}
            got => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("declared delta {want} but graph has degree {got:?}"),
                })
            }
        }
    }
    match parity {
        Some(p) => g.with_parity(p).map_err(|e| Error::Parse { line: 2, msg: e.to_string() }),
        None => Ok(g),
    }
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    crate::fsutil::atomic_write(path, render_graph(g).as_bytes())
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::build::{complete_bipartite, torus};

    #[test]
    fn roundtrip() {
        for g in [torus(4, 2).unwrap(), torus(3, 2).unwrap(), complete_bipartite(2, 3).unwrap()] {
            let text = render_graph(&g);
            let h = parse_graph(&text).unwrap();
            assert_eq!(g.n(), h.n());
            assert_eq!(g.edges(), h.edges());
            assert_eq!(g.bipartition(), h.bipartition());
        }
    }

    #[test]
    fn error_lines() {
        let bad = "n 4 delta 2\nparity EOEO\n0 1\n1 0\n";
        match parse_graph(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        let bad = "n 4 delta 3\nparity EOEO\n0 1\n1 2\n2 3\n0 3\n";
        assert!(parse_graph(bad).is_err()); // wrong declared degree
        let bad = "n 4 delta 2\nparity EEEO\n0 1\n1 2\n2 3\n0 3\n";
        assert!(parse_graph(bad).is_err()); // parity not a 2-coloring
        let ok = "# comment\nn 4 delta 2\nparity ????\n\n0 1\n1 2\n2 3\n0 3\n";
        assert!(parse_graph(ok).is_ok());
    }
}
