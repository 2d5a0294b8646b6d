//! Plain-text edge lists.
//!
//! Line 1 is `n m`; each of the following `m` lines is `u v` with `u < v`.
//! Writers emit edges sorted lexicographically; readers accept any line order
//! and either endpoint order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `n m` followed by the given pairs verbatim (already normalized and sorted).
pub(crate) fn write_pairs<W: Write>(n: usize, pairs: &[(usize, usize)], mut out: W) -> Result<()> {
    writeln!(out, "{} {}", n, pairs.len())?;
    for (u, v) in pairs {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let (lineno, header) = match lines.next() {
        Some((i, l)) => (i, l?),
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "missing `n m` header".into(),
            })
        }
    };
    let (n, m) = parse_pair(&header, lineno)?;

    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let line = line?;
        if edges.len() == m {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("more than the declared {m} edges"),
            });
        }
        edges.push(parse_pair(&line, lineno)?);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list(g, BufWriter::new(File::create(path)?))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    read_edge_list(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sorted_header_and_edges() {
        let g = Graph::new(4, [(3, 2), (1, 0), (0, 3)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "4 3\n0 1\n0 3\n2 3\n");
    }

    #[test]
    fn reads_unsorted_input() {
        let g = read_edge_list("5 3\n3 4\n1 0\n2 1\n".as_bytes()).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (3, 4)]);
    }

    #[test]
    fn round_trip_preserves_graph() {
        let g = crate::gnp::sample_gnp(40, 0.2, crate::gnp::Seed(3)).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(read_edge_list(buf.as_slice()).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(read_edge_list("".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(read_edge_list("3 2\n0 1\n".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(read_edge_list("3 1\n0 1\n1 2\n".as_bytes()), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(read_edge_list("3 1\n0 x\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(read_edge_list("3 1\n1 1\n".as_bytes()), Err(Error::InvalidEdge(1, 1))));
        assert!(matches!(read_edge_list("3 1\n0 3\n".as_bytes()), Err(Error::VertexOutOfRange { .. })));
    }
}
