//! Plain-text edge lists: a header line `n m`, then `m` lines `u v`.

use std::io::{BufRead, Write};

use super::{Graph, GraphError};

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map(|s| !s.trim().is_empty()).unwrap_or(true));

    let (header_line, header) = match lines.next() {
        Some((i, l)) => (i, l?),
        None => {
            return Err(GraphError::Parse {
                line: 1,
                message: "missing `n m` header".into(),
            })
        }
    };
    let [n, m] = parse_pair(&header, header_line)?;

    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let line = line?;
        let [u, v] = parse_pair(&line, line_no)?;
        if u >= n || v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::from_edges(n, edges)
}

fn parse_pair(line: &str, line_no: usize) -> Result<[usize; 2], GraphError> {
    let mut fields = line.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let field = fields.next().ok_or_else(|| GraphError::Parse {
            line: line_no,
            message: "expected two integers".into(),
        })?;
        field.parse().map_err(|_| GraphError::Parse {
            line: line_no,
            message: format!("not a nonnegative integer: {field:?}"),
        })
    };
    let pair = [next()?, next()?];
    if fields.next().is_some() {
        return Err(GraphError::Parse {
            line: line_no,
            message: "trailing fields".into(),
        });
    }
    Ok(pair)
}

/// Writes edges in ascending `(lo, hi)` order.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for e in g.edges() {
        writeln!(out, "{} {}", e.lo(), e.hi())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let g = Graph::from_edges(5, [(0, 1), (3, 1), (4, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "5 3\n0 1\n1 3\n2 4\n");
        assert_eq!(read_edge_list(&buf[..]).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            read_edge_list("3 1\n1 1\n".as_bytes()),
            Err(GraphError::SelfLoop { vertex: 1 })
        ));
        assert!(matches!(
            read_edge_list("3 1\n0 3\n".as_bytes()),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(
            read_edge_list("3 2\n0 1\n".as_bytes()),
            Err(GraphError::EdgeCountMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            read_edge_list("3 1\n0 x\n".as_bytes()),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(read_edge_list("".as_bytes()).is_err());
    }
}
