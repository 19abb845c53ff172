//! Plain-text formats.
//!
//! * `.hg`: a header line `k n`, then one edge per line as `k` ascending
//!   vertex ids. Blank lines and lines starting with `#` are skipped.
//! * `.col`: one non-negative integer per line, aligned with the edge order
//!   of the matching `.hg` file.
//! * vertex lists: whitespace-separated ids on one line (cycles, paths).
//! * pair lists: one `u v` pair per line (reroutings, conflict graphs).

use std::fmt::Write as _;

use crate::colouring::{Colour, Colouring};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ints<T: std::str::FromStr>(line: usize, text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| parse_err(line, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing `k n` header"))?;
    let header: Vec<usize> = parse_ints(hline, header)?;
    let [k, n] = header[..] else {
        return Err(parse_err(hline, "header must be `k n`"));
    };
    if k == 0 {
        return Err(parse_err(hline, "k must be positive"));
    }
    let mut g = Hypergraph::empty(n, k);
    for (line, l) in lines {
        let e: Vec<Vertex> = parse_ints(line, l)?;
        if e.len() != k {
            return Err(parse_err(line, format!("edge has {} vertices, expected {k}", e.len())));
        }
        if !e.windows(2).all(|w| w[0] < w[1]) {
            return Err(parse_err(line, "edge vertices must be strictly ascending"));
        }
        g.push_edge(e).map_err(|err| parse_err(line, err.to_string()))?;
    }
    Ok(g)
}

pub fn write_hypergraph(g: &Hypergraph) -> String {
    let mut s = format!("{} {}\n", g.k(), g.n());
    for e in g.edges() {
        let _ = writeln!(s, "{}", join(e.vertices()));
    }
    s
}

pub fn parse_colouring(g: &Hypergraph, text: &str) -> Result<Colouring> {
    let mut colours = Vec::with_capacity(g.edge_count());
    for (line, l) in content_lines(text) {
        let v: Vec<Colour> = parse_ints(line, l)?;
        if v.len() != 1 {
            return Err(parse_err(line, "expected exactly one colour per line"));
        }
        colours.push(v[0]);
    }
    if colours.len() != g.edge_count() {
        return Err(invalid(format!(
            "colouring has {} entries but the hypergraph has {} edges",
            colours.len(),
            g.edge_count()
        )));
    }
    Colouring::new(g, colours)
}

pub fn write_colouring(c: &Colouring) -> String {
    let mut s = String::new();
    for col in c.colours() {
        let _ = writeln!(s, "{col}");
    }
    s
}

/// Reads the first content line as a vertex sequence.
pub fn parse_vertex_list(text: &str) -> Result<Vec<Vertex>> {
    let mut lines = content_lines(text);
    let (line, l) = lines.next().ok_or_else(|| parse_err(1, "empty vertex list"))?;
    let v = parse_ints(line, l)?;
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "vertex list must fit on a single line"));
    }
    Ok(v)
}

/// Reads every content line as a vertex sequence.
pub fn parse_vertex_lists(text: &str) -> Result<Vec<Vec<Vertex>>> {
    content_lines(text).map(|(line, l)| parse_ints(line, l)).collect()
}

pub fn parse_pairs(text: &str) -> Result<Vec<(Vertex, Vertex)>> {
    content_lines(text)
        .map(|(line, l)| {
            let v: Vec<Vertex> = parse_ints(line, l)?;
            match v[..] {
                [a, b] => Ok((a, b)),
                _ => Err(parse_err(line, "expected a pair `u v`")),
            }
        })
        .collect()
}

pub fn join(vs: &[Vertex]) -> String {
    let mut s = String::new();
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Hypergraph::complete(5, 3);
        let text = write_hypergraph(&g);
        let h = parse_hypergraph(&text).unwrap();
        assert_eq!(g.edges(), h.edges());
        let c = Colouring::injective(&g);
        let d = parse_colouring(&h, &write_colouring(&c)).unwrap();
        assert_eq!(c.colours(), d.colours());
    }

    #[test]
    fn comments_and_blanks() {
        let g = parse_hypergraph("# header\n3 4\n\n0 1 2\n# e\n1 2 3\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_hypergraph("3 4\n0 1 2\n0 2 1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_hypergraph("3 4\n0 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_hypergraph("3 4\n0 1 x\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_hypergraph("3 4\n0 1 2\n0 1 2\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_hypergraph("3 4\n0 1 9\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_hypergraph("3\n").unwrap_err()), 1);
    }

    #[test]
    fn colouring_length_mismatch() {
        let g = Hypergraph::complete(4, 3);
        assert!(parse_colouring(&g, "1\n2\n").is_err());
        assert!(parse_colouring(&g, "1\n2\n3\n-4\n").is_err());
    }

    #[test]
    fn vertex_lists() {
        assert_eq!(parse_vertex_list("0 1 2 3\n").unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_vertex_list("0 1\n2 3\n").is_err());
        assert_eq!(parse_pairs("0 1\n2 3\n").unwrap(), vec![(0, 1), (2, 3)]);
        assert!(parse_pairs("0 1 2\n").is_err());
    }
}
