//! The `dspace 1` graph text format.
//!
//! ```text
//! dspace 1
//! points 4
//! edge 0 1
//! edge 0 3
//! edge 1 2
//! edge 2 3
//! ```
//!
//! Points are numbered `0..N`. Writers emit edges with `i < j` in ascending
//! lexicographic order; readers accept any order, either orientation, and
//! `#` comment lines.

use std::fmt::Write as _;

use crate::error::FormatError;
use crate::space::DigitalSpace;

/// Serializes `g`; labels are replaced by their rank in ascending order.
pub fn write_dspace(g: &DigitalSpace) -> String {
    let g = g.normalized();
    let mut out = String::new();
    let _ = writeln!(out, "dspace 1");
    let _ = writeln!(out, "points {}", g.len());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "edge {a} {b}");
    }
    out
}

pub fn read_dspace(text: &str) -> Result<DigitalSpace, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines
        .next()
        .ok_or_else(|| FormatError::new(1, "missing `dspace 1` header"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["dspace", "1"] {
        return Err(FormatError::new(ln, format!("expected `dspace 1`, found `{header}`")));
    }

    let (ln, points) = lines
        .next()
        .ok_or_else(|| FormatError::new(ln + 1, "missing `points N` line"))?;
    let n: u32 = match points.split_whitespace().collect::<Vec<_>>()[..] {
        ["points", n] => n
            .parse()
            .map_err(|_| FormatError::new(ln, format!("invalid point count `{n}`")))?,
        _ => return Err(FormatError::new(ln, format!("expected `points N`, found `{points}`"))),
    };

    let mut edges = Vec::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let (i, j) = match parts[..] {
            ["edge", i, j] => {
                let parse = |s: &str| {
                    s.parse::<u32>()
                        .map_err(|_| FormatError::new(ln, format!("invalid point index `{s}`")))
                };
                (parse(i)?, parse(j)?)
            }
            _ => return Err(FormatError::new(ln, format!("expected `edge i j`, found `{line}`"))),
        };
        if i == j {
            return Err(FormatError::new(ln, format!("self-loop at point {i}")));
        }
        if i >= n || j >= n {
            return Err(FormatError::new(
                ln,
                format!("edge {i} {j} references a point outside 0..{n}"),
            ));
        }
        edges.push((i, j));
    }
    DigitalSpace::new(0..n, edges).map_err(|e| FormatError::new(0, e.to_string()))
}

/// Compact single-token form `N:i-j,i-j,…` used inside trace lines.
pub fn write_inline(g: &DigitalSpace) -> String {
    let g = g.normalized();
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("{}:{}", g.len(), edges.join(","))
}

pub fn read_inline(token: &str, line: usize) -> Result<DigitalSpace, FormatError> {
    let (n, rest) = token
        .split_once(':')
        .ok_or_else(|| FormatError::new(line, format!("inline space `{token}` lacks `:`")))?;
    let n: u32 = n
        .parse()
        .map_err(|_| FormatError::new(line, format!("invalid inline point count `{n}`")))?;
    let mut edges = Vec::new();
    for e in rest.split(',').filter(|e| !e.is_empty()) {
        let (a, b) = e
            .split_once('-')
            .ok_or_else(|| FormatError::new(line, format!("invalid inline edge `{e}`")))?;
        let a: u32 = a
            .parse()
            .map_err(|_| FormatError::new(line, format!("invalid inline edge `{e}`")))?;
        let b: u32 = b
            .parse()
            .map_err(|_| FormatError::new(line, format!("invalid inline edge `{e}`")))?;
        edges.push((a, b));
    }
    DigitalSpace::new(0..n, edges).map_err(|e| FormatError::new(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sorted_edges() {
        let g = DigitalSpace::new([5, 9, 2], [(9, 5), (2, 9)]).unwrap();
        assert_eq!(write_dspace(&g), "dspace 1\npoints 3\nedge 0 2\nedge 1 2\n");
    }

    #[test]
    fn reads_any_order_with_comments() {
        let text = "# a square\ndspace 1\npoints 4\nedge 3 0\n# chord-free\nedge 1 0\nedge 2 1\nedge 2 3\n";
        let g = read_dspace(text).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(read_dspace(&write_dspace(&g)).unwrap(), g);
    }

    #[test]
    fn empty_space() {
        let g = read_dspace("dspace 1\npoints 0\n").unwrap();
        assert!(g.is_empty());
        assert_eq!(write_dspace(&g), "dspace 1\npoints 0\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = read_dspace("dspace 1\npoints 2\nedge 0 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = read_dspace("dspace 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = read_dspace("dspace 1\npoints 3\nedge 1 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = read_dspace("dspace 1\npoints x\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = read_dspace("dspace 1\npoints 3\n\nvertex 1\n").unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn inline_round_trip() {
        let g = DigitalSpace::new([0, 1, 2], [(0, 1), (1, 2)]).unwrap();
        let t = write_inline(&g);
        assert_eq!(t, "3:0-1,1-2");
        assert_eq!(read_inline(&t, 1).unwrap(), g);
        assert_eq!(read_inline("2:", 1).unwrap().edge_count(), 0);
        assert!(read_inline("2:0-5", 7).is_err());
    }
}
