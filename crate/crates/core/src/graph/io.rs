//! Instance and solution file formats.
//!
//! * Metis: header `n m [fmt]`, then line `i` (1-based) lists the 1-based
//!   neighbors of vertex `i`. Lines starting with `%` are comments.
//! * Edge list: one `u v` pair per line, `#` or `%` comments. Ids are 0- or
//!   1-based; auto-detection treats a minimum id of 1 as 1-based.
//! * Solution: `# size=<k>` followed by one 0-based vertex id per line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{StaticGraph, VertexSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Metis,
    EdgeList,
    Auto,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metis" => Ok(Format::Metis),
            "edgelist" => Ok(Format::EdgeList),
            "auto" => Ok(Format::Auto),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl Format {
    /// Resolves `Auto` by file extension: `.graph`/`.metis` are Metis,
    /// anything else an edge list.
    pub fn resolve(self, path: &Path) -> Format {
        match self {
            Format::Auto => match path.extension().and_then(|e| e.to_str()) {
                Some("graph" | "metis") => Format::Metis,
                _ => Format::EdgeList,
            },
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndexBase {
    Zero,
    One,
    #[default]
    Auto,
}

impl FromStr for IndexBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" => Ok(IndexBase::Zero),
            "1" => Ok(IndexBase::One),
            "auto" => Ok(IndexBase::Auto),
            other => Err(format!("unknown index base `{other}`")),
        }
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|e| Error::parse(line, format!("bad vertex id `{token}`: {e}")))
}

pub fn parse_metis(text: &str) -> Result<StaticGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('%'));

    let (header_line, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 {
        return Err(Error::parse(header_line, "header must be `n m [fmt]`"));
    }
    let n = parse_id(fields[0], header_line)?;
    let m = parse_id(fields[1], header_line)?;
    if let Some(&fmt) = fields.get(2) {
        if fmt.chars().any(|c| c != '0') {
            return Err(Error::parse(
                header_line,
                "weighted Metis graphs are not supported",
            ));
        }
    }

    let mut edges = Vec::with_capacity(m);
    let mut vertex = 0;
    for (line_no, line) in lines {
        if vertex == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(line_no, "more adjacency lines than vertices"));
        }
        for token in line.split_whitespace() {
            let u = parse_id(token, line_no)?;
            if u == 0 || u > n {
                return Err(Error::parse(
                    line_no,
                    format!("neighbor {u} out of range 1..={n}"),
                ));
            }
            if vertex < u - 1 {
                edges.push((vertex, u - 1));
            } else {
                edges.push((u - 1, vertex));
            }
        }
        vertex += 1;
    }
    if vertex < n {
        // Trailing isolated vertices may omit their empty lines.
        log::debug!("metis: {} adjacency lines for {} vertices", vertex, n);
    }
    let g = StaticGraph::from_edges(&edges, Some(n))?;
    if g.vertex_count() != n {
        return Err(Error::parse(header_line, "vertex count mismatch"));
    }
    if g.edge_count() != m {
        log::warn!(
            "metis header declares {} edges, found {}",
            m,
            g.edge_count()
        );
    }
    Ok(g)
}

pub fn write_metis(g: &StaticGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
    for v in 0..g.vertex_count() {
        let line: Vec<String> = g.neighbors(v).iter().map(|u| (u + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_edge_list(text: &str, base: IndexBase) -> Result<StaticGraph> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::parse(i + 1, "expected `u v`"));
        };
        raw.push((parse_id(a, i + 1)?, parse_id(b, i + 1)?, i + 1));
    }
    let min_id = raw.iter().map(|&(u, v, _)| u.min(v)).min();
    let offset = match base {
        IndexBase::Zero => 0,
        IndexBase::One => 1,
        IndexBase::Auto => usize::from(min_id == Some(1)),
    };
    let mut edges = Vec::with_capacity(raw.len());
    for (u, v, line) in raw {
        if u < offset || v < offset {
            return Err(Error::parse(line, "id 0 in a 1-based edge list"));
        }
        edges.push((u - offset, v - offset));
    }
    StaticGraph::from_edges(&edges, None)
}

pub fn write_edge_list(g: &StaticGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_graph(path: &Path, format: Format, base: IndexBase) -> Result<StaticGraph> {
    let text = fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    match format.resolve(path) {
        Format::Metis => parse_metis(&text),
        _ => parse_edge_list(&text, base),
    }
}

pub fn write_solution(set: &VertexSet) -> String {
    let mut out = format!("# size={}\n", set.len());
    for v in set.iter() {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn parse_solution(text: &str) -> Result<VertexSet> {
    let mut set = VertexSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        set.insert(parse_id(line, i + 1)?);
    }
    Ok(set)
}

pub fn read_solution(path: &Path) -> Result<VertexSet> {
    let text = fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_solution(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn metis_with_comments_and_isolated() {
        let text = "% comment\n4 2\n2\n1 3\n2\n\n";
        let g = parse_metis(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.degree(3), 0);
    }

    #[test]
    fn metis_out_of_range_neighbor() {
        let err = parse_metis("2 1\n3\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn metis_rejects_weights() {
        assert!(parse_metis("2 1 11\n2 1\n1 1\n").is_err());
        assert!(parse_metis("2 1 000\n2\n1\n").is_ok());
    }

    #[test]
    fn edge_list_base_detection() {
        let g = parse_edge_list("# c\n1 2\n2 3\n", IndexBase::Auto).unwrap();
        assert_eq!(g.vertex_count(), 3);
        let g = parse_edge_list("0 1\n1 2\n", IndexBase::Auto).unwrap();
        assert_eq!(g.vertex_count(), 3);
        let g = parse_edge_list("1 2\n", IndexBase::Zero).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(parse_edge_list("0 1\n", IndexBase::One).is_err());
    }

    #[test]
    fn edge_list_overflow_is_parse_error() {
        let err = parse_edge_list("0 99999999999999999999999\n", IndexBase::Zero).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn solution_format() {
        let set: VertexSet = [0, 2, 5].into_iter().collect();
        let text = write_solution(&set);
        assert!(text.starts_with("# size=3\n"));
        assert_eq!(parse_solution(&text).unwrap(), set);
    }

    fn random_graph() -> impl Strategy<Value = StaticGraph> {
        proptest::collection::vec((0usize..50, 0usize..50), 200)
            .prop_map(|edges| StaticGraph::from_edges(&edges, Some(50)).unwrap())
    }

    proptest! {
        #[test]
        fn metis_round_trip(g in random_graph()) {
            prop_assert_eq!(parse_metis(&write_metis(&g)).unwrap(), g);
        }

        #[test]
        fn edge_list_round_trip(g in random_graph()) {
            let back = parse_edge_list(&write_edge_list(&g), IndexBase::Zero).unwrap();
            // Trailing isolated vertices are not representable in an edge list.
            let n = back.vertex_count();
            prop_assert!(n <= g.vertex_count());
            prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        }
    }
}
