use std::collections::HashSet;

use super::{content_lines, ParseError};
use crate::model::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Field {
    Pattern,
    Real,
    Integer,
    Complex,
}

impl Field {
    fn values(self) -> usize {
        match self {
            Field::Pattern => 0,
            Field::Real | Field::Integer => 1,
            Field::Complex => 2,
        }
    }
}

/// Coordinate-format Matrix Market file as an undirected simple graph.
/// Diagonal entries are dropped, values are ignored and a general matrix is
/// symmetrised.
pub fn parse_matrix_market(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty file, expected a %%MatrixMarket header"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") || tokens.len() < 5 {
        return Err(ParseError::new(1, format!("malformed header `{}`", header.trim())));
    }
    if tokens[1] != "matrix" {
        return Err(ParseError::new(1, format!("unsupported object `{}`", tokens[1])));
    }
    if tokens[2] != "coordinate" {
        return Err(ParseError::new(1, format!("unsupported format `{}`, only coordinate", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "pattern" => Field::Pattern,
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(ParseError::new(1, format!("unknown field `{other}`"))),
    };
    match tokens[4].as_str() {
        "general" | "symmetric" | "skew-symmetric" | "hermitian" => {}
        other => return Err(ParseError::new(1, format!("unknown symmetry `{other}`"))),
    }

    let rest = text.lines().skip(1).collect::<Vec<_>>().join("\n");
    let mut body = content_lines(&rest, &['%']).map(|(i, l)| (i + 1, l));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| ParseError::new(text.lines().count() + 1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| ParseError::new(size_line, format!("malformed size line `{size}`")))?;
    let [rows, cols, entries] = dims[..] else {
        return Err(ParseError::new(size_line, format!("size line needs 3 integers, got `{size}`")));
    };
    if rows != cols {
        return Err(ParseError::new(size_line, format!("adjacency matrix must be square, got {rows}x{cols}")));
    }
    if rows > NodeId::MAX as usize {
        return Err(ParseError::new(size_line, "matrix too large"));
    }

    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut count = 0usize;
    let mut last_line = size_line;
    for (line, l) in body {
        last_line = line;
        count += 1;
        if count > entries {
            return Err(ParseError::new(line, format!("more entries than the declared {entries}")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 2 + field.values() {
            return Err(ParseError::new(line, format!("expected {} fields, got `{l}`", 2 + field.values())));
        }
        let index = |t: &str| -> Result<usize, ParseError> {
            let v: usize = t
                .parse()
                .map_err(|_| ParseError::new(line, format!("non-integer index `{t}`")))?;
            if v == 0 || v > rows {
                return Err(ParseError::new(line, format!("index {v} outside 1..={rows}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (index(toks[0])?, index(toks[1])?);
        for t in &toks[2..2 + field.values()] {
            if t.parse::<f64>().is_err() {
                return Err(ParseError::new(line, format!("non-numeric value `{t}`")));
            }
        }
        if i == j {
            continue;
        }
        let key = (i.min(j) as NodeId, i.max(j) as NodeId);
        if seen.insert(key) {
            edges.push(key);
        }
    }
    if count < entries {
        return Err(ParseError::new(
            last_line + 1,
            format!("declared {entries} entries but found {count}"),
        ));
    }
    Ok(Graph::new(rows, edges).expect("indices validated"))
}
