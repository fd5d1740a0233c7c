use std::collections::HashSet;

use super::ParseError;
use crate::model::{Graph, NodeId};

/// A parsed Chaco/METIS file and any non-fatal issues found in it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChacoParse {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

/// Chaco/METIS adjacency format. Warnings are logged.
pub fn parse_chaco(text: &str) -> Result<Graph, ParseError> {
    let parsed = parse_chaco_detailed(text)?;
    for w in &parsed.warnings {
        log::warn!("chaco: {w}");
    }
    Ok(parsed.graph)
}

/// Header `n m [fmt [ncon]]`, then one line per vertex listing its
/// 1-indexed neighbours. `fmt` flags vertex sizes, vertex weights and edge
/// weights (digits right to left); weights are skipped. `%` lines are
/// comments; an empty line is a vertex without neighbours.
pub fn parse_chaco_detailed(text: &str) -> Result<ChacoParse, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = loop {
        match lines.next() {
            Some((_, "")) => continue,
            Some(h) => break h,
            None => return Err(ParseError::new(1, "empty file, expected `n m` header")),
        }
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 4 {
        return Err(ParseError::new(hline, format!("malformed header `{header}`")));
    }
    let num = |t: &str, what: &str| -> Result<usize, ParseError> {
        t.parse()
            .map_err(|_| ParseError::new(hline, format!("{what} `{t}` is not a non-negative integer")))
    };
    let n = num(head[0], "node count")?;
    let declared_m = num(head[1], "edge count")?;
    if n > NodeId::MAX as usize {
        return Err(ParseError::new(hline, "graph too large"));
    }
    let fmt = head.get(2).copied().unwrap_or("0");
    if fmt.len() > 3 || !fmt.chars().all(|c| c == '0' || c == '1') {
        return Err(ParseError::new(hline, format!("unknown fmt code `{fmt}`")));
    }
    let flag = |pos: usize| fmt.len() > pos && fmt.as_bytes()[fmt.len() - 1 - pos] == b'1';
    let (edge_weights, vertex_weights, vertex_sizes) = (flag(0), flag(1), flag(2));
    let ncon = match head.get(3) {
        Some(t) => num(t, "ncon")?,
        None => 1,
    };
    let skip_front = usize::from(vertex_sizes) + if vertex_weights { ncon } else { 0 };

    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut self_loops = 0usize;
    let mut vertex = 0usize;
    let mut last_line = hline;
    for (line, l) in lines {
        last_line = line;
        if vertex == n {
            if l.is_empty() {
                continue;
            }
            return Err(ParseError::new(line, format!("more than {n} vertex lines")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < skip_front {
            return Err(ParseError::new(line, "vertex line shorter than its weight fields"));
        }
        let stride = if edge_weights { 2 } else { 1 };
        let neigh = &toks[skip_front..];
        if neigh.len() % stride != 0 {
            return Err(ParseError::new(line, "neighbour without an edge weight"));
        }
        for t in neigh.iter().step_by(stride) {
            let id: usize = t
                .parse()
                .map_err(|_| ParseError::new(line, format!("non-integer neighbour `{t}`")))?;
            if id == 0 || id > n {
                return Err(ParseError::new(line, format!("neighbour {id} outside 1..={n} (ids are 1-indexed)")));
            }
            let (u, v) = (vertex as NodeId, (id - 1) as NodeId);
            if u == v {
                self_loops += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                edges.push(key);
            }
        }
        vertex += 1;
    }
    if vertex < n {
        warnings.push(format!(
            "only {vertex} of {n} vertex lines present after line {last_line}; the rest are isolated"
        ));
    }
    if self_loops > 0 {
        warnings.push(format!("dropped {self_loops} self-loop entries"));
    }
    if edges.len() != declared_m {
        warnings.push(format!(
            "header declares {declared_m} edges, found {} after deduplication",
            edges.len()
        ));
    }
    Ok(ChacoParse {
        graph: Graph::new(n, edges).expect("ids validated"),
        warnings,
    })
}
