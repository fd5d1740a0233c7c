use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use super::{content_lines, ParseError};
use crate::model::{Graph, NodeId};

/// Whitespace- or comma-separated id pairs, one per line; `%` and `#` start
/// comment lines and columns after the second are ignored. Ids are compacted
/// to `0..n` in first-seen order.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut ids: HashMap<i64, NodeId> = HashMap::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, l) in content_lines(text, &['%', '#']) {
        let mut toks = l.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
        let mut id = |tok: Option<&str>| -> Result<NodeId, ParseError> {
            let t = tok.ok_or_else(|| ParseError::new(line, "expected two node ids"))?;
            let raw: i64 = t
                .parse()
                .map_err(|_| ParseError::new(line, format!("non-integer token `{t}`")))?;
            let next = ids.len() as NodeId;
            Ok(*ids.entry(raw).or_insert(next))
        };
        let u = id(toks.next())?;
        let v = id(toks.next())?;
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Ok(Graph::new(ids.len(), edges).expect("compacted ids are in range"))
}

/// Edge list with a `% n m` header; isolated nodes are listed as comments so
/// the node count survives a round trip through [`parse_edge_list`] only when
/// every node has an edge.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "% {} {}", g.node_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
