use std::fmt::Write as _;
use std::path::Path;

use super::{IoError, ParseError};
use crate::model::{Layout, Point};

/// `node,x,y` rows with shortest round-trip floats, so reading back is exact.
pub fn write_layout_csv(layout: &Layout) -> String {
    let mut out = String::from("node,x,y\n");
    for (i, p) in layout.positions().iter().enumerate() {
        let _ = writeln!(out, "{i},{:?},{:?}", p.x, p.y);
    }
    out
}

pub fn write_layout(path: &Path, layout: &Layout) -> Result<(), IoError> {
    std::fs::write(path, write_layout_csv(layout)).map_err(|e| IoError::io(path, e))
}

/// Parses `node,x,y` rows for exactly `node_count` nodes in any order.
pub fn parse_layout_csv(text: &str, node_count: usize) -> Result<Layout, ParseError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| ParseError::new(1, e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    if names != ["node", "x", "y"] {
        return Err(ParseError::new(1, format!("expected header `node,x,y`, got `{}`", names.join(","))));
    }
    let mut slots: Vec<Option<Point>> = vec![None; node_count];
    let mut rows = 0usize;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            ParseError::new(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows += 1;
        if rec.len() != 3 {
            return Err(ParseError::new(line, format!("expected 3 fields, got {}", rec.len())));
        }
        let node: usize = rec[0]
            .parse()
            .map_err(|_| ParseError::new(line, format!("bad node id `{}`", &rec[0])))?;
        let coord = |s: &str| -> Result<f64, ParseError> {
            let v: f64 = s
                .parse()
                .map_err(|_| ParseError::new(line, format!("bad coordinate `{s}`")))?;
            if !v.is_finite() {
                return Err(ParseError::new(line, format!("non-finite coordinate `{s}`")));
            }
            Ok(v)
        };
        let p = Point::new(coord(&rec[1])?, coord(&rec[2])?);
        let slot = slots
            .get_mut(node)
            .ok_or_else(|| ParseError::new(line, format!("node {node} outside 0..{node_count}")))?;
        if slot.replace(p).is_some() {
            return Err(ParseError::new(line, format!("duplicate row for node {node}")));
        }
    }
    if rows != node_count {
        return Err(ParseError::new(rows + 2, format!("expected {node_count} rows, found {rows}")));
    }
    let positions = slots
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| ParseError::new(rows + 2, format!("missing row for node {i}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Layout::new(positions).expect("coordinates checked finite"))
}

pub fn read_layout(path: &Path, node_count: usize) -> Result<Layout, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_layout_csv(&text, node_count).map_err(|e| IoError::parse(path, e))
}
