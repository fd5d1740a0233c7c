//! Graph file parsers, layout CSV and analysis reports.

mod chaco;
mod edge_list;
mod layout_csv;
mod matrix_market;
mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chaco::{parse_chaco, parse_chaco_detailed, ChacoParse};
pub use edge_list::{parse_edge_list, write_edge_list};
pub use layout_csv::{parse_layout_csv, read_layout, write_layout, write_layout_csv};
pub use matrix_market::parse_matrix_market;
pub use report::{emit_report, read_report_csv, read_report_json, write_report, ReportFormat, ReportRow, CSV_HEADER};

use crate::model::Graph;

/// A parse failure at a 1-based line number.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
    #[error("{path}: {error}")]
    Parse {
        path: PathBuf,
        error: ParseError,
    },
    #[error("{0}")]
    Invalid(String),
}

impl IoError {
    pub(crate) fn io(path: &Path, error: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            error,
        }
    }

    pub(crate) fn parse(path: &Path, error: ParseError) -> Self {
        IoError::Parse {
            path: path.to_path_buf(),
            error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    MatrixMarket,
    Chaco,
    EdgeList,
}

impl GraphFormat {
    /// Guess from the file extension: `.mtx`, `.graph`/`.chaco`/`.metis`,
    /// anything else is read as an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("mtx") => GraphFormat::MatrixMarket,
            Some("graph" | "chaco" | "metis") => GraphFormat::Chaco,
            _ => GraphFormat::EdgeList,
        }
    }

    pub fn parse(self, text: &str) -> Result<Graph, ParseError> {
        match self {
            GraphFormat::MatrixMarket => parse_matrix_market(text),
            GraphFormat::Chaco => parse_chaco(text),
            GraphFormat::EdgeList => parse_edge_list(text),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::MatrixMarket => "matrix-market",
            GraphFormat::Chaco => "chaco",
            GraphFormat::EdgeList => "edge-list",
        })
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "matrix-market" | "mtx" => Ok(GraphFormat::MatrixMarket),
            "chaco" | "metis" | "graph" => Ok(GraphFormat::Chaco),
            "edge-list" | "edges" | "txt" => Ok(GraphFormat::EdgeList),
            _ => Err(format!("unknown graph format `{s}`")),
        }
    }
}

/// Reads and parses a graph file; the format defaults to the extension guess.
pub fn read_graph(path: &Path, format: Option<GraphFormat>) -> Result<Graph, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    let format = format.unwrap_or_else(|| GraphFormat::from_path(path));
    format.parse(&text).map_err(|e| IoError::parse(path, e))
}

/// Data lines with their 1-based numbers, skipping blanks and comments.
pub(crate) fn content_lines<'a>(
    text: &'a str,
    comment: &'a [char],
) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines().enumerate().filter_map(move |(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with(comment)).then_some((i + 1, t))
    })
}
