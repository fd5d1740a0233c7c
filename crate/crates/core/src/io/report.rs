use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IoError;

/// One analysed drawing. Column order is the field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub graph_name: String,
    pub layout_name: String,
    pub n: usize,
    pub m: usize,
    pub r: f64,
    pub w: f64,
    pub gamma: f64,
    #[serde(rename = "L")]
    pub total_length: f64,
    pub cr: u64,
    #[serde(rename = "A")]
    pub area: f64,
    pub ink: f64,
    pub density: f64,
    pub feasible: bool,
    pub raster_ink: Option<f64>,
    /// Only present for positive ink.
    pub log10_ink: Option<f64>,
}

impl ReportRow {
    pub fn log10_of(ink: f64) -> Option<f64> {
        (ink > 0.0).then(|| ink.log10())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown report format `{s}`, expected csv or json")),
        }
    }
}

/// Serialises rows to a string; CSV gets a header, JSON is an array.
pub fn emit_report(rows: &[ReportRow], format: ReportFormat) -> Result<String, IoError> {
    for row in rows {
        for (name, v) in [
            ("r", row.r),
            ("w", row.w),
            ("L", row.total_length),
            ("A", row.area),
            ("ink", row.ink),
            ("density", row.density),
        ] {
            if !v.is_finite() {
                return Err(IoError::Invalid(format!("{}: {name} is not finite", row.graph_name)));
            }
        }
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                w.write_record(CSV_HEADER).map_err(|e| IoError::Invalid(e.to_string()))?;
            }
            for row in rows {
                w.serialize(row).map_err(|e| IoError::Invalid(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| IoError::Invalid(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| IoError::Invalid(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "graph_name", "layout_name", "n", "m", "r", "w", "gamma", "L", "cr", "A", "ink", "density",
    "feasible", "raster_ink", "log10_ink",
];

/// Writes to `path`, or stdout when `path` is `None`. Nothing is written if
/// serialisation fails.
pub fn write_report(rows: &[ReportRow], format: ReportFormat, path: Option<&Path>) -> Result<(), IoError> {
    let text = emit_report(rows, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| IoError::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| IoError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn read_report_csv(text: &str) -> Result<Vec<ReportRow>, IoError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn read_report_json(text: &str) -> Result<Vec<ReportRow>, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(ink: f64, raster: Option<f64>) -> ReportRow {
        ReportRow {
            graph_name: "square".into(),
            layout_name: "given".into(),
            n: 4,
            m: 4,
            r: 1.0,
            w: 0.1,
            gamma: 1.0,
            total_length: 40.0,
            cr: 0,
            area: 144.0,
            ink,
            density: ink / 144.0,
            feasible: true,
            raster_ink: raster,
            log10_ink: ReportRow::log10_of(ink),
        }
    }

    #[test]
    fn csv_and_json_agree() {
        let rows = vec![row(14.166370614359172, Some(14.2)), row(-3.0, None)];
        let csv = emit_report(&rows, ReportFormat::Csv).unwrap();
        assert!(csv.starts_with(&CSV_HEADER.join(",")));
        let json = emit_report(&rows, ReportFormat::Json).unwrap();
        assert_eq!(read_report_csv(&csv).unwrap(), rows);
        assert_eq!(read_report_json(&json).unwrap(), rows);
        assert_eq!(rows[1].log10_ink, None);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(emit_report(&[row(f64::NAN, None)], ReportFormat::Json).is_err());
    }

    #[test]
    fn empty_csv_has_header() {
        let s = emit_report(&[], ReportFormat::Csv).unwrap();
        assert_eq!(s.trim(), CSV_HEADER.join(","));
    }
}
