//! Batch comparison of ink across graphs, layouts and (r, w) settings.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::{GenerateError, Generator};
use crate::geometry::{
    bounding_area, check_proper, count_crossings, edge_lengths, measure, AreaMode, CrossingMethod, PropernessReport,
};
use crate::ink::{bounds_report, clarity_decomposition, ink_total, BoundsReport, ClarityReport, InkError, InkMode};
use crate::io::{read_graph, write_report, GraphFormat, IoError, ReportFormat, ReportRow};
use crate::layout::{layout, Algorithm, LayoutConfig, LayoutError};
use crate::model::{BoldDrawing, DrawingMetrics, Graph, Layout, ModelError, RenderParams};
use crate::raster::{rasterize_ink, RasterConfig, RasterError};

pub const DEFAULT_SETTINGS: [(f64, f64); 5] = [(1.0, 0.0), (1.0, 1.0), (2.0, 1.0), (20.0, 1.0), (20.0, 2.0)];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid bench config: {0}")]
    Config(String),
    #[error("graph `{name}` failed to load: {reason}")]
    Graph { name: String, reason: String },
    #[error("graph `{name}`, layout `{layout}`: {error}")]
    Layout {
        name: String,
        layout: String,
        error: LayoutError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ink(#[from] InkError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Io(#[from] IoError),
}

/// Where a bench graph comes from: a file or a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSource {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<GraphFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
}

impl GraphSource {
    /// Relative paths are taken relative to `base`.
    pub fn load(&self, base: &Path) -> Result<Graph, BenchError> {
        let fail = |reason: String| BenchError::Graph {
            name: self.name.clone(),
            reason,
        };
        match (&self.path, &self.generator) {
            (Some(p), None) => {
                let path = if p.is_absolute() { p.clone() } else { base.join(p) };
                read_graph(&path, self.format).map_err(|e| fail(e.to_string()))
            }
            (None, Some(g)) => g.build().map_err(|e: GenerateError| fail(e.to_string())),
            _ => Err(fail("give exactly one of `path` and `generator`".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub graphs: Vec<GraphSource>,
    pub layouts: Vec<LayoutConfig>,
    /// `(r, w)` pairs.
    pub settings: Vec<(f64, f64)>,
    pub gamma: f64,
    /// `auto`, a number, or `fixed:<number>`.
    pub area: String,
    pub raster: bool,
    pub raster_config: RasterConfig,
    pub crossing_method: CrossingMethod,
    /// The aggregate form keeps every row recomputable from its own columns.
    pub ink_mode: InkMode,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            graphs: Vec::new(),
            layouts: Algorithm::ALL.iter().map(|&a| LayoutConfig::new(a, 1)).collect(),
            settings: DEFAULT_SETTINGS.to_vec(),
            gamma: RenderParams::DEFAULT_GAMMA,
            area: "auto".into(),
            raster: false,
            raster_config: RasterConfig::default(),
            crossing_method: CrossingMethod::Auto,
            ink_mode: InkMode::Strict,
        }
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn area_mode(&self) -> Result<AreaMode, BenchError> {
        self.area.parse().map_err(BenchError::Config)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.graphs.is_empty() {
            return Err(BenchError::Config("no graphs listed".into()));
        }
        if self.layouts.is_empty() || self.settings.is_empty() {
            return Err(BenchError::Config("layouts and settings must be non-empty".into()));
        }
        for g in &self.graphs {
            if g.path.is_some() == g.generator.is_some() {
                return Err(BenchError::Config(format!(
                    "graph `{}` needs exactly one of `path` and `generator`",
                    g.name
                )));
            }
        }
        for l in &self.layouts {
            l.validate().map_err(|e| BenchError::Config(e.to_string()))?;
        }
        for &(r, w) in &self.settings {
            RenderParams::new(r, w, self.gamma)?;
        }
        self.area_mode()?;
        if self.raster {
            self.raster_config.validate()?;
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.graphs.len() * self.layouts.len() * self.settings.len()
    }
}

/// Name of a layout in report rows; the seed is appended when the same
/// algorithm appears more than once.
pub fn layout_names(layouts: &[LayoutConfig]) -> Vec<String> {
    layouts
        .iter()
        .map(|l| {
            let dup = layouts.iter().filter(|o| o.algorithm == l.algorithm).count() > 1;
            if dup {
                format!("{}-s{}", l.algorithm.name(), l.seed)
            } else {
                l.algorithm.name().to_string()
            }
        })
        .collect()
}

/// Rows for one graph: every layout, every setting, in config order.
pub fn graph_rows(name: &str, g: &Graph, cfg: &BenchConfig) -> Result<Vec<ReportRow>, BenchError> {
    let area = cfg.area_mode()?;
    let names = layout_names(&cfg.layouts);
    let mut rows = Vec::with_capacity(cfg.layouts.len() * cfg.settings.len());
    for (lc, lname) in cfg.layouts.iter().zip(&names) {
        let started = std::time::Instant::now();
        let positions: Layout = layout(g, lc).map_err(|error| BenchError::Layout {
            name: name.to_string(),
            layout: lname.clone(),
            error,
        })?;
        let base = BoldDrawing::new(g.clone(), positions, RenderParams::new(1.0, 0.0, cfg.gamma)?)?;
        let laid_out = started.elapsed();
        let crossings = count_crossings(&base, cfg.crossing_method);
        log::info!(
            "{name}/{lname}: layout {:.2?}, {crossings} crossings in {:.2?}",
            laid_out,
            started.elapsed() - laid_out
        );
        let (lengths, total) = edge_lengths(&base);
        for &(r, w) in &cfg.settings {
            let d = base.with_params(RenderParams::new(r, w, cfg.gamma)?);
            let metrics = DrawingMetrics {
                total_edge_length: total,
                crossings,
                area: bounding_area(&d, area),
                edge_lengths: lengths.clone(),
            };
            let report = ink_total(&d, &metrics, cfg.ink_mode)?;
            let raster_ink = if cfg.raster {
                Some(rasterize_ink(&d, &cfg.raster_config)?)
            } else {
                None
            };
            rows.push(ReportRow {
                graph_name: name.to_string(),
                layout_name: lname.clone(),
                n: g.node_count(),
                m: g.edge_count(),
                r,
                w,
                gamma: cfg.gamma,
                total_length: total,
                cr: crossings,
                area: metrics.area,
                ink: report.ink_total,
                density: report.density,
                feasible: report.feasible,
                raster_ink,
                log10_ink: ReportRow::log10_of(report.ink_total),
            });
        }
    }
    Ok(rows)
}

/// Everything the analyzer reports for one drawing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub row: ReportRow,
    pub bounds: BoundsReport,
    pub clarity: ClarityReport,
    pub properness: PropernessReport,
}

pub fn analyze_drawing(
    d: &BoldDrawing,
    graph_name: &str,
    layout_name: &str,
    area: AreaMode,
    method: CrossingMethod,
    mode: InkMode,
) -> Result<Analysis, BenchError> {
    let metrics = measure(d, area, method);
    let report = ink_total(d, &metrics, mode)?;
    let p = d.params();
    let (n, m) = (d.node_count(), d.edge_count());
    Ok(Analysis {
        row: ReportRow {
            graph_name: graph_name.to_string(),
            layout_name: layout_name.to_string(),
            n,
            m,
            r: p.radius,
            w: p.width,
            gamma: p.gamma,
            total_length: metrics.total_edge_length,
            cr: metrics.crossings,
            area: metrics.area,
            ink: report.ink_total,
            density: report.density,
            feasible: report.feasible,
            raster_ink: None,
            log10_ink: ReportRow::log10_of(report.ink_total),
        },
        bounds: bounds_report(n, m, p.radius, p.width, metrics.total_edge_length, metrics.crossings, p.gamma, metrics.area),
        clarity: clarity_decomposition(d, &metrics, mode),
        properness: check_proper(d),
    })
}

/// Tally of one qualitative claim over the rows where it applies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClaimTally {
    pub applicable: usize,
    pub held: usize,
    pub violations: Vec<String>,
}

impl ClaimTally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.applicable += 1;
        if ok {
            self.held += 1;
        } else {
            self.violations.push(what());
        }
    }

    pub fn all_held(&self) -> bool {
        self.held == self.applicable
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub rows: usize,
    /// The `(1, 0)` setting uses no more ink than any setting whose edge
    /// term outweighs its crossing term.
    pub base_least_ink: ClaimTally,
    /// `|ink(2,1) - ink(1,1)| / |ink(1,1)| < 0.1` for graphs with `m/n <= 5`.
    pub slight_radius_change: ClaimTally,
}

pub const SLIGHT_CHANGE: f64 = 0.10;
pub const SPARSE_DENSITY: f64 = 5.0;

/// Checks the claims on rows grouped by (graph, layout).
pub fn summarize(rows: &[ReportRow]) -> BenchSummary {
    let mut s = BenchSummary {
        rows: rows.len(),
        ..Default::default()
    };
    let mut start = 0;
    while start < rows.len() {
        let key = (&rows[start].graph_name, &rows[start].layout_name);
        let end = start + rows[start..]
            .iter()
            .take_while(|r| (&r.graph_name, &r.layout_name) == key)
            .count();
        let group = &rows[start..end];
        let find = |r: f64, w: f64| group.iter().find(|x| x.r == r && x.w == w);
        if let Some(base) = find(1.0, 0.0) {
            for row in group.iter().filter(|x| !(x.r == 1.0 && x.w == 0.0)) {
                let edge_term = row.w * (row.total_length - 2.0 * row.m as f64 * row.r);
                if row.r >= 1.0 && edge_term >= row.w * row.w * row.cr as f64 {
                    s.base_least_ink.record(base.ink <= row.ink, || {
                        format!(
                            "{}/{} (r={}, w={}): ink {} < base {}",
                            row.graph_name, row.layout_name, row.r, row.w, row.ink, base.ink
                        )
                    });
                }
            }
        }
        if let (Some(a), Some(b)) = (find(1.0, 1.0), find(2.0, 1.0)) {
            if a.n > 0 && (a.m as f64 / a.n as f64) <= SPARSE_DENSITY {
                let change = (b.ink - a.ink).abs() / a.ink.abs();
                s.slight_radius_change.record(change < SLIGHT_CHANGE, || {
                    format!("{}/{}: relative change {change:.4}", a.graph_name, a.layout_name)
                });
            }
        }
        start = end;
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub rows: Vec<ReportRow>,
    pub summary: BenchSummary,
}

/// Runs the whole bench. Graphs are loaded in config order; if one fails,
/// the rows of the graphs before it are still computed and returned in the
/// error path of [`run_bench_to`].
pub fn run_bench(cfg: &BenchConfig, base: &Path) -> Result<BenchOutcome, (Vec<ReportRow>, BenchError)> {
    if let Err(e) = cfg.validate() {
        return Err((Vec::new(), e));
    }
    let mut graphs = Vec::with_capacity(cfg.graphs.len());
    let mut failure = None;
    for src in &cfg.graphs {
        match src.load(base) {
            Ok(g) => graphs.push((src.name.clone(), g)),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let per_graph: Vec<Result<Vec<ReportRow>, BenchError>> = graphs
        .par_iter()
        .map(|(name, g)| {
            log::info!("bench: {name} (n={}, m={})", g.node_count(), g.edge_count());
            graph_rows(name, g, cfg)
        })
        .collect();
    let mut rows = Vec::with_capacity(cfg.row_count());
    for r in per_graph {
        match r {
            Ok(mut v) => rows.append(&mut v),
            Err(e) => return Err((rows, e)),
        }
    }
    if let Some(e) = failure {
        return Err((rows, e));
    }
    let summary = summarize(&rows);
    Ok(BenchOutcome { rows, summary })
}

/// Runs the bench and writes the report to `out`. On failure the completed
/// rows are still written, together with `<out>.MANIFEST` listing them.
pub fn run_bench_to(
    cfg: &BenchConfig,
    base: &Path,
    out: &Path,
    format: ReportFormat,
) -> Result<BenchOutcome, BenchError> {
    match run_bench(cfg, base) {
        Ok(outcome) => {
            write_report(&outcome.rows, format, Some(out))?;
            Ok(outcome)
        }
        Err((rows, e)) => {
            write_report(&rows, format, Some(out))?;
            let manifest = manifest_path(out);
            let mut text = format!("# incomplete bench: {e}\n# completed rows: {}\n", rows.len());
            text.push_str("graph_name,layout_name,r,w\n");
            for r in &rows {
                text.push_str(&format!("{},{},{},{}\n", r.graph_name, r.layout_name, r.r, r.w));
            }
            std::fs::write(&manifest, text).map_err(|error| IoError::Io {
                path: manifest.clone(),
                error,
            })?;
            Err(e)
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".MANIFEST");
    out.with_file_name(name)
}
