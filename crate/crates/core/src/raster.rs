//! Pixel-count ground truth for ink, and an SVG exporter.
//!
//! Disks and butt-capped edge rectangles are painted as a union on a square
//! sample grid covering the drawing's bounding box. Each sample row is
//! reduced to merged index ranges, so overlaps are never counted twice.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{bounding_box, Segment};
use crate::model::{BoldDrawing, Point};
use crate::transforms::StubSet;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("bounding box is degenerate ({width} x {height})")]
    DegenerateBox { width: f64, height: f64 },
    #[error("invalid raster config: {0}")]
    InvalidConfig(String),
    #[error("{path}: {error}")]
    Io {
        path: std::path::PathBuf,
        error: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RasterConfig {
    /// Pixels along the longer side of the bounding box.
    pub resolution: usize,
    /// Samples per pixel along each axis: 1, 2 or 4.
    pub supersampling: usize,
}

impl Default for RasterConfig {
    fn default() -> Self {
        RasterConfig {
            resolution: 2048,
            supersampling: 2,
        }
    }
}

impl RasterConfig {
    pub fn new(resolution: usize, supersampling: usize) -> Result<Self, RasterError> {
        let cfg = RasterConfig {
            resolution,
            supersampling,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), RasterError> {
        if self.resolution < 64 {
            return Err(RasterError::InvalidConfig(format!(
                "resolution must be at least 64, got {}",
                self.resolution
            )));
        }
        if ![1, 2, 4].contains(&self.supersampling) {
            return Err(RasterError::InvalidConfig(format!(
                "supersampling must be 1, 2 or 4, got {}",
                self.supersampling
            )));
        }
        Ok(())
    }
}

/// Painted area of the drawing in drawing units.
pub fn rasterize_ink(d: &BoldDrawing, cfg: &RasterConfig) -> Result<f64, RasterError> {
    let segs: Vec<Segment> = (0..d.edge_count())
        .map(|i| {
            let (p, q) = d.edge_points(i);
            Segment::new(p, q)
        })
        .collect();
    rasterize_parts(d, &segs, cfg)
}

/// Area by which an edge rectangle drawn from the disk centre pokes out of
/// the disk: the two thin corners the `l - 2r` edge term leaves out. Paid
/// once per edge end, so a crossing-free drawing rasterizes to its formula
/// ink plus `2m` of these.
pub fn end_cap_excess(r: f64, w: f64) -> f64 {
    let a = (w / 2.0).min(r);
    // rectangle half-width a over [0, r] minus the disk area under it
    2.0 * (a * r - 0.5 * (a * (r * r - a * a).sqrt() + r * r * (a / r).asin()))
}

/// Painted area of the disks plus the stub rectangles instead of full edges.
pub fn rasterize_stub_ink(d: &BoldDrawing, stubs: &StubSet, cfg: &RasterConfig) -> Result<f64, RasterError> {
    rasterize_parts(d, &stubs.segments, cfg)
}

enum Shape {
    Disk { c: Point, r: f64 },
    Quad([Point; 4]),
}

impl Shape {
    fn rotated(self, (sin, cos): (f64, f64)) -> Shape {
        let rot = |p: Point| Point::new(p.x * cos - p.y * sin, p.x * sin + p.y * cos);
        match self {
            Shape::Disk { c, r } => Shape::Disk { c: rot(c), r },
            Shape::Quad(q) => Shape::Quad(q.map(rot)),
        }
    }

    fn bounds(&self) -> (Point, Point) {
        match self {
            Shape::Disk { c, r } => (Point::new(c.x - r, c.y - r), Point::new(c.x + r, c.y + r)),
            Shape::Quad(q) => q.iter().fold(
                (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
                |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
            ),
        }
    }

    fn y_range(&self) -> (f64, f64) {
        match self {
            Shape::Disk { c, r } => (c.y - r, c.y + r),
            Shape::Quad(q) => q
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y), hi.max(p.y))),
        }
    }

    /// Horizontal extent of the shape on the line at height `y`.
    fn span(&self, y: f64) -> Option<(f64, f64)> {
        match *self {
            Shape::Disk { c, r } => {
                let dy = y - c.y;
                let h2 = r * r - dy * dy;
                (h2 >= 0.0).then(|| {
                    let h = h2.sqrt();
                    (c.x - h, c.x + h)
                })
            }
            Shape::Quad(q) => {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for k in 0..4 {
                    let (a, b) = (q[k], q[(k + 1) % 4]);
                    if (a.y - y) * (b.y - y) > 0.0 || a.y == b.y {
                        if a.y == y {
                            lo = lo.min(a.x);
                            hi = hi.max(a.x);
                        }
                        continue;
                    }
                    let x = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
                (lo <= hi).then_some((lo, hi))
            }
        }
    }
}

fn shapes(d: &BoldDrawing, segs: &[Segment]) -> Vec<Shape> {
    let (r, w) = (d.params().radius, d.params().width);
    let mut out = Vec::with_capacity(d.node_count() + segs.len());
    if r > 0.0 {
        out.extend(d.layout().positions().iter().map(|&c| Shape::Disk { c, r }));
    }
    if w > 0.0 {
        for s in segs {
            let l = s.length();
            if l == 0.0 {
                continue;
            }
            let u = (s.q - s.p) * (1.0 / l);
            let n = Point::new(-u.y, u.x) * (w / 2.0);
            out.push(Shape::Quad([s.p + n, s.q + n, s.q - n, s.p - n]));
        }
    }
    out
}

const BAND: usize = 64;
const GOLDEN: f64 = 0.618_033_988_749_894_8;
/// Radians; not a simple fraction of a turn.
const FRAME_ANGLE: f64 = 0.3;

fn rasterize_parts(d: &BoldDrawing, segs: &[Segment], cfg: &RasterConfig) -> Result<f64, RasterError> {
    cfg.validate()?;
    let (lo, hi) = bounding_box(d).ok_or(RasterError::DegenerateBox {
        width: 0.0,
        height: 0.0,
    })?;
    let (bw, bh) = (hi.x - lo.x, hi.y - lo.y);
    if !(bw > 0.0 && bh > 0.0 && bw.is_finite() && bh.is_finite()) {
        return Err(RasterError::DegenerateBox {
            width: bw,
            height: bh,
        });
    }
    // Sample rows parallel to an edge alias badly, and axis-parallel edges
    // are common, so sample in a frame turned by a generic angle. Area is
    // unchanged by the rotation.
    let shapes: Vec<Shape> = shapes(d, segs).into_iter().map(|s| s.rotated(FRAME_ANGLE.sin_cos())).collect();
    if shapes.is_empty() {
        return Ok(0.0);
    }
    let (lo, hi) = shapes.iter().map(Shape::bounds).fold(
        (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), (a, b)| (Point::new(lo.x.min(a.x), lo.y.min(a.y)), Point::new(hi.x.max(b.x), hi.y.max(b.y))),
    );
    let (bw, bh) = (hi.x - lo.x, hi.y - lo.y);
    let samples = cfg.resolution * cfg.supersampling;
    let h = bw.max(bh) / samples as f64;
    // one spare sample on every side
    let origin = Point::new(lo.x - h, lo.y - h);
    let nx = (bw / h).ceil() as usize + 2;
    let ny = (bh / h).ceil() as usize + 2;
    let row_y = |j: usize| origin.y + (j as f64 + 0.5) * h;

    let bands = ny.div_ceil(BAND);
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); bands];
    for (k, s) in shapes.iter().enumerate() {
        let (y0, y1) = s.y_range();
        let j0 = (((y0 - origin.y) / h - 0.5).floor().max(0.0) as usize).min(ny - 1);
        let j1 = (((y1 - origin.y) / h - 0.5).ceil().max(0.0) as usize).min(ny - 1);
        for band in members.iter_mut().take(j1 / BAND + 1).skip(j0 / BAND) {
            band.push(k as u32);
        }
    }

    let count: u64 = members
        .par_iter()
        .enumerate()
        .map(|(b, ids)| {
            let mut ranges: Vec<(i64, i64)> = Vec::new();
            let mut total = 0u64;
            for j in b * BAND..((b + 1) * BAND).min(ny) {
                let y = row_y(j);
                // a per-row x phase keeps edges at rational slopes from
                // hitting the same sub-sample offset on every row
                let phase = ((j as f64 + 1.0) * GOLDEN).fract();
                ranges.clear();
                for &k in ids {
                    if let Some((x0, x1)) = shapes[k as usize].span(y) {
                        let i0 = ((x0 - origin.x) / h - phase).ceil() as i64;
                        let i1 = ((x1 - origin.x) / h - phase).floor() as i64;
                        let (i0, i1) = (i0.max(0), i1.min(nx as i64 - 1));
                        if i0 <= i1 {
                            ranges.push((i0, i1));
                        }
                    }
                }
                total += merged_len(&mut ranges);
            }
            total
        })
        .sum();
    Ok(count as f64 * h * h)
}

/// Number of integers covered by the union of the inclusive ranges.
fn merged_len(ranges: &mut [(i64, i64)]) -> u64 {
    ranges.sort_unstable();
    let mut total = 0u64;
    let mut cur: Option<(i64, i64)> = None;
    for &(a, b) in ranges.iter() {
        cur = match cur {
            Some((s, e)) if a <= e + 1 => Some((s, e.max(b))),
            Some((s, e)) => {
                total += (e - s + 1) as u64;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((s, e)) = cur {
        total += (e - s + 1) as u64;
    }
    total
}

/// SVG 1.1 document: edges as butt-capped lines, then disks on top. The y
/// axis points up as in the layout.
pub fn render_svg(d: &BoldDrawing) -> String {
    let p = d.params();
    let (lo, hi) = bounding_box(d).unwrap_or((Point::default(), Point::default()));
    let (bw, bh) = ((hi.x - lo.x).max(0.0), (hi.y - lo.y).max(0.0));
    let tx = |q: Point| (q.x - lo.x, hi.y - q.y);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{bw:.6}" height="{bh:.6}" viewBox="0 0 {bw:.6} {bh:.6}">"#
    );
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="{:.6}" stroke-linecap="butt">"#,
        p.width
    );
    for i in 0..d.edge_count() {
        let (a, b) = d.edge_points(i);
        let ((x1, y1), (x2, y2)) = (tx(a), tx(b));
        let _ = writeln!(s, r#"<line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="black" stroke="none">"#);
    for &c in d.layout().positions() {
        let (cx, cy) = tx(c);
        let _ = writeln!(s, r#"<circle cx="{cx:.6}" cy="{cy:.6}" r="{:.6}"/>"#, p.radius);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

pub fn write_svg(d: &BoldDrawing, path: &Path) -> Result<(), RasterError> {
    std::fs::write(path, render_svg(d)).map_err(|error| RasterError::Io {
        path: path.to_path_buf(),
        error,
    })
}
