//! Layout measurements: edge lengths, crossings, drawing area, properness.

mod crossings;
mod proper;
mod segment;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use crossings::{
    bruteforce_segments, count_crossings_bruteforce, count_crossings_sweep, crossing_points,
    drawing_segments, pair_crosses, pruned_count, sweep_segments, x_overlap_pairs, BruteForceCount, TaggedSegment,
};
pub use proper::{check_proper, ConcurrentPoint, PropernessReport};
pub use segment::{
    classify, collinear_overlap, crosses, orientation, segments_intersect, Segment, SegmentRelation, EPS,
};

use crate::model::{BoldDrawing, DrawingMetrics, Point};

/// Per-edge Euclidean lengths and their sum `L`.
pub fn edge_lengths(d: &BoldDrawing) -> (Vec<f64>, f64) {
    let lengths: Vec<f64> = (0..d.edge_count())
        .map(|i| {
            let (p, q) = d.edge_points(i);
            p.distance(q)
        })
        .collect();
    let total = lengths.iter().sum();
    (lengths, total)
}

/// Axis-aligned box `(min, max)` of all disks and edge rectangles; `None`
/// for a drawing without nodes.
pub fn bounding_box(d: &BoldDrawing) -> Option<(Point, Point)> {
    let pos = d.layout().positions();
    if pos.is_empty() {
        return None;
    }
    let pad = d.params().radius.max(if d.edge_count() > 0 {
        d.params().width / 2.0
    } else {
        0.0
    });
    let (mut lo, mut hi) = (pos[0], pos[0]);
    for p in pos {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let pad = Point::new(pad, pad);
    Some((lo - pad, hi + pad))
}

/// How the drawing area `A` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum AreaMode {
    /// Bounding box of disks (inflated by `r`) and rectangles (by `w/2`).
    #[default]
    Auto,
    Fixed(f64),
}

impl fmt::Display for AreaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AreaMode::Auto => f.write_str("auto"),
            AreaMode::Fixed(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for AreaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(AreaMode::Auto);
        }
        let s = s.strip_prefix("fixed:").unwrap_or(s);
        match s.parse::<f64>() {
            Ok(a) if a.is_finite() && a >= 0.0 => Ok(AreaMode::Fixed(a)),
            _ => Err(format!("area must be `auto` or a non-negative number, got `{s}`")),
        }
    }
}

pub fn bounding_area(d: &BoldDrawing, mode: AreaMode) -> f64 {
    match mode {
        AreaMode::Fixed(a) => a,
        AreaMode::Auto => match bounding_box(d) {
            Some((lo, hi)) => (hi.x - lo.x) * (hi.y - lo.y),
            None => 0.0,
        },
    }
}

/// Which counter supplies `cr(D)`. All of them give the same count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossingMethod {
    /// Sweep or x-pruned pair scan, whichever the cost estimate favours.
    #[default]
    Auto,
    Sweep,
    Pruned,
    BruteForce,
}

impl CrossingMethod {
    /// The concrete counter `Auto` resolves to for these segments.
    pub fn resolve(self, segs: &[TaggedSegment]) -> CrossingMethod {
        if self != CrossingMethod::Auto {
            return self;
        }
        let m = segs.len();
        if m < 2 {
            return CrossingMethod::Sweep;
        }
        // The sweep pays per event and per crossing, the scan per candidate
        // pair. Crossings are estimated from a fixed pair sample.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let samples = 4096;
        let hits = (0..samples)
            .filter(|_| {
                let i = rng.random_range(0..m);
                let j = rng.random_range(0..m);
                i != j && pair_crosses(&segs[i], &segs[j])
            })
            .count();
        let pairs = (m * (m - 1) / 2) as f64;
        let crossings = pairs * hits as f64 / samples as f64;
        let sweep = SWEEP_EVENT_COST * m as f64 * (m as f64).log2() + SWEEP_CROSSING_COST * crossings;
        let scan = SCAN_PAIR_COST * x_overlap_pairs(segs) as f64;
        if scan < sweep {
            CrossingMethod::Pruned
        } else {
            CrossingMethod::Sweep
        }
    }
}

// rough nanoseconds per unit of work, measured on one core
const SWEEP_EVENT_COST: f64 = 50.0;
const SWEEP_CROSSING_COST: f64 = 500.0;
const SCAN_PAIR_COST: f64 = 20.0;

pub fn count_crossings(d: &BoldDrawing, method: CrossingMethod) -> u64 {
    count_segment_crossings(&drawing_segments(d), method)
}

pub fn count_segment_crossings(segs: &[TaggedSegment], method: CrossingMethod) -> u64 {
    match method.resolve(segs) {
        CrossingMethod::Sweep | CrossingMethod::Auto => sweep_segments(segs),
        CrossingMethod::Pruned => pruned_count(segs),
        CrossingMethod::BruteForce => bruteforce_segments(segs).crossings,
    }
}

/// Measures `L`, `cr(D)` and `A` for a drawing.
pub fn measure(d: &BoldDrawing, area: AreaMode, method: CrossingMethod) -> DrawingMetrics {
    let (edge_lengths, total_edge_length) = edge_lengths(d);
    DrawingMetrics {
        total_edge_length,
        crossings: count_crossings(d, method),
        area: bounding_area(d, area),
        edge_lengths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_graph, Layout, RenderParams};

    fn square(edges: &[(u32, u32)], r: f64, w: f64) -> BoldDrawing {
        BoldDrawing::new(
            build_graph(4, edges).unwrap(),
            Layout::from_coords(&[(0., 0.), (0., 10.), (10., 0.), (10., 10.)]).unwrap(),
            RenderParams::with_default_gamma(r, w).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn square_examples() {
        let parallel = square(&[(0, 1), (2, 3)], 1.0, 0.1);
        let diagonals = square(&[(0, 3), (1, 2)], 1.0, 0.1);
        assert_eq!(count_crossings_bruteforce(&parallel).crossings, 0);
        assert_eq!(count_crossings_bruteforce(&diagonals).crossings, 1);
        assert_eq!(count_crossings_sweep(&parallel), 0);
        assert_eq!(count_crossings_sweep(&diagonals), 1);
        assert!((edge_lengths(&parallel).1 - 20.0).abs() < 1e-12);
        assert!((edge_lengths(&diagonals).1 - 20.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((bounding_area(&parallel, AreaMode::Auto) - 144.0).abs() < 1e-12);
        assert_eq!(bounding_area(&parallel, AreaMode::Fixed(100.0)), 100.0);
    }

    #[test]
    fn k4_on_convex_position() {
        let all: Vec<(u32, u32)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let d = square(&all, 1.0, 0.1);
        assert_eq!(count_crossings_bruteforce(&d).crossings, 1);
        assert_eq!(count_crossings_sweep(&d), 1);
    }

    #[test]
    fn methods_agree_and_auto_resolves() {
        use CrossingMethod::*;
        let dense = crate::generate::random_drawing(60, 300, 10.0, RenderParams::new(0.1, 0.05, 1.0).unwrap(), 2).unwrap();
        let segs = drawing_segments(&dense);
        assert_eq!(Auto.resolve(&segs), Pruned);
        assert_eq!(Sweep.resolve(&segs), Sweep);
        let counts: Vec<u64> = [Auto, Sweep, Pruned, BruteForce].iter().map(|&m| count_crossings(&dense, m)).collect();
        assert!(counts[0] > 0 && counts.iter().all(|&c| c == counts[0]), "{counts:?}");
        // long parallel edges: many x-overlaps, no crossings
        let g = build_graph(400, &(0..200).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>()).unwrap();
        let coords: Vec<(f64, f64)> = (0..400).map(|i| (((i % 2) * 1000) as f64, (i / 2) as f64)).collect();
        let stripes = BoldDrawing::new(g, Layout::from_coords(&coords).unwrap(), RenderParams::new(0.1, 0.05, 1.0).unwrap()).unwrap();
        assert_eq!(Auto.resolve(&drawing_segments(&stripes)), Sweep);
        assert_eq!(count_crossings(&stripes, Auto), 0);
    }

    #[test]
    fn single_disk_box() {
        let d = BoldDrawing::new(
            build_graph(1, &[]).unwrap(),
            Layout::from_coords(&[(0., 0.)]).unwrap(),
            RenderParams::with_default_gamma(1.0, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(bounding_area(&d, AreaMode::Auto), 4.0);
        assert_eq!(edge_lengths(&d).1, 0.0);
    }

    #[test]
    fn area_mode_parsing() {
        assert_eq!("auto".parse::<AreaMode>(), Ok(AreaMode::Auto));
        assert_eq!("100".parse::<AreaMode>(), Ok(AreaMode::Fixed(100.0)));
        assert_eq!("fixed:2.5".parse::<AreaMode>(), Ok(AreaMode::Fixed(2.5)));
        assert!("-1".parse::<AreaMode>().is_err());
        assert!("big".parse::<AreaMode>().is_err());
    }
}
