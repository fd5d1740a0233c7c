//! The ink model of a bold drawing and everything derived from it.
//!
//! With `n` nodes drawn as disks of radius `r`, `m` edges drawn as
//! rectangles of width `w`, total edge length `L` and `cr` crossings:
//!
//! ```text
//! ink = n*pi*r^2 + w*(L - 2*m*r) - w^2*cr
//! ```
//!
//! The first term is node ink, the second edge ink (each rectangle shortened
//! by the two disks it runs into) and the last the ink saved where two
//! rectangles cross, approximated as `w^2` per crossing. A drawing is
//! feasible for area `A` and density ceiling `gamma` when `ink <= gamma*A`.
//!
//! Scaling multiplies node positions only; all scaling functions here take
//! the *length* multiplier `sigma` directly. Zooming multiplies positions,
//! radius and width, and is parameterised by the *area* multiplier `zeta`
//! (lengths grow by `sqrt(zeta)`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BoldDrawing, DrawingMetrics, InkReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InkError {
    #[error("drawing area must be positive, got {0}")]
    NonPositiveArea(f64),
    #[error("ink density is undefined for a drawing of zero area")]
    UndefinedDensity,
    #[error("this quantity needs at least one node")]
    NoNodes,
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// How the edge term treats edges shorter than `2r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InkMode {
    /// Per-edge term `w * max(0, l_e - 2r)`.
    #[default]
    Clamped,
    /// Aggregate `w * (L - 2mr)`, negative for very short edges.
    Strict,
}

/// Closed interval; `hi` may be `+inf` when unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InkComponents {
    pub ink_nodes: f64,
    pub ink_edges: f64,
    pub overlap: f64,
}

impl InkComponents {
    pub fn total(&self) -> f64 {
        self.ink_nodes + self.ink_edges - self.overlap
    }
}

/// Node, edge and overlap terms from aggregate quantities.
pub fn ink_components(n: usize, m: usize, r: f64, w: f64, total_length: f64, crossings: u64) -> InkComponents {
    InkComponents {
        ink_nodes: n as f64 * PI * r * r,
        ink_edges: w * (total_length - 2.0 * m as f64 * r),
        overlap: w * w * crossings as f64,
    }
}

/// Total ink from aggregate quantities.
pub fn ink_value(n: usize, m: usize, r: f64, w: f64, total_length: f64, crossings: u64) -> f64 {
    ink_components(n, m, r, w, total_length, crossings).total()
}

/// Ink terms for a measured drawing under the given edge-term mode.
pub fn drawing_ink_components(d: &BoldDrawing, metrics: &DrawingMetrics, mode: InkMode) -> InkComponents {
    let p = d.params();
    let mut c = ink_components(
        d.node_count(),
        d.edge_count(),
        p.radius,
        p.width,
        metrics.total_edge_length,
        metrics.crossings,
    );
    if mode == InkMode::Clamped {
        c.ink_edges = p.width
            * metrics
                .edge_lengths
                .iter()
                .map(|l| (l - 2.0 * p.radius).max(0.0))
                .sum::<f64>();
    }
    c
}

/// Full ink report: total, density `ink / A` and the area verdict.
pub fn ink_total(d: &BoldDrawing, metrics: &DrawingMetrics, mode: InkMode) -> Result<InkReport, InkError> {
    let c = drawing_ink_components(d, metrics, mode);
    let ink_total = c.total();
    let gamma = d.params().gamma;
    let (density, feasible) = if d.node_count() == 0 {
        (0.0, true)
    } else if metrics.area > 0.0 {
        (ink_total / metrics.area, check_area_constraint(ink_total, metrics.area, gamma)?)
    } else {
        return Err(InkError::UndefinedDensity);
    };
    Ok(InkReport {
        ink_nodes: c.ink_nodes,
        ink_edges: c.ink_edges,
        overlap: c.overlap,
        ink_total,
        density,
        feasible,
    })
}

/// `ink / A <= gamma`.
pub fn check_area_constraint(ink: f64, area: f64, gamma: f64) -> Result<bool, InkError> {
    if !(area > 0.0) {
        return Err(InkError::NonPositiveArea(area));
    }
    Ok(ink / area <= gamma)
}

/// `B = gamma*A - w*L + w^2*cr + m^2*w^2/(pi*n)`, the slack left for the
/// node term once the radius is written as `r* + delta`.
pub fn radius_slack(n: usize, m: usize, w: f64, total_length: f64, crossings: u64, gamma: f64, area: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    gamma * area - w * total_length + w * w * crossings as f64 + m * m * w * w / (PI * n)
}

/// Radii `r` for which the drawing stays within `gamma * A`.
pub fn radius_bounds(
    n: usize,
    m: usize,
    w: f64,
    total_length: f64,
    crossings: u64,
    gamma: f64,
    area: f64,
) -> Result<Interval, InkError> {
    if n == 0 {
        return Err(InkError::NoNodes);
    }
    let b = radius_slack(n, m, w, total_length, crossings, gamma, area);
    if b < 0.0 {
        return Err(InkError::Infeasible(format!(
            "no radius satisfies the density ceiling (B = {b})"
        )));
    }
    let pn = PI * n as f64;
    let centre = w * m as f64 / pn;
    let half = (b / pn).sqrt();
    Ok(Interval::new((centre - half).max(0.0), centre + half))
}

/// Feasible edge widths for a fixed radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthBounds {
    /// The component starting at `w = 0`.
    pub feasible: Interval,
    /// Widths so large that crossing overlap pulls the ink back under the
    /// ceiling. Present only when crossings exist and the peak ink exceeds it.
    pub upper_branch: Option<Interval>,
}

/// Solves `0 <= n*pi*r^2 + w*(L - 2mr) - w^2*cr <= gamma*A` for `w >= 0`.
pub fn width_bounds(
    n: usize,
    m: usize,
    r: f64,
    total_length: f64,
    crossings: u64,
    gamma: f64,
    area: f64,
) -> Result<WidthBounds, InkError> {
    if n == 0 {
        return Err(InkError::NoNodes);
    }
    let base = n as f64 * PI * r * r;
    let slope = total_length - 2.0 * m as f64 * r;
    let c = crossings as f64;
    let limit = gamma * area;
    if base > limit {
        return Err(InkError::Infeasible(format!(
            "node ink {base} alone exceeds gamma*A = {limit}"
        )));
    }
    if crossings == 0 {
        let hi = if slope > 0.0 {
            (limit - base) / slope
        } else if slope < 0.0 {
            base / -slope
        } else {
            f64::INFINITY
        };
        return Ok(WidthBounds {
            feasible: Interval::new(0.0, hi),
            upper_branch: None,
        });
    }
    // positive root of the non-negativity quadratic
    let nonneg_hi = ((slope + (slope * slope + 4.0 * c * base).sqrt()) / (2.0 * c)).max(0.0);
    let disc = slope * slope - 4.0 * c * (limit - base);
    if disc <= 0.0 || slope <= 0.0 {
        return Ok(WidthBounds {
            feasible: Interval::new(0.0, nonneg_hi),
            upper_branch: None,
        });
    }
    let root = disc.sqrt();
    let lower_cut = (slope - root) / (2.0 * c);
    let upper_cut = (slope + root) / (2.0 * c);
    Ok(WidthBounds {
        feasible: Interval::new(0.0, lower_cut),
        upper_branch: Some(Interval::new(upper_cut.min(nonneg_hi), nonneg_hi)),
    })
}

/// The ink-minimising radius and the minimum ink it gives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinInk {
    pub radius: f64,
    pub ink: f64,
}

/// `r* = w*d/pi` with `d = m/n`; `min ink = w*L - w^2*cr - m^2*w^2/(pi*n)`.
pub fn min_ink_radius(n: usize, m: usize, w: f64, total_length: f64, crossings: u64) -> Result<MinInk, InkError> {
    if n == 0 {
        return Err(InkError::NoNodes);
    }
    let (nf, mf) = (n as f64, m as f64);
    Ok(MinInk {
        radius: w * (mf / nf) / PI,
        ink: w * total_length - w * w * crossings as f64 - mf * mf * w * w / (PI * nf),
    })
}

/// Ink change when node positions are scaled so every length grows by `sigma`.
pub fn scale_ink_delta(w: f64, total_length: f64, sigma: f64) -> f64 {
    w * (sigma - 1.0) * total_length
}

/// Ink after zooming by area factor `zeta`.
pub fn zoom_ink(ink: f64, zeta: f64) -> f64 {
    zeta * ink
}

/// Crossing-free specialisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarReport {
    pub ink: f64,
    /// `w <= (gamma*A - n*pi*r^2) / (L - 2mr)`; absent when `L <= 2mr`.
    pub width_bound: Option<f64>,
    /// Largest total edge length a maximal planar graph (`m = 3n - 6`) can
    /// have within the ceiling; absent when `w == 0`.
    pub max_total_length: Option<f64>,
}

pub fn planar_formulas(n: usize, m: usize, r: f64, w: f64, total_length: f64, gamma: f64, area: f64) -> PlanarReport {
    let nf = n as f64;
    let ink = ink_value(n, m, r, w, total_length, 0);
    let edge_span = total_length - 2.0 * m as f64 * r;
    let width_bound = (edge_span > 0.0).then(|| (gamma * area - nf * PI * r * r) / edge_span);
    let max_total_length =
        (w > 0.0).then(|| (gamma * area - 12.0 * r * w - nf * (PI * r * r - 6.0 * w * r)) / w);
    PlanarReport {
        ink,
        width_bound,
        max_total_length,
    }
}

/// Bounds for drawings whose edges all have one length `l`, with `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualLengthBounds {
    /// `w*cr/m <= l <= gamma*A/(w*m) + w*cr/m`.
    pub length: Interval,
    /// Crossing bound `m*l/w` at the largest admissible `l`.
    pub crossing_bound_at_max: f64,
}

pub fn equal_length_bounds(
    m: usize,
    w: f64,
    crossings: u64,
    gamma: f64,
    area: f64,
) -> Option<EqualLengthBounds> {
    if m == 0 || w <= 0.0 {
        return None;
    }
    let mf = m as f64;
    let lo = w * crossings as f64 / mf;
    let hi = gamma * area / (w * mf) + lo;
    Some(EqualLengthBounds {
        length: Interval::new(lo, hi),
        crossing_bound_at_max: mf * hi / w,
    })
}

/// `cr <= m*l/w` for an equal-length drawing.
pub fn equal_length_crossing_bound(m: usize, l: f64, w: f64) -> Option<f64> {
    (w > 0.0).then(|| m as f64 * l / w)
}

/// Ink and crossing relations of a partial-edge drawing keeping fraction `p`
/// of every edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialEdgeReport {
    pub ink_partial: f64,
    /// `cr - cr' <= (1 - p) * L / w`, equivalent to `ink(D') <= ink(D)`.
    pub necessity_holds: bool,
    /// `pL/w - gamma*A/w^2 <= cr' <= pL/w` (lower end floored at 0);
    /// absent when `w == 0`.
    pub crossing_interval: Option<Interval>,
}

#[allow(clippy::too_many_arguments)]
pub fn partial_edge_formulas(
    n: usize,
    m: usize,
    r: f64,
    w: f64,
    total_length: f64,
    p: f64,
    cr_full: u64,
    cr_partial: u64,
    gamma: f64,
    area: f64,
) -> Result<PartialEdgeReport, InkError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(InkError::InvalidArgument(format!("partial ratio must lie in (0, 1], got {p}")));
    }
    let ink_partial = ink_value(n, m, r, w, p * total_length, cr_partial);
    if w <= 0.0 {
        return Ok(PartialEdgeReport {
            ink_partial,
            necessity_holds: true,
            crossing_interval: None,
        });
    }
    let saved = cr_full as f64 - cr_partial as f64;
    let hi = p * total_length / w;
    let lo = (hi - gamma * area / (w * w)).max(0.0);
    Ok(PartialEdgeReport {
        ink_partial,
        necessity_holds: saved <= (1.0 - p) * total_length / w,
        crossing_interval: Some(Interval::new(lo.min(hi), hi)),
    })
}

/// Ink read as node clarity + edge clarity - ambiguity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClarityReport {
    pub clarity_nodes: f64,
    pub clarity_edges: f64,
    pub ambiguity_overlap: f64,
}

impl ClarityReport {
    pub fn total(&self) -> f64 {
        self.clarity_nodes + self.clarity_edges - self.ambiguity_overlap
    }
}

pub fn clarity_decomposition(d: &BoldDrawing, metrics: &DrawingMetrics, mode: InkMode) -> ClarityReport {
    let c = drawing_ink_components(d, metrics, mode);
    ClarityReport {
        clarity_nodes: c.ink_nodes,
        clarity_edges: c.ink_edges,
        ambiguity_overlap: c.overlap,
    }
}

/// `ink(w') - ink(w) = (w' - w) * (L - 2mr - (w + w') * cr)` at fixed layout and radius.
pub fn width_delta_ink(w: f64, w_prime: f64, total_length: f64, m: usize, r: f64, crossings: u64) -> f64 {
    (w_prime - w) * (total_length - 2.0 * m as f64 * r - (w + w_prime) * crossings as f64)
}

/// `n*pi*(r'^2 - r^2)`, the node-term change only.
pub fn radius_delta_ink(n: usize, r: f64, r_prime: f64) -> f64 {
    n as f64 * PI * (r_prime * r_prime - r * r)
}

/// Radius change computed both ways: the node-term identity and the full
/// ink difference, which also moves the edge term by `-2*m*w*(r' - r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusDelta {
    pub node_term: f64,
    pub full: f64,
    pub discrepancy: f64,
}

pub fn radius_delta_report(n: usize, m: usize, w: f64, r: f64, r_prime: f64) -> RadiusDelta {
    let node_term = radius_delta_ink(n, r, r_prime);
    let full = node_term - 2.0 * m as f64 * w * (r_prime - r);
    RadiusDelta {
        node_term,
        full,
        discrepancy: full - node_term,
    }
}

/// All factor bounds for one drawing; each entry is absent when it does not
/// apply or is infeasible (the reason is kept in `notes`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub slack_b: f64,
    pub r_interval: Option<Interval>,
    pub w_interval: Option<Interval>,
    pub w_upper_branch: Option<Interval>,
    pub l_interval: Option<Interval>,
    pub cr_bound: Option<f64>,
    pub planar_l_max: Option<f64>,
    pub min_ink: Option<MinInk>,
    pub notes: Vec<String>,
}

#[allow(clippy::too_many_arguments)]
pub fn bounds_report(
    n: usize,
    m: usize,
    r: f64,
    w: f64,
    total_length: f64,
    crossings: u64,
    gamma: f64,
    area: f64,
) -> BoundsReport {
    let mut notes = Vec::new();
    let r_interval = radius_bounds(n, m, w, total_length, crossings, gamma, area)
        .map_err(|e| notes.push(format!("radius: {e}")))
        .ok();
    let widths = width_bounds(n, m, r, total_length, crossings, gamma, area)
        .map_err(|e| notes.push(format!("width: {e}")))
        .ok();
    let equal = equal_length_bounds(m, w, crossings, gamma, area);
    let mean_length = if m > 0 { total_length / m as f64 } else { 0.0 };
    BoundsReport {
        slack_b: if n > 0 {
            radius_slack(n, m, w, total_length, crossings, gamma, area)
        } else {
            f64::NAN
        },
        r_interval,
        w_interval: widths.map(|b| b.feasible),
        w_upper_branch: widths.and_then(|b| b.upper_branch),
        l_interval: equal.map(|e| e.length),
        cr_bound: equal_length_crossing_bound(m, mean_length, w),
        planar_l_max: planar_formulas(n, m, r, w, total_length, gamma, area).max_total_length,
        min_ink: min_ink_radius(n, m, w, total_length, crossings).ok(),
        notes,
    }
}
