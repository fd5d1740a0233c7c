//! Derived drawings: scaled layouts, zoomed drawings and partial-edge stubs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{count_segment_crossings, CrossingMethod, Segment, TaggedSegment};
use crate::model::{BoldDrawing, Layout, ModelError, NodeId, RenderParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("scale factor must be positive and finite, got {0}")]
    BadFactor(f64),
    #[error("partial edge ratio must lie in (0, 1], got {0}")]
    BadRatio(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn check_factor(f: f64) -> Result<(), TransformError> {
    if f > 0.0 && f.is_finite() {
        Ok(())
    } else {
        Err(TransformError::BadFactor(f))
    }
}

/// Multiplies every position by `sigma` about the layout centroid, so every
/// edge length is multiplied by `sigma`.
pub fn scale_layout(layout: &Layout, sigma: f64) -> Result<Layout, TransformError> {
    check_factor(sigma)?;
    let c = layout.centroid();
    let positions = layout.positions().iter().map(|&p| c + (p - c) * sigma).collect();
    Ok(Layout::new(positions)?)
}

/// Enlarges positions, radius and width by `sqrt(zeta)`, which multiplies
/// every area (and the ink) by `zeta`.
pub fn zoom_drawing(d: &BoldDrawing, zeta: f64) -> Result<BoldDrawing, TransformError> {
    check_factor(zeta)?;
    let s = zeta.sqrt();
    let layout = scale_layout(d.layout(), s)?;
    let p = d.params();
    let params = RenderParams::new(p.radius * s, p.width * s, p.gamma)?;
    Ok(BoldDrawing::new(d.graph().clone(), layout, params)?)
}

/// Two stubs per edge, anchored at its endpoints, each keeping `p/2` of the
/// edge length. At `p = 1` each edge is kept whole as a single segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StubSet {
    pub ratio: f64,
    pub segments: Vec<Segment>,
    /// Parent edge of each segment.
    pub parents: Vec<(NodeId, NodeId)>,
}

impl StubSet {
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Segments tagged with their parent edge so stubs of the same or of
    /// adjacent edges are never counted as crossing.
    pub fn tagged(&self) -> Vec<TaggedSegment> {
        self.segments
            .iter()
            .enumerate()
            .map(|(k, &seg)| TaggedSegment {
                seg,
                ends: self.parents[k],
            })
            .collect()
    }
}

pub fn partial_edges(d: &BoldDrawing, p: f64) -> Result<StubSet, TransformError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(TransformError::BadRatio(p));
    }
    let mut segments = Vec::with_capacity(2 * d.edge_count());
    let mut parents = Vec::with_capacity(2 * d.edge_count());
    for (i, &edge) in d.graph().edges().iter().enumerate() {
        let (a, b) = d.edge_points(i);
        if p == 1.0 {
            segments.push(Segment::new(a, b));
            parents.push(edge);
        } else {
            segments.push(Segment::new(a, a + (b - a) * (p / 2.0)));
            segments.push(Segment::new(b, b + (a - b) * (p / 2.0)));
            parents.extend([edge, edge]);
        }
    }
    Ok(StubSet {
        ratio: p,
        segments,
        parents,
    })
}

/// Crossings between stubs of non-adjacent parent edges. Two parents lie on
/// two lines, so each parent pair contributes at most one crossing.
pub fn measure_stub_crossings(stubs: &StubSet, method: CrossingMethod) -> u64 {
    count_segment_crossings(&stubs.tagged(), method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{count_crossings_sweep, edge_lengths};
    use crate::model::build_graph;

    fn square(edges: &[(u32, u32)]) -> BoldDrawing {
        BoldDrawing::new(
            build_graph(4, edges).unwrap(),
            Layout::from_coords(&[(0., 0.), (0., 10.), (10., 0.), (10., 10.)]).unwrap(),
            RenderParams::with_default_gamma(1.0, 0.1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_scale() {
        let d = square(&[(0, 1), (2, 3)]);
        assert_eq!(&scale_layout(d.layout(), 1.0).unwrap(), d.layout());
        assert!(scale_layout(d.layout(), 0.0).is_err());
    }

    #[test]
    fn doubling_doubles_length() {
        let d = square(&[(0, 1), (2, 3)]);
        let scaled = d.with_layout(scale_layout(d.layout(), 2.0).unwrap()).unwrap();
        assert!((edge_lengths(&scaled).1 - 40.0).abs() < 1e-12);
    }

    #[test]
    fn zoom_scales_everything() {
        let d = square(&[(0, 3), (1, 2)]);
        let z = zoom_drawing(&d, 4.0).unwrap();
        assert_eq!(z.params().radius, 2.0);
        assert_eq!(z.params().width, 0.2);
        assert_eq!(count_crossings_sweep(&z), 1);
    }

    #[test]
    fn stubs() {
        let d = square(&[(0, 3), (1, 2)]);
        let full = partial_edges(&d, 1.0).unwrap();
        assert!((full.total_length() - edge_lengths(&d).1).abs() < 1e-12);
        assert_eq!(measure_stub_crossings(&full, CrossingMethod::Sweep), 1);
        let half = partial_edges(&d, 0.5).unwrap();
        assert_eq!(measure_stub_crossings(&half, CrossingMethod::Sweep), 0);
        assert_eq!(measure_stub_crossings(&half, CrossingMethod::BruteForce), 0);

        let line = BoldDrawing::new(
            build_graph(2, &[(0, 1)]).unwrap(),
            Layout::from_coords(&[(0., 0.), (10., 0.)]).unwrap(),
            RenderParams::with_default_gamma(0.0, 0.1).unwrap(),
        )
        .unwrap();
        let st = partial_edges(&line, 0.5).unwrap();
        assert!((st.segments[0].length() - 2.5).abs() < 1e-12);
        assert!((st.segments[1].length() - 2.5).abs() < 1e-12);
        assert!(partial_edges(&line, 1.5).is_err());
    }
}
