use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::crossings::{bruteforce_segments, crossing_points, drawing_segments};
use crate::model::{BoldDrawing, NodeId, Point};

/// Two or more crossing points of distinct edge pairs closer than the edge
/// width, i.e. a spot where at least three edge rectangles may meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrentPoint {
    pub at: Point,
    /// Sorted, deduplicated edge indices involved.
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropernessReport {
    pub disk_overlaps: Vec<(NodeId, NodeId)>,
    pub concurrent_points: Vec<ConcurrentPoint>,
    pub collinear_overlaps: Vec<(usize, usize)>,
    pub verdict: bool,
}

pub fn check_proper(d: &BoldDrawing) -> PropernessReport {
    let disk_overlaps = disk_overlaps(d);
    let segs = drawing_segments(d);
    let collinear_overlaps = bruteforce_segments(&segs).collinear_overlaps;
    let concurrent_points = concurrent_points(&crossing_points(&segs), d.params().width);
    let verdict =
        disk_overlaps.is_empty() && concurrent_points.is_empty() && collinear_overlaps.is_empty();
    PropernessReport {
        disk_overlaps,
        concurrent_points,
        collinear_overlaps,
        verdict,
    }
}

/// Node pairs whose disks intersect (centre distance at most `2r`).
fn disk_overlaps(d: &BoldDrawing) -> Vec<(NodeId, NodeId)> {
    let r = d.params().radius;
    let pos = d.layout().positions();
    let mut order: Vec<usize> = (0..pos.len()).collect();
    order.sort_by(|&a, &b| pos[a].x.total_cmp(&pos[b].x).then(a.cmp(&b)));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if pos[j].x - pos[i].x > 2.0 * r {
                break;
            }
            if pos[i].distance(pos[j]) <= 2.0 * r {
                out.push((i.min(j) as NodeId, i.max(j) as NodeId));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Groups crossing points of distinct pairs lying within `width` of each
/// other. Points at a shared vertex never appear here since adjacent edges do
/// not produce crossings.
fn concurrent_points(points: &[(usize, usize, Point)], width: f64) -> Vec<ConcurrentPoint> {
    let tol = width.max(1e-9);
    let cell = |p: Point| ((p.x / tol).floor() as i64, (p.y / tol).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, &(_, _, p)) in points.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(k);
    }
    // union-find over crossing points
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (k, &(_, _, p)) in points.iter().enumerate() {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &other in bucket {
                    if other > k && points[other].2.distance(p) <= tol {
                        let (a, b) = (find(&mut parent, k), find(&mut parent, other));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..points.len() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(k);
    }
    let mut out: Vec<ConcurrentPoint> = groups
        .into_values()
        .filter(|g| g.len() >= 2)
        .map(|g| {
            let mut edges: Vec<usize> = g.iter().flat_map(|&k| [points[k].0, points[k].1]).collect();
            edges.sort_unstable();
            edges.dedup();
            let sum = g.iter().fold(Point::default(), |acc, &k| acc + points[k].2);
            ConcurrentPoint {
                at: sum * (1.0 / g.len() as f64),
                edges,
            }
        })
        .collect();
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_graph, Layout, RenderParams};

    fn drawing(n: usize, edges: &[(u32, u32)], coords: &[(f64, f64)], r: f64, w: f64) -> BoldDrawing {
        BoldDrawing::new(
            build_graph(n, edges).unwrap(),
            Layout::from_coords(coords).unwrap(),
            RenderParams::with_default_gamma(r, w).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn parallel_square_edges_are_proper() {
        let d = drawing(
            4,
            &[(0, 1), (2, 3)],
            &[(0., 0.), (0., 10.), (10., 0.), (10., 10.)],
            1.0,
            0.1,
        );
        assert!(check_proper(&d).verdict);
    }

    #[test]
    fn close_disks_overlap() {
        let d = drawing(2, &[], &[(0., 0.), (1., 0.)], 1.0, 0.0);
        let rep = check_proper(&d);
        assert_eq!(rep.disk_overlaps, vec![(0, 1)]);
        assert!(!rep.verdict);
    }

    #[test]
    fn three_concurrent_diagonals() {
        let coords = [(0., 0.), (10., 10.), (0., 10.), (10., 0.), (5., -2.), (5., 12.)];
        let d = drawing(6, &[(0, 1), (2, 3), (4, 5)], &coords, 0.5, 0.1);
        let rep = check_proper(&d);
        assert_eq!(rep.concurrent_points.len(), 1);
        assert_eq!(rep.concurrent_points[0].edges, vec![0, 1, 2]);
        assert!(!rep.verdict);
    }

    #[test]
    fn collinear_overlap_is_a_violation() {
        let d = drawing(4, &[(0, 1), (2, 3)], &[(0., 0.), (6., 0.), (3., 0.), (9., 0.)], 0.5, 0.1);
        let rep = check_proper(&d);
        assert_eq!(rep.collinear_overlaps, vec![(0, 1)]);
        assert!(!rep.verdict);
    }
}
