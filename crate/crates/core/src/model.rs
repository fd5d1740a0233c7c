//! Graph, layout and rendering-parameter types shared by the rest of the crate.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("edge {index} ({u}, {v}) has an endpoint outside 0..{node_count}")]
    EndpointOutOfRange {
        index: usize,
        u: NodeId,
        v: NodeId,
        node_count: usize,
    },
    #[error("edge {index} is a self-loop on node {node}")]
    SelfLoop { index: usize, node: NodeId },
    #[error("graph density is undefined for a graph without nodes")]
    UndefinedDensity,
    #[error("layout has {found} positions but the graph has {expected} nodes")]
    LayoutSize { expected: usize, found: usize },
    #[error("position of node {node} is not finite")]
    NonFinitePosition { node: usize },
    #[error("invalid render parameter: {0}")]
    InvalidParams(String),
}

/// A point (or vector) in drawing units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Simple undirected graph. Edges are stored as `(lo, hi)` with `lo < hi`,
/// in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl Graph {
    /// Builds a simple graph, folding `(u, v)` and `(v, u)` into one edge.
    /// Self-loops and out-of-range endpoints are rejected.
    pub fn new(
        node_count: usize,
        edge_list: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (index, (u, v)) in edge_list.into_iter().enumerate() {
            if u as usize >= node_count || v as usize >= node_count {
                return Err(ModelError::EndpointOutOfRange {
                    index,
                    u,
                    v,
                    node_count,
                });
            }
            if u == v {
                return Err(ModelError::SelfLoop { index, node: u });
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                edges.push(key);
            }
        }
        Ok(Graph { node_count, edges })
    }

    pub fn empty(node_count: usize) -> Self {
        Graph {
            node_count,
            edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Edge density `m / n`.
    pub fn density(&self) -> Result<f64, ModelError> {
        if self.node_count == 0 {
            return Err(ModelError::UndefinedDensity);
        }
        Ok(self.edges.len() as f64 / self.node_count as f64)
    }

    /// Adjacency lists, neighbours in edge order.
    pub fn adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    /// Connected components as sorted node lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<NodeId>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.node_count];
        let mut out: Vec<Vec<NodeId>> = Vec::new();
        for start in 0..self.node_count {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start as NodeId];
            comp[start] = id;
            let mut head = 0;
            while head < members.len() {
                let u = members[head] as usize;
                head += 1;
                for &v in &adj[u] {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Free-function form of [`Graph::new`].
pub fn build_graph(
    node_count: usize,
    edge_list: &[(NodeId, NodeId)],
) -> Result<Graph, ModelError> {
    Graph::new(node_count, edge_list.iter().copied())
}

pub fn graph_density(g: &Graph) -> Result<f64, ModelError> {
    g.density()
}

/// Node positions in drawing units, indexed by node id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    positions: Vec<Point>,
}

impl Layout {
    pub fn new(positions: Vec<Point>) -> Result<Self, ModelError> {
        if let Some(node) = positions.iter().position(|p| !p.is_finite()) {
            return Err(ModelError::NonFinitePosition { node });
        }
        Ok(Layout { positions })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self, ModelError> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn centroid(&self) -> Point {
        if self.positions.is_empty() {
            return Point::default();
        }
        let sum = self
            .positions
            .iter()
            .fold(Point::default(), |acc, &p| acc + p);
        sum * (1.0 / self.positions.len() as f64)
    }

    pub fn check_for(&self, g: &Graph) -> Result<(), ModelError> {
        if self.positions.len() != g.node_count() {
            return Err(ModelError::LayoutSize {
                expected: g.node_count(),
                found: self.positions.len(),
            });
        }
        Ok(())
    }
}

/// Disk radius `r`, edge width `w` and density ceiling `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderParams {
    pub radius: f64,
    pub width: f64,
    pub gamma: f64,
}

impl RenderParams {
    pub const DEFAULT_GAMMA: f64 = 1.0;

    pub fn new(radius: f64, width: f64, gamma: f64) -> Result<Self, ModelError> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "radius must be finite and >= 0, got {radius}"
            )));
        }
        if !(width.is_finite() && width >= 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "width must be finite and >= 0, got {width}"
            )));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(ModelError::InvalidParams(format!(
                "gamma must lie in (0, 1], got {gamma}"
            )));
        }
        Ok(RenderParams {
            radius,
            width,
            gamma,
        })
    }

    pub fn with_default_gamma(radius: f64, width: f64) -> Result<Self, ModelError> {
        Self::new(radius, width, Self::DEFAULT_GAMMA)
    }
}

/// A graph, a layout of it and the parameters it is rendered with.
#[derive(Debug, Clone, PartialEq)]
pub struct BoldDrawing {
    graph: Graph,
    layout: Layout,
    params: RenderParams,
}

impl BoldDrawing {
    pub fn new(graph: Graph, layout: Layout, params: RenderParams) -> Result<Self, ModelError> {
        layout.check_for(&graph)?;
        Ok(BoldDrawing {
            graph,
            layout,
            params,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn params(&self) -> RenderParams {
        self.params
    }

    pub fn with_params(&self, params: RenderParams) -> Self {
        BoldDrawing {
            params,
            ..self.clone()
        }
    }

    pub fn with_layout(&self, layout: Layout) -> Result<Self, ModelError> {
        BoldDrawing::new(self.graph.clone(), layout, self.params)
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Endpoint positions of edge `i`.
    pub fn edge_points(&self, i: usize) -> (Point, Point) {
        let (u, v) = self.graph.edges()[i];
        let p = self.layout.positions();
        (p[u as usize], p[v as usize])
    }
}

/// Layout measurements the ink model consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawingMetrics {
    pub total_edge_length: f64,
    pub crossings: u64,
    pub area: f64,
    pub edge_lengths: Vec<f64>,
}

/// Ink of one drawing, split into the node, edge and overlap terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InkReport {
    pub ink_nodes: f64,
    pub ink_edges: f64,
    pub overlap: f64,
    pub ink_total: f64,
    pub density: f64,
    pub feasible: bool,
}
