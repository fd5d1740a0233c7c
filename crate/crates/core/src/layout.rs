//! Deterministic 2-D layouts: random, circular, force-directed
//! (Fruchterman-Reingold style) and multilevel (matching-based coarsening
//! with force-directed refinement).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Graph, Layout, NodeId, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("force iteration diverged at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("unknown layout algorithm `{0}` (supported: random, circular, force-directed, multilevel)")]
    UnknownAlgorithm(String),
    #[error("invalid layout configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Random,
    Circular,
    ForceDirected,
    Multilevel,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Random,
        Algorithm::Circular,
        Algorithm::ForceDirected,
        Algorithm::Multilevel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Random => "random",
            Algorithm::Circular => "circular",
            Algorithm::ForceDirected => "force-directed",
            Algorithm::Multilevel => "multilevel",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Algorithm::Random),
            "circular" | "circle" => Ok(Algorithm::Circular),
            "force-directed" | "force" | "fr" => Ok(Algorithm::ForceDirected),
            "multilevel" | "ml" => Ok(Algorithm::Multilevel),
            _ => Err(LayoutError::UnknownAlgorithm(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub iterations: usize,
    pub ideal_edge_length: f64,
    pub cooling: f64,
    /// Above this many nodes repulsion only acts within `2 * ideal_edge_length`.
    pub exact_repulsion_limit: usize,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            algorithm: Algorithm::ForceDirected,
            seed: 1,
            iterations: 500,
            ideal_edge_length: 30.0,
            cooling: 0.95,
            exact_repulsion_limit: 2000,
        }
    }
}

impl LayoutConfig {
    pub fn new(algorithm: Algorithm, seed: u64) -> Self {
        LayoutConfig {
            algorithm,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), LayoutError> {
        if self.iterations == 0 {
            return Err(LayoutError::InvalidConfig("iterations must be positive".into()));
        }
        if !(self.ideal_edge_length > 0.0 && self.ideal_edge_length.is_finite()) {
            return Err(LayoutError::InvalidConfig(format!(
                "ideal_edge_length must be positive, got {}",
                self.ideal_edge_length
            )));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(LayoutError::InvalidConfig(format!(
                "cooling must lie in (0, 1), got {}",
                self.cooling
            )));
        }
        Ok(())
    }
}

/// Runs the configured algorithm.
pub fn layout(g: &Graph, config: &LayoutConfig) -> Result<Layout, LayoutError> {
    config.validate()?;
    match config.algorithm {
        Algorithm::Random => Ok(layout_random(g, config)),
        Algorithm::Circular => Ok(layout_circular(g, config)),
        Algorithm::ForceDirected => layout_force_directed(g, config),
        Algorithm::Multilevel => layout_multilevel(g, config),
    }
}

fn into_layout(points: Vec<Point>) -> Layout {
    Layout::new(points).expect("layout engine produced non-finite coordinates")
}

fn random_points(n: usize, side: f64, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.random::<f64>() * side, rng.random::<f64>() * side))
        .collect()
}

/// Uniform positions in `[0, sqrt(n) * k]^2`.
pub fn layout_random(g: &Graph, config: &LayoutConfig) -> Layout {
    let n = g.node_count();
    let side = (n as f64).sqrt() * config.ideal_edge_length;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    into_layout(random_points(n, side, &mut rng))
}

/// Nodes on a circle whose neighbouring points are `k` apart, in id order.
pub fn layout_circular(g: &Graph, config: &LayoutConfig) -> Layout {
    let n = g.node_count();
    if n <= 1 {
        return into_layout(vec![Point::default(); n]);
    }
    let k = config.ideal_edge_length;
    let radius = k / (2.0 * (PI / n as f64).sin());
    let points = (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            Point::new(radius + radius * a.cos(), radius + radius * a.sin())
        })
        .collect();
    into_layout(points)
}

/// Spring embedder: attraction `d^2/k` along edges, repulsion `k^2/d`
/// between node pairs, displacement capped by a cooling temperature.
/// Components are laid out separately and packed on a grid.
pub fn layout_force_directed(g: &Graph, config: &LayoutConfig) -> Result<Layout, LayoutError> {
    config.validate()?;
    let points = per_component(g, config, |sub, cfg, rng| {
        let side = (sub.node_count() as f64).sqrt() * cfg.ideal_edge_length;
        let mut pos = random_points(sub.node_count(), side, rng);
        let t0 = side / 10.0;
        spring_embed(sub, None, &mut pos, cfg, cfg.iterations, t0.max(cfg.ideal_edge_length))?;
        Ok(pos)
    })?;
    Ok(into_layout(points))
}

/// One refinement level of a multilevel run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub nodes: usize,
    pub length_interpolated: f64,
    pub length_refined: f64,
    /// Contraction applied to keep the refined length within 5% of the
    /// interpolated one (1.0 when not needed).
    pub contraction: f64,
}

/// Levels are coarsened until at most this many nodes remain.
pub const COARSEST_SIZE: usize = 50;
const MAX_LENGTH_GROWTH: f64 = 1.05;

pub fn layout_multilevel(g: &Graph, config: &LayoutConfig) -> Result<Layout, LayoutError> {
    layout_multilevel_traced(g, config).map(|(l, _)| l)
}

/// Multilevel layout plus per-level refinement statistics (finest level last,
/// components in order).
pub fn layout_multilevel_traced(
    g: &Graph,
    config: &LayoutConfig,
) -> Result<(Layout, Vec<LevelTrace>), LayoutError> {
    config.validate()?;
    if g.node_count() <= COARSEST_SIZE {
        return Ok((layout_force_directed(g, config)?, Vec::new()));
    }
    let mut trace = Vec::new();
    let points = per_component(g, config, |sub, cfg, rng| {
        if sub.node_count() <= COARSEST_SIZE {
            let side = (sub.node_count() as f64).sqrt() * cfg.ideal_edge_length;
            let mut pos = random_points(sub.node_count(), side, rng);
            spring_embed(sub, None, &mut pos, cfg, cfg.iterations, (side / 10.0).max(cfg.ideal_edge_length))?;
            return Ok(pos);
        }
        multilevel_component(sub, cfg, rng, &mut trace)
    })?;
    Ok((into_layout(points), trace))
}

struct Level {
    graph: Graph,
    weights: Vec<f64>,
    /// Coarse node of every node of the finer level.
    parent: Vec<NodeId>,
}

fn multilevel_component(
    g: &Graph,
    cfg: &LayoutConfig,
    rng: &mut ChaCha8Rng,
    trace: &mut Vec<LevelTrace>,
) -> Result<Vec<Point>, LayoutError> {
    let k = cfg.ideal_edge_length;
    let mut levels: Vec<Level> = Vec::new();
    let mut current = g.clone();
    let mut weights = vec![1.0; g.edge_count()];
    while current.node_count() > COARSEST_SIZE {
        let level = coarsen(&current, &weights, rng);
        // stop when matching no longer shrinks the graph noticeably
        if level.graph.node_count() as f64 > 0.9 * current.node_count() as f64 {
            break;
        }
        current = level.graph.clone();
        weights = level.weights.clone();
        levels.push(level);
    }

    let side = (current.node_count() as f64).sqrt() * k;
    let mut pos = random_points(current.node_count(), side, rng);
    spring_embed(&current, Some(&weights), &mut pos, cfg, cfg.iterations, (side / 10.0).max(k))?;

    let refine_iterations = (cfg.iterations / 4).max(30);
    for depth in (0..levels.len()).rev() {
        let fine_graph: &Graph = if depth == 0 { g } else { &levels[depth - 1].graph };
        let fine_weights: Option<&[f64]> = if depth == 0 { None } else { Some(&levels[depth - 1].weights) };
        let parent = &levels[depth].parent;
        let mut fine = Vec::with_capacity(parent.len());
        for &c in parent {
            let angle = rng.random::<f64>() * 2.0 * PI;
            fine.push(pos[c as usize] + Point::new(angle.cos(), angle.sin()) * (k / 2.0));
        }
        let before = total_length(fine_graph, &fine);
        spring_embed(fine_graph, fine_weights, &mut fine, cfg, refine_iterations, k)?;
        let after = total_length(fine_graph, &fine);
        let mut contraction = 1.0;
        if before > 0.0 && after > MAX_LENGTH_GROWTH * before {
            contraction = MAX_LENGTH_GROWTH * before / after;
            let c = centroid(&fine);
            for p in fine.iter_mut() {
                *p = c + (*p - c) * contraction;
            }
        }
        trace.push(LevelTrace {
            nodes: fine_graph.node_count(),
            length_interpolated: before,
            length_refined: total_length(fine_graph, &fine),
            contraction,
        });
        pos = fine;
    }
    Ok(pos)
}

/// Heavy-edge matching in a seeded random node order.
fn coarsen(g: &Graph, weights: &[f64], rng: &mut ChaCha8Rng) -> Level {
    let n = g.node_count();
    let mut adj: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
    for (&(u, v), &w) in g.edges().iter().zip(weights) {
        adj[u as usize].push((v, w));
        adj[v as usize].push((u, w));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parent = vec![NodeId::MAX; n];
    let mut next = 0;
    for &u in &order {
        if parent[u] != NodeId::MAX {
            continue;
        }
        let mate = adj[u]
            .iter()
            .filter(|(v, _)| parent[*v as usize] == NodeId::MAX)
            .fold(None::<(NodeId, f64)>, |best, &(v, w)| match best {
                Some((bv, bw)) if bw > w || (bw == w && bv < v) => Some((bv, bw)),
                _ => Some((v, w)),
            });
        parent[u] = next;
        if let Some((v, _)) = mate {
            parent[v as usize] = next;
        }
        next += 1;
    }
    let mut merged: HashMap<(NodeId, NodeId), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut coarse_weights = Vec::new();
    for (&(u, v), &w) in g.edges().iter().zip(weights) {
        let (a, b) = (parent[u as usize], parent[v as usize]);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        match merged.get(&key) {
            Some(&i) => coarse_weights[i] += w,
            None => {
                merged.insert(key, edges.len());
                edges.push(key);
                coarse_weights.push(w);
            }
        }
    }
    Level {
        graph: Graph::new(next as usize, edges).expect("coarse edges are in range"),
        weights: coarse_weights,
        parent,
    }
}

fn total_length(g: &Graph, pos: &[Point]) -> f64 {
    g.edges()
        .iter()
        .map(|&(u, v)| pos[u as usize].distance(pos[v as usize]))
        .sum()
}

fn centroid(pos: &[Point]) -> Point {
    if pos.is_empty() {
        return Point::default();
    }
    pos.iter().fold(Point::default(), |a, &p| a + p) * (1.0 / pos.len() as f64)
}

/// Force iteration in place. `weights` scale attraction per edge.
fn spring_embed(
    g: &Graph,
    weights: Option<&[f64]>,
    pos: &mut [Point],
    cfg: &LayoutConfig,
    iterations: usize,
    start_temperature: f64,
) -> Result<(), LayoutError> {
    let n = pos.len();
    if n < 2 {
        return Ok(());
    }
    let k = cfg.ideal_edge_length;
    let k2 = k * k;
    let floor = k / 100.0;
    let mut temperature = start_temperature;
    let mut disp = vec![Point::default(); n];
    let approximate = n > cfg.exact_repulsion_limit;
    let cutoff = 2.0 * k;

    for iteration in 0..iterations {
        disp.iter_mut().for_each(|d| *d = Point::default());

        let push = |i: usize, j: usize, pos: &[Point], disp: &mut [Point]| {
            let mut delta = pos[i] - pos[j];
            let mut dist = delta.norm();
            if dist < 1e-9 {
                // coincident nodes: separate along a fixed index-dependent direction
                let a = (i * 7919 + j * 104_729) as f64;
                delta = Point::new(a.cos(), a.sin()) * 1e-6;
                dist = 1e-6;
            }
            let f = k2 / dist;
            let step = delta * (f / dist);
            disp[i] = disp[i] + step;
            disp[j] = disp[j] - step;
        };

        if approximate {
            let cell = |p: Point| ((p.x / cutoff).floor() as i64, (p.y / cutoff).floor() as i64);
            let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
            for (i, &p) in pos.iter().enumerate() {
                grid.entry(cell(p)).or_default().push(i);
            }
            for i in 0..n {
                let (cx, cy) = cell(pos[i]);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                            for &j in bucket {
                                if j > i && pos[i].distance(pos[j]) < cutoff {
                                    push(i, j, pos, &mut disp);
                                }
                            }
                        }
                    }
                }
            }
        } else {
            for i in 0..n {
                for j in i + 1..n {
                    push(i, j, pos, &mut disp);
                }
            }
        }

        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let (u, v) = (u as usize, v as usize);
            let delta = pos[u] - pos[v];
            let dist = delta.norm();
            let w = weights.map_or(1.0, |ws| ws[e]);
            let step = delta * (w * dist / k);
            disp[u] = disp[u] - step;
            disp[v] = disp[v] + step;
        }

        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = d.norm();
            if !len.is_finite() {
                return Err(LayoutError::Diverged { iteration });
            }
            if len > 0.0 {
                *p = *p + *d * (len.min(temperature) / len);
            }
        }
        temperature = (temperature * cfg.cooling).max(floor);
    }
    Ok(())
}

/// Lays out each connected component with `run` and packs the results
/// row by row with one ideal edge length of padding.
fn per_component<F>(g: &Graph, cfg: &LayoutConfig, mut run: F) -> Result<Vec<Point>, LayoutError>
where
    F: FnMut(&Graph, &LayoutConfig, &mut ChaCha8Rng) -> Result<Vec<Point>, LayoutError>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let components = g.components();
    if components.len() <= 1 {
        return run(g, cfg, &mut rng);
    }
    let mut local = vec![u32::MAX; g.node_count()];
    let mut member_edges: Vec<Vec<(NodeId, NodeId)>> = vec![Vec::new(); components.len()];
    let mut owner = vec![0usize; g.node_count()];
    for (c, members) in components.iter().enumerate() {
        for (i, &v) in members.iter().enumerate() {
            local[v as usize] = i as u32;
            owner[v as usize] = c;
        }
    }
    for &(u, v) in g.edges() {
        member_edges[owner[u as usize]].push((local[u as usize], local[v as usize]));
    }

    let mut placed: Vec<(Vec<Point>, Point, Point)> = Vec::with_capacity(components.len());
    for (members, edges) in components.iter().zip(member_edges) {
        let sub = Graph::new(members.len(), edges).expect("component edges are in range");
        let pos = run(&sub, cfg, &mut rng)?;
        let (mut lo, mut hi) = (pos[0], pos[0]);
        for p in &pos {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        placed.push((pos, lo, hi));
    }

    let pad = cfg.ideal_edge_length;
    let columns = (components.len() as f64).sqrt().ceil() as usize;
    let mut out = vec![Point::default(); g.node_count()];
    let mut y = 0.0;
    for (row_members, row) in components.chunks(columns).zip(placed.chunks(columns)) {
        let mut x = 0.0;
        let mut row_height: f64 = 0.0;
        for (members, (pos, lo, hi)) in row_members.iter().zip(row) {
            let offset = Point::new(x, y) - *lo;
            for (&v, &p) in members.iter().zip(pos) {
                out[v as usize] = p + offset;
            }
            x += hi.x - lo.x + pad;
            row_height = row_height.max(hi.y - lo.y);
        }
        y += row_height + pad;
    }
    Ok(out)
}
