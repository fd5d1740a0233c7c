//! Ink accounting for node-link drawings with disk nodes and thick edges.

pub mod generate;
pub mod geometry;
pub mod harness;
pub mod ink;
pub mod io;
pub mod layout;
pub mod model;
pub mod raster;
pub mod transforms;

pub use geometry::{AreaMode, CrossingMethod};
pub use ink::{InkError, InkMode};
pub use layout::{Algorithm, LayoutConfig};
pub use model::{BoldDrawing, DrawingMetrics, Graph, InkReport, Layout, ModelError, NodeId, Point, RenderParams};
