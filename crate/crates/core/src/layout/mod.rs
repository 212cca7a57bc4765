//! Historiograph layout: publications in year layers from top (oldest) to
//! bottom, placed horizontally so that closely related publications sit
//! near each other.

pub mod closeness;
pub mod frame;
pub mod layers;
pub mod optimize;
pub mod svg;

pub use closeness::{closeness, SymMatrix};
pub use frame::{compose_frame, display_subset, FrameEdge, FrameLayer, FrameNode, LayoutFrame, LayoutParams};
pub use layers::{assign_layers, Layering};
pub use optimize::{energy, is_feasible, optimize_x, random_feasible, GridParams};
pub use svg::render_svg;
