//! Sensitivity-classed regions of interest: timelines, tile labeling, tracking.

mod class;
mod cover;
mod timeline;
mod tracker;

pub use class::{SensitivityClass, UnknownClass};
pub use cover::boxes_to_tile_classes;
pub use timeline::{Keyframe, RoiBox, RoiTimeline, RoiTrack};
pub use tracker::{track_box, track_object, LumaPlane, SEARCH_RADIUS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoiError {
    #[error("track {0:?} has no keyframes")]
    EmptyTrack(String),
    #[error("box {0:?} exceeds frame bounds")]
    OutOfBounds(RoiBox),
    #[error("invalid ROI timeline: {0}")]
    InvalidTimeline(String),
    #[error("ROI JSON: {0}")]
    Json(String),
}
