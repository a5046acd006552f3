//! Device-oriented hierarchical ROI video encryption.
//!
//! A small tile-partitioned intra codec whose sensitive tiles are scrambled at
//! the level of quantized syntax elements, under one key per sensitivity class.
//! A device-tier policy decides which classes are scrambled for a given display
//! and which class keys that display may hold.

pub mod bitstream;
pub mod codec;
pub mod crypt;
pub mod fixture;
pub mod metrics;
pub mod pipeline;
pub mod policy;
pub mod roi;
pub mod scalar;

use thiserror::Error;

/// Residual/coefficient block in the codec's working precision.
pub type Block8 = codec::Block<i64>;
/// Scalar used for reported quality figures.
pub type Decibels = f64;
/// Quantized level type carried by [`codec::CoeffBlock`].
pub type Level = i64;

pub use bitstream::{Container, ContainerHeader, TileRecord};
pub use codec::{FrameYUV, QuantParams, TileGrid};
pub use crypt::{KeyBundle, MasterKey};
pub use metrics::MetricsReport;
pub use policy::{DeviceTier, PolicyMatrix};
pub use roi::{RoiBox, RoiTimeline, SensitivityClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Bitstream(#[from] bitstream::BitstreamError),
    #[error(transparent)]
    Codec(#[from] codec::CodecError),
    #[error(transparent)]
    Roi(#[from] roi::RoiError),
    #[error(transparent)]
    Crypt(#[from] crypt::CryptError),
    #[error(transparent)]
    Policy(#[from] policy::PolicyError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
    #[error("{0}")]
    Usage(String),
}
