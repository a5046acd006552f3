//! PSNR, cipher-cost and timing measurement.

mod bench;
mod psnr;
mod report;

pub use bench::{bench, bench_classes, measure, BenchConfig};
pub use psnr::{psnr, psnr_as, psnr_region, region_error, SquaredError};
pub use report::{Db, GlobalPsnr, MetricsReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no tiles in the requested region")]
    NoRegion,
}
