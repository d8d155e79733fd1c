//! Exact and numerical analysis of the central path of semidefinite programs.

pub mod error;
pub mod instance;
pub mod linalg;
pub mod polysys;
pub mod tracer;
pub mod urs;
pub mod limits;
pub mod rate;
pub mod report;

pub use error::{CoreError, Result};
pub use instance::SdoInstance;
