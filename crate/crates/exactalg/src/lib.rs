//! Exact polynomial algebra over ℚ and ℚ(μ).

pub mod bipoly;
pub mod error;
pub mod factor;
pub mod mpoly;
pub mod quotient;
pub mod rat;
pub mod ratfunc;
pub mod resultant;
pub mod ring;
pub mod roots;
pub mod upoly;

pub use bipoly::BiPoly;
pub use error::{AlgError, Result};
pub use mpoly::MPoly;
pub use rat::Rat;
pub use ring::{Field, Ring};
pub use roots::{IsolatedRoot, ThomEncoding};
pub use upoly::{QPoly, UPoly};
