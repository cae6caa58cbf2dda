//! Construction, verification and classification of KM-arcs in PG(2, 2^h)
//! and of the F2-linear sets behind them.

pub mod arcs;
pub mod census;
pub mod bitlin;
pub mod error;
pub mod gf2field;
pub mod linsets;
pub mod projgeom;
pub mod symmetry;
pub mod tracesys;

pub use error::{Error, Result};
