//! Orlicz modulation-space norms, time–frequency transforms and
//! pseudo-differential operators on sampled uniform grids.

pub mod entropy;
pub mod error;
pub mod field;
pub mod modspace;
pub mod orlicz;
pub mod psido;
pub mod suite;
pub mod tfa;
pub mod weights;
pub mod young;

pub use error::{Error, Result};
