//! Cohomological equivariant index of transversally elliptic symbols on model
//! manifolds with torus and cyclic actions, with an independent counting
//! oracle to check it against.

pub mod ball;
pub mod cartan;
pub mod cohindex;
pub mod distributions;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod symbols;

pub use error::{IndexError, Result};

/// Version of this library, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
