//! Vertex-face walks, Grover and Ihara zeta functions on graphs and their
//! embeddings, with numerical checks of the identities connecting them.

pub mod cycles;
pub mod embedding;
pub mod error;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod quadrature;
pub mod series;
pub mod spectra;
pub mod walk;
pub mod zeta;

pub use error::{Error, Result};
