//! Continuous-time quantum walks on weighted graphs.
//!
//! The crate builds the graph families used in perfect state transfer (PST)
//! constructions, evolves walks through a dense symmetric eigendecomposition
//! and decides PST either from closed-form sufficiency conditions or from an
//! exact phase-alignment certificate. Everything here is pure computation;
//! file formats, the expression language and the command-line tool live in
//! the `pstwalk` crate.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cones;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod partitions;
pub mod products;
pub mod pst;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Graph, VertexId};
pub use matrix::Matrix;
pub use spectral::{Amplitude, EigenDecomposition, SpectralProjectors};
