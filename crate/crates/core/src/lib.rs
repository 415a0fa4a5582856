//! Locally stationary measures on finite windows of `Z^D`.
//!
//! The crate builds exact-rational measures on words over lattice domains,
//! constructs stationary extensions where it can (1-D Markov extension,
//! periodic extension on finite tori) and refutes extendibility where it
//! cannot (entropy chains, SFT emptiness, infeasible window LPs).

pub mod corpus;
pub mod error;
pub mod extension;
pub mod harmonic;
pub mod io;
pub mod lattice;
pub mod lp;
pub mod markov;
pub mod measure;
mod util;

pub use error::{Error, Result};
pub use lattice::{Domain, Envelope, EnvelopeCheck, FiniteModule, LatticePoint, PeriodVector};
pub use measure::{Measure, SignedMeasure, StationarityCheck, Word};
pub use num_rational::BigRational;

/// Resource limits shared by the dense tables, the simplex and the searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest dense table (words on one domain, or configurations on a torus).
    pub max_cells: usize,
    /// Simplex pivots before a solve reports `Aborted`.
    pub pivot_limit: usize,
    /// Backtracking nodes before a search reports `Aborted`.
    pub node_limit: u64,
    /// Largest number of LP variables a window or torus system may have.
    pub max_lp_vars: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_cells: 1_000_000,
            pivot_limit: 200_000,
            node_limit: 50_000_000,
            max_lp_vars: 20_000,
        }
    }
}
