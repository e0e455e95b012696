//! Enumeration of maximal biclusters with constant values on columns (CVC)
//! in numerical matrices.
//!
//! Four miners share one incremental-closure search engine:
//!
//! * [`Algorithm::InClose2`] enumerates formal concepts of a 0/1 matrix;
//! * [`Algorithm::Cvcp`] enumerates maximal perfect CVC biclusters;
//! * [`Algorithm::Cvc`] enumerates maximal CVC biclusters within ε and blocks
//!   duplicates with a symbol table of generated row-sets;
//! * [`Algorithm::Cvc2`] produces the same set as `Cvc` without the symbol
//!   table, using a row-canonicity test instead.
//!
//! Brute-force oracles, a verifier, a synthetic planted-bicluster generator
//! and a benchmark harness complete the crate.

pub mod bench;
pub mod bicluster;
pub mod dataio;
pub mod error;
pub mod fixtures;
pub mod kernels;
pub mod matrix;
pub mod miners;
pub mod oracle;
pub mod params;
pub mod predicates;
pub mod syngen;
pub mod verify;

pub use bicluster::{Bicluster, BiclusterSet};
pub use error::{Error, Result};
pub use matrix::DataMatrix;
pub use miners::{mine, mine_cvc, mine_cvc2, mine_cvcp, mine_inclose2, mine_with, MineOptions, MiningStats, Sink};
pub use params::{Algorithm, MiningParams};
