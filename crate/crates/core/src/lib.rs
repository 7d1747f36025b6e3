//! Erdős–Ko–Rado sets of generators in finite classical polar spaces.
//!
//! Exact counting, dual polar graph spectra, Hoffman and Delsarte bounds,
//! stability constants and brute-force clique search over small fields.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod qcore;
pub mod search;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use qcore::{ExactInt, ExactRat, Family, PolarParams};
