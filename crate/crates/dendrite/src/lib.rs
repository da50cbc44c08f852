//! Exact analysis of polygonal systems of contraction similarities.
//!
//! The crate validates systems of contracting similarities attached to a
//! convex polygon (containment, single-vertex contacts, vertex coverage and
//! contractibility of the union), checks declared symmetry groups, iterates
//! the Hutchinson operator with exact cell bookkeeping, extracts the main
//! tree and point classifications of the dendrite attractor, builds and
//! verifies zippers, and solves the Moran equation for similarity
//! dimensions. All coordinates live in one cyclotomic number field, so
//! every geometric predicate is decided exactly.

pub mod attractor;
pub mod cli;
pub mod dimension;
pub mod error;
pub mod geometry;
pub mod render;
pub mod report;
pub mod scalar;
pub mod search;
pub mod specfile;
pub mod symmetry;
pub mod system;
pub mod topology;
pub mod zipper;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Entry point for the `dendrite` binary; returns the process exit code.
pub fn cli_main() -> i32 {
    let mut stdout = std::io::stdout().lock();
    cli::run(std::env::args_os(), &mut stdout)
}
