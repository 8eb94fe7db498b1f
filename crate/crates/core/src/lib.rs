//! Graphs, their matrix representations, distributed averaging, centralized
//! accretion and scalar root finding.
//!
//! All randomness comes from [`rng::seeded`], so every seeded routine is a
//! pure function of its arguments. The guide in `book/` walks through each
//! module with runnable snippets; those snippets are compiled as doctests.

pub mod algo;
pub mod centralized;
pub mod consensus;
pub mod distributions;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod matrices;
pub mod rng;
pub mod rootfind;

pub use error::{Error, Result};
pub use graph::{DegreeSequence, Edge, Graph};
pub use matrices::DenseMatrix;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/distributions.md")]
    mod distributions {}
    #[doc = include_str!("../../../book/src/consensus.md")]
    mod consensus {}
    #[doc = include_str!("../../../book/src/centralized.md")]
    mod centralized {}
    #[doc = include_str!("../../../book/src/root_finding.md")]
    mod root_finding {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
