//! Analytics for polarization studies of retweet networks.
//!
//! The crate is `no_std` (it needs `alloc`) and holds every numerical piece
//! of the pipeline: graph construction, media-followership PCA, centralities,
//! modularity and map-equation community detection, assortativity with a
//! permutation null model, and Left/Right text statistics. File formats,
//! synthetic data and the CLI live in the `polarnet` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod centrality;
pub mod community;
pub mod error;
pub mod graph;
mod math;
pub mod pca;
pub mod polarization;
pub mod rng;
pub mod text;

pub use error::{Error, Result};
pub use graph::{EdgeRecord, GraphBuilder, RetweetGraph};
pub use pca::{Class, FollowershipMatrix, MediaLoadings, MediaScores};
