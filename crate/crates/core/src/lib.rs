pub mod audit;
pub mod certify;
pub mod config;
pub mod embed;
pub mod error;
pub mod expander;
pub mod experiments;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod patterns;
pub mod rng;
pub mod routing;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use graph::{HostGraph, Vertex, VertexSet};
