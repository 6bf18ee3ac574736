pub mod bounds;
pub mod corpus;
pub mod cylgrid;
pub mod error;
pub mod flow;
pub mod gammoid;
pub mod insulation;
pub mod graph;
pub mod par;
pub mod pattern;
pub mod reducer;
pub mod surface;

pub use error::{Error, Result};
pub use graph::Graph;
