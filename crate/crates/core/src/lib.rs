pub mod canonical;
pub mod cli;
pub mod complexes;
pub mod decorations;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod perm;

pub use error::{Error, Result};
