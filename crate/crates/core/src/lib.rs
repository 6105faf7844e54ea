pub mod actions;
pub mod catalog;
pub mod chain;
pub mod cli;
pub mod classifier;
pub mod error;
pub mod field;
pub mod gammal;
pub mod group;
pub mod orbital;
pub mod perm;
pub mod regular;

pub use error::{Error, Result};
pub use group::GroupHandle;
pub use perm::Permutation;
