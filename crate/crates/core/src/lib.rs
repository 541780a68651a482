pub mod catalog;
pub mod cayley;
pub mod cfs;
pub mod cli;
pub mod error;
pub mod factor;
pub mod group;
pub mod notation;
pub mod perm;
pub mod subset;

pub use error::{Error, Result};
