pub mod attack;
pub mod cli;
pub mod codes;
pub mod equiv;
pub mod error;
pub mod lattices;
pub mod linalg;
pub mod modring;
pub mod zlip;

pub use error::{Error, Result};
