//! Hochschild cohomology of bound quiver algebras and of relation extensions.

pub mod algebra;
pub mod bimod;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod extensions;
pub mod hochschild;
pub mod qdsl;
pub mod quiver;
pub mod repmod;

pub use error::{Error, Result};
