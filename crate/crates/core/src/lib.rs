//! Fusion groups of lattice orbifold vertex operator algebras, computed from
//! lattices, isometries and finite quadratic forms with exact arithmetic.

pub mod check;
pub mod error;
pub mod fqs;
pub mod fusion;
pub mod isometry;
pub mod lattice;
pub mod leech;
pub mod linalg;
pub mod verify;

pub use error::{Error, Result};
