pub mod error;
pub mod finiteext;
pub mod galois;
pub mod hasse;
pub mod ide;
pub mod monofield;
pub mod padicnum;
pub mod report;
pub mod sample;
pub mod tower;

pub use error::{Error, Result};
