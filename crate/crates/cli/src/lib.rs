//! File formats and export helpers behind the `polynet` binary, split out
//! so integration tests can drive them directly.

pub mod circuit;
pub mod dot;
pub mod netfile;
