//! Library surface of the command-line front end, split out so integration
//! tests can exercise parsing, emission, and the run pipeline directly.

pub mod config;
pub mod emit;
pub mod evaluate;
pub mod verify;
