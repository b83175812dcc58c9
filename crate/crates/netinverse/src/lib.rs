//! IO companion to `netinverse-core`: JSON wire formats, deterministic
//! rational sampling, and the pieces behind the `netinverse` binary.

pub mod json;
pub mod sampler;
pub mod verify;
