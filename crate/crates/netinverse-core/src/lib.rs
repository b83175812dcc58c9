//! Exact-arithmetic kernel for planar electrical networks in a disk.
//!
//! Everything here is computed over arbitrary-precision rationals; there is
//! no floating point anywhere. The crate is `no_std` (alloc only) so the
//! math core can be embedded anywhere; file formats and the CLI live in the
//! companion `netinverse` crate.
//!
//! Module tour:
//! - [`numeric`]: rationals, dense matrices, Pfaffians, Schur complements,
//!   row reduction, maximal minors.
//! - [`graph`]: planar graphs in a disk as rotation systems, face tracing,
//!   medial graphs and strands, Y-Δ rewrites, strand side labels.
//! - [`dimer`]: bipartite (Temperley) graphs, dimer covers, boundary
//!   measurement, gauge classes, face variables and local moves.
//! - [`grassmann`]: Plücker vectors, positivity, the right/left twist,
//!   column scalings, the Ω-isotropy test.
//! - [`orthogonal`]: Cartan coordinates, skew matrix pairs and their
//!   Pfaffian identities, B-variables, the cube recurrence, and the
//!   electrical twists.
//! - [`electrical`]: Laplacians, response matrices, the forward measurement
//!   map and the end-to-end conductance recovery.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dimer;
pub mod electrical;
pub mod error;
pub mod graph;
pub mod grassmann;
pub mod numeric;
pub mod orthogonal;

pub use error::Error;
