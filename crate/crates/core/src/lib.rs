//! Hamiltonian paths in `m × n` projective checkerboards.
//!
//! The board is the digraph on `Z_m × Z_n` where every square steps east or
//! north and the edges of the rectangle are glued with a twist. This crate
//! provides:
//!
//! * [`board`]: squares, successor maps, symmetries and direction-forcing
//!   diagonals;
//! * [`walk`]: move sequences, walks, travel maps and the shared path JSON;
//! * [`decoder`]: the (initial, terminal, east-set) coordinates of a path,
//!   diagonal-driven and brute-force enumeration, outer-diagonal rerouting;
//! * [`constructions`]: explicit path builders;
//! * [`reductions`]: contraction of east-traveling rowful diagonals and the
//!   stretch correspondence;
//! * [`characterization`]: the endpoint predicates;
//! * [`invariants`], [`render`], [`report`], [`verify`]: the checks, maps and
//!   reports used by the command line front end.

pub mod board;
pub mod characterization;
pub mod constructions;
pub mod decoder;
pub mod error;
pub mod invariants;
pub mod reductions;
pub mod render;
pub mod report;
pub mod verify;
pub mod walk;

pub use board::{Board, Diagonal, DiagonalClass, DiagonalId, Move, Square};
pub use decoder::{EnumerationReport, Method, PathSpec};
pub use error::{Error, Result};
pub use walk::{MoveSeq, PathRecord, TravelMap, Walk};
