//! Exact Ringel-Hall algebra computations for acyclic quivers over finite fields.

pub mod algebra;
pub mod cache;
pub mod coeff;
pub mod engine;
pub mod error;
pub mod field;
pub mod hall;
pub mod hallpoly;
pub mod hopf;
pub mod matrix;
pub mod modspec;
pub mod orbit;
pub mod orders;
pub mod quiver;
pub mod regular;
pub mod rep;
pub mod subspaces;
pub mod tame;
