//! Exact arithmetic for iterated quadratic maps `phi = (x - gamma)^2 - c1` over
//! `F_p(t)` and `Z[t]`: post-critical orbits, dynamical inseparability degrees,
//! squarefree Zsigmondy sets and their effective bounds, and Galois
//! surjectivity checks for the arboreal representation.

pub mod arith;
pub mod error;
pub mod fields;
pub mod galois;
pub mod insep;
pub mod intfactor;
pub mod orbit;
pub mod polyalg;
pub mod report;
pub mod zsig;

pub use error::{Error, Result};
