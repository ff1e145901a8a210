//! Galois-theoretic checks: Stoll's square-class criterion, the polynomial
//! abc inequality, and the finite verification pipeline for `x^2 + t`.

pub mod bitmatrix;
mod jones;
mod mason;
mod stoll;

pub use jones::*;
pub use mason::{mason_random_batch, mason_stothers_check, MasonReport};
pub use stoll::{
    geometric_stability_certificate, stoll_rank, stoll_rank_cached, SquareClassRing,
    StabilityCertificate, StollMode, StollReport, UnitClass,
};
