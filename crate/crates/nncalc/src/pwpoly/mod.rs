//! Exact univariate piecewise polynomials and what is measured on them.

pub mod algebraic;
pub mod bound;
pub mod crossing;
pub mod extract;
pub mod norms;
pub mod piecewise;
pub mod poly;

pub use algebraic::{real_roots, Algebraic, Breakpoint};
pub use bound::{lambda_neurons, lambda_weights, piece_bound, BoundMode, PieceBound};
pub use crossing::{crossing_number, crossing_profile, disagreement_fraction, Component, CrossingProfile, Disagreement};
pub use extract::extract_pieces;
pub use norms::{lp_distance, lp_norm, NormEstimate};
pub use piecewise::PiecewisePoly;
pub use poly::Poly;
