//! Exact symbolic calculus for feed-forward networks with ReLU-power
//! activations `x -> max(0, x)^r`.
//!
//! Networks carry sparse rational affine maps, so every construction can be
//! checked by exact evaluation and exact complexity counts. Univariate
//! realizations can be extracted as exact piecewise polynomials.

pub mod affine;
pub mod approx;
pub mod calculus;
pub mod compress;
pub mod error;
pub mod gadgets;
pub mod harness;
pub mod json;
pub mod network;
pub mod pwpoly;
pub mod random;
pub mod rat;
pub mod verify;

pub use affine::AffineMap;
pub use compress::compress;
pub use error::NetError;
pub use network::{constant_network, Act, ComplexityReport, CustomActivation, Layer, Network};
pub use rat::Q;
