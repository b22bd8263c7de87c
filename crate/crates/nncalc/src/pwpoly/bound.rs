//! Piece-count upper bounds from the counting argument for ρ_r networks.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Weights,
    Neurons,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceBound {
    /// The constant multiplying `W^{⌊L/2⌋}` or `N^{L-1}`.
    pub lambda: BigUint,
    pub bound: BigUint,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn r_pow(r: u32, e: u64) -> BigUint {
    Pow::pow(big(r as u64), e)
}

/// `C_1 = 4`, `C_{l+1} = 2 C_l (1 + r^l)`; returns `max_{K <= L} C_K`.
pub fn lambda_neurons(l: usize, r: u32) -> BigUint {
    let mut c = big(4);
    let mut best = c.clone();
    for ell in 1..l as u64 {
        c = big(2) * &c * (BigUint::one() + r_pow(r, ell));
        best = best.max(c.clone());
    }
    best
}

/// The per-depth constant for the weight bound: `C_0 = 4`,
/// `C'_t = 2 C_t (1 + r^{2t+1})`, `C_{t+1} = 2 (1 + r^{2t+2}) C'_t`, and the
/// constant for depth `L` is `C_{(L-1)/2}` (odd) or `C_{L/2-1}` (even).
fn lambda_weights_exact(l: usize, r: u32) -> BigUint {
    if l <= 1 {
        return BigUint::one();
    }
    let t_max = if l % 2 == 1 { (l - 1) / 2 } else { l / 2 - 1 };
    let mut c = big(4);
    for t in 0..t_max as u64 {
        let cp = big(2) * &c * (BigUint::one() + r_pow(r, 2 * t + 1));
        c = big(2) * (BigUint::one() + r_pow(r, 2 * t + 2)) * cp;
    }
    c
}

/// `max_{K <= L}` of the per-depth weight constants.
pub fn lambda_weights(l: usize, r: u32) -> BigUint {
    (1..=l.max(1)).map(|k| lambda_weights_exact(k, r)).max().unwrap()
}

/// Upper bound on the number of pieces of any 1 -> 1 network over `rho_r`
/// of depth at most `l` with `w` weights (or `n` neurons).
pub fn piece_bound(w: usize, n: usize, l: usize, r: u32, mode: BoundMode) -> PieceBound {
    let (lambda, base, exp) = match mode {
        BoundMode::Weights => (lambda_weights(l, r), w, (l / 2) as u32),
        BoundMode::Neurons => (lambda_neurons(l, r), n, l.saturating_sub(1) as u32),
    };
    let bound = (&lambda * Pow::pow(big(base as u64), exp)).max(BigUint::one());
    PieceBound { lambda, bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_constants() {
        assert_eq!(lambda_neurons(1, 1), big(4));
        assert_eq!(lambda_neurons(2, 1), big(16));
        assert_eq!(lambda_neurons(3, 2), big(240));
        assert_eq!(lambda_weights(1, 3), big(1));
        assert_eq!(lambda_weights(2, 1), big(4));
        // C_1 = 2 (1 + r^2) * 2 * 4 (1 + r)
        assert_eq!(lambda_weights(3, 1), big(64));
        assert_eq!(piece_bound(10, 3, 2, 1, BoundMode::Neurons).bound, big(48));
        assert_eq!(piece_bound(0, 0, 4, 1, BoundMode::Weights).bound, big(1));
    }
}
