//! Seeded random networks and rational sample points.
//!
//! Every consumer derives its generator from one 64-bit seed plus a stream
//! id (ChaCha8 streams), so trials are reproducible and independent.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::affine::AffineMap;
use crate::network::{Act, Layer, Network};
use crate::rat::{qf, Q};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    g.set_stream(stream);
    g
}

/// Small dyadic-ish rational `n/d` with `|n| <= 3`, `d in {1, 2, 4}`, nonzero.
pub fn small_rational(g: &mut impl Rng) -> Q {
    loop {
        let n: i64 = g.gen_range(-3..=3);
        if n != 0 {
            let d = *[1i64, 2, 4].choose(g).unwrap();
            return qf(n, d);
        }
    }
}

/// Rational in `[lo, hi]` with denominator `den`.
pub fn rational_in(g: &mut impl Rng, lo: i64, hi: i64, den: i64) -> Q {
    qf(g.gen_range(lo * den..=hi * den), den)
}

pub fn random_points(g: &mut impl Rng, d: usize, n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let den = *[3i64, 7, 16, 64].choose(g).unwrap();
                    rational_in(g, -2, 2, den)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RandomNetSpec {
    pub d_in: usize,
    pub d_out: usize,
    /// Number of affine layers.
    pub depth: usize,
    pub max_width: usize,
    pub r: u32,
    /// Probability that a hidden neuron uses the identity instead of `ρ_r`.
    pub id_prob: f64,
    pub max_weights: usize,
}

impl RandomNetSpec {
    pub fn scalar(r: u32, depth: usize, max_weights: usize) -> Self {
        RandomNetSpec { d_in: 1, d_out: 1, depth, max_width: 4, r, id_prob: 0.0, max_weights }
    }
}

/// Random network with `W <= max_weights`; every row of every layer keeps
/// at least one weight when the budget allows, so no neuron is trivially dead
/// by construction (it may still be dead by sign).
pub fn random_network(g: &mut impl Rng, spec: &RandomNetSpec) -> Network {
    let mut dims = vec![spec.d_in];
    for _ in 1..spec.depth {
        dims.push(g.gen_range(1..=spec.max_width.max(1)));
    }
    dims.push(spec.d_out);
    let mut layers = Vec::new();
    for l in 0..spec.depth {
        let (rows, cols) = (dims[l + 1], dims[l]);
        let mut map = AffineMap::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if g.gen_bool(0.7) {
                    map.set(i, j, small_rational(g));
                }
            }
            if map.row_is_zero(i) {
                let j = g.gen_range(0..cols);
                map.set(i, j, small_rational(g));
            }
            if g.gen_bool(0.8) {
                map.set_bias(i, small_rational(g));
            }
        }
        let hidden = l + 1 < spec.depth;
        let act = (0..rows)
            .map(|_| {
                if !hidden {
                    Act::Id
                } else if g.gen_bool(spec.id_prob) {
                    Act::Id
                } else {
                    Act::Rho(spec.r)
                }
            })
            .collect();
        layers.push(Layer::new(map, act));
    }
    // trim to the weight budget
    let mut nz: Vec<(usize, usize, usize)> = Vec::new();
    for (l, layer) in layers.iter().enumerate() {
        for (i, j, _) in layer.map.entries() {
            nz.push((l, i, j));
        }
    }
    nz.shuffle(g);
    let mut excess = nz.len().saturating_sub(spec.max_weights);
    for (l, i, j) in nz {
        if excess == 0 {
            break;
        }
        layers[l].map.set(i, j, Q::zero());
        excess -= 1;
    }
    Network { layers }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_within_budget() {
        let spec = RandomNetSpec { d_in: 2, d_out: 2, depth: 5, max_width: 4, r: 2, id_prob: 0.2, max_weights: 30 };
        for s in 0..50 {
            let a = random_network(&mut rng(7, s), &spec);
            let b = random_network(&mut rng(7, s), &spec);
            assert_eq!(a, b);
            let rep = a.complexity().unwrap();
            assert!(rep.w <= 30 && rep.l == 5);
        }
        assert_ne!(random_network(&mut rng(7, 0), &spec), random_network(&mut rng(7, 1), &spec));
    }
}
