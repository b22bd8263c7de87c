//! Moduli of smoothness and Besov lower estimates on `(0, 1)`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::pwpoly::{lp_norm, PiecewisePoly};
use crate::rat::{self, Q};

/// Largest dyadic step probed: `2^-MAX_M`.
pub const MAX_M: u32 = 20;

/// `Σ_i (-1)^{k-i} C(k,i) f(x + i h)`, exact.
pub fn finite_difference(f: &PiecewisePoly, k: u32, h: &Q) -> PiecewisePoly {
    let shifted: Vec<PiecewisePoly> =
        (0..=k).map(|i| f.compose_affine(&Q::one(), &(h * Q::from_integer(i.into())))).collect();
    let terms: Vec<(Q, &PiecewisePoly)> = shifted
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let c = Q::from_integer(rat::binom(k as u64, i as u64));
            (if (k as usize - i) % 2 == 0 { c } else { -c }, g)
        })
        .collect();
    PiecewisePoly::linear_combination(&terms, &Q::zero())
}

/// `‖D_h^k f‖_{L_p}` over `x ∈ [0, 1 - k h]`, certified lower end.
pub fn difference_norm(f: &PiecewisePoly, k: u32, p: f64, h: &Q) -> f64 {
    let end = Q::one() - h * Q::from_integer(k.into());
    if end < Q::zero() {
        return 0.0;
    }
    let d = finite_difference(f, k, h);
    if end.is_zero() {
        // a single point carries no L_p mass but does carry a sup
        return if p.is_infinite() { rat::to_f64(&d.eval(&Q::zero())).abs() } else { 0.0 };
    }
    lp_norm(&d, p, &Q::zero(), &end).lo
}

/// Steps probed for `ω_k(f)_p(t)`: `{2^-m : m <= 20, 2^-m <= t} ∪ {t}`.
pub fn probe_steps(t: &Q) -> Vec<Q> {
    let mut hs: Vec<Q> = (0..=MAX_M).map(|m| rat::two_pow(-(m as i64))).filter(|h| h <= t).collect();
    if !hs.contains(t) {
        hs.push(t.clone());
    }
    hs
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusValue {
    /// Lower estimate of `ω_k(f)_p(t)`.
    pub value: f64,
    /// Step attaining it.
    pub h: String,
}

/// Lower estimate of `ω_k(f)_p(t) = sup_{|h| <= t} ‖D_h^k f‖_{L_p}`.
pub fn modulus(f: &PiecewisePoly, k: u32, p: f64, t: &Q) -> ModulusValue {
    assert!(k >= 1, "modulus order starts at 1");
    let mut best = ModulusValue { value: 0.0, h: "0".into() };
    for h in probe_steps(t) {
        let v = difference_norm(f, k, p, &h);
        if v > best.value {
            best = ModulusValue { value: v, h: rat::fmt(&h) };
        }
    }
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusTable {
    pub k: u32,
    pub p: f64,
    /// `(t, lower estimate)` with t ascending; nondecreasing by construction
    /// since every step probed for a smaller `t` is admissible for a larger one.
    pub samples: Vec<(f64, f64)>,
}

pub fn modulus_table(f: &PiecewisePoly, k: u32, p: f64, ts: &[Q]) -> ModulusTable {
    let mut ts = ts.to_vec();
    ts.sort();
    ts.dedup();
    let mut samples = Vec::new();
    let mut running = 0.0f64;
    for t in &ts {
        running = running.max(modulus(f, k, p, t).value);
        samples.push((rat::to_f64(t), running));
    }
    ModulusTable { k, p, samples }
}

#[derive(Clone, Debug, Serialize)]
pub struct BesovLower {
    /// Lower bound on the seminorm `|f|_{B^s_{p,q}}`.
    pub seminorm: f64,
    /// Lower bound on `‖f‖_{L_p} + |f|_{B^s_{p,q}}`.
    pub norm: f64,
    pub order: u32,
    /// Dyadic `t` giving the largest contribution.
    pub t_star: f64,
}

/// Lower estimate of the Besov quasi-norm on `(0, 1)` from dyadic moduli of
/// order `k = max(2, ⌊s⌋ + 1)`. For `q < inf` each dyadic band
/// `[2^-(m+1), 2^-m]` contributes at least `(2^{ms} ω(2^-(m+1)))^q ln 2`.
pub fn besov_lower(f: &PiecewisePoly, s: f64, p: f64, q: f64) -> BesovLower {
    assert!(s > 0.0, "smoothness must be positive");
    let k = 2.max(s.floor() as u32 + 1);
    // ω at every dyadic t, by running max over the dyadic steps
    let mut omega = Vec::new();
    let mut running = 0.0f64;
    for m in (0..=MAX_M).rev() {
        let h = rat::two_pow(-(m as i64));
        running = running.max(difference_norm(f, k, p, &h));
        omega.push((m, running));
    }
    omega.reverse(); // omega[m] = ω(2^-m)
    let (mut seminorm, mut t_star) = (0.0f64, 1.0);
    if q.is_infinite() {
        for &(m, w) in &omega {
            let v = 2f64.powf(m as f64 * s) * w;
            if v > seminorm {
                seminorm = v;
                t_star = 2f64.powi(-(m as i32));
            }
        }
    } else {
        let mut total = 0.0;
        let mut top = 0.0;
        for m in 0..MAX_M as usize {
            let v = (2f64.powf(m as f64 * s) * omega[m + 1].1).powf(q) * std::f64::consts::LN_2;
            if v > top {
                top = v;
                t_star = 2f64.powi(-(m as i32 + 1));
            }
            total += v;
        }
        seminorm = total.powf(1.0 / q);
    }
    let base = lp_norm(f, p, &Q::zero(), &Q::one()).lo;
    BesovLower { seminorm, norm: base + seminorm, order: k, t_star }
}
