//! Approximation-theory instruments: free-knot best approximation, moduli
//! of smoothness, Besov lower estimates and approximation-space quasi-norms.

pub mod dp;
pub(crate) mod fit;
pub mod modulus;

pub use dp::{best_free_knot, FreeKnotFit, FreeKnotOracle, DEFAULT_RESOLUTION};
pub use modulus::{besov_lower, finite_difference, modulus, modulus_table, BesovLower, ModulusTable, ModulusValue};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{NetError, Result};
use crate::gadgets::sawtooth_pw;
use crate::pwpoly::{lp_norm, PiecewisePoly};
use crate::rat::Q;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    FreeKnotPpoly { degree: usize },
    Network { r: u32, depth: usize },
}

/// Best-approximation errors `E_n` for increasing budgets, with `E_0 = ‖f‖`.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxErrorCurve {
    pub family: Family,
    pub budgets: Vec<usize>,
    pub errors: Vec<f64>,
    pub p: f64,
    #[serde(skip)]
    pub target: PiecewisePoly,
}

impl ApproxErrorCurve {
    /// Budgets must increase and errors must not.
    pub fn new(family: Family, budgets: Vec<usize>, errors: Vec<f64>, p: f64, target: PiecewisePoly) -> Result<Self> {
        if budgets.len() != errors.len() {
            return Err(NetError::Precondition("one error per budget".into()));
        }
        if !budgets.windows(2).all(|w| w[0] < w[1]) || !errors.windows(2).all(|w| w[1] <= w[0]) {
            return Err(NetError::Precondition("curve must be monotone".into()));
        }
        Ok(ApproxErrorCurve { family, budgets, errors, p, target })
    }

    /// Free-knot curve on `(0, 1)`; budget 0 is the zero function.
    pub fn free_knot(target: &PiecewisePoly, degree: usize, p: f64, max_n: usize, resolution: u32) -> Result<Self> {
        let oracle = FreeKnotOracle::new(target, degree, p, resolution)?;
        let mut errors = vec![lp_norm(target, p, &Q::zero(), &Q::one()).value];
        for n in 1..=max_n {
            // the DP may tie at a larger value by rounding; keep the curve monotone
            let e = oracle.best(n)?.error.min(*errors.last().unwrap());
            errors.push(e);
        }
        Self::new(Family::FreeKnotPpoly { degree }, (0..=max_n).collect(), errors, p, target.clone())
    }
}

/// Truncation of `(Σ_{n>=1} [n^α E_{n-1}]^q / n)^{1/q}` (sup for `q = inf`)
/// over the budgets present in the curve.
pub fn truncated_approx_norm(curve: &ApproxErrorCurve, alpha: f64, q: f64) -> f64 {
    let terms = curve.budgets.iter().zip(&curve.errors).map(|(&b, &e)| {
        let n = (b + 1) as f64;
        (n, n.powf(alpha) * e)
    });
    if q.is_infinite() {
        terms.map(|(_, v)| v).fold(0.0, f64::max)
    } else {
        terms.map(|(n, v)| v.powf(q) / n).sum::<f64>().powf(1.0 / q)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InapproxReport {
    pub j: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: usize,
    pub p: f64,
    pub resolution: u32,
    pub dp_error: f64,
    pub paper_bound: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Largest budget covered by the sawtooth lower bound: `(2^j+1) / (4(1+α))`.
pub fn inapprox_threshold(j: u32, alpha: usize) -> usize {
    (((1u64 << j) + 1) / (4 * (1 + alpha as u64))) as usize
}

/// Runs the free-knot DP on `Δ_j` and compares with `2^{-5/p}`.
pub fn sawtooth_inapprox_check(j: u32, n: usize, alpha: usize, p: f64, resolution: u32) -> Result<InapproxReport> {
    if n == 0 || n > inapprox_threshold(j, alpha) {
        return Err(NetError::Precondition(format!(
            "N = {n} outside 1..=(2^j+1)/(4(1+alpha)) = {}",
            inapprox_threshold(j, alpha)
        )));
    }
    inapprox_report(j, n, alpha, p, resolution, &FreeKnotOracle::new(&sawtooth_pw(j), alpha, p, resolution)?)
}

/// Same numbers without the precondition, for threshold experiments.
pub fn inapprox_report(j: u32, n: usize, alpha: usize, p: f64, resolution: u32, oracle: &FreeKnotOracle) -> Result<InapproxReport> {
    let dp_error = oracle.best(n)?.error;
    let paper_bound = 2f64.powf(-5.0 / p);
    Ok(InapproxReport {
        j,
        n,
        alpha,
        p,
        resolution,
        dp_error,
        paper_bound,
        margin: dp_error - paper_bound,
        pass: dp_error >= paper_bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinPoint {
    pub pieces: usize,
    pub besov_lower: f64,
    pub lp_norm: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BernsteinReport {
    pub s: f64,
    pub p: f64,
    pub sigma: f64,
    pub points: Vec<BernsteinPoint>,
    /// Least-squares slope of `log ratio` against `log pieces`.
    pub slope: f64,
    pub pass: bool,
}

/// Consistency probe of `‖f‖_{B^s_{σ,σ}} <= C n^s ‖f‖_{L_p}` on any corpus of
/// `(pieces, function)` pairs.
pub fn bernstein_probe_on(corpus: &[(usize, PiecewisePoly)], s: f64, p: f64, degree: usize) -> Result<BernsteinReport> {
    if !(s > 0.0 && s < degree as f64 + 1.0) {
        return Err(NetError::Precondition("need 0 < s < degree + 1".into()));
    }
    let sigma = 1.0 / (s + 1.0 / p);
    let mut points = Vec::new();
    for (n, f) in corpus {
        let norm = lp_norm(f, p, &Q::zero(), &Q::one()).value;
        let b = besov_lower(f, s, sigma, sigma).norm;
        let ratio = if norm > 0.0 { b / norm } else { 0.0 };
        points.push(BernsteinPoint { pieces: *n, besov_lower: b, lp_norm: norm, ratio });
    }
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.ratio > 0.0).map(|p| ((p.pieces as f64).ln(), p.ratio.ln())).collect();
    let slope = if pts.len() < 2 {
        0.0
    } else {
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    Ok(BernsteinReport { s, p, sigma, points, slope, pass: slope <= s + 0.1 })
}

/// The probe on the sawtooth corpus `{Δ_j}`, which has `2^j` pieces on `(0, 1)`.
pub fn bernstein_probe(js: &[u32], s: f64, p: f64, degree: usize) -> Result<BernsteinReport> {
    let corpus: Vec<(usize, PiecewisePoly)> = js.iter().map(|&j| (1usize << j, sawtooth_pw(j))).collect();
    bernstein_probe_on(&corpus, s, p, degree)
}

/// `(p+1)^{-1/p}`, the `L_p(0,1)` norm of the hat function.
pub fn hat_norm(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        (p + 1.0).powf(-1.0 / p)
    }
}
