//! Free-knot piecewise-polynomial approximation by dynamic programming over
//! a dyadic knot grid.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::fit::{fit, to_global, to_local, Sub};
use crate::error::{NetError, Result};
use crate::pwpoly::{Breakpoint, PiecewisePoly, Poly};
use crate::rat::{self, Q};

/// Default grid resolution exponent: knots at multiples of `2^-10`.
pub const DEFAULT_RESOLUTION: u32 = 10;

/// Relative slack added to nonzero f64 errors so the value stays an upper bound.
const SAFETY: f64 = 1.0 + 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct FreeKnotFit {
    /// Upper bound on `E(target, PPoly_n^degree)_{L_p(0,1)}`; exactly 0 when
    /// the target is reproduced piece by piece.
    pub error: f64,
    pub pieces_used: usize,
    #[serde(skip)]
    pub knots: Vec<Breakpoint>,
    #[serde(skip)]
    pub approximant: PiecewisePoly,
}

/// Precomputed segment costs for one (target, degree, p, resolution); the
/// table is shared by every budget `n`.
pub struct FreeKnotOracle {
    knots: Vec<Breakpoint>,
    xs: Vec<f64>,
    degree: usize,
    p: f64,
    /// cost[i][m - i - 1] for the segment between knots i < m
    cost: Vec<Vec<f64>>,
    pieces: Vec<Vec<f64>>,
    /// target piece index on the interval (knot t, knot t+1)
    pid: Vec<usize>,
    run_end: Vec<usize>,
    target_degree: Vec<usize>,
}

fn cmp(a: &Breakpoint, b: &Breakpoint) -> Ordering {
    a.cmp_bp(b)
}

impl FreeKnotOracle {
    pub fn new(target: &PiecewisePoly, degree: usize, p: f64, resolution: u32) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(NetError::Precondition("free-knot fits need p >= 1".into()));
        }
        if resolution > 16 {
            return Err(NetError::Precondition("resolution above 2^-16 is not supported".into()));
        }
        let m = 1i64 << resolution;
        let mut knots: Vec<Breakpoint> = (0..=m).map(|i| Breakpoint::Rational(rat::qf(i, m))).collect();
        let (zero, one) = (Q::zero(), Q::one());
        for b in target.breakpoints() {
            if b.cmp_q(&zero).is_gt() && b.cmp_q(&one).is_lt() {
                knots.push(b.clone());
            }
        }
        knots.sort_by(cmp);
        knots.dedup_by(|a, b| cmp(a, b) == Ordering::Equal);
        let xs: Vec<f64> = knots.iter().map(|k| k.to_f64()).collect();
        let pid: Vec<usize> = knots[..knots.len() - 1].iter().map(|k| target.locate_bp(k)).collect();
        let mut run_end = vec![0; pid.len()];
        for t in (0..pid.len()).rev() {
            run_end[t] = if t + 1 < pid.len() && pid[t + 1] == pid[t] { run_end[t + 1] } else { t };
        }
        let pieces: Vec<Vec<f64>> = target.pieces().iter().map(|p| p.to_f64_coeffs()).collect();
        let target_degree = target.pieces().iter().map(|p| p.degree().unwrap_or(0)).collect();
        let mut oracle =
            FreeKnotOracle { knots, xs, degree, p, cost: Vec::new(), pieces, pid, run_end, target_degree };
        let k = oracle.knots.len();
        // Segments with the same local shape (e.g. translates under a
        // periodic target) share one fit.
        let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();
        oracle.cost = (0..k)
            .map(|i| ((i + 1)..k).map(|m| oracle.segment_cost(i, m, &mut memo)).collect())
            .collect();
        Ok(oracle)
    }

    pub fn knot_count(&self) -> usize {
        self.knots.len()
    }

    fn subs(&self, i: usize, m: usize) -> (Vec<Sub>, f64, f64) {
        let (a, b) = (self.xs[i], self.xs[m]);
        let (center, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut subs = Vec::new();
        let mut t = i;
        while t < m {
            let e = self.run_end[t].min(m - 1);
            let lo = if t == i { -1.0 } else { (self.xs[t] - center) / half };
            let hi = if e + 1 == m { 1.0 } else { (self.xs[e + 1] - center) / half };
            subs.push(Sub { lo, hi, c: to_local(&self.pieces[self.pid[t]], center, half) });
            t = e + 1;
        }
        (subs, center, half)
    }

    fn segment_cost(&self, i: usize, m: usize, memo: &mut HashMap<Vec<u64>, f64>) -> f64 {
        if self.run_end[i] >= m - 1 && self.target_degree[self.pid[i]] <= self.degree {
            return 0.0;
        }
        let (subs, _, half) = self.subs(i, m);
        let mut key = vec![half.to_bits()];
        for s in &subs {
            key.push(s.lo.to_bits());
            key.push(s.hi.to_bits());
            key.extend(s.c.iter().map(|v| v.to_bits()));
            key.push(u64::MAX);
        }
        if let Some(&c) = memo.get(&key) {
            return c;
        }
        let (c, _) = fit(&subs, self.degree, self.p);
        let c = if self.p.is_infinite() { c } else { c * half };
        memo.insert(key, c);
        c
    }

    /// Cost (in `∫|.|^p` units, or sup for `p = inf`) and local fit.
    fn segment(&self, i: usize, m: usize) -> (f64, Vec<f64>) {
        if self.run_end[i] >= m - 1 && self.target_degree[self.pid[i]] <= self.degree {
            // reproduce the target piece exactly
            let (_, center, half) = self.subs(i, m);
            return (0.0, to_local(&self.pieces[self.pid[i]], center, half));
        }
        let (subs, _, half) = self.subs(i, m);
        let (c, q) = fit(&subs, self.degree, self.p);
        if self.p.is_infinite() {
            (c, q)
        } else {
            (c * half, q)
        }
    }

    fn combine(&self, a: f64, b: f64) -> f64 {
        if self.p.is_infinite() {
            a.max(b)
        } else {
            a + b
        }
    }

    /// Best approximation with at most `n` pieces on the grid.
    pub fn best(&self, n: usize) -> Result<FreeKnotFit> {
        let k = self.knots.len();
        if n == 0 {
            return Err(NetError::Precondition("need at least one piece".into()));
        }
        if k - 1 < n.min(2) {
            return Err(NetError::Precondition("resolution too coarse".into()));
        }
        let inf = f64::INFINITY;
        let mut e = vec![inf; k];
        e[0] = 0.0;
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(n);
        let mut used = 0;
        for _ in 0..n {
            let mut next = e.clone();
            let mut from: Vec<usize> = (0..k).collect();
            for m in 1..k {
                for i in 0..m {
                    if e[i] == inf {
                        continue;
                    }
                    let v = self.combine(e[i], self.cost[i][m - i - 1]);
                    if v < next[m] {
                        next[m] = v;
                        from[m] = i;
                    }
                }
            }
            back.push(from);
            let done = next[k - 1] == 0.0;
            let stalled = next == e;
            e = next;
            used += 1;
            if done || stalled {
                break;
            }
        }
        // walk back through the layers
        let mut cuts = vec![k - 1];
        let mut m = k - 1;
        for from in back[..used].iter().rev() {
            if from[m] != m {
                m = from[m];
                cuts.push(m);
            }
            if m == 0 {
                break;
            }
        }
        cuts.reverse();
        let total = e[k - 1];
        let error = if total == 0.0 {
            0.0
        } else if self.p.is_infinite() {
            total * SAFETY
        } else {
            total.powf(1.0 / self.p) * SAFETY
        };
        let mut bps = vec![Breakpoint::Rational(Q::zero())];
        let mut pieces = vec![Poly::zero()];
        for w in cuts.windows(2) {
            let (_, q) = self.segment(w[0], w[1]);
            let (a, b) = (self.xs[w[0]], self.xs[w[1]]);
            let gx = to_global(&q, 0.5 * (a + b), 0.5 * (b - a));
            pieces.push(Poly::new(gx.iter().map(|v| rat::from_f64(*v)).collect()));
            bps.push(self.knots[w[1]].clone());
        }
        pieces.push(Poly::zero());
        let mut approximant = PiecewisePoly::new(bps, pieces);
        approximant.normalize();
        let knots = cuts.iter().map(|&i| self.knots[i].clone()).collect();
        Ok(FreeKnotFit { error, pieces_used: cuts.len() - 1, knots, approximant })
    }
}

/// One-shot version of [`FreeKnotOracle::best`].
pub fn best_free_knot(target: &PiecewisePoly, n: usize, degree: usize, p: f64, resolution: u32) -> Result<FreeKnotFit> {
    if (1usize << resolution.min(63)) < n {
        return Err(NetError::Precondition("resolution too coarse: fewer grid cells than pieces".into()));
    }
    FreeKnotOracle::new(target, degree, p, resolution)?.best(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::sawtooth_pw;

    #[test]
    fn hat_by_a_constant() {
        let f = best_free_knot(&sawtooth_pw(2), 1, 1, f64::INFINITY, 6).unwrap();
        assert!((f.error - 0.5).abs() < 1e-9, "{}", f.error);
    }

    #[test]
    fn representable_target_is_exact() {
        let f = best_free_knot(&sawtooth_pw(3), 8, 1, 1.0, 5).unwrap();
        assert_eq!(f.error, 0.0);
        assert_eq!(f.pieces_used, 8);
        let g = best_free_knot(&sawtooth_pw(3), 9, 1, 2.0, 5).unwrap();
        assert_eq!(g.error, 0.0);
    }

    #[test]
    fn budget_and_grid_monotone() {
        let t = sawtooth_pw(4);
        let o = FreeKnotOracle::new(&t, 1, 1.0, 6).unwrap();
        let errs: Vec<f64> = (1..=6).map(|n| o.best(n).unwrap().error).collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
        let fine = best_free_knot(&t, 3, 1, 1.0, 7).unwrap().error;
        assert!(fine <= errs[2]);
    }
}
