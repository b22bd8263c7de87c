//! Best polynomial fit of a piecewise polynomial on one segment, in f64.
//!
//! The fit is done in the local variable `t in [-1, 1]`. Whatever method
//! picks the coefficients, the returned cost is the error of that very
//! polynomial against the exact pieces, so DP totals are upper bounds on the
//! best error (up to rounding).

use std::sync::OnceLock;

/// One target piece restricted to the segment, as a polynomial in `t`.
#[derive(Clone, Debug)]
pub(crate) struct Sub {
    pub lo: f64,
    pub hi: f64,
    pub c: Vec<f64>,
}

pub(crate) fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect()
}

fn antiderivative(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    out.extend(c.iter().enumerate().map(|(k, v)| v / (k + 1) as f64));
    out
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).collect()
}

/// `f(center + half * t)` for `f` given by monomial coefficients in `x`.
pub(crate) fn to_local(cx: &[f64], center: f64, half: f64) -> Vec<f64> {
    let mut res = vec![0.0; cx.len().max(1)];
    for v in cx.iter().rev() {
        // res = res * (center + half t) + v
        let mut next = vec![0.0; res.len()];
        for (k, r) in res.iter().enumerate() {
            next[k] += r * center;
            if k + 1 < next.len() {
                next[k + 1] += r * half;
            }
        }
        next[0] += v;
        res = next;
    }
    res
}

/// Inverse of `to_local`: monomial coefficients in `x` of `q((x - center) / half)`.
pub(crate) fn to_global(ct: &[f64], center: f64, half: f64) -> Vec<f64> {
    to_local(ct, -center / half, 1.0 / half)
}

/// Real roots of `c` strictly inside `(lo, hi)`, ascending.
fn roots_in(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = c.len() - 1;
    while deg > 0 && c[deg].abs() <= 1e-15 * scale {
        deg -= 1;
    }
    let inside = |x: f64| x > lo && x < hi;
    let mut out: Vec<f64> = match deg {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                Vec::new()
            } else {
                let s = disc.sqrt();
                let qv = -0.5 * (b + b.signum() * s);
                let mut v = Vec::new();
                if qv != 0.0 {
                    v.push(qv / a);
                    v.push(cc / qv);
                } else {
                    v.push(0.0);
                }
                v
            }
        }
        _ => {
            let m = 64;
            let mut v = Vec::new();
            let mut xp = lo;
            let mut fp = horner(c, lo);
            for i in 1..=m {
                let x = lo + (hi - lo) * i as f64 / m as f64;
                let fx = horner(c, x);
                if fx == 0.0 {
                    v.push(x);
                } else if fp * fx < 0.0 {
                    let (mut a, mut b, mut fa) = (xp, x, fp);
                    for _ in 0..80 {
                        let mid = 0.5 * (a + b);
                        let fm = horner(c, mid);
                        if fm * fa <= 0.0 {
                            b = mid;
                        } else {
                            a = mid;
                            fa = fm;
                        }
                    }
                    v.push(0.5 * (a + b));
                }
                xp = x;
                fp = fx;
            }
            v
        }
    };
    out.retain(|&x| inside(x));
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// `∫_lo^hi |h|^p dt` for a polynomial `h`.
fn abs_power_integral(h: &[f64], p: f64, lo: f64, hi: f64) -> f64 {
    let mut cuts = vec![lo];
    cuts.extend(roots_in(h, lo, hi));
    cuts.push(hi);
    let mut total = 0.0;
    if p == 1.0 || p == 2.0 {
        let integrand = if p == 1.0 { h.to_vec() } else { mul(h, h) };
        let anti = antiderivative(&integrand);
        for w in cuts.windows(2) {
            total += (horner(&anti, w[1]) - horner(&anti, w[0])).abs();
        }
    } else {
        let (nodes, weights) = gauss_legendre(20);
        for w in cuts.windows(2) {
            let (c, hw) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            total += nodes.iter().zip(&weights).map(|(x, wt)| wt * horner(h, c + hw * x).abs().powf(p)).sum::<f64>() * hw;
        }
    }
    total
}

fn sup_abs(h: &[f64], lo: f64, hi: f64) -> f64 {
    let mut cands = vec![lo, hi];
    cands.extend(roots_in(&derivative(h), lo, hi));
    cands.into_iter().map(|t| horner(h, t).abs()).fold(0.0, f64::max)
}

fn range(c: &[f64], lo: f64, hi: f64) -> (f64, f64) {
    let mut cands = vec![lo, hi];
    cands.extend(roots_in(&derivative(c), lo, hi));
    cands.into_iter().map(|t| horner(c, t)).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x.push(z);
        w.push(2.0 / ((1.0 - z * z) * dp * dp));
    }
    (x, w)
}

fn legendre_monomials(deg: usize) -> Vec<Vec<f64>> {
    let mut ps = vec![vec![1.0]];
    if deg >= 1 {
        ps.push(vec![0.0, 1.0]);
    }
    for k in 2..=deg {
        let a = mul(&ps[k - 1], &[0.0, (2 * k - 1) as f64]);
        let b: Vec<f64> = ps[k - 2].iter().map(|v| v * (k - 1) as f64).collect();
        ps.push(sub(&a, &b).into_iter().map(|v| v / k as f64).collect());
    }
    ps
}

const NODES: usize = 129;

fn cheb_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static CELL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let t: Vec<f64> = (0..NODES).map(|i| -(std::f64::consts::PI * (i as f64 + 0.5) / NODES as f64).cos()).collect();
        // midpoint-rule weights on the sorted nodes
        let w = (0..NODES)
            .map(|i| {
                let left = if i == 0 { -1.0 } else { 0.5 * (t[i - 1] + t[i]) };
                let right = if i + 1 == NODES { 1.0 } else { 0.5 * (t[i] + t[i + 1]) };
                right - left
            })
            .collect();
        (t, w)
    })
}

fn sample(subs: &[Sub], ts: &[f64]) -> Vec<f64> {
    let mut k = 0;
    ts.iter()
        .map(|&t| {
            while k + 1 < subs.len() && t >= subs[k].hi {
                k += 1;
            }
            horner(&subs[k].c, t)
        })
        .collect()
}

/// Weighted least squares in the Legendre basis; returns monomial coefficients.
fn weighted_ls(basis: &[Vec<f64>], ts: &[f64], ys: &[f64], ws: &[f64]) -> Vec<f64> {
    let m = basis.len();
    let vals: Vec<Vec<f64>> = basis.iter().map(|b| ts.iter().map(|&t| horner(b, t)).collect()).collect();
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = (0..ts.len()).map(|k| ws[k] * vals[i][k] * vals[j][k]).sum();
        }
        a[i][m] = (0..ts.len()).map(|k| ws[k] * vals[i][k] * ys[k]).sum();
    }
    let coef = solve_small(a);
    let mut out = vec![0.0; m];
    for (c, b) in coef.iter().zip(basis) {
        for (k, v) in b.iter().enumerate() {
            out[k] += c * v;
        }
    }
    out
}

fn solve_small(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let m = a.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        if d.abs() < 1e-300 {
            continue;
        }
        for r in 0..m {
            if r != col {
                let f = a[r][col] / d;
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..m).map(|i| if a[i][i].abs() < 1e-300 { 0.0 } else { a[i][m] / a[i][i] }).collect()
}

fn chebyshev_center(subs: &[Sub]) -> Vec<f64> {
    let (lo, hi) = subs
        .iter()
        .map(|s| range(&s.c, s.lo, s.hi))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (c, d)| (a.min(c), b.max(d)));
    vec![0.5 * (lo + hi)]
}

/// Discrete minimax on the Chebyshev nodes by Lawson reweighting.
fn lawson(subs: &[Sub], basis: &[Vec<f64>]) -> Vec<f64> {
    let (ts, qw) = cheb_nodes();
    let ys = sample(subs, ts);
    let mut w: Vec<f64> = qw.iter().map(|v| v / 2.0).collect();
    let mut q = weighted_ls(basis, ts, &ys, &w);
    for _ in 0..200 {
        let r: Vec<f64> = ts.iter().zip(&ys).map(|(t, y)| (y - horner(&q, *t)).abs()).collect();
        let tot: f64 = w.iter().zip(&r).map(|(a, b)| a * b).sum();
        if tot <= 0.0 {
            break;
        }
        w = w.iter().zip(&r).map(|(a, b)| a * b / tot).collect();
        q = weighted_ls(basis, ts, &ys, &w);
    }
    q
}

/// Cost of the fitted polynomial: `∫|f - q|^p dt` over `[-1, 1]` (not yet
/// rescaled to `x`), or `sup|f - q|` for `p = inf`.
fn cost_of(subs: &[Sub], q: &[f64], p: f64) -> f64 {
    let mut total: f64 = 0.0;
    for s in subs {
        let h = sub(&s.c, q);
        if p.is_infinite() {
            total = total.max(sup_abs(&h, s.lo, s.hi));
        } else {
            total += abs_power_integral(&h, p, s.lo, s.hi);
        }
    }
    total
}

/// Returns `(cost, q)` with `q` in the local variable.
pub(crate) fn fit(subs: &[Sub], degree: usize, p: f64) -> (f64, Vec<f64>) {
    let basis = legendre_monomials(degree);
    let q = if p == 2.0 {
        // exact L2 projection: a_k = (2k+1)/2 ∫ f P_k
        let mut q = vec![0.0; degree + 1];
        for (k, pk) in basis.iter().enumerate() {
            let mut a = 0.0;
            for s in subs {
                let n = (s.c.len() + degree).div_ceil(2).max(1);
                let (nodes, weights) = gauss_legendre(n);
                let (c, hw) = (0.5 * (s.lo + s.hi), 0.5 * (s.hi - s.lo));
                a += hw * nodes.iter().zip(&weights).map(|(x, w)| w * horner(&s.c, c + hw * x) * horner(pk, c + hw * x)).sum::<f64>();
            }
            a *= (2 * k + 1) as f64 / 2.0;
            for (i, v) in pk.iter().enumerate() {
                q[i] += a * v;
            }
        }
        q
    } else if p.is_infinite() {
        // Chebyshev center among constants, then Lawson; keep whichever is better
        let center = chebyshev_center(subs);
        if degree == 0 {
            return (cost_of(subs, &center, p), center);
        }
        let lawson = lawson(subs, &basis);
        let (a, b) = (cost_of(subs, &center, p), cost_of(subs, &lawson, p));
        return if a <= b { (a, center) } else { (b, lawson) };
    } else {
        let (ts, qw) = cheb_nodes();
        let ys = sample(subs, ts);
        let mut q = weighted_ls(&basis, ts, &ys, qw);
        {
            let scale = ys.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            for _ in 0..30 {
                let w: Vec<f64> = ts
                    .iter()
                    .zip(&ys)
                    .zip(qw)
                    .map(|((t, y), wq)| {
                        let r = (y - horner(&q, *t)).abs().max(1e-9 * scale);
                        if p == 1.0 {
                            wq / r
                        } else {
                            wq * r.powf(p - 2.0)
                        }
                    })
                    .collect();
                let next = weighted_ls(&basis, ts, &ys, &w);
                let delta = next.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                q = next;
                if delta <= 1e-13 * scale {
                    break;
                }
            }
        }
        q
    };
    (cost_of(subs, &q, p), q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((s - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn local_roundtrip() {
        let c = vec![1.0, -2.0, 3.0];
        let l = to_local(&c, 0.25, 0.5);
        let g = to_global(&l, 0.25, 0.5);
        for (a, b) in c.iter().zip(&g) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn hat_fits() {
        // hat on [-1, 1] in t: 1 - |t|
        let subs = vec![Sub { lo: -1.0, hi: 0.0, c: vec![1.0, 1.0] }, Sub { lo: 0.0, hi: 1.0, c: vec![1.0, -1.0] }];
        let (c, q) = fit(&subs, 0, f64::INFINITY);
        assert!((c - 0.5).abs() < 1e-15 && (q[0] - 0.5).abs() < 1e-15);
        // best L1 constant is the median level 1/2, error 1/2
        let (c1, _) = fit(&subs, 0, 1.0);
        assert!((c1 - 0.5).abs() < 1e-6);
        let (c2, q2) = fit(&subs, 1, 2.0);
        assert!((q2[0] - 0.5).abs() < 1e-14 && q2[1].abs() < 1e-14);
        assert!((c2 - 1.0 / 6.0).abs() < 1e-14);
    }
}
