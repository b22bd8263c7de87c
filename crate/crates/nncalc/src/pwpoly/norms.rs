//! L_p norms of piecewise polynomials on a bounded interval.

use num_traits::Zero;
use serde::Serialize;

use super::algebraic::{roots_between, Breakpoint};
use super::piecewise::PiecewisePoly;
use super::poly::Poly;
use crate::rat::{self, Q};

/// Norm value with an enclosure. For integer `p` and for `p = inf` the
/// enclosure is certified (`power` holds the exact bracket of `∫|f|^p`, or
/// of `sup|f|` for `p = inf`); otherwise it comes from adaptive quadrature
/// with relative tolerance `1e-10`.
#[derive(Clone, Debug, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    #[serde(skip)]
    pub power: Option<(Q, Q)>,
    pub certified: bool,
}

impl NormEstimate {
    /// Exact value of `∫|f|^p` (or `sup|f|`) when the bracket is a point.
    pub fn exact(&self) -> Option<&Q> {
        self.power.as_ref().filter(|(a, b)| a == b).map(|(a, _)| a)
    }
}

fn abs_enclosure((l, h): (Q, Q)) -> (Q, Q) {
    if l >= Q::zero() {
        (l, h)
    } else if h <= Q::zero() {
        (-h, -l)
    } else {
        let m = if -&l > h { -l } else { h };
        (Q::zero(), m)
    }
}

/// Splits each clipped piece at the roots of its polynomial.
fn signed_segments(f: &PiecewisePoly, a: &Q, b: &Q) -> Vec<(Breakpoint, Breakpoint, Poly, i32)> {
    let mut out = Vec::new();
    for (lo, hi, p) in f.segments_in(a, b) {
        if p.is_zero() {
            continue;
        }
        let mut left = lo;
        let mut cuts = roots_between(p, Some(&left), Some(&hi));
        cuts.push(hi);
        for right in cuts {
            let s = Breakpoint::sample_between(Some(&left), Some(&right));
            let sign = rat::sign(&p.eval(&s));
            out.push((left, right.clone(), p.clone(), sign));
            left = right;
        }
    }
    out
}

pub fn lp_norm(f: &PiecewisePoly, p: f64, a: &Q, b: &Q) -> NormEstimate {
    assert!(p > 0.0, "p must be positive");
    if p.is_infinite() {
        return sup_norm(f, a, b);
    }
    if p.fract() == 0.0 && p <= 64.0 {
        return integer_norm(f, p as u32, a, b);
    }
    quadrature_norm(f, p, a, b)
}

pub fn lp_distance(f: &PiecewisePoly, g: &PiecewisePoly, p: f64, a: &Q, b: &Q) -> NormEstimate {
    lp_norm(&f.sub(g), p, a, b)
}

fn integer_norm(f: &PiecewisePoly, p: u32, a: &Q, b: &Q) -> NormEstimate {
    let (mut lo, mut hi) = (Q::zero(), Q::zero());
    for (l, r, poly, sign) in signed_segments(f, a, b) {
        if sign == 0 {
            continue;
        }
        let anti = poly.pow(p).antiderivative();
        let (fl_lo, fl_hi) = l.eval_enclosure(&anti);
        let (fr_lo, fr_hi) = r.eval_enclosure(&anti);
        // ∫ f^p over the segment, then |.| through the known sign
        let (i_lo, i_hi) = (&fr_lo - &fl_hi, &fr_hi - &fl_lo);
        let (i_lo, i_hi) = if p % 2 == 1 && sign < 0 { (-i_hi, -i_lo) } else { (i_lo, i_hi) };
        lo += i_lo.max(Q::zero());
        hi += i_hi;
    }
    let root = |x: &Q| rat::to_f64(x).max(0.0).powf(1.0 / p as f64);
    NormEstimate {
        value: root(&((&lo + &hi) / rat::q(2))),
        lo: root(&lo),
        hi: root(&hi),
        power: Some((lo, hi)),
        certified: true,
    }
}

fn sup_norm(f: &PiecewisePoly, a: &Q, b: &Q) -> NormEstimate {
    let (mut lo, mut hi) = (Q::zero(), Q::zero());
    for (l, r, poly) in f.segments_in(a, b) {
        let mut cands = vec![l.clone(), r.clone()];
        cands.extend(roots_between(&poly.derivative(), Some(&l), Some(&r)));
        for c in cands {
            let (cl, ch) = abs_enclosure(c.eval_enclosure(poly));
            if cl > lo {
                lo = cl;
            }
            if ch > hi {
                hi = ch;
            }
        }
    }
    NormEstimate {
        value: rat::to_f64(&((&lo + &hi) / rat::q(2))),
        lo: rat::to_f64(&lo),
        hi: rat::to_f64(&hi),
        power: Some((lo, hi)),
        certified: true,
    }
}

fn quadrature_norm(f: &PiecewisePoly, p: f64, a: &Q, b: &Q) -> NormEstimate {
    let mut total = 0.0;
    let mut err = 0.0;
    for (l, r, poly, sign) in signed_segments(f, a, b) {
        if sign == 0 {
            continue;
        }
        let (x0, x1) = (l.to_f64(), r.to_f64());
        if poly.degree() == Some(1) {
            // ∫ |αx+β|^p = |αx+β|^{p+1} / ((p+1)|α|) between the ends
            let c = poly.coeffs();
            let (beta, alpha) = (rat::to_f64(&c[0]), rat::to_f64(&c[1]));
            let g = |x: f64| (alpha * x + beta).abs().powf(p + 1.0);
            total += (g(x1) - g(x0)).abs() / ((p + 1.0) * alpha.abs());
            continue;
        }
        let c = poly.to_f64_coeffs();
        let h = move |x: f64| {
            let mut acc = 0.0;
            for v in c.iter().rev() {
                acc = acc * x + v;
            }
            acc.abs().powf(p)
        };
        let (v, e) = adaptive_simpson(&h, x0, x1, 1e-12, 48);
        total += v;
        err += e;
    }
    let rel = (err / total.max(f64::MIN_POSITIVE)).max(1e-10);
    let value = total.powf(1.0 / p);
    NormEstimate {
        value,
        lo: (total * (1.0 - rel)).max(0.0).powf(1.0 / p),
        hi: (total * (1.0 + rel)).powf(1.0 / p),
        power: None,
        certified: false,
    }
}

/// Returns the integral and an error estimate.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return (left + right + delta / 15.0, delta.abs() / 15.0);
        }
        let (l, el) = rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
        let (r, er) = rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        (l + r, el + er)
    }
    if b <= a {
        return (0.0, 0.0);
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(fa, fm, fb, a, b);
    rec(f, a, b, fa, fm, fb, whole, tol, depth)
}
