//! Exact piecewise polynomials on the real line.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::algebraic::{roots_between, Breakpoint};
use super::poly::Poly;
use crate::rat::{self, Q};

/// `pieces[0]` on `(-inf, b_0)`, `pieces[i]` on `[b_{i-1}, b_i)`, the last on
/// `[b_last, inf)`. Values at a breakpoint come from the piece on its right.
#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    breakpoints: Vec<Breakpoint>,
    pieces: Vec<Poly>,
}

impl PartialEq for PiecewisePoly {
    fn eq(&self, other: &Self) -> bool {
        self.pieces == other.pieces && self.breakpoints == other.breakpoints
    }
}

impl PiecewisePoly {
    /// Builds and normalizes. Breakpoints must be strictly increasing.
    pub fn new(breakpoints: Vec<Breakpoint>, pieces: Vec<Poly>) -> Self {
        assert_eq!(pieces.len(), breakpoints.len() + 1, "need one more piece than breakpoints");
        debug_assert!(breakpoints.windows(2).all(|w| w[0] < w[1]), "breakpoints must increase");
        let mut pw = PiecewisePoly { breakpoints, pieces };
        pw.normalize();
        pw
    }

    /// Like `new` for rational breakpoints.
    pub fn from_rational(breaks: Vec<Q>, pieces: Vec<Poly>) -> Self {
        Self::new(breaks.into_iter().map(Breakpoint::Rational).collect(), pieces)
    }

    pub fn poly(p: Poly) -> Self {
        PiecewisePoly { breakpoints: Vec::new(), pieces: vec![p] }
    }

    pub fn constant(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn identity() -> Self {
        Self::poly(Poly::x())
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn count_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(|p| p.degree().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Endpoints of piece `i`, `None` for an infinite end.
    pub fn piece_bounds(&self, i: usize) -> (Option<&Breakpoint>, Option<&Breakpoint>) {
        let lo = if i == 0 { None } else { Some(&self.breakpoints[i - 1]) };
        (lo, self.breakpoints.get(i))
    }

    /// Merges adjacent pieces with identical polynomials.
    pub fn normalize(&mut self) {
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut pcs: Vec<Poly> = Vec::with_capacity(self.pieces.len());
        let mut it = self.pieces.drain(..);
        pcs.push(it.next().expect("at least one piece"));
        for (b, p) in self.breakpoints.drain(..).zip(it) {
            if *pcs.last().unwrap() != p {
                bps.push(b);
                pcs.push(p);
            }
        }
        self.breakpoints = bps;
        self.pieces = pcs;
    }

    pub fn is_normalized(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0] != w[1])
    }

    /// Index of the piece containing `x` (right piece at a breakpoint).
    pub fn locate(&self, x: &Q) -> usize {
        self.breakpoints.partition_point(|b| b.cmp_q(x) != Ordering::Greater)
    }

    pub fn locate_bp(&self, x: &Breakpoint) -> usize {
        self.breakpoints.partition_point(|b| b.cmp_bp(x) != Ordering::Greater)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.pieces[self.locate(x)].eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|b| b.to_f64() <= x);
        self.pieces[i].eval_f64(x)
    }

    /// Maps every piece polynomial.
    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PiecewisePoly {
        let pieces = self.pieces.iter().map(f).collect();
        PiecewisePoly::new(self.breakpoints.clone(), pieces)
    }

    pub fn scale(&self, a: &Q) -> PiecewisePoly {
        self.map(|p| p.scale(a))
    }

    /// `Σ w_i f_i + c` over a common refinement of all breakpoints.
    pub fn linear_combination(terms: &[(Q, &PiecewisePoly)], c: &Q) -> PiecewisePoly {
        let terms: Vec<_> = terms.iter().filter(|(w, _)| !w.is_zero()).collect();
        let mut cur = Poly::constant(c.clone());
        for (w, f) in &terms {
            cur = cur.add(&f.pieces[0].scale(w));
        }
        // (breakpoint, term, index of the breakpoint in that term)
        let mut events: Vec<(&Breakpoint, usize, usize)> = Vec::new();
        for (k, (_, f)) in terms.iter().enumerate() {
            events.extend(f.breakpoints.iter().enumerate().map(|(j, b)| (b, k, j)));
        }
        events.sort_by(|a, b| a.0.cmp_bp(b.0));
        let mut bps = Vec::new();
        let mut pieces = vec![];
        let mut i = 0;
        while i < events.len() {
            let mut end = i + 1;
            while end < events.len() && events[end].0 == events[i].0 {
                end += 1;
            }
            pieces.push(cur.clone());
            for &(_, k, j) in &events[i..end] {
                let (w, f) = terms[k];
                cur = cur.add(&f.pieces[j + 1].sub(&f.pieces[j]).scale(w));
            }
            bps.push(events[i].0.clone());
            i = end;
        }
        pieces.push(cur);
        PiecewisePoly::new(bps, pieces)
    }

    pub fn sub(&self, o: &PiecewisePoly) -> PiecewisePoly {
        Self::linear_combination(&[(Q::one(), self), (-Q::one(), o)], &Q::zero())
    }

    pub fn add(&self, o: &PiecewisePoly) -> PiecewisePoly {
        Self::linear_combination(&[(Q::one(), self), (Q::one(), o)], &Q::zero())
    }

    /// `x -> f(a x + b)` for `a != 0`.
    pub fn compose_affine(&self, a: &Q, b: &Q) -> PiecewisePoly {
        assert!(!a.is_zero());
        let pieces: Vec<Poly> = self.pieces.iter().map(|p| p.compose_linear(a, b)).collect();
        // breakpoint t of f becomes (t - b) / a
        let bps: Vec<Breakpoint> = self.breakpoints.iter().map(|t| affine_preimage(t, a, b)).collect();
        if *a > Q::zero() {
            PiecewisePoly::new(bps, pieces)
        } else {
            // orientation flips; the value at each breakpoint moves to the left
            // piece, which is immaterial for continuous functions
            let mut bps = bps;
            bps.reverse();
            let mut pieces = pieces;
            pieces.reverse();
            PiecewisePoly::new(bps, pieces)
        }
    }

    /// `max(0, f)^r`, splitting pieces at sign changes.
    pub fn apply_rho(&self, r: u32) -> PiecewisePoly {
        let mut bps = Vec::new();
        let mut pieces = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.piece_bounds(i);
            if let Some(lo) = lo {
                bps.push(lo.clone());
            }
            let rho = |sample: &Q| {
                if p.eval(sample) > Q::zero() {
                    p.pow(r)
                } else {
                    Poly::zero()
                }
            };
            if p.degree().unwrap_or(0) == 0 {
                pieces.push(if p.lead() > Q::zero() { p.pow(r) } else { Poly::zero() });
                continue;
            }
            let roots = roots_between(p, lo, hi);
            let mut left = lo.cloned();
            for root in roots {
                pieces.push(rho(&Breakpoint::sample_between(left.as_ref(), Some(&root))));
                bps.push(root.clone());
                left = Some(root);
            }
            pieces.push(rho(&Breakpoint::sample_between(left.as_ref(), hi)));
        }
        PiecewisePoly::new(bps, pieces)
    }

    /// Restriction as (lo, hi, piece) triples clipped to `[a, b]`.
    pub fn segments_in(&self, a: &Q, b: &Q) -> Vec<(Breakpoint, Breakpoint, &Poly)> {
        let mut out = Vec::new();
        for i in 0..self.pieces.len() {
            let (lo, hi) = self.piece_bounds(i);
            let lo = match lo {
                Some(l) if l.cmp_q(a) == Ordering::Greater => l.clone(),
                _ => Breakpoint::Rational(a.clone()),
            };
            let hi = match hi {
                Some(h) if h.cmp_q(b) == Ordering::Less => h.clone(),
                _ => Breakpoint::Rational(b.clone()),
            };
            if lo < hi {
                out.push((lo, hi, &self.pieces[i]));
            }
        }
        out
    }

    /// True when the one-sided limits agree at every breakpoint.
    pub fn is_continuous(&self) -> bool {
        self.breakpoints.iter().enumerate().all(|(i, b)| b.sign_of(&self.pieces[i].sub(&self.pieces[i + 1])) == 0)
    }

    pub fn to_json(&self) -> Value {
        let bps: Vec<Value> = self
            .breakpoints
            .iter()
            .map(|b| match b {
                Breakpoint::Rational(x) => json!(rat::fmt(x)),
                Breakpoint::Algebraic(a) => json!({
                    "poly": a.poly.coeffs().iter().map(rat::fmt).collect::<Vec<_>>(),
                    "interval": [rat::fmt(&a.lo), rat::fmt(&a.hi)],
                }),
            })
            .collect();
        let pieces: Vec<Value> =
            self.pieces.iter().map(|p| json!(p.coeffs().iter().map(rat::fmt).collect::<Vec<_>>())).collect();
        json!({ "breakpoints": bps, "pieces": pieces })
    }
}

fn affine_preimage(t: &Breakpoint, a: &Q, b: &Q) -> Breakpoint {
    match t {
        Breakpoint::Rational(x) => Breakpoint::Rational((x - b) / a),
        Breakpoint::Algebraic(al) => {
            let poly = al.poly.compose_linear(a, b).squarefree();
            let (u, v) = ((&al.lo - b) / a, (&al.hi - b) / a);
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            Breakpoint::Algebraic(super::algebraic::Algebraic { poly, lo, hi })
        }
    }
}
