//! Crossing numbers: components of `{f >= 1/2}` and `{f < 1/2}`.

use num_traits::One;

use super::algebraic::{roots_between, Breakpoint};
use super::piecewise::PiecewisePoly;
use crate::rat::{self, Q};

/// A connected component of a level set. Endpoints are `None` when infinite;
/// a component may be a single point.
#[derive(Clone, Debug)]
pub struct Component {
    pub start: Option<Breakpoint>,
    pub start_closed: bool,
    pub end: Option<Breakpoint>,
    pub end_closed: bool,
    /// 1 on `{f >= 1/2}`, 0 on `{f < 1/2}`.
    pub level: u8,
}

#[derive(Clone, Debug)]
pub struct CrossingProfile {
    pub components: Vec<Component>,
    pub crossing_number: usize,
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// Breakpoints of `f` together with the points where a piece meets 1/2.
fn level_points(f: &PiecewisePoly) -> Vec<Breakpoint> {
    let h = half();
    let mut out = Vec::new();
    for (i, p) in f.pieces().iter().enumerate() {
        let (lo, hi) = f.piece_bounds(i);
        if let Some(lo) = lo {
            out.push(lo.clone());
        }
        out.extend(roots_between(&p.add_const(&-h.clone()), lo, hi));
    }
    out
}

fn level_at_point(f: &PiecewisePoly, x: &Breakpoint) -> u8 {
    let p = &f.pieces()[f.locate_bp(x)];
    (x.sign_of(&p.add_const(&-half())) >= 0) as u8
}

fn level_at(f: &PiecewisePoly, x: &Q) -> u8 {
    (f.eval(x) >= half()) as u8
}

/// Samples inside the gaps between consecutive points (and the two tails).
fn gap_samples(points: &[Breakpoint]) -> Vec<Q> {
    (0..=points.len())
        .map(|i| {
            let lo = if i == 0 { None } else { Some(&points[i - 1]) };
            Breakpoint::sample_between(lo, points.get(i))
        })
        .collect()
}

/// Levels on the atoms gap_0, point_0, gap_1, .., point_{m-1}, gap_m.
fn atom_levels(f: &PiecewisePoly, points: &[Breakpoint], samples: &[Q]) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 * points.len() + 1);
    for (i, s) in samples.iter().enumerate() {
        out.push(level_at(f, s));
        if let Some(p) = points.get(i) {
            out.push(level_at_point(f, p));
        }
    }
    out
}

/// Maximal runs of equal values, as `(first atom, last atom)`.
fn runs(levels: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut s = 0;
    for i in 1..=levels.len() {
        if i == levels.len() || levels[i] != levels[s] {
            out.push((s, i - 1));
            s = i;
        }
    }
    out
}

pub fn crossing_profile(f: &PiecewisePoly) -> CrossingProfile {
    let points = level_points(f);
    let samples = gap_samples(&points);
    let levels = atom_levels(f, &points, &samples);
    // even atoms are gaps, odd atoms are points
    let components: Vec<Component> = runs(&levels)
        .into_iter()
        .map(|(s, e)| {
            let (start, start_closed) = if s % 2 == 1 {
                (Some(points[s / 2].clone()), true)
            } else {
                (if s == 0 { None } else { Some(points[s / 2 - 1].clone()) }, false)
            };
            let (end, end_closed) = if e % 2 == 1 {
                (Some(points[e / 2].clone()), true)
            } else {
                (points.get(e / 2).cloned(), false)
            };
            Component { start, start_closed, end, end_closed, level: levels[s] }
        })
        .collect();
    CrossingProfile { crossing_number: components.len(), components }
}

/// Result of comparing the level sets of two functions.
#[derive(Clone, Debug)]
pub struct Disagreement {
    /// Components of `f` on which the levels of `f` and `g` differ everywhere.
    pub disagreeing: usize,
    pub cr_f: usize,
    pub cr_g: usize,
    pub fraction: Q,
    /// `(1 - 2 Cr(g) / Cr(f)) / 2`.
    pub bound: Q,
}

impl Disagreement {
    pub fn holds(&self) -> bool {
        self.fraction >= self.bound
    }
}

pub fn disagreement_fraction(f: &PiecewisePoly, g: &PiecewisePoly) -> Disagreement {
    let mut points = level_points(f);
    points.extend(level_points(g));
    points.sort();
    points.dedup();
    let samples = gap_samples(&points);
    let lf = atom_levels(f, &points, &samples);
    let lg = atom_levels(g, &points, &samples);
    let rf = runs(&lf);
    let disagreeing = rf.iter().filter(|&&(s, e)| (s..=e).all(|i| lf[i] != lg[i])).count();
    let cr_f = rf.len();
    let cr_g = runs(&lg).len();
    let fraction = Q::new(disagreeing.into(), cr_f.into());
    let bound = (Q::one() - rat::q(2) * Q::new(cr_g.into(), cr_f.into())) / rat::q(2);
    Disagreement { disagreeing, cr_f, cr_g, fraction, bound }
}

/// `Cr(f)` without building the component list.
pub fn crossing_number(f: &PiecewisePoly) -> usize {
    crossing_profile(f).crossing_number
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwpoly::Poly;
    use crate::rat::{q, qf};

    fn hat() -> PiecewisePoly {
        PiecewisePoly::from_rational(
            vec![q(0), qf(1, 2), q(1)],
            vec![Poly::zero(), Poly::linear(q(2), q(0)), Poly::linear(q(-2), q(2)), Poly::zero()],
        )
    }

    #[test]
    fn hat_crosses_three_times() {
        let p = crossing_profile(&hat());
        assert_eq!(p.crossing_number, 3);
        assert_eq!(p.components[1].level, 1);
        assert!(p.components[1].start_closed && p.components[1].end_closed);
        assert_eq!(crossing_number(&PiecewisePoly::constant(q(0))), 1);
    }

    #[test]
    fn touching_point_is_a_component() {
        // 1/2 - x^2 touches 1/2 only at 0
        let f = PiecewisePoly::poly(Poly::new(vec![qf(1, 2), q(0), q(-1)]));
        let p = crossing_profile(&f);
        assert_eq!(p.crossing_number, 3);
        assert!(p.components[1].start_closed && p.components[1].end_closed);
    }

    #[test]
    fn disagreement_against_zero() {
        let d = disagreement_fraction(&hat(), &PiecewisePoly::constant(q(0)));
        assert_eq!(d.disagreeing, 1);
        assert_eq!(d.cr_f, 3);
        assert!(d.holds());
    }
}
