//! Real algebraic breakpoints and root isolation.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::poly::{count_roots, Poly};
use crate::rat::{self, Q};

/// Default isolating-interval width, `2^-64`.
pub const DEFAULT_WIDTH_LOG2: i64 = -64;

/// A real root of a squarefree polynomial, isolated in the open interval
/// `(lo, hi)`, with `poly` nonzero and of opposite signs at both ends.
#[derive(Clone, Debug)]
pub struct Algebraic {
    pub poly: Poly,
    pub lo: Q,
    pub hi: Q,
}

#[derive(Clone, Debug)]
pub enum Breakpoint {
    Rational(Q),
    Algebraic(Algebraic),
}

impl Algebraic {
    fn sign_lo(&self) -> i32 {
        rat::sign(&self.poly.eval(&self.lo))
    }

    /// One bisection step. Lands on a rational root when the midpoint is one.
    pub fn bisect(&self) -> Breakpoint {
        let m = (&self.lo + &self.hi) / rat::q(2);
        let s = rat::sign(&self.poly.eval(&m));
        if s == 0 {
            Breakpoint::Rational(m)
        } else if s == self.sign_lo() {
            Breakpoint::Algebraic(Algebraic { poly: self.poly.clone(), lo: m, hi: self.hi.clone() })
        } else {
            Breakpoint::Algebraic(Algebraic { poly: self.poly.clone(), lo: self.lo.clone(), hi: m })
        }
    }

    /// Compares the root with a rational without refinement.
    fn cmp_rational(&self, x: &Q) -> Ordering {
        if *x <= self.lo {
            return Ordering::Greater;
        }
        if *x >= self.hi {
            return Ordering::Less;
        }
        let s = rat::sign(&self.poly.eval(x));
        if s == 0 {
            Ordering::Equal
        } else if s == self.sign_lo() {
            // the sign change happens to the right of x
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// `true` when `g`, a divisor of `poly`, vanishes at the root.
    fn divisor_vanishes(&self, g: &Poly) -> bool {
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        rat::sign(&g.eval(&self.lo)) != rat::sign(&g.eval(&self.hi))
    }
}

impl Breakpoint {
    pub fn rational(x: Q) -> Self {
        Breakpoint::Rational(x)
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Breakpoint::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// Rational lower bound (the value itself when rational).
    pub fn lower(&self) -> Q {
        match self {
            Breakpoint::Rational(x) => x.clone(),
            Breakpoint::Algebraic(a) => a.lo.clone(),
        }
    }

    pub fn upper(&self) -> Q {
        match self {
            Breakpoint::Rational(x) => x.clone(),
            Breakpoint::Algebraic(a) => a.hi.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Breakpoint::Rational(x) => rat::to_f64(x),
            Breakpoint::Algebraic(a) => rat::to_f64(&((&a.lo + &a.hi) / rat::q(2))),
        }
    }

    pub fn bisect(&self) -> Breakpoint {
        match self {
            Breakpoint::Rational(_) => self.clone(),
            Breakpoint::Algebraic(a) => a.bisect(),
        }
    }

    /// Refines until the isolating interval has width at most `2^log2_width`.
    pub fn refine(&self, log2_width: i64) -> Breakpoint {
        let w = rat::two_pow(log2_width);
        let mut cur = self.clone();
        while let Breakpoint::Algebraic(a) = &cur {
            if &a.hi - &a.lo <= w {
                break;
            }
            cur = a.bisect();
        }
        cur
    }

    /// Sign of `p` at this point.
    pub fn sign_of(&self, p: &Poly) -> i32 {
        match self {
            Breakpoint::Rational(x) => rat::sign(&p.eval(x)),
            Breakpoint::Algebraic(a) => {
                if p.degree().unwrap_or(0) == 0 {
                    return rat::sign(&p.lead());
                }
                if a.divisor_vanishes(&p.gcd(&a.poly)) {
                    return 0;
                }
                let mut cur = self.clone();
                loop {
                    let Breakpoint::Algebraic(a) = &cur else {
                        return cur.sign_of(p);
                    };
                    let (lo, hi) = p.eval_interval(&a.lo, &a.hi);
                    if lo > Q::zero() {
                        return 1;
                    }
                    if hi < Q::zero() {
                        return -1;
                    }
                    cur = a.bisect();
                }
            }
        }
    }

    /// Rational enclosure of `p` at this point.
    pub fn eval_enclosure(&self, p: &Poly) -> (Q, Q) {
        match self {
            Breakpoint::Rational(x) => {
                let v = p.eval(x);
                (v.clone(), v)
            }
            Breakpoint::Algebraic(a) => p.eval_interval(&a.lo, &a.hi),
        }
    }

    pub fn cmp_q(&self, x: &Q) -> Ordering {
        match self {
            Breakpoint::Rational(y) => y.cmp(x),
            Breakpoint::Algebraic(a) => a.cmp_rational(x),
        }
    }

    pub fn cmp_bp(&self, other: &Breakpoint) -> Ordering {
        match (self, other) {
            (Breakpoint::Rational(x), _) => other.cmp_q(x).reverse(),
            (_, Breakpoint::Rational(y)) => self.cmp_q(y),
            (Breakpoint::Algebraic(a), Breakpoint::Algebraic(b)) => {
                if a.hi <= b.lo {
                    return Ordering::Less;
                }
                if b.hi <= a.lo {
                    return Ordering::Greater;
                }
                if a.poly == b.poly {
                    // same squarefree polynomial, overlapping intervals: the
                    // overlap holds a root of both only if they coincide
                    let lo = rat::max(&a.lo, &b.lo);
                    let hi = rat::min(&a.hi, &b.hi);
                    if a.cmp_rational(&lo) == Ordering::Greater
                        && a.cmp_rational(&hi) == Ordering::Less
                        && b.cmp_rational(&lo) == Ordering::Greater
                        && b.cmp_rational(&hi) == Ordering::Less
                    {
                        return Ordering::Equal;
                    }
                } else {
                    let g = a.poly.gcd(&b.poly);
                    if a.divisor_vanishes(&g) && b.divisor_vanishes(&g) {
                        // g has at most one root in each interval; it is the
                        // same root when it lies in the overlap
                        let in_b = a.cmp_rational(&b.lo) == Ordering::Greater
                            && a.cmp_rational(&b.hi) == Ordering::Less;
                        if in_b {
                            return Ordering::Equal;
                        }
                    }
                }
                a.bisect().cmp_bp(&b.bisect())
            }
        }
    }

    /// A rational strictly between `a` and `b` (either may be unbounded).
    pub fn sample_between(a: Option<&Breakpoint>, b: Option<&Breakpoint>) -> Q {
        match (a, b) {
            (None, None) => Q::zero(),
            (Some(a), None) => floor_plus_one(&a.upper()),
            (None, Some(b)) => -floor_plus_one(&-b.lower()),
            (Some(a), Some(b)) => {
                let (mut a, mut b) = (a.clone(), b.clone());
                loop {
                    let (u, v) = (a.upper(), b.lower());
                    if u < v {
                        return simple_between(&u, &v);
                    }
                    a = a.bisect();
                    b = b.bisect();
                }
            }
        }
    }
}

/// Smallest integer strictly greater than `x`.
fn floor_plus_one(x: &Q) -> Q {
    Q::from_integer(rat::floor(x) + num_bigint::BigInt::one())
}

/// A rational in `[u, v]` with `u < v` and small denominator when one fits,
/// excluding the endpoints.
fn simple_between(u: &Q, v: &Q) -> Q {
    // dyadic search keeps sample denominators small
    let w = v - u;
    let mut k = 0i64;
    while rat::two_pow(-k) >= w {
        k += 1;
    }
    let step = rat::two_pow(-(k + 1));
    let n = rat::floor(&(u / &step)) + num_bigint::BigInt::one();
    let x = Q::from_integer(n) * &step;
    if &x > u && &x < v {
        x
    } else {
        (u + v) / rat::q(2)
    }
}

impl PartialEq for Breakpoint {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_bp(other) == Ordering::Equal
    }
}

impl Eq for Breakpoint {}

impl PartialOrd for Breakpoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Breakpoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_bp(other)
    }
}

/// All distinct real roots of `p`, ascending, refined to the default width.
pub fn real_roots(p: &Poly) -> Vec<Breakpoint> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let c = p.coeffs();
        return vec![Breakpoint::Rational(-&c[0] / &c[1])];
    }
    let sq = p.squarefree();
    if sq.degree() == Some(1) {
        let c = sq.coeffs();
        return vec![Breakpoint::Rational(-&c[0] / &c[1])];
    }
    let seq = sq.sturm();
    let b = sq.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((a, b)) = stack.pop() {
        let n = count_roots(&seq, &a, &b);
        if n == 0 {
            continue;
        }
        let fa = sq.eval(&a);
        let fb = sq.eval(&b);
        if n == 1 && fb.is_zero() {
            out.push(Breakpoint::Rational(b));
            continue;
        }
        if n == 1 && !fa.is_zero() {
            let alg = Breakpoint::Algebraic(Algebraic { poly: sq.clone(), lo: a, hi: b });
            out.push(alg.refine(DEFAULT_WIDTH_LOG2));
            continue;
        }
        let m = (&a + &b) / rat::q(2);
        // right half first so the left half pops next
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    out.sort();
    out
}

/// Roots of `p` strictly inside `(a, b)`, either end possibly unbounded.
pub fn roots_between(p: &Poly, a: Option<&Breakpoint>, b: Option<&Breakpoint>) -> Vec<Breakpoint> {
    real_roots(p)
        .into_iter()
        .filter(|r| a.is_none_or(|a| r > a) && b.is_none_or(|b| r < b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn isolates_and_orders() {
        let r = real_roots(&p(&[-2, 0, 1]).mul(&p(&[-1, 3])));
        assert_eq!(r.len(), 3);
        assert!(r[0].to_f64() + 2f64.sqrt() < 1e-15);
        assert_eq!(r[1], Breakpoint::Rational(qf(1, 3)));
        assert!((r[2].to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!(r[0] < r[1] && r[1] < r[2]);
    }

    #[test]
    fn same_root_different_polys() {
        let a = &real_roots(&p(&[-2, 0, 1]))[1];
        let b = &real_roots(&p(&[-2, 0, 1]).mul(&p(&[-5, 0, 1])))[2];
        assert_eq!(a.cmp_bp(b), Ordering::Equal);
        let c = &real_roots(&p(&[-3, 0, 1]))[1];
        assert!(a < c);
    }

    #[test]
    fn sign_at_algebraic() {
        let s2 = &real_roots(&p(&[-2, 0, 1]))[1];
        assert_eq!(s2.sign_of(&p(&[-2, 0, 1]).mul(&p(&[1, 1]))), 0);
        assert_eq!(s2.sign_of(&p(&[-141, 100])), 1);
        assert_eq!(s2.sign_of(&p(&[-142, 100])), -1);
        assert_eq!(s2.cmp_q(&q(1)), Ordering::Greater);
        assert_eq!(s2.cmp_q(&q(2)), Ordering::Less);
        let x = Breakpoint::sample_between(Some(s2), Some(&Breakpoint::Rational(qf(3, 2))));
        assert!(x > qf(141, 100) && x < qf(3, 2));
    }

    #[test]
    fn repeated_roots() {
        let r = real_roots(&p(&[-1, 1]).pow(3).mul(&p(&[4, 0, 1])));
        assert_eq!(r, vec![Breakpoint::Rational(q(1))]);
    }
}
