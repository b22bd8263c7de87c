//! Dense univariate polynomials over Q.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rat::{self, Q};

/// Coefficients in ascending order, trailing zeros trimmed (the zero
/// polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(rat::fmt).collect();
        write!(f, "Poly[{}]", parts.join(", "))
    }
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(v: Q) -> Self {
        Poly::new(vec![v])
    }

    /// `a x + b`
    pub fn linear(a: Q, b: Q) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn x() -> Self {
        Poly::linear(Q::one(), Q::zero())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.c.iter().rev() {
            acc = acc * x + rat::to_f64(a);
        }
        acc
    }

    /// Coefficients as floats, for repeated float evaluation.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(rat::to_f64).collect()
    }

    /// Interval Horner enclosure of the range on `[lo, hi]`.
    pub fn eval_interval(&self, lo: &Q, hi: &Q) -> (Q, Q) {
        let mut a = Q::zero();
        let mut b = Q::zero();
        for c in self.c.iter().rev() {
            let p = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mn = p.iter().min().unwrap().clone();
            let mx = p.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Q::zero(); n];
        for (i, v) in self.c.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in o.c.iter().enumerate() {
            c[i] += v;
        }
        Poly::new(c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, a: &Q) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|v| v * a).collect() }
    }

    pub fn add_const(&self, a: &Q) -> Poly {
        self.add(&Poly::constant(a.clone()))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(Q::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// `self(a x + b)`
    pub fn compose_linear(&self, a: &Q, b: &Q) -> Poly {
        let lin = Poly::linear(a.clone(), b.clone());
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(&lin).add_const(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * rat::q(i as i64)).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut c = vec![Q::zero()];
        c.extend(self.c.iter().enumerate().map(|(i, a)| a / rat::q(i as i64 + 1)));
        Poly::new(c)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.c.len() - 1;
        let lc = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] / &lc;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[i + j] -= &f * b;
            }
            q[i] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Q::one() / self.lead()))
    }

    /// Scaled by a positive constant so the leading coefficient is ±1.
    fn normalized_pos(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Q::one() / self.lead().abs()))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Same real roots, all simple.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.normalized_pos(), self.derivative().normalized_pos()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Q::one()).normalized_pos());
        }
        seq
    }

    /// Upper bound on the absolute value of any root, a power of two.
    pub fn root_bound(&self) -> Q {
        let lc = self.lead().abs();
        let mut m = Q::zero();
        for a in &self.c[..self.c.len() - 1] {
            let v = a.abs() / &lc;
            if v > m {
                m = v;
            }
        }
        let b = m + Q::one();
        let mut p = Q::one();
        while p <= b {
            p *= rat::q(2);
        }
        p
    }
}

pub fn sign_changes(seq: &[Poly], x: &Q) -> usize {
    let mut last = 0;
    let mut n = 0;
    for p in seq {
        let s = rat::sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

/// Number of distinct roots in `(a, b]` of the first polynomial of `seq`.
pub fn count_roots(seq: &[Poly], a: &Q, b: &Q) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        let (qq, r) = p(&[-1, 0, 1]).div_rem(&a);
        assert_eq!(qq, b);
        assert!(r.is_zero());
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[0, 0, 1]).compose_linear(&q(2), &q(1)), p(&[1, 4, 4]));
        assert_eq!(p(&[3, 2]).antiderivative().derivative(), p(&[3, 2]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(a.squarefree(), p(&[-1, 1]).mul(&p(&[2, 1])).monic());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
    }

    #[test]
    fn sturm_counts() {
        // (x^2 - 2)(x - 3)
        let a = p(&[-2, 0, 1]).mul(&p(&[-3, 1]));
        let s = a.sturm();
        assert_eq!(count_roots(&s, &q(-10), &q(10)), 3);
        assert_eq!(count_roots(&s, &q(0), &q(2)), 1);
        assert_eq!(count_roots(&s, &q(2), &q(3)), 1);
        assert_eq!(count_roots(&s, &qf(-3, 2), &q(1)), 1);
        assert!(a.root_bound() > q(3));
    }

    #[test]
    fn interval_horner_encloses() {
        let a = p(&[1, -3, 0, 1]);
        let (lo, hi) = a.eval_interval(&qf(1, 3), &qf(1, 2));
        for x in [qf(1, 3), qf(2, 5), qf(1, 2)] {
            let v = a.eval(&x);
            assert!(lo <= v && v <= hi);
        }
    }
}
