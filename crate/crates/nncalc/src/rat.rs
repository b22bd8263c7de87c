//! Small helpers around `BigRational`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

pub fn to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // huge numerator or denominator: scale both down first
            let nb = x.numer().bits() as i64;
            let db = x.denom().bits() as i64;
            let shift = (nb.max(db) - 900).max(0) as usize;
            let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift).to_f64().unwrap_or(0.0);
            if d == 0.0 {
                if n == 0.0 {
                    // numerator tiny relative to denominator
                    0.0
                } else {
                    f64::INFINITY * n.signum()
                }
            } else {
                n / d
            }
        }
    }
}

/// Parses "p/q" or "p".
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

/// Always "p/q", even for integers, so the format is uniform.
pub fn fmt(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn pow(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

pub fn two_pow(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(BigInt::one() << (e as usize))
    } else {
        Q::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Rounds `x` to `bits` significant bits, toward -inf (`up = false`) or +inf.
pub fn round_bits(x: &Q, bits: u32, up: bool) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let a = x.abs();
    // e with 2^(e-1) <= |x| < 2^e, approximately
    let e = a.numer().bits() as i64 - a.denom().bits() as i64;
    let shift = bits as i64 - e;
    let scaled = if shift >= 0 {
        x * two_pow(shift)
    } else {
        x / two_pow(-shift)
    };
    let fl = floor(&scaled);
    let r = if up && Q::from_integer(fl.clone()) != scaled {
        fl + BigInt::one()
    } else {
        fl
    };
    let r = Q::from_integer(r);
    if shift >= 0 {
        r / two_pow(shift)
    } else {
        r * two_pow(-shift)
    }
}

pub fn sign(x: &Q) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Solves the square system `m x = b` by exact Gaussian elimination.
pub fn solve(mut m: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        b.swap(col, piv);
        let inv = Q::one() / &m[col][col];
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
            let v = &f * &b[col];
            b[r] -= v;
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}
