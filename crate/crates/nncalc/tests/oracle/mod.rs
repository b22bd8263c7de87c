//! Test-side oracles written against the JSON format only, so they share no
//! evaluation code with the library.

#![allow(dead_code)]

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

pub type R = BigRational;

pub fn r(n: i64) -> R {
    R::from_integer(BigInt::from(n))
}

pub fn rf(n: i64, d: i64) -> R {
    R::new(BigInt::from(n), BigInt::from(d))
}

pub struct OracleLayer {
    pub rows: usize,
    pub entries: Vec<(usize, usize, R)>,
    pub bias: Vec<R>,
    /// `None` is the identity, `Some(r)` is `max(0, x)^r`.
    pub act: Vec<Option<u32>>,
}

pub struct OracleNet {
    pub d_in: usize,
    pub layers: Vec<OracleLayer>,
}

fn parse_rat(v: &Value) -> R {
    R::from_str(v.as_str().expect("rational string")).expect("p/q")
}

impl OracleNet {
    pub fn from_json(text: &str) -> OracleNet {
        let v: Value = serde_json::from_str(text).expect("json");
        assert_eq!(v["format"], "nncalc-net-v1");
        let layers = v["layers"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| {
                let bias: Vec<R> = l["bias"].as_array().unwrap().iter().map(parse_rat).collect();
                let entries = l["matrix"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize, parse_rat(&e[2])))
                    .collect();
                let act = l["act"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|a| match a.as_str().unwrap() {
                        "id" => None,
                        t => Some(t.strip_prefix("rho:").expect("rho tag").parse().unwrap()),
                    })
                    .collect();
                OracleLayer { rows: bias.len(), entries, bias, act }
            })
            .collect();
        OracleNet { d_in: v["d_in"].as_u64().unwrap() as usize, layers }
    }

    pub fn of(net: &nncalc::Network) -> OracleNet {
        Self::from_json(&nncalc::json::to_json(net))
    }

    pub fn eval(&self, x: &[R]) -> Vec<R> {
        let mut v = x.to_vec();
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            let mut y = l.bias.clone();
            for (row, col, w) in &l.entries {
                y[*row] += w * &v[*col];
            }
            if i < last {
                for (yi, a) in y.iter_mut().zip(&l.act) {
                    if let Some(p) = a {
                        *yi = if yi.is_positive() { num_traits::pow(yi.clone(), *p as usize) } else { R::zero() };
                    }
                }
            }
            v = y;
        }
        v
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut v = x.to_vec();
        let last = self.layers.len() - 1;
        for (i, l) in self.layers.iter().enumerate() {
            let mut y: Vec<f64> = l.bias.iter().map(to_f64).collect();
            for (row, col, w) in &l.entries {
                y[*row] += to_f64(w) * v[*col];
            }
            if i < last {
                for (yi, a) in y.iter_mut().zip(&l.act) {
                    if let Some(p) = a {
                        *yi = yi.max(0.0).powi(*p as i32);
                    }
                }
            }
            v = y;
        }
        v
    }

    /// Nonzero matrix entries.
    pub fn weights(&self) -> usize {
        self.layers.iter().map(|l| l.entries.iter().filter(|e| !e.2.is_zero()).count()).sum()
    }

    pub fn neurons(&self) -> usize {
        self.layers[..self.layers.len() - 1].iter().map(|l| l.rows).sum()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn strict(&self) -> bool {
        self.layers[..self.layers.len() - 1].iter().all(|l| l.act.iter().all(|a| a.is_some()))
    }
}

pub fn to_f64(x: &R) -> f64 {
    nncalc::rat::to_f64(x)
}

/// Hat function on `[0, 1]`.
pub fn hat(x: &R) -> R {
    let two = r(2);
    if x.is_negative() || *x > R::one() {
        R::zero()
    } else if *x <= rf(1, 2) {
        &two * x
    } else {
        &two * (R::one() - x)
    }
}

/// `Δ_j` as the `j`-fold composition of the hat.
pub fn sawtooth(j: u32, x: &R) -> R {
    (0..j).fold(x.clone(), |acc, _| hat(&acc))
}

pub fn hat_f64(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        0.0
    } else if x <= 0.5 {
        2.0 * x
    } else {
        2.0 * (1.0 - x)
    }
}

pub fn sawtooth_f64(j: u32, x: f64) -> f64 {
    (0..j).fold(x, |acc, _| hat_f64(acc))
}

/// Deterministic rational points in `[-2, 2]^d` with small denominators.
pub fn grid_points(d: usize, n: usize, salt: u64) -> Vec<Vec<R>> {
    let mut s = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        s
    };
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let den = [3i64, 5, 8, 64][(next() % 4) as usize];
                    let num = (next() % (4 * den as u64 + 1)) as i64 - 2 * den;
                    rf(num, den)
                })
                .collect()
        })
        .collect()
}
