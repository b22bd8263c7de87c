//! Free-knot lower bounds for the sawtooth and its Besov growth.

use std::time::Instant;

use nncalc::approx::{besov_lower, hat_norm, inapprox_report, inapprox_threshold, modulus, FreeKnotOracle};
use nncalc::gadgets::sawtooth_pw;
use nncalc::rat;

fn main() {
    println!("j  N  dp_error   bound     margin    N=2^j error");
    for j in 4..=8 {
        let t0 = Instant::now();
        let oracle = FreeKnotOracle::new(&sawtooth_pw(j), 1, 1.0, 10).expect("valid oracle");
        let n = inapprox_threshold(j, 1);
        let rep = inapprox_report(j, n, 1, 1.0, 10, &oracle).expect("fit");
        let full = oracle.best(1 << j).expect("fit").error;
        println!(
            "{j}  {n:<2} {:.6}  {:.6}  {:+.6}  {full}   ({:.1?})",
            rep.dp_error,
            rep.paper_bound,
            rep.margin,
            t0.elapsed()
        );
    }

    for p in [1.0, 2.0] {
        let c = 2f64.powf(-1.0 / p) * hat_norm(p);
        for j in [1, 5, 10] {
            let w = modulus(&sawtooth_pw(j), 2, p, &rat::two_pow(-(j as i64 + 1)));
            println!("p={p} j={j}: omega_2 = {:.6} >= {c:.6}", w.value);
        }
    }
    let mut prev = None;
    for j in 5..=10 {
        let b = besov_lower(&sawtooth_pw(j), 1.0, 2.0, f64::INFINITY).seminorm;
        if let Some(a) = prev {
            println!("j={j}: besov lower {b:.4}, growth {:.4}", b / a);
        }
        prev = Some(b);
    }
}
