//! Moduli of smoothness, Besov lower estimates and approximation-space norms.

use nncalc::approx::{bernstein_probe, modulus_table, truncated_approx_norm, ApproxErrorCurve};
use nncalc::gadgets::sawtooth_pw;
use nncalc::rat::qf;

fn main() {
    let ts: Vec<_> = (1..=8).map(|i| qf(i, 64)).collect();
    let tab = modulus_table(&sawtooth_pw(3), 2, 2.0, &ts);
    for (t, w) in &tab.samples {
        println!("omega_2(Delta_3)_2({t:.4}) >= {w:.5}");
    }

    // below j = 4 the ratios are still far from their asymptotic doubling
    let rep = bernstein_probe(&[4, 5, 6, 7, 8, 9, 10], 1.0, 2.0, 1).unwrap();
    for p in &rep.points {
        println!("pieces {:>3}: besov {:.4} / L_p {:.4} = {:.3}", p.pieces, p.besov_lower, p.lp_norm, p.ratio);
    }
    println!("slope {:.3} (pass if <= s + 0.1): {}", rep.slope, rep.pass);

    let curve = ApproxErrorCurve::free_knot(&sawtooth_pw(3), 1, 2.0, 10, 6).unwrap();
    for (n, e) in curve.budgets.iter().zip(&curve.errors) {
        println!("E_{n} = {e:.5}");
    }
    for alpha in [0.5, 1.0, 2.0] {
        println!(
            "alpha={alpha}: q=2 truncation {:.4}, q=inf {:.4}",
            truncated_approx_norm(&curve, alpha, 2.0),
            truncated_approx_norm(&curve, alpha, f64::INFINITY)
        );
    }
}
