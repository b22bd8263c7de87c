//! The special networks and their cited budgets, as `nncalc gadget` prints them.

use nncalc::gadgets::SawtoothVariant;
use nncalc::harness::{build_gadget, GadgetParams};
use nncalc::rat::qf;

fn main() {
    let base = GadgetParams::default();
    let runs: Vec<(&str, GadgetParams)> = vec![
        ("sawtooth", GadgetParams { j: 6, l: 4, ..base.clone() }),
        ("sawtooth", GadgetParams { j: 6, l: 4, variant: SawtoothVariant::Neurons, ..base.clone() }),
        ("bspline", GadgetParams { n: 3, ..base.clone() }),
        ("squash", GadgetParams { r: 2, ..base.clone() }),
        ("mult", GadgetParams { d: 4, r: 2, ..base.clone() }),
        ("mult", GadgetParams { d: 2, k: 3, r: 2, ..base.clone() }),
        ("tensor-bspline", GadgetParams { d: 3, n: 2, ..base.clone() }),
        ("indicator", GadgetParams { d: 2, r: 1, eps: qf(1, 8), ..base.clone() }),
        ("localize", GadgetParams { r: 2, ..base.clone() }),
        ("poly", GadgetParams { r: 3, coeffs: vec![qf(1, 2), qf(0, 1), qf(-1, 1), qf(2, 1)], ..base.clone() }),
    ];
    for (kind, params) in runs {
        match build_gadget(kind, &params) {
            Ok(rep) => {
                let c = &rep.complexity;
                let claims: Vec<String> =
                    rep.budgets.iter().map(|b| format!("{} {}", b.claim, if b.pass { "PASS" } else { "FAIL" })).collect();
                println!("{kind:<15} (W,L,N)=({},{},{})  {}", c.w, c.l, c.n, claims.join("; "));
            }
            Err(e) => println!("{kind:<15} error: {e}"),
        }
    }
    // r = 1 has no exact square, so no product network
    let err = build_gadget("mult", &GadgetParams { d: 2, r: 1, ..base }).unwrap_err();
    println!("mult with r=1: {err}");
}
