//! Building networks from smaller ones and reading off their budgets.

use nncalc::calculus::{
    cartesian, compose_fused, compose_stacked, deepen, pre_post_affine, represent_polynomial, strictify, sum,
    IdentityRepresentation,
};
use nncalc::rat::{self, q, qf};
use nncalc::{AffineMap, Network};

fn show(name: &str, net: &Network) {
    let c = net.complexity().expect("valid network");
    let y = net.evaluate(&[qf(3, 4)]).expect("exact evaluation");
    let ys: Vec<String> = y.iter().map(rat::fmt).collect();
    println!("{name:<16} W={:<3} L={} N={:<3} strict={:<5} f(3/4)={}", c.w, c.l, c.n, net.is_strict(), ys.join(", "));
}

fn main() {
    // x^2 and 1 - 3x + x^2 as depth-2 rho_2 networks
    let sq = represent_polynomial(&[q(0), q(0), q(1)], 2).unwrap();
    let p = represent_polynomial(&[q(1), q(-3), q(1)], 2).unwrap();
    show("x^2", &sq);
    show("1-3x+x^2", &p);

    show("deepen(x^2, 2)", &deepen(&sq, 2));
    show("sum", &sum(&[sq.clone(), p.clone()]).unwrap());
    show("cartesian", &cartesian(&[sq.clone(), p.clone()]).unwrap());

    // (x^2)^2 two ways: stacking keeps an identity interface, fusing merges it
    let stacked = compose_stacked(&sq, &sq).unwrap();
    let fused = compose_fused(&sq, &sq).unwrap();
    show("stacked x^4", &stacked);
    show("fused x^4", &fused);

    // pre/post affine maps: 2 * (x/2 + 1)^2 - 1
    let pre = AffineMap::from_dense(&[vec![qf(1, 2)]], vec![q(1)]);
    let post = AffineMap::from_dense(&[vec![q(2)]], vec![q(-1)]);
    show("affine wrap", &pre_post_affine(&sq, Some(&pre), Some(&post)).unwrap());

    // a generalized network with identity neurons becomes strict
    let mixed = deepen(&sq, 1);
    let strict = strictify(&mixed, &IdentityRepresentation::canonical(2)).unwrap();
    show("mixed", &mixed);
    show("strictified", &strict);
    let idrep = IdentityRepresentation::canonical(2);
    println!("identity via rho_2 uses {} terms, verified: {}", idrep.n(), idrep.verify());
}
