//! Custom activations: exact substitution, power unrolling and float views.

use nncalc::calculus::{power_unroll, strictify_approx, substitute_activation, SubstMode};
use nncalc::gadgets::squash_net;
use nncalc::network::{precision_bits_from_env, register_custom};
use nncalc::random::{random_network, rng, RandomNetSpec};
use nncalc::rat::{self, qf};
use nncalc::{Act, CustomActivation, Layer, Network};

fn main() {
    // a network over the clamp σ_1, then with σ_1 replaced by its rho_1 network
    let sigma = squash_net(1).unwrap();
    let clamp = CustomActivation::from_network("clamp", sigma.clone());
    register_custom(clamp.clone());
    let mut net = random_network(&mut rng(5, 0), &RandomNetSpec::scalar(1, 3, 12));
    let hidden = net.layers.len() - 1;
    for layer in &mut net.layers[..hidden] {
        for a in &mut layer.act {
            *a = Act::Custom(clamp.clone());
        }
    }
    for mode in [SubstMode::TwoLayer, SubstMode::General] {
        let out = substitute_activation(&net, &sigma, mode).unwrap();
        let c = out.complexity().unwrap();
        let same = (-8..=8).all(|i| out.evaluate(&[qf(i, 4)]).unwrap() == net.evaluate(&[qf(i, 4)]).unwrap());
        println!("{mode:?}: (W,L,N)=({},{},{}) same realization: {same}", c.w, c.l, c.n);
    }

    // rho_4 = rho_2 ∘ rho_2
    let r4 = random_network(&mut rng(6, 0), &RandomNetSpec::scalar(4, 2, 8));
    let un = power_unroll(&r4, 2, 2).unwrap();
    for x in [qf(-3, 2), qf(1, 3), qf(5, 2)] {
        let (a, b) = (r4.evaluate(&[x.clone()]).unwrap(), un.evaluate(&[x.clone()]).unwrap());
        println!("rho_4 depth {} vs rho_2 depth {} at {}: {} = {}", r4.depth(), un.depth(), rat::fmt(&x), rat::fmt(&a[0]), rat::fmt(&b[0]));
    }

    // tanh has no exact network; identity neurons are replaced by difference quotients
    let tanh = CustomActivation::new("tanh", f64::tanh, Some((0.0, 1.0)));
    let t1 = nncalc::AffineMap::from_dense(&[vec![qf(1, 1)], vec![qf(1, 2)]], vec![qf(0, 1), qf(1, 1)]);
    let t2 = nncalc::AffineMap::from_dense(&[vec![qf(1, 1), qf(-1, 1)]], vec![qf(0, 1)]);
    let mixed = Network::new(vec![Layer::new(t1, vec![Act::Custom(tanh), Act::Id]), Layer::uniform(t2, Act::Id)]).unwrap();
    for m in [10, 1000, 100_000] {
        let s = strictify_approx(&mixed, m, 2.0).unwrap();
        println!("m={m}: strict={} sup error on [-2,2] {:.2e}", s.net.is_strict(), s.sup_error);
    }

    let bits = precision_bits_from_env();
    let v = un.evaluate_float(&[2.5], bits).unwrap();
    println!("float view at {bits} bits: {:.17} ± {:.1e} (certified {})", v.value[0], v.radius[0], v.certified);
}
