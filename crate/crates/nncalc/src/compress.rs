//! Dead-neuron removal.

use num_traits::Zero;

use crate::network::{constant_network, Network};

/// Removes hidden neurons with a zero incoming row, folding their constant
/// output into the next layer's bias. Lowest layer first, then lowest index,
/// until nothing changes. A layer whose map has no entries makes the whole
/// realization constant, and the network collapses to `constant_network`.
pub fn compress(net: &Network) -> Network {
    let mut net = net.clone();
    loop {
        if net.depth() > 1 {
            if let Some(l) = net.layers.iter().position(|l| l.map.l0() == 0) {
                if let Some(c) = constant_tail(&net, l) {
                    return constant_network(c, net.d_in());
                }
            }
        }
        if !remove_one(&mut net) {
            return net;
        }
    }
}

/// Value of the realization when layer `l` has a zero linear part.
fn constant_tail(net: &Network, l: usize) -> Option<Vec<crate::rat::Q>> {
    let layer = &net.layers[l];
    let mut cur: Vec<_> = layer
        .map
        .bias()
        .iter()
        .zip(&layer.act)
        .map(|(b, a)| a.apply(b.clone()).ok())
        .collect::<Option<_>>()?;
    for layer in &net.layers[l + 1..] {
        let y = layer.map.apply(&cur);
        cur = y.into_iter().zip(&layer.act).map(|(v, a)| a.apply(v).ok()).collect::<Option<_>>()?;
    }
    Some(cur)
}

fn remove_one(net: &mut Network) -> bool {
    let hidden = net.depth() - 1;
    for l in 0..hidden {
        let rows = net.layers[l].map.rows();
        for i in 0..rows {
            if !net.layers[l].map.row_is_zero(i) {
                continue;
            }
            let b = net.layers[l].map.bias()[i].clone();
            let Ok(c) = net.layers[l].act[i].apply(b) else { continue };
            if rows == 1 {
                // handled by the collapse rule on the next pass
                continue;
            }
            let next = &mut net.layers[l + 1].map;
            if !c.is_zero() {
                for (r, a) in next.column(i) {
                    let nb = &next.bias()[r] + &c * a;
                    next.set_bias(r, nb);
                }
            }
            next.remove_column(i);
            net.layers[l].map.remove_row(i);
            net.layers[l].act.remove(i);
            return true;
        }
    }
    false
}
