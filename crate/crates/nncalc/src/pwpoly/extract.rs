//! Exact piecewise-polynomial realization of scalar networks.

use num_traits::Zero;

use super::piecewise::PiecewisePoly;
use crate::error::{NetError, Result};
use crate::network::{Act, Network};
use crate::rat::Q;

/// Pushes the identity on R through the layers, overlaying affine
/// combinations and splitting at the roots of each activation input.
pub fn extract_pieces(net: &Network) -> Result<PiecewisePoly> {
    net.ensure_valid()?;
    if net.d_in() != 1 || net.d_out() != 1 {
        return Err(NetError::Dim(format!("extraction needs a 1 -> 1 network, got {} -> {}", net.d_in(), net.d_out())));
    }
    if let Some(Act::Custom(c)) = net.hidden_acts().find(|a| matches!(a, Act::Custom(_))) {
        return Err(NetError::CustomActivation(c.name.clone()));
    }
    let mut cur = vec![PiecewisePoly::identity()];
    for layer in &net.layers {
        let mut rows: Vec<Vec<(Q, &PiecewisePoly)>> = vec![Vec::new(); layer.map.rows()];
        for (r, c, v) in layer.map.entries() {
            rows[r].push((v.clone(), &cur[c]));
        }
        let next: Vec<PiecewisePoly> = rows
            .iter()
            .zip(layer.map.bias())
            .zip(&layer.act)
            .map(|((terms, b), act)| {
                let lin = if terms.is_empty() {
                    PiecewisePoly::constant(b.clone())
                } else {
                    PiecewisePoly::linear_combination(terms, b)
                };
                match act {
                    Act::Rho(r) => lin.apply_rho(*r),
                    _ => lin,
                }
            })
            .collect();
        cur = next;
    }
    Ok(cur.pop().unwrap_or_else(|| PiecewisePoly::constant(Q::zero())))
}
