//! `nncalc-net-v1` JSON format.

use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::NetError;
use crate::network::{Act, Layer, Network};
use crate::rat;

pub const FORMAT: &str = "nncalc-net-v1";

#[derive(Serialize, Deserialize)]
struct NetJson {
    format: String,
    /// Input dimension; later layers take theirs from the previous layer.
    d_in: usize,
    layers: Vec<LayerJson>,
}

#[derive(Serialize, Deserialize)]
struct LayerJson {
    matrix: Vec<(usize, usize, String)>,
    bias: Vec<String>,
    act: Vec<String>,
}

pub fn to_json(net: &Network) -> String {
    let layers = net
        .layers
        .iter()
        .map(|l| LayerJson {
            matrix: l.map.entries().map(|(r, c, v)| (r, c, rat::fmt(v))).collect(),
            bias: l.map.bias().iter().map(rat::fmt).collect(),
            act: l.act.iter().map(Act::tag).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&NetJson { format: FORMAT.into(), d_in: net.d_in(), layers }).expect("serializable")
}

pub fn from_json(s: &str) -> Result<Network, NetError> {
    let j: NetJson = serde_json::from_str(s).map_err(|e| NetError::Json(e.to_string()))?;
    if j.format != FORMAT {
        return Err(NetError::Json(format!("unsupported format {:?}", j.format)));
    }
    let mut layers = Vec::with_capacity(j.layers.len());
    let mut cols = j.d_in;
    for l in j.layers {
        let parse = |s: &String| rat::parse(s).ok_or_else(|| NetError::Json(format!("bad rational {s:?}")));
        let bias = l.bias.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let trip = l
            .matrix
            .iter()
            .map(|(r, c, v)| Ok((*r, *c, parse(v)?)))
            .collect::<Result<Vec<_>, NetError>>()?;
        let map = AffineMap::from_triplets(bias.len(), cols, trip, bias).map_err(NetError::Json)?;
        let act = l.act.iter().map(|a| Act::from_tag(a)).collect::<Result<Vec<_>, _>>()?;
        cols = map.rows();
        layers.push(Layer::new(map, act));
    }
    Network::new(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    #[test]
    fn roundtrip_small() {
        let t1 = AffineMap::from_dense(&[vec![qf(1, 3)], vec![q(-2)]], vec![q(0), qf(5, 7)]);
        let t2 = AffineMap::from_dense(&[vec![q(1), q(0)]], vec![q(0)]);
        let net = Network::new(vec![
            Layer::new(t1, vec![Act::Rho(2), Act::Id]),
            Layer::uniform(t2, Act::Id),
        ])
        .unwrap();
        let back = from_json(&to_json(&net)).unwrap();
        assert_eq!(back, net);
    }

    #[test]
    fn rejects_wrong_format() {
        assert!(from_json(r#"{"format":"other","d_in":1,"layers":[]}"#).is_err());
    }
}
