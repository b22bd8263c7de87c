//! Networks as `nncalc-net-v1` JSON and piecewise polynomials as JSON.

use nncalc::gadgets::{sawtooth_net, SawtoothSpec, SawtoothVariant};
use nncalc::json::{from_json, to_json};
use nncalc::pwpoly::extract_pieces;

fn main() {
    let net = sawtooth_net(&SawtoothSpec { j: 2, d: 1, variant: SawtoothVariant::Weights, l: 2 }).unwrap();
    let text = to_json(&net);
    println!("{text}");
    let back = from_json(&text).unwrap();
    println!("round trip identical: {}", back == net);
    println!("{}", serde_json::to_string_pretty(&extract_pieces(&net).unwrap().to_json()).unwrap());
    let bad = text.replace("nncalc-net-v1", "nncalc-net-v0");
    println!("wrong version: {}", from_json(&bad).unwrap_err());
}
