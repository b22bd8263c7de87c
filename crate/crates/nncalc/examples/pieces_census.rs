//! Exact piece extraction on random networks against the counting bounds.

use nncalc::harness::{census, census_csv, CensusFamily};
use nncalc::gadgets::SawtoothVariant;
use nncalc::pwpoly::{extract_pieces, lambda_neurons, lambda_weights};
use nncalc::random::{random_network, rng, RandomNetSpec};
use nncalc::rat;

fn main() {
    let net = random_network(&mut rng(11, 0), &RandomNetSpec::scalar(2, 3, 14));
    let pw = extract_pieces(&net).unwrap();
    println!("rho_2 net of depth 3: {} pieces, max degree {}", pw.count_pieces(), pw.max_degree());
    for (i, p) in pw.pieces().iter().enumerate() {
        let (a, b) = pw.piece_bounds(i);
        let show = |x: Option<&nncalc::pwpoly::Breakpoint>| x.map_or("inf".to_string(), |b| format!("{:.4}", b.to_f64()));
        let coeffs: Vec<String> = p.coeffs().iter().map(rat::fmt).collect();
        println!("  ({}, {}): [{}]", show(a), show(b), coeffs.join(", "));
    }

    for l in 1..=5 {
        println!("L={l}: Lambda weights r=1 {}, r=2 {}; neurons r=1 {}", lambda_weights(l, 1), lambda_weights(l, 2), lambda_neurons(l, 1));
    }

    let rows = census(CensusFamily::RandomNet, &[8, 16, 24], 1, 3, 3, SawtoothVariant::Weights, 7).unwrap();
    print!("{}", census_csv(&rows));
    let saw = census(CensusFamily::Sawtooth, &[2, 4, 6, 8], 1, 3, 1, SawtoothVariant::Neurons, 7).unwrap();
    print!("{}", census_csv(&saw));
}
