//! Crossing numbers and the level-disagreement inequality.

use nncalc::approx::best_free_knot;
use nncalc::gadgets::sawtooth_pw;
use nncalc::pwpoly::{crossing_number, crossing_profile, disagreement_fraction};
use nncalc::rat;

fn main() {
    for j in [1, 2, 4, 8, 14] {
        println!("Cr(Delta_{j}) = {} (1 + 2^j = {})", crossing_number(&sawtooth_pw(j)), 1 + (1u64 << j));
    }
    let prof = crossing_profile(&sawtooth_pw(2));
    println!("components of Delta_2: {}", prof.crossing_number);

    // a 4-piece fit cannot follow the 2^8 level changes of Delta_8
    let f = sawtooth_pw(8);
    let g = best_free_knot(&f, 4, 1, 1.0, 8).unwrap().approximant;
    let dis = disagreement_fraction(&f, &g);
    println!(
        "Cr(f)={} Cr(g)={} disagreeing fraction {} >= bound {}: {}",
        dis.cr_f,
        dis.cr_g,
        rat::fmt(&dis.fraction),
        rat::fmt(&dis.bound),
        dis.holds()
    );
}
