mod oracle;

use proptest::prelude::*;

use nncalc::approx::{finite_difference, modulus, modulus_table, FreeKnotOracle};
use nncalc::calculus::{compose_fused, compose_stacked, deepen, represent_polynomial, sum};
use nncalc::gadgets::{sawtooth_eval, sawtooth_pw};
use nncalc::json::{from_json, to_json};
use nncalc::pwpoly::{crossing_number, extract_pieces, lp_norm, piece_bound, BoundMode, PiecewisePoly, Poly};
use nncalc::random::{random_network, rng, RandomNetSpec};
use nncalc::Network;
use oracle::{hat, r, rf, sawtooth, OracleNet, R};

fn net(seed: u64, d: usize, k: usize, depth: usize, rr: u32) -> Network {
    let spec = RandomNetSpec { d_in: d, d_out: k, depth, max_width: 3, r: rr, id_prob: 0.25, max_weights: 20 };
    random_network(&mut rng(seed, 0), &spec)
}

fn rational() -> impl Strategy<Value = R> {
    (-64i64..=64, prop::sample::select(vec![1i64, 2, 3, 8, 16])).prop_map(|(n, d)| rf(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_roundtrip(seed in any::<u64>(), d in 1usize..4, k in 1usize..4, depth in 1usize..5, rr in 1u32..4) {
        let n = net(seed, d, k, depth, rr);
        prop_assert_eq!(from_json(&to_json(&n)).unwrap(), n);
    }

    #[test]
    fn fused_and_stacked_agree(seed in any::<u64>(), x in rational(), rr in 1u32..3) {
        let f = net(seed, 1, 2, 2, rr);
        let g = net(seed ^ 1, 2, 1, 2, rr);
        let (a, b) = (compose_fused(&f, &g).unwrap(), compose_stacked(&f, &g).unwrap());
        let want = OracleNet::of(&g).eval(&OracleNet::of(&f).eval(std::slice::from_ref(&x)));
        prop_assert_eq!(OracleNet::of(&a).eval(std::slice::from_ref(&x)), want.clone());
        prop_assert_eq!(OracleNet::of(&b).eval(std::slice::from_ref(&x)), want);
    }

    #[test]
    fn deepen_and_sum_preserve_values(seed in any::<u64>(), x in rational(), l0 in 0usize..4) {
        let f = net(seed, 1, 1, 3, 1);
        let g = net(seed ^ 2, 1, 1, 1, 1);
        let fx = OracleNet::of(&f).eval(std::slice::from_ref(&x));
        prop_assert_eq!(OracleNet::of(&deepen(&f, l0)).eval(std::slice::from_ref(&x)), fx.clone());
        let s = OracleNet::of(&sum(&[f, g.clone()]).unwrap()).eval(std::slice::from_ref(&x));
        prop_assert_eq!(s[0].clone(), &fx[0] + &OracleNet::of(&g).eval(&[x])[0]);
    }

    #[test]
    fn pieces_match_network(seed in any::<u64>(), depth in 1usize..5, rr in 1u32..3, xs in prop::collection::vec(rational(), 8)) {
        let n = net(seed, 1, 1, depth, rr);
        let pw = extract_pieces(&n).unwrap();
        let o = OracleNet::of(&n);
        for x in &xs {
            prop_assert_eq!(pw.eval(x), o.eval(std::slice::from_ref(x))[0].clone());
        }
        prop_assert!(pw.is_normalized());
        let rep = n.complexity().unwrap();
        let count = num_bigint::BigUint::from(pw.count_pieces());
        prop_assert!(count <= piece_bound(rep.w, rep.n, rep.l, rr, BoundMode::Weights).bound);
        prop_assert!(count <= piece_bound(rep.w, rep.n, rep.l, rr, BoundMode::Neurons).bound);
        prop_assert!(crossing_number(&pw) <= pw.count_pieces() * (1 + pw.max_degree()));
    }

    #[test]
    fn sawtooth_iterates_the_hat(j in 1u32..12, x in rational()) {
        prop_assert_eq!(sawtooth_eval(j + 1, &x), sawtooth_eval(j, &hat(&x)));
        prop_assert_eq!(sawtooth_eval(j, &x), sawtooth(j, &x));
        prop_assert_eq!(sawtooth_pw(j).eval(&x), sawtooth(j, &x));
    }

    #[test]
    fn polynomials_are_represented(rr in 1u32..4, c in prop::collection::vec(-6i64..=6, 4), x in rational()) {
        let coeffs: Vec<R> = c.iter().take(rr as usize + 1).map(|&v| r(v)).collect();
        let n = represent_polynomial(&coeffs, rr).unwrap();
        let want = coeffs.iter().rev().fold(r(0), |acc, a| acc * &x + a);
        prop_assert_eq!(OracleNet::of(&n).eval(std::slice::from_ref(&x))[0].clone(), want);
        prop_assert!(n.depth() <= 2 && n.complexity().unwrap().n <= 2 * rr as usize + 2);
    }

    #[test]
    fn lp_triangle_inequality(s1 in any::<u64>(), s2 in any::<u64>(), p in prop::sample::select(vec![1.0f64, 2.0, 3.0])) {
        let f = extract_pieces(&net(s1, 1, 1, 2, 1)).unwrap();
        let g = extract_pieces(&net(s2, 1, 1, 2, 1)).unwrap();
        let (a, b) = (r(-2), r(2));
        let lhs = lp_norm(&f.add(&g), p, &a, &b).value;
        let rhs = lp_norm(&f, p, &a, &b).value + lp_norm(&g, p, &a, &b).value;
        prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn differences_kill_low_degree(c in prop::collection::vec(-5i64..=5, 2), k in 2u32..4, h in 1i64..8) {
        let p = PiecewisePoly::poly(Poly::new(c.iter().map(|&v| r(v)).collect()));
        let d = finite_difference(&p, k, &rf(h, 16));
        prop_assert!(d.pieces().iter().all(|q| q.is_zero()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn modulus_grows_with_t(j in 1u32..6, a in 1i64..16, b in 1i64..16) {
        let f = sawtooth_pw(j);
        let (lo, hi) = (a.min(b), a.max(b));
        let ts = [rf(lo, 32), rf(hi, 32)];
        let table = modulus_table(&f, 2, 1.0, &ts);
        prop_assert!(table.samples.windows(2).all(|w| w[0].1 <= w[1].1));
        // each entry dominates the single-t probe
        for (t, (_, v)) in ts.iter().zip(&table.samples) {
            prop_assert!(modulus(&f, 2, 1.0, t).value <= *v);
        }
    }

    #[test]
    fn free_knot_error_decreases_with_budget(j in 2u32..5, p in prop::sample::select(vec![1.0f64, 2.0, f64::INFINITY])) {
        let o = FreeKnotOracle::new(&sawtooth_pw(j), 1, p, 5).unwrap();
        let errs: Vec<f64> = (1..=(1usize << j)).map(|n| o.best(n).unwrap().error).collect();
        prop_assert!(errs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)));
        prop_assert_eq!(*errs.last().unwrap(), 0.0);
    }
}
