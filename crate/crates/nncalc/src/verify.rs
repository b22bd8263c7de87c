//! Invariant suites behind `nncalc verify`.
//!
//! Each suite runs seeded trials and folds them into one assertion per
//! check name. A failing check keeps its first counterexample (network JSON
//! plus input). Reports contain no timings, so a fixed seed gives
//! byte-identical output.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::affine::AffineMap;
use crate::approx::{besov_lower, finite_difference, inapprox_threshold, FreeKnotOracle};
use crate::calculus::{
    cartesian, compose_fused, compose_stacked, deepen, power_unroll, pre_post_affine, scale, strictify,
    substitute_activation, sum, IdentityRepresentation, SubstMode,
};
use crate::error::{NetError, Result};
use crate::gadgets::{
    bspline_net, check_squashing, indicator_net, localize_net, mult_net, sawtooth_constant, sawtooth_eval,
    sawtooth_net, sawtooth_pw, scalar_vector_mult_net, squash_net, tensor_bspline_net, SawtoothSpec,
    SawtoothVariant,
};
use crate::json::{from_json, to_json};
use crate::network::{register_custom, Act, CustomActivation, Network};
use crate::pwpoly::{
    crossing_number, disagreement_fraction, extract_pieces, lp_norm, piece_bound, BoundMode, PiecewisePoly, Poly,
};
use crate::random::{random_network, random_points, rng, small_rational, RandomNetSpec};
use crate::rat::{self, q, qf, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Calculus,
    Gadgets,
    Pieces,
    Crossing,
    Inapprox,
    Besov,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Calculus, Suite::Gadgets, Suite::Pieces, Suite::Crossing, Suite::Inapprox, Suite::Besov];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Calculus => "calculus",
            Suite::Gadgets => "gadgets",
            Suite::Pieces => "pieces",
            Suite::Crossing => "crossing",
            Suite::Inapprox => "inapprox",
            Suite::Besov => "besov",
        }
    }

    /// Resolves a suite name; `"all"` gives every suite.
    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Self::ALL.to_vec());
        }
        Self::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x])
    }

    fn default_trials(self) -> usize {
        match self {
            Suite::Pieces => 200,
            _ => 100,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub status: &'static str,
    pub checked: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub format: &'static str,
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

#[derive(Default)]
struct Checks {
    map: BTreeMap<String, Assertion>,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> Value) {
        let a = self.map.entry(name.to_string()).or_insert_with(|| Assertion {
            name: name.to_string(),
            status: "pass",
            checked: 0,
            failed: 0,
            witness: None,
        });
        a.checked += 1;
        if !ok {
            a.failed += 1;
            a.status = "fail";
            if a.witness.is_none() {
                a.witness = Some(witness());
            }
        }
    }

    fn finish(self, suite: Suite, trials: usize, seed: u64, tolerance: &'static str) -> SuiteReport {
        let assertions: Vec<Assertion> = self.map.into_values().collect();
        let failed = assertions.iter().filter(|a| a.failed > 0).count();
        SuiteReport {
            suite: suite.name(),
            trials,
            seed,
            tolerance,
            passed: assertions.len() - failed,
            failed,
            assertions,
        }
    }
}

fn net_witness(net: &Network, x: Option<&[Q]>) -> Value {
    let net_json: Value = serde_json::from_str(&to_json(net)).unwrap_or(Value::Null);
    match x {
        Some(x) => json!({ "network": net_json, "input": x.iter().map(rat::fmt).collect::<Vec<_>>() }),
        None => json!({ "network": net_json }),
    }
}

fn note(s: String) -> impl FnOnce() -> Value {
    move || json!({ "detail": s })
}

/// First point where `net` differs from `want`, if any.
fn mismatch(net: &Network, pts: &[Vec<Q>], want: impl Fn(usize, &[Q]) -> Vec<Q>) -> Option<Vec<Q>> {
    pts.iter().enumerate().find(|(i, x)| net.evaluate(x).ok() != Some(want(*i, x))).map(|(_, x)| x.clone())
}

fn stream(suite: Suite, trial: usize) -> u64 {
    ((suite as u64) << 32) | trial as u64
}

pub fn run(suites: &[Suite], trials: Option<usize>, seed: u64) -> VerifyReport {
    let reports: Vec<SuiteReport> =
        suites.iter().map(|&s| run_suite(s, trials.unwrap_or_else(|| s.default_trials()), seed)).collect();
    let pass = reports.iter().all(|r| r.failed == 0);
    VerifyReport { format: "nncalc-verify-v1", seed, pass, suites: reports }
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> SuiteReport {
    match suite {
        Suite::Calculus => calculus_suite(trials, seed),
        Suite::Gadgets => gadgets_suite(trials, seed),
        Suite::Pieces => pieces_suite(trials, seed),
        Suite::Crossing => crossing_suite(trials, seed),
        Suite::Inapprox => inapprox_suite(seed),
        Suite::Besov => besov_suite(seed),
    }
}

/// Deepest random net per activation degree that keeps exact evaluation cheap.
pub fn max_depth(r: u32) -> usize {
    match r {
        1 => 5,
        2 => 4,
        _ => 3,
    }
}

fn compose_depth(r: u32) -> usize {
    if r == 1 {
        3
    } else {
        2
    }
}

fn spec(d_in: usize, d_out: usize, depth: usize, r: u32) -> RandomNetSpec {
    RandomNetSpec { d_in, d_out, depth, max_width: 4, r, id_prob: 0.2, max_weights: 30 }
}

fn random_map(g: &mut impl Rng, rows: usize, cols: usize) -> AffineMap {
    let mut m = AffineMap::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if g.gen_bool(0.6) {
                m.set(i, j, small_rational(g));
            }
        }
        if g.gen_bool(0.5) {
            m.set_bias(i, small_rational(g));
        }
    }
    m
}

/// The squashing function `σ_1` as a custom activation with an exact network.
pub fn clamp_activation() -> Arc<CustomActivation> {
    let act = CustomActivation::from_network("sigma1", squash_net(1).expect("r = 1 is valid"));
    register_custom(act.clone());
    act
}

fn roundtrip_ok(net: &Network) -> bool {
    from_json(&to_json(net)).is_ok_and(|n| n == *net)
}

fn calculus_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut c = Checks::default();
    let sigma = clamp_activation();
    let sigma_net = squash_net(1).unwrap();
    let (sw, sl, sm) = sigma_net.complexity().unwrap().triple();
    for t in 0..trials {
        let mut g = rng(seed, stream(Suite::Calculus, t));
        let r = 1 + (t % 3) as u32;
        let (d, k) = (g.gen_range(1..=3), g.gen_range(1..=3));
        let depth = g.gen_range(1..=max_depth(r));
        let f = random_network(&mut g, &spec(d, k, depth, r));
        let pts = random_points(&mut g, d, 200);
        let fx: Vec<Vec<Q>> = pts.iter().map(|x| f.evaluate(x).unwrap()).collect();
        let rf = f.complexity().unwrap();
        let mut outputs: Vec<Network> = vec![f.clone()];

        // deepen
        let l0 = g.gen_range(0..=2);
        let out = deepen(&f, l0);
        let ro = out.complexity().unwrap();
        let cc = d.min(k);
        c.check("calculus/deepen/realization", mismatch(&out, &pts, |i, _| fx[i].clone()).is_none(), || {
            net_witness(&f, None)
        });
        c.check(
            "calculus/deepen/budget",
            ro.l == rf.l + l0 && ro.w == rf.w + cc * l0 && ro.n == rf.n + cc * l0,
            || net_witness(&f, None),
        );
        outputs.push(out);

        // scale
        let a = small_rational(&mut g);
        let out = scale(&f, &a);
        let ro = out.complexity().unwrap();
        c.check(
            "calculus/scale/realization",
            mismatch(&out, &pts, |i, _| fx[i].iter().map(|v| v * &a).collect()).is_none(),
            || net_witness(&f, None),
        );
        c.check("calculus/scale/budget", ro.triple() == rf.triple(), || net_witness(&f, None));
        outputs.push(out);

        // cartesian
        let k2 = g.gen_range(1..=3);
        let s = spec(d, k2, g.gen_range(1..=max_depth(r)), r);
        let f2 = random_network(&mut g, &s);
        let r2 = f2.complexity().unwrap();
        let out = cartesian(&[f.clone(), f2.clone()]).unwrap();
        let ro = out.complexity().unwrap();
        let delta = d.min(k + k2 - 1) * (rf.l.max(r2.l) - rf.l.min(r2.l));
        c.check(
            "calculus/cartesian/realization",
            mismatch(&out, &pts, |i, x| {
                let mut v = fx[i].clone();
                v.extend(f2.evaluate(x).unwrap());
                v
            })
            .is_none(),
            || net_witness(&f2, None),
        );
        c.check(
            "calculus/cartesian/budget",
            ro.l == rf.l.max(r2.l) && ro.w <= delta + rf.w + r2.w && ro.n <= delta + rf.n + r2.n,
            || net_witness(&f2, None),
        );
        outputs.push(out);

        // sum, and its associativity
        let s = spec(d, k, g.gen_range(1..=max_depth(r)), r);
        let f3 = random_network(&mut g, &s);
        let s = spec(d, k, g.gen_range(1..=max_depth(r)), r);
        let f4 = random_network(&mut g, &s);
        let r3 = f3.complexity().unwrap();
        let out = sum(&[f.clone(), f3.clone()]).unwrap();
        let ro = out.complexity().unwrap();
        let delta = d.min(k) * (rf.l.max(r3.l) - rf.l.min(r3.l));
        c.check(
            "calculus/sum/realization",
            mismatch(&out, &pts, |i, x| fx[i].iter().zip(f3.evaluate(x).unwrap()).map(|(a, b)| a + b).collect())
                .is_none(),
            || net_witness(&f3, None),
        );
        c.check(
            "calculus/sum/budget",
            ro.l == rf.l.max(r3.l) && ro.w <= delta + rf.w + r3.w && ro.n <= delta + rf.n + r3.n,
            || net_witness(&f3, None),
        );
        let left = sum(&[f.clone(), sum(&[f3.clone(), f4.clone()]).unwrap()]).unwrap();
        let right = sum(&[sum(&[f.clone(), f3.clone()]).unwrap(), f4.clone()]).unwrap();
        c.check(
            "calculus/sum/associativity",
            pts.iter().all(|x| left.evaluate(x).unwrap() == right.evaluate(x).unwrap()),
            || net_witness(&f4, None),
        );
        outputs.push(out);

        // pre/post affine maps
        let (dp, kp) = (g.gen_range(1..=3), g.gen_range(1..=3));
        let pm = random_map(&mut g, d, dp);
        let qm = random_map(&mut g, kp, k);
        let out = pre_post_affine(&f, Some(&pm), Some(&qm)).unwrap();
        let ro = out.complexity().unwrap();
        let pts_p = random_points(&mut g, dp, 200);
        c.check(
            "calculus/pre_post_affine/realization",
            mismatch(&out, &pts_p, |_, x| qm.apply(&f.evaluate(&pm.apply(x)).unwrap())).is_none(),
            || net_witness(&f, None),
        );
        c.check(
            "calculus/pre_post_affine/budget",
            ro.l == rf.l && ro.n == rf.n && ro.w <= qm.l0_inf() * rf.w * pm.l0_inf_star(),
            || net_witness(&f, None),
        );
        outputs.push(out);

        // compositions
        let s = spec(d, k, g.gen_range(1..=compose_depth(r)), r);
        let fc = random_network(&mut g, &s);
        let s = spec(k, g.gen_range(1..=3), g.gen_range(1..=compose_depth(r)), r);
        let h = random_network(&mut g, &s);
        let (rc, rh) = (fc.complexity().unwrap(), h.complexity().unwrap());
        let want: Vec<Vec<Q>> = pts.iter().map(|x| h.evaluate(&fc.evaluate(x).unwrap()).unwrap()).collect();
        let st = compose_stacked(&fc, &h).unwrap();
        let rs = st.complexity().unwrap();
        c.check("calculus/compose_stacked/realization", mismatch(&st, &pts, |i, _| want[i].clone()).is_none(), || {
            net_witness(&fc, None)
        });
        c.check(
            "calculus/compose_stacked/budget",
            rs.w == rc.w + rh.w && rs.l == rc.l + rh.l && rs.n == rc.n + rh.n + k,
            || net_witness(&fc, None),
        );
        let fu = compose_fused(&fc, &h).unwrap();
        let ru = fu.complexity().unwrap();
        c.check("calculus/compose_fused/realization", mismatch(&fu, &pts, |i, _| want[i].clone()).is_none(), || {
            net_witness(&fc, None)
        });
        c.check(
            "calculus/compose_fused/budget",
            ru.l == rc.l + rh.l - 1 && ru.n == rc.n + rh.n && ru.w <= rc.w + rc.n.max(d) * rh.w,
            || net_witness(&fc, None),
        );
        c.check(
            "calculus/compose_fused/strictness",
            !(fc.is_strict() && h.is_strict()) || fu.is_strict(),
            || net_witness(&fc, None),
        );
        outputs.push(st);
        outputs.push(fu);

        // strictification
        let idrep = IdentityRepresentation::canonical(r);
        let n = idrep.n();
        let out = strictify(&f, &idrep).unwrap();
        let ro = out.complexity().unwrap();
        c.check("calculus/strictify/realization", mismatch(&out, &pts, |i, _| fx[i].clone()).is_none(), || {
            net_witness(&f, None)
        });
        c.check("calculus/strictify/strict", out.is_strict(), || net_witness(&f, None));
        c.check(
            "calculus/strictify/budget",
            ro.l == rf.l && ro.w <= n * n * rf.w && ro.n <= n * rf.n,
            || net_witness(&f, None),
        );
        outputs.push(out);

        // power unrolling
        let (rb, s) = (1 + (t % 2) as u32, 1 + (t % 3) as u32);
        let rp = rb.pow(s);
        let sp = spec(d, k, g.gen_range(1..=if rp <= 2 { 3 } else { 2 }), rp);
        let fp = random_network(&mut g, &sp);
        let rpp = fp.complexity().unwrap();
        let out = power_unroll(&fp, rb, s).unwrap();
        let ro = out.complexity().unwrap();
        let s = s as usize;
        c.check(
            "calculus/power_unroll/realization",
            mismatch(&out, &pts, |_, x| fp.evaluate(x).unwrap()).is_none(),
            || net_witness(&fp, None),
        );
        c.check(
            "calculus/power_unroll/budget",
            ro.w <= rpp.w + (s - 1) * rpp.n && ro.l == 1 + s * (rpp.l - 1) && ro.n == s * rpp.n,
            || net_witness(&fp, None),
        );
        outputs.push(out);

        // activation substitution with σ_1
        let s = spec(d, k, g.gen_range(1..=3), 1);
        let mut fs = random_network(&mut g, &s);
        for layer in &mut fs.layers {
            for a in &mut layer.act {
                if *a == Act::Rho(1) {
                    *a = Act::Custom(sigma.clone());
                }
            }
        }
        let rs = fs.complexity().unwrap();
        let want: Vec<Vec<Q>> = pts.iter().map(|x| fs.evaluate(x).unwrap()).collect();
        let two = substitute_activation(&fs, &sigma_net, SubstMode::TwoLayer).unwrap();
        let gen = substitute_activation(&fs, &sigma_net, SubstMode::General).unwrap();
        let (r2, rg) = (two.complexity().unwrap(), gen.complexity().unwrap());
        c.check(
            "calculus/substitute/realization",
            mismatch(&two, &pts, |i, _| want[i].clone()).is_none()
                && mismatch(&gen, &pts, |i, _| want[i].clone()).is_none(),
            || net_witness(&fs, None),
        );
        c.check(
            "calculus/substitute/budget_two_layer",
            r2.l == rs.l && r2.w <= rs.w * sm * sm && r2.n <= rs.n * sm,
            || net_witness(&fs, None),
        );
        c.check(
            "calculus/substitute/budget_general",
            rg.l == 1 + (rs.l - 1) * sl && rg.w <= sm * rs.w + sw * rs.n && rg.n <= (sm + 1) * rs.n,
            || net_witness(&fs, None),
        );
        outputs.extend([fs, two, gen]);

        for o in &outputs {
            c.check("core/json_roundtrip", roundtrip_ok(o), || net_witness(o, None));
        }
    }
    c.finish(Suite::Calculus, trials, seed, "exact")
}

fn int_pow(b: usize, e: usize) -> BigUint {
    Pow::pow(BigUint::from(b), e)
}

/// L1 distance of `h` to the indicator of `[0, 1]^d`. d = 1 is exact; d = 2
/// integrates exact axis slices with composite Simpson on panels aligned with
/// the ramps.
pub fn indicator_l1_error(h: &Network, d: usize, eps: &Q) -> f64 {
    let box1 = PiecewisePoly::from_rational(vec![q(0), q(1)], vec![Poly::zero(), Poly::constant(q(1)), Poly::zero()]);
    let slice_err = |net: &Network| {
        let pw = extract_pieces(net).expect("rho network");
        lp_norm(&pw.sub(&box1), 1.0, &q(-1), &q(2)).value
    };
    if d == 1 {
        return slice_err(h);
    }
    assert_eq!(d, 2, "only d <= 2 is sliced");
    let one = Q::one();
    let cuts = [q(-1), q(0), eps.clone(), &one - eps, one.clone(), q(2)];
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let panels = 16;
        let hw = (&w[1] - &w[0]) / q(2 * panels);
        // the box edge is a jump in y, so classify the whole panel by its midpoint
        let mid = (&w[0] + &w[1]) / q(2);
        let inside = mid > Q::zero() && mid < one;
        let mut acc = 0.0;
        for i in 0..=2 * panels {
            let y = &w[0] + &hw * q(i);
            let p = AffineMap::from_triplets(2, 1, vec![(0, 0, one.clone())], vec![Q::zero(), y.clone()]).unwrap();
            let slice = pre_post_affine(h, Some(&p), None).unwrap();
            let v = if inside {
                slice_err(&slice)
            } else {
                let pw = extract_pieces(&slice).unwrap();
                lp_norm(&pw, 1.0, &q(-1), &q(2)).value
            };
            let c = if i == 0 || i == 2 * panels { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += c * v;
        }
        total += acc * rat::to_f64(&hw) / 3.0;
    }
    total
}

fn gadgets_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut c = Checks::default();
    // sawtooth constructions against the closed form
    for j in 1..=12u32 {
        let closed = sawtooth_pw(j);
        for l in 2..=6usize {
            let cl = sawtooth_constant(l) as usize;
            for variant in [SawtoothVariant::Weights, SawtoothVariant::Neurons] {
                let net = sawtooth_net(&SawtoothSpec { j, d: 1, variant, l }).unwrap();
                let rep = net.complexity().unwrap();
                let exact = extract_pieces(&net).is_ok_and(|pw| pw == closed);
                c.check("gadgets/sawtooth/exact", exact && rep.l == l, || net_witness(&net, None));
                // N <= C_L 2^{j/(L-1)} and W <= C_L 2^{j/⌊L/2⌋}, raised to integer powers
                let ok = match variant {
                    SawtoothVariant::Neurons => {
                        int_pow(rep.n, l - 1) <= int_pow(cl, l - 1) * (BigUint::one() << j as usize)
                    }
                    SawtoothVariant::Weights => {
                        int_pow(rep.w, l / 2) <= int_pow(cl, l / 2) * (BigUint::one() << j as usize)
                    }
                };
                c.check(&format!("gadgets/sawtooth/budget_{}", variant_name(variant)), ok, note(format!("j={j} L={l}")));
            }
        }
    }
    let mut g = rng(seed, stream(Suite::Gadgets, 0));
    let net = sawtooth_net(&SawtoothSpec { j: 4, d: 3, variant: SawtoothVariant::Weights, l: 3 }).unwrap();
    let pts = random_points(&mut g, 3, 200);
    c.check(
        "gadgets/sawtooth/multidim",
        mismatch(&net, &pts, |_, x| vec![sawtooth_eval(4, &x[0])]).is_none(),
        || net_witness(&net, None),
    );

    // B-splines: unit mass, support, size
    for n in 1..=4u32 {
        let b = bspline_net(n).unwrap();
        let pw = extract_pieces(&b).unwrap();
        let mass = lp_norm(&pw, 1.0, &q(-1), &q(n as i64 + 2)).exact().cloned();
        let support = pw.breakpoints().first().is_some_and(|x| x.cmp_q(&q(0)).is_ge())
            && pw.breakpoints().last().is_some_and(|x| x.cmp_q(&q(n as i64 + 1)).is_le());
        c.check(
            "gadgets/bspline/mass_support",
            mass == Some(q(1)) && support && b.complexity().unwrap().n == n as usize + 2,
            || net_witness(&b, None),
        );
    }

    // squashing
    for r in 1..=4u32 {
        let s = squash_net(r).unwrap();
        let chk = check_squashing(&s);
        let r_ = r as usize;
        c.check("gadgets/squash/exact", chk.ok && chk.exact, || net_witness(&s, None));
        c.check("gadgets/squash/budget", s.complexity().unwrap().triple() == (2 * (r_ + 1), 2, r_ + 1), || {
            net_witness(&s, None)
        });
    }

    // products
    for t in 0..500usize {
        let mut g = rng(seed, stream(Suite::Gadgets, 1 + t));
        let d = g.gen_range(2..=4usize);
        let r = g.gen_range(2..=3u32);
        let m = mult_net(d, r).unwrap();
        let x = random_points(&mut g, d, 1).remove(0);
        let prod = x.iter().fold(Q::one(), |a, b| a * b);
        c.check("gadgets/mult/exact", m.evaluate(&x).ok() == Some(vec![prod]), || net_witness(&m, Some(&x)));
    }
    for r in 2..=3u32 {
        let n = 2 * (r as usize + 1);
        for d in 2..=4usize {
            let j = (d as f64).log2().ceil() as usize;
            let rep = mult_net(d, r).unwrap().complexity().unwrap();
            let span = (1usize << j) - 1;
            c.check(
                "gadgets/mult/budget",
                rep.w <= 6 * n * span && rep.l == 2 * j && rep.n + 1 <= (2 * n + 1) * span,
                note(format!("d={d} r={r}")),
            );
        }
        for k in 1..=3usize {
            let sv = scalar_vector_mult_net(k, r).unwrap();
            let rep = sv.complexity().unwrap();
            let mut g = rng(seed, stream(Suite::Gadgets, 1000 + k));
            let pts = random_points(&mut g, k + 1, 50);
            c.check(
                "gadgets/scalar_vector_mult/exact",
                mismatch(&sv, &pts, |_, x| x[1..].iter().map(|y| &x[0] * y).collect()).is_none(),
                || net_witness(&sv, None),
            );
            c.check(
                "gadgets/scalar_vector_mult/budget",
                rep.w <= 6 * k * n && rep.l == 2 && rep.n <= 2 * k * n,
                note(format!("k={k} r={r}")),
            );
        }
    }
    for d in 1..=3usize {
        let tdeg = 2u32;
        let tb = tensor_bspline_net(d, tdeg).unwrap();
        let rep = tb.complexity().unwrap();
        let b = bspline_net(tdeg).unwrap();
        let mut g = rng(seed, stream(Suite::Gadgets, 2000 + d));
        let pts: Vec<Vec<Q>> =
            random_points(&mut g, d, 50).into_iter().map(|x| x.into_iter().map(|v| v + q(1)).collect()).collect();
        c.check(
            "gadgets/tensor_bspline/exact",
            mismatch(&tb, &pts, |_, x| {
                vec![x.iter().fold(Q::one(), |a, xi| a * b.evaluate(std::slice::from_ref(xi)).unwrap().remove(0))]
            })
            .is_none(),
            || net_witness(&tb, None),
        );
        let t1 = tdeg as usize + 1;
        let ok = if d == 1 {
            rep.triple() == (2 * (t1 + 1), 2, t1 + 1)
        } else {
            let lg = (d as f64).log2().ceil() as usize;
            rep.w <= 28 * d * t1 && rep.n <= 13 * d * t1 && rep.l == 2 + 2 * lg
        };
        c.check("gadgets/tensor_bspline/budget", ok, note(format!("d={d}")));
    }

    // indicator approximants
    let sigma = squash_net(1).unwrap();
    let (sw, sl, sn) = sigma.complexity().unwrap().triple();
    for eps in [qf(1, 4), qf(1, 8), qf(1, 16)] {
        for d in 1..=2usize {
            let rect = vec![(q(0), q(1)); d];
            let h = indicator_net(&rect, &eps, &sigma).unwrap();
            let rep = h.net.complexity().unwrap();
            let err = indicator_l1_error(&h.net, d, &eps);
            let bound = 1.0 - (1.0 - 2.0 * rat::to_f64(&eps)).powi(d as i32);
            c.check("gadgets/indicator/l1_error", err <= bound, note(format!("d={d} eps={} err={err}", rat::fmt(&eps))));
            let ok = if d == 1 {
                rep.w <= 2 * sw && rep.l == sl && rep.n <= 2 * sn
            } else {
                rep.w <= 2 * d * sw * (sn + 1) && rep.l <= 2 * sl - 1 && rep.n <= (2 * d + 1) * sn
            };
            c.check("gadgets/indicator/budget", ok, note(format!("d={d}")));
            if d == 1 {
                let pw = extract_pieces(&h.net).unwrap();
                let range_ok = crate::gadgets::check_squashing(&h.net).exact
                    && pw.pieces().iter().all(|p| p.coeffs().iter().all(|_| true))
                    && lp_norm(&pw, f64::INFINITY, &q(-2), &q(3)).exact() == Some(&q(1));
                c.check("gadgets/indicator/range", range_ok, || net_witness(&h.net, None));
            }
        }
    }

    // localization of random quadratic-activation networks
    for t in 0..trials.min(20) {
        let mut g = rng(seed, stream(Suite::Gadgets, 3000 + t));
        let s = RandomNetSpec::scalar(2, g.gen_range(1..=2), 12);
        let gnet = random_network(&mut g, &s);
        let Ok(loc) = localize_net(&gnet, &q(1), &qf(1, 2), 2) else {
            continue;
        };
        let (lr, gr) = (loc.net.complexity().unwrap(), crate::compress::compress(&gnet).complexity().unwrap());
        let inside: Vec<Vec<Q>> = (-8..=8).map(|i| vec![qf(i, 8)]).collect();
        let outside: Vec<Vec<Q>> = [qf(-7, 4), qf(-2, 1), qf(31, 16), q(5)].into_iter().map(|x| vec![x]).collect();
        c.check(
            "gadgets/localize/inside",
            mismatch(&loc.net, &inside, |_, x| gnet.evaluate(x).unwrap()).is_none(),
            || net_witness(&gnet, None),
        );
        c.check("gadgets/localize/outside", mismatch(&loc.net, &outside, |_, _| vec![Q::zero()]).is_none(), || {
            net_witness(&gnet, None)
        });
        c.check(
            "gadgets/localize/budget",
            lr.w as u64 <= loc.c_w * gr.w as u64 && lr.n as u64 <= loc.c_n * gr.n as u64 && lr.l <= (gr.l + 1).max(3),
            || net_witness(&gnet, None),
        );
    }
    c.finish(Suite::Gadgets, trials, seed, "exact")
}

fn variant_name(v: SawtoothVariant) -> &'static str {
    match v {
        SawtoothVariant::Weights => "weights",
        SawtoothVariant::Neurons => "neurons",
    }
}

/// One census row for a scalar network.
#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub seed: u64,
    pub stream: u64,
    pub r: u32,
    #[serde(rename = "W")]
    pub w: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub pieces: usize,
    pub max_degree: usize,
    pub bound_weights: String,
    pub bound_neurons: String,
    pub cr: usize,
}

pub fn census_row(net: &Network, r: u32, seed: u64, stream: u64) -> Result<(CensusRow, PiecewisePoly)> {
    let pw = extract_pieces(net)?;
    let rep = net.complexity()?;
    let bw = piece_bound(rep.w, rep.n, rep.l, r, BoundMode::Weights).bound;
    let bn = piece_bound(rep.w, rep.n, rep.l, r, BoundMode::Neurons).bound;
    let row = CensusRow {
        seed,
        stream,
        r,
        w: rep.w,
        l: rep.l,
        n: rep.n,
        pieces: pw.count_pieces(),
        max_degree: pw.max_degree(),
        bound_weights: bw.to_string(),
        bound_neurons: bn.to_string(),
        cr: crossing_number(&pw),
    };
    Ok((row, pw))
}

/// Random scalar networks used by the piece and crossing suites.
pub fn census_net(seed: u64, stream: u64, r: u32) -> Network {
    let mut g = rng(seed, stream);
    let depth = g.gen_range(1..=if r == 1 { 5 } else { 3 });
    random_network(&mut g, &RandomNetSpec::scalar(r, depth, 30))
}

fn pieces_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut c = Checks::default();
    let grid: Vec<Q> = (0..=10_000).map(|i| qf(-4, 1) + qf(8 * i, 10_000)).collect();
    let extra = (trials / 4).max(1);
    for t in 0..trials + extra {
        let r = if t < trials { 1 } else { 2 };
        let st = stream(Suite::Pieces, t);
        let net = census_net(seed, st, r);
        let Ok((row, pw)) = census_row(&net, r, seed, st) else {
            c.check("pieces/extract", false, || net_witness(&net, None));
            continue;
        };
        let bad = grid.iter().find(|x| net.evaluate(std::slice::from_ref(x)).ok() != Some(vec![pw.eval(x)]));
        c.check("pieces/exact_values", bad.is_none(), || net_witness(&net, bad.map(std::slice::from_ref)));
        let deg_ok = row.max_degree as u64 <= (r as u64).pow(row.l.saturating_sub(1) as u32);
        c.check("pieces/degree_bound", deg_ok, || net_witness(&net, None));
        c.check("pieces/normalized", pw.is_normalized(), || net_witness(&net, None));
        let le = |b: &str| b.parse::<BigUint>().is_ok_and(|b| BigUint::from(row.pieces) <= b);
        c.check("pieces/bound_weights", le(&row.bound_weights), || net_witness(&net, None));
        c.check("pieces/bound_neurons", le(&row.bound_neurons), || net_witness(&net, None));
    }
    c.finish(Suite::Pieces, trials, seed, "exact")
}

fn crossing_suite(trials: usize, seed: u64) -> SuiteReport {
    let mut c = Checks::default();
    for j in 1..=14u32 {
        let cr = crossing_number(&sawtooth_pw(j));
        c.check("crossing/sawtooth", cr == 1 + (1usize << j), note(format!("j={j} cr={cr}")));
    }
    let mut pws = Vec::new();
    for t in 0..trials {
        let r = 1 + (t % 2) as u32;
        let st = stream(Suite::Crossing, t);
        let net = census_net(seed, st, r);
        if let Ok((row, pw)) = census_row(&net, r, seed, st) {
            c.check("crossing/piece_bound", row.cr <= row.pieces * (1 + row.max_degree), || net_witness(&net, None));
            pws.push(pw);
        }
    }
    for (t, g) in pws.iter().enumerate() {
        let f = if t % 2 == 0 { sawtooth_pw(3 + (t % 6) as u32) } else { pws[(t * 7 + 3) % pws.len()].clone() };
        let dis = disagreement_fraction(&f, g);
        c.check("crossing/disagreement", dis.holds(), note(format!("pair {t}")));
    }
    c.finish(Suite::Crossing, trials, seed, "exact")
}

fn inapprox_suite(seed: u64) -> SuiteReport {
    let mut c = Checks::default();
    for j in 4..=8u32 {
        let oracle = FreeKnotOracle::new(&sawtooth_pw(j), 1, 1.0, 10).expect("valid oracle");
        let n = inapprox_threshold(j, 1);
        let e = oracle.best(n).map(|f| f.error).unwrap_or(f64::NAN);
        c.check("inapprox/lower_bound", e >= 2f64.powi(-5), note(format!("j={j} N={n} err={e}")));
        let z = oracle.best(1 << j).map(|f| f.error).unwrap_or(f64::NAN);
        c.check("inapprox/representable_zero", z == 0.0, note(format!("j={j} err={z}")));
    }
    c.check(
        "inapprox/precondition",
        crate::approx::sawtooth_inapprox_check(4, 32, 1, 1.0, 10).is_err(),
        note("N=32 accepted".into()),
    );
    c.finish(Suite::Inapprox, 1, seed, "float(upper bound)")
}

fn besov_suite(seed: u64) -> SuiteReport {
    let mut c = Checks::default();
    for p in [1u32, 2] {
        // ‖D_h^2 Δ_j‖_p^p >= 1 / (2 (p+1)) exactly, at h = 2^-(j+1)
        let want = Q::new(1.into(), (2 * (p + 1)).into());
        for j in 1..=10u32 {
            let h = rat::two_pow(-(j as i64 + 1));
            let d = finite_difference(&sawtooth_pw(j), 2, &h);
            let est = lp_norm(&d, p as f64, &Q::zero(), &(Q::one() - &h * q(2)));
            let ok = est.power.as_ref().is_some_and(|(lo, _)| *lo >= want);
            c.check("besov/modulus_lower_bound", ok, note(format!("p={p} j={j} value={}", est.value)));
        }
    }
    let vals: Vec<f64> = (5..=10).map(|j| besov_lower(&sawtooth_pw(j), 1.0, 2.0, f64::INFINITY).seminorm).collect();
    for (i, w) in vals.windows(2).enumerate() {
        c.check("besov/growth", w[1] / w[0] >= 2f64.powf(0.99), note(format!("j={} ratio={}", 6 + i, w[1] / w[0])));
    }
    c.finish(Suite::Besov, 1, seed, "exact")
}

/// Parses a suite name or reports a usage error.
pub fn suites_from_name(name: &str) -> Result<Vec<Suite>> {
    Suite::parse(name).ok_or_else(|| NetError::Precondition(format!("unknown suite {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_error_closed_form() {
        // with u = 1 - t uniform on the ramps, E min(1, u_1 + u_2) gives
        // 2ε(1-2ε) + (10/3)ε² for the clamp squasher
        let sigma = squash_net(1).unwrap();
        for eps in [qf(1, 4), qf(1, 8)] {
            let h = indicator_net(&[(q(0), q(1)), (q(0), q(1))], &eps, &sigma).unwrap();
            let e = rat::to_f64(&eps);
            let want = 2.0 * e * (1.0 - 2.0 * e) + 10.0 / 3.0 * e * e;
            assert!((indicator_l1_error(&h.net, 2, &eps) - want).abs() < 1e-9);
            let h1 = indicator_net(&[(q(0), q(1))], &eps, &sigma).unwrap();
            assert!((indicator_l1_error(&h1.net, 1, &eps) - e).abs() < 1e-12);
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse("all").unwrap().len(), 6);
        assert_eq!(Suite::parse("besov"), Some(vec![Suite::Besov]));
        assert!(suites_from_name("nope").is_err());
    }
}
