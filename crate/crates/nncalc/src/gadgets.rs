//! Special networks: sawtooth, B-splines, squashing, products, indicators
//! and localizers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::affine::AffineMap;
use crate::calculus::{
    cartesian, compose_fused, compose_stacked, deepen, pre_post_affine, scale, sum, IdentityRepresentation,
};
use crate::compress::compress;
use crate::error::{NetError, Result};
use crate::network::{Act, Layer, Network};
use crate::pwpoly::{extract_pieces, Breakpoint, PiecewisePoly, Poly};
use crate::rat::{self, q, Q};

fn pre(msg: impl Into<String>) -> NetError {
    NetError::Precondition(msg.into())
}

/// `Δ_j(x) = Σ_k Δ_1(2^{j-1} x - k)`; only one tooth can be nonzero.
pub fn sawtooth_eval(j: u32, x: &Q) -> Q {
    assert!(j >= 1, "sawtooth order starts at 1");
    let y = x * rat::two_pow(j as i64 - 1);
    let k = rat::floor(&y);
    if k < BigInt::zero() || k >= BigInt::one() << (j as usize - 1) {
        return Q::zero();
    }
    hat(&(y - Q::from_integer(k)))
}

fn hat(x: &Q) -> Q {
    let half = rat::qf(1, 2);
    if x <= &Q::zero() || x >= &Q::one() {
        Q::zero()
    } else if x <= &half {
        x * q(2)
    } else {
        q(2) - x * q(2)
    }
}

/// Closed-form description of `Δ_j` with `2 + 2^j` pieces.
pub fn sawtooth_pw(j: u32) -> PiecewisePoly {
    let m = 1i64 << j;
    let slope = Q::from_integer(BigInt::one() << j as usize);
    let mut bps = Vec::new();
    let mut pieces = vec![Poly::zero()];
    for i in 0..m {
        let b = rat::qf(i, m);
        // rising on even cells, falling on odd ones
        let p = if i % 2 == 0 {
            Poly::linear(slope.clone(), -&slope * &b)
        } else {
            Poly::linear(-slope.clone(), &slope * rat::qf(i + 1, m))
        };
        bps.push(b);
        pieces.push(p);
    }
    bps.push(Q::one());
    pieces.push(Poly::zero());
    PiecewisePoly::from_rational(bps, pieces)
}

/// One-hidden-layer ReLU network of a continuous piecewise-linear function
/// with rational breakpoints: `c + a ρ(x) - a ρ(-x) + Σ c_i ρ(x - b_i)`.
pub fn cpwl_net(pw: &PiecewisePoly) -> Result<Network> {
    if pw.max_degree() > 1 {
        return Err(pre("cpwl_net needs affine pieces"));
    }
    let mut bps = Vec::new();
    for b in pw.breakpoints() {
        bps.push(b.as_rational().cloned().ok_or_else(|| pre("cpwl_net needs rational breakpoints"))?);
    }
    if !pw.is_continuous() {
        return Err(pre("cpwl_net needs a continuous function"));
    }
    let coef = |p: &Poly, k: usize| p.coeffs().get(k).cloned().unwrap_or_else(Q::zero);
    let first = &pw.pieces()[0];
    let (a, c) = (coef(first, 1), coef(first, 0));
    let mut rows: Vec<(Q, Q)> = Vec::new();
    let mut out = Vec::new();
    if !a.is_zero() {
        rows.push((Q::one(), Q::zero()));
        out.push(a.clone());
        rows.push((-Q::one(), Q::zero()));
        out.push(-a);
    }
    for (i, b) in bps.iter().enumerate() {
        let jump = coef(&pw.pieces()[i + 1], 1) - coef(&pw.pieces()[i], 1);
        rows.push((Q::one(), -b.clone()));
        out.push(jump);
    }
    if rows.is_empty() {
        return Ok(Network::affine(AffineMap::from_dense(&[vec![Q::zero()]], vec![c])));
    }
    let n = rows.len();
    let mut t1 = AffineMap::zero(n, 1);
    let mut t2 = AffineMap::zero(1, n);
    for (i, ((w, b), o)) in rows.into_iter().zip(out).enumerate() {
        t1.set(i, 0, w);
        t1.set_bias(i, b);
        t2.set(0, i, o);
    }
    t2.set_bias(0, c);
    Ok(Network { layers: vec![Layer::uniform(t1, Act::Rho(1)), Layer::uniform(t2, Act::Id)] })
}

/// Which budget a sawtooth network is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SawtoothVariant {
    Weights,
    Neurons,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SawtoothSpec {
    pub j: u32,
    pub d: usize,
    pub variant: SawtoothVariant,
    pub l: usize,
}

/// `C_L = 4L + 2^{L-1}`.
pub fn sawtooth_constant(l: usize) -> u128 {
    4 * l as u128 + (1u128 << (l - 1))
}

fn block(k: u32) -> Network {
    cpwl_net(&sawtooth_pw(k)).expect("sawtooth is continuous piecewise linear")
}

/// Network of depth exactly `L` realizing `Δ_j(x_1)`. The neuron variant
/// fuses `L-2` copies of `Δ_k` and one `Δ_{k+s}` with `j = k(L-1) + s`; the
/// weight variant stacks `⌊L/2⌋-1` copies of `Δ_k` and one `Δ_{k+s}` with
/// `j = k⌊L/2⌋ + s`, then deepens by one layer for odd `L`.
pub fn sawtooth_net(spec: &SawtoothSpec) -> Result<Network> {
    let SawtoothSpec { j, d, variant, l } = *spec;
    if l < 2 {
        return Err(pre("sawtooth_net needs L >= 2"));
    }
    if j < 1 || d < 1 {
        return Err(pre("sawtooth_net needs j >= 1 and d >= 1"));
    }
    let copies = match variant {
        SawtoothVariant::Neurons => l - 1,
        SawtoothVariant::Weights => l / 2,
    };
    let k = j / copies as u32;
    let s = j % copies as u32;
    let mut net = if k == 0 {
        block(j)
    } else {
        let mut net = block(k);
        for i in 1..copies {
            let b = if i + 1 == copies { block(k + s) } else { block(k) };
            net = match variant {
                SawtoothVariant::Neurons => compose_fused(&net, &b)?,
                SawtoothVariant::Weights => compose_stacked(&net, &b)?,
            };
        }
        if copies == 1 {
            net = block(k + s);
        }
        net
    };
    if net.depth() < l {
        net = deepen(&net, l - net.depth());
    }
    if d > 1 {
        let p = AffineMap::from_triplets(1, d, vec![(0, 0, Q::one())], vec![Q::zero()]).unwrap();
        net = pre_post_affine(&net, Some(&p), None)?;
    }
    Ok(net)
}

/// `β_+^{(n)} = (1/n!) Σ_{k=0}^{n+1} C(n+1,k) (-1)^k ρ_n(x - k)`.
pub fn bspline_net(n: u32) -> Result<Network> {
    if n == 0 {
        return Err(pre("the degree-0 B-spline is discontinuous"));
    }
    let m = n as usize + 2;
    let nf = Q::from_integer(rat::factorial(n as u64));
    let mut t1 = AffineMap::zero(m, 1);
    let mut t2 = AffineMap::zero(1, m);
    for k in 0..m {
        t1.set(k, 0, Q::one());
        t1.set_bias(k, q(-(k as i64)));
        let c = Q::from_integer(rat::binom(n as u64 + 1, k as u64)) / &nf;
        t2.set(0, k, if k % 2 == 0 { c } else { -c });
    }
    Ok(Network { layers: vec![Layer::uniform(t1, Act::Rho(n)), Layer::uniform(t2, Act::Id)] })
}

/// `σ_r(x) = (1/r!) Σ_{k=0}^{r} C(r,k) (-1)^k ρ_r(r x - k)`: 0 below 0, 1 above 1.
pub fn squash_net(r: u32) -> Result<Network> {
    if r == 0 {
        return Err(pre("squash_net needs r >= 1"));
    }
    let m = r as usize + 1;
    let rf = Q::from_integer(rat::factorial(r as u64));
    let mut t1 = AffineMap::zero(m, 1);
    let mut t2 = AffineMap::zero(1, m);
    for k in 0..m {
        t1.set(k, 0, q(r as i64));
        t1.set_bias(k, q(-(k as i64)));
        let c = Q::from_integer(rat::binom(r as u64, k as u64)) / &rf;
        t2.set(0, k, if k % 2 == 0 { c } else { -c });
    }
    Ok(Network { layers: vec![Layer::uniform(t1, Act::Rho(r)), Layer::uniform(t2, Act::Id)] })
}

/// `(x, y) -> x y` as `((x+y)^2 - (x-y)^2) / 4`, `n = 2(r+1)` neurons per square.
fn mult2(r: u32) -> Network {
    let sq = IdentityRepresentation::for_polynomial(&[Q::zero(), Q::zero(), Q::one()], r);
    let n = sq.terms.len();
    let mut t1 = AffineMap::zero(2 * n, 2);
    let mut t2 = AffineMap::zero(1, 2 * n);
    let quarter = rat::qf(1, 4);
    for (i, (a, b, c)) in sq.terms.iter().enumerate() {
        // u = x + y
        t1.set(i, 0, b.clone());
        t1.set(i, 1, b.clone());
        t1.set_bias(i, c.clone());
        t2.set(0, i, a * &quarter);
        // v = x - y
        t1.set(n + i, 0, b.clone());
        t1.set(n + i, 1, -b.clone());
        t1.set_bias(n + i, c.clone());
        t2.set(0, n + i, -(a * &quarter));
    }
    Network { layers: vec![Layer::uniform(t1, Act::Rho(r)), Layer::uniform(t2, Act::Id)] }
}

fn selection(d_in: usize, idx: &[usize]) -> AffineMap {
    let t = idx.iter().enumerate().map(|(row, &c)| (row, c, Q::one())).collect();
    AffineMap::from_triplets(idx.len(), d_in, t, vec![Q::zero(); idx.len()]).unwrap()
}

/// Exact product of `d` inputs by a binary tree of depth `2⌈log2 d⌉`,
/// padding with ones up to a power of two.
pub fn mult_net(d: usize, r: u32) -> Result<Network> {
    if r < 2 {
        return Err(pre("mult_net needs r >= 2 (no exact square for r = 1)"));
    }
    if d < 2 {
        return Err(pre("mult_net needs at least two factors"));
    }
    let m2 = mult2(r);
    let mut m = m2.clone();
    let mut width = 2;
    while width < d {
        let lo: Vec<usize> = (0..width).collect();
        let hi: Vec<usize> = (width..2 * width).collect();
        let a = pre_post_affine(&m, Some(&selection(2 * width, &lo)), None)?;
        let b = pre_post_affine(&m, Some(&selection(2 * width, &hi)), None)?;
        m = compose_stacked(&cartesian(&[a, b])?, &m2)?;
        width *= 2;
    }
    if width > d {
        // x -> (x, 1, .., 1)
        let mut pad = AffineMap::zero(width, d);
        for i in 0..d {
            pad.set(i, i, Q::one());
        }
        for i in d..width {
            pad.set_bias(i, Q::one());
        }
        m = pre_post_affine(&m, Some(&pad), None)?;
    }
    Ok(m)
}

/// `(x, y_1..y_k) -> (x y_1, .., x y_k)`.
pub fn scalar_vector_mult_net(k: usize, r: u32) -> Result<Network> {
    if r < 2 {
        return Err(pre("scalar_vector_mult_net needs r >= 2"));
    }
    if k < 1 {
        return Err(pre("scalar_vector_mult_net needs k >= 1"));
    }
    let m2 = mult2(r);
    let parts: Vec<Network> = (0..k)
        .map(|i| pre_post_affine(&m2, Some(&selection(k + 1, &[0, i + 1])), None))
        .collect::<Result<_>>()?;
    cartesian(&parts)
}

/// `x -> Π_i β_+^{(t)}(x_i)`.
pub fn tensor_bspline_net(d: usize, t: u32) -> Result<Network> {
    if d < 1 || (t as usize) < d.min(2) {
        return Err(pre(format!("tensor_bspline_net needs t >= min(d, 2), got d = {d}, t = {t}")));
    }
    let b = bspline_net(t)?;
    if d == 1 {
        return Ok(b);
    }
    let parts: Vec<Network> =
        (0..d).map(|i| pre_post_affine(&b, Some(&selection(d, &[i])), None)).collect::<Result<_>>()?;
    compose_stacked(&cartesian(&parts)?, &mult_net(d, t)?)
}

/// How the squashing property of `sigma` was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquashCheck {
    pub ok: bool,
    /// Exact piecewise check, as opposed to `10^4` samples.
    pub exact: bool,
}

/// Checks `σ = 0` on `(-inf, 0]`, `σ = 1` on `[1, inf)` and `0 <= σ <= 1`.
pub fn check_squashing(sigma: &Network) -> SquashCheck {
    if sigma.d_in() != 1 || sigma.d_out() != 1 {
        return SquashCheck { ok: false, exact: true };
    }
    match extract_pieces(sigma) {
        Ok(pw) => SquashCheck { ok: squashing_pw(&pw), exact: true },
        Err(_) => {
            let ok = (0..10_000).all(|i| {
                let x = -1.0 + 3.0 * i as f64 / 9_999.0;
                let y = sigma.evaluate_f64(&[x])[0];
                let want_ok = if x <= 0.0 {
                    y.abs() < 1e-9
                } else if x >= 1.0 {
                    (y - 1.0).abs() < 1e-9
                } else {
                    (-1e-9..=1.0 + 1e-9).contains(&y)
                };
                want_ok
            });
            SquashCheck { ok, exact: false }
        }
    }
}

fn squashing_pw(pw: &PiecewisePoly) -> bool {
    let one = Poly::constant(Q::one());
    for i in 0..pw.count_pieces() {
        let (lo, hi) = pw.piece_bounds(i);
        let p = &pw.pieces()[i];
        let below = lo.is_none_or(|b| b.cmp_q(&Q::zero()).is_lt());
        let above = hi.is_none_or(|b| b.cmp_q(&Q::one()).is_gt());
        if below && !p.is_zero() {
            return false;
        }
        if above && *p != one {
            return false;
        }
    }
    for (l, r, p) in pw.segments_in(&Q::zero(), &Q::one()) {
        let mut cands = vec![l.clone(), r.clone()];
        cands.extend(crate::pwpoly::algebraic::roots_between(&p.derivative(), Some(&l), Some(&r)));
        for c in &cands {
            if c.sign_of(p) < 0 || c.sign_of(&p.add_const(&-Q::one())) > 0 {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct IndicatorNet {
    pub net: Network,
    /// "d1" for the one-dimensional shortcut, "general" otherwise.
    pub path: &'static str,
    pub squash: SquashCheck,
}

/// Approximate indicator of the box `Π [a_i, b_i]` built from a squashing
/// function; exact 1 on the box shrunk by `eps` (in unit coordinates), 0
/// outside the box.
pub fn indicator_net(rect: &[(Q, Q)], eps: &Q, sigma: &Network) -> Result<IndicatorNet> {
    let d = rect.len();
    if d == 0 {
        return Err(pre("empty rectangle"));
    }
    if !(eps.is_positive() && *eps < rat::qf(1, 2)) {
        return Err(pre("eps must lie in (0, 1/2)"));
    }
    if rect.iter().any(|(a, b)| a >= b) {
        return Err(pre("rectangle sides must have a < b"));
    }
    let squash = check_squashing(sigma);
    if !squash.ok {
        return Err(pre("sigma does not satisfy the squashing property"));
    }
    let inv = Q::one() / eps;
    // t(x) = σ(x/ε) - σ(1 + (x-1)/ε) on unit coordinates
    let p1 = AffineMap::from_dense(&[vec![inv.clone()]], vec![Q::zero()]);
    let p2 = AffineMap::from_dense(&[vec![inv.clone()]], vec![Q::one() - &inv]);
    let t = sum(&[
        pre_post_affine(sigma, Some(&p1), None)?,
        scale(&pre_post_affine(sigma, Some(&p2), None)?, &-Q::one()),
    ])?;
    let unit = |i: usize| {
        let (a, b) = &rect[i];
        let w = b - a;
        AffineMap::from_triplets(1, d, vec![(0, i, Q::one() / &w)], vec![-a / &w]).unwrap()
    };
    if d == 1 {
        let net = pre_post_affine(&t, Some(&unit(0)), None)?;
        return Ok(IndicatorNet { net, path: "d1", squash });
    }
    let parts: Vec<Network> = (0..d).map(|i| pre_post_affine(&t, Some(&unit(i)), None)).collect::<Result<_>>()?;
    let mut agg = AffineMap::zero(1, d);
    for i in 0..d {
        agg.set(0, i, Q::one());
    }
    agg.set_bias(0, q(1 - d as i64));
    let outer = pre_post_affine(sigma, Some(&agg), None)?;
    let net = compose_fused(&cartesian(&parts)?, &outer)?;
    Ok(IndicatorNet { net, path: "general", squash })
}

#[derive(Clone, Debug)]
pub struct LocalizeNet {
    pub net: Network,
    /// Constants with `W <= c_w W(g)` and `N <= c_n N(g)`.
    pub c_w: u64,
    pub c_n: u64,
}

/// `x -> θ(x) g(x)` with `θ` equal to 1 on `[-R, R]^d` and 0 outside
/// `[-R-δ, R+δ]^d`, built from the exact `ρ_r` squashing function.
pub fn localize_net(g: &Network, radius: &Q, delta: &Q, r: u32) -> Result<LocalizeNet> {
    let g = compress(g);
    let rep = g.complexity()?;
    if rep.w == 0 || rep.n == 0 {
        return Err(pre("result as stated cannot hold for W=0 or N=0"));
    }
    if *radius < Q::one() || !delta.is_positive() {
        return Err(pre("need R >= 1 and delta > 0"));
    }
    let (d, k) = (g.d_in(), g.d_out());
    let outer = radius + delta;
    let rect = vec![(-outer.clone(), outer.clone()); d];
    let eps = delta / (q(2) * &outer);
    let theta = indicator_net(&rect, &eps, &squash_net(r)?)?.net;
    let mult = scalar_vector_mult_net(k, r)?;
    let net = compose_fused(&cartesian(&[theta.clone(), g.clone()])?, &mult)?;

    let th = theta.complexity()?;
    let mr = mult.complexity()?;
    let m = d.min(k + 1) as u64;
    let (wt, nt, lt) = (th.w as u64, th.n as u64, th.l as u64);
    // N_f <= N_θ + N_g + m (L_θ + L_g) with L_g <= 2 N_g
    let cn_f = nt + m * lt + 1 + 2 * m;
    let c_n = cn_f + mr.n as u64;
    // W_f <= W_θ + W_g + m (L_θ + L_g), and after compression N_g, L_g <= W_g
    let cw_f = wt + m * lt + 1 + m;
    let c_w = cw_f + (cn_f + d as u64) * mr.w as u64;
    Ok(LocalizeNet { net, c_w, c_n })
}

/// Strict depth-2 network of a polynomial; see `calculus::represent_polynomial`.
pub fn poly_net(coeffs: &[Q], r: u32) -> Result<Network> {
    crate::calculus::represent_polynomial(coeffs, r)
}

/// The breakpoints of `Δ_j` as rationals, for tests and reports.
pub fn sawtooth_breakpoints(j: u32) -> Vec<Breakpoint> {
    sawtooth_pw(j).breakpoints().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qf;

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth_eval(1, &qf(1, 2)), q(1));
        assert_eq!(sawtooth_eval(3, &qf(1, 8)), q(1));
        assert_eq!(sawtooth_eval(3, &qf(1, 4)), q(0));
        assert_eq!(sawtooth_pw(3).count_pieces(), 10);
        for i in -5..=45 {
            let x = qf(i, 37);
            assert_eq!(sawtooth_pw(4).eval(&x), sawtooth_eval(4, &x));
        }
    }

    #[test]
    fn sawtooth_networks() {
        for variant in [SawtoothVariant::Weights, SawtoothVariant::Neurons] {
            for l in 2..=5 {
                let net = sawtooth_net(&SawtoothSpec { j: 5, d: 1, variant, l }).unwrap();
                assert_eq!(net.depth(), l);
                let pw = extract_pieces(&net).unwrap();
                assert_eq!(pw, sawtooth_pw(5), "{variant:?} L={l}");
            }
        }
        let net = sawtooth_net(&SawtoothSpec { j: 4, d: 3, variant: SawtoothVariant::Weights, l: 3 }).unwrap();
        let x = vec![qf(3, 32), q(7), q(-2)];
        assert_eq!(net.evaluate(&x).unwrap()[0], sawtooth_eval(4, &qf(3, 32)));
    }

    #[test]
    fn small_gadgets() {
        assert_eq!(bspline_net(1).unwrap().evaluate(&[q(1)]).unwrap(), vec![q(1)]);
        let s2 = squash_net(2).unwrap();
        assert_eq!(s2.complexity().unwrap().triple(), (6, 2, 3));
        assert_eq!(s2.evaluate(&[qf(1, 2)]).unwrap(), vec![qf(1, 2)]);
        let s1 = squash_net(1).unwrap();
        for (x, y) in [(q(-1), q(0)), (qf(1, 3), qf(1, 3)), (q(2), q(1))] {
            assert_eq!(s1.evaluate(&[x]).unwrap(), vec![y]);
        }
        for r in 1..=4 {
            assert!(check_squashing(&squash_net(r).unwrap()).ok);
        }
        assert!(!check_squashing(&bspline_net(2).unwrap()).ok);
    }

    #[test]
    fn products() {
        let m = mult_net(2, 2).unwrap();
        assert_eq!(m.evaluate(&[q(3), q(4)]).unwrap(), vec![q(12)]);
        let rep = m.complexity().unwrap();
        assert!(rep.w <= 36 && rep.n <= 12 && rep.l == 2);
        assert_eq!(mult_net(4, 2).unwrap().evaluate(&[q(1), q(2), q(3), q(4)]).unwrap(), vec![q(24)]);
        assert_eq!(mult_net(3, 3).unwrap().evaluate(&[q(2), q(2), q(2)]).unwrap(), vec![q(8)]);
        assert!(mult_net(2, 1).is_err());
        let sv = scalar_vector_mult_net(3, 2).unwrap();
        assert_eq!(sv.evaluate(&[q(2), q(1), q(2), q(3)]).unwrap(), vec![q(2), q(4), q(6)]);
    }

    #[test]
    fn indicator_and_localizer() {
        let s1 = squash_net(1).unwrap();
        let h = indicator_net(&[(q(0), q(1))], &qf(1, 4), &s1).unwrap();
        assert_eq!(h.path, "d1");
        assert_eq!(h.net.evaluate(&[qf(1, 2)]).unwrap(), vec![q(1)]);
        assert_eq!(h.net.evaluate(&[q(-1)]).unwrap(), vec![q(0)]);
        let h2 = indicator_net(&[(q(0), q(1)), (q(0), q(1))], &qf(1, 8), &s1).unwrap();
        assert!(h2.net.depth() <= 3);
        assert_eq!(h2.net.evaluate(&[qf(1, 2), qf(1, 2)]).unwrap(), vec![q(1)]);
        assert_eq!(h2.net.evaluate(&[qf(1, 2), qf(3, 2)]).unwrap(), vec![q(0)]);

        // g(x) = ρ_2(x) + 1 - ρ_2(x) ... a net with W, N >= 1 realizing x^2 + 1
        let g = represent_poly_plus_one();
        let loc = localize_net(&g, &q(1), &qf(1, 2), 2).unwrap();
        for x in [q(-1), qf(1, 3), q(1)] {
            assert_eq!(loc.net.evaluate(&[x.clone()]).unwrap(), g.evaluate(&[x]).unwrap());
        }
        for x in [qf(-7, 4), q(2), q(9)] {
            assert_eq!(loc.net.evaluate(&[x]).unwrap(), vec![q(0)]);
        }
        let (lw, ln) = (loc.net.complexity().unwrap(), g.complexity().unwrap());
        assert!(lw.w as u64 <= loc.c_w * ln.w as u64);
        assert!(lw.n as u64 <= loc.c_n * ln.n as u64);
        assert!(lw.l <= (ln.l + 1).max(3));
    }

    fn represent_poly_plus_one() -> Network {
        poly_net(&[q(1), q(0), q(1)], 2).unwrap()
    }
}
