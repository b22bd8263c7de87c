//! Construction lemmas as network transformations.
//!
//! Every function here returns a network whose realization is an exact
//! function of its inputs' realizations. Complexity budgets are checked by
//! the tests, not asserted at runtime.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::affine::AffineMap;
use crate::error::{NetError, Result};
use crate::network::{constant_network, Act, CustomActivation, Layer, Network};
use crate::rat::{self, from_f64, Q};

fn dim(msg: String) -> NetError {
    NetError::Dim(msg)
}

fn identity_layer(n: usize) -> Layer {
    Layer::uniform(AffineMap::identity(n), Act::Id)
}

/// Inserts `l0` identity layers on the smaller side (output side when
/// `d_out <= d_in`), adding `min(d_in, d_out)` weights and neurons per layer.
pub fn deepen(net: &Network, l0: usize) -> Network {
    let (d, k) = (net.d_in(), net.d_out());
    let mut layers = net.layers.clone();
    if k <= d {
        layers.extend((0..l0).map(|_| identity_layer(k)));
    } else {
        let mut pre: Vec<Layer> = (0..l0).map(|_| identity_layer(d)).collect();
        pre.append(&mut layers);
        layers = pre;
    }
    Network { layers }
}

/// `a * R(net)`, by scaling the last layer.
pub fn scale(net: &Network, a: &Q) -> Network {
    let mut out = net.clone();
    let last = out.layers.last_mut().expect("nonempty");
    last.map = last.map.scaled(a);
    out
}

/// Joins two networks of equal depth and shared input dimension. `sum_last`
/// adds the outputs instead of stacking them.
fn parallel(a: &Network, b: &Network, sum_last: bool) -> Network {
    let l = a.depth();
    debug_assert_eq!(l, b.depth());
    let mut layers = Vec::with_capacity(l);
    for i in 0..l {
        let (la, lb) = (&a.layers[i], &b.layers[i]);
        let last = i + 1 == l;
        let map = match (i == 0, last && sum_last) {
            (true, true) => la.map.plus(&lb.map),
            (true, false) => AffineMap::vstack(&[&la.map, &lb.map]),
            (false, true) => AffineMap::hstack_sum(&[&la.map, &lb.map]),
            (false, false) => AffineMap::block_diag(&[&la.map, &lb.map]),
        };
        let act = if last && sum_last {
            vec![Act::Id; map.rows()]
        } else {
            la.act.iter().chain(&lb.act).cloned().collect()
        };
        layers.push(Layer::new(map, act));
    }
    Network { layers }
}

/// Orders nets by depth (stable) and folds them pairwise, deepening only the
/// accumulated shallower network.
fn fold_by_depth(nets: &[Network], sum_last: bool) -> (Network, Vec<usize>) {
    let mut order: Vec<usize> = (0..nets.len()).collect();
    order.sort_by_key(|&i| nets[i].depth());
    let mut acc = nets[order[0]].clone();
    for &i in &order[1..] {
        let next = &nets[i];
        acc = deepen(&acc, next.depth() - acc.depth());
        acc = parallel(&acc, next, sum_last);
    }
    (acc, order)
}

/// `x -> (R(net_1)(x), .., R(net_n)(x))`.
pub fn cartesian(nets: &[Network]) -> Result<Network> {
    let first = nets.first().ok_or_else(|| NetError::Precondition("empty network list".into()))?;
    let d = first.d_in();
    if let Some(n) = nets.iter().find(|n| n.d_in() != d) {
        return Err(dim(format!("input dimensions {} and {} differ", d, n.d_in())));
    }
    if nets.len() == 1 {
        return Ok(first.clone());
    }
    let (mut net, order) = fold_by_depth(nets, false);
    // restore the caller's output order
    let mut offsets = vec![0; nets.len()];
    let mut off = 0;
    for &i in &order {
        offsets[i] = off;
        off += nets[i].d_out();
    }
    let mut perm_full = Vec::with_capacity(off);
    for (i, n) in nets.iter().enumerate() {
        for r in 0..n.d_out() {
            perm_full.push(offsets[i] + r);
        }
    }
    let last = net.layers.last_mut().unwrap();
    last.map = last.map.permute_rows(&perm_full);
    Ok(net)
}

/// Pointwise sum of realizations.
pub fn sum(nets: &[Network]) -> Result<Network> {
    let first = nets.first().ok_or_else(|| NetError::Precondition("empty network list".into()))?;
    let (d, k) = (first.d_in(), first.d_out());
    if let Some(n) = nets.iter().find(|n| n.d_in() != d || n.d_out() != k) {
        return Err(dim(format!("shape {}->{} differs from {}->{}", n.d_in(), n.d_out(), d, k)));
    }
    if nets.len() == 1 {
        return Ok(first.clone());
    }
    Ok(fold_by_depth(nets, true).0)
}

/// `Q ∘ R(net) ∘ P`. When `P` or `Q` has zero linear part the result keeps
/// the shape, with zero maps and the constant in the last bias.
pub fn pre_post_affine(net: &Network, p: Option<&AffineMap>, q: Option<&AffineMap>) -> Result<Network> {
    if let Some(p) = p {
        if p.rows() != net.d_in() {
            return Err(dim(format!("P has {} rows, network input is {}", p.rows(), net.d_in())));
        }
    }
    if let Some(q) = q {
        if q.cols() != net.d_out() {
            return Err(dim(format!("Q has {} cols, network output is {}", q.cols(), net.d_out())));
        }
    }
    let mut out = net.clone();
    let l = out.depth();
    // A zero linear part on either side makes the realization constant; keep
    // the shape and zero every map so no weight survives.
    let constant = match (p, q) {
        (_, Some(q)) if q.l0() == 0 => Some(q.bias().to_vec()),
        (Some(p), _) if p.l0() == 0 && p.cols() > 0 => net.evaluate(p.bias()).ok().map(|y| match q {
            Some(q) => q.apply(&y),
            None => y,
        }),
        _ => None,
    };
    if let Some(c) = constant {
        let d = p.map_or(net.d_in(), |p| p.cols());
        let k = c.len();
        for (i, layer) in out.layers.iter_mut().enumerate() {
            let cols = if i == 0 { d } else { layer.map.cols() };
            let rows = if i + 1 == l { k } else { layer.map.rows() };
            layer.map = AffineMap::zero(rows, cols);
        }
        let last = out.layers.last_mut().unwrap();
        last.map = AffineMap::constant(c, last.map.cols());
        last.act = vec![Act::Id; k];
        return Ok(out);
    }
    if let Some(p) = p {
        out.layers[0].map = out.layers[0].map.compose(p);
    }
    if let Some(q) = q {
        let last = &mut out.layers[l - 1];
        last.map = q.compose(&last.map);
        last.act = vec![Act::Id; q.rows()];
    }
    Ok(out)
}

/// `R(g) ∘ R(f)` by concatenating layers.
pub fn compose_stacked(f: &Network, g: &Network) -> Result<Network> {
    if f.d_out() != g.d_in() {
        return Err(dim(format!("d_out(f) = {} but d_in(g) = {}", f.d_out(), g.d_in())));
    }
    let mut layers = f.layers.clone();
    layers.extend(g.layers.iter().cloned());
    Ok(Network { layers })
}

/// `R(g) ∘ R(f)` with the last map of `f` merged into the first map of `g`.
pub fn compose_fused(f: &Network, g: &Network) -> Result<Network> {
    if f.d_out() != g.d_in() {
        return Err(dim(format!("d_out(f) = {} but d_in(g) = {}", f.d_out(), g.d_in())));
    }
    if f.depth() == 1 {
        return pre_post_affine(g, Some(&f.layers[0].map), None);
    }
    let lf = f.depth();
    let mut layers = f.layers[..lf - 1].to_vec();
    let g1 = &g.layers[0];
    layers.push(Layer::new(g1.map.compose(&f.layers[lf - 1].map), g1.act.clone()));
    layers.extend(g.layers[1..].iter().cloned());
    Ok(Network { layers })
}

/// Coefficients `a_l` with `p(x) = Σ_l a_l (x - l)^r`, nodes `l = 0..r`.
fn shifted_power_coeffs(coeffs: &[Q], r: u32) -> Option<Vec<Q>> {
    let n = r as usize + 1;
    let mut m = vec![vec![Q::zero(); n]; n];
    for (k, row) in m.iter_mut().enumerate() {
        for (l, v) in row.iter_mut().enumerate() {
            // coefficient of x^k in (x - l)^r
            let b = Q::from_integer(rat::binom(r as u64, k as u64));
            *v = b * rat::pow(&rat::q(-(l as i64)), r - k as u32);
        }
    }
    let mut rhs = vec![Q::zero(); n];
    for (k, c) in coeffs.iter().enumerate() {
        rhs[k] = c.clone();
    }
    rat::solve(m, rhs)
}

fn trim(coeffs: &[Q]) -> &[Q] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].is_zero() {
        n -= 1;
    }
    &coeffs[..n]
}

/// Strict depth-2 network over `rho_r` realizing the polynomial with the given
/// ascending coefficients, using `x^r = ρ(x)^r + (-1)^r ρ(-x)^r` at shifts 0..r.
pub fn represent_polynomial(coeffs: &[Q], r: u32) -> Result<Network> {
    let c = trim(coeffs);
    if c.len() > r as usize + 1 {
        return Err(NetError::Precondition(format!("degree {} exceeds r = {}", c.len() - 1, r)));
    }
    if c.len() <= 1 {
        return Ok(constant_network(vec![c.first().cloned().unwrap_or_else(Q::zero)], 1));
    }
    let idrep = IdentityRepresentation::for_polynomial(c, r);
    Ok(idrep.network())
}

/// `c + Σ a_i ρ_r(b_i x + c_i)`, a representation of some polynomial in
/// terms of shifted activations. `canonical` builds one for the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRepresentation {
    pub r: u32,
    pub offset: Q,
    /// `(a_i, b_i, c_i)`
    pub terms: Vec<(Q, Q, Q)>,
}

impl IdentityRepresentation {
    /// Representation of an arbitrary polynomial of degree at most `r`.
    pub fn for_polynomial(coeffs: &[Q], r: u32) -> Self {
        let a = shifted_power_coeffs(coeffs, r).expect("shifted monomials are a basis");
        let sign = if r % 2 == 0 { Q::one() } else { -Q::one() };
        let mut terms = Vec::new();
        for (l, al) in a.iter().enumerate() {
            if al.is_zero() {
                continue;
            }
            let l = rat::q(l as i64);
            terms.push((al.clone(), Q::one(), -l.clone()));
            terms.push((&sign * al, -Q::one(), l));
        }
        IdentityRepresentation { r, offset: Q::zero(), terms }
    }

    /// Representation of `x` obtained from `represent_polynomial(x, r)`.
    pub fn canonical(r: u32) -> Self {
        Self::for_polynomial(&[Q::zero(), Q::one()], r)
    }

    pub fn n(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut s = self.offset.clone();
        for (a, b, c) in &self.terms {
            s += a * crate::network::rho(&(b * x + c), self.r);
        }
        s
    }

    /// Checks the identity exactly: both sides are polynomials of degree at
    /// most `r` between consecutive kinks, so `r + 2` points per interval
    /// (plus the kinks) settle it.
    pub fn verify(&self) -> bool {
        let mut kinks: Vec<Q> = self.terms.iter().filter(|t| !t.1.is_zero()).map(|(_, b, c)| -c / b).collect();
        kinks.sort();
        kinks.dedup();
        let mut pts = kinks.clone();
        let mut bounds = vec![kinks.first().map_or(Q::zero(), |k| k - Q::one()) - Q::one()];
        bounds.extend(kinks.iter().cloned());
        bounds.push(kinks.last().map_or(Q::zero(), |k| k + Q::one()) + Q::one());
        for w in bounds.windows(2) {
            let step = (&w[1] - &w[0]) / rat::q(self.r as i64 + 3);
            for i in 1..=self.r as i64 + 2 {
                pts.push(&w[0] + &step * rat::q(i));
            }
        }
        pts.iter().all(|x| self.eval(x) == *x)
    }

    /// Depth-2 network realizing the represented polynomial.
    pub fn network(&self) -> Network {
        let n = self.terms.len();
        let mut t1 = AffineMap::zero(n, 1);
        let mut t2 = AffineMap::zero(1, n);
        for (i, (a, b, c)) in self.terms.iter().enumerate() {
            t1.set(i, 0, b.clone());
            t1.set_bias(i, c.clone());
            t2.set(0, i, a.clone());
        }
        t2.set_bias(0, self.offset.clone());
        Network { layers: vec![Layer::uniform(t1, Act::Rho(self.r)), Layer::uniform(t2, Act::Id)] }
    }
}

/// Replaces every hidden identity neuron by `n` `sigma` neurons using the
/// terms `(a_j, b_j, c_j)` of `x = offset + Σ a_j σ(b_j x + c_j)`.
fn strictify_with(net: &Network, sigma: &Act, terms: &[(Q, Q, Q)], offset: &Q) -> Result<Network> {
    let l = net.depth();
    let mut layers = Vec::with_capacity(l);
    // Q_{ℓ-1}: maps the expanded previous layer back to its original neurons
    let mut back: Option<AffineMap> = None;
    for (idx, layer) in net.layers.iter().enumerate() {
        let mut map = match &back {
            Some(b) => layer.map.compose(b),
            None => layer.map.clone(),
        };
        if idx + 1 == l {
            layers.push(Layer::new(map, layer.act.clone()));
            break;
        }
        let rows = layer.map.rows();
        let expanded: usize = layer.act.iter().map(|a| if *a == Act::Id { terms.len() } else { 1 }).sum();
        let mut p = AffineMap::zero(expanded, rows);
        let mut qm = AffineMap::zero(rows, expanded);
        let mut k = 0;
        for (i, a) in layer.act.iter().enumerate() {
            if *a == Act::Id {
                for (aj, bj, cj) in terms {
                    p.set(k, i, bj.clone());
                    p.set_bias(k, cj.clone());
                    qm.set(i, k, aj.clone());
                    k += 1;
                }
                qm.set_bias(i, offset.clone());
            } else if a == sigma {
                p.set(k, i, Q::one());
                qm.set(i, k, Q::one());
                k += 1;
            } else {
                return Err(NetError::Precondition(format!(
                    "hidden activation {} does not match {}",
                    a.tag(),
                    sigma.tag()
                )));
            }
        }
        map = p.compose(&map);
        layers.push(Layer::uniform(map, sigma.clone()));
        back = Some(qm);
    }
    Ok(Network { layers })
}

/// Exact strict network over `rho_r` with the same realization. Budget
/// `(n² W, L, n N)` for an `n`-term representation.
pub fn strictify(net: &Network, idrep: &IdentityRepresentation) -> Result<Network> {
    let mut deg = None;
    for a in net.hidden_acts() {
        match a {
            Act::Id => {}
            Act::Rho(r) => {
                if deg.is_some_and(|d| d != *r) {
                    return Err(NetError::Precondition("mixed Rho degrees".into()));
                }
                deg = Some(*r);
            }
            Act::Custom(c) => {
                return Err(NetError::Precondition(format!("custom activation {} in strictify", c.name)))
            }
        }
    }
    if deg.is_some_and(|d| d != idrep.r) {
        return Err(NetError::Precondition(format!(
            "network uses rho:{} but the representation is for rho:{}",
            deg.unwrap(),
            idrep.r
        )));
    }
    strictify_with(net, &Act::Rho(idrep.r), &idrep.terms, &idrep.offset)
}

/// Construction used by [`substitute_activation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstMode {
    /// Requires a depth-2 `sigma_net`; keeps the depth.
    TwoLayer,
    /// Any depth `ℓ`; the result has depth `1 + (L-1)ℓ`.
    General,
}

/// Replaces each hidden non-identity neuron of `net` by a copy of `sigma_net`.
/// Hidden identity neurons become identity chains of the same depth.
pub fn substitute_activation(net: &Network, sigma_net: &Network, mode: SubstMode) -> Result<Network> {
    if sigma_net.d_in() != 1 || sigma_net.d_out() != 1 {
        return Err(dim("sigma_net must map R to R".into()));
    }
    if crate::compress::compress(sigma_net).complexity_unchecked().w == 0 {
        return Err(NetError::Precondition("sigma_net realizes a constant".into()));
    }
    let ell = sigma_net.depth();
    if mode == SubstMode::TwoLayer && ell != 2 {
        return Err(NetError::Precondition(format!("two-layer mode needs depth 2, sigma_net has {ell}")));
    }
    let l = net.depth();
    let id_chain = Network { layers: (0..ell).map(|_| identity_layer(1)).collect() };
    // tensor[i][t] = t-th layer of the per-neuron networks of hidden layer i
    let mut tensor: Vec<Vec<Layer>> = Vec::with_capacity(l - 1);
    for layer in &net.layers[..l - 1] {
        let blocks: Vec<&Network> = layer.act.iter().map(|a| if *a == Act::Id { &id_chain } else { sigma_net }).collect();
        let mut tl = Vec::with_capacity(ell);
        for t in 0..ell {
            let maps: Vec<&AffineMap> = blocks.iter().map(|b| &b.layers[t].map).collect();
            let act: Vec<Act> = blocks.iter().flat_map(|b| b.layers[t].act.iter().cloned()).collect();
            tl.push(Layer::new(AffineMap::block_diag(&maps), act));
        }
        tensor.push(tl);
    }
    let mut layers = Vec::new();
    match mode {
        SubstMode::TwoLayer => {
            for (i, layer) in net.layers.iter().enumerate() {
                let mut map = layer.map.clone();
                if i > 0 {
                    map = map.compose(&tensor[i - 1][1].map);
                }
                if i + 1 == l {
                    layers.push(Layer::new(map, layer.act.clone()));
                } else {
                    let u1 = &tensor[i][0];
                    layers.push(Layer::new(u1.map.compose(&map), u1.act.clone()));
                }
            }
        }
        SubstMode::General => {
            let s1 = &net.layers[0];
            layers.push(Layer::new(s1.map.clone(), vec![Act::Id; s1.map.rows()]));
            for i in 0..l - 1 {
                for t in 0..ell - 1 {
                    layers.push(tensor[i][t].clone());
                }
                let next = &net.layers[i + 1];
                let map = next.map.compose(&tensor[i][ell - 1].map);
                layers.push(Layer::new(map, vec![Act::Id; next.map.rows()]));
            }
        }
    }
    Ok(Network { layers })
}

/// Unrolls hidden `rho_{r^s}` neurons into `s` consecutive `rho_r` neurons,
/// with identity chains for hidden identity neurons.
pub fn power_unroll(net: &Network, r: u32, s: u32) -> Result<Network> {
    if s == 0 {
        return Err(NetError::Precondition("s must be at least 1".into()));
    }
    let target = r.checked_pow(s).ok_or_else(|| NetError::Precondition("r^s overflows".into()))?;
    let l = net.depth();
    let mut layers = Vec::new();
    for (i, layer) in net.layers.iter().enumerate() {
        if i + 1 == l {
            layers.push(layer.clone());
            break;
        }
        let mut act = Vec::with_capacity(layer.act.len());
        for a in &layer.act {
            match a {
                Act::Id => act.push(Act::Id),
                Act::Rho(k) if *k == target => act.push(Act::Rho(r)),
                other => {
                    return Err(NetError::Precondition(format!("expected rho:{target}, found {}", other.tag())))
                }
            }
        }
        layers.push(Layer::new(layer.map.clone(), act.clone()));
        for _ in 1..s {
            layers.push(Layer::new(AffineMap::identity(act.len()), act.clone()));
        }
    }
    Ok(Network { layers })
}

/// Result of [`strictify_approx`].
#[derive(Clone, Debug)]
pub struct StrictApprox {
    pub net: Network,
    /// Scale chosen for the finite-difference slope test.
    pub delta: f64,
    /// Sup of `|R(out) - R(net)|` over a grid of `[-K, K]^d`.
    pub sup_error: f64,
}

fn slope_ok(c: &CustomActivation, x0: f64, a: f64, delta: f64, m: f64) -> bool {
    let s0 = (c.eval)(x0);
    (0..=1000).all(|i| {
        let h = delta * (2.0 * i as f64 / 1000.0 - 1.0);
        if h == 0.0 {
            return true;
        }
        let slope = ((c.eval)(x0 + h) - s0) / h;
        (slope - a).abs() <= a.abs() / m
    })
}

/// Largest `delta` (doubling, then 40 bisection steps) passing the slope test.
fn pick_delta(c: &CustomActivation, x0: f64, a: f64, m: f64) -> Option<f64> {
    let mut lo;
    let mut hi;
    if slope_ok(c, x0, a, 1.0, m) {
        lo = 1.0;
        hi = 2.0;
        while slope_ok(c, x0, a, hi, m) {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Some(lo);
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while !slope_ok(c, x0, a, lo, m) {
            hi = lo;
            lo /= 2.0;
            if lo < 1e-300 {
                return None;
            }
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if slope_ok(c, x0, a, mid, m) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Strict network over a custom `sigma` whose realization tends to `R(net)`
/// as `m` grows. Each hidden identity neuron is replaced by the two-term
/// difference quotient of `sigma` at its registered derivative point, so the
/// budget is `(4W, L, 2N)`. The error is measured on a grid of `[-k, k]^d`.
pub fn strictify_approx(net: &Network, m: u64, k: f64) -> Result<StrictApprox> {
    let mut sigma: Option<Arc<CustomActivation>> = None;
    for a in net.hidden_acts() {
        match a {
            Act::Id => {}
            Act::Rho(_) => {
                return Err(NetError::Precondition("rho activations are strictified exactly by strictify".into()))
            }
            Act::Custom(c) => match &sigma {
                Some(s) if s.name != c.name => {
                    return Err(NetError::Precondition("more than one custom activation".into()))
                }
                _ => sigma = Some(c.clone()),
            },
        }
    }
    let sigma = sigma.ok_or_else(|| NetError::Precondition("no custom activation to strictify with".into()))?;
    let (x0, a) = sigma
        .derivative
        .ok_or_else(|| NetError::Precondition(format!("{} has no derivative point registered", sigma.name)))?;
    if a == 0.0 || m == 0 {
        return Err(NetError::Precondition("need a nonzero derivative and m >= 1".into()));
    }
    let mf = m as f64;
    let delta = pick_delta(&sigma, x0, a, mf)
        .ok_or_else(|| NetError::Precondition("slope test fails at every scale".into()))?;
    // s ≈ m^{-1/2}, rational so the network stays exact
    let s = from_f64(1.0 / mf.sqrt());
    let dq = from_f64(delta);
    let aq = from_f64(a);
    let x0q = from_f64(x0);
    let sd = &s * &dq;
    let inv = Q::one() / (&aq * &sd);
    let terms = vec![(inv.clone(), sd, x0q.clone()), (-inv, Q::zero(), x0q)];
    let out = strictify_with(net, &Act::Custom(sigma), &terms, &Q::zero())?;
    let sup_error = grid_sup_error(net, &out, k);
    Ok(StrictApprox { net: out, delta, sup_error })
}

fn grid_sup_error(a: &Network, b: &Network, k: f64) -> f64 {
    let d = a.d_in();
    let per_axis = match d {
        1 => 2001,
        2 => 65,
        3 => 17,
        _ => 5,
    };
    let mut idx = vec![0usize; d];
    let mut worst: f64 = 0.0;
    loop {
        let x: Vec<f64> = idx.iter().map(|&i| -k + 2.0 * k * i as f64 / (per_axis - 1) as f64).collect();
        let ya = a.evaluate_f64(&x);
        let yb = b.evaluate_f64(&x);
        for (u, v) in ya.iter().zip(&yb) {
            worst = worst.max((u - v).abs());
        }
        let mut j = 0;
        loop {
            if j == d {
                return worst;
            }
            idx[j] += 1;
            if idx[j] < per_axis {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// `true` when the two networks agree exactly at every given point.
pub fn agree_at(a: &Network, b: &Network, pts: &[Vec<Q>]) -> Result<bool> {
    for x in pts {
        if a.evaluate(x)? != b.evaluate(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}
