//! Workflows behind the command-line verbs: gadget builds with their budget
//! checks, and piece-count censuses.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{NetError, Result};
use crate::gadgets::{
    bspline_net, indicator_net, localize_net, mult_net, poly_net, sawtooth_constant, sawtooth_net, scalar_vector_mult_net,
    squash_net, tensor_bspline_net, SawtoothSpec, SawtoothVariant,
};
use crate::network::{ComplexityReport, Network};
use crate::random::{random_network, rng, RandomNetSpec};
use crate::rat::{self, q, Q};
use crate::verify::{census_row, CensusRow};

pub const GADGET_KINDS: [&str; 8] =
    ["sawtooth", "bspline", "squash", "mult", "tensor-bspline", "indicator", "localize", "poly"];

/// Parameters shared by all gadget kinds; each kind reads the ones it needs.
#[derive(Clone, Debug)]
pub struct GadgetParams {
    pub j: u32,
    pub l: usize,
    pub r: u32,
    pub d: usize,
    pub n: u32,
    pub k: usize,
    pub variant: SawtoothVariant,
    pub eps: Q,
    pub radius: Q,
    pub delta: Q,
    pub coeffs: Vec<Q>,
    /// Network to localize; a seeded random one when absent.
    pub input: Option<Network>,
    pub seed: u64,
}

impl Default for GadgetParams {
    fn default() -> Self {
        GadgetParams {
            j: 3,
            l: 2,
            r: 2,
            d: 1,
            n: 2,
            k: 1,
            variant: SawtoothVariant::Weights,
            eps: rat::qf(1, 4),
            radius: q(1),
            delta: rat::qf(1, 2),
            coeffs: vec![q(0), q(0), q(1)],
            input: None,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetLine {
    pub claim: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetReport {
    pub kind: String,
    pub complexity: ComplexityReport,
    pub budgets: Vec<BudgetLine>,
    #[serde(skip)]
    pub network: Network,
}

impl GadgetReport {
    pub fn pass(&self) -> bool {
        self.budgets.iter().all(|b| b.pass)
    }
}

fn line(claim: String, pass: bool) -> BudgetLine {
    BudgetLine { claim, pass }
}

fn le(name: &str, got: usize, bound: usize) -> BudgetLine {
    line(format!("{name} = {got} ≤ {bound}"), got <= bound)
}

fn eq(name: &str, got: usize, want: usize) -> BudgetLine {
    line(format!("{name} = {got} = {want}"), got == want)
}

/// `got ≤ c · 2^{j/e}`, decided exactly as `got^e ≤ c^e 2^j`.
fn root_budget(name: &str, got: usize, c: u128, j: u32, e: usize) -> BudgetLine {
    let lhs = Pow::pow(BigUint::from(got), e);
    let rhs = Pow::pow(BigUint::from(c), e) << j as usize;
    let factor = if j as usize % e == 0 { format!("{}", 1u128 << (j as usize / e)) } else { format!("2^({j}/{e})") };
    line(format!("{name} = {got} ≤ {c}·{factor}"), lhs <= rhs)
}

fn ceil_log2(d: usize) -> usize {
    (usize::BITS - (d - 1).leading_zeros()) as usize
}

pub fn build_gadget(kind: &str, p: &GadgetParams) -> Result<GadgetReport> {
    let (net, budgets): (Network, Box<dyn Fn(&ComplexityReport) -> Vec<BudgetLine>>) = match kind {
        "sawtooth" => {
            if p.j == 0 || p.d == 0 {
                return Err(NetError::Precondition("need j >= 1 and d >= 1".into()));
            }
            let net = sawtooth_net(&SawtoothSpec { j: p.j, d: p.d, variant: p.variant, l: p.l })?;
            let (j, l, variant) = (p.j, p.l, p.variant);
            let c = sawtooth_constant(l);
            (
                net,
                Box::new(move |rep| {
                    let mut v = vec![eq("L", rep.l, l)];
                    v.push(match variant {
                        SawtoothVariant::Weights => root_budget("W", rep.w, c, j, l / 2),
                        SawtoothVariant::Neurons => root_budget("N", rep.n, c, j, l - 1),
                    });
                    v
                }),
            )
        }
        "bspline" => {
            let n = p.n as usize;
            (bspline_net(p.n)?, Box::new(move |rep| vec![eq("L", rep.l, 2), eq("N", rep.n, n + 2)]))
        }
        "squash" => {
            let r = p.r as usize;
            (
                squash_net(p.r)?,
                Box::new(move |rep| vec![eq("W", rep.w, 2 * (r + 1)), eq("L", rep.l, 2), eq("N", rep.n, r + 1)]),
            )
        }
        "mult" => {
            if p.d < 2 {
                return Err(NetError::Precondition("mult needs d >= 2".into()));
            }
            let net = if p.k > 1 { scalar_vector_mult_net(p.k, p.r)? } else { mult_net(p.d, p.r)? };
            let n = 2 * (p.r as usize + 1);
            let (d, k) = (p.d, p.k);
            (
                net,
                Box::new(move |rep| {
                    if k > 1 {
                        return vec![le("W", rep.w, 6 * k * n), eq("L", rep.l, 2), le("N", rep.n, 2 * k * n)];
                    }
                    let j = ceil_log2(d);
                    let span = (1usize << j) - 1;
                    vec![le("W", rep.w, 6 * n * span), eq("L", rep.l, 2 * j), le("N", rep.n, (2 * n + 1) * span - 1)]
                }),
            )
        }
        "tensor-bspline" => {
            let (d, t) = (p.d, p.n as usize);
            (
                tensor_bspline_net(p.d, p.n)?,
                Box::new(move |rep| {
                    if d == 1 {
                        vec![eq("W", rep.w, 2 * (t + 2)), eq("L", rep.l, 2), eq("N", rep.n, t + 2)]
                    } else {
                        vec![
                            le("W", rep.w, 28 * d * (t + 1)),
                            eq("L", rep.l, 2 + 2 * ceil_log2(d)),
                            le("N", rep.n, 13 * d * (t + 1)),
                        ]
                    }
                }),
            )
        }
        "indicator" => {
            let sigma = squash_net(p.r)?;
            let (sw, sl, sn) = sigma.complexity()?.triple();
            let rect = vec![(q(0), q(1)); p.d];
            let h = indicator_net(&rect, &p.eps, &sigma)?;
            let d = p.d;
            (
                h.net,
                Box::new(move |rep| {
                    if d == 1 {
                        vec![le("W", rep.w, 2 * sw), eq("L", rep.l, sl), le("N", rep.n, 2 * sn)]
                    } else {
                        vec![le("W", rep.w, 2 * d * sw * (sn + 1)), le("L", rep.l, 2 * sl - 1), le("N", rep.n, (2 * d + 1) * sn)]
                    }
                }),
            )
        }
        "localize" => {
            let g = match &p.input {
                Some(g) => g.clone(),
                // first seeded depth-2 net that keeps a neuron after compression
                None => (0..64)
                    .map(|s| {
                        let spec = RandomNetSpec { d_in: p.d, ..RandomNetSpec::scalar(p.r, 2, 12) };
                        random_network(&mut rng(p.seed, s), &spec)
                    })
                    .find(|g| crate::compress::compress(g).complexity().is_ok_and(|c| c.n > 0 && c.w > 0))
                    .ok_or_else(|| NetError::Precondition("no usable random network".into()))?,
            };
            let gr = crate::compress::compress(&g).complexity()?;
            let loc = localize_net(&g, &p.radius, &p.delta, p.r)?;
            let depth = (gr.l + 1).max(if g.d_in() == 1 { 3 } else { 4 });
            let (cw, cn) = (loc.c_w as usize, loc.c_n as usize);
            (
                loc.net,
                Box::new(move |rep| {
                    vec![le("W", rep.w, cw * gr.w), le("L", rep.l, depth), le("N", rep.n, cn * gr.n)]
                }),
            )
        }
        "poly" => {
            let r = p.r as usize;
            (poly_net(&p.coeffs, p.r)?, Box::new(move |rep| vec![le("L", rep.l, 2), le("N", rep.n, 2 * r + 2)]))
        }
        other => {
            return Err(NetError::Precondition(format!("unknown gadget kind {other:?}; expected one of {GADGET_KINDS:?}")))
        }
    };
    let complexity = net.complexity()?;
    let budgets = budgets(&complexity);
    Ok(GadgetReport { kind: kind.to_string(), complexity, budgets, network: net })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFamily {
    RandomNet,
    Sawtooth,
}

impl CensusFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "random-net" => Some(CensusFamily::RandomNet),
            "sawtooth" => Some(CensusFamily::Sawtooth),
            _ => None,
        }
    }
}

/// Parses `a`, `a..b` (half open) or `a..=b`; a reversed range is empty.
pub fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || NetError::Precondition(format!("bad range {s:?}; use a, a..b or a..=b"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..=") {
        Ok((num(a)?..=num(b)?).collect())
    } else if let Some((a, b)) = s.split_once("..") {
        Ok((num(a)?..num(b)?).collect())
    } else {
        Ok(vec![num(s)?])
    }
}

/// One row per `(budget, trial)`. For random nets the budget caps the weight
/// count at depth `l`; for the sawtooth family it is `j` with a depth-`l`
/// network of the chosen variant.
pub fn census(
    family: CensusFamily,
    budgets: &[usize],
    r: u32,
    l: usize,
    trials: usize,
    variant: SawtoothVariant,
    seed: u64,
) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::new();
    for &b in budgets {
        match family {
            CensusFamily::RandomNet => {
                for t in 0..trials {
                    let stream = ((b as u64) << 32) | t as u64;
                    let mut g = rng(seed, stream);
                    let net = random_network(&mut g, &RandomNetSpec::scalar(r, l, b.max(1)));
                    rows.push(census_row(&net, r, seed, stream)?.0);
                }
            }
            CensusFamily::Sawtooth => {
                if b == 0 {
                    return Err(NetError::Precondition("sawtooth order starts at 1".into()));
                }
                let net = sawtooth_net(&SawtoothSpec { j: b as u32, d: 1, variant, l })?;
                rows.push(census_row(&net, 1, seed, b as u64)?.0);
            }
        }
    }
    Ok(rows)
}

pub const CENSUS_HEADER: [&str; 12] =
    ["seed", "stream", "r", "W", "L", "N", "pieces", "max_degree", "bound_weights", "bound_neurons", "cr", "pass"];

/// CSV with a header line even when there are no rows.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CENSUS_HEADER).expect("in-memory write");
    for row in rows {
        let pass = census_row_holds(row);
        w.write_record([
            row.seed.to_string(),
            row.stream.to_string(),
            row.r.to_string(),
            row.w.to_string(),
            row.l.to_string(),
            row.n.to_string(),
            row.pieces.to_string(),
            row.max_degree.to_string(),
            row.bound_weights.clone(),
            row.bound_neurons.clone(),
            row.cr.to_string(),
            pass.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Pieces within both bounds.
pub fn census_row_holds(row: &CensusRow) -> bool {
    let p = BigUint::from(row.pieces);
    let ok = |b: &str| b.parse::<BigUint>().is_ok_and(|b| p <= b);
    ok(&row.bound_weights) && ok(&row.bound_neurons)
}

/// Piece count of `Δ_j` on the real line: `2^j + 2` (two zero tails).
pub fn sawtooth_pieces(j: u32) -> BigUint {
    (BigUint::one() << j as usize) + 2u32
}
