use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::affine::AffineMap;
use crate::error::NetError;
use crate::rat::{self, Q};

/// A scalar activation known only through a float evaluator.
///
/// `exact` optionally carries a network realizing it, which lets the exact
/// evaluator and the activation-substitution lemma see through the handle.
pub struct CustomActivation {
    pub name: String,
    pub eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `(x0, sigma'(x0))`
    pub derivative: Option<(f64, f64)>,
    pub exact: Option<Network>,
}

impl fmt::Debug for CustomActivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomActivation")
            .field("name", &self.name)
            .field("derivative", &self.derivative)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

impl CustomActivation {
    pub fn new(
        name: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: Option<(f64, f64)>,
    ) -> Arc<Self> {
        Arc::new(CustomActivation { name: name.to_string(), eval: Arc::new(eval), derivative, exact: None })
    }

    /// Activation realized exactly by a scalar network.
    pub fn from_network(name: &str, net: Network) -> Arc<Self> {
        let n2 = net.clone();
        let eval = move |x: f64| n2.evaluate_f64(&[x])[0];
        Arc::new(CustomActivation { name: name.to_string(), eval: Arc::new(eval), derivative: None, exact: Some(net) })
    }
}

fn registry() -> &'static Mutex<HashMap<String, Arc<CustomActivation>>> {
    static REG: OnceLock<Mutex<HashMap<String, Arc<CustomActivation>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Makes a custom activation resolvable by name when reading JSON.
pub fn register_custom(act: Arc<CustomActivation>) {
    registry().lock().unwrap().insert(act.name.clone(), act);
}

pub fn lookup_custom(name: &str) -> Option<Arc<CustomActivation>> {
    registry().lock().unwrap().get(name).cloned()
}

#[derive(Clone, Debug)]
pub enum Act {
    Id,
    Rho(u32),
    Custom(Arc<CustomActivation>),
}

impl PartialEq for Act {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Act::Id, Act::Id) => true,
            (Act::Rho(a), Act::Rho(b)) => a == b,
            (Act::Custom(a), Act::Custom(b)) => a.name == b.name,
            _ => false,
        }
    }
}

impl Act {
    pub fn tag(&self) -> String {
        match self {
            Act::Id => "id".into(),
            Act::Rho(r) => format!("rho:{r}"),
            Act::Custom(c) => format!("custom:{}", c.name),
        }
    }

    pub fn from_tag(s: &str) -> Result<Act, NetError> {
        if s == "id" {
            return Ok(Act::Id);
        }
        if let Some(r) = s.strip_prefix("rho:") {
            let r: u32 = r.parse().map_err(|_| NetError::Json(format!("bad activation tag {s:?}")))?;
            if r == 0 {
                return Err(NetError::Json("rho:0 is not an activation".into()));
            }
            return Ok(Act::Rho(r));
        }
        if let Some(name) = s.strip_prefix("custom:") {
            return lookup_custom(name)
                .map(Act::Custom)
                .ok_or_else(|| NetError::Json(format!("unregistered custom activation {name:?}")));
        }
        Err(NetError::Json(format!("bad activation tag {s:?}")))
    }

    pub fn apply(&self, y: Q) -> Result<Q, NetError> {
        match self {
            Act::Id => Ok(y),
            Act::Rho(r) => Ok(rho(&y, *r)),
            Act::Custom(c) => match &c.exact {
                Some(net) => Ok(net.evaluate(&[y])?.remove(0)),
                None => Err(NetError::CustomActivation(c.name.clone())),
            },
        }
    }

    pub fn apply_f64(&self, y: f64) -> f64 {
        match self {
            Act::Id => y,
            Act::Rho(r) => y.max(0.0).powi(*r as i32),
            Act::Custom(c) => (c.eval)(y),
        }
    }
}

pub fn rho(y: &Q, r: u32) -> Q {
    if y.is_positive() {
        rat::pow(y, r)
    } else {
        Q::zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub map: AffineMap,
    pub act: Vec<Act>,
}

impl Layer {
    pub fn new(map: AffineMap, act: Vec<Act>) -> Self {
        Layer { map, act }
    }

    /// Layer whose neurons all use `a`.
    pub fn uniform(map: AffineMap, a: Act) -> Self {
        let n = map.rows();
        Layer { map, act: vec![a; n] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    pub layers: Vec<Layer>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub layer: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerStats {
    pub l0: usize,
    pub l0_inf: usize,
    pub l0_inf_star: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityReport {
    #[serde(rename = "W")]
    pub w: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "W0")]
    pub w0: usize,
    pub per_layer: Vec<LayerStats>,
}

impl ComplexityReport {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.w, self.l, self.n)
    }
}

/// Float view of a realization: midpoint and a radius enclosing the exact value.
#[derive(Clone, Debug)]
pub struct FloatEval {
    pub value: Vec<f64>,
    pub radius: Vec<f64>,
    /// False when a custom activation was evaluated without an enclosure.
    pub certified: bool,
}

pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Reads `NNCALC_PRECISION_BITS`, falling back to 128.
pub fn precision_bits_from_env() -> u32 {
    std::env::var("NNCALC_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| b >= 8)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

impl Network {
    pub fn new(layers: Vec<Layer>) -> Result<Self, NetError> {
        let net = Network { layers };
        let diags = net.validate();
        if diags.is_empty() {
            Ok(net)
        } else {
            Err(NetError::Invalid(diags))
        }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn d_in(&self) -> usize {
        self.layers.first().map_or(0, |l| l.map.cols())
    }

    pub fn d_out(&self) -> usize {
        self.layers.last().map_or(0, |l| l.map.rows())
    }

    /// `N_0, .., N_L`.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![self.d_in()];
        d.extend(self.layers.iter().map(|l| l.map.rows()));
        d
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.layers.is_empty() {
            out.push(Diagnostic { layer: 0, message: "network has no layers".into() });
            return out;
        }
        for (i, l) in self.layers.iter().enumerate() {
            if l.act.len() != l.map.rows() {
                out.push(Diagnostic {
                    layer: i + 1,
                    message: format!("activation vector has length {} but layer has {} neurons", l.act.len(), l.map.rows()),
                });
            }
            if i > 0 {
                let prev = self.layers[i - 1].map.rows();
                if l.map.cols() != prev {
                    out.push(Diagnostic {
                        layer: i + 1,
                        message: format!("dimension chain broken: map expects {} inputs, previous layer has {}", l.map.cols(), prev),
                    });
                }
            }
            if l.map.rows() == 0 {
                out.push(Diagnostic { layer: i + 1, message: "layer has no neurons".into() });
            }
        }
        let last = self.layers.len();
        if self.layers[last - 1].act.iter().any(|a| *a != Act::Id) {
            out.push(Diagnostic { layer: last, message: "output activation must be identity".into() });
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), NetError> {
        let d = self.validate();
        if d.is_empty() {
            Ok(())
        } else {
            Err(NetError::Invalid(d))
        }
    }

    pub fn complexity(&self) -> Result<ComplexityReport, NetError> {
        self.ensure_valid()?;
        Ok(self.complexity_unchecked())
    }

    pub(crate) fn complexity_unchecked(&self) -> ComplexityReport {
        let per_layer: Vec<LayerStats> = self
            .layers
            .iter()
            .map(|l| LayerStats { l0: l.map.l0(), l0_inf: l.map.l0_inf(), l0_inf_star: l.map.l0_inf_star() })
            .collect();
        let w = per_layer.iter().map(|s| s.l0).sum();
        let w0 = w + self.layers.iter().map(|l| l.map.bias_l0()).sum::<usize>();
        let n = self.layers[..self.layers.len() - 1].iter().map(|l| l.map.rows()).sum();
        ComplexityReport { w, n, l: self.layers.len(), w0, per_layer }
    }

    pub fn hidden_acts(&self) -> impl Iterator<Item = &Act> {
        let n = self.layers.len();
        self.layers[..n.saturating_sub(1)].iter().flat_map(|l| l.act.iter())
    }

    /// `Some(r)` when every hidden neuron uses `rho_r` (vacuously `Some(default)` for L = 1).
    pub fn strict_degree(&self, default: u32) -> Option<u32> {
        let mut r = None;
        for a in self.hidden_acts() {
            match a {
                Act::Rho(k) => {
                    if r.is_some_and(|x| x != *k) {
                        return None;
                    }
                    r = Some(*k);
                }
                _ => return None,
            }
        }
        Some(r.unwrap_or(default))
    }

    pub fn is_strict(&self) -> bool {
        let mut first: Option<&Act> = None;
        for a in self.hidden_acts() {
            if *a == Act::Id {
                return false;
            }
            match first {
                None => first = Some(a),
                Some(f) if f != a => return false,
                _ => {}
            }
        }
        true
    }

    pub fn evaluate(&self, x: &[Q]) -> Result<Vec<Q>, NetError> {
        if x.len() != self.d_in() {
            return Err(NetError::Dim(format!("input has length {} but network expects {}", x.len(), self.d_in())));
        }
        let mut cur = x.to_vec();
        for l in &self.layers {
            let y = l.map.apply(&cur);
            cur = y.into_iter().zip(&l.act).map(|(v, a)| a.apply(v)).collect::<Result<_, _>>()?;
        }
        Ok(cur)
    }

    /// Plain f64 evaluation without error control.
    pub fn evaluate_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut cur = x.to_vec();
        for l in &self.layers {
            let y = l.map.apply_f64(&cur);
            cur = y.into_iter().zip(&l.act).map(|(v, a)| a.apply_f64(v)).collect();
        }
        cur
    }

    /// Interval evaluation with dyadic outward rounding to `bits` significant bits.
    pub fn evaluate_float(&self, x: &[f64], bits: u32) -> Result<FloatEval, NetError> {
        if x.len() != self.d_in() {
            return Err(NetError::Dim(format!("input has length {} but network expects {}", x.len(), self.d_in())));
        }
        let mut certified = true;
        let mut cur: Vec<(Q, Q)> = x.iter().map(|&v| (rat::from_f64(v), rat::from_f64(v))).collect();
        for l in &self.layers {
            let mut y: Vec<(Q, Q)> = l.map.bias().iter().map(|b| (b.clone(), b.clone())).collect();
            for (r, c, a) in l.map.entries() {
                let (lo, hi) = &cur[c];
                if a.is_positive() {
                    y[r].0 += a * lo;
                    y[r].1 += a * hi;
                } else {
                    y[r].0 += a * hi;
                    y[r].1 += a * lo;
                }
            }
            cur = Vec::with_capacity(y.len());
            for ((lo, hi), act) in y.into_iter().zip(&l.act) {
                let (lo, hi) = match act {
                    Act::Id => (lo, hi),
                    Act::Rho(r) => (rho(&lo, *r), rho(&hi, *r)),
                    Act::Custom(c) => {
                        certified = false;
                        let mid = (rat::to_f64(&lo) + rat::to_f64(&hi)) / 2.0;
                        let v = rat::from_f64((c.eval)(mid));
                        (v.clone(), v)
                    }
                };
                cur.push((rat::round_bits(&lo, bits, false), rat::round_bits(&hi, bits, true)));
            }
        }
        let two = rat::q(2);
        let value = cur.iter().map(|(lo, hi)| rat::to_f64(&((lo + hi) / &two))).collect();
        let radius = cur
            .iter()
            .map(|(lo, hi)| {
                let r = rat::to_f64(&((hi - lo) / &two));
                // one ulp of slack for the final f64 conversion of the midpoint
                r + f64::EPSILON * rat::to_f64(&((lo + hi) / &two)).abs()
            })
            .collect();
        Ok(FloatEval { value, radius, certified })
    }
}

/// `x -> c` on `R^d` with W = N = 0 and L = 1.
pub fn constant_network(c: Vec<Q>, d: usize) -> Network {
    assert!(d >= 1, "input dimension must be positive");
    Network { layers: vec![Layer::uniform(AffineMap::constant(c, d), Act::Id)] }
}

impl Network {
    /// Single affine layer network.
    pub fn affine(map: AffineMap) -> Network {
        Network { layers: vec![Layer::uniform(map, Act::Id)] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qf};

    fn two_layer() -> Network {
        let t1 = AffineMap::from_dense(&[vec![q(1)], vec![q(1)]], vec![q(0), q(-1)]);
        let t2 = AffineMap::from_dense(&[vec![q(1), q(-1)]], vec![q(0)]);
        Network::new(vec![Layer::uniform(t1, Act::Rho(1)), Layer::uniform(t2, Act::Id)]).unwrap()
    }

    #[test]
    fn clamp_network_values() {
        let n = two_layer();
        assert_eq!(n.evaluate(&[qf(1, 3)]).unwrap(), vec![qf(1, 3)]);
        assert_eq!(n.evaluate(&[q(5)]).unwrap(), vec![q(1)]);
        assert_eq!(n.evaluate(&[q(-5)]).unwrap(), vec![q(0)]);
    }

    #[test]
    fn complexity_counts() {
        let c = two_layer().complexity().unwrap();
        assert_eq!((c.w, c.l, c.n), (4, 2, 2));
        assert_eq!(c.w0, 5);
    }

    #[test]
    fn validation_flags_output_activation() {
        let t = AffineMap::identity(1);
        let n = Network { layers: vec![Layer::uniform(t, Act::Rho(1))] };
        let d = n.validate();
        assert_eq!(d.len(), 1);
        assert!(d[0].message.contains("output activation"));
    }

    #[test]
    fn validation_flags_dimension_chain() {
        let t1 = AffineMap::zero(2, 3);
        let t2 = AffineMap::zero(1, 3);
        let n = Network { layers: vec![Layer::uniform(t1, Act::Rho(1)), Layer::uniform(t2, Act::Id)] };
        let d = n.validate();
        assert!(d.iter().any(|x| x.layer == 2 && x.message.contains("dimension chain")));
    }

    #[test]
    fn float_view_encloses_exact() {
        let n = two_layer();
        let f = n.evaluate_float(&[0.3], 64).unwrap();
        let exact = rat::to_f64(&n.evaluate(&[rat::from_f64(0.3)]).unwrap()[0]);
        assert!((f.value[0] - exact).abs() <= f.radius[0] + 1e-300);
        assert!(f.certified);
    }

    #[test]
    fn custom_without_exact_is_rejected() {
        let s = CustomActivation::new("tanh-test", f64::tanh, Some((0.0, 1.0)));
        let t1 = AffineMap::identity(1);
        let n = Network::new(vec![
            Layer::uniform(t1.clone(), Act::Custom(s)),
            Layer::uniform(t1, Act::Id),
        ])
        .unwrap();
        assert!(matches!(n.evaluate(&[q(1)]), Err(NetError::CustomActivation(_))));
        assert!(!n.evaluate_float(&[0.5], 64).unwrap().certified);
    }
}
