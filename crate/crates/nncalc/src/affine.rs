use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rat::Q;

/// Sparse rational affine map `x -> A x + b`, with `A` stored as triplets.
///
/// Zero entries are never stored, so `l0` is just the map size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
    bias: Vec<Q>,
}

impl AffineMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        AffineMap { rows, cols, entries: BTreeMap::new(), bias: vec![Q::zero(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Constant map `R^cols -> R^rows` with value `c`.
    pub fn constant(c: Vec<Q>, cols: usize) -> Self {
        let mut m = Self::zero(c.len(), cols);
        m.bias = c;
        m
    }

    pub fn from_dense(a: &[Vec<Q>], bias: Vec<Q>) -> Self {
        let rows = bias.len();
        assert_eq!(a.len(), rows, "row count must match bias length");
        let cols = a.first().map_or(0, |r| r.len());
        let mut m = Self::zero(rows, cols);
        for (i, row) in a.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m.bias = bias;
        m
    }

    /// Builds from triplets; duplicate keys or out-of-range indices are rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: Vec<(usize, usize, Q)>,
        bias: Vec<Q>,
    ) -> Result<Self, String> {
        if bias.len() != rows {
            return Err(format!("bias has length {} but map has {} rows", bias.len(), rows));
        }
        let mut m = Self::zero(rows, cols);
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(format!("entry ({r},{c}) out of range {rows}x{cols}"));
            }
            if m.entries.contains_key(&(r, c)) {
                return Err(format!("duplicate entry ({r},{c})"));
            }
            m.set(r, c, v);
        }
        m.bias = bias;
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bias(&self) -> &[Q] {
        &self.bias
    }

    pub fn set_bias(&mut self, i: usize, v: Q) {
        self.bias[i] = v;
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Q) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Number of nonzero entries of the linear part.
    pub fn l0(&self) -> usize {
        self.entries.len()
    }

    pub fn bias_l0(&self) -> usize {
        self.bias.iter().filter(|b| !b.is_zero()).count()
    }

    /// Max nonzeros per column.
    pub fn l0_inf(&self) -> usize {
        let mut cnt = vec![0usize; self.cols];
        for &(_, c) in self.entries.keys() {
            cnt[c] += 1;
        }
        cnt.into_iter().max().unwrap_or(0)
    }

    /// Max nonzeros per row.
    pub fn l0_inf_star(&self) -> usize {
        let mut cnt = vec![0usize; self.rows];
        for &(r, _) in self.entries.keys() {
            cnt[r] += 1;
        }
        cnt.into_iter().max().unwrap_or(0)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.entries.range((r, 0)..(r + 1, 0)).next().is_none()
    }

    pub fn row(&self, r: usize) -> Vec<(usize, Q)> {
        self.entries.range((r, 0)..(r + 1, 0)).map(|(&(_, c), v)| (c, v.clone())).collect()
    }

    pub fn column(&self, c: usize) -> Vec<(usize, Q)> {
        self.entries.iter().filter(|(&(_, cc), _)| cc == c).map(|(&(r, _), v)| (r, v.clone())).collect()
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols, "input dimension mismatch");
        let mut y = self.bias.clone();
        for (&(r, c), v) in &self.entries {
            if !x[c].is_zero() {
                y[r] += v * &x[c];
            }
        }
        y
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.bias.iter().map(crate::rat::to_f64).collect();
        for (&(r, c), v) in &self.entries {
            y[r] += crate::rat::to_f64(v) * x[c];
        }
        y
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        assert_eq!(self.cols, inner.rows, "composition dimension mismatch");
        let mut inner_rows: Vec<Vec<(usize, &Q)>> = vec![Vec::new(); inner.rows];
        for (&(r, c), v) in &inner.entries {
            inner_rows[r].push((c, v));
        }
        let mut out = AffineMap::zero(self.rows, inner.cols);
        out.bias = self.apply(&inner.bias);
        let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (&(i, j), a) in &self.entries {
            for &(k, b) in &inner_rows[j] {
                *acc.entry((i, k)).or_insert_with(Q::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.entries = acc;
        out
    }

    pub fn scaled(&self, a: &Q) -> AffineMap {
        if a.is_zero() {
            return AffineMap::zero(self.rows, self.cols);
        }
        AffineMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(k, v)| (*k, v * a)).collect(),
            bias: self.bias.iter().map(|b| b * a).collect(),
        }
    }

    /// Block diagonal `(x_1, .., x_n) -> (T_1 x_1, .., T_n x_n)`.
    pub fn block_diag(maps: &[&AffineMap]) -> AffineMap {
        let rows = maps.iter().map(|m| m.rows).sum();
        let cols = maps.iter().map(|m| m.cols).sum();
        let mut out = AffineMap::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in maps {
            for (&(r, c), v) in &m.entries {
                out.entries.insert((r0 + r, c0 + c), v.clone());
            }
            for (i, b) in m.bias.iter().enumerate() {
                out.bias[r0 + i] = b.clone();
            }
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Shared input: `x -> (T_1 x, .., T_n x)`.
    pub fn vstack(maps: &[&AffineMap]) -> AffineMap {
        let cols = maps.first().map_or(0, |m| m.cols);
        let rows = maps.iter().map(|m| m.rows).sum();
        let mut out = AffineMap::zero(rows, cols);
        let mut r0 = 0;
        for m in maps {
            assert_eq!(m.cols, cols, "vstack needs a shared input dimension");
            for (&(r, c), v) in &m.entries {
                out.entries.insert((r0 + r, c), v.clone());
            }
            for (i, b) in m.bias.iter().enumerate() {
                out.bias[r0 + i] = b.clone();
            }
            r0 += m.rows;
        }
        out
    }

    /// Summed output: `(x_1, .., x_n) -> Σ T_i x_i`.
    pub fn hstack_sum(maps: &[&AffineMap]) -> AffineMap {
        let rows = maps.first().map_or(0, |m| m.rows);
        let cols = maps.iter().map(|m| m.cols).sum();
        let mut out = AffineMap::zero(rows, cols);
        let mut c0 = 0;
        for m in maps {
            assert_eq!(m.rows, rows, "hstack needs a shared output dimension");
            for (&(r, c), v) in &m.entries {
                out.entries.insert((r, c0 + c), v.clone());
            }
            for (i, b) in m.bias.iter().enumerate() {
                out.bias[i] += b;
            }
            c0 += m.cols;
        }
        out
    }

    /// Pointwise sum of two maps with equal shapes.
    pub fn plus(&self, other: &AffineMap) -> AffineMap {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_to(r, c, v);
        }
        for (i, b) in other.bias.iter().enumerate() {
            out.bias[i] += b;
        }
        out
    }

    /// Deletes column `c`, shifting higher column indices down.
    pub fn remove_column(&mut self, c: usize) {
        let old = std::mem::take(&mut self.entries);
        for ((r, cc), v) in old {
            if cc < c {
                self.entries.insert((r, cc), v);
            } else if cc > c {
                self.entries.insert((r, cc - 1), v);
            }
        }
        self.cols -= 1;
    }

    /// Deletes row `r`, shifting higher row indices down.
    pub fn remove_row(&mut self, r: usize) {
        let old = std::mem::take(&mut self.entries);
        for ((rr, c), v) in old {
            if rr < r {
                self.entries.insert((rr, c), v);
            } else if rr > r {
                self.entries.insert((rr - 1, c), v);
            }
        }
        self.bias.remove(r);
        self.rows -= 1;
    }

    /// Output row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> AffineMap {
        assert_eq!(perm.len(), self.rows);
        let mut inv = vec![0; self.rows];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        AffineMap {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&(r, c), v)| ((inv[r], c), v.clone())).collect(),
            bias: perm.iter().map(|&p| self.bias[p].clone()).collect(),
        }
    }

    /// Coordinate projection `x -> (x_{idx[0]}, x_{idx[1]}, ..)`.
    pub fn projection(cols: usize, idx: &[usize]) -> AffineMap {
        let mut m = AffineMap::zero(idx.len(), cols);
        for (r, &c) in idx.iter().enumerate() {
            m.set(r, c, Q::one());
        }
        m
    }
}
