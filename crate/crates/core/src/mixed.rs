//! Mixed complexes (V, d, Δ) with |d| = +1, |Δ| = -1, their Koszul tensor
//! product and the truncated cyclic chain complexes over k[u], k[v], k[u,v].

use crate::exactla::{fmt_q, homology_dims, parse_q, qi, LaError, SparseMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MixedError {
    #[error("d does not square to zero")]
    DSquare,
    #[error("delta does not square to zero")]
    DeltaSquare,
    #[error("d and delta do not anticommute")]
    NotAnticommuting,
    #[error("{0} entry ({1},{2}) has the wrong degree")]
    Degree(&'static str, usize, usize),
    #[error(transparent)]
    La(#[from] LaError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedComplex {
    degrees: Vec<i64>,
    d: SparseMatrix,
    delta: SparseMatrix,
}

#[derive(Serialize, Deserialize)]
struct MixedJson {
    dims_by_degree: BTreeMap<i64, usize>,
    d_entries: Vec<(usize, usize, String)>,
    delta_entries: Vec<(usize, usize, String)>,
}

impl MixedComplex {
    /// Basis vectors are reordered by degree (stable); `d` and `delta` act on columns.
    pub fn new(degrees: Vec<i64>, d: SparseMatrix, delta: SparseMatrix) -> Result<Self, MixedError> {
        let n = degrees.len();
        for m in [&d, &delta] {
            if m.rows() != n || m.cols() != n {
                return Err(LaError::DimensionMismatch(format!("expected {n}x{n}")).into());
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| degrees[i]);
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let degrees: Vec<i64> = order.iter().map(|&i| degrees[i]).collect();
        let d = d.permuted(&pos, &pos);
        let delta = delta.permuted(&pos, &pos);
        for (r, c, _) in d.entries() {
            if degrees[r] != degrees[c] + 1 {
                return Err(MixedError::Degree("d", r, c));
            }
        }
        for (r, c, _) in delta.entries() {
            if degrees[r] != degrees[c] - 1 {
                return Err(MixedError::Degree("delta", r, c));
            }
        }
        if !d.mul(&d)?.is_zero() {
            return Err(MixedError::DSquare);
        }
        if !delta.mul(&delta)?.is_zero() {
            return Err(MixedError::DeltaSquare);
        }
        let mut ac = d.mul(&delta)?;
        for (r, c, v) in delta.mul(&d)?.entries() {
            ac.add(r, c, v.clone());
        }
        if !ac.is_zero() {
            return Err(MixedError::NotAnticommuting);
        }
        Ok(MixedComplex { degrees, d, delta })
    }

    /// The monoidal unit (k, 0, 0).
    pub fn unit() -> Self {
        MixedComplex { degrees: vec![0], d: SparseMatrix::new(1, 1), delta: SparseMatrix::new(1, 1) }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn d(&self) -> &SparseMatrix {
        &self.d
    }

    pub fn delta(&self) -> &SparseMatrix {
        &self.delta
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        Some((*self.degrees.first()?, *self.degrees.last()?))
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    fn indices_in(&self, deg: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == deg).collect()
    }

    fn block(m: &SparseMatrix, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let rmap: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cmap: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut out = SparseMatrix::new(rows.len(), cols.len());
        for (r, c, v) in m.entries() {
            if let (Some(&i), Some(&j)) = (rmap.get(&r), cmap.get(&c)) {
                out.add(i, j, v.clone());
            }
        }
        out
    }

    /// Homology of (V, d) per degree.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        let degs: Vec<i64> = self.dims_by_degree().keys().copied().collect();
        degs.par_iter()
            .map(|&k| {
                let here = self.indices_in(k);
                let below = self.indices_in(k - 1);
                let above = self.indices_in(k + 1);
                let d_in = Self::block(&self.d, &here, &below);
                let d_out = Self::block(&self.d, &above, &here);
                (k, homology_dims(&d_in, &d_out).expect("d squares to zero"))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &SparseMatrix| m.entries().map(|(r, c, v)| (r, c, fmt_q(v))).collect();
        serde_json::to_value(MixedJson {
            dims_by_degree: self.dims_by_degree(),
            d_entries: enc(&self.d),
            delta_entries: enc(&self.delta),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, MixedError> {
        let j: MixedJson =
            serde_json::from_value(v.clone()).map_err(|e| LaError::Parse(e.to_string()))?;
        let degrees: Vec<i64> = j.dims_by_degree.iter().flat_map(|(&d, &n)| std::iter::repeat(d).take(n)).collect();
        let n = degrees.len();
        let dec = |es: &[(usize, usize, String)]| -> Result<SparseMatrix, MixedError> {
            let t: Result<Vec<_>, LaError> = es.iter().map(|(r, c, s)| Ok((*r, *c, parse_q(s)?))).collect();
            Ok(SparseMatrix::from_triplets(n, n, &t?)?)
        };
        MixedComplex::new(degrees.clone(), dec(&j.d_entries)?, dec(&j.delta_entries)?)
    }
}

/// A ⊗ B with d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db and likewise for Δ.
/// Basis element (i, j) sits at index i * dim(B) + j before degree sorting.
pub fn tensor(a: &MixedComplex, b: &MixedComplex) -> MixedComplex {
    let nb = b.dim();
    let n = a.dim() * nb;
    let idx = |i: usize, j: usize| i * nb + j;
    let mut degrees = vec![0; n];
    for i in 0..a.dim() {
        for j in 0..nb {
            degrees[idx(i, j)] = a.degrees[i] + b.degrees[j];
        }
    }
    let mut d = SparseMatrix::new(n, n);
    let mut delta = SparseMatrix::new(n, n);
    for (ma, mb, out) in [(&a.d, &b.d, &mut d), (&a.delta, &b.delta, &mut delta)] {
        for (r, c, v) in ma.entries() {
            for j in 0..nb {
                out.add(idx(r, j), idx(c, j), v.clone());
            }
        }
        for (r, c, v) in mb.entries() {
            for i in 0..a.dim() {
                let s = if a.degrees[i].rem_euclid(2) == 1 { -v.clone() } else { v.clone() };
                out.add(idx(i, r), idx(i, c), s);
            }
        }
    }
    MixedComplex::new(degrees, d, delta).expect("tensor of mixed complexes is mixed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    /// k[u], |u| = 2: the negative cyclic complex.
    U,
    /// k[v], |v| = -2, u acting by lowering the v-power: the cyclic complex.
    V,
    /// k[u, v] = k[u, u^{-1}]: the periodic complex.
    UV,
}

/// A ⊗ k[u], k[v] or k[u,v] with differential d + uΔ, truncated at power `trunc`.
/// A chain x·u^k is recorded as (index of x, k); for `V`, k counts powers of v,
/// and for `UV`, k ranges over -trunc..=trunc powers of u.
#[derive(Clone, Debug)]
pub struct PolyExtension {
    base: MixedComplex,
    var: Variable,
    trunc: i64,
}

impl PolyExtension {
    pub fn new(base: MixedComplex, var: Variable, trunc: usize) -> Self {
        assert!(trunc >= 1, "truncation must be at least 1");
        PolyExtension { base, var, trunc: trunc as i64 }
    }

    pub fn base(&self) -> &MixedComplex {
        &self.base
    }

    pub fn trunc(&self) -> usize {
        self.trunc as usize
    }

    fn powers(&self) -> std::ops::RangeInclusive<i64> {
        match self.var {
            Variable::U | Variable::V => 0..=self.trunc,
            Variable::UV => -self.trunc..=self.trunc,
        }
    }

    fn total_degree(&self, x: usize, k: i64) -> i64 {
        match self.var {
            Variable::U | Variable::UV => self.base.degrees[x] + 2 * k,
            Variable::V => self.base.degrees[x] - 2 * k,
        }
    }

    pub fn chains(&self, deg: i64) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for k in self.powers() {
            for x in 0..self.base.dim() {
                if self.total_degree(x, k) == deg {
                    out.push((x, k));
                }
            }
        }
        out
    }

    /// The power of u (or v) that Δ moves a chain to.
    fn delta_power(&self, k: i64) -> Option<i64> {
        let t = match self.var {
            Variable::U | Variable::UV => k + 1,
            Variable::V => k - 1,
        };
        self.powers().contains(&t).then_some(t)
    }

    /// Matrix of d + uΔ from total degree `deg` to `deg + 1`.
    pub fn differential(&self, deg: i64) -> SparseMatrix {
        let src = self.chains(deg);
        let dst = self.chains(deg + 1);
        let pos: BTreeMap<(usize, i64), usize> = dst.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let dcols = self.base.d.col_maps();
        let tcols = self.base.delta.col_maps();
        let mut m = SparseMatrix::new(dst.len(), src.len());
        for (j, &(x, k)) in src.iter().enumerate() {
            for (&y, v) in &dcols[x] {
                m.add(pos[&(y, k)], j, v.clone());
            }
            if let Some(k2) = self.delta_power(k) {
                for (&y, v) in &tcols[x] {
                    m.add(pos[&(y, k2)], j, v.clone());
                }
            }
        }
        m
    }

    /// Total degrees whose homology is unaffected by the truncation.
    pub fn window(&self) -> Option<(i64, i64)> {
        let (lo, hi) = self.base.degree_range()?;
        let t = self.trunc;
        let w = match self.var {
            Variable::U => (lo - 1, lo + 2 * t - 1),
            Variable::V => (hi - 2 * t, hi + 1),
            Variable::UV => (hi - 2 * t, lo + 2 * t - 1),
        };
        (w.0 <= w.1).then_some(w)
    }

    pub fn check_d_squared(&self) -> bool {
        let Some((lo, hi)) = self.base.degree_range() else { return true };
        let span = 2 * self.trunc + 2;
        ((lo - span)..=(hi + span)).all(|k| {
            let a = self.differential(k);
            let b = self.differential(k + 1);
            b.mul(&a).map(|m| m.is_zero()).unwrap_or(false)
        })
    }

    pub fn homology_at(&self, deg: i64) -> usize {
        let d_in = self.differential(deg - 1);
        let d_out = self.differential(deg);
        homology_dims(&d_in, &d_out).expect("d + u delta squares to zero")
    }

    /// Homology dimensions over the exact window.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        let Some((lo, hi)) = self.window() else { return BTreeMap::new() };
        (lo..=hi).into_par_iter().map(|k| (k, self.homology_at(k))).collect()
    }

    pub fn total_homology(&self) -> usize {
        self.homology().values().sum()
    }
}

pub fn cc_minus(a: &MixedComplex, trunc: usize) -> PolyExtension {
    PolyExtension::new(a.clone(), Variable::U, trunc)
}

pub fn cc_plain(a: &MixedComplex, trunc: usize) -> PolyExtension {
    PolyExtension::new(a.clone(), Variable::V, trunc)
}

pub fn cc_per(a: &MixedComplex, trunc: usize) -> PolyExtension {
    PolyExtension::new(a.clone(), Variable::UV, trunc)
}

/// Per-degree chain counts of 0 -> CC⁻ -> CCᵖᵉʳ -> Σ⁻²CC -> 0, untruncated.
/// Returns, for each degree in the window, (dim CC⁻, dim CCᵖᵉʳ, dim Σ⁻²CC).
pub fn ses_chain_dims(a: &MixedComplex, trunc: usize) -> BTreeMap<i64, (usize, usize, usize)> {
    let dims = a.dims_by_degree();
    let Some((lo, hi)) = a.degree_range() else { return BTreeMap::new() };
    let count = |deg: i64, ks: &mut dyn Iterator<Item = i64>, sign: i64| -> usize {
        ks.map(|k| dims.get(&(deg - sign * 2 * k)).copied().unwrap_or(0)).sum()
    };
    let reach = (hi - lo) / 2 + 2;
    let t = trunc as i64;
    let mut out = BTreeMap::new();
    for deg in (lo - 2 * t)..=(hi + 2 * t) {
        let minus = count(deg, &mut (0..=reach + t), 1);
        let per = count(deg, &mut (-(reach + t)..=(reach + t)), 1);
        let plain_shift = count(deg + 2, &mut (0..=reach + t), -1);
        out.insert(deg, (minus, per, plain_shift));
    }
    out
}

/// Euler characteristic additivity of the short exact sequence, checked degree by degree.
pub fn ses_euler_check(a: &MixedComplex, trunc: usize) -> bool {
    ses_chain_dims(a, trunc).values().all(|&(m, p, c)| p == m + c)
}

/// A = span{e (deg 0), f (deg -1)}, d = 0, Δe = f.
pub fn two_dim_example() -> MixedComplex {
    let mut delta = SparseMatrix::new(2, 2);
    delta.add(1, 0, qi(1));
    MixedComplex::new(vec![0, -1], SparseMatrix::new(2, 2), delta).expect("valid mixed complex")
}

/// Mixed complex with d = 0 and Δ given by an arbitrary degree -1 square-zero matrix.
pub fn from_delta(degrees: Vec<i64>, delta: SparseMatrix) -> Result<MixedComplex, MixedError> {
    let n = degrees.len();
    MixedComplex::new(degrees, SparseMatrix::new(n, n), delta)
}
