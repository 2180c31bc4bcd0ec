//! Exact rational linear algebra: formal sums, sparse matrices, fraction-free
//! rank, kernels and homology of composable pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type Rational = BigRational;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn fmt_q(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Rational, LaError> {
    let bad = || LaError::Parse(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("d_out * d_in is not zero")]
    CompositionNotZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("entry ({0},{1}) out of bounds")]
    OutOfBounds(usize, usize),
}

/// Finite Q-linear combination of basis keys. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + fmt::Debug> fmt::Debug for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*{:?}", fmt_q(c), k)?;
        }
        Ok(())
    }
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(k: K) -> Self {
        Self::single(k, Rational::one())
    }

    pub fn single(k: K, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Rational)>>(it: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in it {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, k: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_int(&mut self, k: K, c: i64) {
        self.add_term(k, qi(c));
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), -v.clone());
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_assign(other);
        s
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.sub_assign(other);
        s
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FormalSum { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scaled(&qi(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, k: &K) -> Rational {
        self.terms.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.terms.iter().next()
    }

    /// Extend a map on basis keys linearly.
    pub fn map_linear<K2: Ord + Clone, F: FnMut(&K) -> FormalSum<K2>>(&self, mut f: F) -> FormalSum<K2> {
        let mut out = FormalSum::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    pub fn filter<F: Fn(&K) -> bool>(&self, keep: F) -> Self {
        FormalSum { terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    pub fn into_terms(self) -> BTreeMap<K, Rational> {
        self.terms
    }
}

/// Bilinear extension of a map on pairs of basis keys.
pub fn bilinear<A: Ord + Clone, B: Ord + Clone, C: Ord + Clone, F: FnMut(&A, &B) -> FormalSum<C>>(
    a: &FormalSum<A>,
    b: &FormalSum<B>,
    mut f: F,
) -> FormalSum<C> {
    let mut out = FormalSum::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            out.add_scaled(&f(ka, kb), &(ca * cb));
        }
    }
    out
}

/// Degrees and canonical labels of an enumerated basis.
#[derive(Clone, Debug)]
pub struct GradedBasis<K: Ord> {
    labels: Vec<K>,
    degrees: Vec<i64>,
    index: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> GradedBasis<K> {
    /// Labels are sorted so the ordering is reproducible; duplicates are rejected.
    pub fn new(mut items: Vec<(K, i64)>) -> Self {
        items.sort_by(|a, b| a.0.cmp(&b.0));
        items.dedup_by(|a, b| a.0 == b.0);
        let mut index = BTreeMap::new();
        let mut labels = Vec::with_capacity(items.len());
        let mut degrees = Vec::with_capacity(items.len());
        for (i, (k, d)) in items.into_iter().enumerate() {
            index.insert(k.clone(), i);
            labels.push(k);
            degrees.push(d);
        }
        GradedBasis { labels, degrees, index }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &K {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn index_of(&self, k: &K) -> Option<usize> {
        self.index.get(k).copied()
    }

    pub fn labels(&self) -> &[K] {
        &self.labels
    }

    pub fn in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    pub fn to_vector(&self, s: &FormalSum<K>) -> Option<BTreeMap<usize, Rational>> {
        let mut v = BTreeMap::new();
        for (k, c) in s.iter() {
            v.insert(self.index_of(k)?, c.clone());
        }
        Some(v)
    }
}

/// Sparse matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

impl Serialize for SparseMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&(r, c), v)| (r, c, fmt_q(v))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let mut m = SparseMatrix::new(j.rows, j.cols);
        for (r, c, v) in j.entries {
            let v = parse_q(&v).map_err(serde::de::Error::custom)?;
            if r >= j.rows || c >= j.cols {
                return Err(serde::de::Error::custom(LaError::OutOfBounds(r, c)));
            }
            m.add(r, c, v);
        }
        Ok(m)
    }
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.add(i, i, Rational::one());
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, t: &[(usize, usize, Rational)]) -> Result<Self, LaError> {
        let mut m = Self::new(rows, cols);
        for (r, c, v) in t {
            if *r >= rows || *c >= cols {
                return Err(LaError::OutOfBounds(*r, *c));
            }
            m.add(*r, *c, v.clone());
        }
        Ok(m)
    }

    /// Matrix whose column j is the image of basis element j of `src`, expressed in `dst`.
    /// Panics if an image leaves `dst`, which signals an enumeration bug.
    pub fn from_map<K: Ord + Clone + fmt::Debug, L: Ord + Clone + fmt::Debug, F: Fn(&K) -> FormalSum<L>>(
        src: &[K],
        dst: &GradedBasis<L>,
        dst_idx: &[usize],
        f: F,
    ) -> Self {
        let local: BTreeMap<usize, usize> = dst_idx.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut m = Self::new(dst_idx.len(), src.len());
        for (j, k) in src.iter().enumerate() {
            for (l, c) in f(k).iter() {
                let g = dst.index_of(l).unwrap_or_else(|| panic!("image term {:?} outside target basis", l));
                let i = *local.get(&g).unwrap_or_else(|| panic!("image term {:?} in wrong degree", l));
                m.add(i, j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn add(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of bounds");
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((r, c)).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::new(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LaError> {
        if self.cols != other.rows {
            return Err(LaError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let other_rows = other.row_maps();
        let mut out = SparseMatrix::new(self.rows, other.cols);
        for (&(r, k), v) in &self.entries {
            for (&c, w) in &other_rows[k] {
                out.add(r, c, v * w);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (&(r, c), a) in &self.entries {
            if let Some(x) = v.get(&c) {
                *out.entry(r).or_insert_with(Rational::zero) += a * x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    pub fn row_maps(&self) -> Vec<BTreeMap<usize, Rational>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows
    }

    pub fn col_maps(&self) -> Vec<BTreeMap<usize, Rational>> {
        let mut cols = vec![BTreeMap::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].insert(r, v.clone());
        }
        cols
    }

    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((row_perm[r], col_perm[c]), v.clone());
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("matrix serializes")
    }
}

fn primitive_int_row<C: Ord + Clone>(row: &BTreeMap<C, Rational>) -> BTreeMap<C, BigInt> {
    let mut l = BigInt::one();
    for v in row.values() {
        l = l.lcm(v.denom());
    }
    let mut out: BTreeMap<C, BigInt> =
        row.iter().map(|(c, v)| (c.clone(), (v * BigRational::from_integer(l.clone())).to_integer())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive<C: Ord>(row: &mut BTreeMap<C, BigInt>) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
    if let Some((_, lead)) = row.iter().next() {
        if lead.is_negative() {
            for v in row.values_mut() {
                *v = -v.clone();
            }
        }
    }
}

/// Incremental fraction-free echelon form over integer rows with arbitrary
/// ordered column keys. Each stored row is primitive with positive pivot.
#[derive(Clone, Debug, Default)]
pub struct IntEchelon<C: Ord> {
    pivots: BTreeMap<C, BTreeMap<C, BigInt>>,
}

impl<C: Ord + Clone> IntEchelon<C> {
    pub fn new() -> Self {
        IntEchelon { pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce against stored pivots; returns the primitive remainder.
    fn reduce(&self, mut row: BTreeMap<C, BigInt>) -> BTreeMap<C, BigInt> {
        let mut start: Option<C> = None;
        loop {
            let next = match &start {
                None => row.keys().find(|k| self.pivots.contains_key(k)).cloned(),
                Some(s) => row.range(s.clone()..).map(|(k, _)| k).find(|k| self.pivots.contains_key(k)).cloned(),
            };
            let Some(col) = next else { break };
            let p = &self.pivots[&col];
            let a = row[&col].clone();
            let b = p[&col].clone();
            let g = a.gcd(&b);
            let fa = &b / &g;
            let fb = &a / &g;
            for v in row.values_mut() {
                *v *= &fa;
            }
            for (k, v) in p {
                let e = row.entry(k.clone()).or_insert_with(BigInt::zero);
                *e -= v * &fb;
                if e.is_zero() {
                    row.remove(k);
                }
            }
            make_primitive(&mut row);
            start = Some(col);
        }
        row
    }

    pub fn insert_int(&mut self, row: BTreeMap<C, BigInt>) -> bool {
        let mut row = row;
        row.retain(|_, v| !v.is_zero());
        make_primitive(&mut row);
        let r = self.reduce(row);
        match r.keys().next().cloned() {
            Some(lead) => {
                self.pivots.insert(lead, r);
                true
            }
            None => false,
        }
    }

    pub fn insert(&mut self, row: &BTreeMap<C, Rational>) -> bool {
        self.insert_int(primitive_int_row(row))
    }

    pub fn contains(&self, row: &BTreeMap<C, Rational>) -> bool {
        self.reduce(primitive_int_row(row)).is_empty()
    }
}

/// Q-rank by fraction-free elimination; rows are processed sparsest first.
pub fn rank(m: &SparseMatrix) -> usize {
    let rows = if m.rows <= m.cols { m.row_maps() } else { m.col_maps() };
    let mut rows: Vec<_> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    let mut e = IntEchelon::new();
    for r in &rows {
        e.insert(r);
    }
    e.rank()
}

/// Rank of a family of formal sums.
pub fn rank_of_sums<K: Ord + Clone>(vs: &[FormalSum<K>]) -> usize {
    let mut e = IntEchelon::new();
    for v in vs {
        let row: BTreeMap<K, Rational> = v.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        e.insert(&row);
    }
    e.rank()
}

/// Subset of `vs` forming a basis of their span, keeping the first independent ones.
pub fn independent_subset<K: Ord + Clone>(vs: &[FormalSum<K>]) -> Vec<FormalSum<K>> {
    let mut e = IntEchelon::new();
    let mut out = Vec::new();
    for v in vs {
        let row: BTreeMap<K, Rational> = v.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        if e.insert(&row) {
            out.push(v.clone());
        }
    }
    out
}

/// Coefficients c with Σ cᵢ·vsᵢ = target, or None if target is outside the span.
pub fn solve_in_span<K: Ord + Clone>(vs: &[FormalSum<K>], target: &FormalSum<K>) -> Option<Vec<Rational>> {
    let n = vs.len();
    let mut pivots: Vec<(K, FormalSum<K>, Vec<Rational>)> = Vec::new();
    let reduce = |v: &mut FormalSum<K>, combo: &mut Vec<Rational>, pivots: &[(K, FormalSum<K>, Vec<Rational>)]| {
        for (k, row, c) in pivots {
            let a = v.coeff(k);
            if !a.is_zero() {
                v.add_scaled(row, &-a.clone());
                for t in 0..n {
                    combo[t] -= &a * &c[t];
                }
            }
        }
    };
    for (i, v) in vs.iter().enumerate() {
        let mut row = v.clone();
        let mut combo = vec![Rational::zero(); n];
        combo[i] = Rational::one();
        reduce(&mut row, &mut combo, &pivots);
        if let Some((k, a)) = row.leading().map(|(k, a)| (k.clone(), a.recip())) {
            let row = row.scaled(&a);
            let combo = combo.into_iter().map(|c| c * &a).collect();
            pivots.push((k, row, combo));
        }
    }
    let mut t = target.clone();
    let mut combo = vec![Rational::zero(); n];
    reduce(&mut t, &mut combo, &pivots);
    t.is_zero().then(|| combo.into_iter().map(|c| -c).collect())
}

/// Reduced row echelon form over Q; returns rows and pivot columns.
fn rref(m: &SparseMatrix) -> (Vec<BTreeMap<usize, Rational>>, Vec<usize>) {
    let mut rows: Vec<BTreeMap<usize, Rational>> = m.row_maps().into_iter().filter(|r| !r.is_empty()).collect();
    let mut out: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    rows.sort_by_key(|r| r.len());
    for mut r in rows {
        for (k, p) in pivots.iter().enumerate() {
            if let Some(a) = r.get(p).cloned() {
                for (c, v) in &out[k] {
                    let e = r.entry(*c).or_insert_with(Rational::zero);
                    *e -= &a * v;
                    if e.is_zero() {
                        r.remove(c);
                    }
                }
            }
        }
        if let Some((&lead, a)) = r.iter().next() {
            let inv = a.recip();
            for v in r.values_mut() {
                *v *= &inv;
            }
            for row in out.iter_mut() {
                if let Some(b) = row.get(&lead).cloned() {
                    for (c, v) in &r {
                        let e = row.entry(*c).or_insert_with(Rational::zero);
                        *e -= &b * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
            out.push(r);
            pivots.push(lead);
        }
    }
    (out, pivots)
}

/// Basis of ker(M) as dense rational vectors of length cols(M).
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let (rows, pivots) = rref(m);
    let pivot_set: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set.contains_key(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (&p, &k) in &pivot_set {
            if let Some(a) = rows[k].get(&free) {
                v[p] = -a.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// dim ker(d_out) - rank(d_in) for a composable pair A --d_in--> B --d_out--> C.
pub fn homology_dims(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize, LaError> {
    if d_in.rows != d_out.cols {
        return Err(LaError::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} cols",
            d_in.rows, d_out.cols
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(LaError::CompositionNotZero);
    }
    let mid = d_in.rows;
    let (r_in, r_out) = rayon::join(|| rank(d_in), || rank(d_out));
    Ok(mid - r_out - r_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_roundtrip() {
        for s in ["0", "-3", "5/7", "-12/5"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("4/6").unwrap(), q(2, 3));
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn formal_sum_cancels() {
        let mut s = FormalSum::term("a");
        s.add_int("a", -1);
        assert!(s.is_zero());
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = SparseMatrix::from_triplets(2, 3, &[(0, 0, qi(1)), (0, 1, qi(2)), (1, 0, qi(2)), (1, 1, qi(4))]).unwrap();
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let vm: BTreeMap<usize, Rational> =
                v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
            assert!(m.apply(&vm).is_empty());
        }
    }
}
