//! Generic dg-operad interface over FormalSums of canonical basis keys, the
//! external bracket with δ, rotational-law checks, the θ twist-gluing, and the
//! level-wise k[v] / k[u] extensions.

use crate::exactla::{qi, rank_of_sums, solve_in_span, FormalSum, Rational, SparseMatrix};
use num_traits::Zero;
use crate::graphops::{self, Graph, GraphSum};
use serde::Serialize;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("operad has no distinguished δ")]
    MissingDelta,
    #[error("operad has no rotation ρ")]
    MissingRho,
    #[error("rotational law fails: {0}")]
    NotRotational(String),
    #[error("not a mixed complex: {0}")]
    NotMixed(String),
}

/// Elements are FormalSums over canonical basis keys. Actions are right actions
/// on input labels: input j of `act(perm, a)` is input `perm[j-1]` of `a`.
pub trait Operad: Sync {
    type Key: Clone + Ord + Debug + Send + Sync;

    fn arity(&self, k: &Self::Key) -> usize;
    fn degree(&self, k: &Self::Key) -> i64;
    fn basis(&self, n: usize) -> Vec<Self::Key>;
    fn compose_basis(&self, a: &Self::Key, i: usize, b: &Self::Key) -> FormalSum<Self::Key>;
    fn act_basis(&self, perm: &[usize], a: &Self::Key) -> FormalSum<Self::Key>;

    fn d_basis(&self, _a: &Self::Key) -> FormalSum<Self::Key> {
        FormalSum::zero()
    }
    fn rho_basis(&self, _a: &Self::Key) -> Option<FormalSum<Self::Key>> {
        None
    }
    fn delta_element(&self) -> Option<FormalSum<Self::Key>> {
        None
    }

    fn compose(&self, a: &FormalSum<Self::Key>, i: usize, b: &FormalSum<Self::Key>) -> FormalSum<Self::Key> {
        crate::exactla::bilinear(a, b, |x, y| self.compose_basis(x, i, y))
    }
    fn d(&self, a: &FormalSum<Self::Key>) -> FormalSum<Self::Key> {
        a.map_linear(|k| self.d_basis(k))
    }
    fn rho(&self, a: &FormalSum<Self::Key>) -> Option<FormalSum<Self::Key>> {
        let mut out = FormalSum::zero();
        for (k, c) in a.iter() {
            out.add_scaled(&self.rho_basis(k)?, c);
        }
        Some(out)
    }
    fn act(&self, perm: &[usize], a: &FormalSum<Self::Key>) -> FormalSum<Self::Key> {
        a.map_linear(|k| self.act_basis(perm, k))
    }
    fn has_rho(&self) -> bool {
        false
    }
}

pub type El<O> = FormalSum<<O as Operad>::Key>;

/// Degree of a homogeneous sum (None for zero).
pub fn degree_of<O: Operad>(o: &O, a: &El<O>) -> Option<i64> {
    a.keys().next().map(|k| o.degree(k))
}

pub fn arity_of<O: Operad>(o: &O, a: &El<O>) -> Option<usize> {
    a.keys().next().map(|k| o.arity(k))
}

fn parity(n: i64) -> Rational {
    if n.rem_euclid(2) == 1 {
        qi(-1)
    } else {
        qi(1)
    }
}

/// Δ(a) = δ∘₁a − (−1)^{|a|} Σᵢ a∘ᵢδ, extended linearly over homogeneous pieces.
pub fn external_delta<O: Operad>(o: &O, a: &El<O>) -> Result<El<O>, OperadError> {
    let delta = o.delta_element().ok_or(OperadError::MissingDelta)?;
    Ok(a.map_linear(|k| {
        let x = FormalSum::term(k.clone());
        let mut out = o.compose(&delta, 1, &x);
        let s = parity(o.degree(k));
        for i in 1..=o.arity(k) {
            out.add_scaled(&o.compose(&x, i, &delta), &-s.clone());
        }
        out
    }))
}

/// The block permutation P with (a·σ)∘ᵢb = (a∘_{σ(i)}b)·P, for |b| of arity q.
pub fn block_perm(sigma: &[usize], i: usize, q: usize) -> Vec<usize> {
    let si = sigma[i - 1];
    let place = |k: usize| if k < si { k } else { k + q - 1 };
    let mut out = Vec::with_capacity(sigma.len() + q - 1);
    for j in 1..i {
        out.push(place(sigma[j - 1]));
    }
    for t in 0..q {
        out.push(si + t);
    }
    for j in i + 1..=sigma.len() {
        out.push(place(sigma[j - 1]));
    }
    out
}

/// The permutation id ∘ᵢ τ on p + q − 1 inputs.
pub fn inner_perm(p: usize, i: usize, tau: &[usize]) -> Vec<usize> {
    let q = tau.len();
    (1..=p + q - 1)
        .map(|j| if j < i || j >= i + q { j } else { i - 1 + tau[j - i] })
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..rest.len() {
            let x = rest.remove(k);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(k, x);
        }
    }
    let mut out = Vec::new();
    go(&mut vec![], &mut (1..=n).collect(), &mut out);
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Report {
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub millis: u128,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
    fn fail(&mut self, law: &str, witness: String) {
        self.violations.push(Violation { law: law.into(), witness });
    }
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["pass"] = serde_json::json!(self.pass());
        v
    }

    /// The report without wall-clock time, for byte-reproducible output.
    pub fn to_json_untimed(&self) -> serde_json::Value {
        let mut v = self.to_json();
        if let Some(o) = v.as_object_mut() {
            o.remove("millis");
        }
        v
    }
}

/// Both associativity shapes on all given triples.
pub fn check_associativity<O: Operad>(o: &O, elems: &[El<O>]) -> Report {
    let t0 = std::time::Instant::now();
    let mut rep = Report::default();
    for a in elems {
        let Some(p) = arity_of(o, a) else { continue };
        for b in elems {
            let Some(q) = arity_of(o, b) else { continue };
            let db = degree_of(o, b).unwrap_or(0);
            for c in elems {
                if arity_of(o, c).is_none() {
                    continue;
                }
                let dc = degree_of(o, c).unwrap_or(0);
                for i in 1..=p {
                    let ab = o.compose(a, i, b);
                    for j in 1..=q {
                        rep.checked += 1;
                        let lhs = o.compose(&ab, i + j - 1, c);
                        let rhs = o.compose(a, i, &o.compose(b, j, c));
                        if lhs != rhs {
                            rep.fail("sequential", format!("({a:?} ∘{i} {b:?}) ∘{} {c:?}", i + j - 1));
                        }
                    }
                    for j in i + 1..=p {
                        rep.checked += 1;
                        let lhs = o.compose(&ab, j + q - 1, c);
                        let rhs = o.compose(&o.compose(a, j, c), i, b).scaled(&parity(db * dc));
                        if lhs != rhs {
                            rep.fail("parallel", format!("{a:?} ∘{i} {b:?}, ∘{j} {c:?}"));
                        }
                    }
                }
            }
        }
    }
    rep.millis = t0.elapsed().as_millis();
    rep
}

/// Equivariance of ∘ᵢ in both slots for all permutations of both arguments.
pub fn check_equivariance<O: Operad>(o: &O, elems: &[El<O>]) -> Report {
    let mut rep = Report::default();
    for a in elems {
        let Some(p) = arity_of(o, a) else { continue };
        for b in elems {
            let Some(q) = arity_of(o, b) else { continue };
            for i in 1..=p {
                for s in permutations(p) {
                    rep.checked += 1;
                    let lhs = o.compose(&o.act(&s, a), i, b);
                    let rhs = o.act(&block_perm(&s, i, q), &o.compose(a, s[i - 1], b));
                    if lhs != rhs {
                        rep.fail("equivariance-left", format!("{a:?}·{s:?} ∘{i} {b:?}"));
                    }
                }
                for t in permutations(q) {
                    rep.checked += 1;
                    let lhs = o.compose(a, i, &o.act(&t, b));
                    let rhs = o.act(&inner_perm(p, i, &t), &o.compose(a, i, b));
                    if lhs != rhs {
                        rep.fail("equivariance-right", format!("{a:?} ∘{i} {b:?}·{t:?}"));
                    }
                }
            }
        }
    }
    rep
}

/// d² = 0 and the derivation law d(a∘ᵢb) = da∘ᵢb + (−1)^{|a|} a∘ᵢdb.
pub fn check_dg<O: Operad>(o: &O, elems: &[El<O>]) -> Report {
    let mut rep = Report::default();
    for a in elems {
        rep.checked += 1;
        if !o.d(&o.d(a)).is_zero() {
            rep.fail("d²", format!("{a:?}"));
        }
        let Some(p) = arity_of(o, a) else { continue };
        let da = degree_of(o, a).unwrap_or(0);
        for b in elems {
            for i in 1..=p {
                rep.checked += 1;
                let lhs = o.d(&o.compose(a, i, b));
                let rhs = o.compose(&o.d(a), i, b).plus(&o.compose(a, i, &o.d(b)).scaled(&parity(da)));
                if lhs != rhs {
                    rep.fail("derivation", format!("{a:?} ∘{i} {b:?}"));
                }
            }
        }
    }
    rep
}

/// ρ² = 0, dρ + ρd = 0, and ρ(a∘ᵢρ(b)) = ρ(a)∘ᵢρ(b) on all pairs of `elems`.
pub fn check_rotational<O, R>(o: &O, rho: R, elems: &[El<O>]) -> Report
where
    O: Operad,
    R: Fn(&El<O>) -> El<O> + Sync,
{
    let t0 = std::time::Instant::now();
    let mut rep = Report::default();
    for a in elems {
        rep.checked += 2;
        let ra = rho(a);
        if !rho(&ra).is_zero() {
            rep.fail("ρ²=0", format!("{a:?}"));
        }
        if !o.d(&ra).plus(&rho(&o.d(a))).is_zero() {
            rep.fail("dρ+ρd=0", format!("{a:?}"));
        }
    }
    for a in elems {
        let Some(p) = arity_of(o, a) else { continue };
        let ra = rho(a);
        for b in elems {
            let rb = rho(b);
            for i in 1..=p {
                rep.checked += 1;
                let lhs = rho(&o.compose(a, i, &rb));
                let rhs = o.compose(&ra, i, &rb);
                if lhs != rhs {
                    rep.fail("rotational law", format!("a = {a:?}, i = {i}, b = {b:?}"));
                }
            }
        }
    }
    rep.millis = t0.elapsed().as_millis();
    rep
}

/// θ(O): degrees shifted down by one, d_θ = −d, and a∘̃ᵢb = a∘ᵢρ(b).
pub struct Theta<'a, O: Operad> {
    pub base: &'a O,
}

impl<'a, O: Operad> Theta<'a, O> {
    pub fn new(base: &'a O) -> Result<Self, OperadError> {
        if !base.has_rho() {
            return Err(OperadError::MissingRho);
        }
        Ok(Theta { base })
    }

    /// Verifies the rotational law on the basis up to `arity` before building.
    pub fn checked(base: &'a O, arity: usize) -> Result<Self, OperadError> {
        let t = Theta::new(base)?;
        let elems: Vec<El<O>> = (1..=arity).flat_map(|n| base.basis(n)).map(FormalSum::term).collect();
        let rep = check_rotational(base, |x| base.rho(x).expect("ρ defined"), &elems);
        if let Some(v) = rep.violations.first() {
            return Err(OperadError::NotRotational(format!("{}: {}", v.law, v.witness)));
        }
        Ok(t)
    }

    /// θ⁻¹: θ(O) → O, a ↦ ρ(a).
    pub fn theta_inv(&self, a: &El<O>) -> El<O> {
        self.base.rho(a).expect("ρ defined")
    }
}

impl<'a, O: Operad> Operad for Theta<'a, O> {
    type Key = O::Key;
    fn arity(&self, k: &O::Key) -> usize {
        self.base.arity(k)
    }
    fn degree(&self, k: &O::Key) -> i64 {
        self.base.degree(k) - 1
    }
    fn basis(&self, n: usize) -> Vec<O::Key> {
        self.base.basis(n)
    }
    fn compose_basis(&self, a: &O::Key, i: usize, b: &O::Key) -> El<O> {
        let rb = self.base.rho_basis(b).expect("ρ defined");
        self.base.compose(&FormalSum::term(a.clone()), i, &rb)
    }
    fn act_basis(&self, perm: &[usize], a: &O::Key) -> El<O> {
        self.base.act_basis(perm, a)
    }
    fn d_basis(&self, a: &O::Key) -> El<O> {
        self.base.d_basis(a).neg()
    }
    fn rho_basis(&self, a: &O::Key) -> Option<El<O>> {
        self.base.rho_basis(a)
    }
    fn has_rho(&self) -> bool {
        true
    }
}

/// CCᶿ(O): keys (c, r) for c·v^r with r ≤ trunc. Differential c·v^r ↦ −dc·v^r + ρ(c)·v^{r−1};
/// compositions (p·v^r)∘̃ᵢ(q·v^s) = (p∘ᵢρ(q))·v^{r+s}, truncated.
pub struct CcTheta<'a, O: Operad> {
    pub base: &'a O,
    pub trunc: u32,
}

/// CC⁻(O): keys (c, r) for c·u^r with r ≤ trunc. Differential dc·u^r + Δc·u^{r+1};
/// compositions (a·u^r)∘ᵢ(b·u^s) = (a∘ᵢb)·u^{r+s}, truncated.
pub struct CcMinus<'a, O: Operad> {
    pub base: &'a O,
    pub trunc: u32,
}

fn tag<K: Ord + Clone>(s: &FormalSum<K>, r: u32) -> FormalSum<(K, u32)> {
    s.map_linear(|k| FormalSum::term((k.clone(), r)))
}

impl<'a, O: Operad> CcTheta<'a, O> {
    pub fn new(base: &'a O, trunc: u32) -> Result<Self, OperadError> {
        if !base.has_rho() {
            return Err(OperadError::NotRotational("no ρ".into()));
        }
        Ok(CcTheta { base, trunc })
    }
}

impl<'a, O: Operad> CcMinus<'a, O> {
    pub fn new(base: &'a O, trunc: u32) -> Result<Self, OperadError> {
        if !base.has_rho() {
            return Err(OperadError::NotMixed("no Δ".into()));
        }
        Ok(CcMinus { base, trunc })
    }
}

impl<'a, O: Operad> Operad for CcTheta<'a, O> {
    type Key = (O::Key, u32);
    fn arity(&self, k: &Self::Key) -> usize {
        self.base.arity(&k.0)
    }
    fn degree(&self, k: &Self::Key) -> i64 {
        self.base.degree(&k.0) - 1 + 2 * k.1 as i64
    }
    fn basis(&self, n: usize) -> Vec<Self::Key> {
        let b = self.base.basis(n);
        (0..=self.trunc).flat_map(|r| b.iter().map(move |k| (k.clone(), r))).collect()
    }
    fn compose_basis(&self, a: &Self::Key, i: usize, b: &Self::Key) -> FormalSum<Self::Key> {
        let r = a.1 + b.1;
        if r > self.trunc {
            return FormalSum::zero();
        }
        let rb = self.base.rho_basis(&b.0).expect("ρ defined");
        tag(&self.base.compose(&FormalSum::term(a.0.clone()), i, &rb), r)
    }
    fn act_basis(&self, perm: &[usize], a: &Self::Key) -> FormalSum<Self::Key> {
        tag(&self.base.act_basis(perm, &a.0), a.1)
    }
    fn d_basis(&self, a: &Self::Key) -> FormalSum<Self::Key> {
        let mut out = tag(&self.base.d_basis(&a.0), a.1).neg();
        if a.1 > 0 {
            out.add_assign(&tag(&self.base.rho_basis(&a.0).expect("ρ defined"), a.1 - 1));
        }
        out
    }
}

impl<'a, O: Operad> Operad for CcMinus<'a, O> {
    type Key = (O::Key, u32);
    fn arity(&self, k: &Self::Key) -> usize {
        self.base.arity(&k.0)
    }
    fn degree(&self, k: &Self::Key) -> i64 {
        self.base.degree(&k.0) + 2 * k.1 as i64
    }
    fn basis(&self, n: usize) -> Vec<Self::Key> {
        let b = self.base.basis(n);
        (0..=self.trunc).flat_map(|r| b.iter().map(move |k| (k.clone(), r))).collect()
    }
    fn compose_basis(&self, a: &Self::Key, i: usize, b: &Self::Key) -> FormalSum<Self::Key> {
        let r = a.1 + b.1;
        if r > self.trunc {
            return FormalSum::zero();
        }
        tag(&self.base.compose_basis(&a.0, i, &b.0), r)
    }
    fn act_basis(&self, perm: &[usize], a: &Self::Key) -> FormalSum<Self::Key> {
        tag(&self.base.act_basis(perm, &a.0), a.1)
    }
    fn d_basis(&self, a: &Self::Key) -> FormalSum<Self::Key> {
        let mut out = tag(&self.base.d_basis(&a.0), a.1);
        if a.1 < self.trunc {
            out.add_assign(&tag(&self.base.rho_basis(&a.0).expect("Δ defined"), a.1 + 1));
        }
        out
    }
}

/// CCᶿ(O) → (ker Δ, d): Σ cᵣvʳ ↦ Δ(c₀).
pub fn cc_theta_to_ker<O: Operad>(o: &O, c: &FormalSum<(O::Key, u32)>) -> El<O> {
    let c0 = c.filter(|k| k.1 == 0).map_linear(|k| FormalSum::term(k.0.clone()));
    o.rho(&c0).expect("ρ defined")
}

/// (ker Δ, d) → CC⁻(O): inclusion at u⁰.
pub fn ker_to_cc_minus<O: Operad>(a: &El<O>) -> FormalSum<(O::Key, u32)> {
    tag(a, 0)
}

/// Certifies a map φ: (O, d, R) → (target, d, {δ,−}) given on `elems`:
/// φ must commute with composition on all pairs and satisfy φ(R a) = {δ, φ(a)}.
pub fn w_identities_check<O, T, F>(o: &O, target: &T, phi: F, elems: &[El<O>]) -> Report
where
    O: Operad,
    T: Operad,
    F: Fn(&El<O>) -> El<T>,
{
    let mut rep = Report::default();
    let has_delta = target.delta_element().is_some();
    for a in elems {
        rep.checked += 1;
        let ra = o.rho(a).unwrap_or_default();
        let lhs = phi(&ra);
        let rhs = if has_delta {
            external_delta(target, &phi(a)).expect("δ present")
        } else {
            FormalSum::zero()
        };
        if lhs != rhs {
            rep.fail("φ(R a) = {δ, φ(a)}", format!("{a:?}"));
        }
        if phi(&o.d(a)) != target.d(&phi(a)) {
            rep.fail("chain map", format!("{a:?}"));
        }
        let Some(p) = arity_of(o, a) else { continue };
        for b in elems {
            for i in 1..=p {
                rep.checked += 1;
                if phi(&o.compose(a, i, b)) != target.compose(&phi(a), i, &phi(b)) {
                    rep.fail("operad map", format!("{a:?} ∘{i} {b:?}"));
                }
            }
        }
    }
    rep
}

/// Ger(n) realized inside Gra(n), generated by μ and b = Γ^{1,2} + Γ^{2,1}.
pub struct ConcreteGer;

impl ConcreteGer {
    pub fn gra() -> graphops::Gra {
        graphops::Gra { max_edges: usize::MAX }
    }

    /// The left-normed Lie word [..[[x₁, x₂], x₃]..] on `len` vertices.
    fn comb(len: usize) -> GraphSum {
        let gra = Self::gra();
        let mut acc = FormalSum::term(Graph::edgeless(1));
        for _ in 1..len {
            acc = gra.compose(&graphops::bracket(), 1, &acc);
        }
        acc
    }

    /// The explicit basis: products of Lie combs over set partitions, each block
    /// listed with its minimum first followed by a permutation of the rest.
    pub fn basis(n: usize) -> Vec<GraphSum> {
        let gra = Self::gra();
        let mut out = Vec::new();
        for part in set_partitions(n) {
            let mut choices: Vec<Vec<Vec<u8>>> = Vec::new();
            for block in &part {
                let rest = &block[1..];
                choices.push(
                    permutations(rest.len())
                        .into_iter()
                        .map(|p| {
                            let mut w = vec![block[0] as u8];
                            w.extend(p.iter().map(|&k| rest[k - 1] as u8));
                            w
                        })
                        .collect(),
                );
            }
            let mut idx = vec![0usize; choices.len()];
            loop {
                let words: Vec<&Vec<u8>> = idx.iter().enumerate().map(|(b, &k)| &choices[b][k]).collect();
                let mut prod = FormalSum::term(Graph::edgeless(words.len() as u8));
                let mut order: Vec<u8> = Vec::new();
                for (slot, w) in words.iter().enumerate().rev() {
                    let c = Self::comb(w.len());
                    prod = gra.compose(&prod, slot + 1, &c);
                    let mut tmp = (*w).clone();
                    tmp.extend(order);
                    order = tmp;
                }
                out.push(relabel_into(&prod, &order));
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        out
    }

    pub fn dim(n: usize) -> usize {
        rank_of_sums(&Self::basis(n))
    }

    pub fn dims_by_degree(n: usize) -> std::collections::BTreeMap<i64, usize> {
        let mut by: std::collections::BTreeMap<i64, Vec<GraphSum>> = Default::default();
        for b in Self::basis(n) {
            if let Some(g) = b.keys().next() {
                by.entry(g.degree()).or_default().push(b.clone());
            }
        }
        by.into_iter().map(|(d, v)| (d, rank_of_sums(&v))).collect()
    }
}

/// (Ger(n), 0, R) as a mixed complex in the coordinates of the explicit basis.
pub fn ger_mixed_complex(n: usize) -> crate::mixed::MixedComplex {
    let basis = crate::exactla::independent_subset(&ConcreteGer::basis(n));
    let degrees: Vec<i64> = basis.iter().map(|b| b.keys().next().expect("nonzero").degree()).collect();
    let mut delta = SparseMatrix::new(basis.len(), basis.len());
    for (c, b) in basis.iter().enumerate() {
        let r = graphops::gra_delta(b).expect("tadpole-free");
        let coords = solve_in_span(&basis, &r).expect("Ger is closed under R");
        for (row, v) in coords.into_iter().enumerate() {
            if !v.is_zero() {
                delta.add(row, c, v);
            }
        }
    }
    crate::mixed::from_delta(degrees, delta).expect("R² = 0 on Ger")
}

/// dim ker(R | Ger(n)) by exact rank.
pub fn grav_dim(n: usize) -> usize {
    let basis = ConcreteGer::basis(n);
    let imgs: Vec<GraphSum> = basis.iter().map(|b| graphops::gra_delta(b).expect("tadpole-free")).collect();
    rank_of_sums(&basis) - rank_of_sums(&imgs)
}

/// Vertex k of `x` becomes vertex labels[k-1].
pub fn relabel_into(x: &GraphSum, labels: &[u8]) -> GraphSum {
    let mut perm = vec![0usize; labels.len()];
    for (k, &l) in labels.iter().enumerate() {
        perm[l as usize - 1] = k + 1;
    }
    x.map_linear(|g| g.act(&perm))
}

/// Set partitions of {1..n}, blocks sorted by minimum.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for x in 1..=n {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_perm_identity() {
        assert_eq!(block_perm(&[1, 2, 3], 2, 2), vec![1, 2, 3, 4]);
        assert_eq!(inner_perm(3, 2, &[2, 1]), vec![1, 3, 2, 4]);
    }

    #[test]
    fn partitions_are_bell() {
        let counts: Vec<usize> = (1..=5).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15, 52]);
    }
}
