//! Truncated operadic twisting, the Graphs suboperad of Tw Gra, the
//! vKGraphs^σ subquotient, and twisting of differentials by Maurer–Cartan
//! elements.

use crate::exactla::{qi, rank_of_sums, FormalSum, Rational};
use crate::graphops::{bracket, Gra, Graph, GraphSum, Vtx};
use crate::operad::{permutations, ConcreteGer, El, Operad};
use crate::poly::{gerst_bracket, lie_bracket, MultiDiffOp, Polyvector};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Debug;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("the base operad has no shifted-Lie generator")]
    NoLieMap,
    #[error("not a Maurer–Cartan element; [π,π] + 2dπ = {0}")]
    NotMaurerCartan(String),
}

/// A base element with its last `internal` inputs filled by the MC element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TwKey<K> {
    pub key: K,
    pub internal: usize,
}

pub type TwEl<K> = FormalSum<TwKey<K>>;

/// Output of the truncated differential: terms with at most K internal slots,
/// and the terms that would need K + 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TwDiff<K: Ord + Clone> {
    pub interior: TwEl<K>,
    pub overflow: TwEl<K>,
}

/// Tw P truncated at K internal slots. Elements are coinvariants under the
/// permutations of internal slots, stored through a canonical representative.
pub struct TwistedOperadTrunc<'a, O: Operad> {
    pub base: &'a O,
    pub lie: El<O>,
    pub k_max: usize,
    lie_degree: i64,
}

pub fn tw_operad<O: Operad>(base: &O, lie: Option<El<O>>, k_max: usize) -> Result<TwistedOperadTrunc<'_, O>, TwistError> {
    let lie = lie.filter(|b| !b.is_zero()).ok_or(TwistError::NoLieMap)?;
    let (k, _) = lie.iter().next().expect("nonzero");
    if base.arity(k) != 2 {
        return Err(TwistError::NoLieMap);
    }
    let lie_degree = base.degree(k);
    Ok(TwistedOperadTrunc { base, lie, k_max, lie_degree })
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

impl<'a, O: Operad> TwistedOperadTrunc<'a, O> {
    /// Degree of an internal slot: the MC element has degree 1 − |b|.
    pub fn internal_degree(&self) -> i64 {
        1 - self.lie_degree
    }

    pub fn arity(&self, t: &TwKey<O::Key>) -> usize {
        self.base.arity(&t.key) - t.internal
    }

    pub fn degree(&self, t: &TwKey<O::Key>) -> i64 {
        self.base.degree(&t.key) + t.internal as i64 * self.internal_degree()
    }

    /// Canonical representative of `key` with its last `k` inputs internal;
    /// zero if an internal permutation reverses its sign.
    pub fn canonical(&self, key: &O::Key, k: usize) -> TwEl<O::Key> {
        let m = self.base.arity(key);
        let n = m - k;
        let odd = self.internal_degree().rem_euclid(2) == 1;
        let mut best: Option<(O::Key, Rational)> = None;
        let mut seen: Vec<(O::Key, Rational)> = Vec::new();
        for tau in permutations(k) {
            let full: Vec<usize> = (1..=n).chain(tau.iter().map(|&t| t + n)).collect();
            let y = self.base.act_basis(&full, key);
            let mut it = y.iter();
            let Some((k2, c)) = it.next() else { return FormalSum::zero() };
            assert!(it.next().is_none(), "internal permutations must act by signed monomials");
            let c = if odd { c * qi(perm_sign(&tau)) } else { c.clone() };
            if seen.iter().any(|(k3, c3)| k3 == k2 && *c3 != c) {
                return FormalSum::zero();
            }
            seen.push((k2.clone(), c.clone()));
            if best.as_ref().map_or(true, |(b, _)| k2 < b) {
                best = Some((k2.clone(), c));
            }
        }
        let (key, c) = best.expect("S_k is nonempty");
        // τ·x = c·best, so x = c⁻¹·best in the coinvariants
        FormalSum::single(TwKey { key, internal: k }, Rational::from_integer(1.into()) / c)
    }

    pub fn canon_sum(&self, s: &El<O>, k: usize) -> TwEl<O::Key> {
        s.map_linear(|key| self.canonical(key, k))
    }

    /// Base elements with no internal slots.
    pub fn embed(&self, s: &El<O>) -> TwEl<O::Key> {
        self.canon_sum(s, 0)
    }

    /// Canonical basis of the level with `k` internal slots in arity `n`.
    pub fn basis(&self, n: usize, k: usize) -> Vec<TwKey<O::Key>> {
        let mut out: Vec<TwKey<O::Key>> = self
            .base
            .basis(n + k)
            .iter()
            .flat_map(|key| self.canonical(key, k).keys().cloned().collect::<Vec<_>>())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// d x = d_P x + Σ_{i external} x ∘ᵢ b + ½ Σ_{i internal} x ∘ᵢ b − (−1)^{|x|} b ∘₁ x,
    /// where the second input of b always becomes the newest internal slot.
    pub fn d(&self, x: &TwEl<O::Key>) -> TwDiff<O::Key> {
        let mut interior = FormalSum::zero();
        let mut overflow = FormalSum::zero();
        let half = Rational::new(1.into(), 2.into());
        for (t, c) in x.iter() {
            let k = t.internal;
            let m = self.base.arity(&t.key);
            let n = m - k;
            interior.add_scaled(&self.canon_sum(&self.base.d_basis(&t.key), k), c);
            let mut raised: El<O> = FormalSum::zero();
            let single = FormalSum::term(t.key.clone());
            for i in 1..=m {
                let y = self.base.compose(&single, i, &self.lie);
                let perm: Vec<usize> = (1..=i).chain(i + 2..=m + 1).chain(std::iter::once(i + 1)).collect();
                let w = if i <= n { qi(1) } else { half.clone() };
                raised.add_scaled(&self.base.act(&perm, &y), &w);
            }
            let s = if self.degree(t).rem_euclid(2) == 1 { qi(1) } else { qi(-1) };
            raised.add_scaled(&self.base.compose(&self.lie, 1, &single), &s);
            let target = if k < self.k_max { &mut interior } else { &mut overflow };
            target.add_scaled(&self.canon_sum(&raised, k + 1), c);
        }
        TwDiff { interior, overflow }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TwSquareReport {
    pub arity: usize,
    pub k_max: usize,
    /// basis elements whose d² lies in the K-interior
    pub interior_checked: usize,
    pub violations: Vec<String>,
    /// basis elements whose d reaches past K; d² is not asserted for them
    pub boundary_elements: usize,
    pub overflow_terms: usize,
}

impl TwSquareReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// d² = 0 on every basis element at levels k ≤ K − 2 in arity `n`; elements at
/// higher levels are counted with their overflow.
pub fn check_tw_square<O: Operad>(tw: &TwistedOperadTrunc<'_, O>, n: usize) -> TwSquareReport {
    // (interior?, violation, overflow count) per basis element
    let per: Vec<(bool, Option<String>, usize)> = (0..=tw.k_max)
        .flat_map(|k| tw.basis(n, k).into_iter().map(move |t| (k, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, t)| {
            let dx = tw.d(&FormalSum::term(t.clone()));
            if k + 2 <= tw.k_max {
                let ddx = tw.d(&dx.interior);
                let bad = !ddx.interior.is_zero() || !ddx.overflow.is_zero();
                (true, bad.then(|| format!("{t:?}")), 0)
            } else {
                (false, None, dx.overflow.len() + tw.d(&dx.interior).overflow.len())
            }
        })
        .collect();
    let mut rep = TwSquareReport { arity: n, k_max: tw.k_max, ..Default::default() };
    for (interior, bad, over) in per {
        if interior {
            rep.interior_checked += 1;
        } else {
            rep.boundary_elements += 1;
        }
        rep.violations.extend(bad);
        rep.overflow_terms += over;
    }
    rep
}

// ---------- graphs

/// Tw Gra, truncated at `k_max` internal vertices of degree +2.
pub fn tw_gra(gra: &Gra, k_max: usize) -> TwistedOperadTrunc<'_, Gra> {
    tw_operad(gra, Some(bracket()), k_max).expect("b is a binary generator")
}

/// Type-I vertex labels of the connected component containing `v`.
fn component(g: &Graph, start: u8) -> Vec<u8> {
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for &(s, t) in &g.edges {
            let nb = match t {
                Vtx::I(k) if s == a => Some(k),
                Vtx::I(k) if k == a => Some(s),
                _ => None,
            };
            if let Some(b) = nb {
                if !seen.contains(&b) {
                    seen.push(b);
                    stack.push(b);
                }
            }
        }
    }
    seen
}

/// Membership in Graphs: internal vertices have valence ≥ 3 and every
/// connected component contains an external vertex.
pub fn is_graphs(t: &TwKey<Graph>) -> bool {
    let g = &t.key;
    let n = g.m as usize - t.internal;
    (n as u8 + 1..=g.m).all(|v| {
        let (i, o) = g.valence(v);
        i + o >= 3 && component(g, v).iter().any(|&w| w as usize <= n)
    })
}

pub fn graphs_filter(x: &TwEl<Graph>) -> TwEl<Graph> {
    x.filter(is_graphs)
}

/// Replaces every directed edge by the sum of its two orientations.
pub fn undirected(x: &GraphSum) -> GraphSum {
    x.map_linear(|g| {
        let mut acc = FormalSum::term(Graph { edges: vec![], ..g.clone() });
        for &(s, t) in &g.edges {
            let Vtx::I(k) = t else { panic!("type-II endpoints have no reversal") };
            acc = acc.map_linear(|h| {
                let mut out = FormalSum::zero();
                for e in [(s, Vtx::I(k)), (k, Vtx::I(s))] {
                    let mut edges = h.edges.clone();
                    edges.push(e);
                    if let Some((h2, sgn)) = Graph::canonical(h.m, h.n, h.internal, edges, h.v.clone()) {
                        out.add_int(h2, sgn);
                    }
                }
                out
            });
        }
        acc
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GerGraphsArity {
    pub n: usize,
    pub images: usize,
    pub cycles: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GerGraphsReport {
    pub arities: Vec<GerGraphsArity>,
    /// Δ(image of μ) = image of b in Gra(2).
    pub delta_compatible: bool,
}

impl GerGraphsReport {
    pub fn pass(&self) -> bool {
        self.delta_compatible && self.arities.iter().all(|a| a.cycles == a.images && a.rank == a.images)
    }
}

/// Sends the Ger(n) basis (μ ↦ edgeless, b ↦ edge) into Tw Gra for n ≤ `max_n`
/// and checks that the images are cycles and independent.
pub fn ger_to_graphs_check(max_n: usize) -> GerGraphsReport {
    let gra = ConcreteGer::gra();
    let tw = tw_gra(&gra, 1);
    let arities = (2..=max_n)
        .map(|n| {
            let imgs: Vec<TwEl<Graph>> = ConcreteGer::basis(n).iter().map(|x| tw.embed(x)).collect();
            let cycles = imgs
                .iter()
                .filter(|x| {
                    let dx = tw.d(x);
                    dx.interior.is_zero() && dx.overflow.is_zero()
                })
                .count();
            GerGraphsArity { n, images: imgs.len(), cycles, rank: rank_of_sums(&imgs) }
        })
        .collect();
    let delta_compatible = crate::graphops::gra_delta(&crate::graphops::mu()).map(|d| d == bracket()).unwrap_or(false);
    GerGraphsReport { arities, delta_compatible }
}

// ---------- vKGraphs^σ

/// Kills graphs with a tadpole at, or a positive v-power on, an internal type-I vertex.
pub fn vkgraphs_quotient(x: &GraphSum) -> GraphSum {
    x.filter(|g| {
        (g.external() + 1..=g.m).all(|k| g.v[k as usize - 1] == 0 && !g.edges.contains(&(k, Vtx::I(k))))
    })
}

fn vkgraphs_admissible(g: &Graph) -> bool {
    if g.external() == 0 {
        return false;
    }
    (g.external() + 1..=g.m).all(|k| {
        let (i, o) = g.valence(k);
        !(i + o == 0 || (i + o == 1 && o == 1) || (i == 1 && o == 1))
    })
}

/// The subquotient of twisted vKGra: quotient first, then keep graphs with at
/// least one external type-I vertex and no internal type-I vertex that is
/// 0-valent, 1-valent with an outgoing edge, or 2-valent with one edge each way.
pub fn vkgraphs_sigma_filter(x: &GraphSum) -> GraphSum {
    vkgraphs_quotient(x).filter(vkgraphs_admissible)
}

// ---------- Maurer–Cartan twisting

/// A dg shifted-Lie algebra realized in the artifact.
pub trait ShiftedLie {
    type El: Clone + PartialEq + Debug;
    fn bracket(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn d(&self, a: &Self::El) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn scale(&self, a: &Self::El, c: &Rational) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
}

/// Polyvector fields on ℝᵈ with zero differential and the shifted Schouten bracket.
pub struct TPolyLie {
    pub d: usize,
}

impl ShiftedLie for TPolyLie {
    type El = Polyvector;
    fn bracket(&self, a: &Polyvector, b: &Polyvector) -> Polyvector {
        if a.is_zero() || b.is_zero() {
            return Polyvector::zero(self.d);
        }
        lie_bracket(a, b).expect("same dimension")
    }
    fn d(&self, _a: &Polyvector) -> Polyvector {
        Polyvector::zero(self.d)
    }
    fn add(&self, a: &Polyvector, b: &Polyvector) -> Polyvector {
        a.plus(b)
    }
    fn scale(&self, a: &Polyvector, c: &Rational) -> Polyvector {
        a.scaled(c)
    }
    fn is_zero(&self, a: &Polyvector) -> bool {
        a.is_zero()
    }
}

/// Multidifferential operators with zero differential and the Gerstenhaber bracket.
pub struct DPolyLie {
    pub d: usize,
}

impl ShiftedLie for DPolyLie {
    type El = MultiDiffOp;
    fn bracket(&self, a: &MultiDiffOp, b: &MultiDiffOp) -> MultiDiffOp {
        if a.is_zero() || b.is_zero() {
            return MultiDiffOp::zero(self.d, 0);
        }
        gerst_bracket(a, b).expect("same dimension")
    }
    fn d(&self, _a: &MultiDiffOp) -> MultiDiffOp {
        MultiDiffOp::zero(self.d, 0)
    }
    fn add(&self, a: &MultiDiffOp, b: &MultiDiffOp) -> MultiDiffOp {
        match (a.is_zero(), b.is_zero()) {
            (true, _) => b.clone(),
            (_, true) => a.clone(),
            _ => a.plus(b),
        }
    }
    fn scale(&self, a: &MultiDiffOp, c: &Rational) -> MultiDiffOp {
        a.scaled(c)
    }
    fn is_zero(&self, a: &MultiDiffOp) -> bool {
        a.is_zero()
    }
}

/// A verified solution of dπ + ½[π,π] = 0.
#[derive(Clone, Debug)]
pub struct McElement<E> {
    pub value: E,
}

impl<E: Clone + PartialEq + Debug> McElement<E> {
    pub fn new<H: ShiftedLie<El = E>>(host: &H, value: E) -> Result<Self, TwistError> {
        let residual = host.add(&host.bracket(&value, &value), &host.scale(&host.d(&value), &qi(2)));
        if host.is_zero(&residual) {
            Ok(McElement { value })
        } else {
            Err(TwistError::NotMaurerCartan(format!("{residual:?}")))
        }
    }
}

/// d + [π, −] for a Maurer–Cartan element π.
pub struct TwistedDifferential<'a, H: ShiftedLie> {
    pub host: &'a H,
    pub pi: McElement<H::El>,
}

impl<H: ShiftedLie> TwistedDifferential<'_, H> {
    pub fn apply(&self, x: &H::El) -> H::El {
        self.host.add(&self.host.d(x), &self.host.bracket(&self.pi.value, x))
    }
}

pub fn mc_twist_differential<H: ShiftedLie>(host: &H, pi: H::El) -> Result<TwistedDifferential<'_, H>, TwistError> {
    Ok(TwistedDifferential { host, pi: McElement::new(host, pi)? })
}

/// Twisted graph sums in the graph JSON schema, internal vertices listed under "internal".
pub fn tw_graphs_to_json(x: &TwEl<Graph>) -> serde_json::Value {
    let flat: GraphSum = x.map_linear(|t| FormalSum::term(Graph { internal: t.internal as u8, ..t.key.clone() }));
    crate::graphops::sum_to_json(&flat)
}
