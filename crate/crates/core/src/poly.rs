//! Multivector fields with polynomial coefficients on ℝᵈ (even x, odd ξ,
//! central u of degree 2), multidifferential operators, and the graph actions.

use crate::exactla::{fmt_q, parse_q, qi, solve_in_span, FormalSum, Rational};
use crate::graphops::{vkgra_sigma, Graph, GraphSum, Vtx};
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

/// Monomial x^a ξ^A with A a bitmask, ξ's ordered by index.
pub type Mono = (Vec<u8>, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyvector {
    pub d: usize,
    pub u: u32,
    pub terms: FormalSum<Mono>,
}

fn sign_of(n: u32) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of ξ^A ξ^B = ± ξ^{A∪B}, or None when they share a variable.
fn wedge_sign(a: u32, b: u32) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for q in 0..32 {
        if b >> q & 1 == 1 {
            inversions += (a >> (q + 1)).count_ones();
        }
    }
    Some(sign_of(inversions))
}

fn add_exp(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// ∂^K x^β = (β)_K x^{β−K}, as (coefficient, exponent) or None if zero.
fn falling(beta: &[u8], k: &[u8]) -> Option<(Rational, Vec<u8>)> {
    let mut c = 1i64;
    let mut out = Vec::with_capacity(beta.len());
    for (&b, &kk) in beta.iter().zip(k) {
        if kk > b {
            return None;
        }
        for t in 0..kk {
            c *= (b - t) as i64;
        }
        out.push(b - kk);
    }
    Some((qi(c), out))
}

fn factorial(n: u8) -> i64 {
    (1..=n as i64).product()
}

/// All ways to split multi-index `i` into `parts` multi-indices, with multinomial weights.
pub fn leibniz_splits(i: &[u8], parts: usize) -> Vec<(i64, Vec<Vec<u8>>)> {
    let mut out: Vec<(i64, Vec<Vec<u8>>)> = vec![(1, vec![vec![0; i.len()]; parts])];
    for (l, &a) in i.iter().enumerate() {
        let mut next = Vec::new();
        for (c, split) in &out {
            for comp in crate::graphops::weak_compositions(a, parts) {
                let w = factorial(a) / comp.iter().map(|&x| factorial(x)).product::<i64>();
                let mut s = split.clone();
                for (p, &x) in comp.iter().enumerate() {
                    s[p][l] = x;
                }
                next.push((c * w, s));
            }
        }
        out = next;
    }
    out
}

impl Polyvector {
    pub fn zero(d: usize) -> Self {
        Polyvector { d, u: 0, terms: FormalSum::zero() }
    }

    pub fn monomial(d: usize, c: Rational, x: Vec<u8>, xi: &[usize]) -> Self {
        assert_eq!(x.len(), d);
        let mut mask = 0u32;
        let mut sign = 1;
        for &l in xi {
            let s = wedge_sign(mask, 1 << l);
            match s {
                Some(s) => {
                    sign *= s;
                    mask |= 1 << l;
                }
                None => return Polyvector::zero(d),
            }
        }
        Polyvector { d, u: 0, terms: FormalSum::single((x, mask), c * qi(sign)) }
    }

    /// The function x^a.
    pub fn function(d: usize, c: Rational, x: Vec<u8>) -> Self {
        Polyvector::monomial(d, c, x, &[])
    }

    pub fn with_u(mut self, u: u32) -> Self {
        self.u = u;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// ξ-degree of a homogeneous element (0 for zero).
    pub fn xi_degree(&self) -> u32 {
        self.terms.keys().next().map(|m| m.1.count_ones()).unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.xi_degree() as i64 + 2 * self.u as i64
    }

    pub fn plus(&self, o: &Polyvector) -> Polyvector {
        Polyvector { d: self.d, u: self.u, terms: self.terms.plus(&o.terms) }
    }

    pub fn minus(&self, o: &Polyvector) -> Polyvector {
        Polyvector { d: self.d, u: self.u, terms: self.terms.minus(&o.terms) }
    }

    pub fn scaled(&self, c: &Rational) -> Polyvector {
        Polyvector { d: self.d, u: self.u, terms: self.terms.scaled(c) }
    }

    /// Graded-commutative product; u-powers add.
    pub fn wedge(&self, o: &Polyvector) -> Polyvector {
        let terms = crate::exactla::bilinear(&self.terms, &o.terms, |a, b| match wedge_sign(a.1, b.1) {
            Some(s) => FormalSum::single((add_exp(&a.0, &b.0), a.1 | b.1), qi(s)),
            None => FormalSum::zero(),
        });
        Polyvector { d: self.d, u: self.u + o.u, terms }
    }

    pub fn dx(&self, l: usize) -> Polyvector {
        let terms = self.terms.map_linear(|(x, xi)| {
            if x[l] == 0 {
                return FormalSum::zero();
            }
            let mut y = x.clone();
            y[l] -= 1;
            FormalSum::single((y, *xi), qi(x[l] as i64))
        });
        Polyvector { d: self.d, u: self.u, terms }
    }

    /// Left derivative ∂/∂ξ_l.
    pub fn dxi_left(&self, l: usize) -> Polyvector {
        let terms = self.terms.map_linear(|(x, xi)| {
            if xi >> l & 1 == 0 {
                return FormalSum::zero();
            }
            let before = (xi & ((1 << l) - 1)).count_ones();
            FormalSum::single((x.clone(), xi & !(1 << l)), qi(sign_of(before)))
        });
        Polyvector { d: self.d, u: self.u, terms }
    }

    /// Right derivative X ∂⃖/∂ξ_l.
    pub fn dxi_right(&self, l: usize) -> Polyvector {
        let terms = self.terms.map_linear(|(x, xi)| {
            if xi >> l & 1 == 0 {
                return FormalSum::zero();
            }
            let after = (xi >> (l + 1)).count_ones();
            FormalSum::single((x.clone(), xi & !(1 << l)), qi(sign_of(after)))
        });
        Polyvector { d: self.d, u: self.u, terms }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((x, xi), c)| {
                let xs: Vec<u8> = (0..self.d).map(|l| (xi >> l & 1) as u8).collect();
                json!({"c": fmt_q(c), "x": x, "xi": xs})
            })
            .collect();
        json!({"d": self.d, "u": self.u, "terms": terms})
    }

    pub fn from_json(j: &Value) -> Result<Polyvector, PolyError> {
        let bad = |s: &str| PolyError::Parse(s.to_string());
        let d = j["d"].as_u64().ok_or_else(|| bad("d"))? as usize;
        let u = j.get("u").and_then(Value::as_u64).unwrap_or(0) as u32;
        let mut out = Polyvector::zero(d).with_u(u);
        for t in j["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let c = parse_q(t["c"].as_str().ok_or_else(|| bad("c"))?).map_err(|_| bad("c"))?;
            let x: Vec<u8> = serde_json::from_value(t["x"].clone()).map_err(|_| bad("x"))?;
            let xi: Vec<u8> = serde_json::from_value(t["xi"].clone()).map_err(|_| bad("xi"))?;
            if x.len() != d || xi.len() != d || xi.iter().any(|&b| b > 1) {
                return Err(bad("exponent vector length"));
            }
            let mask = xi.iter().enumerate().fold(0u32, |m, (l, &b)| m | (b as u32) << l);
            out.terms.add_term((x, mask), c);
        }
        Ok(out)
    }
}

/// [X, Y] = Σ_l (∂⃗_{ξ_l} X)(∂_{x_l} Y) + (−1)^{|X|} (∂_{x_l} X)(∂⃗_{ξ_l} Y), with |X| the
/// ξ-degree; this is the operation the two-edge graph ₁→₂ + ₂→₁ acts by. u-powers add.
pub fn schouten(x: &Polyvector, y: &Polyvector) -> Result<Polyvector, PolyError> {
    if x.d != y.d {
        return Err(PolyError::DimensionMismatch(x.d, y.d));
    }
    let mut out = Polyvector::zero(x.d);
    for ((e, mask), c) in x.terms.iter() {
        let xt = Polyvector { d: x.d, u: x.u, terms: FormalSum::single((e.clone(), *mask), c.clone()) };
        let s = qi(sign_of(mask.count_ones()));
        for l in 0..x.d {
            out = out.plus(&xt.dxi_left(l).wedge(&y.dx(l)));
            out = out.plus(&xt.dx(l).wedge(&y.dxi_left(l)).scaled(&s));
        }
    }
    out.u = x.u + y.u;
    Ok(out)
}

/// The shifted Lie bracket (−1)^{|X|+1}[X, Y] on ξ-homogeneous X.
pub fn lie_bracket(x: &Polyvector, y: &Polyvector) -> Result<Polyvector, PolyError> {
    let s = qi(-sign_of(x.xi_degree()));
    Ok(schouten(x, y)?.scaled(&s))
}

/// Div X = Σ_l ∂²X/∂x_l∂ξ_l.
pub fn divergence(x: &Polyvector) -> Polyvector {
    let mut out = Polyvector::zero(x.d).with_u(x.u);
    for l in 0..x.d {
        out = out.plus(&x.dxi_left(l).dx(l));
    }
    out.u = x.u;
    out
}

pub fn random_polyvector<R: Rng>(rng: &mut R, d: usize, max_xdeg: u8, xi_deg: u32, terms: usize) -> Polyvector {
    let mut out = Polyvector::zero(d);
    let masks: Vec<u32> = (0..1u32 << d).filter(|m| m.count_ones() == xi_deg).collect();
    if masks.is_empty() {
        return out;
    }
    for _ in 0..terms {
        let mut x = vec![0u8; d];
        let total = rng.gen_range(0..=max_xdeg);
        for _ in 0..total {
            x[rng.gen_range(0..d)] += 1;
        }
        let m = masks[rng.gen_range(0..masks.len())];
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            out.terms.add_term((x, m), qi(c));
        }
    }
    out
}

// ---------- multidifferential operators

/// Key: coefficient exponent and one derivative multi-index per slot.
pub type OpKey = (Vec<u8>, Vec<Vec<u8>>);

/// Σ f(x) ∂_{I₁}⊗…⊗∂_{I_n}. Empty multi-indices are allowed, so the product μ
/// and cyclic rotations (which put bare functions into a slot) are representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiDiffOp {
    pub d: usize,
    pub n: usize,
    pub terms: FormalSum<OpKey>,
}

pub type Poly = FormalSum<Vec<u8>>;

impl MultiDiffOp {
    pub fn zero(d: usize, n: usize) -> Self {
        MultiDiffOp { d, n, terms: FormalSum::zero() }
    }

    pub fn term(d: usize, c: Rational, x: Vec<u8>, idx: Vec<Vec<u8>>) -> Self {
        let n = idx.len();
        MultiDiffOp { d, n, terms: FormalSum::single((x, idx), c) }
    }

    /// μ(f, g) = fg.
    pub fn mu(d: usize) -> Self {
        MultiDiffOp::term(d, qi(1), vec![0; d], vec![vec![0; d]; 2])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn plus(&self, o: &MultiDiffOp) -> MultiDiffOp {
        MultiDiffOp { d: self.d, n: self.n, terms: self.terms.plus(&o.terms) }
    }

    pub fn minus(&self, o: &MultiDiffOp) -> MultiDiffOp {
        MultiDiffOp { d: self.d, n: self.n, terms: self.terms.minus(&o.terms) }
    }

    pub fn scaled(&self, c: &Rational) -> MultiDiffOp {
        MultiDiffOp { d: self.d, n: self.n, terms: self.terms.scaled(c) }
    }

    /// True when every slot carries a nonempty multi-index in every term.
    pub fn vanishes_on_constants(&self) -> bool {
        self.terms.keys().all(|(_, idx)| idx.iter().all(|i| i.iter().any(|&a| a > 0)))
    }

    /// Evaluates on polynomial arguments.
    pub fn eval(&self, fs: &[Poly]) -> Result<Poly, PolyError> {
        if fs.len() != self.n {
            return Err(PolyError::ArityMismatch(format!("{} arguments for arity {}", fs.len(), self.n)));
        }
        let mut out = Poly::zero();
        for ((x, idx), c) in self.terms.iter() {
            let mut acc = Poly::single(x.clone(), c.clone());
            for (f, i) in fs.iter().zip(idx) {
                let df = f.map_linear(|b| match falling(b, i) {
                    Some((k, e)) => Poly::single(e, k),
                    None => Poly::zero(),
                });
                acc = crate::exactla::bilinear(&acc, &df, |a, b| Poly::term(add_exp(a, b)));
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((x, idx), c)| json!({"c": fmt_q(c), "x": x, "I": idx}))
            .collect();
        json!({"d": self.d, "n": self.n, "terms": terms})
    }

    pub fn from_json(j: &Value) -> Result<MultiDiffOp, PolyError> {
        let bad = |s: &str| PolyError::Parse(s.to_string());
        let d = j["d"].as_u64().ok_or_else(|| bad("d"))? as usize;
        let n = j["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
        let mut out = MultiDiffOp::zero(d, n);
        for t in j["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let c = parse_q(t["c"].as_str().ok_or_else(|| bad("c"))?).map_err(|_| bad("c"))?;
            let x: Vec<u8> = serde_json::from_value(t["x"].clone()).map_err(|_| bad("x"))?;
            let idx: Vec<Vec<u8>> = serde_json::from_value(t["I"].clone()).map_err(|_| bad("I"))?;
            if x.len() != d || idx.len() != n || idx.iter().any(|i| i.len() != d) {
                return Err(bad("index lengths"));
            }
            out.terms.add_term((x, idx), c);
        }
        Ok(out)
    }
}

pub fn random_op<R: Rng>(rng: &mut R, d: usize, n: usize, max_coef: u8, max_ord: u8, terms: usize) -> MultiDiffOp {
    let mut out = MultiDiffOp::zero(d, n);
    let rand_idx = |rng: &mut R, lo: u8, hi: u8| {
        let mut v = vec![0u8; d];
        for _ in 0..rng.gen_range(lo..=hi) {
            v[rng.gen_range(0..d)] += 1;
        }
        v
    };
    for _ in 0..terms {
        let x = rand_idx(rng, 0, max_coef);
        let idx = (0..n).map(|_| rand_idx(rng, 1, max_ord.max(1))).collect();
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            out.terms.add_term((x, idx), qi(c));
        }
    }
    out
}

/// Endomorphism-operad insertion D ∘ᵢ D′ (no signs: functions are even).
pub fn gerst_compose(dd: &MultiDiffOp, i: usize, dp: &MultiDiffOp) -> Result<MultiDiffOp, PolyError> {
    if dd.d != dp.d {
        return Err(PolyError::DimensionMismatch(dd.d, dp.d));
    }
    if i < 1 || i > dd.n {
        return Err(PolyError::ArityMismatch(format!("slot {i} of arity {}", dd.n)));
    }
    let np = dp.n;
    let mut out = MultiDiffOp::zero(dd.d, dd.n + np - 1);
    for ((a, ia), ca) in dd.terms.iter() {
        for ((b, ib), cb) in dp.terms.iter() {
            for (w, split) in leibniz_splits(&ia[i - 1], np + 1) {
                let Some((k, b2)) = falling(b, &split[0]) else { continue };
                let mut idx: Vec<Vec<u8>> = ia[..i - 1].to_vec();
                for (t, j) in ib.iter().enumerate() {
                    idx.push(add_exp(j, &split[t + 1]));
                }
                idx.extend(ia[i..].iter().cloned());
                out.terms.add_term((add_exp(a, &b2), idx), ca * cb * k * qi(w));
            }
        }
    }
    Ok(out)
}

/// D ∘ D′ = Σᵢ (−1)^{(i−1)(n′−1)} D ∘ᵢ D′.
pub fn total_compose(dd: &MultiDiffOp, dp: &MultiDiffOp) -> Result<MultiDiffOp, PolyError> {
    let mut out = MultiDiffOp::zero(dd.d, (dd.n + dp.n).saturating_sub(1));
    for i in 1..=dd.n {
        let s = sign_of(((i - 1) * (dp.n + 1)) as u32);
        out = out.plus(&gerst_compose(dd, i, dp)?.scaled(&qi(s)));
    }
    Ok(out)
}

/// [D, D′] = D∘D′ − (−1)^{(n−1)(n′−1)} D′∘D.
pub fn gerst_bracket(dd: &MultiDiffOp, dp: &MultiDiffOp) -> Result<MultiDiffOp, PolyError> {
    let s = sign_of(((dd.n + 1) * (dp.n + 1)) as u32);
    Ok(total_compose(dd, dp)?.minus(&total_compose(dp, dd)?.scaled(&qi(s))))
}

pub fn hochschild_d(dd: &MultiDiffOp) -> MultiDiffOp {
    gerst_bracket(&MultiDiffOp::mu(dd.d), dd).expect("same dimension")
}

/// The generator of ℤ_{n+1}: ∫ g₀·σD(g₁,…,g_n) = ∫ g_n·D(g₀,…,g_{n−1}), with all
/// derivatives moved off g₀ by integration by parts.
pub fn cyclic_sigma_d(dd: &MultiDiffOp) -> MultiDiffOp {
    let n = dd.n;
    if n == 0 {
        return dd.clone();
    }
    let mut out = MultiDiffOp::zero(dd.d, n);
    for ((a, idx), c) in dd.terms.iter() {
        let i1 = &idx[0];
        let s = sign_of(i1.iter().map(|&k| k as u32).sum());
        // parts: 0 → coefficient, 1..n−1 → g₁..g_{n−1}, n → g_n
        for (w, split) in leibniz_splits(i1, n + 1) {
            let Some((k, a2)) = falling(a, &split[0]) else { continue };
            let mut new_idx: Vec<Vec<u8>> = (1..n).map(|t| add_exp(&idx[t], &split[t])).collect();
            new_idx.push(split[n].clone());
            out.terms.add_term((a2, new_idx), c * k * qi(s * w));
        }
    }
    out
}

pub fn cyclic_sigma_pow(dd: &MultiDiffOp, k: usize) -> MultiDiffOp {
    (0..k).fold(dd.clone(), |acc, _| cyclic_sigma_d(&acc))
}

/// σ twisted by (−1)ⁿ: the ℤ_{n+1} action on the suspension Σⁿ D_poly(n), under which
/// the invariants are closed for the Gerstenhaber bracket.
pub fn cyclic_sigma_suspended(dd: &MultiDiffOp) -> MultiDiffOp {
    let s = cyclic_sigma_d(dd);
    if dd.n % 2 == 1 {
        s.scaled(&qi(-1))
    } else {
        s
    }
}

/// Average over the suspended ℤ_{n+1} action.
pub fn cyclic_project(dd: &MultiDiffOp) -> MultiDiffOp {
    let mut acc = MultiDiffOp::zero(dd.d, dd.n);
    let mut y = dd.clone();
    for _ in 0..=dd.n {
        acc = acc.plus(&y);
        y = cyclic_sigma_suspended(&y);
    }
    acc.scaled(&Rational::new(1.into(), ((dd.n + 1) as i64).into()))
}

pub fn is_cyclic_invariant(dd: &MultiDiffOp) -> bool {
    cyclic_sigma_suspended(dd) == *dd
}

/// Closure checks for D_poly^σ on projected samples: Gerstenhaber bracket and d_Hoch.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct SigmaClosedReport {
    pub checked: usize,
    pub bracket_failures: usize,
    pub dhoch_failures: usize,
}

impl SigmaClosedReport {
    pub fn pass(&self) -> bool {
        self.bracket_failures == 0 && self.dhoch_failures == 0
    }
}

pub fn check_dpoly_sigma_closed(samples: &[MultiDiffOp]) -> SigmaClosedReport {
    let mut rep = SigmaClosedReport::default();
    let inv: Vec<MultiDiffOp> = samples.iter().map(cyclic_project).collect();
    for a in &inv {
        rep.checked += 1;
        if !is_cyclic_invariant(&hochschild_d(a)) {
            rep.dhoch_failures += 1;
        }
        for b in &inv {
            rep.checked += 1;
            let br = gerst_bracket(a, b).expect("same dimension");
            if !is_cyclic_invariant(&br) {
                rep.bracket_failures += 1;
            }
        }
    }
    rep
}

/// hkr(X)(f₁,…,f_k) = (1/k!) Σ_τ sgn(τ) ⟨X, df_{τ(1)},…,df_{τ(k)}⟩ with
/// ⟨ξ_{i₁}…ξ_{i_k}, df₁,…,df_k⟩ = ∂_{i₁}f₁⋯∂_{i_k}f_k.
pub fn hkr(x: &Polyvector) -> MultiDiffOp {
    let k = x.xi_degree() as usize;
    let mut out = MultiDiffOp::zero(x.d, k);
    let perms = crate::operad::permutations(k);
    let kfact = factorial(k as u8);
    for ((a, mask), c) in x.terms.iter() {
        let vars: Vec<usize> = (0..x.d).filter(|l| mask >> l & 1 == 1).collect();
        for p in &perms {
            // slot τ(j) receives ∂_{vars[j]}
            let mut idx = vec![vec![0u8; x.d]; k];
            for (j, &t) in p.iter().enumerate() {
                idx[t - 1][vars[j]] += 1;
            }
            let sgn = perm_parity(p);
            out.terms.add_term((a.clone(), idx), c * qi(sgn) / qi(kfact));
        }
    }
    out
}

fn perm_parity(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    sign_of(inv)
}

// ---------- graph actions

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct TensorKey {
    xs: Vec<Mono>,
    slots: Vec<Vec<u8>>,
}

/// Applies the edge operators of `g` (last edge first) to X₁⊗…⊗X_m⊗f₁⊗…⊗f_n.
fn apply_edges(g: &Graph, args: &[Polyvector], d: usize) -> FormalSum<TensorKey> {
    let mut state: FormalSum<TensorKey> = FormalSum::term(TensorKey { xs: vec![], slots: vec![vec![0; d]; g.n as usize] });
    for x in args {
        state = crate::exactla::bilinear(&state, &x.terms, |t, m| {
            let mut t2 = t.clone();
            t2.xs.push(m.clone());
            FormalSum::term(t2)
        });
    }
    for &(s, t) in g.edges.iter().rev() {
        let i = s as usize - 1;
        state = state.map_linear(|key| {
            let mut out = FormalSum::zero();
            let before: u32 = key.xs[..i].iter().map(|m| m.1.count_ones()).sum();
            for l in 0..d {
                let xi = key.xs[i].1;
                if xi >> l & 1 == 0 {
                    continue;
                }
                let mut sign = sign_of(before + (xi & ((1 << l) - 1)).count_ones());
                let mut k2 = key.clone();
                k2.xs[i].1 &= !(1 << l);
                match t {
                    Vtx::I(j) => {
                        let e = &mut k2.xs[j as usize - 1].0[l];
                        if *e == 0 {
                            continue;
                        }
                        sign *= *e as i64;
                        *e -= 1;
                    }
                    Vtx::II(j) => k2.slots[j as usize - 1][l] += 1,
                }
                out.add_int(k2, sign);
            }
            out
        });
    }
    state
}

/// Γ(X₁,…,X_k): edge operators Σ_l ∂/∂x_l^{(j)} ∂/∂ξ_l^{(i)} applied to X₁⊗…⊗X_k, then multiplied.
pub fn gra_act(g: &GraphSum, args: &[Polyvector]) -> Result<Polyvector, PolyError> {
    let d = args.first().map(|x| x.d).ok_or_else(|| PolyError::ArityMismatch("no arguments".into()))?;
    let mut out = Polyvector::zero(d);
    for (gr, c) in g.iter() {
        if gr.m as usize != args.len() || gr.n != 0 {
            return Err(PolyError::ArityMismatch(format!("graph on {} vertices, {} arguments", gr.m, args.len())));
        }
        if let Some(x) = args.iter().find(|x| x.d != d) {
            return Err(PolyError::DimensionMismatch(d, x.d));
        }
        for (key, k) in apply_edges(gr, args, d).iter() {
            let mut prod = Polyvector { d, u: 0, terms: FormalSum::term((vec![0; d], 0)) };
            for m in &key.xs {
                prod = prod.wedge(&Polyvector { d, u: 0, terms: FormalSum::term(m.clone()) });
            }
            out = out.plus(&prod.scaled(&(c * k)));
        }
    }
    out.u = args.iter().map(|x| x.u).sum();
    Ok(out)
}

/// The vKGra action: zero unless each v-power matches the argument's u-power;
/// otherwise edges into j̄ differentiate slot j, and only the ξ-free part survives.
pub fn vkgra_act(g: &GraphSum, args: &[Polyvector]) -> Result<MultiDiffOp, PolyError> {
    let d = args.first().map(|x| x.d).ok_or_else(|| PolyError::ArityMismatch("no arguments".into()))?;
    let n = g.keys().next().map(|gr| gr.n as usize).unwrap_or(0);
    let mut out = MultiDiffOp::zero(d, n);
    for (gr, c) in g.iter() {
        if gr.m as usize != args.len() || gr.n as usize != n {
            return Err(PolyError::ArityMismatch(format!("vKGra({},{}) with {} arguments", gr.m, gr.n, args.len())));
        }
        if gr.v.iter().zip(args).any(|(&v, x)| v as u32 != x.u) {
            continue;
        }
        for (key, k) in apply_edges(gr, args, d).iter() {
            if key.xs.iter().any(|m| m.1 != 0) {
                continue;
            }
            let coef = key.xs.iter().fold(vec![0u8; d], |acc, m| add_exp(&acc, &m.0));
            out.terms.add_term((coef, key.slots.clone()), c * k);
        }
    }
    Ok(out)
}

/// Equivariance witness: vkgra_act(σΓ) against σ(vkgra_act(Γ)).
pub fn action_equivariant(g: &GraphSum, args: &[Polyvector]) -> Result<bool, PolyError> {
    Ok(vkgra_act(&vkgra_sigma(g), args)? == cyclic_sigma_d(&vkgra_act(g, args)?))
}

// ---------- cyclic HKR search

/// A candidate cyclic HKR map: coefficients on graphs in vKGra(1, n) with
/// v-power p; Φ(X·u^p) = Σ c_Γ · vkgra_act(Γ, X·u^p).
#[derive(Clone, Debug)]
pub struct CyclicHkr {
    pub graphs: Vec<(Graph, Rational)>,
}

impl CyclicHkr {
    /// Φ(X), one operator per arity.
    pub fn apply(&self, x: &Polyvector) -> BTreeMap<usize, MultiDiffOp> {
        let mut out: BTreeMap<usize, MultiDiffOp> = BTreeMap::new();
        for (g, c) in &self.graphs {
            if g.v[0] as u32 != x.u || g.edges.len() != x.xi_degree() as usize {
                continue;
            }
            let op = vkgra_act(&FormalSum::term(g.clone()), std::slice::from_ref(x)).expect("arity one").scaled(c);
            let slot = out.entry(op.n).or_insert_with(|| MultiDiffOp::zero(x.d, op.n));
            *slot = slot.plus(&op);
        }
        out
    }

    /// Residual of d_Hoch Φ(X) = Φ(u·Div X) on one sample, per arity.
    pub fn is_chain_map_on(&self, x: &Polyvector) -> bool {
        let lhs: BTreeMap<usize, MultiDiffOp> =
            self.apply(x).into_values().map(|op| hochschild_d(&op)).map(|op| (op.n, op)).collect();
        let rhs = self.apply(&divergence(x).with_u(x.u + 1));
        let keys: std::collections::BTreeSet<usize> = lhs.keys().chain(rhs.keys()).copied().collect();
        keys.into_iter().all(|n| {
            let a = lhs.get(&n).map(|o| o.terms.clone()).unwrap_or_default();
            let b = rhs.get(&n).map(|o| o.terms.clone()).unwrap_or_default();
            a == b
        })
    }

    pub fn is_invariant(&self) -> bool {
        let mut by_n: BTreeMap<u8, GraphSum> = BTreeMap::new();
        for (g, c) in &self.graphs {
            by_n.entry(g.n).or_default().add_term(g.clone(), c.clone());
        }
        by_n.values().all(crate::graphops::is_invariant)
    }
}

/// Graphs in vKGra(1, n) with `k` edges from the single type-I vertex, no
/// tadpoles, and v-power `p`.
fn hkr_candidates(k: usize, n: usize, p: u8) -> Vec<Graph> {
    let targets: Vec<Vtx> = (1..=n as u8).map(Vtx::II).collect();
    let mut out = Vec::new();
    let choose = |k: usize| -> Vec<Vec<usize>> {
        let mut res = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for r in &res {
                let start = r.last().map(|&x| x + 1).unwrap_or(0);
                for t in start..targets.len() {
                    let mut r2 = r.clone();
                    r2.push(t);
                    next.push(r2);
                }
            }
            res = next;
        }
        res
    };
    for pick in choose(k) {
        let edges = pick.iter().map(|&t| (1u8, targets[t])).collect();
        out.push(Graph { m: 1, n: n as u8, internal: 0, edges, v: vec![p] });
    }
    out
}

/// Searches for σ-invariant graph combinations Φ with d_Hoch Φ(X) = Φ(u·Div X)
/// on the sample polyvectors, normalized so that Φ agrees with hkr on the
/// ξ-degree-k part (the u⁰ coefficient of the corolla is 1/k!).
pub fn solve_cyclic_hkr(samples: &[Polyvector], k: usize) -> Option<CyclicHkr> {
    // unknowns: invariant projections of corollas with k edges (u⁰) and k−1 edges (u¹)
    let inv0: Vec<GraphSum> = (k..=k + 1)
        .flat_map(|n| hkr_candidates(k, n, 0))
        .map(|g| crate::graphops::invariants_project(&FormalSum::term(g)))
        .filter(|s| !s.is_zero())
        .collect();
    let inv1: Vec<GraphSum> = if k >= 1 {
        (k..=k + 1)
            .flat_map(|n| hkr_candidates(k - 1, n, 1))
            .map(|g| crate::graphops::invariants_project(&FormalSum::term(g)))
            .filter(|s| !s.is_zero())
            .collect()
    } else {
        vec![]
    };
    let unknowns: Vec<(GraphSum, bool)> = inv0.iter().map(|g| (g.clone(), false)).chain(inv1.iter().map(|g| (g.clone(), true))).collect();
    // each unknown contributes a vector: its residual on every sample
    type Key = (usize, usize, OpKey);
    let mut cols: Vec<FormalSum<Key>> = Vec::new();
    for (g, is_u) in &unknowns {
        let mut col = FormalSum::zero();
        for (s, x) in samples.iter().enumerate() {
            let r = if !is_u {
                hochschild_d(&vkgra_act(g, std::slice::from_ref(x)).ok()?)
            } else {
                vkgra_act(g, &[divergence(x).with_u(1)]).ok()?.scaled(&qi(-1))
            };
            for ((a, idx), c) in r.terms.iter() {
                col.add_term((s, idx.len(), (a.clone(), idx.clone())), c.clone());
            }
        }
        cols.push(col);
    }
    // normalization row: the hkr-corolla weight
    let norm_key: Key = (usize::MAX, 0, (vec![], vec![]));
    let corolla = Graph { m: 1, n: k as u8, internal: 0, edges: (1..=k as u8).map(|t| (1, Vtx::II(t))).collect(), v: vec![0] };
    for (col, (g, is_u)) in cols.iter_mut().zip(&unknowns) {
        if !is_u {
            let w = g.coeff(&corolla);
            if !w.is_zero() {
                col.add_term(norm_key.clone(), w);
            }
        }
    }
    let target = FormalSum::single(norm_key, Rational::one() / qi(factorial(k as u8)));
    let coeffs = solve_in_span(&cols, &target)?;
    let mut graphs: BTreeMap<Graph, Rational> = BTreeMap::new();
    for ((g, _), c) in unknowns.iter().zip(coeffs) {
        for (h, w) in g.iter() {
            *graphs.entry(h.clone()).or_insert_with(Rational::zero) += &c * w;
        }
    }
    Some(CyclicHkr { graphs: graphs.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
}
