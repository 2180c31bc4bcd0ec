//! Directed graphs with odd edges: the operad Gra, graphs with tadpoles (the
//! ambient S¹-operad whose δ is the tadpole), and vKGra with boundary
//! vertices, v-decorations, the vertex-splitting differential and the cyclic
//! ℤ_{n+1} action.

use crate::exactla::{qi, FormalSum, Rational};
use crate::operad::Operad;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("tadpole terms survive in Δ: {0}")]
    TadpoleResidue(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// Edge endpoint: type-I vertex `I(k)` (1-based) or type-II vertex `II(k)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Vtx {
    I(u8),
    II(u8),
}

/// A basis graph in canonical form: edges sorted, no repeated edge. The sign
/// produced by sorting is carried by the coefficient of the enclosing sum.
/// The last `internal` type-I vertices are internal (twisted settings only).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Graph {
    pub m: u8,
    pub n: u8,
    pub internal: u8,
    pub edges: Vec<(u8, Vtx)>,
    pub v: Vec<u8>,
}

pub type GraphSum = FormalSum<Graph>;

/// Sign of the permutation sorting `xs`, or None if two entries coincide.
pub fn sort_sign<T: Ord + Clone>(xs: &mut [T]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..xs.len() {
        let mut j = i;
        while j > 0 && xs[j - 1] > xs[j] {
            xs.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl Graph {
    /// Canonical form of the ordered edge monomial; None if it vanishes.
    pub fn canonical(m: u8, n: u8, internal: u8, mut edges: Vec<(u8, Vtx)>, v: Vec<u8>) -> Option<(Graph, i64)> {
        let s = sort_sign(&mut edges)?;
        Some((Graph { m, n, internal, edges, v }, s))
    }

    pub fn signed(m: u8, n: u8, edges: Vec<(u8, Vtx)>, v: Vec<u8>) -> GraphSum {
        match Graph::canonical(m, n, 0, edges, v) {
            Some((g, s)) => FormalSum::single(g, qi(s)),
            None => FormalSum::zero(),
        }
    }

    /// Plain Gra graph on `m` vertices from (source, target) pairs.
    pub fn gra(m: u8, edges: &[(u8, u8)]) -> GraphSum {
        Graph::signed(m, 0, edges.iter().map(|&(a, b)| (a, Vtx::I(b))).collect(), vec![0; m as usize])
    }

    pub fn edgeless(m: u8) -> Graph {
        Graph { m, n: 0, internal: 0, edges: vec![], v: vec![0; m as usize] }
    }

    pub fn external(&self) -> u8 {
        self.m - self.internal
    }

    pub fn is_internal(&self, k: u8) -> bool {
        k > self.external()
    }

    /// -(#edges) - 2Σv + 2(#internal vertices).
    pub fn degree(&self) -> i64 {
        -(self.edges.len() as i64) - 2 * self.v.iter().map(|&x| x as i64).sum::<i64>() + 2 * self.internal as i64
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|&(s, t)| t == Vtx::I(s))
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.v.len() != self.m as usize {
            return Err(GraphError::Invalid("v-power list length".into()));
        }
        for &(s, t) in &self.edges {
            let ok_t = match t {
                Vtx::I(k) => k >= 1 && k <= self.m,
                Vtx::II(k) => k >= 1 && k <= self.n,
            };
            if s < 1 || s > self.m || !ok_t {
                return Err(GraphError::Invalid(format!("edge ({s},{t:?}) out of range")));
            }
        }
        if self.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::Invalid("edges not canonical".into()));
        }
        Ok(())
    }

    /// Valence (in + out, tadpoles counted twice) of type-I vertex k.
    pub fn valence(&self, k: u8) -> (usize, usize) {
        let out = self.edges.iter().filter(|e| e.0 == k).count();
        let inc = self.edges.iter().filter(|e| e.1 == Vtx::I(k)).count();
        (inc, out)
    }

    /// Right action on type-I labels: vertex j of the result is vertex perm[j-1] of self.
    pub fn act(&self, perm: &[usize]) -> GraphSum {
        assert_eq!(perm.len(), self.m as usize);
        let mut inv = vec![0u8; perm.len() + 1];
        for (j, &p) in perm.iter().enumerate() {
            inv[p] = (j + 1) as u8;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(s, t)| {
                let t2 = match t {
                    Vtx::I(k) => Vtx::I(inv[k as usize]),
                    w => w,
                };
                (inv[s as usize], t2)
            })
            .collect();
        let v = (1..=self.m as usize).map(|j| self.v[perm[j - 1] - 1]).collect();
        match Graph::canonical(self.m, self.n, self.internal, edges, v) {
            Some((g, s)) => FormalSum::single(g, qi(s)),
            None => FormalSum::zero(),
        }
    }

    pub fn to_json(&self, sign: i64) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|&(s, t)| match t {
                Vtx::I(k) => json!([s, k]),
                Vtx::II(k) => json!([s, format!("b{k}")]),
            })
            .collect();
        let mut v = Map::new();
        for (i, &p) in self.v.iter().enumerate() {
            if p > 0 {
                v.insert((i + 1).to_string(), json!(p));
            }
        }
        let mut out = json!({"m": self.m, "n": self.n, "edges": edges, "v": v, "sign": sign});
        if self.internal > 0 {
            let labels: Vec<u8> = (self.external() + 1..=self.m).collect();
            out["internal"] = json!(labels);
        }
        out
    }

    /// Parses the graph JSON schema; returns the canonical graph and the total sign.
    pub fn from_json(j: &Value) -> Result<(Graph, i64), GraphError> {
        let bad = |s: &str| GraphError::Invalid(s.to_string());
        let m = j["m"].as_u64().ok_or_else(|| bad("m"))? as u8;
        let n = j.get("n").and_then(Value::as_u64).unwrap_or(0) as u8;
        let sign = j.get("sign").and_then(Value::as_i64).unwrap_or(1);
        let mut edges = Vec::new();
        for e in j["edges"].as_array().ok_or_else(|| bad("edges"))? {
            let s = e[0].as_u64().ok_or_else(|| bad("edge source"))? as u8;
            let t = match &e[1] {
                Value::Number(k) => Vtx::I(k.as_u64().ok_or_else(|| bad("edge target"))? as u8),
                Value::String(b) => Vtx::II(
                    b.strip_prefix('b').and_then(|x| x.parse().ok()).ok_or_else(|| bad("type-II label"))?,
                ),
                _ => return Err(bad("edge target")),
            };
            edges.push((s, t));
        }
        let mut v = vec![0u8; m as usize];
        if let Some(obj) = j.get("v").and_then(Value::as_object) {
            for (k, p) in obj {
                let k: usize = k.parse().map_err(|_| bad("v label"))?;
                if k < 1 || k > m as usize {
                    return Err(bad("v label out of range"));
                }
                v[k - 1] = p.as_u64().ok_or_else(|| bad("v power"))? as u8;
            }
        }
        let internal = match j.get("internal") {
            Some(Value::Array(a)) => a.len() as u8,
            _ => 0,
        };
        let (g, s) = Graph::canonical(m, n, internal, edges, v).ok_or_else(|| bad("repeated edge"))?;
        g.validate()?;
        Ok((g, s * sign))
    }
}

pub fn sum_to_json(s: &GraphSum) -> Value {
    Value::Array(
        s.iter()
            .map(|(g, c)| {
                let mut j = g.to_json(1);
                j["coeff"] = json!(crate::exactla::fmt_q(c));
                j
            })
            .collect(),
    )
}

/// Accepts a single graph object or an array of graphs with optional "coeff".
pub fn sum_from_json(j: &Value) -> Result<GraphSum, GraphError> {
    let items: Vec<&Value> = match j {
        Value::Array(a) => a.iter().collect(),
        other => vec![other],
    };
    let mut out = FormalSum::zero();
    for it in items {
        let (g, s) = Graph::from_json(it)?;
        let c = match it.get("coeff").and_then(Value::as_str) {
            Some(t) => crate::exactla::parse_q(t).map_err(|_| GraphError::Invalid(format!("coefficient {t}")))?,
            None => qi(1),
        };
        out.add_term(g, c * qi(s));
    }
    Ok(out)
}

/// All weak compositions of `p` into `k` parts.
pub fn weak_compositions(p: u8, k: usize) -> Vec<Vec<u8>> {
    if k == 0 {
        return if p == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=p {
        for mut rest in weak_compositions(p - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Insert `g` at type-I vertex `i` of `x`. Every edge endpoint at `i` is
/// reattached to any vertex of `g` independently; the v-power at `i` is
/// distributed over the vertices of `g` in all ways, each with coefficient 1.
/// Edges of `x` come first, then edges of `g`.
pub fn insert_graph(x: &Graph, i: u8, g: &Graph) -> GraphSum {
    assert!(i >= 1 && i <= x.m, "insertion slot out of range");
    assert!(g.n == 0 && x.internal == 0 && g.internal == 0, "insertion of a plain graph into a plain slot");
    let q = g.m;
    let shift = |k: u8| if k < i { k } else { k + q - 1 };
    let mut slots: Vec<(usize, bool)> = Vec::new();
    for (e, &(s, t)) in x.edges.iter().enumerate() {
        if s == i {
            slots.push((e, true));
        }
        if t == Vtx::I(i) {
            slots.push((e, false));
        }
    }
    let mut out = FormalSum::zero();
    let total = (q as usize).pow(slots.len() as u32);
    let dists = weak_compositions(x.v[i as usize - 1], q as usize);
    for code in 0..total {
        let mut c = code;
        let mut assigned: BTreeMap<(usize, bool), u8> = BTreeMap::new();
        for &slot in &slots {
            assigned.insert(slot, (c % q as usize) as u8 + 1);
            c /= q as usize;
        }
        let mut edges = Vec::with_capacity(x.edges.len() + g.edges.len());
        for (e, &(s, t)) in x.edges.iter().enumerate() {
            let s2 = if s == i { i + assigned[&(e, true)] - 1 } else { shift(s) };
            let t2 = match t {
                Vtx::I(k) if k == i => Vtx::I(i + assigned[&(e, false)] - 1),
                Vtx::I(k) => Vtx::I(shift(k)),
                w => w,
            };
            edges.push((s2, t2));
        }
        for &(s, t) in &g.edges {
            let t2 = match t {
                Vtx::I(k) => Vtx::I(k + i - 1),
                w => w,
            };
            edges.push((s + i - 1, t2));
        }
        for dist in &dists {
            let mut v = Vec::with_capacity(x.m as usize + q as usize - 1);
            for k in 1..i {
                v.push(x.v[k as usize - 1]);
            }
            for a in 0..q as usize {
                v.push(dist[a] + g.v[a]);
            }
            for k in i + 1..=x.m {
                v.push(x.v[k as usize - 1]);
            }
            if let Some((h, s)) = Graph::canonical(x.m + q - 1, x.n, 0, edges.clone(), v) {
                out.add_int(h, s);
            }
        }
    }
    out
}

/// The arity-one tadpole graph δ.
pub fn tadpole() -> Graph {
    Graph { m: 1, n: 0, internal: 0, edges: vec![(1, Vtx::I(1))], v: vec![0] }
}

/// Graphs with tadpoles, no type-II vertices: the ambient S¹-operad with δ = tadpole.
#[derive(Clone, Debug)]
pub struct GraT {
    pub max_edges: usize,
}

/// The operad Gra: graphs without tadpoles, with Δ computed through the tadpole bracket.
#[derive(Clone, Debug)]
pub struct Gra {
    pub max_edges: usize,
}

/// All directed edges on `m` vertices, optionally including tadpoles.
pub fn all_edges(m: u8, tadpoles: bool) -> Vec<(u8, Vtx)> {
    let mut out = Vec::new();
    for s in 1..=m {
        for t in 1..=m {
            if s != t || tadpoles {
                out.push((s, Vtx::I(t)));
            }
        }
    }
    out
}

fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for it in items {
        let mut more = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(it.clone());
                more.push(t);
            }
        }
        out.extend(more);
    }
    out
}

pub fn enumerate_graphs(m: u8, max_edges: usize, tadpoles: bool) -> Vec<Graph> {
    let mut out: Vec<Graph> = subsets(&all_edges(m, tadpoles), max_edges)
        .into_iter()
        .map(|edges| Graph { m, n: 0, internal: 0, edges, v: vec![0; m as usize] })
        .collect();
    out.sort();
    out
}

impl Operad for GraT {
    type Key = Graph;
    fn arity(&self, k: &Graph) -> usize {
        k.m as usize
    }
    fn degree(&self, k: &Graph) -> i64 {
        k.degree()
    }
    fn basis(&self, n: usize) -> Vec<Graph> {
        enumerate_graphs(n as u8, self.max_edges, true)
    }
    fn compose_basis(&self, a: &Graph, i: usize, b: &Graph) -> GraphSum {
        insert_graph(a, i as u8, b)
    }
    fn act_basis(&self, perm: &[usize], a: &Graph) -> GraphSum {
        a.act(perm)
    }
    fn delta_element(&self) -> Option<GraphSum> {
        Some(FormalSum::term(tadpole()))
    }
}

impl Operad for Gra {
    type Key = Graph;
    fn arity(&self, k: &Graph) -> usize {
        k.m as usize
    }
    fn degree(&self, k: &Graph) -> i64 {
        k.degree()
    }
    fn basis(&self, n: usize) -> Vec<Graph> {
        enumerate_graphs(n as u8, self.max_edges, false)
    }
    fn compose_basis(&self, a: &Graph, i: usize, b: &Graph) -> GraphSum {
        insert_graph(a, i as u8, b)
    }
    fn act_basis(&self, perm: &[usize], a: &Graph) -> GraphSum {
        a.act(perm)
    }
    fn rho_basis(&self, a: &Graph) -> Option<GraphSum> {
        Some(gra_delta(&FormalSum::term(a.clone())).expect("tadpoles cancel in Δ"))
    }
    fn has_rho(&self) -> bool {
        true
    }
}

/// Δ(a) = δ∘₁a − (−1)^{|a|} Σᵢ a∘ᵢδ in graphs with tadpoles; the result must be tadpole-free.
pub fn gra_delta(a: &GraphSum) -> Result<GraphSum, GraphError> {
    let r = crate::operad::external_delta(&GraT { max_edges: usize::MAX }, a).expect("GraT has δ");
    if let Some((g, _)) = r.iter().find(|(g, _)| g.has_tadpole()) {
        return Err(GraphError::TadpoleResidue(format!("{g:?}")));
    }
    Ok(r)
}

/// μ: the edgeless graph on two vertices.
pub fn mu() -> GraphSum {
    FormalSum::term(Graph::edgeless(2))
}

/// b = Γ^{1,2} + Γ^{2,1}.
pub fn bracket() -> GraphSum {
    Graph::gra(2, &[(1, 2)]).plus(&Graph::gra(2, &[(2, 1)]))
}

/// d(v_i) = Γ^{i,i}, extended as a derivation; the new edge is placed first.
pub fn vkgra_differential(x: &GraphSum) -> GraphSum {
    x.map_linear(|g| {
        let mut out = FormalSum::zero();
        for i in 0..g.m as usize {
            let p = g.v[i];
            if p == 0 {
                continue;
            }
            let mut v = g.v.clone();
            v[i] -= 1;
            let mut edges = vec![(i as u8 + 1, Vtx::I(i as u8 + 1))];
            edges.extend(g.edges.iter().copied());
            if let Some((h, s)) = Graph::canonical(g.m, g.n, g.internal, edges, v) {
                out.add_int(h, s * p as i64);
            }
        }
        out
    })
}

fn sigma_edge(g: &Graph, e: (u8, Vtx)) -> Vec<(i64, (u8, Vtx))> {
    match e.1 {
        Vtx::II(1) => {
            let mut v: Vec<(i64, (u8, Vtx))> = (1..=g.n).map(|k| (-1, (e.0, Vtx::II(k)))).collect();
            v.extend((1..=g.m).map(|k| (-1, (e.0, Vtx::I(k)))));
            v
        }
        Vtx::II(j) => vec![(1, (e.0, Vtx::II(j - 1)))],
        Vtx::I(_) => vec![(1, e)],
    }
}

/// The generator of ℤ_{n+1} on vKGra(m, n), multiplicative over edges.
pub fn vkgra_sigma_graph(g: &Graph) -> GraphSum {
    let images: Vec<Vec<(i64, (u8, Vtx))>> = g.edges.iter().map(|&e| sigma_edge(g, e)).collect();
    let mut out = FormalSum::zero();
    let mut idx = vec![0usize; images.len()];
    loop {
        let mut coeff = 1;
        let mut edges = Vec::with_capacity(images.len());
        for (k, im) in images.iter().enumerate() {
            coeff *= im[idx[k]].0;
            edges.push(im[idx[k]].1);
        }
        if let Some((h, s)) = Graph::canonical(g.m, g.n, g.internal, edges, g.v.clone()) {
            out.add_int(h, s * coeff);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < images[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn vkgra_sigma(x: &GraphSum) -> GraphSum {
    x.map_linear(vkgra_sigma_graph)
}

pub fn vkgra_sigma_pow(x: &GraphSum, k: usize) -> GraphSum {
    let mut y = x.clone();
    for _ in 0..k {
        y = vkgra_sigma(&y);
    }
    y
}

/// Color-one insertion of g ∈ Gra(k) at type-I vertex i of x ∈ vKGra(m, n).
pub fn csc_compose(x: &GraphSum, i: u8, g: &GraphSum) -> Result<GraphSum, GraphError> {
    let mut out = FormalSum::zero();
    for (a, ca) in x.iter() {
        if i < 1 || i > a.m {
            return Err(GraphError::ArityMismatch(format!("slot {i} in vKGra({},{})", a.m, a.n)));
        }
        for (b, cb) in g.iter() {
            out.add_scaled(&insert_graph(a, i, b), &(ca * cb));
        }
    }
    Ok(out)
}

/// Action of g·v^k ∈ CCᶿ(Gra): x ∘̃ᵢ (g·v⁰) = x ∘ᵢ Δ(g), and zero for k > 0.
pub fn cc_theta_act(x: &GraphSum, i: u8, g: &GraphSum, vpow: u32) -> Result<GraphSum, GraphError> {
    if vpow > 0 {
        return Ok(FormalSum::zero());
    }
    csc_compose(x, i, &gra_delta(g)?)
}

/// Color-two insertion of y ∈ vKGra(m', n') into type-II slot j of x ∈ vKGra(m, n).
/// Edges ending at j̄ are reattached to any vertex of y; type-I vertices of y follow those of x.
pub fn insert_type2(x: &Graph, j: u8, y: &Graph) -> GraphSum {
    assert!(j >= 1 && j <= x.n, "type-II slot out of range");
    assert!(x.internal == 0 && y.internal == 0);
    let (m, mp, np) = (x.m, y.m, y.n);
    let targets: Vec<Vtx> = (1..=mp).map(|a| Vtx::I(m + a)).chain((1..=np).map(|b| Vtx::II(j + b - 1))).collect();
    let slots: Vec<usize> = (0..x.edges.len()).filter(|&e| x.edges[e].1 == Vtx::II(j)).collect();
    let mut out = FormalSum::zero();
    if targets.is_empty() && !slots.is_empty() {
        return out;
    }
    let total = targets.len().max(1).pow(slots.len() as u32);
    for code in 0..total {
        let mut c = code;
        let mut pick = BTreeMap::new();
        for &e in &slots {
            pick.insert(e, targets[c % targets.len()]);
            c /= targets.len();
        }
        let mut edges = Vec::new();
        for (e, &(s, t)) in x.edges.iter().enumerate() {
            let t2 = match t {
                Vtx::II(k) if k == j => pick[&e],
                Vtx::II(k) if k > j => Vtx::II(k + np - 1),
                w => w,
            };
            edges.push((s, t2));
        }
        for &(s, t) in &y.edges {
            let t2 = match t {
                Vtx::I(k) => Vtx::I(k + m),
                Vtx::II(k) => Vtx::II(k + j - 1),
            };
            edges.push((s + m, t2));
        }
        let mut v = x.v.clone();
        v.extend(y.v.iter().copied());
        if let Some((h, s)) = Graph::canonical(m + mp, x.n + np - 1, 0, edges, v) {
            out.add_int(h, s);
        }
    }
    out
}

/// x • y = Σⱼ (−1)^{(j−1)(n′−1)} x ∘ⱼ y, mirroring the Gerstenhaber total composition.
pub fn total_type2(x: &GraphSum, y: &GraphSum) -> GraphSum {
    let mut out = FormalSum::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            for j in 1..=a.n {
                let s = if ((j as i64 - 1) * (b.n as i64 - 1)).rem_euclid(2) == 1 { -1 } else { 1 };
                out.add_scaled(&insert_type2(a, j, b), &(ca * cb * qi(s)));
            }
        }
    }
    out
}

/// Moves the last `k` type-I vertices in front of the others.
pub fn rotate_type1_block(x: &GraphSum, k: u8) -> GraphSum {
    x.map_linear(|g| {
        let m = g.m as usize;
        let k = k as usize;
        let perm: Vec<usize> = (m - k + 1..=m).chain(1..=m - k).collect();
        g.act(&perm)
    })
}

/// [x, y] = x•y − (−1)^{(n−1)(n′−1) + |x||y|} (y•x with the type-I blocks swapped),
/// with |·| the graph degree; vkgra_act sends it to (−1)^{|x||y|}[D_x, D_y].
pub fn bimodule_lie_bracket(x: &GraphSum, y: &GraphSum) -> GraphSum {
    let mut out = total_type2(x, y);
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let e = (a.n as i64 - 1) * (b.n as i64 - 1) + a.degree() * b.degree();
            let s = if e.rem_euclid(2) == 1 { qi(-1) } else { qi(1) };
            let yx = total_type2(&FormalSum::term(b.clone()), &FormalSum::term(a.clone()));
            out.add_scaled(&rotate_type1_block(&yx, a.m), &-(ca * cb * s));
        }
    }
    out
}

/// The ℤ_{n+1} action on the suspension Σⁿ vKGra(m, n): σ twisted by the sign (−1)ⁿ of the cycle.
pub fn suspended_sigma(x: &GraphSum) -> GraphSum {
    x.map_linear(|g| {
        let s = vkgra_sigma_graph(g);
        if g.n % 2 == 1 {
            s.neg()
        } else {
            s
        }
    })
}

/// Averaging over the suspended ℤ_{n+1} action, per type-II arity.
pub fn invariants_project(x: &GraphSum) -> GraphSum {
    let mut by_n: BTreeMap<u8, GraphSum> = BTreeMap::new();
    for (g, c) in x.iter() {
        by_n.entry(g.n).or_default().add_term(g.clone(), c.clone());
    }
    let mut out = FormalSum::zero();
    for (n, part) in by_n {
        let mut acc = FormalSum::zero();
        let mut y = part;
        for _ in 0..=n {
            acc.add_assign(&y);
            y = suspended_sigma(&y);
        }
        out.add_assign(&acc.scaled(&Rational::new(1.into(), (n as i64 + 1).into())));
    }
    out
}

pub fn is_invariant(x: &GraphSum) -> bool {
    suspended_sigma(x) == *x
}


/// A random signed vKGra monomial with at most `max_edges` edges and v-powers ≤ `max_v`.
pub fn random_vkgra<R: rand::Rng>(rng: &mut R, m: u8, n: u8, max_edges: usize, max_v: u8) -> GraphSum {
    let mut edges = Vec::new();
    for _ in 0..rng.gen_range(0..=max_edges) {
        let s = rng.gen_range(1..=m);
        let t = if n > 0 && rng.gen_bool(0.5) { Vtx::II(rng.gen_range(1..=n)) } else { Vtx::I(rng.gen_range(1..=m)) };
        edges.push((s, t));
    }
    let v = (0..m).map(|_| rng.gen_range(0..=max_v)).collect();
    Graph::signed(m, n, edges, v)
}
