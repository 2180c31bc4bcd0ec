//! The cellular model M of normalized cacti, stored as bipartite planar rooted
//! trees: white vertices are labeled lobes, black vertices are intersection
//! points. Every non-root black has at least one child and a black root has at
//! least two. A cell's coordinates are the positions of its non-root blacks on
//! their parent lobes, ordered by preorder; its degree is minus their number.
//!
//! Contracting every single-child non-root black into a white-white edge gives
//! the stable planar tree encoding used for JSON.

use crate::exactla::{rank_of_sums, FormalSum, GradedBasis, SparseMatrix};
use crate::operad::Operad;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("arity {0} exceeds the enumeration bound {1}")]
    BoundExceeded(usize, usize),
    #[error("invalid tree: {0}")]
    Invalid(String),
    #[error("element is not in the image of R")]
    NotInImage,
    #[error("d does not preserve im R")]
    NotSubcomplex,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tree {
    W(u8, Vec<Tree>),
    B(Vec<Tree>),
}

pub type TreeSum = FormalSum<Tree>;

pub const DEFAULT_BOUND: usize = 4;

impl Tree {
    pub fn arity(&self) -> usize {
        match self {
            Tree::W(_, ch) => 1 + ch.iter().map(Tree::arity).sum::<usize>(),
            Tree::B(ch) => ch.iter().map(Tree::arity).sum(),
        }
    }

    /// Number of non-root black vertices.
    pub fn dim(&self) -> usize {
        fn go(t: &Tree) -> usize {
            match t {
                Tree::W(_, ch) => ch.iter().map(go).sum(),
                Tree::B(ch) => 1 + ch.iter().map(go).sum::<usize>(),
            }
        }
        match self {
            Tree::W(_, ch) => ch.iter().map(go).sum(),
            Tree::B(ch) => ch.iter().map(go).sum(),
        }
    }

    pub fn degree(&self) -> i64 {
        -(self.dim() as i64)
    }

    pub fn root_is_white(&self) -> bool {
        matches!(self, Tree::W(..))
    }

    pub fn relabel(&self, f: &dyn Fn(u8) -> u8) -> Tree {
        match self {
            Tree::W(l, ch) => Tree::W(f(*l), ch.iter().map(|c| c.relabel(f)).collect()),
            Tree::B(ch) => Tree::B(ch.iter().map(|c| c.relabel(f)).collect()),
        }
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        fn go(t: &Tree, root: bool, parent_white: Option<bool>, seen: &mut Vec<u8>) -> Result<(), TreeError> {
            match t {
                Tree::W(l, ch) => {
                    if parent_white == Some(true) {
                        return Err(TreeError::Invalid("white child of a white vertex".into()));
                    }
                    seen.push(*l);
                    for c in ch {
                        go(c, false, Some(true), seen)?;
                    }
                }
                Tree::B(ch) => {
                    if parent_white == Some(false) {
                        return Err(TreeError::Invalid("black child of a black vertex".into()));
                    }
                    if ch.is_empty() || (root && ch.len() < 2) {
                        return Err(TreeError::Invalid("black vertex with too few children".into()));
                    }
                    for c in ch {
                        go(c, false, Some(false), seen)?;
                    }
                }
            }
            Ok(())
        }
        let mut seen = Vec::new();
        go(self, true, None, &mut seen)?;
        seen.sort();
        if seen != (1..=seen.len() as u8).collect::<Vec<_>>() {
            return Err(TreeError::Invalid("white labels must be 1..n".into()));
        }
        Ok(())
    }

    /// Stable planar tree encoding as nested arrays.
    pub fn to_json(&self) -> Value {
        fn enc(t: &Tree) -> Value {
            match t {
                Tree::W(l, ch) => {
                    let mut v = vec![json!(format!("w:{l}"))];
                    for b in ch {
                        match b {
                            Tree::B(g) if g.len() == 1 => v.push(enc(&g[0])),
                            _ => v.push(enc(b)),
                        }
                    }
                    Value::Array(v)
                }
                Tree::B(ch) => {
                    let mut v = vec![json!("b")];
                    v.extend(ch.iter().map(enc));
                    Value::Array(v)
                }
            }
        }
        json!({"tree": enc(self), "root": []})
    }

    pub fn from_json(j: &Value) -> Result<Tree, TreeError> {
        let bad = |s: &str| TreeError::Invalid(s.to_string());
        fn dec(v: &Value) -> Result<Tree, TreeError> {
            let bad = |s: &str| TreeError::Invalid(s.to_string());
            let arr = v.as_array().ok_or_else(|| bad("node must be an array"))?;
            let tag = arr.first().and_then(Value::as_str).ok_or_else(|| bad("node tag"))?;
            let kids = &arr[1..];
            if tag == "b" {
                let ch = kids.iter().map(|c| dec(c)).collect::<Result<Vec<_>, _>>()?;
                if ch.iter().any(|c| !c.root_is_white()) {
                    return Err(bad("black child of a black vertex"));
                }
                Ok(Tree::B(ch))
            } else {
                let l: u8 = tag.strip_prefix("w:").and_then(|x| x.parse().ok()).ok_or_else(|| bad("white tag"))?;
                let mut ch = Vec::new();
                for c in kids {
                    let t = dec(c)?;
                    ch.push(if t.root_is_white() { Tree::B(vec![t]) } else { t });
                }
                Ok(Tree::W(l, ch))
            }
        }
        if j.get("root").and_then(Value::as_array).is_some_and(|p| !p.is_empty()) {
            return Err(bad("root path must point at the outermost node"));
        }
        let t = dec(j.get("tree").unwrap_or(j))?;
        t.validate()?;
        Ok(t)
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut p = p.to_vec();
    let mut s = 1;
    for i in 0..p.len() {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            s = -s;
        }
    }
    s
}

// ---------- enumeration

fn subsets_of(items: &[u8]) -> Vec<Vec<u8>> {
    let n = items.len();
    (1..(1u32 << n))
        .map(|mask| (0..n).filter(|k| mask >> k & 1 == 1).map(|k| items[k]).collect())
        .collect()
}

/// Sequences of disjoint nonempty blocks covering `s`.
fn ordered_partitions(s: &[u8]) -> Vec<Vec<Vec<u8>>> {
    if s.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for blk in subsets_of(s) {
        let rest: Vec<u8> = s.iter().copied().filter(|x| !blk.contains(x)).collect();
        for mut tail in ordered_partitions(&rest) {
            tail.insert(0, blk.clone());
            out.push(tail);
        }
    }
    out
}

#[derive(Default)]
struct Enumerator {
    white: HashMap<Vec<u8>, Vec<Tree>>,
    forest: HashMap<(Vec<u8>, usize), Vec<Vec<Tree>>>,
}

impl Enumerator {
    fn white_trees(&mut self, s: &[u8]) -> Vec<Tree> {
        if let Some(v) = self.white.get(s) {
            return v.clone();
        }
        let mut out = Vec::new();
        for &l in s {
            let rest: Vec<u8> = s.iter().copied().filter(|&x| x != l).collect();
            for blocks in ordered_partitions(&rest) {
                let options: Vec<Vec<Tree>> = blocks
                    .iter()
                    .map(|b| self.forests(b, 1).into_iter().map(Tree::B).collect())
                    .collect();
                for ch in product(&options) {
                    out.push(Tree::W(l, ch));
                }
            }
        }
        self.white.insert(s.to_vec(), out.clone());
        out
    }

    fn forests(&mut self, s: &[u8], min_parts: usize) -> Vec<Vec<Tree>> {
        let key = (s.to_vec(), min_parts);
        if let Some(v) = self.forest.get(&key) {
            return v.clone();
        }
        let mut out = Vec::new();
        for blocks in ordered_partitions(s) {
            if blocks.len() < min_parts {
                continue;
            }
            let options: Vec<Vec<Tree>> = blocks.iter().map(|b| self.white_trees(b)).collect();
            out.extend(product(&options));
        }
        self.forest.insert(key, out.clone());
        out
    }
}

fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    for opt in options {
        let mut next = Vec::with_capacity(out.len() * opt.len());
        for pre in &out {
            for x in opt {
                let mut p = pre.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// All basis cells of M(n), sorted.
pub fn basis_trees(n: usize) -> Vec<Tree> {
    static CACHE: Mutex<BTreeMap<usize, Vec<Tree>>> = Mutex::new(BTreeMap::new());
    if let Some(v) = CACHE.lock().expect("cache lock").get(&n) {
        return v.clone();
    }
    let s: Vec<u8> = (1..=n as u8).collect();
    let mut e = Enumerator::default();
    let mut out = e.white_trees(&s);
    out.extend(e.forests(&s, 2).into_iter().map(Tree::B));
    out.sort();
    CACHE.lock().expect("cache lock").insert(n, out.clone());
    out
}

pub fn enumerate_m(n: usize, bound: usize, degrees: Option<(i64, i64)>) -> Result<GradedBasis<Tree>, TreeError> {
    if n > bound {
        return Err(TreeError::BoundExceeded(n, bound));
    }
    Ok(GradedBasis::new(
        basis_trees(n)
            .into_iter()
            .filter(|t| degrees.is_none_or(|(lo, hi)| (lo..=hi).contains(&t.degree())))
            .map(|t| {
                let d = t.degree();
                (t, d)
            })
            .collect(),
    ))
}

// ---------- arena form

const MARK: u8 = 0;

#[derive(Clone, Debug)]
struct Node {
    label: Option<u8>,
    id: usize,
    ch: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
struct Arena {
    nodes: Vec<Node>,
}

impl Arena {
    fn load(&mut self, t: &Tree, ctr: &mut usize) -> usize {
        let idx = self.nodes.len();
        let (label, kids) = match t {
            Tree::W(l, ch) => (Some(*l), ch),
            Tree::B(ch) => {
                *ctr += 1;
                (None, ch)
            }
        };
        self.nodes.push(Node { label, id: if label.is_none() { *ctr } else { 0 }, ch: vec![] });
        let ch: Vec<usize> = kids.iter().map(|c| self.load(c, ctr)).collect();
        self.nodes[idx].ch = ch;
        idx
    }

    fn white(&self, x: usize) -> bool {
        self.nodes[x].label.is_some()
    }

    fn preorder(&self, root: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].ch.iter().rev());
        }
        out
    }

    /// Ids of non-root blacks in preorder.
    fn coords(&self, root: usize) -> Vec<usize> {
        self.preorder(root).into_iter().filter(|&x| x != root && !self.white(x)).map(|x| self.nodes[x].id).collect()
    }

    fn parent_of(&self, root: usize, target: usize) -> Option<usize> {
        self.preorder(root).into_iter().find(|&x| self.nodes[x].ch.contains(&target))
    }

    fn to_tree(&self, x: usize) -> Tree {
        let ch = self.nodes[x].ch.iter().map(|&c| self.to_tree(c)).collect();
        match self.nodes[x].label {
            Some(l) => Tree::W(l, ch),
            None => Tree::B(ch),
        }
    }

    /// Canonical tree plus the sign of the reordering from `olist` to preorder.
    fn finalize(&self, root: usize, olist: &[usize]) -> (Tree, i64) {
        let canon = self.coords(root);
        debug_assert_eq!(canon.len(), olist.len());
        let pos: HashMap<usize, usize> = olist.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let p: Vec<usize> = canon.iter().map(|k| pos[k]).collect();
        (self.to_tree(root), perm_sign(&p))
    }
}

fn arena_of(t: &Tree) -> (Arena, usize) {
    let mut a = Arena::default();
    let mut ctr = 0;
    let r = a.load(t, &mut ctr);
    (a, r)
}

// ---------- differential

/// Boundary of a cell: on each lobe with black children b₁..b_k, the faces
/// j = 0..k collide b_j with b_{j+1}, with b₀ and b_{k+1} standing for the
/// lobe's zero point.
pub fn m_differential_tree(t: &Tree) -> TreeSum {
    let (base, root) = arena_of(t);
    let olist = base.coords(root);
    let mut out = FormalSum::zero();
    for w in base.preorder(root) {
        if !base.white(w) {
            continue;
        }
        let k = base.nodes[w].ch.len();
        if k == 0 {
            continue;
        }
        let ks: Vec<usize> = base.nodes[w].ch.iter().map(|&b| base.nodes[b].id).collect();
        let rest: Vec<usize> = olist.iter().copied().filter(|x| !ks.contains(x)).collect();
        let front: Vec<usize> = ks.iter().chain(rest.iter()).map(|x| olist.iter().position(|y| y == x).unwrap()).collect();
        let s1 = perm_sign(&front);
        let par = base.parent_of(root, w);
        for j in 0..=k {
            let mut a = base.clone();
            let eps = if j % 2 == 0 { -1 } else { 1 };
            let removed;
            let mut newroot = root;
            if j >= 1 && j < k {
                let (bj, bj1) = (a.nodes[w].ch[j - 1], a.nodes[w].ch[j]);
                let extra = a.nodes[bj1].ch.clone();
                a.nodes[bj].ch.extend(extra);
                a.nodes[w].ch.remove(j);
                removed = a.nodes[bj1].id;
            } else {
                let b;
                let merged: Vec<usize>;
                if j == 0 {
                    b = a.nodes[w].ch.remove(0);
                    merged = a.nodes[b].ch.iter().copied().chain(std::iter::once(w)).collect();
                } else {
                    b = a.nodes[w].ch.pop().unwrap();
                    merged = std::iter::once(w).chain(a.nodes[b].ch.iter().copied()).collect();
                }
                removed = a.nodes[b].id;
                match par {
                    None => {
                        a.nodes[b].ch = merged;
                        newroot = b;
                    }
                    Some(p) => {
                        let idx = a.nodes[p].ch.iter().position(|&c| c == w).unwrap();
                        a.nodes[p].ch.splice(idx..=idx, merged);
                    }
                }
            }
            let olist2: Vec<usize> = ks.iter().copied().filter(|&x| x != removed).chain(rest.iter().copied()).collect();
            let (tr, s3) = a.finalize(newroot, &olist2);
            out.add_int(tr, s1 * eps * s3);
        }
    }
    out
}

pub fn m_differential(x: &TreeSum) -> TreeSum {
    x.map_linear(m_differential_tree)
}

// ---------- composition

fn white_corners(a: &Arena, x: usize, out: &mut Vec<(usize, usize)>) {
    if a.white(x) {
        let ch = a.nodes[x].ch.clone();
        for g in 0..=ch.len() {
            out.push((x, g));
            if g < ch.len() {
                white_corners(a, ch[g], out);
            }
        }
    } else {
        for &c in &a.nodes[x].ch {
            white_corners(a, c, out);
        }
    }
}

fn multichoose(c: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, c: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in start..c {
            cur.push(k);
            go(k, c, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, c, m, &mut vec![], &mut out);
    out
}

/// a ∘ᵢ b: the black children of lobe i are distributed in order over the
/// white corners of b; b's root takes the place of lobe i.
pub fn m_compose_tree(a: &Tree, i: u8, b: &Tree) -> TreeSum {
    let p = a.arity() as u8;
    let q = b.arity() as u8;
    assert!(i >= 1 && i <= p, "slot out of range");
    let at = a.relabel(&|l| if l < i { l } else if l > i { l + q - 1 } else { MARK });
    let bt = b.relabel(&|l| l + i - 1);
    let mut arena = Arena::default();
    let mut ctr = 0;
    let ra = arena.load(&at, &mut ctr);
    let rb = arena.load(&bt, &mut ctr);
    let olist: Vec<usize> = arena.coords(ra).into_iter().chain(arena.coords(rb)).collect();
    let wi = arena.preorder(ra).into_iter().find(|&x| arena.nodes[x].label == Some(MARK)).unwrap();
    let par = arena.parent_of(ra, wi);
    let items = arena.nodes[wi].ch.clone();
    let mut corners = Vec::new();
    white_corners(&arena, rb, &mut corners);
    let mut out = FormalSum::zero();
    for combo in multichoose(corners.len(), items.len()) {
        let mut r = arena.clone();
        let mut groups: BTreeMap<usize, BTreeMap<usize, Vec<usize>>> = BTreeMap::new();
        for (&it, &ci) in items.iter().zip(&combo) {
            let (w, g) = corners[ci];
            groups.entry(w).or_default().entry(g).or_default().push(it);
        }
        for (w, gaps) in groups {
            let old = r.nodes[w].ch.clone();
            let mut ch = Vec::new();
            for g in 0..=old.len() {
                if let Some(its) = gaps.get(&g) {
                    ch.extend(its);
                }
                if g < old.len() {
                    ch.push(old[g]);
                }
            }
            r.nodes[w].ch = ch;
        }
        let newroot = match par {
            None => rb,
            Some(pp) => {
                let idx = r.nodes[pp].ch.iter().position(|&c| c == wi).unwrap();
                let repl = if r.white(rb) { vec![rb] } else { r.nodes[rb].ch.clone() };
                r.nodes[pp].ch.splice(idx..=idx, repl);
                ra
            }
        };
        let (tr, s) = r.finalize(newroot, &olist);
        out.add_int(tr, s);
    }
    out
}

pub fn m_compose(a: &TreeSum, i: u8, b: &TreeSum) -> TreeSum {
    crate::exactla::bilinear(a, b, |x, y| m_compose_tree(x, i, y))
}

// ---------- R

fn det_i64(mut m: Vec<Vec<i64>>) -> i64 {
    // Bareiss fraction-free elimination
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// Moves a black root to every arc of every lobe; zero on white-rooted cells.
/// Each term's sign is the Jacobian of the coordinate change from
/// (base-point angle, old coordinates) to the new coordinates.
pub fn rotation_r_tree(t: &Tree) -> TreeSum {
    let mut out = FormalSum::zero();
    if t.root_is_white() {
        return out;
    }
    let (a, root) = arena_of(t);
    let olist = a.coords(root);
    let all = a.preorder(root);
    let mut parent: HashMap<usize, usize> = HashMap::new();
    for &x in &all {
        for &c in &a.nodes[x].ch {
            parent.insert(c, x);
        }
    }
    let nb: HashMap<usize, Vec<usize>> = all
        .iter()
        .map(|&x| {
            let mut l: Vec<usize> = parent.get(&x).copied().into_iter().collect();
            l.extend(&a.nodes[x].ch);
            (x, l)
        })
        .collect();
    let var = |id: usize| 1 + olist.iter().position(|&y| y == id).unwrap();
    for &w in &all {
        if !a.white(w) {
            continue;
        }
        let l = &nb[&w];
        for j in 0..l.len() {
            let order: Vec<usize> = l[j + 1..].iter().chain(l[..j + 1].iter()).copied().collect();
            let mut r = a.clone();
            let mut new_parent: HashMap<usize, usize> = HashMap::new();
            let mut stack = vec![(w, order)];
            while let Some((v, kids)) = stack.pop() {
                for &c in &kids {
                    new_parent.insert(c, v);
                    let cl = &nb[&c];
                    let qi = cl.iter().position(|&z| z == v).unwrap();
                    let rot: Vec<usize> = cl[qi + 1..].iter().chain(cl[..qi].iter()).copied().collect();
                    stack.push((c, rot));
                }
                r.nodes[v].ch = kids;
            }
            let newc = r.coords(w);
            let nvars = 1 + olist.len();
            let old_pos = |lobe: usize, black: usize| -> Option<usize> {
                (parent.get(&black) == Some(&lobe)).then(|| var(a.nodes[black].id))
            };
            let by_id: HashMap<usize, usize> = all.iter().filter(|&&x| !a.white(x)).map(|&x| (a.nodes[x].id, x)).collect();
            let mut m = Vec::with_capacity(newc.len());
            for &bid in &newc {
                let b = by_id[&bid];
                let lobe = new_parent[&b];
                let mut row = vec![0i64; nvars];
                if let Some(v) = old_pos(lobe, b) {
                    row[v] += 1;
                }
                if lobe == w {
                    row[0] -= 1;
                } else if let Some(v) = old_pos(lobe, new_parent[&lobe]) {
                    row[v] -= 1;
                }
                m.push(row);
            }
            let det = det_i64(m);
            debug_assert!(det == 1 || det == -1);
            out.add_int(r.to_tree(w), det);
        }
    }
    out
}

pub fn rotation_r(x: &TreeSum) -> TreeSum {
    x.map_linear(rotation_r_tree)
}

/// Right action on labels: lobe j of the result is lobe perm[j-1] of t.
pub fn act_tree(perm: &[usize], t: &Tree) -> Tree {
    let mut inv = vec![0u8; perm.len() + 1];
    for (j, &p) in perm.iter().enumerate() {
        inv[p] = (j + 1) as u8;
    }
    t.relabel(&|l| inv[l as usize])
}

/// The operad (M, d, R).
#[derive(Clone, Debug)]
pub struct MOperad;

impl Operad for MOperad {
    type Key = Tree;
    fn arity(&self, k: &Tree) -> usize {
        k.arity()
    }
    fn degree(&self, k: &Tree) -> i64 {
        k.degree()
    }
    fn basis(&self, n: usize) -> Vec<Tree> {
        basis_trees(n)
    }
    fn compose_basis(&self, a: &Tree, i: usize, b: &Tree) -> TreeSum {
        m_compose_tree(a, i as u8, b)
    }
    fn act_basis(&self, perm: &[usize], a: &Tree) -> TreeSum {
        FormalSum::term(act_tree(perm, a))
    }
    fn d_basis(&self, a: &Tree) -> TreeSum {
        m_differential_tree(a)
    }
    fn rho_basis(&self, a: &Tree) -> Option<TreeSum> {
        Some(rotation_r_tree(a))
    }
    fn has_rho(&self) -> bool {
        true
    }
}

/// Matrix of a linear map on the basis of M(n), in degree `deg` → `deg + shift`.
fn matrix_of(basis: &GradedBasis<Tree>, deg: i64, shift: i64, f: &(dyn Fn(&Tree) -> TreeSum + Sync)) -> SparseMatrix {
    let src: Vec<Tree> = basis.in_degree(deg).into_iter().map(|i| basis.label(i).clone()).collect();
    let dst = basis.in_degree(deg + shift);
    let idx: HashMap<&Tree, usize> = dst.iter().enumerate().map(|(k, &i)| (basis.label(i), k)).collect();
    let cols: Vec<TreeSum> = src.par_iter().map(f).collect();
    let mut m = SparseMatrix::new(dst.len(), src.len());
    for (c, s) in cols.iter().enumerate() {
        for (t, v) in s.iter() {
            m.add(idx[t], c, v.clone());
        }
    }
    m
}

/// Total and per-degree homology of M(n).
pub fn m_homology_dims(n: usize) -> BTreeMap<i64, usize> {
    let basis = enumerate_m(n, usize::MAX, None).expect("unbounded");
    let degs: Vec<i64> = basis.dims_by_degree().keys().copied().collect();
    let ds: BTreeMap<i64, SparseMatrix> = degs.iter().map(|&k| (k, matrix_of(&basis, k, 1, &m_differential_tree))).collect();
    let mut out = BTreeMap::new();
    for &k in &degs {
        let d_out = &ds[&k];
        let d_in = ds.get(&(k - 1)).cloned().unwrap_or_else(|| SparseMatrix::new(d_out.cols(), 0));
        let h = crate::exactla::homology_dims(&d_in, d_out).expect("d² = 0 on M");
        if h > 0 {
            out.insert(k, h);
        }
    }
    out
}

/// Homology of M_circ(n) = im R ⊂ M(n). Each graded piece of im R is spanned
/// by the R-images of the degree-(k+1) basis; d is restricted to those spans.
pub fn m_circ_homology_dims(n: usize, bound: usize) -> Result<BTreeMap<i64, usize>, TreeError> {
    let basis = enumerate_m(n, bound, None)?;
    let degs: Vec<i64> = basis.dims_by_degree().keys().copied().collect();
    // spanning sets of im R in each degree, reduced to bases
    let mut spans: BTreeMap<i64, Vec<TreeSum>> = BTreeMap::new();
    for &k in &degs {
        let imgs: Vec<TreeSum> = basis
            .in_degree(k)
            .par_iter()
            .map(|&i| rotation_r_tree(basis.label(i)))
            .filter(|s| !s.is_zero())
            .collect();
        spans.insert(k - 1, crate::exactla::independent_subset(&imgs));
    }
    let mut out = BTreeMap::new();
    for (&k, sp) in &spans {
        // rank of d on im R in degree k, and dim of im R in degree k
        let dsp: Vec<TreeSum> = sp.iter().map(m_differential).collect();
        let empty = Vec::new();
        let next = spans.get(&(k + 1)).unwrap_or(&empty);
        let mut joined = next.clone();
        joined.extend(dsp.iter().cloned());
        if rank_of_sums(&joined) != next.len() {
            return Err(TreeError::NotSubcomplex);
        }
        let rank_out = rank_of_sums(&dsp);
        let prev = spans.get(&(k - 1)).unwrap_or(&empty);
        let rank_in = rank_of_sums(&prev.iter().map(m_differential).collect::<Vec<_>>());
        let h = sp.len() - rank_out - rank_in;
        if h > 0 {
            out.insert(k, h);
        }
    }
    Ok(out)
}

/// Graded dimensions of M_circ(n) = im R.
pub fn m_circ_dims(n: usize, bound: usize) -> Result<BTreeMap<i64, usize>, TreeError> {
    let basis = enumerate_m(n, bound, None)?;
    let mut out = BTreeMap::new();
    for (&k, _) in basis.dims_by_degree().iter() {
        let imgs: Vec<TreeSum> = basis.in_degree(k).par_iter().map(|&i| rotation_r_tree(basis.label(i))).collect();
        let r = rank_of_sums(&imgs);
        if r > 0 {
            out.insert(k - 1, r);
        }
    }
    Ok(out)
}

/// An element of M_circ, certified by a preimage under R.
#[derive(Clone, Debug, PartialEq)]
pub struct MCircElement {
    pub value: TreeSum,
    pub preimage: TreeSum,
}

impl MCircElement {
    pub fn from_preimage(c: TreeSum) -> Self {
        MCircElement { value: rotation_r(&c), preimage: c }
    }

    pub fn certify(&self) -> bool {
        rotation_r(&self.preimage) == self.value
    }

    /// Finds a preimage by solving within the basis of the same arity.
    pub fn try_new(value: TreeSum) -> Result<Self, TreeError> {
        let Some(t) = value.keys().next() else {
            return Ok(MCircElement { value, preimage: FormalSum::zero() });
        };
        let n = t.arity();
        let deg = t.degree() + 1;
        let srcs: Vec<Tree> = basis_trees(n).into_iter().filter(|s| s.degree() == deg).collect();
        let imgs: Vec<TreeSum> = srcs.iter().map(rotation_r_tree).collect();
        let coeffs = crate::exactla::solve_in_span(&imgs, &value).ok_or(TreeError::NotInImage)?;
        let mut pre = FormalSum::zero();
        for (s, c) in srcs.iter().zip(coeffs) {
            pre.add_term(s.clone(), c);
        }
        Ok(MCircElement { value, preimage: pre })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_counts() {
        let c: Vec<usize> = (1..=3).map(|n| basis_trees(n).len()).collect();
        assert_eq!(c, vec![1, 4, 36]);
    }

    #[test]
    fn det_small() {
        assert_eq!(det_i64(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_i64(vec![vec![2, 1], vec![1, 1]]), 1);
    }
}
