//! Acceptance suite: one PASS/FAIL line per criterion, then a rerun for determinism.

use opcyc::exactla::{qi, rank_of_sums, FormalSum, Rational};
use opcyc::graphops::*;
use opcyc::mixed::cc_minus;
use opcyc::operad::*;
use opcyc::poly::*;
use opcyc::treeops::*;
use opcyc::twist::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;

struct Outcome {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn rng(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1000).wrapping_add(id))
}

fn sgn(n: i64) -> Rational {
    qi(if n.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn first(g: &GraphSum) -> &Graph {
    g.keys().next().expect("nonzero")
}

fn ger_images(n: usize) -> (usize, usize) {
    let basis = ConcreteGer::basis(n);
    let imgs: Vec<GraphSum> = basis.iter().map(|b| gra_delta(b).expect("tadpole-free")).collect();
    (rank_of_sums(&basis), rank_of_sums(&imgs))
}

fn c1_grav_dims(_: u64) -> (bool, String) {
    let golden = [1usize, 3, 12];
    let mut ok = true;
    let mut got = Vec::new();
    for (n, &want) in (2..=4).zip(&golden) {
        let k = grav_dim(n);
        // R exact on Ger with dim Ger(n) = n! forces dim ker R = n!/2
        let cross = factorial(n) / 2;
        ok &= k == want && ConcreteGer::dim(n) == factorial(n) && k == cross;
        got.push(k);
    }
    (ok, format!("dim ker R on Ger(2..4) = {got:?}"))
}

fn c2_exactness(_: u64) -> (bool, String) {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 2..=4 {
        let (dim, rank) = ger_images(n);
        let ker = dim - rank;
        ok &= rank == ker;
        rows.push(format!("n={n}: rank {rank}, ker {ker}"));
    }
    (ok, rows.join("; "))
}

fn c3_hc_minus(_: u64) -> (bool, String) {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 2..=4 {
        let a = ger_mixed_complex(n);
        let h4 = cc_minus(&a, 4).total_homology();
        let h5 = cc_minus(&a, 5).total_homology();
        ok &= h4 == grav_dim(n) && h5 == h4;
        rows.push(format!("n={n}: {h4} (trunc 4), {h5} (trunc 5)"));
    }
    (ok, rows.join("; "))
}

fn c4_m_circ_homology(_: u64) -> (bool, String) {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 2..=4 {
        let h: usize = match m_circ_homology_dims(n, DEFAULT_BOUND) {
            Ok(h) => h.values().sum(),
            Err(e) => return (false, format!("n={n}: {e}")),
        };
        ok &= h == grav_dim(n);
        rows.push(format!("H(M_circ({n})) = {h}"));
    }
    for n in 2..=3 {
        let h: usize = m_homology_dims(n).values().sum();
        ok &= h == factorial(n);
        rows.push(format!("H(M({n})) = {h}"));
    }
    (ok, rows.join("; "))
}

fn c5_rotational_m(_: u64) -> (bool, String) {
    let mut pairs = 0;
    let mut bad = 0;
    for p in 1..=3 {
        for q in 1..=3 {
            if p + q - 1 > 3 {
                continue;
            }
            for a in basis_trees(p) {
                let a = FormalSum::term(a);
                for b in basis_trees(q) {
                    let b = FormalSum::term(b);
                    for i in 1..=p as u8 {
                        pairs += 1;
                        let lhs = rotation_r(&m_compose(&a, i, &rotation_r(&b)));
                        let rhs = m_compose(&rotation_r(&a), i, &rotation_r(&b));
                        bad += (lhs != rhs) as usize;
                    }
                }
            }
        }
    }
    let mut trees = 0;
    for n in 1..=4 {
        for t in basis_trees(n) {
            trees += 1;
            let x = FormalSum::term(t);
            let (r, d) = (rotation_r(&x), m_differential(&x));
            bad += !rotation_r(&r).is_zero() as usize;
            bad += !m_differential(&d).is_zero() as usize;
            bad += !rotation_r(&d).plus(&m_differential(&r)).is_zero() as usize;
        }
    }
    (bad == 0, format!("{pairs} pairs, {trees} trees, {bad} violations"))
}

fn vk_generators(m: u8, n: u8) -> Vec<GraphSum> {
    let mut out = vec![Graph::signed(m, n, vec![], vec![0; m as usize])];
    for s in 1..=m {
        let targets = (1..=m).map(Vtx::I).chain((1..=n).map(Vtx::II));
        for t in targets {
            out.push(Graph::signed(m, n, vec![(s, t)], vec![0; m as usize]));
        }
        let mut v = vec![0; m as usize];
        v[s as usize - 1] = 1;
        out.push(Graph::signed(m, n, vec![], v));
    }
    out.retain(|g| !g.is_zero());
    out
}

fn c6_vkgra(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 6);
    let gra = Gra { max_edges: 2 };
    let mut bad = 0;
    let mut gens = 0;
    for m in 1..=3 {
        for n in 0..=4 {
            for g in vk_generators(m, n) {
                gens += 1;
                bad += (vkgra_sigma_pow(&g, n as usize + 1) != g) as usize;
            }
        }
    }
    let mut samples = 0;
    while samples < 120 {
        let (m, n) = (r.gen_range(1..=3u8), r.gen_range(0..=4u8));
        let x = random_vkgra(&mut r, m, n, 3, 1);
        if x.is_zero() {
            continue;
        }
        samples += 1;
        bad += (vkgra_sigma_pow(&x, n as usize + 1) != x) as usize;
        bad += (vkgra_sigma(&vkgra_differential(&x)) != vkgra_differential(&vkgra_sigma(&x))) as usize;
        let k = r.gen_range(1..=2);
        let g = FormalSum::term(gra.basis(k).choose(&mut r).expect("nonempty").clone());
        let i = r.gen_range(1..=m);
        let lhs = csc_compose(&vkgra_sigma(&x), i, &g).expect("slot in range");
        let rhs = vkgra_sigma(&csc_compose(&x, i, &g).expect("slot in range"));
        bad += (lhs != rhs) as usize;
    }
    (bad == 0, format!("{gens} generators, {samples} random monomials, {bad} violations"))
}

fn c7_tadpoles(_: u64) -> (bool, String) {
    let gra = Gra { max_edges: 3 };
    let mut checked = 0;
    let mut bad = 0;
    for n in 1..=3 {
        for g in gra.basis(n) {
            checked += 1;
            match gra_delta(&FormalSum::term(g)) {
                Ok(d) => bad += !gra_delta(&d).map(|dd| dd.is_zero()).unwrap_or(false) as usize,
                Err(_) => bad += 1,
            }
        }
    }
    (bad == 0, format!("{checked} graphs, {bad} violations"))
}

fn rand_pv(r: &mut ChaCha8Rng, d: usize, max_xi: u32) -> Polyvector {
    let k = r.gen_range(0..=max_xi.min(d as u32));
    random_polyvector(r, d, 2, k, 3)
}

fn pv_deg(x: &Polyvector) -> i64 {
    x.xi_degree() as i64
}

fn c8_representation(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 8);
    let gra = Gra { max_edges: 2 };
    let graphs: Vec<GraphSum> = (1..=3).flat_map(|n| gra.basis(n)).map(FormalSum::term).collect();
    let mut tuples = 0;
    let mut bad = 0;
    for a in &graphs {
        let p = first(a).m as usize;
        for b in &graphs {
            let q = first(b).m as usize;
            if p + q - 1 > 3 {
                continue;
            }
            let eb = first(b).edges.len() as i64;
            for i in 1..=p {
                tuples += 1;
                let xs: Vec<Polyvector> = (0..p + q - 1).map(|_| rand_pv(&mut r, 2, 2)).collect();
                let lhs = gra_act(&gra.compose(a, i, b), &xs).expect("arity matches");
                let inner = gra_act(b, &xs[i - 1..i - 1 + q]).expect("arity matches");
                let mut outer = xs[..i - 1].to_vec();
                outer.push(inner);
                outer.extend(xs[i - 1 + q..].iter().cloned());
                let koszul = xs[..i - 1].iter().map(pv_deg).sum::<i64>() * eb;
                let rhs = gra_act(a, &outer).expect("arity matches").scaled(&sgn(koszul));
                bad += (lhs != rhs) as usize;
            }
        }
    }
    (bad == 0 && tuples >= 50, format!("{} graphs, {tuples} tuples, {bad} violations", graphs.len()))
}

fn c9_equivariance(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 9);
    let mut checked = 0;
    let mut bad = 0;
    while checked < 60 {
        let (m, n) = (r.gen_range(1..=2u8), r.gen_range(1..=3u8));
        let mut edges = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let s = r.gen_range(1..=m);
            let t = if r.gen_bool(0.6) { Vtx::II(r.gen_range(1..=n)) } else { Vtx::I(r.gen_range(1..=m)) };
            edges.push((s, t));
        }
        let g = Graph::signed(m, n, edges, vec![0; m as usize]);
        if g.is_zero() {
            continue;
        }
        checked += 1;
        let xs: Vec<Polyvector> = (0..m).map(|_| rand_pv(&mut r, 2, 2)).collect();
        bad += !action_equivariant(&g, &xs).unwrap_or(false) as usize;
    }
    let with_tad = Graph::signed(1, 1, vec![(1, Vtx::II(1)), (1, Vtx::I(1))], vec![0]);
    let without = Graph::signed(1, 1, vec![(1, Vtx::II(1))], vec![0]);
    for _ in 0..30 {
        let x = random_polyvector(&mut r, 2, 3, 2, 3);
        let lhs = vkgra_act(&with_tad, &[x.clone()]).expect("arity 1");
        let rhs = vkgra_act(&without, &[divergence(&x)]).expect("arity 1");
        bad += (lhs != rhs) as usize;
    }
    (bad == 0, format!("{checked} equivariance samples, 30 tadpole samples, {bad} violations"))
}

fn c10_bv(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 10);
    let dv = divergence;
    let br = |a: &Polyvector, b: &Polyvector| lie_bracket(a, b).expect("same dimension");
    let mut bad = 0;
    for _ in 0..50 {
        let (a, b, c) = (rand_pv(&mut r, 3, 3), rand_pv(&mut r, 3, 3), rand_pv(&mut r, 3, 3));
        let (da, db) = (pv_deg(&a), pv_deg(&b));
        bad += !dv(&dv(&a)).is_zero() as usize;
        let seven = dv(&a.wedge(&b).wedge(&c))
            .minus(&dv(&a.wedge(&b)).wedge(&c))
            .minus(&a.wedge(&dv(&b.wedge(&c))).scaled(&sgn(da)))
            .minus(&b.wedge(&dv(&a.wedge(&c))).scaled(&sgn((da + 1) * db)))
            .plus(&dv(&a).wedge(&b).wedge(&c))
            .plus(&a.wedge(&dv(&b)).wedge(&c).scaled(&sgn(da)))
            .plus(&a.wedge(&b).wedge(&dv(&c)).scaled(&sgn(da + db)));
        bad += !seven.is_zero() as usize;
        let lhs = dv(&br(&a, &b));
        let rhs = br(&dv(&a), &b).plus(&br(&a, &dv(&b)).scaled(&sgn(da - 1)));
        bad += (lhs != rhs) as usize;
        // graded Jacobi in shifted degrees
        let (sa, sb) = (da - 1, db - 1);
        let lhs = br(&a, &br(&b, &c));
        let rhs = br(&br(&a, &b), &c).plus(&br(&b, &br(&a, &c)).scaled(&sgn(sa * sb)));
        bad += (lhs != rhs) as usize;
    }
    (bad == 0, format!("50 triples, {bad} violations"))
}

fn c11_hochschild(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 11);
    let mut bad = 0;
    let mu2 = MultiDiffOp::mu(2);
    bad += !gerst_bracket(&mu2, &mu2).expect("same dimension").is_zero() as usize;
    for _ in 0..50 {
        let (n, d) = (r.gen_range(1..=3), r.gen_range(1..=2));
        let op = random_op(&mut r, d, n, 2, 2, 3);
        bad += !hochschild_d(&hochschild_d(&op)).is_zero() as usize;
    }
    let samples: Vec<MultiDiffOp> = (0..10).map(|k| random_op(&mut r, 2, 1 + k % 2, 1, 2, 2)).collect();
    let rep = check_dpoly_sigma_closed(&samples);
    bad += rep.bracket_failures + rep.dhoch_failures;
    for _ in 0..50 {
        let d = r.gen_range(2..=3);
        let k = r.gen_range(0..=d as u32);
        let x = random_polyvector(&mut r, d, 2, k, 3);
        bad += !hochschild_d(&hkr(&x)).is_zero() as usize;
    }
    (bad == 0, format!("50 d² samples, {} σ-closure checks, 50 HKR samples, {bad} violations", rep.checked))
}

fn tagged(b: &GraphSum, r: u32) -> FormalSum<(Graph, u32)> {
    b.map_linear(|k| FormalSum::term((k.clone(), r)))
}

fn c12_functors(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 12);
    let gra = ConcreteGer::gra();
    let (cct, ccm) = (CcTheta::new(&gra, 3).expect("ρ"), CcMinus::new(&gra, 3).expect("Δ"));
    let mut pool = Vec::new();
    for b in (1..=2).flat_map(ConcreteGer::basis) {
        for p in 0..=1 {
            pool.push(tagged(&b, p));
        }
    }
    let mut bad = 0;
    let mut triples = 0;
    for cc in 0..2 {
        let elems: Vec<_> = pool.choose_multiple(&mut r, 6).cloned().collect();
        let rep = if cc == 0 { check_associativity(&cct, &elems) } else { check_associativity(&ccm, &elems) };
        triples += elems.len().pow(3);
        bad += rep.violations.len();
    }
    // the CCᶿ(Gra) action on vKGra, glued twice versus composed first
    let g2: Vec<GraphSum> = Gra { max_edges: 2 }.basis(2).into_iter().map(FormalSum::term).collect();
    let mut csc = 0;
    while csc < 200 {
        let n = r.gen_range(1..=2);
        let x = random_vkgra(&mut r, 2, n, 3, 1);
        if x.is_zero() {
            continue;
        }
        csc += 1;
        let (a, b) = (g2.choose(&mut r).expect("nonempty"), g2.choose(&mut r).expect("nonempty"));
        let (p, q) = (r.gen_range(0..=1u32), r.gen_range(0..=1u32));
        let j = r.gen_range(1..=2u8);
        let lhs = cc_theta_act(&cc_theta_act(&x, 1, a, p).expect("slot"), j, b, q).expect("slot");
        let ab = cct.compose(&tagged(a, p), j as usize, &tagged(b, q));
        let rhs = cc_theta_act(&x, 1, &ab.map_linear(|k| FormalSum::term(k.0.clone())), p + q).expect("slot");
        bad += (lhs != rhs) as usize;
    }
    // CCᶿ → (ker Δ, d) → CC⁻
    let mut maps = 0;
    let elems: Vec<_> = (1..=3).flat_map(ConcreteGer::basis).flat_map(|b| [tagged(&b, 0), tagged(&b, 1)]).collect();
    let sample: Vec<_> = elems.choose_multiple(&mut r, 8).cloned().collect();
    for x in &sample {
        maps += 1;
        bad += !cc_theta_to_ker(&gra, &cct.d(x)).is_zero() as usize;
        for y in &sample {
            for i in 1..=cct.arity(&x.keys().next().expect("nonzero").clone()) {
                maps += 1;
                let lhs = cc_theta_to_ker(&gra, &cct.compose(x, i, y));
                let rhs = gra.compose(&cc_theta_to_ker(&gra, x), i, &cc_theta_to_ker(&gra, y));
                bad += (lhs != rhs) as usize;
            }
        }
    }
    let ker: Vec<GraphSum> = (2..=3).flat_map(ConcreteGer::basis).map(|b| gra.rho(&b).expect("ρ")).filter(|x| !x.is_zero()).collect();
    for a in &ker {
        maps += 1;
        let img = ker_to_cc_minus::<Gra>(a);
        bad += (ccm.d(&img) != ker_to_cc_minus::<Gra>(&gra.d(a))) as usize;
        for b in ker.iter().take(4) {
            for i in 1..=first(a).m as usize {
                maps += 1;
                bad += (ker_to_cc_minus::<Gra>(&gra.compose(a, i, b)) != ccm.compose(&img, i, &ker_to_cc_minus::<Gra>(b))) as usize;
            }
        }
    }
    (bad == 0, format!("{triples} operad triples, {csc} CSC triples, {maps} map checks, {bad} violations"))
}

fn random_twisted_vk(r: &mut ChaCha8Rng) -> GraphSum {
    let m = r.gen_range(1..=3u8);
    let k = r.gen_range(0..m);
    let n = r.gen_range(1..=3u8);
    let mut edges = vec![];
    for _ in 0..r.gen_range(0..=4) {
        let s = r.gen_range(1..=m);
        let t = if r.gen_bool(0.5) { Vtx::II(r.gen_range(1..=n)) } else { Vtx::I(r.gen_range(1..=m)) };
        edges.push((s, t));
    }
    let v = (0..m).map(|_| r.gen_bool(0.2) as u8).collect();
    match Graph::canonical(m, n, k, edges, v) {
        Some((g, s)) => GraphSum::single(g, qi(s)),
        None => GraphSum::zero(),
    }
}

fn c13_twisting(seed: u64) -> (bool, String) {
    let mut r = rng(seed, 13);
    let gra = Gra { max_edges: 3 };
    let tw = tw_gra(&gra, 2);
    let mut ok = true;
    let mut interior = 0;
    for n in 1..=3 {
        let rep = check_tw_square(&tw, n);
        ok &= rep.pass();
        interior += rep.interior_checked;
    }
    let ger = ger_to_graphs_check(3);
    ok &= ger.pass();
    let images: Vec<usize> = ger.arities.iter().map(|a| a.images).collect();
    let f = vkgraphs_sigma_filter;
    let mut bad = 0;
    for _ in 0..200 {
        let x = random_twisted_vk(&mut r);
        let fx = f(&x);
        bad += (f(&fx) != fx) as usize;
        let s = suspended_sigma(&fx);
        bad += (f(&s) != vkgraphs_quotient(&s)) as usize;
    }
    ok &= bad == 0;
    (ok, format!("{interior} interior elements, Ger images {images:?}, 200 filter samples, {bad} filter violations"))
}

type Criterion = (usize, &'static str, fn(u64) -> (bool, String));

const CRITERIA: [Criterion; 13] = [
    (1, "Grav dimensions", c1_grav_dims),
    (2, "exactness of R on Ger", c2_exactness),
    (3, "HC⁻ of Ger", c3_hc_minus),
    (4, "homology of M_circ and M", c4_m_circ_homology),
    (5, "rotational law on M", c5_rotational_m),
    (6, "vKGra well-definedness", c6_vkgra),
    (7, "tadpole cancellation", c7_tadpoles),
    (8, "representation laws", c8_representation),
    (9, "cyclic equivariance of the action", c9_equivariance),
    (10, "BV package on T_poly(R³)", c10_bv),
    (11, "Hochschild package", c11_hochschild),
    (12, "functor axioms", c12_functors),
    (13, "twisting", c13_twisting),
];

fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|&(id, title, f)| {
            let (pass, detail) = f(seed);
            Outcome { id, title, pass, detail }
        })
        .collect()
}

fn line(o: &Outcome) -> String {
    format!("{} criterion {}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.id, o.title, o.detail)
}

#[test]
fn acceptance() {
    let first_run = run_all(SEED);
    for o in &first_run {
        println!("{}", line(o));
    }
    let again = run_all(SEED);
    let same = first_run.iter().zip(&again).all(|(a, b)| line(a) == line(b));
    let det = Outcome { id: 14, title: "determinism", pass: same, detail: format!("{} reports rerun with seed {SEED}", again.len()) };
    println!("{}", line(&det));
    let failed: Vec<usize> = first_run.iter().chain([&det]).filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
