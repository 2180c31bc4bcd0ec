use opcyc::exactla::{qi, FormalSum};
use opcyc::graphops::*;
use opcyc::operad::Operad;
use opcyc::poly::*;
use opcyc::twist::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn k_zero_is_the_base() {
    let gra = Gra { max_edges: 2 };
    let tw = tw_gra(&gra, 0);
    for n in 1..=3 {
        let basis = tw.basis(n, 0);
        assert_eq!(basis.len(), gra.basis(n).len());
        for t in &basis {
            let dx = tw.d(&FormalSum::term(t.clone()));
            // Gra carries no internal differential; every twisting term overflows
            assert!(dx.interior.is_zero());
        }
    }
}

#[test]
fn missing_lie_generator() {
    let gra = Gra { max_edges: 2 };
    assert_eq!(tw_operad(&gra, None, 2).err(), Some(TwistError::NoLieMap));
    assert_eq!(tw_operad(&gra, Some(FormalSum::zero()), 2).err(), Some(TwistError::NoLieMap));
    assert_eq!(tw_operad(&gra, Some(FormalSum::term(Graph::edgeless(3))), 2).err(), Some(TwistError::NoLieMap));
}

#[test]
fn internal_vertices_are_symmetric() {
    let gra = Gra { max_edges: 4 };
    let tw = tw_gra(&gra, 2);
    assert_eq!(tw.internal_degree(), 2);
    // swapping the internal vertices of 1→2, 1→3 swaps the two odd edges
    assert!(tw.canon_sum(&Graph::gra(3, &[(1, 2), (1, 3)]), 2).is_zero());
    // relabelings by the swap are identified
    let x = tw.canon_sum(&Graph::gra(3, &[(1, 2), (2, 3)]), 2);
    let y = tw.canon_sum(&Graph::gra(3, &[(1, 3), (3, 2)]), 2);
    assert_eq!(x, y);
    let z = tw.canon_sum(&Graph::gra(3, &[(2, 3), (3, 2)]), 2);
    assert!(z.is_zero());
}

#[test]
fn twisted_differential_squares_to_zero() {
    let gra = Gra { max_edges: 3 };
    let tw = tw_gra(&gra, 2);
    for n in 1..=3 {
        let rep = check_tw_square(&tw, n);
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.interior_checked > 0);
        assert!(rep.boundary_elements > 0 && rep.overflow_terms > 0);
    }
}

#[test]
fn truncation_is_stable_on_the_interior() {
    let gra = Gra { max_edges: 3 };
    let (t2, t3) = (tw_gra(&gra, 2), tw_gra(&gra, 3));
    for n in 1..=2 {
        for k in 0..2 {
            for t in t2.basis(n, k) {
                let x = FormalSum::term(t);
                assert_eq!(t2.d(&x).interior, t3.d(&x).interior);
            }
        }
    }
}

#[test]
fn ger_images_are_independent_cycles() {
    let rep = ger_to_graphs_check(3);
    assert!(rep.pass(), "{rep:?}");
    let sizes: Vec<(usize, usize)> = rep.arities.iter().map(|a| (a.n, a.images)).collect();
    assert_eq!(sizes, vec![(2, 2), (3, 6)]);
    assert!(rep.delta_compatible);
}

fn graphs_elements(n: usize, max_edges: usize) -> Vec<TwEl<Graph>> {
    let gra = Gra { max_edges };
    let tw = tw_gra(&gra, 3);
    let mut out = Vec::new();
    for k in 0..=1 {
        for t in tw.basis(n, k) {
            let x = tw.canon_sum(&undirected(&FormalSum::term(t.key.clone())), k);
            if !x.is_zero() && graphs_filter(&x) == x {
                out.push(x);
            }
        }
    }
    out.sort_by(|a, b| a.keys().next().cmp(&b.keys().next()));
    out.dedup();
    out
}

#[test]
fn differential_preserves_graphs_on_undirected_elements() {
    let gra = Gra { max_edges: 6 };
    let tw = tw_gra(&gra, 3);
    let mut nontrivial = 0;
    for n in 2..=3 {
        let xs = graphs_elements(n, 4);
        assert!(!xs.is_empty());
        for x in &xs {
            let dx = tw.d(x).interior;
            assert_eq!(graphs_filter(&dx), dx, "x = {x:?}");
            if !dx.is_zero() {
                nontrivial += 1;
            }
        }
    }
    assert!(nontrivial > 0);
    // the tripod is a cycle
    let tri = tw.canon_sum(&undirected(&Graph::gra(4, &[(4, 1), (4, 2), (4, 3)])), 1);
    assert!(tw.d(&tri).interior.is_zero());
}

#[test]
fn directed_tripod_leaves_graphs() {
    // without symmetrizing the edges the bivalent terms survive
    let gra = Gra { max_edges: 6 };
    let tw = tw_gra(&gra, 2);
    let tri = tw.canon_sum(&Graph::gra(4, &[(4, 1), (4, 2), (4, 3)]), 1);
    let dx = tw.d(&tri).interior;
    assert!(!dx.is_zero());
    assert!(graphs_filter(&dx).is_zero());
}

fn vk(m: u8, k: u8, n: u8, edges: Vec<(u8, Vtx)>, v: Vec<u8>) -> GraphSum {
    match Graph::canonical(m, n, k, edges, v) {
        Some((g, s)) => GraphSum::single(g, qi(s)),
        None => GraphSum::zero(),
    }
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
    vk(m, k, n, edges, v)
}

#[test]
fn vkgraphs_filter_examples() {
    // isolated internal vertex
    let iso = vk(2, 1, 1, vec![(1, Vtx::II(1))], vec![0, 0]);
    assert!(vkgraphs_sigma_filter(&iso).is_zero());
    // purely external with a type-I vertex
    let ext = vk(2, 0, 2, vec![(1, Vtx::II(1)), (2, Vtx::I(1))], vec![1, 0]);
    assert_eq!(vkgraphs_sigma_filter(&ext), ext);
    // no external type-I vertex
    let none = vk(1, 1, 1, vec![(1, Vtx::II(1))], vec![0]);
    assert!(vkgraphs_sigma_filter(&none).is_zero());
    // internal vertex with one outgoing edge, or one edge each way
    let out1 = vk(2, 1, 1, vec![(1, Vtx::II(1)), (2, Vtx::II(1))], vec![0, 0]);
    assert!(vkgraphs_sigma_filter(&out1).is_zero());
    let pass = vk(2, 1, 1, vec![(1, Vtx::I(2)), (2, Vtx::II(1))], vec![0, 0]);
    assert!(vkgraphs_sigma_filter(&pass).is_zero());
    // internal vertex with one incoming edge is allowed
    let inc = vk(2, 1, 1, vec![(1, Vtx::I(2)), (1, Vtx::II(1))], vec![0, 0]);
    assert_eq!(vkgraphs_sigma_filter(&inc), inc);
    // tadpole or v-power at an internal vertex
    let tad = vk(2, 1, 1, vec![(1, Vtx::I(2)), (2, Vtx::I(2)), (1, Vtx::II(1))], vec![0, 0]);
    assert!(vkgraphs_sigma_filter(&tad).is_zero());
    let vpow = vk(2, 1, 1, vec![(1, Vtx::I(2)), (1, Vtx::II(1))], vec![0, 1]);
    assert!(vkgraphs_sigma_filter(&vpow).is_zero());
}

#[test]
fn vkgraphs_filter_is_linear_idempotent_and_sigma_stable() {
    let mut r = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let x = random_twisted_vk(&mut r);
        let y = random_twisted_vk(&mut r);
        let f = vkgraphs_sigma_filter;
        assert_eq!(f(&x.plus(&y.scaled(&qi(3)))), f(&x).plus(&f(&y).scaled(&qi(3))));
        assert_eq!(f(&f(&x)), f(&x));
        // σ keeps the admissible graphs inside the admissible span, modulo the quotient
        let s = suspended_sigma(&f(&x));
        assert_eq!(f(&s), vkgraphs_quotient(&s));
        let p = invariants_project(&f(&x));
        assert_eq!(f(&p), vkgraphs_quotient(&p));
    }
}

#[test]
fn vkgraphs_filter_does_not_commute_with_sigma() {
    // σ moves an edge onto an isolated internal vertex, producing admissible terms
    let iso = vk(2, 1, 1, vec![(1, Vtx::I(1)), (1, Vtx::II(1))], vec![0, 0]);
    assert!(vkgraphs_sigma_filter(&iso).is_zero());
    assert!(!vkgraphs_sigma_filter(&suspended_sigma(&iso)).is_zero());
}

#[test]
fn hochschild_differential_from_mu() {
    let host = DPolyLie { d: 2 };
    let dm = mc_twist_differential(&host, MultiDiffOp::mu(2)).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let n = r.gen_range(1..=2);
        let a = random_op(&mut r, 2, n, 1, 2, 2);
        assert_eq!(dm.apply(&a).terms, hochschild_d(&a).terms);
        assert!(dm.apply(&dm.apply(&a)).is_zero());
    }
}

fn rand_pv(r: &mut ChaCha8Rng, d: usize) -> Polyvector {
    let k = r.gen_range(0..=d as u32);
    random_polyvector(r, d, 2, k, 3)
}

fn sgn(n: i64) -> opcyc::Rational {
    if n.rem_euclid(2) == 0 {
        qi(1)
    } else {
        qi(-1)
    }
}

#[test]
fn poisson_differentials() {
    let mut r = ChaCha8Rng::seed_from_u64(33);
    let host2 = TPolyLie { d: 2 };
    let constant = Polyvector::monomial(2, qi(1), vec![0, 0], &[0, 1]);
    let linear = Polyvector::monomial(2, qi(1), vec![1, 0], &[0, 1]);
    for pi in [constant, linear] {
        let dp = mc_twist_differential(&host2, pi).unwrap();
        for _ in 0..25 {
            let (a, b) = (rand_pv(&mut r, 2), rand_pv(&mut r, 2));
            assert!(dp.apply(&dp.apply(&a)).is_zero());
            // derivation of the shifted bracket
            let lhs = dp.apply(&lie_bracket(&a, &b).unwrap());
            let rhs = lie_bracket(&dp.apply(&a), &b)
                .unwrap()
                .plus(&lie_bracket(&a, &dp.apply(&b)).unwrap().scaled(&sgn(a.xi_degree() as i64 - 1)));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn non_poisson_bivector_is_rejected() {
    // π = ξ₂ξ₃ + x₂ξ₁ξ₂ on ℝ³: {x₁,x₂} = x₂, {x₂,x₃} = 1, {x₁,x₃} = 0, so the
    // Jacobiator {x₃,{x₁,x₂}} + {x₁,{x₂,x₃}} + {x₂,{x₃,x₁}} = −1 ≠ 0
    let pi = Polyvector::monomial(3, qi(1), vec![0, 0, 0], &[1, 2]).plus(&Polyvector::monomial(3, qi(1), vec![0, 1, 0], &[0, 1]));
    let host = TPolyLie { d: 3 };
    match mc_twist_differential(&host, pi.clone()) {
        Err(TwistError::NotMaurerCartan(w)) => assert!(!w.is_empty()),
        _ => panic!("accepted a non-Poisson bivector"),
    }
    assert!(!lie_bracket(&pi, &pi).unwrap().is_zero());
}

#[test]
fn twisted_graph_json_lists_internal_vertices() {
    let gra = Gra { max_edges: 3 };
    let tw = tw_gra(&gra, 1);
    let x = tw.canon_sum(&Graph::gra(3, &[(3, 1), (3, 2), (1, 3)]), 1);
    let j = tw_graphs_to_json(&x);
    let entry = &j[0];
    assert_eq!(entry["internal"], serde_json::json!([3]));
    let (g, _) = Graph::from_json(entry).unwrap();
    assert_eq!(g.internal, 1);
}
