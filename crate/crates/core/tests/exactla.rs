use opcyc::exactla::*;
use opcyc::operad::ger_mixed_complex;
use proptest::prelude::*;

/// Dense Gauss-Jordan over Q, kept deliberately naive as an oracle.
fn dense_rank(rows: usize, cols: usize, entries: &[(usize, usize, Rational)]) -> usize {
    let mut a = vec![vec![Rational::from_integer(0.into()); cols]; rows];
    for (r, c, v) in entries {
        a[*r][*c] += v;
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != qi(0)) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][c] != qi(0) {
                let f = &a[r][c] / &a[rank][c];
                for k in 0..cols {
                    let t = &f * &a[rank][k];
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize, Rational)>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        let entry = (0..r, 0..c, -3i64..4, 1i64..3).prop_map(|(i, j, n, d)| (i, j, q(n, d)));
        (Just(r), Just(c), prop::collection::vec(entry, 0..12))
    })
}

fn build(r: usize, c: usize, t: &[(usize, usize, Rational)]) -> SparseMatrix {
    let mut m = SparseMatrix::new(r, c);
    for (i, j, v) in t {
        m.add(*i, *j, v.clone());
    }
    m
}

#[test]
fn rank_examples() {
    assert_eq!(rank(&SparseMatrix::new(3, 3)), 0);
    assert_eq!(rank(&SparseMatrix::identity(4)), 4);
    // R on Ger(2) in the basis {μ, b}: R(μ) = b, R(b) = 0
    let r = SparseMatrix::from_triplets(2, 2, &[(1, 0, qi(1))]).unwrap();
    assert_eq!(rank(&r), 1);
}

#[test]
fn homology_examples() {
    let z = SparseMatrix::new(5, 0);
    assert_eq!(homology_dims(&z, &SparseMatrix::new(0, 5)).unwrap(), 5);
    let iso = SparseMatrix::identity(1);
    assert_eq!(homology_dims(&SparseMatrix::new(1, 0), &iso).unwrap(), 0);
    assert_eq!(homology_dims(&iso, &SparseMatrix::new(0, 1)).unwrap(), 0);
    assert_eq!(homology_dims(&iso, &iso), Err(LaError::CompositionNotZero));
    assert!(matches!(homology_dims(&iso, &SparseMatrix::new(1, 2)), Err(LaError::DimensionMismatch(_))));
}

#[test]
fn kernel_examples() {
    assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
    assert_eq!(kernel_basis(&SparseMatrix::new(2, 2)).len(), 2);
    // R on Ger(3) in the coordinates of its explicit basis
    let r = ger_mixed_complex(3);
    assert_eq!(kernel_basis(r.delta()).len(), 3);
}

#[test]
fn matrix_json_shape() {
    let m = SparseMatrix::from_triplets(2, 3, &[(0, 2, q(-1, 2))]).unwrap();
    assert_eq!(serde_json::to_string(&m.to_json()).unwrap(), r#"{"rows":2,"cols":3,"entries":[[0,2,"-1/2"]]}"#);
    assert_eq!(SparseMatrix::from_triplets(1, 1, &[(1, 0, qi(1))]), Err(LaError::OutOfBounds(1, 0)));
}

proptest! {
    #[test]
    fn rank_matches_dense_oracle((r, c, t) in matrix()) {
        prop_assert_eq!(rank(&build(r, c, &t)), dense_rank(r, c, &t));
    }

    #[test]
    fn rank_nullity_and_kernel((r, c, t) in matrix()) {
        let m = build(r, c, &t);
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + ker.len(), c);
        for v in &ker {
            let x = v.iter().enumerate().filter(|(_, a)| **a != qi(0)).map(|(i, a)| (i, a.clone())).collect();
            prop_assert!(m.apply(&x).is_empty());
        }
    }

    #[test]
    fn rank_is_permutation_invariant((r, c, t) in matrix(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut g = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..r).collect();
        let mut cp: Vec<usize> = (0..c).collect();
        rp.shuffle(&mut g);
        cp.shuffle(&mut g);
        let m = build(r, c, &t);
        prop_assert_eq!(rank(&m.permuted(&rp, &cp)), rank(&m));
    }

    #[test]
    fn formal_sums_are_linear(a in prop::collection::vec((0u8..5, -4i64..5), 0..6), b in prop::collection::vec((0u8..5, -4i64..5), 0..6), n in -3i64..4) {
        let mk = |v: &[(u8, i64)]| {
            let mut s = FormalSum::zero();
            for &(k, c) in v {
                s.add_int(k, c);
            }
            s
        };
        let (x, y) = (mk(&a), mk(&b));
        prop_assert!(x.iter().all(|(_, c)| *c != qi(0)));
        prop_assert_eq!(x.plus(&y).scaled(&qi(n)), x.scaled(&qi(n)).plus(&y.scaled(&qi(n))));
        prop_assert!(x.minus(&x).is_zero());
    }

    #[test]
    fn rationals_roundtrip(n in -1000i64..1000, d in 1i64..1000) {
        let x = q(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x);
    }
}
