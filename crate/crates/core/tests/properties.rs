//! Invariants checked on seeded random instances.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subrank::engine::{insertion_oracle, rho, EngineState};
use subrank::linalg::{kernel_in_subspace, span_dim, FieldSpec, Matrix, DEFAULT_PRIME};
use subrank::partitions::{rho_bruteforce, rho_of_partition, SubspaceFamily};
use subrank::rigidity::{rigidity_rank_2d, RigidityMatrix};
use subrank::sfm::{
    maximality_closure, minimize_exhaustive, minimize_polynomial, minimizers_exhaustive, SfmBackend,
};
use subrank::symbolic::{
    evaluate_r2_matrix, evaluate_rk_matrix, randomized_rank, split_to_planes, R2Instance,
    RkInstance,
};
use subrank::verify::gen::{self, FamilyShape};

const FP: FieldSpec = FieldSpec::Prime(10007);

fn field_for(seed: u64) -> FieldSpec {
    if seed.is_multiple_of(2) {
        FieldSpec::Rationals
    } else {
        FP
    }
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c_values() -> impl Strategy<Value = BigRational> {
    prop_oneof![
        Just(frac(1, 2)),
        Just(frac(1, 1)),
        Just(frac(3, 2)),
        Just(frac(2, 1))
    ]
}

fn small_family(seed: u64) -> SubspaceFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen::random_family(&mut rng, field_for(seed), FamilyShape::SMALL)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_rank_ignores_row_order(seed: u64, rows in 1usize..7, cols in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = gen::random_matrix(&mut rng, field_for(seed), rows, cols);
        let (r, rank) = m.rref();
        prop_assert_eq!(r.rref(), (r.clone(), rank));
        prop_assert_eq!(rank, m.rank());
        let mut shuffled = m.to_rows();
        shuffled.shuffle(&mut rng);
        let p = Matrix::from_rows(m.field(), cols, shuffled).unwrap();
        prop_assert_eq!(p.rank(), rank);
        prop_assert_eq!(p.rref().0, r);
    }

    #[test]
    fn subspace_representation_is_canonical(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field_for(seed);
        let ambient = rng.gen_range(1..=7);
        let dim = rng.gen_range(1..=ambient);
        let s = gen::random_subspace(&mut rng, field, ambient, dim);
        let other = gen::sub_of(&mut rng, &s, dim);
        prop_assert_eq!(&other, &s);
        prop_assert_eq!(other.basis(), s.basis());
    }

    #[test]
    fn span_dim_is_bounded(seed: u64) {
        let f = small_family(seed);
        let d = span_dim(f.members()).unwrap();
        let largest = f.members().iter().map(|m| m.dim()).max().unwrap();
        prop_assert!(largest <= d);
        prop_assert!(d <= f.total_dim().min(f.ambient_dim()));
    }

    #[test]
    fn kernel_lies_in_subspace_and_annihilates_constraints(seed: u64, k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field_for(seed);
        let ambient = rng.gen_range(2..=7);
        let dim = rng.gen_range(1..=ambient);
        let f = gen::random_subspace(&mut rng, field, ambient, dim);
        let x = gen::random_matrix(&mut rng, field, k, ambient);
        let kernel = kernel_in_subspace(&f, &x).unwrap();
        prop_assert!(kernel.is_subspace_of(&f));
        prop_assert!(kernel.dim() + k >= f.dim());
        for w in kernel.basis().rows() {
            for row in x.rows() {
                prop_assert_eq!(field.dot(w, row), field.zero());
            }
        }
    }

    #[test]
    fn rho_is_the_minimum_over_partitions(seed: u64, c in c_values()) {
        let f = small_family(seed);
        let r = rho(&f, &c, SfmBackend::Auto).unwrap();
        prop_assert_eq!(rho_of_partition(&f, &r.partition, &c).unwrap(), r.value.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..10 {
            let pi = gen::random_partition(&mut rng, f.len());
            prop_assert!(rho_of_partition(&f, &pi, &c).unwrap() >= r.value);
        }
        let brute = rho_bruteforce(&f, &c).unwrap();
        prop_assert_eq!(brute.value, r.value);
        prop_assert_eq!(brute.partition, r.partition);
    }

    #[test]
    fn engine_ignores_insertion_order(seed: u64, c in c_values()) {
        let f = small_family(seed);
        let reference = rho(&f, &c, SfmBackend::Exhaustive).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let mut order: Vec<usize> = (0..f.len()).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            let mut state = EngineState::new(f.field(), f.ambient_dim(), c.clone());
            for &i in &order {
                state = state.insert_subspace(f.get(i), i, SfmBackend::Auto).unwrap();
            }
            prop_assert_eq!(state.value(), reference.value.clone());
            prop_assert_eq!(state.partition(), reference.partition.clone());
        }
    }

    #[test]
    fn splitting_into_planes_preserves_rho_one(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field_for(seed);
        let ambient = rng.gen_range(2..=6);
        let members = rng.gen_range(1..=4);
        let f = gen::random_family_in(&mut rng, field, ambient, members, 2, 3);
        let planes = split_to_planes(&f).unwrap();
        prop_assert!(planes.members().iter().all(|p| p.dim() == 2));
        let one = frac(1, 1);
        prop_assert_eq!(
            rho(&planes, &one, SfmBackend::Auto).unwrap().value,
            rho(&f, &one, SfmBackend::Auto).unwrap().value
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn minimizers_agree_and_closure_is_order_free(seed: u64, c in c_values()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = field_for(seed);
        let ambient = rng.gen_range(2..=6);
        let members = rng.gen_range(1..=12);
        let f = gen::random_family_in(&mut rng, field, ambient, members, 1, 2);
        let gdim = rng.gen_range(1..=2);
        let g = gen::random_subspace(&mut rng, field, ambient, gdim);
        let oracle = insertion_oracle(&f, &g, &c).unwrap();
        let exhaustive = minimize_exhaustive(&oracle).unwrap();
        let mnp = minimize_polynomial(&oracle).unwrap();
        prop_assert_eq!(&mnp.value, &exhaustive.value);
        prop_assert_eq!(&mnp.minimizer, &exhaustive.minimizer);

        let (_, all) = minimizers_exhaustive(&oracle).unwrap();
        let smallest = all.iter().min_by_key(|m| m.len()).unwrap();
        let mut order: Vec<usize> = (0..members).collect();
        let first = maximality_closure(&oracle, smallest, &order);
        prop_assert!(all.contains(&first));
        prop_assert!(smallest.iter().all(|i| first.contains(i)));
        for _ in 0..5 {
            order.shuffle(&mut rng);
            prop_assert_eq!(&maximality_closure(&oracle, smallest, &order), &first);
            prop_assert_eq!(
                &maximality_closure(&oracle, &exhaustive.minimizer, &order),
                &exhaustive.minimizer
            );
        }
    }
}

/// Ranks over the rationals and over `F_p` agree when every minor of the
/// integer matrix is smaller than `p`: 6x6 minors with entries in `[-9, 9]`
/// are below `720 · 9^6 < 2^61 - 1`.
#[test]
fn rational_and_modular_ranks_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fp = FieldSpec::Prime(DEFAULT_PRIME);
    for _ in 0..200 {
        let rows: Vec<Vec<i64>> = (0..6)
            .map(|_| {
                (0..6)
                    .map(|_| {
                        if rng.gen_bool(0.3) {
                            0
                        } else {
                            rng.gen_range(-9..=9)
                        }
                    })
                    .collect()
            })
            .collect();
        let q = Matrix::from_i64_rows(FieldSpec::Rationals, 6, &rows).unwrap();
        let p = Matrix::from_i64_rows(fp, 6, &rows).unwrap();
        assert_eq!(q.rank(), p.rank(), "{rows:?}");
    }
}

#[test]
fn rk_of_order_two_is_r2() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let r2 = gen::random_r2(&mut rng, 8, 6);
        let n = r2.ambient_dim();
        if n < 3 {
            continue;
        }
        let tensors = r2
            .rows()
            .iter()
            .map(|(u, v)| vec![u.clone(), v.clone()])
            .collect();
        let rk = RkInstance::new(r2.field(), n, 2, tensors).unwrap();
        let x = gen::uniform_vector(&mut rng, r2.field(), n);
        assert_eq!(
            evaluate_rk_matrix(&rk, std::slice::from_ref(&x)).unwrap(),
            evaluate_r2_matrix(&r2, &x).unwrap()
        );
    }
}

#[test]
fn r2_evaluation_is_skew() {
    // (v uᵀ - u vᵀ) x is orthogonal to x
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let r2: R2Instance = gen::random_r2(&mut rng, 8, 6);
        let x = gen::uniform_vector(&mut rng, r2.field(), r2.ambient_dim());
        let m = evaluate_r2_matrix(&r2, &x).unwrap();
        for row in m.rows() {
            assert_eq!(r2.field().dot(row, &x), r2.field().zero());
        }
    }
}

#[test]
fn rigidity_rank_matches_random_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let fp = FieldSpec::Prime(DEFAULT_PRIME);
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let density = rng.gen_range(0.2..0.9);
        let g = gen::random_graph(&mut rng, n, density);
        let m = RigidityMatrix::new(g.clone(), 2, FieldSpec::Rationals);
        let exact = rigidity_rank_2d(&g).unwrap();
        assert_eq!(
            exact,
            randomized_rank(&m, fp, 5, &mut rng).unwrap(),
            "{g:?}"
        );
        assert!(exact <= 2 * n - 3);
    }
}

#[test]
fn rigidity_rank_is_monotone_under_edge_addition() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let n = rng.gen_range(3..=8);
        let g = gen::random_graph(&mut rng, n, 0.3);
        let missing: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        let Some(&(u, v)) = missing.choose(&mut rng) else {
            continue;
        };
        let before = rigidity_rank_2d(&g).unwrap();
        let after = rigidity_rank_2d(&g.with_edge(u, v).unwrap()).unwrap();
        assert!(before <= after && after <= before + 1, "{g:?} + ({u}, {v})");
    }
}
